#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "catbench/catalysis.hpp"
#include "catbench/certificate.hpp"
#include "catbench/ergotropy.hpp"

using namespace catbench;

namespace {

cmat pauli_z() {
  cmat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

cmat pauli_y() {
  cmat m(2, 2);
  m << 0, complexd(0, -1), complexd(0, 1), 0;
  return m;
}

/// eigenstate pair that makes the stationarity ratios consistent: battery in
/// the excited sigma_z level, catalyst in the excited eigenstate of its own
/// (complex-eigenvector) Hamiltonian
struct ConsistentInstance {
  DensityMatrix rho_b;
  DensityMatrix rho_c;
  HermitianOperator h_b;
  HermitianOperator h_c;
};

ConsistentInstance consistent_instance(double h_c_scale) {
  rvec excited(2);
  excited << 1.0, 0.0;
  cvec plus_y(2);
  plus_y << 1.0 / std::sqrt(2.0), complexd(0, 1.0) / std::sqrt(2.0);
  return ConsistentInstance{DensityMatrix::diagonal(excited),
                            DensityMatrix::pure(plus_y),
                            HermitianOperator(pauli_z()),
                            HermitianOperator(h_c_scale * pauli_y())};
}

double min_eig_sym(const cmat& m) {
  cmat s = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<cmat> solver(s, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("choi pair of a fully diagonal instance") {
  HermitianOperator h(pauli_z());
  DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  ChoiPair pair = build_choi_pair(h, h, mixed, mixed);
  CHECK(pair.c.dim() == 16);

  cmat expected = detail::kron(detail::kron(pauli_z(), cmat::Identity(2, 2)),
                               cmat::Identity(4, 4) / 4.0);
  CHECK(max_abs(pair.c.matrix() - expected) == 0.0);
  CHECK(std::abs(pair.c.matrix().trace()) < 1e-14);  // tr[A] tr[rho^T] = 0 here
}

TEST_CASE("choi pair uses the transpose of the joint state") {
  Rng rng(51);
  DensityMatrix rho_b = random_density(2, rng);
  DensityMatrix rho_c = random_density(2, rng);
  HermitianOperator h_b = random_hermitian(2, rng);
  HermitianOperator h_c = random_hermitian(2, rng);
  ChoiPair pair = build_choi_pair(h_b, h_c, rho_b, rho_c);

  cmat joint_t = detail::kron(rho_b.matrix(), rho_c.matrix()).transpose();
  cmat expected_c =
      detail::kron(detail::kron(h_b.matrix(), cmat::Identity(2, 2)), joint_t);
  cmat expected_cp =
      detail::kron(detail::kron(cmat::Identity(2, 2), h_c.matrix()), joint_t);
  CHECK(max_abs(pair.c.matrix() - expected_c) < 1e-15);
  CHECK(max_abs(pair.c_prime.matrix() - expected_cp) < 1e-15);
  // the transpose matters: using the adjoint instead would flip imaginary parts
  cmat wrong = detail::kron(detail::kron(h_b.matrix(), cmat::Identity(2, 2)),
                            detail::kron(rho_b.matrix(), rho_c.matrix()));
  CHECK(max_abs(pair.c.matrix() - wrong) > 1e-3);

  // trace factorizes: tr[C] = tr[H_B (x) 1] * tr[rho^T]
  CHECK(std::abs(pair.c.matrix().trace() -
                 detail::kron(h_b.matrix(), cmat::Identity(2, 2)).trace()) < 1e-12);

  CHECK_THROWS_WITH_AS(
      build_choi_pair(random_hermitian(4, rng), random_hermitian(3, rng),
                      random_density(4, rng), random_density(3, rng)),
      doctest::Contains("choi.dim"), validation_error);
}

TEST_CASE("multiplier is degenerate on fully diagonal instances") {
  rvec pops(2);
  pops << 0.3, 0.7;
  ChoiPair pair = build_choi_pair(HermitianOperator(pauli_z()),
                                  HermitianOperator(0.7 * pauli_z()),
                                  DensityMatrix::diagonal(pops),
                                  DensityMatrix::maximally_mixed(2));
  MultiplierEstimate m = lagrange_multiplier_x(pair);
  CHECK(m.degenerate);
  CHECK(m.x == 0.0);
}

TEST_CASE("multiplier is finite and consistent on an eigenstate instance") {
  for (double scale : {1.0, 0.7, -2.5}) {
    ConsistentInstance inst = consistent_instance(scale);
    ChoiPair pair = build_choi_pair(inst.h_b, inst.h_c, inst.rho_b, inst.rho_c);
    MultiplierEstimate m = lagrange_multiplier_x(pair);
    CHECK_FALSE(m.degenerate);
    CHECK(m.x == doctest::Approx(1.0 / scale).epsilon(1e-12));
    CHECK(m.spread <= 1e-8);
  }
}

TEST_CASE("multiplier scales inversely with the catalyst Hamiltonian") {
  ConsistentInstance inst = consistent_instance(1.0);
  double x1 =
      lagrange_multiplier_x(build_choi_pair(inst.h_b, inst.h_c, inst.rho_b, inst.rho_c)).x;
  HermitianOperator scaled(3.0 * inst.h_c.matrix());
  double x3 =
      lagrange_multiplier_x(build_choi_pair(inst.h_b, scaled, inst.rho_b, inst.rho_c)).x;
  CHECK(x1 / x3 == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("generic instances report their ratio inconsistency") {
  Rng rng(52);
  ChoiPair pair =
      build_choi_pair(HermitianOperator(pauli_z()), HermitianOperator(0.7 * pauli_z()),
                      random_density(2, rng), random_density(2, rng));
  MultiplierEstimate m = lagrange_multiplier_x(pair);
  CHECK_FALSE(m.degenerate);
  Tolerances tol;
  CHECK(m.spread > tol.x_spread);  // flagged unreliable, still evaluated
}

TEST_CASE("tilde transform fixed points and delta structure") {
  CHECK(max_abs(tilde_transform(RawOperator(cmat::Identity(9, 9)), 3).matrix() -
                cmat::Identity(9, 9)) == 0.0);

  // a single entry at ((i0,i0),(bp,b)) spreads over the alpha diagonal
  const int d = 3;
  cmat a = cmat::Zero(9, 9);
  const int i0 = 1, bp = 2, b = 0;
  a(i0 * d + i0, bp * d + b) = complexd(0.3, -0.4);
  cmat t = tilde_transform(RawOperator(a), d).matrix();
  for (int alpha = 0; alpha < d; ++alpha)
    CHECK(std::abs(t(alpha * d + bp, alpha * d + b) - complexd(0.3, -0.4)) == 0.0);
  CHECK(std::abs(t.sum() - complexd(0.9, -1.2)) < 1e-14);
}

TEST_CASE("tilde transform matches an index-loop oracle and is linear") {
  Rng rng(53);
  const int d = 3;
  cmat a = random_gaussian_matrix(d * d, rng);
  cmat b = random_gaussian_matrix(d * d, rng);

  // independent brute-force evaluation of <a'b'|~A|ab>
  auto oracle = [d](const cmat& m) {
    cmat out = cmat::Zero(d * d, d * d);
    for (int ap = 0; ap < d; ++ap)
      for (int bp = 0; bp < d; ++bp)
        for (int al = 0; al < d; ++al)
          for (int be = 0; be < d; ++be) {
            if (al != ap) continue;
            complexd sum = 0;
            for (int i = 0; i < d; ++i) sum += m(i * d + i, bp * d + be);
            out(ap * d + bp, al * d + be) = sum;
          }
    return out;
  };
  CHECK(max_abs(tilde_transform(RawOperator(a), d).matrix() - oracle(a)) < 1e-13);

  cmat lhs = tilde_transform(RawOperator(2.5 * a + complexd(0, 1.5) * b), d).matrix();
  cmat rhs = 2.5 * tilde_transform(RawOperator(a), d).matrix() +
             complexd(0, 1.5) * tilde_transform(RawOperator(b), d).matrix();
  CHECK(max_abs(lhs - rhs) < 1e-13);

  CHECK_THROWS_AS(tilde_transform(RawOperator(cmat::Zero(5, 5)), 2), validation_error);
}

TEST_CASE("ground-state batteries certify passive for any fixed catalyst") {
  Rng rng(54);
  rvec ground(2);
  ground << 0.0, 1.0;  // lowest level of sigma_z
  for (int trial = 0; trial < 5; ++trial) {
    CertificateReport report =
        certify_passivity(DensityMatrix::diagonal(ground), HermitianOperator(pauli_z()),
                          random_real_density(2, rng), HermitianOperator(0.7 * pauli_z()));
    CHECK(report.passive);
    CHECK(report.min_eigenvalue >= -1e-8);
  }
}

TEST_CASE("a battery the protocol can drain is certified non-passive") {
  rvec pops(2);
  pops << 0.8, 0.2;
  DensityMatrix rho_b = DensityMatrix::diagonal(pops);
  HermitianOperator h_b(pauli_z()), h_c(0.7 * pauli_z());
  DensityMatrix catalyst = build_catalyst_state(rho_b, h_c);
  CertificateReport report = certify_passivity(rho_b, h_b, catalyst, h_c);
  CHECK_FALSE(report.passive);
  CHECK(report.min_eigenvalue < -1e-3);
}

TEST_CASE("degenerate multiplier instances are flagged and cross-checked") {
  // joint maximally mixed state: no unitary moves any energy, yet the
  // eigenvalue condition with x = 0 fails; the verdict is recorded as
  // non-passive and the optimizer cross-check reports unknown instead of
  // silently passing
  DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  HermitianOperator h_b(pauli_z()), h_c(0.7 * pauli_z());
  CertificateReport report = certify_passivity(mixed, h_b, mixed, h_c);
  CHECK(report.x_degenerate);
  CHECK(report.x == 0.0);
  CHECK_FALSE(report.passive);

  CatalysisScenario scenario{mixed, mixed, h_b, h_c, CatalystKind::EnergyInvariant,
                             Tolerances{}, 5};
  CrossValidation cv = cross_validate(scenario, 10, 5);
  CHECK(cv.search.best_extraction <= 1e-4);
  CHECK(cv.agreement == Agreement::Unknown);
}

TEST_CASE("hessian blocks: off-diagonal block is purely imaginary for real input") {
  Rng rng(55);
  const int d = 2;
  cmat real_sym = cmat::Zero(d * d, d * d);
  for (int i = 0; i < d * d; ++i)
    for (int j = i; j < d * d; ++j) {
      double v = rng.uniform(-1.0, 1.0);
      real_sym(i, j) = v;
      real_sym(j, i) = v;
    }
  auto [p, q] = hessian_blocks(RawOperator(real_sym), d);
  CHECK(q.matrix().real().cwiseAbs().maxCoeff() < 1e-14);
  CHECK(p.matrix().imag().cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("hessian blocks: exchange-conjugation symmetry on diagonal instances") {
  rvec pops(2);
  pops << 0.25, 0.75;
  ChoiPair pair = build_choi_pair(HermitianOperator(pauli_z()),
                                  HermitianOperator(0.7 * pauli_z()),
                                  DensityMatrix::diagonal(pops),
                                  DensityMatrix::maximally_mixed(2));
  auto [p, q] = hessian_blocks(RawOperator(pair.c.matrix()), 4);
  CHECK(max_abs(p.matrix() - p.matrix().adjoint()) < 1e-13);
  (void)q;
}

TEST_CASE("hessian diagnostic versus the certificate verdict") {
  // agreement holds on draining instances; the known exception is the passive
  // anchor, where the diagnostic block stays indefinite (recorded here)
  Rng rng(56);
  HermitianOperator h_b(pauli_z()), h_c(0.7 * pauli_z());
  int checked = 0, agreed = 0;
  for (int trial = 0; trial < 6; ++trial) {
    CertificateReport report = certify_passivity(
        random_density(2, rng), h_b, random_density(2, rng), h_c);
    auto [p, q] = hessian_blocks(report.cpp, 4);
    bool p_psd = min_eig_sym(p.matrix()) >= -1e-8;
    ++checked;
    if (p_psd == report.passive) ++agreed;
  }
  CHECK(checked == 6);
  CHECK(agreed == 6);

  rvec ground(2);
  ground << 0.0, 1.0;
  CertificateReport passive_report = certify_passivity(
      DensityMatrix::diagonal(ground), h_b, DensityMatrix::maximally_mixed(2), h_c);
  auto [p, q] = hessian_blocks(passive_report.cpp, 4);
  CHECK(passive_report.passive);
  CHECK(min_eig_sym(p.matrix()) < -1e-8);  // recorded discrepancy of the diagnostic
  (void)q;
}

TEST_CASE("cross validation anchors") {
  Rng rng(57);
  rvec ground(2);
  ground << 0.0, 1.0;
  CatalysisScenario passive_scenario{
      DensityMatrix::diagonal(ground), random_real_density(2, rng),
      HermitianOperator(pauli_z()), HermitianOperator(0.7 * pauli_z()),
      CatalystKind::EnergyInvariant, Tolerances{}, 21};
  CrossValidation passive_cv = cross_validate(passive_scenario, 20, 21);
  CHECK(passive_cv.certificate.passive);
  CHECK(passive_cv.search.best_extraction <= 1e-4);
  CHECK(passive_cv.agreement == Agreement::Agree);

  rvec pops(2);
  pops << 0.8, 0.2;
  DensityMatrix rho_b = DensityMatrix::diagonal(pops);
  HermitianOperator h_b(pauli_z()), h_c(0.7 * pauli_z());
  CatalysisScenario matched{rho_b, build_catalyst_state(rho_b, h_c), h_b, h_c,
                            CatalystKind::EnergyInvariant, Tolerances{}, 22};
  CrossValidation matched_cv = cross_validate(matched, 20, 22);
  CHECK_FALSE(matched_cv.certificate.passive);
  CHECK(matched_cv.search.best_extraction >= ergotropy(rho_b, h_b) - 1e-6);
  CHECK(matched_cv.agreement == Agreement::Agree);
  CHECK(matched_cv.certificate.optimizer_best_extraction.has_value());
}

TEST_CASE("random scenarios: certificate agrees with the optimizer") {
  Rng rng(58);
  for (int s = 0; s < 6; ++s) {
    CatalysisScenario scenario{random_density(2, rng), random_density(2, rng),
                               random_hermitian(2, rng), random_hermitian(2, rng),
                               CatalystKind::EnergyInvariant, Tolerances{},
                               static_cast<std::uint64_t>(s)};
    CrossValidation cv = cross_validate(scenario, 30, 600 + s);
    CHECK(cv.agreement == Agreement::Agree);
  }
}

TEST_CASE("choi sandwich identities") {
  Rng rng(59);
  DensityMatrix rho_b = random_density(2, rng);
  DensityMatrix rho_c = random_density(2, rng);
  HermitianOperator h_b = random_hermitian(2, rng);
  HermitianOperator h_c = random_hermitian(2, rng);
  ChoiPair pair = build_choi_pair(h_b, h_c, rho_b, rho_c);

  const int d = 4;
  cmat rho_joint = detail::kron(rho_b.matrix(), rho_c.matrix());
  cmat battery_obs = detail::kron(h_b.matrix(), cmat::Identity(2, 2));
  cmat catalyst_obs = detail::kron(cmat::Identity(2, 2), h_c.matrix());
  cmat ctilde_prime = tilde_transform(RawOperator(pair.c_prime.matrix()), d).matrix();
  double initial_catalyst_energy = detail::energy_raw(rho_joint, catalyst_obs);

  auto sandwich = [&](const cmat& u, const cmat& op) {
    complexd total = 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        cmat x = u.col(j) * u.col(i).adjoint();
        cmat y = cmat::Zero(d, d);
        y(j, i) = 1.0;
        total += (detail::kron(x, y) * op).trace();
      }
    return total;
  };

  // final battery energy reconstructs through C for arbitrary unitaries
  for (int t = 0; t < 20; ++t) {
    UnitaryOperator u = haar_unitary(d, rng);
    double direct =
        detail::energy_raw(detail::conjugate_by(rho_joint, u.matrix()), battery_obs);
    CHECK(std::abs(sandwich(u.matrix(), pair.c.matrix()) - direct) < 1e-9);
    // the tilde side is unitary-independent: it always returns the initial
    // catalyst energy, which is what ties the constraint into the certificate
    CHECK(std::abs(sandwich(u.matrix(), ctilde_prime) - initial_catalyst_energy) < 1e-9);
  }

  // on energy-invariance-feasible unitaries the full constraint trace vanishes
  EigenSystem es_c = eig_hermitian(h_c.matrix());
  for (int t = 0; t < 20; ++t) {
    cmat u_feasible = cmat::Zero(d, d);
    for (int level = 0; level < 2; ++level) {
      cvec phi = es_c.vectors.col(level);
      u_feasible += detail::kron(haar_unitary(2, rng).matrix(), phi * phi.adjoint());
    }
    complexd gap = sandwich(u_feasible, pair.c_prime.matrix() - ctilde_prime);
    CHECK(std::abs(gap) < 1e-9);
  }
}
