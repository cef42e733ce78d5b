#include <doctest.h>

#include <cmath>

#include "catbench/catalysis.hpp"
#include "catbench/ergotropy.hpp"
#include "catbench/nogo.hpp"

using namespace catbench;

namespace {

cmat pauli_z() {
  cmat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CatalysisScenario qubit_scenario(CatalystKind kind, std::uint64_t seed) {
  rvec pops(2);
  pops << 0.7, 0.3;
  Rng rng(seed);
  return CatalysisScenario{DensityMatrix::diagonal(pops), random_density(2, rng),
                           HermitianOperator(pauli_z()),
                           HermitianOperator(0.7 * pauli_z()), kind, Tolerances{}, seed};
}

}  // namespace

TEST_CASE("constraint residual vanishes where it must") {
  for (CatalystKind kind : {CatalystKind::EnergyInvariant, CatalystKind::Correlated,
                            CatalystKind::Uncorrelated}) {
    CatalysisScenario scenario = qubit_scenario(kind, 61);
    CHECK(constraint_residual(UnitaryOperator::identity(4), scenario) < 1e-14);

    Rng rng(62);
    cmat local = detail::kron(haar_unitary(2, rng).matrix(), cmat::Identity(2, 2));
    CHECK(constraint_residual(UnitaryOperator(local), scenario) < 1e-12);
  }
}

TEST_CASE("swapping distinct states violates the state-invariant constraints") {
  CatalysisScenario scenario = qubit_scenario(CatalystKind::Correlated, 63);
  double residual = constraint_residual(swap_unitary(2), scenario);
  // after a swap the catalyst marginal is the old battery state
  double expected = (scenario.rho_b.matrix() - scenario.rho_c.matrix()).norm();
  CHECK(residual == doctest::Approx(expected).epsilon(1e-12));
  CHECK(residual > 1e-2);

  CatalysisScenario unc = scenario;
  unc.kind = CatalystKind::Uncorrelated;
  double unc_residual = constraint_residual(swap_unitary(2), unc);
  cmat swapped = detail::kron(unc.rho_c.matrix(), unc.rho_b.matrix());
  double product_gap =
      (swapped - detail::kron(unc.rho_c.matrix(), unc.rho_c.matrix())).norm();
  CHECK(unc_residual == doctest::Approx(expected + product_gap).epsilon(1e-12));
}

TEST_CASE("search basics: ground battery, matched warm start, determinism") {
  Rng rng(64);
  rvec ground(2);
  ground << 0.0, 1.0;
  CatalysisScenario ground_scenario{
      DensityMatrix::diagonal(ground), random_density(2, rng),
      HermitianOperator(pauli_z()), HermitianOperator(0.7 * pauli_z()),
      CatalystKind::EnergyInvariant, Tolerances{}, 11};
  NoGoReport ground_report = constrained_max_extraction(ground_scenario, 8, 11);
  CHECK(ground_report.feasible_found);
  CHECK(ground_report.best_extraction <= 1e-4);
  CHECK_FALSE(ground_report.violated);

  // matched construction: the injected protocol start realizes full drain
  rvec pops(2);
  pops << 0.8, 0.2;
  DensityMatrix rho_b = DensityMatrix::diagonal(pops);
  HermitianOperator h_b(pauli_z()), h_c(0.7 * pauli_z());
  CatalysisScenario matched{rho_b, build_catalyst_state(rho_b, h_c), h_b, h_c,
                            CatalystKind::EnergyInvariant, Tolerances{}, 12};
  NoGoReport matched_report = constrained_max_extraction(matched, 8, 12);
  double full_drain = energy(rho_b, h_b) - eig_hermitian(h_b.matrix()).values(0);
  CHECK(matched_report.best_extraction >= ergotropy(rho_b, h_b) - 1e-9);
  CHECK(matched_report.best_extraction <= full_drain + 1e-9);

  NoGoReport again = constrained_max_extraction(matched, 8, 12);
  CHECK(again.best_extraction == matched_report.best_extraction);
  CHECK(again.best_violation == matched_report.best_violation);

  CHECK_THROWS_AS(constrained_max_extraction(matched, 0, 1), validation_error);
}

TEST_CASE("search soundness: nothing beats the unconstrained drain") {
  Rng rng(65);
  for (int s = 0; s < 3; ++s) {
    CatalysisScenario scenario{random_density(2, rng), random_density(2, rng),
                               random_hermitian(2, rng), random_hermitian(2, rng),
                               CatalystKind::EnergyInvariant, Tolerances{},
                               static_cast<std::uint64_t>(s)};
    NoGoReport report = constrained_max_extraction(scenario, 10, 70 + s);
    double supremum = energy(scenario.rho_b, scenario.h_b) -
                      eig_hermitian(scenario.h_b.matrix()).values(0);
    CHECK(report.best_extraction <= supremum + 1e-9);
  }
}

TEST_CASE("uncorrelated no-go holds on the worked qubit instance") {
  CatalysisScenario scenario = qubit_scenario(CatalystKind::Uncorrelated, 66);
  CHECK(ergotropy(scenario.rho_b, scenario.h_b) == doctest::Approx(0.8).epsilon(1e-13));

  NoGoReport report = uncorrelated_nogo_check(scenario, 200, 66);
  CHECK(report.feasible_found);
  CHECK(report.ergotropy_value == doctest::Approx(0.8).epsilon(1e-13));
  CHECK_FALSE(report.violated);
  CHECK_FALSE(report.spectrum_anomaly);
  CHECK(report.best_extraction <= report.ergotropy_value + 1e-4);

  CHECK_THROWS_AS(
      uncorrelated_nogo_check(qubit_scenario(CatalystKind::Correlated, 1), 2, 1),
      validation_error);
}

TEST_CASE("uncorrelated no-go: maximally mixed battery extracts nothing") {
  Rng rng(67);
  CatalysisScenario scenario{DensityMatrix::maximally_mixed(2), random_density(2, rng),
                             HermitianOperator(pauli_z()),
                             HermitianOperator(0.7 * pauli_z()),
                             CatalystKind::Uncorrelated, Tolerances{}, 13};
  NoGoReport report = uncorrelated_nogo_check(scenario, 30, 13);
  CHECK(report.ergotropy_value == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(report.best_extraction <= 1e-4);
  CHECK_FALSE(report.violated);
}

TEST_CASE("uncorrelated no-go at mixed dimensions") {
  Rng rng(68);
  CatalysisScenario scenario{random_density(3, rng), random_density(2, rng),
                             random_hermitian(3, rng), random_hermitian(2, rng),
                             CatalystKind::Uncorrelated, Tolerances{}, 14};
  NoGoReport report = uncorrelated_nogo_check(scenario, 12, 14);
  CHECK_FALSE(report.violated);
  CHECK_FALSE(report.spectrum_anomaly);
}

TEST_CASE("correlated no-go on qubit batteries") {
  rvec excited(2);
  excited << 1.0, 0.0;
  Rng rng(69);
  CatalysisScenario scenario{DensityMatrix::diagonal(excited), random_density(2, rng),
                             HermitianOperator(pauli_z()),
                             HermitianOperator(0.7 * pauli_z()),
                             CatalystKind::Correlated, Tolerances{}, 15};
  CHECK(ergotropy(scenario.rho_b, scenario.h_b) == doctest::Approx(2.0).epsilon(1e-13));
  NoGoReport report = correlated_qubit_nogo_check(scenario, 40, 15);
  CHECK_FALSE(report.violated);
  CHECK(report.entropy_check.has_value());
  CHECK(*report.entropy_check);
  CHECK(report.delta_e.has_value());
  CHECK(*report.delta_e <= 1e-7);
}

TEST_CASE("correlated no-go: ordered mixed battery and the eigenvalue shift") {
  rvec pops(2);
  pops << 0.4, 0.6;
  cmat h(2, 2);
  h << 1, 0, 0, -1;
  Rng rng(70);
  CatalysisScenario scenario{DensityMatrix::diagonal(pops), random_density(2, rng),
                             HermitianOperator(h), HermitianOperator(0.5 * h),
                             CatalystKind::Correlated, Tolerances{}, 16};
  NoGoReport report = correlated_qubit_nogo_check(scenario, 40, 16);
  CHECK_FALSE(report.violated);
  CHECK(*report.delta_e <= 1e-8);
  CHECK(*report.entropy_check);
}

TEST_CASE("correlated no-go with a qutrit catalyst") {
  Rng rng(71);
  CatalysisScenario scenario{random_density(2, rng), random_density(3, rng),
                             random_hermitian(2, rng), random_hermitian(3, rng),
                             CatalystKind::Correlated, Tolerances{}, 17};
  NoGoReport report = correlated_qubit_nogo_check(scenario, 15, 17);
  CHECK_FALSE(report.violated);
  CHECK(*report.entropy_check);
}

TEST_CASE("correlated no-go rejects non-qubit batteries") {
  Rng rng(72);
  CatalysisScenario scenario{random_density(3, rng), random_density(2, rng),
                             random_hermitian(3, rng), random_hermitian(2, rng),
                             CatalystKind::Correlated, Tolerances{}, 18};
  CHECK_THROWS_WITH_AS(correlated_qubit_nogo_check(scenario, 2, 18),
                       doctest::Contains("nogo.battery_dim"), validation_error);
}

TEST_CASE("qubit eigenvalue-shift functional") {
  Rng rng(73);
  DensityMatrix rho = random_density(2, rng);
  HermitianOperator h(pauli_z());
  CHECK(delta_e_qubit(rho, rho, h) == doctest::Approx(0.0).epsilon(1e-14));

  rvec excited(2);
  excited << 1.0, 0.0;
  cmat hd(2, 2);
  hd << 1, 0, 0, -1;
  CHECK(delta_e_qubit(DensityMatrix::diagonal(excited), DensityMatrix::maximally_mixed(2),
                      HermitianOperator(hd)) == doctest::Approx(-1.0).epsilon(1e-13));

  CHECK(delta_e_qubit(rho, DensityMatrix::maximally_mixed(2),
                      HermitianOperator(cmat::Identity(2, 2))) == 0.0);
  CHECK_THROWS_AS(delta_e_qubit(random_density(3, rng), rho, h), validation_error);
}

TEST_CASE("entropy monotonicity checker") {
  Rng rng(74);
  DensityMatrix rho_b = random_density(2, rng);
  DensityMatrix rho_c = random_density(2, rng);
  CHECK(entropy_monotonicity_check(UnitaryOperator::identity(4), rho_b, rho_c, 1e-7));

  cmat local = detail::kron(haar_unitary(2, rng).matrix(), cmat::Identity(2, 2));
  CHECK(entropy_monotonicity_check(UnitaryOperator(local), rho_b, rho_c, 1e-7));

  // infeasible unitaries are vacuously fine
  DensityMatrix other = random_density(2, rng);
  CatalysisScenario probe{rho_b, other, HermitianOperator(pauli_z()),
                          HermitianOperator(pauli_z()), CatalystKind::Correlated,
                          Tolerances{}, 1};
  if (constraint_residual(swap_unitary(2), probe) > 1e-5)
    CHECK(entropy_monotonicity_check(swap_unitary(2), rho_b, other, 1e-7));
}

TEST_CASE("contrast: energy-invariant search beats ergotropy where state-invariant cannot") {
  rvec pops(2);
  pops << 0.75, 0.25;
  DensityMatrix rho_b = DensityMatrix::diagonal(pops);
  HermitianOperator h_b(pauli_z()), h_c(0.7 * pauli_z());
  DensityMatrix catalyst = build_catalyst_state(rho_b, h_c);
  double plain = ergotropy(rho_b, h_b);

  CatalysisScenario base{rho_b, catalyst, h_b, h_c, CatalystKind::EnergyInvariant,
                         Tolerances{}, 30};
  NoGoReport energy_run = constrained_max_extraction(base, 10, 30);
  CHECK(energy_run.best_extraction > plain + 1e-3);

  base.kind = CatalystKind::Uncorrelated;
  NoGoReport unc_run = uncorrelated_nogo_check(base, 30, 30);
  CHECK(unc_run.best_extraction <= plain + 1e-4);

  base.kind = CatalystKind::Correlated;
  NoGoReport cor_run = correlated_qubit_nogo_check(base, 30, 30);
  CHECK(cor_run.best_extraction <= plain + 1e-4);
}
