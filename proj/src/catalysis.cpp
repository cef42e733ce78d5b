#include "catbench/catalysis.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace catbench {

namespace {

constexpr double kDegenerateGap = 1e-10;
constexpr double kCoherenceTol = 1e-12;

/// Eigenvectors of h sorted by descending eigenvalue, with the eigenvalues.
std::pair<cmat, rvec> descending_eigenbasis(const HermitianOperator& h) {
  EigenSystem es = eig_hermitian(h.matrix());
  const int d = h.dim();
  cmat vectors(d, d);
  rvec values(d);
  for (int i = 0; i < d; ++i) {
    vectors.col(i) = es.vectors.col(d - 1 - i);
    values(i) = es.values(d - 1 - i);
  }
  return {vectors, values};
}

/// Orthonormal basis whose first column is `first`; the rest is completed
/// from the standard basis by Gram-Schmidt.
cmat complete_basis(const cvec& first) {
  const int d = static_cast<int>(first.size());
  cmat basis(d, d);
  basis.col(0) = first / first.norm();
  int have = 1;
  for (int e = 0; e < d && have < d; ++e) {
    cvec w = cvec::Zero(d);
    w(e) = 1.0;
    for (int c = 0; c < have; ++c) w -= basis.col(c) * (basis.col(c).adjoint() * w)(0);
    double n = w.norm();
    if (n > 1e-7) basis.col(have++) = w / n;
  }
  if (have != d)
    throw validation_error("catalysis.completion", "basis completion failed");
  return basis;
}

/// Unitary sending `from` to `to`, completed over the standard basis.
cmat map_between(const cvec& from, const cvec& to) {
  cmat a = complete_basis(from);
  cmat b = complete_basis(to);
  return b * a.adjoint();
}

struct ConstructionParts {
  rvec alpha;          // battery populations, descending
  cmat battery_basis;  // column j paired with alpha(j)
  cmat u_r;            // diagonalizer, identity for incoherent input
  bool coherent = false;
};

ConstructionParts battery_parts(const DensityMatrix& rho_b,
                                const EigenSystem& es_h) {
  const int d = rho_b.dim();
  cmat in_h_basis = es_h.vectors.adjoint() * rho_b.matrix() * es_h.vectors;
  double off = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) off = std::max(off, std::abs(in_h_basis(i, j)));

  ConstructionParts parts;
  if (off <= kCoherenceTol) {
    rvec pops(d);
    for (int i = 0; i < d; ++i) pops(i) = in_h_basis(i, i).real();
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return pops(a) > pops(b); });
    parts.alpha.resize(d);
    parts.battery_basis.resize(d, d);
    for (int j = 0; j < d; ++j) {
      parts.alpha(j) = pops(order[j]);
      parts.battery_basis.col(j) = es_h.vectors.col(order[j]);
    }
    parts.u_r = cmat::Identity(d, d);
    return parts;
  }

  parts.coherent = true;
  EigenSystem es_rho = eig_hermitian(rho_b.matrix());
  parts.alpha.resize(d);
  parts.battery_basis = es_h.vectors;  // ascending energy order
  cmat u_r = cmat::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    parts.alpha(j) = es_rho.values(d - 1 - j);
    u_r += es_rho.vectors.col(d - 1 - j) * es_h.vectors.col(j).adjoint();
  }
  parts.u_r = u_r;
  return parts;
}

cvec catalyst_ket(const rvec& alpha, const cmat& phi_desc) {
  const int d = static_cast<int>(alpha.size());
  cvec ket = cvec::Zero(d);
  for (int j = 0; j < d; ++j)
    ket += std::sqrt(std::max(0.0, alpha(j))) * phi_desc.col(j);
  return ket;
}

}  // namespace

DensityMatrix build_catalyst_state(const DensityMatrix& rho_b,
                                   const HermitianOperator& h_c) {
  if (rho_b.dim() != h_c.dim())
    throw validation_error("catalysis.dims", "battery and catalyst dimensions differ");
  EigenSystem es_rho = eig_hermitian(rho_b.matrix());
  const int d = rho_b.dim();
  rvec alpha(d);
  for (int j = 0; j < d; ++j) alpha(j) = es_rho.values(d - 1 - j);
  cmat phi_desc = descending_eigenbasis(h_c).first;
  return DensityMatrix::pure(catalyst_ket(alpha, phi_desc));
}

ExtractionProtocol build_extraction_unitary(const DensityMatrix& rho_b,
                                            const HermitianOperator& h_b,
                                            const HermitianOperator& h_c) {
  const int d = rho_b.dim();
  if (h_b.dim() != d || h_c.dim() != d)
    throw validation_error("catalysis.dims",
                           "battery state, battery and catalyst Hamiltonians "
                           "must share one dimension");

  EigenSystem es_h = eig_hermitian(h_b.matrix());
  bool degenerate = d > 1 && es_h.values(1) - es_h.values(0) < kDegenerateGap;
  cvec ground = es_h.vectors.col(0);

  ConstructionParts parts = battery_parts(rho_b, es_h);
  cmat phi_desc = descending_eigenbasis(h_c).first;

  cvec phi_c = catalyst_ket(parts.alpha, phi_desc);
  cmat u_g = map_between(phi_c, ground);
  cmat u_k = cmat::Zero(d, d);
  for (int j = 0; j < d; ++j)
    u_k += phi_desc.col(j) * parts.battery_basis.col(j).adjoint();

  cmat joint = detail::kron(u_g, u_k) * swap_unitary(d).matrix();
  if (parts.coherent)
    joint = joint * detail::kron(parts.u_r.adjoint(), cmat::Identity(d, d));

  return ExtractionProtocol{DensityMatrix::pure(phi_c),
                            UnitaryOperator(detail::unchecked, std::move(joint)),
                            UnitaryOperator(detail::unchecked, parts.u_r),
                            degenerate};
}

namespace {

ExtractionReport report_from_run(const DensityMatrix& rho_b,
                                 const HermitianOperator& h_b,
                                 const HermitianOperator& h_c,
                                 const DensityMatrix& catalyst,
                                 const UnitaryOperator& joint,
                                 bool degenerate) {
  const int d_b = rho_b.dim();
  const int d_c = catalyst.dim();
  DensityMatrix joint_in = tensor(rho_b, catalyst);
  DensityMatrix joint_out = evolve(joint_in, joint);
  DensityMatrix battery_out =
      partial_trace(joint_out, Subsystem::Battery, {d_b, d_c});
  DensityMatrix catalyst_out =
      partial_trace(joint_out, Subsystem::Catalyst, {d_b, d_c});

  ExtractionReport report;
  report.initial_energy = energy(rho_b, h_b);
  report.final_energy = energy(battery_out, h_b);
  report.extracted = report.initial_energy - report.final_energy;
  report.catalyst_energy_before = energy(catalyst, h_c);
  report.catalyst_energy_after = energy(catalyst_out, h_c);
  report.ground_fidelity = eigenvector_fidelity(battery_out, h_b, 0);
  report.final_battery_state = battery_out;
  report.degenerate_ground = degenerate;
  return report;
}

}  // namespace

ExtractionReport run_full_extraction(const DensityMatrix& rho_b,
                                     const HermitianOperator& h_b,
                                     const HermitianOperator& h_c) {
  ExtractionProtocol protocol = build_extraction_unitary(rho_b, h_b, h_c);
  return report_from_run(rho_b, h_b, h_c, protocol.catalyst_state,
                         protocol.joint_unitary, protocol.degenerate_ground);
}

InvarianceCheck verify_energy_invariance(const UnitaryOperator& u,
                                         const DensityMatrix& rho_b,
                                         const DensityMatrix& rho_c,
                                         const HermitianOperator& h_c,
                                         double tol) {
  if (u.dim() != rho_b.dim() * rho_c.dim() || rho_c.dim() != h_c.dim())
    throw validation_error("invariance.dims", "inconsistent dimensions");
  DensityMatrix out = evolve(tensor(rho_b, rho_c), u);
  DensityMatrix catalyst_out =
      partial_trace(out, Subsystem::Catalyst, {rho_b.dim(), rho_c.dim()});
  double violation = std::abs(energy(catalyst_out, h_c) - energy(rho_c, h_c));
  return InvarianceCheck{violation <= tol, violation};
}

UnitaryOperator two_level_ground_rotation(double k) {
  const double lo = std::sqrt((1.0 - k) / 2.0);
  const double hi = std::sqrt((1.0 + k) / 2.0);
  cmat u(2, 2);
  u << lo, -hi, hi, lo;
  return UnitaryOperator(std::move(u));
}

ExtractionReport two_level_demo(double k, double h_b, double h_c) {
  if (k < 0.0 || k > 1.0)
    throw validation_error("demo.k", "k must lie in [0,1]");
  if (h_b <= 0.0)
    throw validation_error("demo.h_b", "battery level splitting must be positive");

  cmat sz(2, 2);
  sz << 1.0, 0.0, 0.0, -1.0;
  HermitianOperator hb(h_b * sz);
  HermitianOperator hc(h_c * sz);

  rvec pops(2);
  pops << (1.0 + k) / 2.0, (1.0 - k) / 2.0;
  DensityMatrix rho_b = DensityMatrix::diagonal(pops);

  cvec catalyst(2);
  catalyst << std::sqrt((1.0 + k) / 2.0), std::sqrt((1.0 - k) / 2.0);
  DensityMatrix rho_c = DensityMatrix::pure(catalyst);

  cmat joint = detail::kron(two_level_ground_rotation(k).matrix(),
                            cmat::Identity(2, 2)) *
               swap_unitary(2).matrix();
  return report_from_run(rho_b, hb, hc, rho_c,
                         UnitaryOperator(detail::unchecked, std::move(joint)),
                         /*degenerate=*/false);
}

}  // namespace catbench
