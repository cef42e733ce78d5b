#include "catbench/certificate.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace catbench {

namespace {

/// sum_i A[(i,i),(r,c)] over the doubled space, as a d x d matrix in (r,c)
cmat diagonal_pair_contraction(const cmat& a, int d) {
  cmat s = cmat::Zero(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      for (int i = 0; i < d; ++i) s(r, c) += a(i * d + i, r * d + c);
  return s;
}

}  // namespace

ChoiPair build_choi_pair(const HermitianOperator& h_b, const HermitianOperator& h_c,
                         const DensityMatrix& rho_b, const DensityMatrix& rho_c) {
  if (h_b.dim() != rho_b.dim() || h_c.dim() != rho_c.dim())
    throw validation_error("choi.dims", "state and Hamiltonian dimensions differ");
  const int d_b = h_b.dim(), d_c = h_c.dim();
  if (d_b * d_c > max_search_dim())
    throw validation_error("choi.dim", "joint dimension exceeds configured maximum");

  cmat battery_term = detail::kron(h_b.matrix(), cmat::Identity(d_c, d_c));
  cmat catalyst_term = detail::kron(cmat::Identity(d_b, d_b), h_c.matrix());
  cmat rho_transposed =
      detail::kron(rho_b.matrix(), rho_c.matrix()).transpose();

  return ChoiPair{
      HermitianOperator(detail::unchecked, detail::kron(battery_term, rho_transposed)),
      HermitianOperator(detail::unchecked, detail::kron(catalyst_term, rho_transposed)),
      {d_b, d_c},
      h_b,
      h_c,
      rho_b,
      rho_c};
}

MultiplierEstimate lagrange_multiplier_x(const ChoiPair& pair, double tol) {
  const int d = pair.joint_dim();
  const cmat& c = pair.c.matrix();
  const cmat& cp = pair.c_prime.matrix();

  MultiplierEstimate estimate;
  complexd best_ratio = 0.0;
  double best_denominator = 0.0;
  std::vector<complexd> ratios;

  for (int alpha = 0; alpha < d; ++alpha)
    for (int beta = 0; beta < d; ++beta) {
      const int col = alpha * d + beta;
      complexd numerator = 0.0, denominator = 0.0;
      for (int i = 0; i < d; ++i) {
        const int diag = i * d + i;
        numerator += c(diag, col) - c(col, diag);
        denominator += cp(diag, col) - cp(col, diag);
      }
      if (std::abs(denominator) <= tol) continue;
      complexd ratio = numerator / denominator;
      ratios.push_back(ratio);
      if (std::abs(denominator) > best_denominator) {
        best_denominator = std::abs(denominator);
        best_ratio = ratio;
      }
    }

  if (ratios.empty()) {
    estimate.degenerate = true;
    return estimate;
  }
  estimate.x = best_ratio.real();
  for (const complexd& r : ratios)
    estimate.spread = std::max(estimate.spread, std::abs(r - best_ratio));
  return estimate;
}

RawOperator tilde_transform(const RawOperator& a, int d) {
  if (a.dim() != d * d)
    throw validation_error("tilde.dims", "operator does not live on the doubled space");
  cmat s = diagonal_pair_contraction(a.matrix(), d);
  return RawOperator(detail::kron(cmat::Identity(d, d), s));
}

CertificateReport certify_passivity(const DensityMatrix& rho_b,
                                    const HermitianOperator& h_b,
                                    const DensityMatrix& rho_c,
                                    const HermitianOperator& h_c,
                                    const Tolerances& tol) {
  ChoiPair pair = build_choi_pair(h_b, h_c, rho_b, rho_c);
  const int d = pair.joint_dim();

  MultiplierEstimate mult = lagrange_multiplier_x(pair);

  CertificateReport report;
  report.x = mult.degenerate ? 0.0 : mult.x;
  report.x_degenerate = mult.degenerate;
  report.x_consistency = mult.spread;

  cmat cpp = pair.c.matrix() - report.x * pair.c_prime.matrix();
  report.cpp = RawOperator(cpp);
  report.ctilde = tilde_transform(report.cpp, d);

  cmat difference = cpp - report.ctilde.matrix();
  report.hermiticity_defect = max_abs(difference - difference.adjoint());
  cmat symmetrized = 0.5 * (difference + difference.adjoint());
  Eigen::SelfAdjointEigenSolver<cmat> solver(symmetrized, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = solver.eigenvalues().minCoeff();
  report.passive = report.min_eigenvalue >= -tol.psd_cert;
  return report;
}

std::pair<RawOperator, RawOperator> hessian_blocks(const RawOperator& cpp, int d) {
  if (cpp.dim() != d * d)
    throw validation_error("hessian.dims", "operator does not live on the doubled space");
  const cmat& c = cpp.matrix();
  const cmat sym = c + c.conjugate();
  const cmat s_single = diagonal_pair_contraction(c, d);
  const cmat s_sym = diagonal_pair_contraction(sym, d);

  const int n = d * d;
  cmat p(n, n), q(n, n);
  for (int alpha = 0; alpha < d; ++alpha)
    for (int beta = 0; beta < d; ++beta) {
      const int row = alpha * d + beta;
      for (int alpha_p = 0; alpha_p < d; ++alpha_p)
        for (int beta_p = 0; beta_p < d; ++beta_p) {
          const int col = alpha_p * d + beta_p;
          complexd delta = alpha == alpha_p ? 1.0 : 0.0;
          p(row, col) = sym(col, row) - delta * s_single(beta_p, beta);
          q(row, col) = complexd(0.0, 1.0) *
                        (c(row, col) + delta * s_sym(beta_p, beta));
        }
    }
  return {RawOperator(std::move(p)), RawOperator(std::move(q))};
}

CrossValidation cross_validate(const CatalysisScenario& scenario, int budget,
                               std::uint64_t seed) {
  CatalysisScenario run = scenario;
  run.kind = CatalystKind::EnergyInvariant;

  CrossValidation result{
      certify_passivity(run.rho_b, run.h_b, run.rho_c, run.h_c, run.tol),
      constrained_max_extraction(run, budget, seed), Agreement::Unknown};
  result.certificate.optimizer_best_extraction = result.search.best_extraction;

  if (!result.search.feasible_found) return result;  // harness bug; stay unknown
  const double best = result.search.best_extraction;
  if (result.certificate.passive)
    result.agreement = best <= run.tol.opt ? Agreement::Agree : Agreement::Disagree;
  else
    result.agreement = best > run.tol.opt ? Agreement::Agree : Agreement::Unknown;
  return result;
}

}  // namespace catbench
