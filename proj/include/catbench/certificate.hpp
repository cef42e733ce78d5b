#ifndef CATBENCH_CERTIFICATE_HPP
#define CATBENCH_CERTIFICATE_HPP

#include <optional>

#include "catbench/nogo.hpp"
#include "catbench/qstate.hpp"

namespace catbench {

/// Choi-type operators on the doubled space of dimension (d_B*d_C)^2:
/// C places the battery Hamiltonian on the first copy, C' the catalyst
/// Hamiltonian; both share the transposed joint state on the second copy.
struct ChoiPair {
  HermitianOperator c;
  HermitianOperator c_prime;
  std::pair<int, int> dims;
  // stored factors, kept so either operator can be reconstructed exactly
  HermitianOperator h_b;
  HermitianOperator h_c;
  DensityMatrix rho_b;
  DensityMatrix rho_c;

  int joint_dim() const { return dims.first * dims.second; }
};

struct MultiplierEstimate {
  double x = 0.0;
  bool degenerate = false;
  double spread = 0.0;
};

struct CertificateReport {
  double x = 0.0;
  bool x_degenerate = false;
  double x_consistency = 0.0;
  RawOperator cpp;     // C'' = C - x C'
  RawOperator ctilde;  // tilde transform of C''
  double hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;
  bool passive = false;
  std::optional<double> optimizer_best_extraction;
};

ChoiPair build_choi_pair(const HermitianOperator& h_b, const HermitianOperator& h_c,
                         const DensityMatrix& rho_b, const DensityMatrix& rho_c);

/// Stationarity multiplier from the matrix-element ratios; the ratio from the
/// largest-denominator pair wins, the spread across admissible pairs is
/// reported, and instances with no usable denominator are flagged degenerate
/// with x = 0.
MultiplierEstimate lagrange_multiplier_x(const ChoiPair& pair, double tol = 1e-12);

/// Index contraction <a'b'|Ã|ab> = delta_{aa'} sum_i <ii|A|b'b> on a d^2
/// operator with first-copy-major indexing.
RawOperator tilde_transform(const RawOperator& a, int d);

CertificateReport certify_passivity(const DensityMatrix& rho_b,
                                    const HermitianOperator& h_b,
                                    const DensityMatrix& rho_c,
                                    const HermitianOperator& h_c,
                                    const Tolerances& tol = {});

/// Second-derivative diagnostic blocks of the constrained objective.
std::pair<RawOperator, RawOperator> hessian_blocks(const RawOperator& cpp, int d);

enum class Agreement { Agree, Disagree, Unknown };

struct CrossValidation {
  CertificateReport certificate;
  NoGoReport search;
  Agreement agreement = Agreement::Unknown;
};

/// Certificate verdict against the constrained optimizer on the same
/// scenario (energy-invariant constraint).
CrossValidation cross_validate(const CatalysisScenario& scenario, int budget,
                               std::uint64_t seed);

}  // namespace catbench

#endif
