#ifndef CATBENCH_NOGO_HPP
#define CATBENCH_NOGO_HPP

#include <optional>
#include <vector>

#include "catbench/qstate.hpp"

namespace catbench {

enum class CatalystKind { EnergyInvariant, Correlated, Uncorrelated };

/// One experiment: battery and catalyst states, their Hamiltonians, the
/// constraint regime, and the tolerances in force.
struct CatalysisScenario {
  DensityMatrix rho_b;
  DensityMatrix rho_c;
  HermitianOperator h_b;
  HermitianOperator h_c;
  CatalystKind kind = CatalystKind::EnergyInvariant;
  Tolerances tol;
  std::uint64_t seed = 0;

  int battery_dim() const { return rho_b.dim(); }
  int catalyst_dim() const { return rho_c.dim(); }
  int joint_dim() const { return battery_dim() * catalyst_dim(); }
  void validate() const;
};

struct NoGoReport {
  double ergotropy_value = 0.0;
  double best_extraction = 0.0;
  double best_violation = 0.0;
  int restarts = 0;
  bool feasible_found = false;
  bool violated = false;
  double effective_tolerance = 0.0;
  std::optional<bool> entropy_check;
  std::optional<double> delta_e;
  bool spectrum_anomaly = false;
  bool exploratory = false;
  DensityMatrix best_battery_state;
};

/// A feasible point retained by the search: extraction, residual, and the
/// reduced battery state there.
struct FeasibleSample {
  double extraction = 0.0;
  double residual = 0.0;
  cmat battery_final;
  int restart = 0;
};

struct SearchOutcome {
  NoGoReport report;
  std::vector<FeasibleSample> samples;
  rvec best_params;
};

/// Distance of U from the scenario's constraint set: Frobenius norms for the
/// state-invariant kinds, absolute catalyst-energy drift for the
/// energy-invariant kind. Zero means feasible.
double constraint_residual(const UnitaryOperator& u,
                           const CatalysisScenario& scenario);

/// Penalty-method maximization of extracted energy over joint unitaries,
/// derivative-free with random restarts. `budget` counts restarts; identity
/// (and, for equal-dimension energy-invariant runs, the constructed
/// full-extraction unitary) seed the first restarts. Deterministic by seed.
SearchOutcome constrained_search(const CatalysisScenario& scenario, int budget,
                                 std::uint64_t seed);

NoGoReport constrained_max_extraction(const CatalysisScenario& scenario,
                                      int budget, std::uint64_t seed);

/// Uncorrelated-catalyst run: searches, then checks spectrum preservation of
/// the battery at the best feasible point and the extraction bound.
NoGoReport uncorrelated_nogo_check(const CatalysisScenario& scenario, int budget,
                                   std::uint64_t seed);

/// Correlated-catalyst run for qubit batteries: searches, then evaluates the
/// entropy monotonicity and eigenvalue-shift checks at every retained
/// feasible sample.
NoGoReport correlated_qubit_nogo_check(const CatalysisScenario& scenario,
                                       int budget, std::uint64_t seed);

/// (lambda_1 - lambda_1')(h_1 - h_2) for qubit states: smaller eigenvalues of
/// the initial and final battery states against the level splitting, h_1 the
/// larger level. Zero when H is degenerate.
double delta_e_qubit(const DensityMatrix& rho_b, const DensityMatrix& rho_b_final,
                     const HermitianOperator& h_b);

/// True when the evolved battery entropy does not drop below the initial one
/// (within eps); vacuously true when U does not preserve the catalyst
/// marginal to the feasibility tolerance.
bool entropy_monotonicity_check(const UnitaryOperator& u, const DensityMatrix& rho_b,
                                const DensityMatrix& rho_c, double eps);

}  // namespace catbench

#endif
