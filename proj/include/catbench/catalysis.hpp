#ifndef CATBENCH_CATALYSIS_HPP
#define CATBENCH_CATALYSIS_HPP

#include "catbench/qstate.hpp"

namespace catbench {

/// Constructed full-extraction protocol: a pure catalyst, the joint unitary
/// that drains the battery into its ground state, and the battery rotation
/// absorbed for coherent inputs (identity for incoherent ones).
struct ExtractionProtocol {
  DensityMatrix catalyst_state;
  UnitaryOperator joint_unitary;
  UnitaryOperator battery_rotation;
  bool degenerate_ground = false;
};

struct ExtractionReport {
  double initial_energy = 0.0;
  double final_energy = 0.0;
  double extracted = 0.0;
  double catalyst_energy_before = 0.0;
  double catalyst_energy_after = 0.0;
  DensityMatrix final_battery_state;
  double ground_fidelity = 0.0;
  bool degenerate_ground = false;
};

/// Pure catalyst whose amplitudes are the square roots of the battery
/// populations, laid over the catalyst energy eigenbasis.
DensityMatrix build_catalyst_state(const DensityMatrix& rho_b,
                                   const HermitianOperator& h_c);

ExtractionProtocol build_extraction_unitary(const DensityMatrix& rho_b,
                                            const HermitianOperator& h_b,
                                            const HermitianOperator& h_c);

/// Build the protocol, simulate it, and report energies, catalyst drift and
/// ground fidelity.
ExtractionReport run_full_extraction(const DensityMatrix& rho_b,
                                     const HermitianOperator& h_b,
                                     const HermitianOperator& h_c);

struct InvarianceCheck {
  bool invariant = false;
  double violation = 0.0;
};

/// Catalyst mean energy before vs. after the joint evolution.
InvarianceCheck verify_energy_invariance(const UnitaryOperator& u,
                                         const DensityMatrix& rho_b,
                                         const DensityMatrix& rho_c,
                                         const HermitianOperator& h_c,
                                         double tol);

/// Two-level worked example: battery diag((1+k)/2, (1-k)/2) under h_B sigma_z,
/// run with the explicit swap and battery rotation matrices.
ExtractionReport two_level_demo(double k, double h_b, double h_c);

/// The explicit 2x2 rotation used by the two-level demo.
UnitaryOperator two_level_ground_rotation(double k);

}  // namespace catbench

#endif
