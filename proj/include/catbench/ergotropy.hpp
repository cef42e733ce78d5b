#ifndef CATBENCH_ERGOTROPY_HPP
#define CATBENCH_ERGOTROPY_HPP

#include "catbench/qstate.hpp"

namespace catbench {

/// Passive companion of a state: populations sorted descending, paired
/// against ascending energy levels.
struct PassiveDecomposition {
  rvec sorted_state_eigs;   // descending
  rvec sorted_energy_eigs;  // ascending
  DensityMatrix passive_state;
  double passive_energy;
};

PassiveDecomposition passive_state(const DensityMatrix& rho,
                                   const HermitianOperator& h);

/// tr[rho H] minus the passive energy; the maximum a unitary on the system
/// alone can extract.
double ergotropy(const DensityMatrix& rho, const HermitianOperator& h);

/// Sampling lower bound on ergotropy: best extraction over a seeded stream of
/// unitaries (identity first, then orthonormalized complex-Gaussian draws,
/// interleaved with contracting draws around the incumbent). Never exceeds
/// the closed form; deterministic given the seed.
double unitary_orbit_oracle(const DensityMatrix& rho, const HermitianOperator& h,
                            int n_samples, std::uint64_t seed);

}  // namespace catbench

#endif
