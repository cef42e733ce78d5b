#include "catbench/ergotropy.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/QR>

namespace catbench {

PassiveDecomposition passive_state(const DensityMatrix& rho,
                                   const HermitianOperator& h) {
  if (rho.dim() != h.dim())
    throw validation_error("passive.dims", "state and observable dimensions differ");
  const int d = rho.dim();

  EigenSystem es_rho = eig_hermitian(rho.matrix());
  EigenSystem es_h = eig_hermitian(h.matrix());

  // stable index order: eigenvalues come out ascending, reverse for the state
  rvec lam(d);
  for (int i = 0; i < d; ++i) lam(i) = es_rho.values(d - 1 - i);

  cmat passive = cmat::Zero(d, d);
  double penergy = 0.0;
  for (int i = 0; i < d; ++i) {
    passive += lam(i) * es_h.vectors.col(i) * es_h.vectors.col(i).adjoint();
    penergy += lam(i) * es_h.values(i);
  }
  return PassiveDecomposition{lam, es_h.values,
                              DensityMatrix(detail::unchecked, std::move(passive)),
                              penergy};
}

double ergotropy(const DensityMatrix& rho, const HermitianOperator& h) {
  return energy(rho, h) - passive_state(rho, h).passive_energy;
}

double unitary_orbit_oracle(const DensityMatrix& rho, const HermitianOperator& h,
                            int n_samples, std::uint64_t seed) {
  if (rho.dim() != h.dim())
    throw validation_error("oracle.dims", "state and observable dimensions differ");
  if (n_samples < 1)
    throw validation_error("oracle.samples", "need at least one sample");
  const int d = rho.dim();
  Rng rng(seed);

  const double e0 = detail::energy_raw(rho.matrix(), h.matrix());
  auto extraction = [&](const cmat& u) {
    return e0 - detail::energy_raw(detail::conjugate_by(rho.matrix(), u), h.matrix());
  };

  auto orthonormalize = [&](cmat m) {
    Eigen::HouseholderQR<cmat> qr(m);
    cmat q = qr.householderQ();
    cmat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
      complexd rii = r(i, i);
      if (std::abs(rii) > 0) q.col(i) *= rii / std::abs(rii);
    }
    return q;
  };

  // sample 0 is always the identity
  cmat best_u = cmat::Identity(d, d);
  double best = extraction(best_u);

  double radius = 0.5;
  for (int k = 1; k < n_samples; ++k) {
    cmat candidate;
    if (k % 2 == 1) {
      candidate = orthonormalize(random_gaussian_matrix(d, rng));
    } else {
      candidate = orthonormalize(best_u + radius * random_gaussian_matrix(d, rng));
      radius = std::max(1e-5, radius * 0.9985);
    }
    double value = extraction(candidate);
    if (value > best) {
      best = value;
      best_u = candidate;
    }
  }
  return best;
}

}  // namespace catbench
