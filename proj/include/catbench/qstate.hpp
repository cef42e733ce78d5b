#ifndef CATBENCH_QSTATE_HPP
#define CATBENCH_QSTATE_HPP

#include <utility>

#include "catbench/common.hpp"

namespace catbench {

namespace detail {
struct unchecked_t {};
inline constexpr unchecked_t unchecked{};
}  // namespace detail

/// Positive, unit-trace complex matrix. Validates Hermiticity, trace and
/// positivity on construction and stores the symmetrized matrix.
class DensityMatrix {
 public:
  /// trivial one-dimensional state; placeholder for report fields
  DensityMatrix() : m_(cmat::Ones(1, 1)) {}
  explicit DensityMatrix(const cmat& entries, const Tolerances& tol = {});
  DensityMatrix(detail::unchecked_t, cmat entries) : m_(std::move(entries)) {}

  int dim() const { return static_cast<int>(m_.rows()); }
  const cmat& matrix() const { return m_; }

  static DensityMatrix maximally_mixed(int d);
  static DensityMatrix pure(const cvec& psi);
  static DensityMatrix diagonal(const rvec& populations);

 private:
  cmat m_;
};

/// Observable with real spectrum. Validates Hermiticity and stores the
/// symmetrized matrix.
class HermitianOperator {
 public:
  /// trivial one-dimensional zero observable; placeholder for report fields
  HermitianOperator() : m_(cmat::Zero(1, 1)) {}
  explicit HermitianOperator(const cmat& entries, const Tolerances& tol = {});
  HermitianOperator(detail::unchecked_t, cmat entries) : m_(std::move(entries)) {}

  int dim() const { return static_cast<int>(m_.rows()); }
  const cmat& matrix() const { return m_; }

 private:
  cmat m_;
};

/// Complex matrix with no structural constraint beyond finite entries.
class RawOperator {
 public:
  RawOperator() : m_(cmat::Zero(1, 1)) {}
  explicit RawOperator(cmat entries);

  int dim() const { return static_cast<int>(m_.rows()); }
  const cmat& matrix() const { return m_; }

 private:
  cmat m_;
};

/// Matrix with U†U = 1 within tolerance.
class UnitaryOperator {
 public:
  explicit UnitaryOperator(const cmat& entries, const Tolerances& tol = {});
  UnitaryOperator(detail::unchecked_t, cmat entries) : m_(std::move(entries)) {}

  int dim() const { return static_cast<int>(m_.rows()); }
  const cmat& matrix() const { return m_; }

  static UnitaryOperator identity(int d);

 private:
  cmat m_;
};

/// Real coordinates on the unitary group: dim diagonal entries followed by
/// (re, im) pairs for the strict upper triangle, dim^2 values in total.
class GeneratorParams {
 public:
  GeneratorParams(int dim, rvec values);

  int dim() const { return dim_; }
  const rvec& values() const { return values_; }

  static GeneratorParams zero(int dim);

 private:
  int dim_;
  rvec values_;
};

enum class Subsystem { Battery, Catalyst };

/// Eigensystem of a Hermitian matrix, eigenvalues ascending, eigenvector
/// phases canonicalized (largest-magnitude entry made real positive) so the
/// decomposition is deterministic.
struct EigenSystem {
  rvec values;
  cmat vectors;  // columns
};

EigenSystem eig_hermitian(const cmat& a, double herm_tol = 1e-9);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep,
                            std::pair<int, int> dims);

DensityMatrix evolve(const DensityMatrix& rho, const UnitaryOperator& u);

double energy(const DensityMatrix& rho, const HermitianOperator& h);

/// -sum lambda_i ln lambda_i in nats, with 0 ln 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);

UnitaryOperator unitary_from_generator(const GeneratorParams& p);

/// Inverse of unitary_from_generator up to branch choice: parameters of a
/// Hermitian logarithm of u.
GeneratorParams generator_params(const UnitaryOperator& u);

/// Swap of two d-dimensional factors: |a>|b> -> |b>|a>.
UnitaryOperator swap_unitary(int d);

/// tr[rho P] for the projector P on eigenvector `index` of h (ascending).
double eigenvector_fidelity(const DensityMatrix& rho, const HermitianOperator& h,
                            int index = 0);

// ---------------------------------------------------------------------------
// Raw-matrix kernels shared by the optimizer's hot path. Arguments are not
// re-validated.
// ---------------------------------------------------------------------------
namespace detail {

cmat kron(const cmat& a, const cmat& b);
cmat ptrace(const cmat& m, int d_first, int d_second, Subsystem keep);
inline cmat conjugate_by(const cmat& rho, const cmat& u) {
  return u * rho * u.adjoint();
}
inline double energy_raw(const cmat& rho, const cmat& h) {
  return (rho * h).trace().real();
}
cmat generator_matrix(const rvec& params, int dim);
cmat exp_i_hermitian(const cmat& g);
rvec generator_values(const cmat& g);
double entropy_raw(const cmat& rho);

}  // namespace detail

// ---------------------------------------------------------------------------
// Seeded random instances (test and harness inputs)
// ---------------------------------------------------------------------------

cmat random_gaussian_matrix(int d, Rng& rng);
DensityMatrix random_density(int d, Rng& rng);
DensityMatrix random_real_density(int d, Rng& rng);
DensityMatrix random_diagonal_density(int d, Rng& rng);
HermitianOperator random_hermitian(int d, Rng& rng, double scale = 1.0);
UnitaryOperator haar_unitary(int d, Rng& rng);
cvec random_pure_ket(int d, Rng& rng);

}  // namespace catbench

#endif
