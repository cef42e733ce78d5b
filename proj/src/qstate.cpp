#include "catbench/qstate.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace catbench {

// ---------------------------------------------------------------------------
// Tolerances / limits
// ---------------------------------------------------------------------------

void Tolerances::set(const std::string& name, double value) {
  if (name == "herm") herm = value;
  else if (name == "tr") tr = value;
  else if (name == "uni") uni = value;
  else if (name == "psd") psd = value;
  else if (name == "spec") spec = value;
  else if (name == "cat") cat = value;
  else if (name == "psd_cert") psd_cert = value;
  else if (name == "x_spread") x_spread = value;
  else if (name == "con") con = value;
  else if (name == "opt") opt = value;
  else if (name == "entropy") entropy = value;
  else throw validation_error("tolerances.name", "unknown tolerance '" + name + "'");
}

double Tolerances::get(const std::string& name) const {
  if (name == "herm") return herm;
  if (name == "tr") return tr;
  if (name == "uni") return uni;
  if (name == "psd") return psd;
  if (name == "spec") return spec;
  if (name == "cat") return cat;
  if (name == "psd_cert") return psd_cert;
  if (name == "x_spread") return x_spread;
  if (name == "con") return con;
  if (name == "opt") return opt;
  if (name == "entropy") return entropy;
  throw validation_error("tolerances.name", "unknown tolerance '" + name + "'");
}

std::map<std::string, double> Tolerances::as_map() const {
  return {{"herm", herm},         {"tr", tr},
          {"uni", uni},           {"psd", psd},
          {"spec", spec},         {"cat", cat},
          {"psd_cert", psd_cert}, {"x_spread", x_spread},
          {"con", con},           {"opt", opt},
          {"entropy", entropy}};
}

namespace {

int env_max_dim() {
  if (const char* s = std::getenv("CATBENCH_MAX_DIM")) {
    int v = std::atoi(s);
    if (v > 0) return v;
  }
  return 0;
}

}  // namespace

int max_tensor_dim() {
  static const int v = [] {
    int e = env_max_dim();
    return e > 0 ? std::max(e, 64) : 64;
  }();
  return v;
}

int max_search_dim() {
  static const int v = [] {
    int e = env_max_dim();
    return e > 0 ? e : 9;
  }();
  return v;
}

// ---------------------------------------------------------------------------
// Rng: splitmix64 core + Box-Muller
// ---------------------------------------------------------------------------

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_;
  }
  double u1 = 0.0;
  while (u1 <= 0.0) u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * M_PI * u2;
  cached_ = r * std::sin(a);
  have_cached_ = true;
  return r * std::cos(a);
}

Rng Rng::spawn(std::uint64_t index) const {
  Rng base = *this;
  std::uint64_t s = base.next_u64();
  return Rng(s ^ (0xd1342543de82ef95ULL * (index + 1)));
}

// ---------------------------------------------------------------------------
// Validation helpers
// ---------------------------------------------------------------------------

namespace {

void check_square(const cmat& m, const char* who) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw validation_error(std::string(who) + ".shape", "matrix must be square and non-empty");
  if (!m.allFinite())
    throw validation_error(std::string(who) + ".finite", "matrix has non-finite entries");
}

double herm_defect(const cmat& m) { return max_abs(m - m.adjoint()); }

}  // namespace

EigenSystem eig_hermitian(const cmat& a, double herm_tol) {
  check_square(a, "hermitian");
  if (herm_defect(a) > herm_tol)
    throw validation_error("hermitian.hermitian", "Hermiticity defect above tolerance");
  cmat sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<cmat> solver(sym);
  if (solver.info() != Eigen::Success)
    throw validation_error("hermitian.eig", "eigendecomposition failed");
  EigenSystem es{solver.eigenvalues(), solver.eigenvectors()};
  // canonical phases: largest-magnitude entry (lowest index on ties) real > 0
  for (int c = 0; c < es.vectors.cols(); ++c) {
    int pivot = 0;
    double best = -1.0;
    for (int r = 0; r < es.vectors.rows(); ++r) {
      double mag = std::abs(es.vectors(r, c));
      if (mag > best + 1e-12) {
        best = mag;
        pivot = r;
      }
    }
    complexd z = es.vectors(pivot, c);
    if (std::abs(z) > 0) es.vectors.col(c) *= std::conj(z) / std::abs(z);
  }
  return es;
}

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(const cmat& entries, const Tolerances& tol) {
  check_square(entries, "density");
  if (herm_defect(entries) > tol.herm)
    throw validation_error("density.hermitian", "Hermiticity defect above tolerance");
  if (std::abs(entries.trace() - complexd(1.0, 0.0)) > tol.tr)
    throw validation_error("density.trace", "trace differs from one");
  m_ = 0.5 * (entries + entries.adjoint());
  Eigen::SelfAdjointEigenSolver<cmat> solver(m_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol.psd)
    throw validation_error("density.psd", "negative eigenvalue below tolerance");
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  return DensityMatrix(detail::unchecked, cmat::Identity(d, d) / double(d));
}

DensityMatrix DensityMatrix::pure(const cvec& psi) {
  double n = psi.norm();
  if (n <= 0) throw validation_error("density.pure", "zero vector");
  cvec v = psi / n;
  return DensityMatrix(detail::unchecked, v * v.adjoint());
}

DensityMatrix DensityMatrix::diagonal(const rvec& populations) {
  cmat m = cmat::Zero(populations.size(), populations.size());
  for (int i = 0; i < populations.size(); ++i) m(i, i) = populations(i);
  return DensityMatrix(m);
}

HermitianOperator::HermitianOperator(const cmat& entries, const Tolerances& tol) {
  check_square(entries, "hermitian");
  if (herm_defect(entries) > tol.herm)
    throw validation_error("hermitian.hermitian", "Hermiticity defect above tolerance");
  m_ = 0.5 * (entries + entries.adjoint());
}

RawOperator::RawOperator(cmat entries) : m_(std::move(entries)) {
  check_square(m_, "raw");
}

UnitaryOperator::UnitaryOperator(const cmat& entries, const Tolerances& tol) {
  check_square(entries, "unitary");
  cmat defect = entries.adjoint() * entries - cmat::Identity(entries.rows(), entries.cols());
  if (max_abs(defect) > tol.uni)
    throw validation_error("unitary.unitary", "unitarity defect above tolerance");
  m_ = entries;
}

UnitaryOperator UnitaryOperator::identity(int d) {
  return UnitaryOperator(detail::unchecked, cmat::Identity(d, d));
}

GeneratorParams::GeneratorParams(int dim, rvec values)
    : dim_(dim), values_(std::move(values)) {
  if (dim <= 0 || values_.size() != static_cast<long>(dim) * dim)
    throw validation_error("generator.length", "expected dim^2 parameter values");
  if (!values_.allFinite())
    throw validation_error("generator.finite", "non-finite parameter");
}

GeneratorParams GeneratorParams::zero(int dim) {
  return GeneratorParams(dim, rvec::Zero(static_cast<long>(dim) * dim));
}

// ---------------------------------------------------------------------------
// Raw kernels
// ---------------------------------------------------------------------------

namespace detail {

cmat kron(const cmat& a, const cmat& b) {
  const long ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  cmat out(ra * rb, ca * cb);
  for (long i = 0; i < ra; ++i)
    for (long j = 0; j < ca; ++j) out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
  return out;
}

cmat ptrace(const cmat& m, int d_first, int d_second, Subsystem keep) {
  if (keep == Subsystem::Battery) {
    cmat out = cmat::Zero(d_first, d_first);
    for (int i = 0; i < d_first; ++i)
      for (int j = 0; j < d_first; ++j)
        for (int k = 0; k < d_second; ++k)
          out(i, j) += m(i * d_second + k, j * d_second + k);
    return out;
  }
  cmat out = cmat::Zero(d_second, d_second);
  for (int i = 0; i < d_second; ++i)
    for (int j = 0; j < d_second; ++j)
      for (int k = 0; k < d_first; ++k)
        out(i, j) += m(k * d_second + i, k * d_second + j);
  return out;
}

cmat generator_matrix(const rvec& params, int dim) {
  cmat g = cmat::Zero(dim, dim);
  long idx = 0;
  for (int i = 0; i < dim; ++i) g(i, i) = params(idx++);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      double re = params(idx++);
      double im = params(idx++);
      g(i, j) = complexd(re, im);
      g(j, i) = complexd(re, -im);
    }
  return g;
}

cmat exp_i_hermitian(const cmat& g) {
  Eigen::SelfAdjointEigenSolver<cmat> solver(g);
  cvec phases(g.rows());
  for (int i = 0; i < g.rows(); ++i)
    phases(i) = std::polar(1.0, solver.eigenvalues()(i));
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

rvec generator_values(const cmat& g) {
  const int d = static_cast<int>(g.rows());
  rvec p(static_cast<long>(d) * d);
  long idx = 0;
  for (int i = 0; i < d; ++i) p(idx++) = g(i, i).real();
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      p(idx++) = g(i, j).real();
      p(idx++) = g(i, j).imag();
    }
  return p;
}

double entropy_raw(const cmat& rho) {
  Eigen::SelfAdjointEigenSolver<cmat> solver(0.5 * (rho + rho.adjoint()),
                                             Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < solver.eigenvalues().size(); ++i) {
    double lam = solver.eigenvalues()(i);
    if (lam > 0) s -= lam * std::log(lam);
  }
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

namespace {

void check_tensor_dim(long da, long db) {
  if (da * db > max_tensor_dim())
    throw validation_error("tensor.dim", "joint dimension exceeds configured maximum");
}

}  // namespace

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  check_tensor_dim(a.dim(), b.dim());
  return DensityMatrix(detail::unchecked, detail::kron(a.matrix(), b.matrix()));
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  check_tensor_dim(a.dim(), b.dim());
  return HermitianOperator(detail::unchecked, detail::kron(a.matrix(), b.matrix()));
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep,
                            std::pair<int, int> dims) {
  auto [d_b, d_c] = dims;
  if (d_b <= 0 || d_c <= 0 || rho.dim() != d_b * d_c)
    throw validation_error("ptrace.dims", "subsystem dimensions do not factor the state");
  return DensityMatrix(detail::unchecked,
                       detail::ptrace(rho.matrix(), d_b, d_c, keep));
}

DensityMatrix evolve(const DensityMatrix& rho, const UnitaryOperator& u) {
  if (rho.dim() != u.dim())
    throw validation_error("evolve.dims", "state and unitary dimensions differ");
  return DensityMatrix(detail::unchecked,
                       detail::conjugate_by(rho.matrix(), u.matrix()));
}

double energy(const DensityMatrix& rho, const HermitianOperator& h) {
  if (rho.dim() != h.dim())
    throw validation_error("energy.dims", "state and observable dimensions differ");
  return detail::energy_raw(rho.matrix(), h.matrix());
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return detail::entropy_raw(rho.matrix());
}

UnitaryOperator unitary_from_generator(const GeneratorParams& p) {
  cmat g = detail::generator_matrix(p.values(), p.dim());
  return UnitaryOperator(detail::unchecked, detail::exp_i_hermitian(g));
}

GeneratorParams generator_params(const UnitaryOperator& u) {
  // Hermitian logarithm through the Schur form; for a unitary the triangular
  // factor is diagonal up to rounding.
  Eigen::ComplexSchur<cmat> schur(u.matrix());
  const int d = u.dim();
  cmat g = cmat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    complexd lam = schur.matrixT()(i, i);
    g(i, i) = std::arg(lam);
  }
  cmat log_u = schur.matrixU() * g * schur.matrixU().adjoint();
  log_u = 0.5 * (log_u + log_u.adjoint());
  return GeneratorParams(d, detail::generator_values(log_u));
}

UnitaryOperator swap_unitary(int d) {
  if (d <= 0) throw validation_error("swap.dim", "dimension must be positive");
  cmat s = cmat::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) s(b * d + a, a * d + b) = 1.0;
  return UnitaryOperator(detail::unchecked, s);
}

double eigenvector_fidelity(const DensityMatrix& rho, const HermitianOperator& h,
                            int index) {
  if (rho.dim() != h.dim())
    throw validation_error("fidelity.dims", "state and observable dimensions differ");
  EigenSystem es = eig_hermitian(h.matrix());
  cvec v = es.vectors.col(index);
  double f = (v.adjoint() * rho.matrix() * v)(0).real();
  return std::clamp(f, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Random instances
// ---------------------------------------------------------------------------

cmat random_gaussian_matrix(int d, Rng& rng) {
  cmat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = rng.cnormal();
  return m;
}

DensityMatrix random_density(int d, Rng& rng) {
  cmat g = random_gaussian_matrix(d, rng);
  cmat m = g * g.adjoint();
  m /= m.trace();
  return DensityMatrix(detail::unchecked, 0.5 * (m + m.adjoint()));
}

DensityMatrix random_real_density(int d, Rng& rng) {
  cmat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
  cmat m = g * g.adjoint();
  m /= m.trace();
  return DensityMatrix(detail::unchecked, 0.5 * (m + m.adjoint()));
}

DensityMatrix random_diagonal_density(int d, Rng& rng) {
  rvec p(d);
  double total = 0.0;
  for (int i = 0; i < d; ++i) {
    p(i) = -std::log(1.0 - rng.uniform());
    total += p(i);
  }
  return DensityMatrix::diagonal(p / total);
}

HermitianOperator random_hermitian(int d, Rng& rng, double scale) {
  cmat g = random_gaussian_matrix(d, rng);
  return HermitianOperator(detail::unchecked, scale * 0.5 * (g + g.adjoint()));
}

UnitaryOperator haar_unitary(int d, Rng& rng) {
  cmat g = random_gaussian_matrix(d, rng);
  Eigen::HouseholderQR<cmat> qr(g);
  cmat q = qr.householderQ();
  cmat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix the phase ambiguity of QR so the distribution is Haar
  for (int i = 0; i < d; ++i) {
    complexd rii = r(i, i);
    if (std::abs(rii) > 0) q.col(i) *= rii / std::abs(rii);
  }
  return UnitaryOperator(detail::unchecked, q);
}

cvec random_pure_ket(int d, Rng& rng) {
  cvec v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.cnormal();
  return v / v.norm();
}

}  // namespace catbench
