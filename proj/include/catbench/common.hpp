#ifndef CATBENCH_COMMON_HPP
#define CATBENCH_COMMON_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace catbench {

using complexd = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rvec = Eigen::VectorXd;

/// Thrown when a value fails one of its structural invariants. `invariant()`
/// names the violated check (e.g. "density.trace") so callers can report it.
class validation_error : public std::runtime_error {
 public:
  validation_error(std::string invariant, const std::string& what)
      : std::runtime_error(invariant + ": " + what),
        invariant_(std::move(invariant)) {}
  const std::string& invariant() const { return invariant_; }

 private:
  std::string invariant_;
};

/// Numerical tolerances shared across the library. Every field can be
/// overridden per scenario or from the CLI (--tol name=value).
struct Tolerances {
  double herm = 1e-9;      // Hermiticity defect of states/observables
  double tr = 1e-9;        // trace-one defect of states
  double uni = 1e-9;       // unitarity defect
  double psd = 1e-10;      // allowed negative eigenvalue of states
  double spec = 1e-10;     // spectrum-preservation slack
  double cat = 1e-9;       // catalyst energy drift
  double psd_cert = 1e-8;  // eigenvalue floor for the passivity certificate
  double x_spread = 1e-6;  // multiplier-ratio consistency threshold
  double con = 1e-5;       // constraint-feasibility residual
  double opt = 1e-4;       // optimizer slack for no-go assertions
  double entropy = 1e-7;   // entropy comparison slack

  void set(const std::string& name, double value);
  double get(const std::string& name) const;
  std::map<std::string, double> as_map() const;
};

/// Joint-dimension cap for tensor composition. Default 64; CATBENCH_MAX_DIM
/// overrides it (and the search cap below) at process startup.
int max_tensor_dim();

/// Joint-dimension cap for the optimization harness and the certificate
/// (the doubled space grows as the square of this). Default 9.
int max_search_dim();

/// Deterministic pseudo-random stream. Wraps a 64-bit generator with a
/// portable Box-Muller normal so sequences are identical across platforms
/// and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  /// uniform in [0,1)
  double uniform();
  /// uniform in [lo,hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// standard normal
  double normal();
  /// standard complex normal (unit variance per component)
  complexd cnormal() { return {normal(), normal()}; }
  /// derive an independent stream for worker `index`
  Rng spawn(std::uint64_t index) const;

  std::uint64_t next_u64();

 private:
  std::uint64_t state_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

inline double max_abs(const cmat& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace catbench

#endif
