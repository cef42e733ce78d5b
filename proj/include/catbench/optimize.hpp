#ifndef CATBENCH_OPTIMIZE_HPP
#define CATBENCH_OPTIMIZE_HPP

#include <functional>

#include "catbench/common.hpp"

namespace catbench {

struct SimplexOptions {
  int max_iterations = 400;
  double initial_step = 0.15;
  double f_tolerance = 1e-12;
  double x_tolerance = 1e-10;
};

struct SimplexResult {
  rvec x;
  double value = 0.0;
  int evaluations = 0;
};

/// Nelder-Mead downhill simplex on R^n. Deterministic: the walk depends only
/// on the start point and the objective.
SimplexResult nelder_mead(const std::function<double(const rvec&)>& f,
                          const rvec& start, const SimplexOptions& options = {});

}  // namespace catbench

#endif
