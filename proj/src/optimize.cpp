#include "catbench/optimize.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace catbench {

SimplexResult nelder_mead(const std::function<double(const rvec&)>& f,
                          const rvec& start, const SimplexOptions& options) {
  const int n = static_cast<int>(start.size());
  const double alpha = 1.0, gamma = 2.0, beta = 0.5, delta = 0.5;

  std::vector<rvec> xs(n + 1, start);
  std::vector<double> fs(n + 1);
  int evals = 0;
  auto eval = [&](const rvec& x) {
    ++evals;
    return f(x);
  };

  for (int i = 1; i <= n; ++i) xs[i](i - 1) += options.initial_step;
  for (int i = 0; i <= n; ++i) fs[i] = eval(xs[i]);

  std::vector<int> order(n + 1);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fs[a] < fs[b]; });
    const int best = order[0], worst = order[n], second_worst = order[n - 1];

    if (fs[worst] - fs[best] <=
        options.f_tolerance * (1.0 + std::abs(fs[best])))
      break;
    double spread = 0.0;
    for (int i = 1; i <= n; ++i)
      spread = std::max(spread, (xs[order[i]] - xs[best]).cwiseAbs().maxCoeff());
    if (spread <= options.x_tolerance) break;

    rvec centroid = rvec::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += xs[i];
    centroid /= double(n);

    rvec reflected = centroid + alpha * (centroid - xs[worst]);
    double f_reflected = eval(reflected);

    if (f_reflected < fs[best]) {
      rvec expanded = centroid + gamma * (reflected - centroid);
      double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        xs[worst] = expanded;
        fs[worst] = f_expanded;
      } else {
        xs[worst] = reflected;
        fs[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < fs[second_worst]) {
      xs[worst] = reflected;
      fs[worst] = f_reflected;
      continue;
    }

    bool outside = f_reflected < fs[worst];
    rvec contracted;
    if (outside) contracted = centroid + beta * (reflected - centroid);
    else contracted = centroid - beta * (centroid - xs[worst]);
    double f_contracted = eval(contracted);
    if (f_contracted < std::min(f_reflected, fs[worst])) {
      xs[worst] = contracted;
      fs[worst] = f_contracted;
      continue;
    }

    // shrink toward the best vertex
    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      xs[i] = xs[best] + delta * (xs[i] - xs[best]);
      fs[i] = eval(xs[i]);
    }
  }

  int best = static_cast<int>(
      std::min_element(fs.begin(), fs.end()) - fs.begin());
  return SimplexResult{xs[best], fs[best], evals};
}

}  // namespace catbench
