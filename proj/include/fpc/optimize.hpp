#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fpc {

// Objective callback: returns the cost at x; fills *grad (resized by the
// callee) when grad is non-null.
using Objective = std::function<double(std::span<const double> x, std::vector<double>* grad)>;

struct GdOptions {
  int max_iters = 400;
  double grad_tol = 1e-4;     // on the infinity norm of the gradient
  double armijo_c = 1e-4;
  double shrink = 0.5;
  double init_step = 1.0;
};

struct GdResult {
  std::vector<double> x;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> cost_history;  // non-increasing by construction
};

// Full-batch gradient descent with backtracking (Armijo) line search.
// Deterministic for a given objective and start point. Throws TrainError if
// the cost becomes non-finite, reporting the iteration.
GdResult gradient_descent(const Objective& f, std::vector<double> x0, const GdOptions& opt);

// Max relative error between the analytic gradient of f at x and central
// finite differences with step eps. Throws Error if eps <= 0.
double finite_diff_check(const Objective& f, std::span<const double> x, double eps = 1e-5);

}  // namespace fpc
