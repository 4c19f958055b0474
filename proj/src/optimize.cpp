#include "fpc/optimize.hpp"

#include <cmath>

#include "fpc/linalg.hpp"
#include "fpc/types.hpp"

namespace fpc {

GdResult gradient_descent(const Objective& f, std::vector<double> x0, const GdOptions& opt) {
  GdResult res;
  res.x = std::move(x0);

  std::vector<double> grad;
  double cost = f(res.x, &grad);
  if (!std::isfinite(cost)) throw TrainError("training diverged at iteration 0 (non-finite cost)", 0);
  res.cost_history.push_back(cost);

  double step = opt.init_step;
  std::vector<double> trial(res.x.size());

  int it = 0;
  for (; it < opt.max_iters; ++it) {
    if (inf_norm(grad) <= opt.grad_tol) {
      res.converged = true;
      break;
    }
    const double gg = dot(grad, grad);

    // Backtracking with step memory: probe a little above the last accepted
    // step, shrink until the Armijo condition holds.
    double alpha = step * 2.0;
    bool accepted = false;
    while (alpha > 1e-18) {
      for (std::size_t i = 0; i < res.x.size(); ++i) trial[i] = res.x[i] - alpha * grad[i];
      double trial_cost = f(trial, nullptr);
      if (std::isfinite(trial_cost) && trial_cost <= cost - opt.armijo_c * alpha * gg) {
        accepted = true;
        break;
      }
      alpha *= opt.shrink;
    }
    if (!accepted) break;  // no descent step representable; stop here

    res.x.swap(trial);
    step = alpha;
    cost = f(res.x, &grad);
    if (!std::isfinite(cost))
      throw TrainError("training diverged at iteration " + std::to_string(it + 1) + " (non-finite cost)", it + 1);
    res.cost_history.push_back(cost);
  }

  if (it == opt.max_iters && inf_norm(grad) <= opt.grad_tol) res.converged = true;
  res.cost = cost;
  res.iterations = it;
  return res;
}

double finite_diff_check(const Objective& f, std::span<const double> x, double eps) {
  if (!(eps > 0.0)) throw Error("finite_diff_check: eps must be > 0");

  std::vector<double> grad;
  std::vector<double> xs(x.begin(), x.end());
  f(xs, &grad);

  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double orig = xs[i];
    xs[i] = orig + eps;
    const double up = f(xs, nullptr);
    xs[i] = orig - eps;
    const double down = f(xs, nullptr);
    xs[i] = orig;
    const double numeric = (up - down) / (2.0 * eps);
    const double denom = std::max(1e-8, std::fabs(grad[i]) + std::fabs(numeric));
    worst = std::max(worst, std::fabs(grad[i] - numeric) / denom);
  }
  return worst;
}

}  // namespace fpc
