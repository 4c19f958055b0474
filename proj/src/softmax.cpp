#include "fpc/softmax.hpp"

#include <algorithm>
#include <cmath>

#include "fpc/optimize.hpp"
#include "fpc/rng.hpp"

namespace fpc {

namespace {

// Row of class scores theta_j . (1, x) for one sample.
void scores_for(const Matrix& theta, std::span<const double> x, double* out) {
  const int k = theta.rows();
  const int n = theta.cols() - 1;
  for (int j = 0; j < k; ++j) {
    const double* tj = theta.row(j);
    double s = tj[0];
    for (int d = 0; d < n; ++d) s += tj[d + 1] * x[d];
    out[j] = s;
  }
}

// Max-subtracted softmax over a score row, in place.
void softmax_row(double* s, int k) {
  double mx = s[0];
  for (int j = 1; j < k; ++j) mx = std::max(mx, s[j]);
  double sum = 0.0;
  for (int j = 0; j < k; ++j) {
    s[j] = std::exp(s[j] - mx);
    sum += s[j];
  }
  for (int j = 0; j < k; ++j) s[j] /= sum;
}

}  // namespace

std::vector<double> predict_proba(const SoftmaxModel& m, std::span<const double> x) {
  if (static_cast<int>(x.size()) != m.n())
    throw DimError("softmax: input length " + std::to_string(x.size()) +
                   " does not match feature size " + std::to_string(m.n()));
  for (double v : x)
    if (!std::isfinite(v)) throw Error("softmax: non-finite input");

  std::vector<double> p(m.k());
  scores_for(m.theta, x, p.data());
  softmax_row(p.data(), m.k());
  return p;
}

SoftmaxCostGrad softmax_cost_grad(const Matrix& theta, const Matrix& data,
                                  std::span<const int> labels, double lambda) {
  const int k = theta.rows();
  const int n = theta.cols() - 1;
  const int m = data.rows();
  if (m < 1) throw DimError("softmax: need at least one sample");
  if (data.cols() != n) throw DimError("softmax: data width does not match parameter size");
  if (static_cast<int>(labels.size()) != m) throw DimError("softmax: labels length mismatch");
  for (int y : labels)
    if (y < 0 || y >= k)
      throw Error("softmax: label " + std::to_string(y + 1) + " outside 1.." + std::to_string(k));

  Matrix p(m, k);
  double cost = 0.0;
  for (int i = 0; i < m; ++i) {
    double* pi = p.row(i);
    scores_for(theta, std::span<const double>(data.row(i), static_cast<std::size_t>(n)), pi);
    softmax_row(pi, k);
    cost -= std::log(pi[labels[i]]);
  }
  cost /= m;
  for (double t : theta.flat()) cost += 0.5 * lambda * t * t;

  // grad_j = (1/m) sum_i (p_ij - I{y_i=j}) x~_i + lambda theta_j
  SoftmaxCostGrad out;
  out.cost = cost;
  out.grad = Matrix(k, n + 1);
  for (int i = 0; i < m; ++i) {
    const double* pi = p.row(i);
    const double* xi = data.row(i);
    for (int j = 0; j < k; ++j) {
      const double e = (pi[j] - (labels[i] == j ? 1.0 : 0.0)) / m;
      double* gj = out.grad.row(j);
      gj[0] += e;
      for (int d = 0; d < n; ++d) gj[d + 1] += e * xi[d];
    }
  }
  for (std::size_t i = 0; i < out.grad.size(); ++i) out.grad.flat()[i] += lambda * theta.flat()[i];
  return out;
}

namespace {

Objective make_objective(const Matrix& data, std::span<const int> labels, int k, double lambda) {
  const int n = data.cols();
  std::vector<int> ys(labels.begin(), labels.end());
  return [&data, ys, k, n, lambda](std::span<const double> x, std::vector<double>* grad) {
    Matrix theta(k, n + 1);
    std::copy(x.begin(), x.end(), theta.flat().begin());
    SoftmaxCostGrad cg = softmax_cost_grad(theta, data, ys, lambda);
    if (grad) grad->assign(cg.grad.flat().begin(), cg.grad.flat().end());
    return cg.cost;
  };
}

}  // namespace

double softmax_gradient_check(const Matrix& theta, const Matrix& data,
                              std::span<const int> labels, double lambda, double eps) {
  std::vector<double> x(theta.flat().begin(), theta.flat().end());
  return finite_diff_check(make_objective(data, labels, theta.rows(), lambda), x, eps);
}

SoftmaxModel train_softmax(const Matrix& data, std::span<const int> labels, int k,
                           const SoftmaxTrainOptions& opt, std::uint64_t seed) {
  if (k < 2) throw DimError("softmax: need at least two classes");
  std::vector<bool> seen(k, false);
  for (int y : labels) {
    if (y < 0 || y >= k) throw Error("softmax: label outside 1.." + std::to_string(k));
    seen[y] = true;
  }
  for (int j = 0; j < k; ++j)
    if (!seen[j]) throw Error(std::string("softmax: no training sample for class ") + std::to_string(j + 1));

  const int n = data.cols();
  Rng rng(seed);
  std::vector<double> x0(static_cast<std::size_t>(k) * (n + 1));
  for (double& v : x0) v = rng.uniform(-0.005, 0.005);

  GdOptions gd;
  gd.max_iters = opt.max_iters;
  gd.grad_tol = opt.grad_tol;
  GdResult res = gradient_descent(make_objective(data, labels, k, opt.lambda), std::move(x0), gd);

  SoftmaxModel m;
  m.theta = Matrix(k, n + 1);
  std::copy(res.x.begin(), res.x.end(), m.theta.flat().begin());
  m.lambda_reg = opt.lambda;
  return m;
}

std::vector<std::pair<int, double>> rank_probabilities(std::span<const double> probs) {
  std::vector<std::pair<int, double>> ranked(probs.size());
  for (std::size_t j = 0; j < probs.size(); ++j) ranked[j] = {static_cast<int>(j), probs[j]};
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return ranked;
}

std::vector<std::pair<ClassLabel, double>> classify(const SoftmaxModel& m, std::span<const double> x) {
  if (m.k() != kNumClasses)
    throw DimError("classify: model has " + std::to_string(m.k()) + " classes, expected 4");
  std::vector<double> probs = predict_proba(m, x);
  std::vector<std::pair<ClassLabel, double>> out;
  out.reserve(probs.size());
  for (const auto& [idx, p] : rank_probabilities(probs))
    out.emplace_back(static_cast<ClassLabel>(idx), p);
  return out;
}

}  // namespace fpc
