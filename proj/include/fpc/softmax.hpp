#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fpc/linalg.hpp"
#include "fpc/types.hpp"

namespace fpc {

// Regularized softmax regression. theta holds one row per class, length n+1
// with the intercept in column 0 (features are implicitly prefixed with 1).
struct SoftmaxModel {
  Matrix theta;
  double lambda_reg = 1e-4;

  int k() const { return theta.rows(); }
  int n() const { return theta.cols() - 1; }
};

// p_j = exp(theta_j . x~) / sum_l exp(theta_l . x~), max-subtracted for
// stability. Sums to 1 within 1e-12; every entry > 0.
std::vector<double> predict_proba(const SoftmaxModel& m, std::span<const double> x);

struct SoftmaxCostGrad {
  double cost = 0.0;
  Matrix grad;  // same shape as theta
};

// J = -(1/m) sum_i ln p_{y_i}(x_i) + (lambda/2) * sum theta^2. Intercepts are
// regularized too, which keeps the objective strictly convex. Labels are
// 0-based class indices.
SoftmaxCostGrad softmax_cost_grad(const Matrix& theta, const Matrix& data,
                                  std::span<const int> labels, double lambda);

double softmax_gradient_check(const Matrix& theta, const Matrix& data,
                              std::span<const int> labels, double lambda, double eps = 1e-5);

struct SoftmaxTrainOptions {
  double lambda = 1e-4;
  int max_iters = 2000;
  double grad_tol = 1e-5;
};

// Deterministic descent (same scheme as the autoencoder trainer). Requires at
// least one sample of every class 0..k-1.
SoftmaxModel train_softmax(const Matrix& data, std::span<const int> labels, int k,
                           const SoftmaxTrainOptions& opt, std::uint64_t seed);

// Probabilities ranked descending, ties broken by class index.
std::vector<std::pair<int, double>> rank_probabilities(std::span<const double> probs);

// Four-class ranking with ClassLabel names; requires k == 4.
std::vector<std::pair<ClassLabel, double>> classify(const SoftmaxModel& m, std::span<const double> x);

}  // namespace fpc
