#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fpc/linalg.hpp"
#include "fpc/optimize.hpp"
#include "fpc/types.hpp"

namespace fpc {

struct SaeHyper {
  double lambda = 0.003;  // weight decay
  double beta = 0.05;     // sparsity weight
  double rho = 0.2;       // target mean activation
  int max_iters = 600;
  double grad_tol = 1e-5;
};

// One autoencoder layer. W1/b1 is the encoder half, W2/b2 the decoder half.
struct LayerParams {
  Matrix w1;               // hidden x visible
  std::vector<double> b1;  // hidden
  Matrix w2;               // visible x hidden
  std::vector<double> b2;  // visible

  int visible() const { return w1.cols(); }
  int hidden() const { return w1.rows(); }
};

struct StackedEncoder {
  std::vector<LayerParams> layers;
  std::vector<SaeHyper> hyper;  // one per layer
};

double sigmoid(double z);
std::vector<double> sigmoid(std::span<const double> z);
void sigmoid_inplace(Matrix& m);

// Bernoulli KL divergence rho*ln(rho/q) + (1-rho)*ln((1-rho)/(1-q)).
double kl_divergence(double rho, double q);

// Raw features live in [-1, 1]; the sigmoid output layer wants (0, 1), so
// inputs are mapped to [0.1, 0.9] before the first layer and inverse-mapped
// on reconstruction.
inline double scale_input(double x) { return (x + 1.0) * 0.4 + 0.1; }
inline double unscale_output(double y) { return (y - 0.1) / 0.4 - 1.0; }
Matrix scale_features(const Matrix& raw);

struct SaeCostGrad {
  double cost = 0.0;
  LayerParams grads;
};

// Cost and exact analytic gradients of the sparse-autoencoder objective:
// mean squared reconstruction error + lambda * (sum W1^2 + sum W2^2)
// + beta * sum_j KL(rho || rho_hat_j). Batch rows are samples.
SaeCostGrad sae_cost_grad(const LayerParams& p, const Matrix& batch, const SaeHyper& h);
double sae_cost(const LayerParams& p, const Matrix& batch, const SaeHyper& h);

namespace reference {
// Textbook per-sample loops, no matrix kernels; kept for cross-checking the
// production path and for the benchmark tool.
SaeCostGrad sae_cost_grad(const LayerParams& p, const Matrix& batch, const SaeHyper& h);
}  // namespace reference

// Mean hidden activation per unit over the batch (the rho_hat vector).
std::vector<double> mean_hidden_activation(const LayerParams& p, const Matrix& batch);

// Compare analytic gradients against central finite differences; returns the
// max relative error. Only sensible for small parameter counts.
double gradient_check(const LayerParams& p, const Matrix& batch, const SaeHyper& h, double eps = 1e-5);

// Weights uniform in [-r, r] with r = sqrt(6)/sqrt(visible+hidden+1), biases 0.
LayerParams init_layer(int visible, int hidden, std::uint64_t seed);

struct TrainedLayer {
  LayerParams params;
  std::vector<double> cost_history;
  bool converged = false;
};

TrainedLayer train_layer_full(const Matrix& data, int hidden, const SaeHyper& h, std::uint64_t seed);
LayerParams train_layer(const Matrix& data, int hidden, const SaeHyper& h, std::uint64_t seed);

std::vector<double> encode(const LayerParams& p, std::span<const double> x);
Matrix encode_batch(const LayerParams& p, const Matrix& data);

// Greedy layer-wise training: layer k is trained as an autoencoder on the
// codes of layers 1..k-1. Raw features are scaled on entry.
StackedEncoder train_stack(const Matrix& raw_data, std::span<const int> layer_sizes,
                           const SaeHyper& h, std::uint64_t seed);
StackedEncoder train_stack(const Matrix& raw_data, std::span<const int> layer_sizes,
                           std::span<const SaeHyper> h, std::uint64_t seed);

struct TrainedStack {
  StackedEncoder encoder;
  std::vector<std::vector<double>> cost_histories;  // one per layer
};

TrainedStack train_stack_full(const Matrix& raw_data, std::span<const int> layer_sizes,
                              std::span<const SaeHyper> h, std::uint64_t seed);

// Top code of a raw feature vector (input scaling applied, then all encoders).
std::vector<double> stack_encode(const StackedEncoder& enc, std::span<const double> x_raw);
Matrix stack_encode_batch(const StackedEncoder& enc, const Matrix& raw_data);

// Decode a reconstructed double-angle vector back to angles,
// theta = 0.5*atan2(s, c) wrapped into [0, pi).
OrientationField decode_angles(std::span<const double> xhat, int rows, int cols);

struct Reconstruction {
  std::vector<double> xhat;  // raw-feature space, length 2*rows*cols
  OrientationField field;
};

// Encode through all layers, decode back through each decoder half in
// reverse, inverse-scale, and recover angles.
Reconstruction reconstruct(const StackedEncoder& enc, const FeatureVector& fv);

}  // namespace fpc
