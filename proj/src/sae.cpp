#include "fpc/sae.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "fpc/rng.hpp"

namespace fpc {

namespace {

constexpr double kRhoClampLo = 1e-8;
constexpr double kRhoClampHi = 1.0 - 1e-8;

void check_batch(const LayerParams& p, const Matrix& batch) {
  if (batch.rows() < 1) throw DimError("sae: batch must contain at least one sample");
  if (batch.cols() != p.visible())
    throw DimError("sae: batch width " + std::to_string(batch.cols()) +
                   " does not match visible size " + std::to_string(p.visible()));
  for (double v : batch.flat())
    if (!std::isfinite(v)) throw Error("sae: non-finite value in batch");
}

struct Forward {
  Matrix a1;                    // m x hidden
  Matrix a2;                    // m x visible
  std::vector<double> rho_hat;  // clamped
  double cost = 0.0;
};

Forward forward_pass(const LayerParams& p, const Matrix& batch, const SaeHyper& h,
                     bool need_activations) {
  const int m = batch.rows();

  Forward f;
  f.a1 = matmul_tb(batch, p.w1);
  add_row_vector(f.a1, p.b1);
  sigmoid_inplace(f.a1);

  f.a2 = matmul_tb(f.a1, p.w2);
  add_row_vector(f.a2, p.b2);
  sigmoid_inplace(f.a2);

  // Per-row partials reduced in row order keep the sum thread-count stable.
  std::vector<double> row_err(m, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    const double* ai = f.a2.row(i);
    const double* bi = batch.row(i);
    double e = 0.0;
    for (int j = 0; j < batch.cols(); ++j) {
      const double d = ai[j] - bi[j];
      e += d * d;
    }
    row_err[i] = e;
  }
  double rec = 0.0;
  for (double e : row_err) rec += e;
  rec /= m;

  double decay = 0.0;
  for (double w : p.w1.flat()) decay += w * w;
  for (double w : p.w2.flat()) decay += w * w;

  f.rho_hat = col_means(f.a1);
  double sparsity = 0.0;
  for (double& q : f.rho_hat) {
    q = std::clamp(q, kRhoClampLo, kRhoClampHi);
    sparsity += kl_divergence(h.rho, q);
  }

  f.cost = rec + h.lambda * decay + h.beta * sparsity;
  if (!need_activations) {
    f.a1 = Matrix();
    f.a2 = Matrix();
  }
  return f;
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::vector<double> sigmoid(std::span<const double> z) {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = sigmoid(z[i]);
  return out;
}

void sigmoid_inplace(Matrix& m) {
  double* d = m.data();
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(m.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) d[i] = sigmoid(d[i]);
}

double kl_divergence(double rho, double q) {
  return rho * std::log(rho / q) + (1.0 - rho) * std::log((1.0 - rho) / (1.0 - q));
}

Matrix scale_features(const Matrix& raw) {
  Matrix out = raw;
  for (double& v : out.flat()) v = scale_input(v);
  return out;
}

double sae_cost(const LayerParams& p, const Matrix& batch, const SaeHyper& h) {
  check_batch(p, batch);
  return forward_pass(p, batch, h, false).cost;
}

namespace {

SaeCostGrad backprop_from(const LayerParams& p, const Matrix& batch, const SaeHyper& h,
                          const Forward& f) {
  const int m = batch.rows();
  const int hidden = p.hidden();
  const int visible = p.visible();

  // d2 = (2/m) (a2 - x) .* a2 (1 - a2)
  Matrix d2(m, visible);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    const double* ai = f.a2.row(i);
    const double* bi = batch.row(i);
    double* di = d2.row(i);
    for (int j = 0; j < visible; ++j)
      di[j] = (2.0 / m) * (ai[j] - bi[j]) * ai[j] * (1.0 - ai[j]);
  }

  SaeCostGrad out;
  out.cost = f.cost;
  out.grads.w2 = matmul_ta(d2, f.a1);
  for (std::size_t i = 0; i < out.grads.w2.size(); ++i)
    out.grads.w2.flat()[i] += 2.0 * h.lambda * p.w2.flat()[i];
  out.grads.b2 = col_sums(d2);

  // Sparsity pressure enters every sample through the mean activation.
  std::vector<double> sparse_term(hidden);
  for (int j = 0; j < hidden; ++j)
    sparse_term[j] = (h.beta / m) * (-h.rho / f.rho_hat[j] + (1.0 - h.rho) / (1.0 - f.rho_hat[j]));

  Matrix d1 = matmul(d2, p.w2);  // m x hidden
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    double* d1i = d1.row(i);
    const double* a1i = f.a1.row(i);
    for (int j = 0; j < hidden; ++j)
      d1i[j] = (d1i[j] + sparse_term[j]) * a1i[j] * (1.0 - a1i[j]);
  }

  out.grads.w1 = matmul_ta(d1, batch);
  for (std::size_t i = 0; i < out.grads.w1.size(); ++i)
    out.grads.w1.flat()[i] += 2.0 * h.lambda * p.w1.flat()[i];
  out.grads.b1 = col_sums(d1);
  return out;
}

}  // namespace

SaeCostGrad sae_cost_grad(const LayerParams& p, const Matrix& batch, const SaeHyper& h) {
  check_batch(p, batch);
  return backprop_from(p, batch, h, forward_pass(p, batch, h, true));
}

namespace reference {

SaeCostGrad sae_cost_grad(const LayerParams& p, const Matrix& batch, const SaeHyper& h) {
  const int m = batch.rows();
  const int hidden = p.hidden();
  const int visible = p.visible();

  // First pass: activations and mean hidden activation.
  std::vector<std::vector<double>> a1(m, std::vector<double>(hidden));
  std::vector<std::vector<double>> a2(m, std::vector<double>(visible));
  std::vector<double> rho_hat(hidden, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < hidden; ++j) {
      double z = p.b1[j];
      for (int v = 0; v < visible; ++v) z += p.w1(j, v) * batch(i, v);
      a1[i][j] = sigmoid(z);
      rho_hat[j] += a1[i][j];
    }
    for (int v = 0; v < visible; ++v) {
      double z = p.b2[v];
      for (int j = 0; j < hidden; ++j) z += p.w2(v, j) * a1[i][j];
      a2[i][v] = sigmoid(z);
    }
  }
  for (double& q : rho_hat) q = std::clamp(q / m, kRhoClampLo, kRhoClampHi);

  double cost = 0.0;
  for (int i = 0; i < m; ++i)
    for (int v = 0; v < visible; ++v) {
      const double d = a2[i][v] - batch(i, v);
      cost += d * d;
    }
  cost /= m;
  for (double w : p.w1.flat()) cost += h.lambda * w * w;
  for (double w : p.w2.flat()) cost += h.lambda * w * w;
  for (int j = 0; j < hidden; ++j) cost += h.beta * kl_divergence(h.rho, rho_hat[j]);

  // Second pass: per-sample backprop.
  SaeCostGrad out;
  out.cost = cost;
  out.grads.w1 = Matrix(hidden, visible);
  out.grads.w2 = Matrix(visible, hidden);
  out.grads.b1.assign(hidden, 0.0);
  out.grads.b2.assign(visible, 0.0);

  std::vector<double> d2(visible), d1(hidden);
  for (int i = 0; i < m; ++i) {
    for (int v = 0; v < visible; ++v)
      d2[v] = (2.0 / m) * (a2[i][v] - batch(i, v)) * a2[i][v] * (1.0 - a2[i][v]);
    for (int j = 0; j < hidden; ++j) {
      double s = 0.0;
      for (int v = 0; v < visible; ++v) s += p.w2(v, j) * d2[v];
      s += (h.beta / m) * (-h.rho / rho_hat[j] + (1.0 - h.rho) / (1.0 - rho_hat[j]));
      d1[j] = s * a1[i][j] * (1.0 - a1[i][j]);
    }
    for (int v = 0; v < visible; ++v) {
      out.grads.b2[v] += d2[v];
      for (int j = 0; j < hidden; ++j) out.grads.w2(v, j) += d2[v] * a1[i][j];
    }
    for (int j = 0; j < hidden; ++j) {
      out.grads.b1[j] += d1[j];
      for (int v = 0; v < visible; ++v) out.grads.w1(j, v) += d1[j] * batch(i, v);
    }
  }
  for (std::size_t i = 0; i < out.grads.w1.size(); ++i)
    out.grads.w1.flat()[i] += 2.0 * h.lambda * p.w1.flat()[i];
  for (std::size_t i = 0; i < out.grads.w2.size(); ++i)
    out.grads.w2.flat()[i] += 2.0 * h.lambda * p.w2.flat()[i];
  return out;
}

}  // namespace reference

std::vector<double> mean_hidden_activation(const LayerParams& p, const Matrix& batch) {
  check_batch(p, batch);
  Matrix a1 = matmul_tb(batch, p.w1);
  add_row_vector(a1, p.b1);
  sigmoid_inplace(a1);
  return col_means(a1);
}

namespace {

std::size_t param_count(int visible, int hidden) {
  return static_cast<std::size_t>(hidden) * visible + hidden +
         static_cast<std::size_t>(visible) * hidden + visible;
}

std::vector<double> flatten(const LayerParams& p) {
  std::vector<double> x;
  x.reserve(param_count(p.visible(), p.hidden()));
  x.insert(x.end(), p.w1.flat().begin(), p.w1.flat().end());
  x.insert(x.end(), p.b1.begin(), p.b1.end());
  x.insert(x.end(), p.w2.flat().begin(), p.w2.flat().end());
  x.insert(x.end(), p.b2.begin(), p.b2.end());
  return x;
}

LayerParams unflatten(std::span<const double> x, int visible, int hidden) {
  LayerParams p;
  p.w1 = Matrix(hidden, visible);
  p.w2 = Matrix(visible, hidden);
  p.b1.resize(hidden);
  p.b2.resize(visible);
  std::size_t at = 0;
  std::copy_n(x.begin() + at, p.w1.size(), p.w1.flat().begin());
  at += p.w1.size();
  std::copy_n(x.begin() + at, p.b1.size(), p.b1.begin());
  at += p.b1.size();
  std::copy_n(x.begin() + at, p.w2.size(), p.w2.flat().begin());
  at += p.w2.size();
  std::copy_n(x.begin() + at, p.b2.size(), p.b2.begin());
  return p;
}

// The line search probes the cost right where the next gradient is taken, so
// the objective keeps the last forward pass and reuses it for that gradient.
struct ForwardCache {
  std::vector<double> x;
  Forward fwd;
  bool valid = false;
};

Objective make_objective(const Matrix& batch, const SaeHyper& h, int visible, int hidden) {
  auto cache = std::make_shared<ForwardCache>();
  return [&batch, h, visible, hidden, cache](std::span<const double> x, std::vector<double>* grad) {
    LayerParams p = unflatten(x, visible, hidden);
    check_batch(p, batch);
    if (!grad) {
      cache->fwd = forward_pass(p, batch, h, true);
      cache->x.assign(x.begin(), x.end());
      cache->valid = true;
      return cache->fwd.cost;
    }
    const bool hit = cache->valid && cache->x.size() == x.size() &&
                     std::equal(x.begin(), x.end(), cache->x.begin());
    SaeCostGrad cg = backprop_from(p, batch, h, hit ? cache->fwd : forward_pass(p, batch, h, true));
    *grad = flatten(cg.grads);
    return cg.cost;
  };
}

}  // namespace

double gradient_check(const LayerParams& p, const Matrix& batch, const SaeHyper& h, double eps) {
  check_batch(p, batch);
  return finite_diff_check(make_objective(batch, h, p.visible(), p.hidden()), flatten(p), eps);
}

LayerParams init_layer(int visible, int hidden, std::uint64_t seed) {
  if (visible < 1 || hidden < 1) throw DimError("sae: layer sizes must be >= 1");
  const double r = std::sqrt(6.0) / std::sqrt(static_cast<double>(visible) + hidden + 1.0);
  Rng rng(seed);
  LayerParams p;
  p.w1 = Matrix(hidden, visible);
  p.w2 = Matrix(visible, hidden);
  p.b1.assign(hidden, 0.0);
  p.b2.assign(visible, 0.0);
  for (double& w : p.w1.flat()) w = rng.uniform(-r, r);
  for (double& w : p.w2.flat()) w = rng.uniform(-r, r);
  return p;
}

TrainedLayer train_layer_full(const Matrix& data, int hidden, const SaeHyper& h, std::uint64_t seed) {
  if (data.rows() < 1 || data.cols() < 1) throw DimError("sae: training data is empty");
  const int visible = data.cols();
  LayerParams init = init_layer(visible, hidden, seed);

  GdOptions opt;
  opt.max_iters = h.max_iters;
  opt.grad_tol = h.grad_tol;
  GdResult res = gradient_descent(make_objective(data, h, visible, hidden), flatten(init), opt);

  TrainedLayer t;
  t.params = unflatten(res.x, visible, hidden);
  t.cost_history = std::move(res.cost_history);
  t.converged = res.converged;
  return t;
}

LayerParams train_layer(const Matrix& data, int hidden, const SaeHyper& h, std::uint64_t seed) {
  return train_layer_full(data, hidden, h, seed).params;
}

std::vector<double> encode(const LayerParams& p, std::span<const double> x) {
  if (static_cast<int>(x.size()) != p.visible())
    throw DimError("sae encode: input length " + std::to_string(x.size()) +
                   " does not match visible size " + std::to_string(p.visible()));
  std::vector<double> z(p.b1);
  for (int j = 0; j < p.hidden(); ++j) {
    const double* wj = p.w1.row(j);
    double s = z[j];
    for (int v = 0; v < p.visible(); ++v) s += wj[v] * x[v];
    z[j] = sigmoid(s);
  }
  return z;
}

Matrix encode_batch(const LayerParams& p, const Matrix& data) {
  if (data.cols() != p.visible()) throw DimError("sae encode: batch width does not match visible size");
  Matrix a = matmul_tb(data, p.w1);
  add_row_vector(a, p.b1);
  sigmoid_inplace(a);
  return a;
}

StackedEncoder train_stack(const Matrix& raw_data, std::span<const int> layer_sizes,
                           const SaeHyper& h, std::uint64_t seed) {
  std::vector<SaeHyper> per_layer(layer_sizes.size(), h);
  return train_stack(raw_data, layer_sizes, per_layer, seed);
}

StackedEncoder train_stack(const Matrix& raw_data, std::span<const int> layer_sizes,
                           std::span<const SaeHyper> h, std::uint64_t seed) {
  return train_stack_full(raw_data, layer_sizes, h, seed).encoder;
}

TrainedStack train_stack_full(const Matrix& raw_data, std::span<const int> layer_sizes,
                              std::span<const SaeHyper> h, std::uint64_t seed) {
  if (raw_data.rows() < 1) throw DimError("sae: training data is empty");
  if (h.size() != layer_sizes.size()) throw DimError("sae: one hyperparameter set per layer required");

  TrainedStack out;
  Matrix codes = scale_features(raw_data);
  for (std::size_t k = 0; k < layer_sizes.size(); ++k) {
    std::uint64_t layer_seed = seed ^ (static_cast<std::uint64_t>(k) * 0x9E3779B97F4A7C15ULL);
    TrainedLayer t = train_layer_full(codes, layer_sizes[k], h[k], layer_seed);
    codes = encode_batch(t.params, codes);
    out.encoder.layers.push_back(std::move(t.params));
    out.encoder.hyper.push_back(h[k]);
    out.cost_histories.push_back(std::move(t.cost_history));
  }
  return out;
}

std::vector<double> stack_encode(const StackedEncoder& enc, std::span<const double> x_raw) {
  std::vector<double> a(x_raw.begin(), x_raw.end());
  for (double& v : a) v = scale_input(v);
  for (const LayerParams& p : enc.layers) a = encode(p, a);
  return a;
}

Matrix stack_encode_batch(const StackedEncoder& enc, const Matrix& raw_data) {
  Matrix a = scale_features(raw_data);
  for (const LayerParams& p : enc.layers) a = encode_batch(p, a);
  return a;
}

OrientationField decode_angles(std::span<const double> xhat, int rows, int cols) {
  if (xhat.size() != 2 * static_cast<std::size_t>(rows) * cols)
    throw DimError("decode_angles: vector length " + std::to_string(xhat.size()) +
                   " does not match 2*" + std::to_string(rows) + "*" + std::to_string(cols));
  OrientationField field = OrientationField::make(rows, cols);
  const std::size_t n = field.cell_count();
  for (std::size_t i = 0; i < n; ++i)
    field.angles[i] = wrap_angle(0.5 * std::atan2(xhat[i], xhat[n + i]));
  return field;
}

Reconstruction reconstruct(const StackedEncoder& enc, const FeatureVector& fv) {
  if (!enc.layers.empty() &&
      static_cast<int>(fv.values.size()) != enc.layers.front().visible())
    throw DimError("reconstruct: feature length " + std::to_string(fv.values.size()) +
                   " does not match encoder input size " +
                   std::to_string(enc.layers.front().visible()));

  std::vector<double> a(fv.values);
  for (double& v : a) v = scale_input(v);
  for (const LayerParams& p : enc.layers) a = encode(p, a);

  // Decode back through each decoder half in reverse.
  for (auto it = enc.layers.rbegin(); it != enc.layers.rend(); ++it) {
    const LayerParams& p = *it;
    std::vector<double> d(p.b2);
    for (int v = 0; v < p.visible(); ++v) {
      const double* wv = p.w2.row(v);
      double s = d[v];
      for (int j = 0; j < p.hidden(); ++j) s += wv[j] * a[j];
      d[v] = sigmoid(s);
    }
    a = std::move(d);
  }

  Reconstruction rec;
  rec.xhat.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) rec.xhat[i] = unscale_output(a[i]);
  rec.field = decode_angles(rec.xhat, fv.rows, fv.cols);
  return rec;
}

}  // namespace fpc
