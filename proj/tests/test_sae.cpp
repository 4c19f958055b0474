#include <cmath>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "doctest.h"
#include "fpc/orientation.hpp"
#include "fpc/rng.hpp"
#include "fpc/sae.hpp"
#include "fpc/synthgen.hpp"

using namespace fpc;

namespace {

Matrix random_batch(int m, int n, std::uint64_t seed, double lo = 0.1, double hi = 0.9) {
  Matrix b(m, n);
  Rng rng(seed);
  for (double& v : b.flat()) v = rng.uniform(lo, hi);
  return b;
}

LayerParams zero_layer(int visible, int hidden) {
  LayerParams p;
  p.w1 = Matrix(hidden, visible);
  p.w2 = Matrix(visible, hidden);
  p.b1.assign(hidden, 0.0);
  p.b2.assign(visible, 0.0);
  return p;
}

std::vector<double> forward_one(const LayerParams& p, std::span<const double> x) {
  std::vector<double> a1 = encode(p, x);
  std::vector<double> out(p.b2);
  for (int v = 0; v < p.visible(); ++v) {
    double s = out[v];
    for (int j = 0; j < p.hidden(); ++j) s += p.w2(v, j) * a1[j];
    out[v] = sigmoid(s);
  }
  return out;
}

bool params_equal(const LayerParams& a, const LayerParams& b) {
  return std::memcmp(a.w1.data(), b.w1.data(), a.w1.size() * sizeof(double)) == 0 &&
         std::memcmp(a.w2.data(), b.w2.data(), a.w2.size() * sizeof(double)) == 0 &&
         a.b1 == b.b1 && a.b2 == b.b2;
}

}  // namespace

TEST_CASE("sigmoid: midpoint, saturation and symmetry") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(800.0) == 1.0);
  CHECK(sigmoid(-800.0) == 0.0);
  CHECK(std::isfinite(sigmoid(700.0)));
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const double z = rng.uniform(-30.0, 30.0);
    CHECK(sigmoid(z) + sigmoid(-z) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sigmoid(z) > 0.0);
    CHECK(sigmoid(z) < 1.0);
  }
}

TEST_CASE("kl_divergence: zero at the target, positive elsewhere") {
  CHECK(kl_divergence(0.05, 0.05) == doctest::Approx(0.0).epsilon(1e-15));
  // Direct evaluation of the formula as oracle.
  const double expected = 0.05 * std::log(0.05 / 0.5) + 0.95 * std::log(0.95 / 0.5);
  CHECK(kl_divergence(0.05, 0.5) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.4947).epsilon(2e-4));

  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const double rho = rng.uniform(0.01, 0.99);
    const double q = rng.uniform(0.01, 0.99);
    CHECK(kl_divergence(rho, q) >= -1e-12);
  }
}

TEST_CASE("sae cost: zero parameters reconstruct an all-0.5 input exactly") {
  LayerParams p = zero_layer(4, 3);
  Matrix batch(1, 4);
  for (double& v : batch.flat()) v = 0.5;
  SaeHyper h;
  h.lambda = 0.0;
  h.beta = 0.0;
  CHECK(sae_cost(p, batch, h) == 0.0);
}

TEST_CASE("sae cost: sparsity term vanishes when rho_hat equals rho") {
  LayerParams p = zero_layer(4, 3);  // all activations are exactly 0.5
  Matrix batch = random_batch(5, 4, 3);
  SaeHyper h;
  h.lambda = 0.0;
  h.rho = 0.5;
  h.beta = 0.0;
  const double base = sae_cost(p, batch, h);
  h.beta = 3.0;
  CHECK(sae_cost(p, batch, h) == doctest::Approx(base).epsilon(1e-15));
}

TEST_CASE("sae cost decomposes into data, decay and sparsity terms") {
  LayerParams p = init_layer(6, 4, 7);
  Matrix batch = random_batch(9, 6, 8);
  SaeHyper h;
  h.lambda = 0.003;
  h.beta = 3.0;
  h.rho = 0.05;

  SaeHyper plain = h;
  plain.lambda = 0.0;
  plain.beta = 0.0;
  const double data_term = sae_cost(p, batch, plain);

  double decay = 0.0;
  for (double w : p.w1.flat()) decay += w * w;
  for (double w : p.w2.flat()) decay += w * w;

  std::vector<double> rho_hat = mean_hidden_activation(p, batch);
  double sparsity = 0.0;
  for (double q : rho_hat) sparsity += kl_divergence(h.rho, std::clamp(q, 1e-8, 1.0 - 1e-8));

  const double full = sae_cost(p, batch, h);
  CHECK(full == doctest::Approx(data_term + h.lambda * decay + h.beta * sparsity).epsilon(1e-12));
}

TEST_CASE("sae gradients: finite-difference oracle on a 10-5-10 net") {
  LayerParams p = init_layer(10, 5, 11);
  Matrix batch = random_batch(8, 10, 12);
  SaeHyper h;
  h.lambda = 0.003;
  h.beta = 3.0;
  h.rho = 0.05;
  CHECK(gradient_check(p, batch, h) < 1e-6);
}

TEST_CASE("sae gradients: hyperparameter grid") {
  LayerParams p = init_layer(6, 3, 13);
  Matrix batch = random_batch(5, 6, 14);
  for (double lambda : {0.0, 0.003})
    for (double beta : {0.0, 3.0})
      for (double rho : {0.05, 0.1}) {
        SaeHyper h;
        h.lambda = lambda;
        h.beta = beta;
        h.rho = rho;
        CAPTURE(lambda);
        CAPTURE(beta);
        CAPTURE(rho);
        CHECK(gradient_check(p, batch, h) < 1e-6);
      }
}

TEST_CASE("sae gradients: weight-decay part is exactly 2*lambda*W") {
  LayerParams p = init_layer(5, 3, 15);
  Matrix batch = random_batch(4, 5, 16);
  SaeHyper with;
  with.lambda = 0.003;
  with.beta = 0.0;
  SaeHyper without = with;
  without.lambda = 0.0;

  SaeCostGrad g1 = sae_cost_grad(p, batch, with);
  SaeCostGrad g0 = sae_cost_grad(p, batch, without);
  for (std::size_t i = 0; i < p.w1.size(); ++i)
    CHECK(g1.grads.w1.flat()[i] - g0.grads.w1.flat()[i] ==
          doctest::Approx(2.0 * with.lambda * p.w1.flat()[i]).epsilon(1e-10));
  for (std::size_t i = 0; i < p.w2.size(); ++i)
    CHECK(g1.grads.w2.flat()[i] - g0.grads.w2.flat()[i] ==
          doctest::Approx(2.0 * with.lambda * p.w2.flat()[i]).epsilon(1e-10));
}

TEST_CASE("sae gradient_check: eps 0 is rejected") {
  LayerParams p = init_layer(3, 2, 17);
  Matrix batch = random_batch(2, 3, 18);
  CHECK_THROWS_AS(gradient_check(p, batch, SaeHyper{}, 0.0), Error);
}

TEST_CASE("sae cost_grad: dimension and finiteness checks") {
  LayerParams p = init_layer(4, 2, 19);
  Matrix wrong = random_batch(3, 5, 20);
  CHECK_THROWS_AS(sae_cost_grad(p, wrong, SaeHyper{}), DimError);

  Matrix bad = random_batch(2, 4, 21);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(sae_cost_grad(p, bad, SaeHyper{}), Error);
}

TEST_CASE("sae cost_grad: reference implementation agrees with the kernel path") {
  LayerParams p = init_layer(7, 4, 22);
  Matrix batch = random_batch(6, 7, 23);
  SaeHyper h;
  h.lambda = 0.003;
  h.beta = 3.0;
  SaeCostGrad a = sae_cost_grad(p, batch, h);
  SaeCostGrad b = reference::sae_cost_grad(p, batch, h);
  CHECK(a.cost == doctest::Approx(b.cost).epsilon(1e-12));
  for (std::size_t i = 0; i < a.grads.w1.size(); ++i)
    CHECK(a.grads.w1.flat()[i] == doctest::Approx(b.grads.w1.flat()[i]).epsilon(1e-10));
  for (std::size_t i = 0; i < a.grads.w2.size(); ++i)
    CHECK(a.grads.w2.flat()[i] == doctest::Approx(b.grads.w2.flat()[i]).epsilon(1e-10));
  for (std::size_t i = 0; i < a.grads.b1.size(); ++i)
    CHECK(a.grads.b1[i] == doctest::Approx(b.grads.b1[i]).epsilon(1e-10));
  for (std::size_t i = 0; i < a.grads.b2.size(); ++i)
    CHECK(a.grads.b2[i] == doctest::Approx(b.grads.b2[i]).epsilon(1e-10));
}

TEST_CASE("sae cost_grad is bitwise independent of the thread count") {
#ifdef _OPENMP
  LayerParams p = init_layer(9, 5, 24);
  Matrix batch = random_batch(12, 9, 25);
  SaeHyper h;
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  SaeCostGrad a = sae_cost_grad(p, batch, h);
  omp_set_num_threads(saved > 1 ? saved : 2);
  SaeCostGrad b = sae_cost_grad(p, batch, h);
  omp_set_num_threads(saved);
  CHECK(a.cost == b.cost);
  CHECK(params_equal(a.grads, b.grads));
#endif
}

TEST_CASE("train_layer: drives reconstruction error down on a repeated vector") {
  Matrix data(6, 5);
  const double pattern[5] = {0.2, 0.8, 0.35, 0.6, 0.7};
  for (int i = 0; i < data.rows(); ++i)
    for (int j = 0; j < data.cols(); ++j) data(i, j) = pattern[j];

  SaeHyper h;
  h.lambda = 0.0;
  h.beta = 0.0;
  h.max_iters = 3000;
  h.grad_tol = 1e-9;
  TrainedLayer t = train_layer_full(data, 4, h, 26);

  for (std::size_t i = 1; i < t.cost_history.size(); ++i)
    CHECK(t.cost_history[i] <= t.cost_history[i - 1]);

  std::vector<double> x(pattern, pattern + 5);
  std::vector<double> xhat = forward_one(t.params, x);
  double err = 0.0;
  for (int j = 0; j < 5; ++j) err += (xhat[j] - x[j]) * (xhat[j] - x[j]);
  CHECK(err < 1e-3);
}

TEST_CASE("train_layer: max_iters 0 returns the initialization unchanged") {
  Matrix data = random_batch(4, 6, 27);
  SaeHyper h;
  h.max_iters = 0;
  LayerParams trained = train_layer(data, 3, h, 28);
  LayerParams init = init_layer(6, 3, 28);
  CHECK(params_equal(trained, init));
}

TEST_CASE("train_layer: identical seeds give identical parameters") {
  Matrix data = random_batch(5, 4, 29);
  SaeHyper h;
  h.max_iters = 40;
  LayerParams a = train_layer(data, 3, h, 30);
  LayerParams b = train_layer(data, 3, h, 30);
  CHECK(params_equal(a, b));
}

TEST_CASE("train_layer: empty data errors") {
  Matrix empty;
  CHECK_THROWS_AS(train_layer(empty, 3, SaeHyper{}, 1), DimError);
}

TEST_CASE("sparsity pressure: larger beta does not loosen the activation target") {
  // Fixed synthetic instance, converged runs at two beta values.
  Matrix data = random_batch(40, 12, 31);
  SaeHyper h;
  h.lambda = 0.001;
  h.rho = 0.05;
  h.max_iters = 4000;
  h.grad_tol = 1e-6;

  auto mean_rho_gap = [&](double beta) {
    SaeHyper hb = h;
    hb.beta = beta;
    LayerParams p = train_layer(data, 6, hb, 32);
    std::vector<double> rho_hat = mean_hidden_activation(p, data);
    double gap = 0.0;
    for (double q : rho_hat) gap += std::fabs(q - h.rho);
    return gap / static_cast<double>(rho_hat.size());
  };

  const double loose = mean_rho_gap(0.3);
  const double tight = mean_rho_gap(3.0);
  CHECK(tight <= loose * 1.05);
}

TEST_CASE("encode: zero weights give 0.5 activations; encoding is deterministic") {
  LayerParams p = zero_layer(4, 3);
  std::vector<double> x{0.3, 0.9, 0.1, 0.5};
  std::vector<double> a = encode(p, x);
  REQUIRE(a.size() == 3);
  for (double v : a) CHECK(v == 0.5);
  CHECK(encode(p, x) == a);

  CHECK_THROWS_AS(encode(p, std::vector<double>{1.0, 2.0}), DimError);
}

TEST_CASE("stack_encode: 400-100-50 stack yields a 50-dim code") {
  StackedEncoder enc;
  enc.layers.push_back(init_layer(1250, 400, 33));
  enc.layers.push_back(init_layer(400, 100, 34));
  enc.layers.push_back(init_layer(100, 50, 35));
  enc.hyper.assign(3, SaeHyper{});

  Rng rng(36);
  std::vector<double> x(1250);
  for (double& v : x) v = rng.uniform(-1.0, 1.0);
  std::vector<double> code = stack_encode(enc, x);
  CHECK(code.size() == 50);
  CHECK(stack_encode(enc, x) == code);
}

TEST_CASE("train_stack: layer sizes shape the encoder") {
  Matrix data = random_batch(4, 40, 37, -1.0, 1.0);
  SaeHyper h;
  h.max_iters = 2;

  std::vector<int> single{24};
  StackedEncoder one = train_stack(data, single, h, 38);
  REQUIRE(one.layers.size() == 1);
  CHECK(one.layers[0].visible() == 40);
  CHECK(one.layers[0].hidden() == 24);

  std::vector<int> two{16, 4};
  StackedEncoder stacked = train_stack(data, two, h, 39);
  REQUIRE(stacked.layers.size() == 2);
  CHECK(stacked.layers[0].hidden() == 16);
  CHECK(stacked.layers[1].visible() == 16);
  CHECK(stacked.layers[1].hidden() == 4);

  Matrix empty;
  CHECK_THROWS_AS(train_stack(empty, single, h, 40), DimError);
}

TEST_CASE("reconstruct: zero-depth stack is the identity on angles") {
  OrientationField f = OrientationField::make(4, 5);
  Rng rng(41);
  for (double& a : f.angles) a = rng.uniform(0.0, kPi);
  FeatureVector fv = encode_features(f);

  StackedEncoder empty;
  Reconstruction rec = reconstruct(empty, fv);
  for (std::size_t i = 0; i < fv.values.size(); ++i)
    CHECK(rec.xhat[i] == doctest::Approx(fv.values[i]).epsilon(1e-9));
  for (std::size_t i = 0; i < f.cell_count(); ++i)
    CHECK(angle_distance(rec.field.angles[i], f.angles[i]) < 1e-9);
}

TEST_CASE("decode_angles: (0, 1) decodes to angle 0") {
  std::vector<double> sc{0.0, 1.0};
  OrientationField f = decode_angles(sc, 1, 1);
  CHECK(f.angles[0] == 0.0);
  CHECK_THROWS_AS(decode_angles(sc, 2, 2), DimError);
}

TEST_CASE("reconstruct: feature length must match the encoder input") {
  StackedEncoder enc;
  enc.layers.push_back(init_layer(8, 3, 50));
  enc.hyper.assign(1, SaeHyper{});
  FeatureVector fv;
  fv.rows = 1;
  fv.cols = 2;
  fv.values.assign(4, 0.5);  // encoder expects 8
  CHECK_THROWS_AS(reconstruct(enc, fv), DimError);
}

TEST_CASE("reconstruct: trained single layer recovers arch fields within 10 degrees") {
  // Constant-background (arch) fields, no noise.
  SynthSpec spec;
  spec.rows = 10;
  spec.cols = 10;
  spec.per_class = {30, 0, 0, 0};
  spec.rng_seed = 42;
  auto samples = generate_dataset(spec);

  Matrix data(static_cast<int>(samples.size()), 200);
  std::vector<FeatureVector> fvs;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    fvs.push_back(encode_features(samples[i].first));
    for (int j = 0; j < 200; ++j) data(static_cast<int>(i), j) = fvs.back().values[j];
  }

  SaeHyper h;
  h.lambda = 0.0003;
  h.beta = 0.3;
  h.rho = 0.05;
  h.max_iters = 400;
  std::vector<int> sizes{24};
  StackedEncoder enc = train_stack(data, sizes, h, 43);

  double total_err = 0.0;
  long cells = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    Reconstruction rec = reconstruct(enc, fvs[i]);
    for (std::size_t c = 0; c < samples[i].first.cell_count(); ++c) {
      total_err += angle_distance(rec.field.angles[c], samples[i].first.angles[c]);
      ++cells;
    }
  }
  const double mean_deg = total_err / cells * 180.0 / kPi;
  CHECK(mean_deg < 10.0);
}
