#include <cstring>

#include "doctest.h"
#include "fpc/model_io.hpp"
#include "fpc/rng.hpp"

using namespace fpc;

namespace {

Model sample_model(bool with_softmax) {
  Model m;
  m.encoder.layers.push_back(init_layer(6, 4, 1));
  m.encoder.layers.push_back(init_layer(4, 2, 2));
  SaeHyper h1;
  SaeHyper h2;
  h2.rho = 0.1;
  h2.beta = 0.5;
  m.encoder.hyper = {h1, h2};

  if (with_softmax) {
    SoftmaxModel s;
    s.theta = Matrix(4, 3);
    Rng rng(3);
    for (double& v : s.theta.flat()) v = rng.uniform(-2.0, 2.0);
    s.lambda_reg = 1e-4;
    m.softmax = std::move(s);
  }
  return m;
}

bool layers_equal(const LayerParams& a, const LayerParams& b) {
  return a.visible() == b.visible() && a.hidden() == b.hidden() &&
         std::memcmp(a.w1.data(), b.w1.data(), a.w1.size() * sizeof(double)) == 0 &&
         std::memcmp(a.w2.data(), b.w2.data(), a.w2.size() * sizeof(double)) == 0 && a.b1 == b.b1 &&
         a.b2 == b.b2;
}

}  // namespace

TEST_CASE("model io: text round trip is exact") {
  Model m = sample_model(true);
  std::string text = model_to_text(m);
  CHECK(text.rfind("SAEv1\n", 0) == 0);
  CHECK(text.find("layer 6 4 ") != std::string::npos);
  CHECK(text.find("SOFTMAXv1\n4 2 ") != std::string::npos);

  Model back = model_from_text(text);
  REQUIRE(back.encoder.layers.size() == 2);
  CHECK(layers_equal(back.encoder.layers[0], m.encoder.layers[0]));
  CHECK(layers_equal(back.encoder.layers[1], m.encoder.layers[1]));
  CHECK(back.encoder.hyper[1].rho == 0.1);
  CHECK(back.encoder.hyper[1].beta == 0.5);

  REQUIRE(back.softmax.has_value());
  CHECK(back.softmax->lambda_reg == m.softmax->lambda_reg);
  bool theta_equal = std::memcmp(back.softmax->theta.data(), m.softmax->theta.data(),
                                 m.softmax->theta.size() * sizeof(double)) == 0;
  CHECK(theta_equal);

  // Serialization is deterministic.
  CHECK(model_to_text(back) == text);
}

TEST_CASE("model io: encoder-only and zero-layer models round trip") {
  Model enc_only = sample_model(false);
  Model back = model_from_text(model_to_text(enc_only));
  CHECK(back.encoder.layers.size() == 2);
  CHECK_FALSE(back.softmax.has_value());

  Model zero;
  SoftmaxModel s;
  s.theta = Matrix(4, 5);
  zero.softmax = std::move(s);
  Model zback = model_from_text(model_to_text(zero));
  CHECK(zback.encoder.layers.empty());
  REQUIRE(zback.softmax.has_value());
  CHECK(zback.softmax->n() == 4);
}

TEST_CASE("model io: malformed inputs are rejected") {
  CHECK_THROWS_AS(model_from_text("BOGUS\n"), ParseError);
  CHECK_THROWS_AS(model_from_text("SAEv1\nlayer 2 2 0.1 0.2"), ParseError);  // truncated
  CHECK_THROWS_AS(model_from_text("SAEv1\nwhat 1 2\n"), ParseError);

  // Layer chaining must be consistent.
  Model m;
  m.encoder.layers.push_back(init_layer(4, 3, 1));
  m.encoder.layers.push_back(init_layer(4, 2, 2));  // visible 4 != previous hidden 3
  m.encoder.hyper.assign(2, SaeHyper{});
  CHECK_THROWS_AS(model_from_text(model_to_text(m)), ParseError);
}

TEST_CASE("model io: file save/load and IO errors") {
  Model m = sample_model(true);
  const std::string path = "/tmp/fpc_model_io_test.model";
  save_model(path, m);
  Model back = load_model(path);
  CHECK(model_to_text(back) == model_to_text(m));
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_model("/nonexistent/nope.model"), IoError);
  CHECK_THROWS_AS(save_model("/nonexistent/dir/nope.model", m), IoError);
}
