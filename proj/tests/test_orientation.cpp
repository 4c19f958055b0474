#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "fpc/orientation.hpp"
#include "fpc/rng.hpp"

using namespace fpc;

namespace {

// Oriented sinusoidal ridge pattern: intensity constant along direction phi.
GrayImage ridge_image(int width, int height, double phi, double wavelength) {
  GrayImage img;
  img.width = width;
  img.height = height;
  img.pixels.resize(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double u = (y * std::cos(phi) - x * std::sin(phi)) / wavelength;
      const double v = 127.5 + 127.5 * std::sin(2.0 * kPi * u);
      img.at(x, y) = static_cast<std::uint8_t>(std::lround(v));
    }
  return img;
}

OrientationField random_field(int rows, int cols, std::uint64_t seed, double invalid_frac = 0.0) {
  OrientationField f = OrientationField::make(rows, cols);
  Rng rng(seed);
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    f.angles[i] = rng.uniform(0.0, kPi);
    if (rng.next_double() < invalid_frac) f.valid[i] = 0;
  }
  return f;
}

}  // namespace

TEST_CASE("block_orientation: horizontal ridges give angle 0 everywhere") {
  GrayImage img = ridge_image(100, 100, 0.0, 10.0);
  OrientationField f = block_orientation(img, 20);
  REQUIRE(f.rows == 5);
  REQUIRE(f.cols == 5);
  for (int r = 0; r < f.rows; ++r)
    for (int c = 0; c < f.cols; ++c) {
      CHECK(f.is_valid(r, c));
      CHECK(angle_distance(f.at(r, c), 0.0) < 1e-6);
    }
}

TEST_CASE("block_orientation: constant image is entirely invalid") {
  GrayImage img;
  img.width = 60;
  img.height = 40;
  img.pixels.assign(60 * 40, 77);
  OrientationField f = block_orientation(img, 20);
  for (std::uint8_t v : f.valid) CHECK(v == 0);
}

TEST_CASE("block_orientation: 512x512 crops to a 25x25 field") {
  GrayImage img = ridge_image(512, 512, 0.6, 11.0);
  OrientationField f = block_orientation(img, 20);
  CHECK(f.rows == 25);
  CHECK(f.cols == 25);
}

TEST_CASE("block_orientation: grid dims are floor(dim/block)") {
  GrayImage img = ridge_image(45, 37, 0.3, 7.0);
  OrientationField f = block_orientation(img, 10);
  CHECK(f.rows == 3);
  CHECK(f.cols == 4);
}

TEST_CASE("block_orientation: image smaller than one block errors") {
  GrayImage img = ridge_image(12, 30, 0.0, 5.0);
  CHECK_THROWS_AS(block_orientation(img, 20), DimError);
}

TEST_CASE("block_orientation: rotating the ridges rotates every block angle") {
  const double two_deg = 2.0 * kPi / 180.0;
  for (double phi : {0.0, kPi / 6.0, kPi / 4.0, kPi / 3.0}) {
    GrayImage img = ridge_image(120, 120, phi, 12.0);
    OrientationField f = block_orientation(img, 20);
    for (int r = 0; r < f.rows; ++r)
      for (int c = 0; c < f.cols; ++c) {
        if (!f.is_valid(r, c)) continue;
        CHECK(angle_distance(f.at(r, c), phi) < two_deg);
      }
  }
}

TEST_CASE("block_orientation: serial reference agrees with the parallel kernel") {
  GrayImage img = ridge_image(160, 120, 0.9, 9.0);
  OrientationField a = block_orientation(img, 20);
  OrientationField b = reference::block_orientation(img, 20);
  REQUIRE(a.rows == b.rows);
  REQUIRE(a.cols == b.cols);
  for (std::size_t i = 0; i < a.cell_count(); ++i) {
    CHECK(a.valid[i] == b.valid[i]);
    CHECK(a.angles[i] == doctest::Approx(b.angles[i]).epsilon(1e-12));
  }
}

TEST_CASE("encode_features: single-cell fields") {
  OrientationField f = OrientationField::make(1, 1);

  f.angles[0] = 0.0;
  FeatureVector fv = encode_features(f);
  REQUIRE(fv.values.size() == 2);
  CHECK(fv.values[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fv.values[1] == doctest::Approx(1.0).epsilon(1e-12));

  f.angles[0] = kPi / 4.0;
  fv = encode_features(f);
  CHECK(fv.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fv.values[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("encode_features: 25x25 field gives a 1250-dim vector on the unit circle") {
  OrientationField f = random_field(25, 25, 3, 0.1);
  FeatureVector fv = encode_features(f);
  REQUIRE(fv.values.size() == 1250);
  const std::size_t n = f.cell_count();
  for (std::size_t i = 0; i < n; ++i) {
    const double s = fv.values[i], c = fv.values[n + i];
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
    if (f.valid[i]) {
      CHECK(std::fabs(s * s + c * c - 1.0) < 1e-9);
    } else {
      CHECK(s == 0.0);
      CHECK(c == 0.0);
    }
  }
}

TEST_CASE("encode_features: adding pi to every angle changes nothing") {
  OrientationField f = random_field(8, 9, 4);
  OrientationField g = f;
  for (double& a : g.angles) a = wrap_angle(a + kPi);
  FeatureVector fa = encode_features(f);
  FeatureVector fb = encode_features(g);
  for (std::size_t i = 0; i < fa.values.size(); ++i)
    CHECK(fa.values[i] == doctest::Approx(fb.values[i]).epsilon(1e-9));
}

TEST_CASE("encode_features: empty field errors") {
  OrientationField f;
  CHECK_THROWS_AS(encode_features(f), DimError);
}

TEST_CASE("encode_alternative: scheme values at theta = pi/2") {
  OrientationField f = OrientationField::make(1, 1);
  f.angles[0] = kPi / 2.0;

  FeatureVector f1 = encode_alternative(f, EncodingScheme::F1);
  REQUIRE(f1.values.size() == 1);
  CHECK(f1.values[0] == doctest::Approx(0.5).epsilon(1e-12));

  FeatureVector f6 = encode_alternative(f, EncodingScheme::F6);
  REQUIRE(f6.values.size() == 2);
  CHECK(f6.values[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f6.values[1] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("encode_alternative: f4 on a 25x25 field has two planes") {
  OrientationField f = random_field(25, 25, 5);
  FeatureVector fv = encode_alternative(f, EncodingScheme::F4);
  CHECK(fv.values.size() == 1250);
}

TEST_CASE("encode_alternative: f6 reproduces encode_features") {
  OrientationField f = random_field(6, 7, 8, 0.2);
  CHECK(encode_alternative(f, EncodingScheme::F6).values == encode_features(f).values);
}

TEST_CASE("encode_alternative: unknown scheme string is rejected") {
  CHECK_THROWS_AS(scheme_from_string("f7"), ParseError);
  CHECK(scheme_from_string("f4") == EncodingScheme::F4);
}

TEST_CASE("orientation field text format round trips exactly") {
  OrientationField f = random_field(5, 4, 9, 0.25);
  OrientationField g = field_from_text(field_to_text(f));
  REQUIRE(g.rows == f.rows);
  REQUIRE(g.cols == f.cols);
  CHECK(g.valid == f.valid);
  for (std::size_t i = 0; i < f.cell_count(); ++i)
    if (f.valid[i]) CHECK(g.angles[i] == f.angles[i]);  // %.17g is exact
}

TEST_CASE("orientation field text format rejects malformed input") {
  CHECK_THROWS_AS(field_from_text("bogus"), ParseError);
  CHECK_THROWS_AS(field_from_text("2 2\n0.1 0.2 0.3"), ParseError);
  CHECK_THROWS_AS(field_from_text("0 5\n"), ParseError);
}
