#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpc {

inline constexpr double kPi = 3.14159265358979323846;

// Four-class scheme: arch (arch + tented arch merged), left loop, right
// loop, whorl.
enum class ClassLabel : int { A = 0, L = 1, R = 2, W = 3 };

inline constexpr int kNumClasses = 4;

char to_char(ClassLabel label);
const char* to_string(ClassLabel label);
ClassLabel label_from_char(char c);

// 1-based ordinal, also the deterministic tie-break order.
inline int ordinal(ClassLabel label) { return static_cast<int>(label) + 1; }

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  using Error::Error;
};

struct DimError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct TrainError : Error {
  int iteration;
  TrainError(const std::string& msg, int iter) : Error(msg), iteration(iter) {}
};

// 8-bit grayscale image, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

// Grid of ridge angles in [0, pi) with a per-cell validity mask.
struct OrientationField {
  int rows = 0;
  int cols = 0;
  std::vector<double> angles;        // row-major, radians in [0, pi)
  std::vector<std::uint8_t> valid;   // same shape; 0 where coherence too low

  static OrientationField make(int rows, int cols);

  std::size_t cell_count() const { return static_cast<std::size_t>(rows) * cols; }
  double at(int r, int c) const { return angles[static_cast<std::size_t>(r) * cols + c]; }
  double& at(int r, int c) { return angles[static_cast<std::size_t>(r) * cols + c]; }
  bool is_valid(int r, int c) const { return valid[static_cast<std::size_t>(r) * cols + c] != 0; }
};

// Flattened feature encoding of an orientation field. For the double-angle
// encoding the layout is all sin(2theta) entries in field order followed by
// all cos(2theta) entries; invalid cells encode as (0, 0).
struct FeatureVector {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;
};

// Reduce an angle into [0, pi).
inline double wrap_angle(double a) {
  a = std::fmod(a, kPi);
  if (a < 0.0) a += kPi;
  if (a >= kPi) a = 0.0;  // guard against fmod rounding at the seam
  return a;
}

// Smallest angular distance between two ridge angles (pi-periodic), in radians.
inline double angle_distance(double a, double b) {
  double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, kPi - d);
}

}  // namespace fpc
