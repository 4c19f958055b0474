#include "fpc/orientation.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fpc {

namespace {

constexpr double kCoherenceThreshold = 0.1;
constexpr double kCoherenceEps = 1e-12;

// Central differences inside the image, one-sided on the border.
inline double grad_x(const GrayImage& img, int x, int y) {
  if (x == 0) return static_cast<double>(img.at(1, y)) - img.at(0, y);
  if (x == img.width - 1) return static_cast<double>(img.at(x, y)) - img.at(x - 1, y);
  return 0.5 * (static_cast<double>(img.at(x + 1, y)) - img.at(x - 1, y));
}

inline double grad_y(const GrayImage& img, int x, int y) {
  if (y == 0) return static_cast<double>(img.at(x, 1)) - img.at(x, 0);
  if (y == img.height - 1) return static_cast<double>(img.at(x, y)) - img.at(x, y - 1);
  return 0.5 * (static_cast<double>(img.at(x, y + 1)) - img.at(x, y - 1));
}

struct BlockSums {
  double gxx_minus_gyy = 0.0;
  double gxy2 = 0.0;
  double energy = 0.0;  // sum Gx^2 + Gy^2
};

void finish_block(const BlockSums& s, double& angle, std::uint8_t& valid) {
  double theta = 0.5 * std::atan2(s.gxy2, s.gxx_minus_gyy) + kPi / 2.0;
  angle = wrap_angle(theta);
  double coherence = std::sqrt(s.gxx_minus_gyy * s.gxx_minus_gyy + s.gxy2 * s.gxy2) /
                     (s.energy + kCoherenceEps);
  valid = coherence >= kCoherenceThreshold ? 1 : 0;
}

void check_size(const GrayImage& img, int block) {
  if (block < 1) throw DimError("block size must be >= 1");
  if (img.width < block || img.height < block)
    throw DimError("image " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                   " is smaller than one " + std::to_string(block) + "x" + std::to_string(block) + " block");
}

}  // namespace

OrientationField block_orientation(const GrayImage& img, int block) {
  check_size(img, block);
  const int rows = img.height / block;
  const int cols = img.width / block;
  // Center-crop to the largest block multiple (512 -> 500 with the default).
  const int ox = (img.width - cols * block) / 2;
  const int oy = (img.height - rows * block) / 2;

  OrientationField field = OrientationField::make(rows, cols);
#pragma omp parallel for schedule(static)
  for (int br = 0; br < rows; ++br) {
    for (int bc = 0; bc < cols; ++bc) {
      BlockSums s;
      for (int y = oy + br * block; y < oy + (br + 1) * block; ++y) {
        for (int x = ox + bc * block; x < ox + (bc + 1) * block; ++x) {
          const double gx = grad_x(img, x, y);
          const double gy = grad_y(img, x, y);
          s.gxx_minus_gyy += gx * gx - gy * gy;
          s.gxy2 += 2.0 * gx * gy;
          s.energy += gx * gx + gy * gy;
        }
      }
      const std::size_t idx = static_cast<std::size_t>(br) * cols + bc;
      finish_block(s, field.angles[idx], field.valid[idx]);
    }
  }
  return field;
}

namespace reference {

OrientationField block_orientation(const GrayImage& img, int block) {
  check_size(img, block);
  const int rows = img.height / block;
  const int cols = img.width / block;
  const int ox = (img.width - cols * block) / 2;
  const int oy = (img.height - rows * block) / 2;

  // Two-pass variant: full gradient images first, then per-block sums.
  std::vector<double> gx(static_cast<std::size_t>(img.width) * img.height);
  std::vector<double> gy(gx.size());
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      gx[static_cast<std::size_t>(y) * img.width + x] = grad_x(img, x, y);
      gy[static_cast<std::size_t>(y) * img.width + x] = grad_y(img, x, y);
    }

  OrientationField field = OrientationField::make(rows, cols);
  for (int br = 0; br < rows; ++br)
    for (int bc = 0; bc < cols; ++bc) {
      BlockSums s;
      for (int y = oy + br * block; y < oy + (br + 1) * block; ++y)
        for (int x = ox + bc * block; x < ox + (bc + 1) * block; ++x) {
          const double a = gx[static_cast<std::size_t>(y) * img.width + x];
          const double b = gy[static_cast<std::size_t>(y) * img.width + x];
          s.gxx_minus_gyy += a * a - b * b;
          s.gxy2 += 2.0 * a * b;
          s.energy += a * a + b * b;
        }
      const std::size_t idx = static_cast<std::size_t>(br) * cols + bc;
      finish_block(s, field.angles[idx], field.valid[idx]);
    }
  return field;
}

}  // namespace reference

FeatureVector encode_features(const OrientationField& field) {
  if (field.rows < 1 || field.cols < 1 || field.cell_count() == 0)
    throw DimError("encode_features: empty orientation field");
  const std::size_t n = field.cell_count();
  FeatureVector fv;
  fv.rows = field.rows;
  fv.cols = field.cols;
  fv.values.assign(2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!field.valid[i]) continue;  // invalid cells stay (0, 0)
    fv.values[i] = std::sin(2.0 * field.angles[i]);
    fv.values[n + i] = std::cos(2.0 * field.angles[i]);
  }
  return fv;
}

EncodingScheme scheme_from_string(std::string_view s) {
  if (s == "f1") return EncodingScheme::F1;
  if (s == "f2") return EncodingScheme::F2;
  if (s == "f3") return EncodingScheme::F3;
  if (s == "f4") return EncodingScheme::F4;
  if (s == "f5") return EncodingScheme::F5;
  if (s == "f6") return EncodingScheme::F6;
  throw ParseError("unknown encoding scheme '" + std::string(s) + "' (expected f1..f6)");
}

const char* to_string(EncodingScheme s) {
  switch (s) {
    case EncodingScheme::F1: return "f1";
    case EncodingScheme::F2: return "f2";
    case EncodingScheme::F3: return "f3";
    case EncodingScheme::F4: return "f4";
    case EncodingScheme::F5: return "f5";
    case EncodingScheme::F6: return "f6";
  }
  return "?";
}

FeatureVector encode_alternative(const OrientationField& field, EncodingScheme scheme) {
  if (scheme == EncodingScheme::F6) return encode_features(field);
  if (field.rows < 1 || field.cols < 1 || field.cell_count() == 0)
    throw DimError("encode_alternative: empty orientation field");

  const std::size_t n = field.cell_count();
  // Angle plane scaled to [0, 1] so every scheme shares the input range.
  auto theta_part = [&](std::size_t i) { return field.angles[i] / kPi; };
  auto sin_part = [&](std::size_t i) { return std::sin(2.0 * field.angles[i]); };
  auto cos_part = [&](std::size_t i) { return std::cos(2.0 * field.angles[i]); };

  FeatureVector fv;
  fv.rows = field.rows;
  fv.cols = field.cols;
  const bool two_planes = scheme == EncodingScheme::F4 || scheme == EncodingScheme::F5;
  fv.values.assign(two_planes ? 2 * n : n, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    if (!field.valid[i]) continue;
    switch (scheme) {
      case EncodingScheme::F1: fv.values[i] = theta_part(i); break;
      case EncodingScheme::F2: fv.values[i] = sin_part(i); break;
      case EncodingScheme::F3: fv.values[i] = cos_part(i); break;
      case EncodingScheme::F4:
        fv.values[i] = sin_part(i);
        fv.values[n + i] = theta_part(i);
        break;
      case EncodingScheme::F5:
        fv.values[i] = cos_part(i);
        fv.values[n + i] = theta_part(i);
        break;
      case EncodingScheme::F6: break;  // handled above
    }
  }
  return fv;
}

std::string field_to_text(const OrientationField& field) {
  std::string out;
  out.reserve(field.cell_count() * 20 + 16);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%d %d\n", field.rows, field.cols);
  out += buf;
  for (int r = 0; r < field.rows; ++r) {
    for (int c = 0; c < field.cols; ++c) {
      if (c) out += ' ';
      if (field.is_valid(r, c)) {
        std::snprintf(buf, sizeof buf, "%.17g", field.at(r, c));
        out += buf;
      } else {
        out += "nan";
      }
    }
    out += '\n';
  }
  return out;
}

OrientationField field_from_text(std::string_view text) {
  const std::string buf(text);  // strtod needs a terminator
  const char* p = buf.c_str();
  auto next_long = [&](const char* what) {
    char* q = nullptr;
    long v = std::strtol(p, &q, 10);
    if (q == p) throw ParseError(std::string("of: malformed header, expected ") + what);
    p = q;
    return v;
  };
  long rows = next_long("rows");
  long cols = next_long("cols");
  if (rows < 1 || cols < 1 || rows > 100000 || cols > 100000)
    throw ParseError("of: grid dims out of range");

  OrientationField field = OrientationField::make(static_cast<int>(rows), static_cast<int>(cols));
  for (std::size_t i = 0; i < field.cell_count(); ++i) {
    char* q = nullptr;
    double v = std::strtod(p, &q);
    if (q == p)
      throw ParseError("of: truncated, expected " + std::to_string(field.cell_count()) +
                       " values, got " + std::to_string(i));
    p = q;
    if (std::isnan(v)) {
      field.angles[i] = 0.0;
      field.valid[i] = 0;
    } else {
      field.angles[i] = wrap_angle(v);
    }
  }
  return field;
}

void save_field(const std::string& path, const OrientationField& field) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << field_to_text(field);
  if (!out) throw IoError("write failed: " + path);
}

OrientationField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return field_from_text(ss.str());
}

}  // namespace fpc
