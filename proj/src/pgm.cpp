#include "fpc/pgm.hpp"

#include <cstdio>
#include <fstream>

namespace fpc {

namespace {

bool is_space(std::uint8_t c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

[[noreturn]] void fail(const char* what, std::size_t offset) {
  throw ParseError(std::string("pgm: ") + what + " at byte offset " + std::to_string(offset));
}

// Skips whitespace and '#' comments (which run to end of line).
void skip_separators(std::span<const std::uint8_t> b, std::size_t& pos) {
  while (pos < b.size()) {
    if (is_space(b[pos])) {
      ++pos;
    } else if (b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
}

long parse_number(std::span<const std::uint8_t> b, std::size_t& pos, const char* what) {
  skip_separators(b, pos);
  if (pos >= b.size() || b[pos] < '0' || b[pos] > '9')
    fail((std::string("malformed header, expected ") + what).c_str(), pos);
  long v = 0;
  while (pos < b.size() && b[pos] >= '0' && b[pos] <= '9') {
    v = v * 10 + (b[pos] - '0');
    if (v > 1000000000L) fail((std::string("malformed header, ") + what + " out of range").c_str(), pos);
    ++pos;
  }
  return v;
}

}  // namespace

GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    if (bytes.size() >= 2 && bytes[0] == 'P')
      fail("unsupported magic (only binary P5 is accepted)", 0);
    fail("malformed header, missing P5 magic", 0);
  }
  pos = 2;

  long width = parse_number(bytes, pos, "width");
  long height = parse_number(bytes, pos, "height");
  long maxval = parse_number(bytes, pos, "maxval");

  if (width < 1 || height < 1) fail("malformed header, dimensions must be >= 1", pos);
  if (maxval < 1 || maxval > 255) fail("unsupported maxval (must be 1..255)", pos);

  // Exactly one whitespace byte separates the maxval from the raw payload.
  if (pos >= bytes.size() || !is_space(bytes[pos])) fail("malformed header, expected single whitespace after maxval", pos);
  ++pos;

  std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - pos < need)
    fail("truncated payload", bytes.size());

  GrayImage img;
  img.width = static_cast<int>(width);
  img.height = static_cast<int>(height);
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                    bytes.begin() + static_cast<std::ptrdiff_t>(pos + need));
  return img;
}

GrayImage load_pgm_file(const std::string& path) { return load_pgm(read_file_bytes(path)); }

std::vector<std::uint8_t> write_pgm(const GrayImage& img) {
  char header[64];
  int n = std::snprintf(header, sizeof header, "P5\n%d %d\n255\n", img.width, img.height);
  std::vector<std::uint8_t> out(header, header + n);
  out.insert(out.end(), img.pixels.begin(), img.pixels.end());
  return out;
}

void save_pgm_file(const std::string& path, const GrayImage& img) {
  write_file_bytes(path, write_pgm(img));
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path);
  return bytes;
}

void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace fpc
