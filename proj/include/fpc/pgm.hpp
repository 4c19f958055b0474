#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fpc/types.hpp"

namespace fpc {

// Parse a binary (P5) portable graymap with maxval <= 255. Parse failures
// throw ParseError naming the byte offset.
GrayImage load_pgm(std::span<const std::uint8_t> bytes);

GrayImage load_pgm_file(const std::string& path);

// P5 writer, maxval 255.
std::vector<std::uint8_t> write_pgm(const GrayImage& img);
void save_pgm_file(const std::string& path, const GrayImage& img);

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace fpc
