#include "fpc/dataset.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fpc/orientation.hpp"
#include "fpc/pgm.hpp"

namespace fs = std::filesystem;

namespace fpc {

void save_dataset(const std::string& dir,
                  const std::vector<std::pair<OrientationField, ClassLabel>>& samples) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory: " + dir);

  std::string labels_tsv;
  std::array<int, kNumClasses> next_index{};
  for (const auto& [field, label] : samples) {
    const int idx = next_index[static_cast<int>(label)]++;
    std::string name = std::string(1, to_char(label)) + "_" + std::to_string(idx) + ".of";
    save_field((fs::path(dir) / name).string(), field);
    labels_tsv += name;
    labels_tsv += '\t';
    labels_tsv += to_char(label);
    labels_tsv += '\n';
  }

  std::ofstream out(fs::path(dir) / "labels.tsv", std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write labels.tsv in " + dir);
  out << labels_tsv;
}

std::vector<LabeledField> load_dataset(const std::string& dir, int block) {
  const fs::path labels_path = fs::path(dir) / "labels.tsv";
  std::ifstream in(labels_path, std::ios::binary);
  if (!in) throw IoError("cannot open " + labels_path.string());

  std::vector<LabeledField> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab + 1 >= line.size())
      throw ParseError("labels.tsv line " + std::to_string(lineno) + ": expected <filename> TAB <label>");

    LabeledField sample;
    sample.name = line.substr(0, tab);
    sample.label = label_from_char(line[tab + 1]);

    const fs::path file = fs::path(dir) / sample.name;
    if (file.extension() == ".pgm") {
      sample.field = block_orientation(load_pgm_file(file.string()), block);
    } else {
      sample.field = load_field(file.string());
    }
    out.push_back(std::move(sample));
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

namespace {

// splitmix64 finalizer; plain xor would keep the hash order nearly unchanged
// across neighboring seeds.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

SplitIndices split_by_name_hash(const std::vector<LabeledField>& samples, std::uint64_t seed) {
  SplitIndices split;
  for (int cls = 0; cls < kNumClasses; ++cls) {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(samples.size()); ++i)
      if (static_cast<int>(samples[i].label) == cls) idx.push_back(i);

    // Hash order, not listing order, so re-listed directories split the same.
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      const std::uint64_t ha = mix64(fnv1a64(samples[a].name) ^ seed);
      const std::uint64_t hb = mix64(fnv1a64(samples[b].name) ^ seed);
      if (ha != hb) return ha < hb;
      return samples[a].name < samples[b].name;
    });

    const std::size_t n_train = (idx.size() + 1) / 2;
    for (std::size_t i = 0; i < idx.size(); ++i)
      (i < n_train ? split.train : split.test).push_back(idx[i]);
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

}  // namespace fpc
