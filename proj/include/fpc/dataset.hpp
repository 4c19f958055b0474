#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fpc/types.hpp"

namespace fpc {

struct LabeledField {
  std::string name;  // filename within the dataset directory
  OrientationField field;
  ClassLabel label = ClassLabel::A;
};

// Directory layout: one `<label>_<index>.of` per sample plus `labels.tsv`
// (filename TAB label). Writing is byte-deterministic.
void save_dataset(const std::string& dir,
                  const std::vector<std::pair<OrientationField, ClassLabel>>& samples);

// Reads labels.tsv and loads each entry; `.pgm` entries are run through the
// block-orientation estimator, anything else is parsed as an `.of` file.
std::vector<LabeledField> load_dataset(const std::string& dir, int block = 20);

std::uint64_t fnv1a64(std::string_view s);

struct SplitIndices {
  std::vector<int> train;
  std::vector<int> test;
};

// Per-class 50/50 split ordered by filename hash (keyed with the seed), so the
// split is stable under directory re-listing and reproducible across runs.
SplitIndices split_by_name_hash(const std::vector<LabeledField>& samples, std::uint64_t seed);

}  // namespace fpc
