#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fpc/types.hpp"

namespace fpc {

// k x k count matrix, rows = true class, cols = assigned class. Rejected
// samples are excluded from the counts and tallied separately.
struct ConfusionMatrix {
  int k = kNumClasses;
  std::vector<long> counts;  // row-major k*k
  long n_rejected = 0;

  static ConfusionMatrix make(int k = kNumClasses);

  long at(int true_class, int assigned) const { return counts[static_cast<std::size_t>(true_class) * k + assigned]; }
  long& at(int true_class, int assigned) { return counts[static_cast<std::size_t>(true_class) * k + assigned]; }
  long total() const;
  long trace() const;
};

// rejects may be empty (no rejection) or aligned with preds/labels.
ConfusionMatrix confusion(std::span<const ClassLabel> preds,
                          std::span<const ClassLabel> labels,
                          std::span<const std::uint8_t> rejects = {});

// trace / total over non-rejected samples. Throws Error when everything was
// rejected.
double accuracy(const ConfusionMatrix& cm);

// TSV with a header row of class names, true classes down the rows.
std::string confusion_to_tsv(const ConfusionMatrix& cm);

}  // namespace fpc
