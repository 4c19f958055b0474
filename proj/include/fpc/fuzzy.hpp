#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fpc/types.hpp"

namespace fpc {

// Post-classification decision for one sample. fp/sp/tp are the first, second
// and third probability values of the ranking.
struct FuzzyDecision {
  std::vector<std::pair<ClassLabel, double>> ranked;  // descending
  ClassLabel primary = ClassLabel::A;
  std::optional<ClassLabel> secondary;  // present iff fp < threshold used
  bool rescued = false;
  bool rejected = false;

  double fp() const { return ranked.empty() ? 0.0 : ranked[0].second; }
  double sp() const { return ranked.size() > 1 ? ranked[1].second : 0.0; }
  double tp() const { return ranked.size() > 2 ? ranked[2].second : 0.0; }
};

// Assign the second class when the top probability falls below threshold.
// Throws Error if threshold is outside [0, 1] or the ranking is invalid.
FuzzyDecision fuzzy_classify(const std::vector<std::pair<ClassLabel, double>>& ranked,
                             double threshold);

// True iff fp + sp < sum_threshold (the sample's third class deserves a look).
bool rescue_condition(const FuzzyDecision& d, double sum_threshold);

// Mark exactly ceil(fraction * N) decisions rejected, chosen by ascending fp,
// ties by input order. fraction must lie in [0, 1).
void reject_lowest(std::vector<FuzzyDecision>& decisions, double fraction);

struct SweepRow {
  double threshold = 0.0;
  int n_below = 0;              // samples with fp < threshold
  int first_correct_below = 0;  // of those, top class correct
  int second_correct_below = 0; // of those, second class correct
  int first_wrong_below = 0;    // n_below - first_correct_below
  int n_considered = 0;         // N + n_below (below-threshold samples counted twice)
  double acc_fuzzy = 0.0;
};

// acc_fuzzy(t) = [#(fp >= t and top correct) + #(fp < t and (top or second
// correct))] / N. Monotone non-decreasing in t; t=0 gives top-1 accuracy and
// t=1 gives top-2 accuracy.
std::vector<SweepRow> sweep(const std::vector<FuzzyDecision>& decisions,
                            std::span<const ClassLabel> labels,
                            std::span<const double> thresholds);

// Over top-1-misclassified samples only: how many have fp + sp below the
// threshold, and what fraction of those have their true class ranked third.
// Returns (num_below, recall); recall reported as 0 when num_below is 0.
std::pair<int, double> recall_rate(const std::vector<FuzzyDecision>& misclassified,
                                   std::span<const ClassLabel> true_labels,
                                   double sum_threshold);

std::string sweep_to_tsv(std::span<const SweepRow> rows);

}  // namespace fpc
