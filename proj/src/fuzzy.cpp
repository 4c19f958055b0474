#include "fpc/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace fpc {

FuzzyDecision fuzzy_classify(const std::vector<std::pair<ClassLabel, double>>& ranked,
                             double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw Error("fuzzy: threshold " + std::to_string(threshold) + " outside [0, 1]");
  if (ranked.empty()) throw Error("fuzzy: empty ranking");
  double sum = 0.0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (ranked[i].second < 0.0) throw Error("fuzzy: negative probability in ranking");
    if (i > 0 && ranked[i].second > ranked[i - 1].second + 1e-12)
      throw Error("fuzzy: ranking is not descending");
    sum += ranked[i].second;
  }
  if (sum > 1.0 + 1e-9) throw Error("fuzzy: ranking probabilities exceed 1");

  FuzzyDecision d;
  d.ranked = ranked;
  d.primary = ranked[0].first;
  if (ranked.size() > 1 && d.fp() < threshold) d.secondary = ranked[1].first;
  return d;
}

bool rescue_condition(const FuzzyDecision& d, double sum_threshold) {
  return d.fp() + d.sp() < sum_threshold;
}

void reject_lowest(std::vector<FuzzyDecision>& decisions, double fraction) {
  if (!(fraction >= 0.0 && fraction < 1.0))
    throw Error("reject: fraction " + std::to_string(fraction) + " outside [0, 1)");
  const std::size_t n = decisions.size();
  // Guard against fp noise in fraction*n so exact products stay exact.
  const auto n_reject = static_cast<std::size_t>(
      std::max(0.0, std::ceil(fraction * static_cast<double>(n) - 1e-9)));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return decisions[a].fp() < decisions[b].fp();
  });
  for (std::size_t i = 0; i < n_reject && i < n; ++i) decisions[order[i]].rejected = true;
}

std::vector<SweepRow> sweep(const std::vector<FuzzyDecision>& decisions,
                            std::span<const ClassLabel> labels,
                            std::span<const double> thresholds) {
  if (decisions.size() != labels.size()) throw DimError("sweep: decisions/labels length mismatch");

  std::vector<SweepRow> rows;
  rows.reserve(thresholds.size());
  const int n = static_cast<int>(decisions.size());
  for (double t : thresholds) {
    SweepRow row;
    row.threshold = t;
    int correct_above = 0;
    for (int i = 0; i < n; ++i) {
      const FuzzyDecision& d = decisions[i];
      const bool first_ok = d.primary == labels[i];
      if (d.fp() < t) {
        ++row.n_below;
        if (first_ok)
          ++row.first_correct_below;
        else
          ++row.first_wrong_below;
        if (d.ranked.size() > 1 && d.ranked[1].first == labels[i]) ++row.second_correct_below;
      } else if (first_ok) {
        ++correct_above;
      }
    }
    row.n_considered = n + row.n_below;
    row.acc_fuzzy = n == 0 ? 0.0
                           : static_cast<double>(correct_above + row.first_correct_below +
                                                 row.second_correct_below) /
                                 n;
    rows.push_back(row);
  }
  return rows;
}

std::pair<int, double> recall_rate(const std::vector<FuzzyDecision>& misclassified,
                                   std::span<const ClassLabel> true_labels,
                                   double sum_threshold) {
  if (misclassified.size() != true_labels.size())
    throw DimError("recall_rate: decisions/labels length mismatch");

  int num_below = 0;
  int third_right = 0;
  for (std::size_t i = 0; i < misclassified.size(); ++i) {
    const FuzzyDecision& d = misclassified[i];
    if (d.fp() + d.sp() < sum_threshold) {
      ++num_below;
      if (d.ranked.size() > 2 && d.ranked[2].first == true_labels[i]) ++third_right;
    }
  }
  const double recall = num_below == 0 ? 0.0 : static_cast<double>(third_right) / num_below;
  return {num_below, recall};
}

std::string sweep_to_tsv(std::span<const SweepRow> rows) {
  std::string out =
      "threshold\tn_below\tfirst_correct_below\tsecond_correct_below\tfirst_wrong_below\tn_considered\tacc_fuzzy\n";
  char buf[160];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6g\t%d\t%d\t%d\t%d\t%d\t%.6f\n", r.threshold, r.n_below,
                  r.first_correct_below, r.second_correct_below, r.first_wrong_below,
                  r.n_considered, r.acc_fuzzy);
    out += buf;
  }
  return out;
}

}  // namespace fpc
