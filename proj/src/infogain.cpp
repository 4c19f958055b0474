#include "fpc/infogain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace fpc {

namespace {

double entropy_of_counts(std::span<const long> counts, long total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  for (long c : counts) {
    if (c == 0) continue;  // empty classes contribute 0
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

double empirical_entropy(std::span<const ClassLabel> labels) {
  if (labels.empty()) throw Error("entropy: empty label set");
  std::array<long, kNumClasses> counts{};
  for (ClassLabel l : labels) ++counts[static_cast<int>(l)];
  return entropy_of_counts(counts, static_cast<long>(labels.size()));
}

double conditional_entropy(std::span<const double> feature,
                           std::span<const ClassLabel> labels, int bins) {
  if (feature.size() != labels.size()) throw DimError("conditional_entropy: length mismatch");
  if (labels.empty()) throw Error("conditional_entropy: empty input");
  if (bins < 1) throw Error("conditional_entropy: bins must be >= 1");

  double lo = feature[0], hi = feature[0];
  for (double v : feature) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  // Equal-width bins over [lo, hi]; a constant feature collapses to one bin.
  std::vector<std::array<long, kNumClasses>> bin_counts(bins);
  for (auto& b : bin_counts) b.fill(0);
  const double range = hi - lo;
  for (std::size_t i = 0; i < feature.size(); ++i) {
    int idx = 0;
    if (range > 0.0) {
      idx = static_cast<int>((feature[i] - lo) / range * bins);
      idx = std::clamp(idx, 0, bins - 1);
    }
    ++bin_counts[idx][static_cast<int>(labels[i])];
  }

  const long total = static_cast<long>(labels.size());
  double h = 0.0;
  for (const auto& b : bin_counts) {
    long in_bin = 0;
    for (long c : b) in_bin += c;
    if (in_bin == 0) continue;
    h += static_cast<double>(in_bin) / total * entropy_of_counts(b, in_bin);
  }
  return h;
}

EntropyStats information_gain(std::span<const double> feature,
                              std::span<const ClassLabel> labels, int bins) {
  EntropyStats s;
  s.bins = bins;
  s.h_t = empirical_entropy(labels);
  s.h_t_given_f = conditional_entropy(feature, labels, bins);
  s.gain = std::max(0.0, s.h_t - s.h_t_given_f);
  return s;
}

namespace {

struct BinRange {
  double lo = 0.0;
  double range = 0.0;
};

BinRange range_of(std::span<const double> v) {
  BinRange r;
  r.lo = v[0];
  double hi = v[0];
  for (double x : v) {
    r.lo = std::min(r.lo, x);
    hi = std::max(hi, x);
  }
  r.range = hi - r.lo;
  return r;
}

int bin_index(double v, const BinRange& r, int bins) {
  if (r.range <= 0.0) return 0;
  return std::clamp(static_cast<int>((v - r.lo) / r.range * bins), 0, bins - 1);
}

}  // namespace

EntropyStats information_gain2(std::span<const double> fa, std::span<const double> fb,
                               std::span<const ClassLabel> labels, int bins) {
  if (fa.size() != labels.size() || fb.size() != labels.size())
    throw DimError("information_gain2: length mismatch");
  if (labels.empty()) throw Error("information_gain2: empty input");
  if (bins < 1) throw Error("information_gain2: bins must be >= 1");

  const BinRange ra = range_of(fa);
  const BinRange rb = range_of(fb);
  std::vector<std::array<long, kNumClasses>> cells(static_cast<std::size_t>(bins) * bins);
  for (auto& c : cells) c.fill(0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int idx = bin_index(fa[i], ra, bins) * bins + bin_index(fb[i], rb, bins);
    ++cells[idx][static_cast<int>(labels[i])];
  }

  const long total = static_cast<long>(labels.size());
  double h = 0.0;
  for (const auto& c : cells) {
    long in_cell = 0;
    for (long v : c) in_cell += v;
    if (in_cell == 0) continue;
    h += static_cast<double>(in_cell) / total * entropy_of_counts(c, in_cell);
  }

  EntropyStats s;
  s.bins = bins;
  s.h_t = empirical_entropy(labels);
  s.h_t_given_f = h;
  s.gain = std::max(0.0, s.h_t - s.h_t_given_f);
  return s;
}

std::vector<SchemeGain> compare_encodings(
    const std::vector<std::pair<OrientationField, ClassLabel>>& dataset,
    std::span<const EncodingScheme> schemes, int bins) {
  if (dataset.empty()) throw Error("compare_encodings: empty dataset");

  std::vector<ClassLabel> labels;
  labels.reserve(dataset.size());
  for (const auto& [field, label] : dataset) labels.push_back(label);

  std::vector<SchemeGain> out;
  out.reserve(schemes.size());
  for (EncodingScheme scheme : schemes) {
    std::vector<FeatureVector> encoded;
    encoded.reserve(dataset.size());
    for (const auto& [field, label] : dataset) encoded.push_back(encode_alternative(field, scheme));

    const std::size_t dims = encoded.front().values.size();
    const std::size_t cells =
        static_cast<std::size_t>(encoded.front().rows) * encoded.front().cols;
    const bool paired = dims == 2 * cells;
    for (const FeatureVector& fv : encoded)
      if (fv.values.size() != dims) throw DimError("compare_encodings: inconsistent field shapes");

    std::vector<double> gains(cells, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t d = 0; d < static_cast<std::ptrdiff_t>(cells); ++d) {
      std::vector<double> a(encoded.size()), b(paired ? encoded.size() : 0);
      for (std::size_t i = 0; i < encoded.size(); ++i) {
        a[i] = encoded[i].values[d];
        if (paired) b[i] = encoded[i].values[cells + d];
      }
      gains[d] = paired ? information_gain2(a, b, labels, bins).gain
                        : information_gain(a, labels, bins).gain;
    }

    double mean = 0.0;
    for (double g : gains) mean += g;  // fixed order, independent of worker count
    mean /= static_cast<double>(cells);
    out.push_back(SchemeGain{scheme, mean, 0});
  }

  // Rank descending by mean gain; ties keep the caller's scheme order.
  std::vector<std::size_t> order(out.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return out[a].mean_gain > out[b].mean_gain; });
  for (std::size_t r = 0; r < order.size(); ++r) out[order[r]].rank = static_cast<int>(r + 1);
  return out;
}

std::string gains_to_tsv(std::span<const SchemeGain> gains) {
  std::string out = "scheme\tmean_gain\trank\n";
  char buf[80];
  for (const SchemeGain& g : gains) {
    std::snprintf(buf, sizeof buf, "%s\t%.9g\t%d\n", to_string(g.scheme), g.mean_gain, g.rank);
    out += buf;
  }
  return out;
}

}  // namespace fpc
