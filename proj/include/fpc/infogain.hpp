#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fpc/orientation.hpp"
#include "fpc/types.hpp"

namespace fpc {

struct EntropyStats {
  double h_t = 0.0;          // empirical label entropy, bits
  double h_t_given_f = 0.0;  // conditional entropy after binning, bits
  double gain = 0.0;         // h_t - h_t_given_f, clamped at 0
  int bins = 0;
};

// H(T) = -sum_k (|C_k|/|T|) log2(|C_k|/|T|). Throws Error on empty input.
double empirical_entropy(std::span<const ClassLabel> labels);

// Equal-width discretization of the feature range into `bins` cells, then
// H(T|F) = sum_i (|T_i|/|T|) * H(labels in T_i). Empty bins contribute 0.
double conditional_entropy(std::span<const double> feature,
                           std::span<const ClassLabel> labels, int bins);

EntropyStats information_gain(std::span<const double> feature,
                              std::span<const ClassLabel> labels, int bins = 8);

// Joint gain of a two-component feature: each component is binned on its own
// equal-width grid and the pair indexes a bins x bins partition. The joint
// partition refines both marginals, so the gain is at least the larger of
// the component gains.
EntropyStats information_gain2(std::span<const double> fa, std::span<const double> fb,
                               std::span<const ClassLabel> labels, int bins = 8);

struct SchemeGain {
  EncodingScheme scheme;
  double mean_gain = 0.0;
  int rank = 0;  // 1 = highest gain
};

// Per scheme: encode every field and average the per-cell gain over the grid.
// A cell of a one-plane scheme contributes its scalar gain; a cell of a
// two-plane scheme contributes the joint gain of its pair, so combined
// encodings are compared as the vectors the schemes define. Result is ranked
// descending by mean gain (ties by scheme order).
std::vector<SchemeGain> compare_encodings(
    const std::vector<std::pair<OrientationField, ClassLabel>>& dataset,
    std::span<const EncodingScheme> schemes, int bins = 8);

std::string gains_to_tsv(std::span<const SchemeGain> gains);

}  // namespace fpc
