#include "fpc/eval.hpp"

#include <cstdio>

namespace fpc {

ConfusionMatrix ConfusionMatrix::make(int k) {
  ConfusionMatrix cm;
  cm.k = k;
  cm.counts.assign(static_cast<std::size_t>(k) * k, 0);
  return cm;
}

long ConfusionMatrix::total() const {
  long t = 0;
  for (long c : counts) t += c;
  return t;
}

long ConfusionMatrix::trace() const {
  long t = 0;
  for (int i = 0; i < k; ++i) t += at(i, i);
  return t;
}

ConfusionMatrix confusion(std::span<const ClassLabel> preds,
                          std::span<const ClassLabel> labels,
                          std::span<const std::uint8_t> rejects) {
  if (preds.size() != labels.size()) throw DimError("confusion: preds/labels length mismatch");
  if (!rejects.empty() && rejects.size() != preds.size())
    throw DimError("confusion: rejects mask length mismatch");

  ConfusionMatrix cm = ConfusionMatrix::make();
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (!rejects.empty() && rejects[i]) {
      ++cm.n_rejected;
      continue;
    }
    ++cm.at(static_cast<int>(labels[i]), static_cast<int>(preds[i]));
  }
  return cm;
}

double accuracy(const ConfusionMatrix& cm) {
  const long total = cm.total();
  if (total == 0) throw Error("accuracy: every sample was rejected");
  return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

std::string confusion_to_tsv(const ConfusionMatrix& cm) {
  std::string out = "true\\assigned";
  for (int j = 0; j < cm.k; ++j) {
    out += '\t';
    out += to_string(static_cast<ClassLabel>(j));
  }
  out += '\n';
  char buf[32];
  for (int i = 0; i < cm.k; ++i) {
    out += to_string(static_cast<ClassLabel>(i));
    for (int j = 0; j < cm.k; ++j) {
      std::snprintf(buf, sizeof buf, "\t%ld", cm.at(i, j));
      out += buf;
    }
    out += '\n';
  }
  if (cm.n_rejected > 0) {
    std::snprintf(buf, sizeof buf, "rejected\t%ld\n", cm.n_rejected);
    out += buf;
  }
  return out;
}

}  // namespace fpc
