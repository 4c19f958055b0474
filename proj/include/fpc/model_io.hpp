#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "fpc/sae.hpp"
#include "fpc/softmax.hpp"

namespace fpc {

struct Model {
  StackedEncoder encoder;
  std::optional<SoftmaxModel> softmax;
};

// Versioned text format. "SAEv1" then per layer
//   layer <visible> <hidden> <lambda> <beta> <rho>
// followed by the W1 rows, b1, W2 rows and b2 as space-separated decimals
// with 17 significant digits. A trained classifier appends "SOFTMAXv1",
// "k n lambda" and k rows of n+1 decimals.
std::string model_to_text(const Model& m);
Model model_from_text(std::string_view text);

void save_model(const std::string& path, const Model& m);
Model load_model(const std::string& path);

}  // namespace fpc
