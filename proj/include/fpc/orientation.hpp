#pragma once

#include <string>
#include <string_view>

#include "fpc/types.hpp"

namespace fpc {

// Gradient/block orientation estimation. The image is center-cropped to the
// largest block multiple in each dimension, then each non-overlapping block
// gets the angle theta = 0.5*atan2(sum 2*Gx*Gy, sum(Gx^2 - Gy^2)) + pi/2,
// wrapped into [0, pi). Blocks whose gradient coherence falls below 0.1 are
// masked invalid. A 512x512 input with the default block yields 25x25.
OrientationField block_orientation(const GrayImage& img, int block = 20);

namespace reference {
// Serial two-pass variant (materializes full gradient images first); kept for
// cross-checking and the benchmark tool.
OrientationField block_orientation(const GrayImage& img, int block = 20);
}  // namespace reference

// Double-angle feature: all sin(2theta) in field order, then all cos(2theta).
// Invalid cells encode as (0, 0).
FeatureVector encode_features(const OrientationField& field);

// Alternative encodings used by the feature-comparison experiment.
// f1 = theta/pi, f2 = sin 2theta, f3 = cos 2theta,
// f4 = (sin 2theta, theta/pi), f5 = (cos 2theta, theta/pi),
// f6 = (sin 2theta, cos 2theta) == encode_features.
enum class EncodingScheme { F1, F2, F3, F4, F5, F6 };

EncodingScheme scheme_from_string(std::string_view s);
const char* to_string(EncodingScheme s);

FeatureVector encode_alternative(const OrientationField& field, EncodingScheme scheme);

// Orientation-field text format: line 1 "rows cols", then rows lines of cols
// space-separated angles in radians, invalid cells written as "nan".
std::string field_to_text(const OrientationField& field);
OrientationField field_from_text(std::string_view text);
void save_field(const std::string& path, const OrientationField& field);
OrientationField load_field(const std::string& path);

}  // namespace fpc
