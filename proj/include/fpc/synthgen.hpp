#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "fpc/rng.hpp"
#include "fpc/types.hpp"

namespace fpc {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Zero-pole singularity layout. Cores are zeros and deltas are poles of the
// rational complex field; singularity counts encode the class:
// A: none, L/R: one core + one delta (delta below the core, right of it for
// L, left for R), W: two of each. No two singularities may sit closer than
// two grid cells.
struct SingularityLayout {
  std::vector<Point> cores;
  std::vector<Point> deltas;
  double background_angle = 0.0;  // radians in [0, pi)
};

// Throws Error on a constraint violation.
void validate_layout(const SingularityLayout& layout);

// theta(z) = background + 0.5 * (sum_i arg(z - core_i) - sum_j arg(z - delta_j)),
// wrapped into [0, pi), evaluated at cell centers z = (col, row). A cell that
// coincides exactly with a singularity uses the (0.5, 0.5) offset direction.
OrientationField zero_pole_field(const SingularityLayout& layout, int rows, int cols);

struct SynthSpec {
  int rows = 25;
  int cols = 25;
  std::array<int, 4> per_class{0, 0, 0, 0};  // indexed by ClassLabel
  double noise_sigma = 0.0;                  // radians
  std::uint64_t rng_seed = 0;
};

// Random layout for a class: positions uniform over the central 60% of the
// grid, redrawn until the class constraints hold.
SingularityLayout random_layout(ClassLabel label, int rows, int cols, Rng& rng);

// Deterministic for a given seed; per-sample generators are seeded with
// rng_seed xor the global sample index, so parallel and serial runs agree
// byte for byte.
std::vector<std::pair<OrientationField, ClassLabel>> generate_dataset(const SynthSpec& spec);

}  // namespace fpc
