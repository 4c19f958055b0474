#include "fpc/synthgen.hpp"

#include <cmath>

namespace fpc {

namespace {

constexpr double kMinSeparation = 2.0;  // grid cells
constexpr int kMaxDraws = 100000;

double dist(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool well_separated(const SingularityLayout& l) {
  std::vector<Point> all;
  all.insert(all.end(), l.cores.begin(), l.cores.end());
  all.insert(all.end(), l.deltas.begin(), l.deltas.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (dist(all[i], all[j]) < kMinSeparation) return false;
  return true;
}

}  // namespace

void validate_layout(const SingularityLayout& layout) {
  const std::size_t nc = layout.cores.size();
  const std::size_t nd = layout.deltas.size();
  if (!((nc == 0 && nd == 0) || (nc == 1 && nd == 1) || (nc == 2 && nd == 2)))
    throw Error("layout: singularity counts " + std::to_string(nc) + "/" + std::to_string(nd) +
                " match no class (need 0/0, 1/1 or 2/2)");
  if (!(layout.background_angle >= 0.0 && layout.background_angle < kPi))
    throw Error("layout: background angle outside [0, pi)");
  if (nc == 1) {
    // Loop: delta strictly below the core, displaced left or right of it.
    if (!(layout.deltas[0].y > layout.cores[0].y))
      throw Error("layout: loop delta must sit strictly below the core");
    if (layout.deltas[0].x == layout.cores[0].x)
      throw Error("layout: loop delta must be displaced left or right of the core");
  }
  if (!well_separated(layout))
    throw Error("layout: singularities closer than " + std::to_string(kMinSeparation) + " cells");
}

OrientationField zero_pole_field(const SingularityLayout& layout, int rows, int cols) {
  validate_layout(layout);
  OrientationField field = OrientationField::make(rows, cols);

  auto arg_from = [](double x, double y, const Point& s) {
    double dx = x - s.x;
    double dy = y - s.y;
    if (dx == 0.0 && dy == 0.0) {
      // Cell center on the singularity: take the limit direction from the
      // (0.5, 0.5) offset.
      dx = 0.5;
      dy = 0.5;
    }
    return std::atan2(dy, dx);
  };

  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const double x = static_cast<double>(c);
      const double y = static_cast<double>(r);
      double sum = 0.0;
      for (const Point& core : layout.cores) sum += arg_from(x, y, core);
      for (const Point& delta : layout.deltas) sum -= arg_from(x, y, delta);
      field.at(r, c) = wrap_angle(layout.background_angle + 0.5 * sum);
    }
  return field;
}

SingularityLayout random_layout(ClassLabel label, int rows, int cols, Rng& rng) {
  // Positions are confined to the central 60% of the grid.
  const double x_lo = 0.2 * (cols - 1), x_hi = 0.8 * (cols - 1);
  const double y_lo = 0.2 * (rows - 1), y_hi = 0.8 * (rows - 1);
  auto inside = [&](const Point& p) {
    return p.x >= x_lo && p.x <= x_hi && p.y >= y_lo && p.y <= y_hi;
  };
  auto draw = [&] { return Point{rng.uniform(x_lo, x_hi), rng.uniform(y_lo, y_hi)}; };

  SingularityLayout l;
  // Captured fingerprints are roughly upright; a narrow band around pi/2
  // mirrors onto itself (bg -> pi - bg), keeping L/R reflection exact.
  l.background_angle = wrap_angle(kPi / 2.0 + rng.uniform(-0.1, 0.1));
  if (label == ClassLabel::A) return l;

  // Singularities follow the standard morphology of their class: a loop's
  // delta sits below the core and clearly off to one side, a whorl is a tight
  // core pair with the deltas flanking it from below. Free-for-all draws
  // produce degenerate layouts (a core grazing a delta cancels it and the
  // field reads as an arch or loop), so the relative offsets are bounded.
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    l.cores.clear();
    l.deltas.clear();
    if (label == ClassLabel::W) {
      const Point c1 = draw();
      const Point c2{c1.x + rng.uniform(-2.0, 2.0), c1.y + rng.uniform(2.0, 4.0)};
      const Point mid{0.5 * (c1.x + c2.x), 0.5 * (c1.y + c2.y)};
      const Point d_left{mid.x - rng.uniform(3.0, 6.0), mid.y + rng.uniform(2.0, 5.0)};
      const Point d_right{mid.x + rng.uniform(3.0, 6.0), mid.y + rng.uniform(2.0, 5.0)};
      if (inside(c2) && inside(d_left) && inside(d_right) &&
          d_left.y > std::max(c1.y, c2.y) && d_right.y > std::max(c1.y, c2.y)) {
        l.cores = {c1, c2};
        l.deltas = {d_left, d_right};
        if (well_separated(l)) return l;
      }
    } else {
      const Point core = draw();
      const double side = label == ClassLabel::L ? 1.0 : -1.0;
      const Point delta{core.x + side * rng.uniform(2.0, 5.0), core.y + rng.uniform(3.0, 7.0)};
      if (inside(delta) && dist(core, delta) >= kMinSeparation) {
        l.cores.push_back(core);
        l.deltas.push_back(delta);
        return l;
      }
    }
  }
  throw Error("random_layout: could not satisfy class constraints (grid too small?)");
}

std::vector<std::pair<OrientationField, ClassLabel>> generate_dataset(const SynthSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) throw DimError("synth: grid dims must be >= 1");
  if (spec.noise_sigma < 0.0) throw Error("synth: noise_sigma must be >= 0");
  for (int c : spec.per_class)
    if (c < 0) throw Error("synth: per-class counts must be >= 0");

  std::vector<ClassLabel> order;
  for (int cls = 0; cls < kNumClasses; ++cls)
    for (int i = 0; i < spec.per_class[cls]; ++i) order.push_back(static_cast<ClassLabel>(cls));

  std::vector<std::pair<OrientationField, ClassLabel>> out(order.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t g = 0; g < static_cast<std::ptrdiff_t>(order.size()); ++g) {
    Rng rng(spec.rng_seed ^ static_cast<std::uint64_t>(g));
    SingularityLayout layout = random_layout(order[g], spec.rows, spec.cols, rng);
    OrientationField field = zero_pole_field(layout, spec.rows, spec.cols);
    if (spec.noise_sigma > 0.0) {
      for (double& a : field.angles) a = wrap_angle(a + spec.noise_sigma * rng.normal());
    }
    out[g] = {std::move(field), order[g]};
  }
  return out;
}

}  // namespace fpc
