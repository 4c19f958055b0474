// Timing comparison between the parallel kernels and the serial reference
// implementations. Thread count follows OMP_NUM_THREADS.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fpc/linalg.hpp"
#include "fpc/orientation.hpp"
#include "fpc/rng.hpp"
#include "fpc/sae.hpp"

using namespace fpc;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

Matrix random_matrix(int r, int c, std::uint64_t seed) {
  Matrix m(r, c);
  Rng rng(seed);
  for (double& v : m.flat()) v = rng.uniform(-1.0, 1.0);
  return m;
}

void report(const char* name, double parallel_ms, double serial_ms, double max_diff) {
  std::printf("%-24s %10.2f ms %10.2f ms %8.2fx   max|diff| %.3g\n", name, parallel_ms, serial_ms,
              serial_ms / parallel_ms, max_diff);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP disabled)\n");
#endif
  std::printf("%-24s %13s %13s %9s\n", "kernel", "parallel", "serial", "speedup");

  {
    Matrix a = random_matrix(300, 400, 1);
    Matrix b = random_matrix(400, 500, 2);
    Matrix fast, slow;
    const double tp = time_ms([&] { fast = matmul(a, b); }, 5);
    const double ts = time_ms([&] { slow = reference::matmul(a, b); }, 5);
    double diff = 0.0;
    for (std::size_t i = 0; i < fast.size(); ++i)
      diff = std::max(diff, std::fabs(fast.flat()[i] - slow.flat()[i]));
    report("matmul 300x400x500", tp, ts, diff);
  }

  {
    LayerParams p = init_layer(1250, 100, 3);
    Matrix batch = random_matrix(200, 1250, 4);
    for (double& v : batch.flat()) v = 0.5 + 0.4 * v;
    SaeHyper h;
    SaeCostGrad fast, slow;
    const double tp = time_ms([&] { fast = sae_cost_grad(p, batch, h); }, 3);
    const double ts = time_ms([&] { slow = reference::sae_cost_grad(p, batch, h); }, 3);
    double diff = std::fabs(fast.cost - slow.cost);
    for (std::size_t i = 0; i < fast.grads.w1.size(); ++i)
      diff = std::max(diff, std::fabs(fast.grads.w1.flat()[i] - slow.grads.w1.flat()[i]));
    report("sae cost_grad 1250-100", tp, ts, diff);
  }

  {
    GrayImage img;
    img.width = 512;
    img.height = 512;
    img.pixels.resize(512 * 512);
    Rng rng(5);
    for (int y = 0; y < 512; ++y)
      for (int x = 0; x < 512; ++x)
        img.at(x, y) = static_cast<std::uint8_t>(
            127.5 + 127.5 * std::sin(2.0 * kPi * (y * 0.8 + x * 0.2) / 9.0 + rng.uniform(0, 0.1)));
    OrientationField fast, slow;
    const double tp = time_ms([&] { fast = block_orientation(img); }, 10);
    const double ts = time_ms([&] { slow = reference::block_orientation(img); }, 10);
    double diff = 0.0;
    for (std::size_t i = 0; i < fast.cell_count(); ++i)
      diff = std::max(diff, std::fabs(fast.angles[i] - slow.angles[i]));
    report("block_orientation 512", tp, ts, diff);
  }

  return 0;
}
