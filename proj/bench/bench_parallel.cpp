// Benchmark comparing the serial reference paths of the sweep kernels
// against their OpenMP versions. Run manually:
//   ./build/bench/platoonlab_bench [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "platoonlab/headway_bounds.hpp"
#include "platoonlab/impulse_response.hpp"
#include "platoonlab/parallel.hpp"
#include "platoonlab/string_stability.hpp"

using namespace platoonlab;
namespace chrono = std::chrono;

namespace {

template <typename Fn>
double time_best_of(int repeats, Fn&& fn) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = chrono::steady_clock::now();
    fn();
    const double dt = chrono::duration<double>(chrono::steady_clock::now() - t0).count();
    if (dt < best) best = dt;
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-24s %10.1f ms %10.1f ms %8.2fx\n", name, serial * 1e3, parallel * 1e3,
              serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
  std::printf("threads: %d\n", max_threads());
  std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  const auto spec = ControllerSpec::rpf(3, 45.0, 0.8, 0.25, 0.5);
  SweepConfig cfg;
  cfg.tau_grid_points = 65;
  row("robust_check sum-norm",
      time_best_of(repeats, [&] { robust_check(spec, 0.5, cfg, Criterion::SumNorm, Execution::serial); }),
      time_best_of(repeats, [&] { robust_check(spec, 0.5, cfg, Criterion::SumNorm, Execution::parallel); }));

  row("robust_check rho",
      time_best_of(repeats, [&] { robust_check(spec, 0.5, cfg, Criterion::SpectralRadius, Execution::serial); }),
      time_best_of(repeats, [&] { robust_check(spec, 0.5, cfg, Criterion::SpectralRadius, Execution::parallel); }));

  FalsificationGrid grid;
  grid.n_per_axis = 60;
  const double hw = 0.95 * 2.0 * 0.5 / 1.5;
  row("falsification_scan",
      time_best_of(repeats, [&] { falsification_scan(0.5, 0.5, hw, grid, Execution::serial); }),
      time_best_of(repeats, [&] { falsification_scan(0.5, 0.5, hw, grid, Execution::parallel); }));

  RegionGridSpec region;
  region.n_kp = 81;
  region.n_kv = 81;
  row("region_scan",
      time_best_of(repeats, [&] { region_scan(0.95, 2.0 / 1.95, region, {}, Execution::serial); }),
      time_best_of(repeats, [&] { region_scan(0.95, 2.0 / 1.95, region, {}, Execution::parallel); }));

  return 0;
}
