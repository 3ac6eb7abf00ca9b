// Serial reference vs OpenMP batch kernels.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "stiffgeo/batch.hpp"

using namespace stiffgeo;

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class Run>
void compare(const char* name, std::size_t n, Run&& run) {
  std::size_t fs = 0, fp = 0;
  const double ts = seconds([&] { fs = run(Exec::Serial).failures(); });
  const double tp = seconds([&] { fp = run(Exec::Parallel).failures(); });
  std::printf("%-22s %7zu %10.4f %10.4f %8.2fx %s\n", name, n, ts, tp, ts / tp, fs == fp ? "" : "failure mismatch");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 400;
  const CanonicalModel disk(Signature(2, 0), -1.0, Nu::Minus);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  auto point = [&] {
    Vector x(2);
    x << u(rng), u(rng);
    return x;
  };

  std::vector<PathSpec> paths;
  std::vector<GeodesicLine> lines;
  std::vector<std::pair<Vector, Vector>> chords;
  std::vector<ArcSpec> arcs;
  for (std::size_t i = 0; i < n; ++i) {
    paths.push_back(PathSpec::line({point(), point(), point()}));
    lines.push_back({disk, point(), point()});
    chords.emplace_back(point(), point());
    arcs.push_back({Vector::Unit(2, 0), Vector::Unit(2, 1), 0.1 + 0.8 * (u(rng) + 0.6) / 1.2, 0.0, 6.0 * u(rng)});
  }

  std::printf("threads: %d\n", max_threads());
  std::printf("%-22s %7s %10s %10s %9s\n", "kernel", "items", "serial s", "omp s", "speedup");
  compare("transport_ode", n, [&](Exec e) { return batch_transport_ode(disk, paths, {1e-10, true}, e); });
  compare("transport_arcs", n, [&](Exec e) { return batch_transport_arcs(disk, arcs, e); });
  compare("solve_geodesics", n, [&](Exec e) { return batch_solve_geodesics(lines, e); });
  compare("travel_times", n, [&](Exec e) { return batch_travel_times(disk, chords, e); });
  return 0;
}
