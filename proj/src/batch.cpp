#include "stiffgeo/batch.hpp"

#include <omp.h>

#include <exception>

namespace stiffgeo {

namespace {

template <class T, class F>
BatchResult<T> run_batch(std::size_t n, F&& item, Exec exec) {
  BatchResult<T> out;
  out.values.resize(n);
  out.errors.resize(n);
  // Exceptions must not cross the parallel region: each slot records its own.
  auto one = [&](std::size_t i) {
    try {
      out.values[i] = item(i);
    } catch (const std::exception& e) {
      out.errors[i] = e.what();
    }
  };
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) one(i);
  } else {
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < count; ++i) one(static_cast<std::size_t>(i));
  }
  return out;
}

}  // namespace

BatchResult<TransportMap> batch_transport_ode(const CanonicalModel& M, const std::vector<PathSpec>& paths,
                                              const OdeTransportOptions& opt, Exec exec) {
  return run_batch<TransportMap>(paths.size(), [&](std::size_t i) { return transport_ode(M, paths[i], opt); }, exec);
}

BatchResult<TransportMap> batch_transport_rays(const CanonicalModel& M, const std::vector<RaySpec>& rays, Exec exec) {
  return run_batch<TransportMap>(
      rays.size(), [&](std::size_t i) { return transport_ray(M, rays[i].e_r, rays[i].t0, rays[i].t1); }, exec);
}

BatchResult<TransportMap> batch_transport_arcs(const CanonicalModel& M, const std::vector<ArcSpec>& arcs, Exec exec) {
  return run_batch<TransportMap>(
      arcs.size(),
      [&](std::size_t i) {
        const auto& a = arcs[i];
        return transport_arc(M, a.u, a.w, a.r, a.theta0, a.theta1);
      },
      exec);
}

BatchResult<GeodesicSolution> batch_solve_geodesics(const std::vector<GeodesicLine>& lines, Exec exec) {
  return run_batch<GeodesicSolution>(lines.size(), [&](std::size_t i) { return solve_geodesic(lines[i]); }, exec);
}

BatchResult<TravelTime> batch_travel_times(const CanonicalModel& M,
                                           const std::vector<std::pair<Vector, Vector>>& chords, Exec exec) {
  return run_batch<TravelTime>(
      chords.size(), [&](std::size_t i) { return travel_time(M, chords[i].first, chords[i].second); }, exec);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace stiffgeo
