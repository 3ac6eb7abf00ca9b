#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stiffgeo/geodesics.hpp"
#include "stiffgeo/transport.hpp"

namespace stiffgeo {

// Serial is the reference implementation; Parallel distributes items over
// OpenMP threads. Both produce identical, order-independent results.
enum class Exec { Serial, Parallel };

template <class T>
struct BatchResult {
  std::vector<std::optional<T>> values;
  std::vector<std::string> errors;  // empty string where the item succeeded

  std::size_t size() const { return values.size(); }
  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& v : values) n += v ? 0 : 1;
    return n;
  }
};

struct RaySpec {
  Vector e_r;
  double t0 = 0.0;
  double t1 = 0.0;
};

struct ArcSpec {
  Vector u, w;
  double r = 1.0;
  double theta0 = 0.0;
  double theta1 = 0.0;
};

BatchResult<TransportMap> batch_transport_ode(const CanonicalModel& M, const std::vector<PathSpec>& paths,
                                              const OdeTransportOptions& opt, Exec exec);
BatchResult<TransportMap> batch_transport_rays(const CanonicalModel& M, const std::vector<RaySpec>& rays, Exec exec);
BatchResult<TransportMap> batch_transport_arcs(const CanonicalModel& M, const std::vector<ArcSpec>& arcs, Exec exec);
BatchResult<GeodesicSolution> batch_solve_geodesics(const std::vector<GeodesicLine>& lines, Exec exec);
BatchResult<TravelTime> batch_travel_times(const CanonicalModel& M,
                                           const std::vector<std::pair<Vector, Vector>>& chords, Exec exec);

int max_threads();

}  // namespace stiffgeo
