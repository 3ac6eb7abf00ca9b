#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stiffgeo/models.hpp"

namespace stiffgeo {

// A path is either a polyline (straight segments, each parametrized on [0,1])
// or a parametric curve with its velocity; missing velocities are differenced.
struct PathSpec {
  struct Parametric {
    std::function<Vector(double)> position;
    std::function<Vector(double)> velocity;  // optional
    double t0 = 0.0;
    double t1 = 1.0;
    int samples = 64;  // domain checks along the curve
  };

  std::vector<Vector> polyline;
  std::optional<Parametric> curve;

  static PathSpec line(std::vector<Vector> pts);
  static PathSpec parametric(std::function<Vector(double)> pos, std::function<Vector(double)> vel,
                             double t0, double t1, int samples = 64);
  // x(theta) = center + r (cos theta u + sin theta w), theta in [0, 2 pi].
  static PathSpec circle(const Vector& center, const Vector& u, const Vector& w, double r);

  Vector start() const;
  Vector end() const;
};

enum class TransportMethod { ODE, ClosedForm };

// Closed forms come with the frames they are diagonal/oscillatory in: columns
// of frame_from / frame_to, and the matrix in those frames.
struct FrameData {
  Matrix frame_from;
  Matrix frame_to;
  Matrix in_frame;
};

struct TransportMap {
  Matrix matrix;
  Vector from;
  Vector to;
  TransportMethod method = TransportMethod::ODE;
  double est_error = 0.0;
  std::optional<FrameData> frame;
  std::string note;

  Vector apply(const Vector& v) const { return matrix * v; }
};

// Gamma(u, v) = -2 [(x.u) v + (x.v) u] / psi(x)
ChristoffelMap gamma_at(const CanonicalModel& M, const Vector& x);

struct OdeTransportOptions {
  double tol = 1e-10;
  bool estimate_error = true;  // rerun at 10x tol and report the difference
};

TransportMap transport_ode(const CanonicalModel& M, const PathSpec& path, const OdeTransportOptions& opt = {});
// Any associated form, no domain predicate beyond finiteness.
TransportMap transport_ode(const AssociatedForm& a, const PathSpec& path, const OdeTransportOptions& opt = {});

TransportMap transport_ray(const CanonicalModel& M, const Vector& e_r, double t0, double t1);

TransportMap transport_lightcone_map(const CanonicalModel& M, const Vector& e_r, double f0, double f1);
Vector transport_lightcone(const CanonicalModel& M, const Vector& e_r, double f0, double f1, const Vector& v0);

enum class FrequencyRegime { Real, Imaginary, Zero };

struct CharacteristicFrequency {
  std::complex<double> omega;
  double omega_sq = 0.0;
  FrequencyRegime regime = FrequencyRegime::Zero;
};

CharacteristicFrequency characteristic_frequency(const CanonicalModel& M, double q_gamma, double eps);

// Oscillator matrix [[cosh wt, (eps/w) sinh wt], [eps w sinh wt, cosh wt]].
Matrix oscillator_matrix(double omega_sq, double eps, double t);

// Arc theta in [theta0, theta1] of x(theta) = r (C(theta) u + S(theta) w),
// C, S = cos, sin when q(w) = q(u) and cosh, sinh otherwise. (u, w) must be
// q-orthonormal.
TransportMap transport_arc(const CanonicalModel& M, const Vector& u, const Vector& w, double r,
                           double theta0, double theta1);
TransportMap transport_arc(const CanonicalModel& M, int i, int j, double r, double theta0, double theta1);

// Point on the arc used by transport_arc.
Vector arc_point(const Signature& sig, const Vector& u, const Vector& w, double r, double theta);

Matrix infinitesimal_holonomy(const CanonicalModel& M, const Vector& x, int i, int j);

TransportMap holonomy_loop(const CanonicalModel& M, const PathSpec& loop, const OdeTransportOptions& opt = {});

}  // namespace stiffgeo
