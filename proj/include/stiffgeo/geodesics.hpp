#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "stiffgeo/models.hpp"

namespace stiffgeo {

struct GeodesicLine {
  CanonicalModel model;
  Vector x0;
  Vector e;

  Vector point(double s) const { return x0 + s * e; }
};

enum class GeodesicCaseKind { C1_Constant, C2_SinglePole, C3_TwoPoles, C4_DoublePole, C5_NoPole };

std::string to_string(GeodesicCaseKind k);

// psi_s(s) = Q s^2 + 2 B s + C = kappa * psi_y(a s + b), with psi_y one of
// 1, y, y^2 - 1, y^2, y^2 + 1.
struct GeodesicCase {
  GeodesicCaseKind kind = GeodesicCaseKind::C1_Constant;
  bool inside = false;  // C3 only: between the two poles
  std::optional<int> lambda_prime;
  double a = 1.0, b = 0.0;
  double kappa = 1.0;
  double Q = 0.0, B = 0.0, C = 0.0;

  double y_of(double s) const { return a * s + b; }
  double s_of(double y) const { return (y - b) / a; }
  double psi_s(double s) const { return (Q * s + 2.0 * B) * s + C; }
};

GeodesicCase reduce_line(const GeodesicLine& line);

// F_1(y) = y/(1+y^2) + atan y;  F_0(y) = -1/y^3;
// F_{-1}(y) = -1/(y-1) - 1/(y+1) + ln|(y+1)/(y-1)|.
double F_eval(int lambda_prime, double y);

// Open y-interval on which psi_y has no zero.
struct YInterval {
  double lo;
  double hi;
};

YInterval component_of(int lambda_prime, double y);
// Strictly increasing inversion of F_{lambda'} on a component.
double F_invert(int lambda_prime, const YInterval& comp, double value);

enum class EndKind { Unbounded, ReachesInfinity, ApproachesBoundary };

// What happens at one end of the maximal interval.
struct GeodesicEnd {
  double t;       // +-inf when the end is not reached in finite time
  EndKind kind;   // Unbounded: the affine case, both limits infinite
  double s_limit; // +-inf or the root of psi_s
};

struct GeodesicSolution {
  GeodesicLine line;
  GeodesicCase reduction;
  double alpha = 0.0;  // G(s(t)) = alpha t + beta, G' = 1 / psi_s^2
  double beta = 0.0;
  double F_scale = 1.0;  // G(s) = F(y(s)) / F_scale for the case's antiderivative F
  double t_min = 0.0, t_max = 0.0;
  GeodesicEnd lower, upper;

  double s_at(double t) const;
  Vector point(double t) const { return line.point(s_at(t)); }
  Vector velocity(double t) const;
  bool bounded_interval() const { return std::isfinite(t_min) || std::isfinite(t_max); }

  YInterval y_component;
};

GeodesicSolution solve_geodesic(const GeodesicLine& line, double t0 = 0.0, double s0 = 0.0, double sdot0 = 1.0);

struct CompletenessVerdict {
  bool complete = false;
  std::optional<GeodesicLine> witness;
};

CompletenessVerdict completeness_verdict(const CanonicalModel& M);

enum class ChordRegime { Spacelike, Timelike, Null, Crosses };
std::string to_string(ChordRegime r);

struct TravelTime {
  double time = 0.0;
  ChordRegime regime = ChordRegime::Spacelike;
  std::string warning;
};

// Isochrone time along the straight chord from a to b, h = alpha^2 g / psi^4.
TravelTime travel_time(const CanonicalModel& M, const Vector& a, const Vector& b, double alpha = 1.0);

struct TriangleResult {
  double s = 0.0;
  double T_ab = 0.0;
  double T_sum = 0.0;
  bool violates = false;
};

// o = 0, a = (s, 0), b = (0, s) in the disk model S(2,0;-1;-).
TriangleResult triangle_experiment(double s);
double find_s0(double tol = 1e-6);

}  // namespace stiffgeo
