#include "stiffgeo/geodesics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "stiffgeo/errors.hpp"

namespace stiffgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double F_minus1(double y) {
  const double ay = std::abs(y);
  if (ay > 4.0) {
    // Closed form cancels to -4/(3 y^3) + ...; sum the series in 1/y instead.
    const double u = 1.0 / y, u2 = u * u;
    double term = u * u2, sum = 0.0;
    for (int k = 1; k <= 40; ++k) {
      sum += 4.0 * k / (2.0 * k + 1.0) * term;
      term *= u2;
    }
    return -sum;
  }
  return -2.0 * y / (y * y - 1.0) + 2.0 * std::atanh(ay < 1.0 ? y : 1.0 / y);
}

double F_derivative(int lp, double y) {
  switch (lp) {
    case 1: return 2.0 / ((1.0 + y * y) * (1.0 + y * y));
    case 0: return 3.0 / (y * y * y * y);
    default: return 4.0 / ((y * y - 1.0) * (y * y - 1.0));
  }
}

// Limits of F at the ends of a component.
std::pair<double, double> F_range(int lp, const YInterval& c) {
  double at_minus_inf = 0.0, at_plus_inf = 0.0;
  if (lp == 1) {
    at_minus_inf = -std::numbers::pi / 2;
    at_plus_inf = std::numbers::pi / 2;
  }
  return {c.lo == -kInf ? at_minus_inf : -kInf, c.hi == kInf ? at_plus_inf : kInf};
}

// The case's own antiderivative F with c * G = F(y) / (a kappa^2).
struct CaseF {
  GeodesicCaseKind kind;
  int lp;

  double c() const {
    switch (kind) {
      case GeodesicCaseKind::C1_Constant:
      case GeodesicCaseKind::C2_SinglePole: return 1.0;
      case GeodesicCaseKind::C3_TwoPoles: return 4.0;
      case GeodesicCaseKind::C4_DoublePole: return 3.0;
      case GeodesicCaseKind::C5_NoPole: return 2.0;
    }
    return 1.0;
  }
  double eval(double y) const {
    if (kind == GeodesicCaseKind::C1_Constant) return y;
    if (kind == GeodesicCaseKind::C2_SinglePole) return -1.0 / y;
    return F_eval(lp, y);
  }
  YInterval component(double y) const {
    if (kind == GeodesicCaseKind::C1_Constant) return {-kInf, kInf};
    if (kind == GeodesicCaseKind::C2_SinglePole) return y > 0 ? YInterval{0.0, kInf} : YInterval{-kInf, 0.0};
    return component_of(lp, y);
  }
  std::pair<double, double> range(const YInterval& c) const {
    if (kind == GeodesicCaseKind::C1_Constant) return {-kInf, kInf};
    if (kind == GeodesicCaseKind::C2_SinglePole) return {c.lo == -kInf ? 0.0 : -kInf, c.hi == kInf ? 0.0 : kInf};
    return F_range(lp, c);
  }
  double invert(const YInterval& c, double v) const {
    if (kind == GeodesicCaseKind::C1_Constant) return v;
    if (kind == GeodesicCaseKind::C2_SinglePole) {
      const auto [lo, hi] = range(c);
      if (!(v > lo && v < hi)) throw DomainError("F_invert: value outside the range of F on this component");
      return -1.0 / v;
    }
    return F_invert(lp, c, v);
  }
};

CaseF case_f(const GeodesicCase& gc) { return {gc.kind, gc.lambda_prime.value_or(0)}; }

}  // namespace

std::string to_string(GeodesicCaseKind k) {
  switch (k) {
    case GeodesicCaseKind::C1_Constant: return "C1_Constant";
    case GeodesicCaseKind::C2_SinglePole: return "C2_SinglePole";
    case GeodesicCaseKind::C3_TwoPoles: return "C3_TwoPoles";
    case GeodesicCaseKind::C4_DoublePole: return "C4_DoublePole";
    case GeodesicCaseKind::C5_NoPole: return "C5_NoPole";
  }
  return "?";
}

std::string to_string(ChordRegime r) {
  switch (r) {
    case ChordRegime::Spacelike: return "Spacelike";
    case ChordRegime::Timelike: return "Timelike";
    case ChordRegime::Null: return "Null";
    case ChordRegime::Crosses: return "Crosses";
  }
  return "?";
}

GeodesicCase reduce_line(const GeodesicLine& line) {
  const Signature& sig = line.model.sig;
  if (line.x0.size() != sig.dim() || line.e.size() != sig.dim())
    throw std::invalid_argument("reduce_line: dimension mismatch");
  if (line.e.isZero(0.0)) throw std::invalid_argument("reduce_line: direction must be nonzero");

  GeodesicCase gc;
  gc.Q = q(sig, line.e);
  gc.B = dot(sig, line.x0, line.e);
  gc.C = line.model.psi(line.x0);
  const double en = line.e.squaredNorm();
  const double scale = std::max({std::abs(gc.Q), std::abs(gc.B), std::abs(gc.C), 1e-300});
  const bool Q_zero = std::abs(gc.Q) <= 1e-14 * en;
  const bool B_zero = std::abs(gc.B) <= 1e-14 * std::sqrt(en) * std::max(1.0, line.x0.norm());

  if (Q_zero) {
    gc.Q = 0.0;
    if (B_zero) {
      if (gc.C == 0.0) throw std::logic_error("reduce_line: psi vanishes identically on the line");
      gc.B = 0.0;
      gc.kind = GeodesicCaseKind::C1_Constant;
      gc.kappa = gc.C;
      return gc;
    }
    gc.kind = GeodesicCaseKind::C2_SinglePole;
    gc.a = 1.0;
    gc.b = gc.C / (2.0 * gc.B);
    gc.kappa = 2.0 * gc.B;
    return gc;
  }

  const double D = gc.Q * gc.C - gc.B * gc.B;
  if (std::abs(D) < 1e-12 * scale * scale) {
    gc.kind = GeodesicCaseKind::C4_DoublePole;
    gc.lambda_prime = 0;
    gc.a = gc.Q;
    gc.b = gc.B;
    gc.kappa = 1.0 / gc.Q;
    return gc;
  }
  const double root = std::sqrt(std::abs(D));
  gc.a = gc.Q / root;
  gc.b = gc.B / root;
  gc.kappa = std::abs(D) / gc.Q;
  if (D > 0) {
    gc.kind = GeodesicCaseKind::C5_NoPole;
    gc.lambda_prime = 1;
  } else {
    gc.kind = GeodesicCaseKind::C3_TwoPoles;
    gc.lambda_prime = -1;
    gc.inside = std::abs(gc.b) < 1.0;
  }
  return gc;
}

double F_eval(int lambda_prime, double y) {
  switch (lambda_prime) {
    case 1: return y / (1.0 + y * y) + std::atan(y);
    case 0:
      if (y == 0.0) throw DomainError("F_0: pole at y = 0");
      return -1.0 / (y * y * y);
    case -1:
      if (y == 1.0 || y == -1.0) throw DomainError("F_-1: pole at y = +-1");
      return F_minus1(y);
    default: throw std::invalid_argument("F_eval: lambda' must be -1, 0 or 1");
  }
}

YInterval component_of(int lambda_prime, double y) {
  switch (lambda_prime) {
    case 1: return {-kInf, kInf};
    case 0:
      if (y == 0.0) throw DomainError("component_of: y is a pole");
      return y > 0 ? YInterval{0.0, kInf} : YInterval{-kInf, 0.0};
    case -1:
      if (std::abs(y) == 1.0) throw DomainError("component_of: y is a pole");
      if (y > 1.0) return {1.0, kInf};
      if (y < -1.0) return {-kInf, -1.0};
      return {-1.0, 1.0};
    default: throw std::invalid_argument("component_of: lambda' must be -1, 0 or 1");
  }
}

double F_invert(int lp, const YInterval& comp, double v) {
  if (lp < -1 || lp > 1) throw std::invalid_argument("F_invert: lambda' must be -1, 0 or 1");
  const auto [flo, fhi] = F_range(lp, comp);
  if (!(v > flo && v < fhi)) throw DomainError("F_invert: value outside the range of F on this component");
  if (lp == 0) return std::cbrt(-1.0 / v);

  auto F = [lp](double y) { return F_eval(lp, y); };
  double mid;
  if (std::isfinite(comp.lo) && std::isfinite(comp.hi)) mid = 0.5 * (comp.lo + comp.hi);
  else if (std::isfinite(comp.lo)) mid = comp.lo + 1.0;
  else if (std::isfinite(comp.hi)) mid = comp.hi - 1.0;
  else mid = 0.0;

  if (F(mid) == v) return mid;

  // Bracket: walk towards the relevant end, geometrically.
  double lo = mid, hi = mid;
  if (F(mid) < v) {
    for (int k = 0;; ++k) {
      lo = hi;
      hi = std::isfinite(comp.hi) ? comp.hi - (comp.hi - mid) * std::ldexp(1.0, -k - 1) : mid + std::ldexp(1.0, k);
      if (F(hi) >= v) break;
      if (k > 1100) throw DomainError("F_invert: bracketing failed");
    }
  } else {
    for (int k = 0;; ++k) {
      hi = lo;
      lo = std::isfinite(comp.lo) ? comp.lo + (mid - comp.lo) * std::ldexp(1.0, -k - 1) : mid - std::ldexp(1.0, k);
      if (F(lo) <= v) break;
      if (k > 1100) throw DomainError("F_invert: bracketing failed");
    }
  }

  const double ftol = 1e-12 * std::max(1.0, std::abs(v));
  double y = 0.5 * (lo + hi);
  for (int it = 0; it < 500; ++it) {
    const double r = F(y) - v;
    if (std::abs(r) <= ftol) {
      // one more Newton step, kept only if it does not get worse
      const double polished = y - r / F_derivative(lp, y);
      return std::abs(F(polished) - v) <= std::abs(r) ? polished : y;
    }
    if (r < 0) lo = y;
    else hi = y;
    const double newton = y - r / F_derivative(lp, y);
    y = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
    if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(y))) return y;
  }
  return y;
}

double GeodesicSolution::s_at(double t) const {
  if (!(t > t_min && t < t_max) && !(t == t_min && t == t_max))
    throw DomainError("geodesic: t outside the maximal interval");
  const CaseF f = case_f(reduction);
  const double y = f.invert(y_component, F_scale * (alpha * t + beta));
  return reduction.s_of(y);
}

Vector GeodesicSolution::velocity(double t) const {
  const double s = s_at(t);
  const double p = reduction.psi_s(s);
  return alpha * p * p * line.e;
}

GeodesicSolution solve_geodesic(const GeodesicLine& line, double t0, double s0, double sdot0) {
  if (sdot0 == 0.0 || !std::isfinite(sdot0)) throw std::invalid_argument("solve_geodesic: initial speed must be nonzero");
  require_inside(line.model, line.point(s0), "solve_geodesic");
  GeodesicSolution sol;
  sol.line = line;
  sol.reduction = reduce_line(line);
  const GeodesicCase& gc = sol.reduction;
  const CaseF f = case_f(gc);
  const double p0 = gc.psi_s(s0);
  if (p0 == 0.0) throw DomainError("solve_geodesic: initial point on the boundary");

  sol.F_scale = f.c() * gc.a * gc.kappa * gc.kappa;
  const double y0 = gc.y_of(s0);
  sol.y_component = f.component(y0);
  sol.alpha = sdot0 / (p0 * p0);
  sol.beta = f.eval(y0) / sol.F_scale - sol.alpha * t0;

  const auto [flo, fhi] = f.range(sol.y_component);
  const double g1 = flo / sol.F_scale, g2 = fhi / sol.F_scale;
  const double G_low = std::min(g1, g2), G_high = std::max(g1, g2);
  double s_a = gc.s_of(sol.y_component.lo), s_b = gc.s_of(sol.y_component.hi);
  if (gc.a < 0) std::swap(s_a, s_b);

  const double t_low = (G_low - sol.beta) / sol.alpha;
  const double t_high = (G_high - sol.beta) / sol.alpha;
  auto end_of = [&](double t, double s_lim) {
    EndKind k = gc.kind == GeodesicCaseKind::C1_Constant ? EndKind::Unbounded
                : std::isfinite(s_lim)                   ? EndKind::ApproachesBoundary
                                                         : EndKind::ReachesInfinity;
    return GeodesicEnd{t, k, s_lim};
  };
  if (sol.alpha > 0) {
    sol.lower = end_of(t_low, s_a);
    sol.upper = end_of(t_high, s_b);
  } else {
    sol.lower = end_of(t_high, s_b);
    sol.upper = end_of(t_low, s_a);
  }
  sol.t_min = sol.lower.t;
  sol.t_max = sol.upper.t;
  return sol;
}

CompletenessVerdict completeness_verdict(const CanonicalModel& M) {
  CompletenessVerdict v;
  const bool minus_definite_side = M.nu == Nu::Minus && M.sig.m == 0;
  const bool plus_definite_side = M.nu == Nu::Plus && M.sig.p == 0;
  if (minus_definite_side || plus_definite_side) {
    v.complete = true;
    return v;
  }
  const int d = M.dim();
  const Vector x0 = sample_point(M);
  const Vector e = M.nu == Nu::Plus ? Vector::Unit(d, 0) : Vector::Unit(d, d - 1);
  for (double sgn : {1.0, -1.0}) {
    GeodesicLine line{M, x0, sgn * e};
    if (solve_geodesic(line).bounded_interval()) {
      v.witness = line;
      return v;
    }
  }
  throw std::logic_error("completeness_verdict: no witness found");
}

TravelTime travel_time(const CanonicalModel& M, const Vector& a, const Vector& b, double alpha) {
  if (!(alpha > 0)) throw std::invalid_argument("travel_time: alpha must be positive");
  require_inside(M, a, "travel_time");
  require_inside(M, b, "travel_time");
  TravelTime out;
  if (a == b) return out;

  GeodesicLine line{M, a, b - a};
  const GeodesicCase gc = reduce_line(line);
  if (gc.Q != 0.0) {
    const double s_star = -gc.B / gc.Q;
    if (s_star > 0 && s_star < 1 && !(sign_of(M.nu) * gc.psi_s(s_star) > 0))
      throw DomainError("travel_time: chord leaves the model");
  }
  if (gc.Q == 0.0) {
    out.regime = ChordRegime::Null;
    out.warning = "null chord: isochrone length vanishes identically";
    return out;
  }
  const CaseF f = case_f(gc);
  const double scale = f.c() * gc.a * gc.kappa * gc.kappa;
  const double dG = (f.eval(gc.y_of(1.0)) - f.eval(gc.y_of(0.0))) / scale;
  out.time = alpha * std::sqrt(std::abs(gc.Q)) * std::abs(dG);
  out.regime = gc.Q > 0 ? ChordRegime::Spacelike : ChordRegime::Timelike;
  return out;
}

TriangleResult triangle_experiment(double s) {
  if (!(s > 0 && s < 1)) throw DomainError("triangle_experiment: s must lie in (0, 1)");
  const CanonicalModel disk(Signature(2, 0), -1.0, Nu::Minus);
  Vector o = Vector::Zero(2), a(2), b(2);
  a << s, 0.0;
  b << 0.0, s;
  TriangleResult r;
  r.s = s;
  r.T_ab = travel_time(disk, a, b).time;
  r.T_sum = travel_time(disk, o, a).time + travel_time(disk, o, b).time;
  r.violates = r.T_ab > r.T_sum;
  return r;
}

double find_s0(double tol) {
  auto gap = [](double s) {
    const auto r = triangle_experiment(s);
    return r.T_ab - r.T_sum;
  };
  double lo = 0.05, hi = 0.95;
  if (!(gap(lo) < 0 && gap(hi) > 0)) throw std::logic_error("find_s0: crossover not bracketed");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace stiffgeo
