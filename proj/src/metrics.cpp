#include "stiffgeo/metrics.hpp"

#include <cmath>

#include "stiffgeo/errors.hpp"
#include "stiffgeo/ode.hpp"

namespace stiffgeo {

namespace {

// d f for f = -2 ln|psi|
Vector log_factor_gradient(const CanonicalModel& M, const Vector& x) { return -2.0 * M.grad_psi(x) / M.psi(x); }

Vector h_acceleration(const CanonicalModel& M, const Vector& x, const Vector& v) {
  const Vector df = log_factor_gradient(M, x);
  return -(2.0 * df.dot(v) * v - q(M.sig, v) * M.sig.eps_vector().cwiseProduct(df));
}

}  // namespace

double conformal_factor(const ConformalMetric& m, const Vector& x) {
  require_inside(m.model, x, "metric");
  const double psi = m.model.psi(x);
  switch (m.kind) {
    case MetricKind::Flat: return 1.0;
    case MetricKind::Ricci: return (2.0 * m.model.dim() - 2.0) / psi;
    case MetricKind::Isochrone: return m.alpha * m.alpha / std::pow(psi, 4);
  }
  return 1.0;
}

Matrix metric_at(const ConformalMetric& m, const Vector& x) { return conformal_factor(m, x) * m.model.sig.gram(); }

double scalar_curvature_h(const CanonicalModel& M, const Vector& x, double alpha) {
  if (x.size() != M.dim()) throw std::invalid_argument("scalar_curvature_h: dimension mismatch");
  const int d = M.dim();
  const double psi = M.psi(x);
  return 8.0 * (d - 1) * (d * M.lambda - (d - 2) * q(M.sig, x)) * psi * psi / (alpha * alpha);
}

Vector ChristoffelSymbols::contract(const Vector& u, const Vector& v) const {
  Vector out = Vector::Zero(d_);
  for (int k = 0; k < d_; ++k)
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) out(k) += (*this)(k, i, j) * u(i) * v(j);
  return out;
}

ChristoffelSymbols levi_civita_h(const CanonicalModel& M, const Vector& x, double /*alpha*/) {
  require_inside(M, x, "levi_civita_h");
  const int d = M.dim();
  const Vector df = log_factor_gradient(M, x);
  ChristoffelSymbols G(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double v = 0.0;
        if (k == i) v += df(j);
        if (k == j) v += df(i);
        if (i == j) v -= M.sig.eps(i) * M.sig.eps(k) * df(k);
        G(k, i, j) = v;
      }
  return G;
}

HGeodesicTrace h_geodesic(const CanonicalModel& M, const Vector& x0, const Vector& v0, double t_end, double tol,
                          double alpha, int samples) {
  require_inside(M, x0, "h_geodesic");
  const int d = M.dim();
  if (v0.size() != d) throw std::invalid_argument("h_geodesic: dimension mismatch");

  auto speed = [&](const Vector& x, const Vector& v) { return alpha * alpha * q(M.sig, v) / std::pow(M.psi(x), 4); };
  const double s0 = speed(x0, v0);

  ode::State st(2 * d);
  for (int i = 0; i < d; ++i) {
    st[i] = x0(i);
    st[d + i] = v0(i);
  }
  auto sys = [&](const ode::State& s, ode::State& ds, double) {
    Eigen::Map<const Vector> x(s.data(), d), v(s.data() + d, d);
    if (std::abs(M.psi(x)) < 1e-9) throw DomainError("h_geodesic: trajectory reached the boundary");
    const Vector acc = h_acceleration(M, x, v);
    for (int i = 0; i < d; ++i) {
      ds[i] = v(i);
      ds[d + i] = acc(i);
    }
  };

  HGeodesicTrace tr;
  auto record = [&](const ode::State& s, double t) {
    Vector x = Eigen::Map<const Vector>(s.data(), d), v = Eigen::Map<const Vector>(s.data() + d, d);
    if (!contains(M, x)) throw DomainError("h_geodesic: trajectory left the model");
    const double drift = std::abs(speed(x, v) - s0) / std::max(std::abs(s0), 1e-300);
    if (s0 != 0.0) tr.max_speed_drift = std::max(tr.max_speed_drift, drift);
    tr.t.push_back(t);
    tr.x.push_back(std::move(x));
    tr.v.push_back(std::move(v));
  };

  ode::Options opt;
  opt.abs_tol = tol;
  opt.rel_tol = tol;
  if (samples <= 0) {
    ode::integrate(sys, st, 0.0, t_end, opt, record);
  } else {
    record(st, 0.0);
    for (int k = 1; k <= samples; ++k) {
      const double ta = t_end * (k - 1) / samples, tb = t_end * k / samples;
      ode::integrate(sys, st, ta, tb, opt);
      record(st, tb);
    }
  }
  return tr;
}

double h_geodesic_residual(const CanonicalModel& M, const std::function<Vector(double)>& curve, double t,
                           double /*alpha*/, double h) {
  const Vector xm = curve(t - h), x0 = curve(t), xp = curve(t + h);
  const Vector vel = (xp - xm) / (2.0 * h);
  const Vector acc = (xp - 2.0 * x0 + xm) / (h * h);
  return (acc - h_acceleration(M, x0, vel)).cwiseAbs().maxCoeff();
}

double volume_form_coeff(const CanonicalModel& M, double beta, const Vector& x) {
  require_inside(M, x, "volume_form_coeff");
  return beta / std::pow(M.psi(x), M.dim() + 1);
}

double vol_g(const Vector&) { return 1.0; }

double vol_h(const CanonicalModel& M, double alpha, const Vector& x) {
  require_inside(M, x, "vol_h");
  const int d = M.dim();
  return std::pow(alpha, d) / std::pow(M.psi(x), 2 * d);
}

CurvatureForms curvature_forms(const CanonicalModel& M, const Vector& x) {
  if (M.dim() != 2) throw std::invalid_argument("curvature_forms: dimension must be 2");
  require_inside(M, x, "curvature_forms");
  const double psi = M.psi(x);
  return {2.0 / psi, 8.0 * M.lambda / (psi * psi), 2.0 / psi};
}

Vector flatten_lambda0(const Signature& sig, const Vector& x) {
  if (sig.dim() != 2 || x.size() != 2) throw std::invalid_argument("flatten_lambda0: dimension must be 2");
  Vector y(2);
  if (sig.m == 1 && sig.p == 1) {
    const double qx = x(0) * x(0) - x(1) * x(1);
    if (qx == 0.0) throw DomainError("flatten_lambda0: point on the light cone");
    const bool spacelike = qx > 0;
    const double sigma = spacelike ? (x(0) > 0 ? 1.0 : -1.0) : (x(1) > 0 ? 1.0 : -1.0);
    const double r = std::sqrt(std::abs(qx));
    const double th = spacelike ? std::atanh(x(1) / x(0)) : std::atanh(x(0) / x(1));
    const double R = 1.0 / (3.0 * r * r * r), Th = -3.0 * th;
    if (spacelike) y << sigma * R * std::cosh(Th), sigma * R * std::sinh(Th);
    else y << sigma * R * std::sinh(Th), sigma * R * std::cosh(Th);
    return y;
  }
  const double r = x.norm();
  if (r == 0.0) throw DomainError("flatten_lambda0: point on the light cone");
  const double th = std::atan2(x(1), x(0));
  const double R = 1.0 / (3.0 * r * r * r), Th = -3.0 * th;
  y << R * std::cos(Th), R * std::sin(Th);
  return y;
}

std::vector<TableRow> comparison_table(const Vector& x) {
  if (x.size() != 2) throw std::invalid_argument("comparison_table: point must be 2-dimensional");
  const double u = 1.0 - x.squaredNorm();
  if (!(u > 0)) throw DomainError("comparison_table: point outside the unit disk");
  const Matrix I = Matrix::Identity(2, 2);
  std::vector<TableRow> rows;
  rows.push_back({"Flat", I, 1.0, 0.0, false, true, true});
  rows.push_back({"Cayley-Klein", Matrix(I / u + x * x.transpose() / (u * u)), 1.0 / std::pow(u, 1.5),
                  -1.0 / std::pow(u, 1.5), true, false, true});
  rows.push_back({"Poincare", Matrix(4.0 * I / (u * u)), 4.0 / (u * u), -4.0 / (u * u), true, true, false});
  rows.push_back({"S(2,0;-1;-)", std::nullopt, 1.0 / (u * u * u), -2.0 / u, true, true, true});
  return rows;
}

}  // namespace stiffgeo
