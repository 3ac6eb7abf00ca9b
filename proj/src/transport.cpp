#include "stiffgeo/transport.hpp"

#include <cmath>
#include <numbers>

#include "stiffgeo/errors.hpp"
#include "stiffgeo/ode.hpp"

namespace stiffgeo {

namespace {

constexpr double kMinAbsPsi = 1e-9;

using PointCheck = std::function<void(const Vector&)>;

struct Segment {
  std::function<Vector(double)> pos;
  std::function<Vector(double)> vel;
  double t0, t1;
  int samples;
};

std::vector<Segment> segments_of(const PathSpec& path) {
  std::vector<Segment> segs;
  if (path.curve) {
    const auto& c = *path.curve;
    auto vel = c.velocity;
    if (!vel) {
      auto pos = c.position;
      vel = [pos](double t) -> Vector {
        const double h = 1e-6 * std::max(1.0, std::abs(t));
        return (pos(t + h) - pos(t - h)) / (2.0 * h);
      };
    }
    segs.push_back({c.position, vel, c.t0, c.t1, std::max(2, c.samples)});
    return segs;
  }
  if (path.polyline.empty()) throw std::invalid_argument("path: empty polyline");
  if (path.polyline.size() == 1) {
    const Vector p = path.polyline[0];
    segs.push_back({[p](double) { return p; }, [p](double) { return Vector::Zero(p.size()).eval(); }, 0.0, 0.0, 1});
    return segs;
  }
  for (std::size_t k = 0; k + 1 < path.polyline.size(); ++k) {
    const Vector a = path.polyline[k];
    const Vector delta = path.polyline[k + 1] - a;
    segs.push_back({[a, delta](double t) -> Vector { return a + t * delta; },
                    [delta](double) { return delta; }, 0.0, 1.0, 64});
  }
  return segs;
}

// V' = -Gamma(gamma', V), Gamma(u, v) = a(v) u + a(u) v, column by column.
Matrix integrate_transport(const std::function<Vector(const Vector&)>& form, const std::vector<Segment>& segs,
                           int d, double tol) {
  Matrix total = Matrix::Identity(d, d);
  for (const auto& seg : segs) {
    if (seg.t0 == seg.t1) continue;
    ode::State state(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) state[static_cast<std::size_t>(i) * d + i] = 1.0;
    auto sys = [&](const ode::State& x, ode::State& dx, double t) {
      const Vector g = seg.pos(t);
      const Vector gd = seg.vel(t);
      const Vector a = form(g);
      const double ag = a.dot(gd);
      Eigen::Map<const Matrix> V(x.data(), d, d);
      Eigen::Map<Matrix> dV(dx.data(), d, d);
      dV = -(gd * (a.transpose() * V) + ag * V);
    };
    ode::Options opt;
    opt.abs_tol = tol;
    opt.rel_tol = tol;
    opt.initial_step = 1e-3 * std::abs(seg.t1 - seg.t0);
    ode::integrate(sys, state, seg.t0, seg.t1, opt);
    total = Eigen::Map<const Matrix>(state.data(), d, d) * total;
  }
  return total;
}

void check_segments(const std::vector<Segment>& segs, const PointCheck& check) {
  for (const auto& seg : segs)
    for (int k = 0; k <= seg.samples; ++k) check(seg.pos(seg.t0 + (seg.t1 - seg.t0) * k / seg.samples));
}

TransportMap run_ode(const std::function<Vector(const Vector&)>& form, const PathSpec& path, int d,
                     const OdeTransportOptions& opt, const PointCheck& check) {
  const auto segs = segments_of(path);
  if (check) check_segments(segs, check);
  TransportMap out;
  out.method = TransportMethod::ODE;
  out.from = path.start();
  out.to = path.end();
  if (out.from.size() != d) throw std::invalid_argument("transport: path dimension mismatch");
  out.matrix = integrate_transport(form, segs, d, opt.tol);
  if (opt.estimate_error) {
    const Matrix coarse = integrate_transport(form, segs, d, 10.0 * opt.tol);
    out.est_error = (coarse - out.matrix).cwiseAbs().maxCoeff();
  }
  return out;
}

void check_model_point(const CanonicalModel& M, const Vector& x) {
  require_inside(M, x, "transport");
  if (std::abs(M.psi(x)) < kMinAbsPsi) throw DomainError("transport: path too close to the boundary");
}

double eps_of_plane(const Signature& sig, const Vector& u, const Vector& w) {
  const double qu = q(sig, u), qw = q(sig, w);
  if (std::abs(std::abs(qu) - 1.0) > 1e-9 || std::abs(std::abs(qw) - 1.0) > 1e-9 || std::abs(dot(sig, u, w)) > 1e-9)
    throw std::invalid_argument("arc: (u, w) must be q-orthonormal");
  return qw / qu > 0 ? 1.0 : -1.0;
}

}  // namespace

PathSpec PathSpec::line(std::vector<Vector> pts) {
  PathSpec p;
  p.polyline = std::move(pts);
  return p;
}

PathSpec PathSpec::parametric(std::function<Vector(double)> pos, std::function<Vector(double)> vel, double t0,
                              double t1, int samples) {
  PathSpec p;
  p.curve = Parametric{std::move(pos), std::move(vel), t0, t1, samples};
  return p;
}

PathSpec PathSpec::circle(const Vector& center, const Vector& u, const Vector& w, double r) {
  return parametric([=](double t) -> Vector { return center + r * (std::cos(t) * u + std::sin(t) * w); },
                    [=](double t) -> Vector { return r * (-std::sin(t) * u + std::cos(t) * w); }, 0.0,
                    2.0 * std::numbers::pi, 256);
}

Vector PathSpec::start() const { return curve ? curve->position(curve->t0) : polyline.front(); }
Vector PathSpec::end() const { return curve ? curve->position(curve->t1) : polyline.back(); }

ChristoffelMap gamma_at(const CanonicalModel& M, const Vector& x) {
  require_inside(M, x, "gamma_at");
  return ChristoffelMap(-M.grad_psi(x) / M.psi(x));
}

TransportMap transport_ode(const CanonicalModel& M, const PathSpec& path, const OdeTransportOptions& opt) {
  auto form = [M](const Vector& x) -> Vector {
    const double psi = M.psi(x);
    if (std::abs(psi) < kMinAbsPsi) throw DomainError("transport: path reached the boundary");
    return -M.grad_psi(x) / psi;
  };
  return run_ode(form, path, M.dim(), opt, [&M](const Vector& x) { check_model_point(M, x); });
}

TransportMap transport_ode(const AssociatedForm& a, const PathSpec& path, const OdeTransportOptions& opt) {
  return run_ode(a.eval, path, a.sig.dim(), opt, [&a](const Vector& x) {
    if (!a.at(x).allFinite()) throw DomainError("transport: form not finite along path");
  });
}

TransportMap transport_ray(const CanonicalModel& M, const Vector& e_r, double t0, double t1) {
  const Signature& sig = M.sig;
  const double qe = q(sig, e_r);
  if (std::abs(std::abs(qe) - 1.0) > 1e-9) throw std::invalid_argument("transport_ray: q(e_r) must be +1 or -1");
  check_model_point(M, t0 * e_r);
  check_model_point(M, t1 * e_r);
  // psi(t e_r) = lambda + qe t^2 is monotone in |t|: endpoints and the origin decide.
  if (t0 * t1 < 0) check_model_point(M, Vector::Zero(M.dim()));

  const double Lam = M.psi(t1 * e_r) / M.psi(t0 * e_r);
  const int d = M.dim();
  TransportMap out;
  out.method = TransportMethod::ClosedForm;
  out.from = t0 * e_r;
  out.to = t1 * e_r;
  out.matrix = Lam * Matrix::Identity(d, d) + (Lam * Lam - Lam) * e_r * (sig.gram() * e_r).transpose() / qe;
  FrameData fd;
  fd.frame_from = orthonormal_frame(sig, e_r);
  fd.frame_to = fd.frame_from;
  fd.in_frame = Lam * Matrix::Identity(d, d);
  fd.in_frame(0, 0) = Lam * Lam;
  out.frame = fd;
  return out;
}

TransportMap transport_lightcone_map(const CanonicalModel& M, const Vector& e_r, double f0, double f1) {
  if (M.lambda == 0.0) throw DomainError("transport_lightcone: light cone lies outside the model when lambda = 0");
  const Signature& sig = M.sig;
  if (std::abs(q(sig, e_r)) > 1e-12 * std::max(1.0, e_r.squaredNorm()))
    throw std::invalid_argument("transport_lightcone: e_r must be a null vector");
  check_model_point(M, f0 * e_r);
  check_model_point(M, f1 * e_r);
  const int d = M.dim();
  TransportMap out;
  out.method = TransportMethod::ClosedForm;
  out.from = f0 * e_r;
  out.to = f1 * e_r;
  out.matrix = Matrix::Identity(d, d) + (f1 * f1 - f0 * f0) / M.lambda * e_r * (sig.gram() * e_r).transpose();
  return out;
}

Vector transport_lightcone(const CanonicalModel& M, const Vector& e_r, double f0, double f1, const Vector& v0) {
  if (v0.size() != M.dim()) throw std::invalid_argument("transport_lightcone: dimension mismatch");
  return transport_lightcone_map(M, e_r, f0, f1).apply(v0);
}

CharacteristicFrequency characteristic_frequency(const CanonicalModel& M, double q_gamma, double eps) {
  if (eps != 1.0 && eps != -1.0) throw std::invalid_argument("characteristic_frequency: eps must be +1 or -1");
  if (q_gamma == 0.0) throw DomainError("characteristic_frequency: leaf on the light cone");
  if (q_gamma + M.lambda == 0.0) throw DomainError("characteristic_frequency: leaf on the boundary");
  CharacteristicFrequency cf;
  cf.omega_sq = eps * (q_gamma - M.lambda) / (q_gamma + M.lambda);
  if (std::abs(cf.omega_sq) <= 1e-14) {
    cf.omega_sq = 0.0;
    cf.omega = 0.0;
    cf.regime = FrequencyRegime::Zero;
  } else if (cf.omega_sq > 0) {
    cf.omega = std::sqrt(cf.omega_sq);
    cf.regime = FrequencyRegime::Real;
  } else {
    cf.omega = std::complex<double>(0.0, std::sqrt(-cf.omega_sq));
    cf.regime = FrequencyRegime::Imaginary;
  }
  return cf;
}

Matrix oscillator_matrix(double omega_sq, double eps, double t) {
  const std::complex<double> w = std::sqrt(std::complex<double>(omega_sq, 0.0));
  const double c = std::cosh(w * t).real();
  const double s_over_w = omega_sq == 0.0 ? t : (std::sinh(w * t) / w).real();
  Matrix m(2, 2);
  m << c, eps * s_over_w, eps * omega_sq * s_over_w, c;
  return m;
}

Vector arc_point(const Signature& sig, const Vector& u, const Vector& w, double r, double theta) {
  const double eps = eps_of_plane(sig, u, w);
  const double C = eps > 0 ? std::cos(theta) : std::cosh(theta);
  const double S = eps > 0 ? std::sin(theta) : std::sinh(theta);
  return r * (C * u + S * w);
}

TransportMap transport_arc(const CanonicalModel& M, const Vector& u, const Vector& w, double r, double theta0,
                           double theta1) {
  const Signature& sig = M.sig;
  if (u.size() != M.dim() || w.size() != M.dim()) throw std::invalid_argument("transport_arc: dimension mismatch");
  if (!(r > 0)) throw std::invalid_argument("transport_arc: radius must be positive");
  const double eps = eps_of_plane(sig, u, w);
  const double q_gamma = r * r * q(sig, u);
  // psi is constant on the arc and the arc is connected: one point decides.
  check_model_point(M, arc_point(sig, u, w, r, theta0));
  const CharacteristicFrequency cf = characteristic_frequency(M, q_gamma, eps);

  auto frame = [&](double th) {
    const double C = eps > 0 ? std::cos(th) : std::cosh(th);
    const double S = eps > 0 ? std::sin(th) : std::sinh(th);
    Matrix F(M.dim(), 2);
    F.col(0) = C * u + S * w;
    F.col(1) = -eps * S * u + C * w;
    return F;
  };
  const Matrix F0 = frame(theta0), F1 = frame(theta1);
  const Matrix mov = oscillator_matrix(cf.omega_sq, eps, theta1 - theta0);

  Matrix dual(2, M.dim());
  for (int c = 0; c < 2; ++c) dual.row(c) = (sig.gram() * F0.col(c)).transpose() / q(sig, F0.col(c));
  const int d = M.dim();
  TransportMap out;
  out.method = TransportMethod::ClosedForm;
  out.from = arc_point(sig, u, w, r, theta0);
  out.to = arc_point(sig, u, w, r, theta1);
  out.matrix = Matrix::Identity(d, d) - F0 * dual + F1 * mov * dual;
  out.frame = FrameData{F0, F1, mov};
  out.note = "theta increases from u towards w";
  return out;
}

TransportMap transport_arc(const CanonicalModel& M, int i, int j, double r, double theta0, double theta1) {
  const int d = M.dim();
  if (i < 0 || j < 0 || i >= d || j >= d || i == j) throw std::invalid_argument("transport_arc: bad plane indices");
  return transport_arc(M, Vector::Unit(d, i), Vector::Unit(d, j), r, theta0, theta1);
}

Matrix infinitesimal_holonomy(const CanonicalModel& M, const Vector& x, int i, int j) {
  require_inside(M, x, "infinitesimal_holonomy");
  return (2.0 / M.psi(x)) * inf_rotation_J(M.sig, i, j);
}

TransportMap holonomy_loop(const CanonicalModel& M, const PathSpec& loop, const OdeTransportOptions& opt) {
  const Vector a = loop.start(), b = loop.end();
  if ((a - b).norm() > 1e-9 * std::max(1.0, a.norm())) throw std::invalid_argument("holonomy_loop: path is not closed");
  return transport_ode(M, loop, opt);
}

}  // namespace stiffgeo
