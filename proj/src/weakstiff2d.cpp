#include "stiffgeo/weakstiff2d.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "stiffgeo/errors.hpp"
#include "stiffgeo/numdiff.hpp"

namespace stiffgeo {

namespace {

using Poly = std::vector<Complex>;

double max_abs(const Poly& p) {
  double m = 0.0;
  for (const auto& c : p) m = std::max(m, std::abs(c));
  return m;
}

void trim(Poly& p, double rel = 1e-14) {
  const double scale = max_abs(p);
  while (!p.empty() && std::abs(p.back()) <= rel * scale) p.pop_back();
}

Complex horner(const Poly& p, Complex z) {
  Complex acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Complex horner_derivative(const Poly& p, Complex z) {
  Complex acc = 0.0;
  for (std::size_t k = p.size(); k-- > 1;) acc = acc * z + static_cast<double>(k) * p[k];
  return acc;
}

// a = q * b + r
void divmod(const Poly& a, const Poly& b, Poly& quot, Poly& rem) {
  rem = a;
  quot.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0.0);
  for (std::size_t k = quot.size(); k-- > 0;) {
    const Complex c = rem[k + b.size() - 1] / b.back();
    quot[k] = c;
    for (std::size_t j = 0; j < b.size(); ++j) rem[k + j] -= c * b[j];
  }
  rem.resize(b.size() > 1 ? b.size() - 1 : 0);
  trim(rem, 1e-10);
}

Poly poly_gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly quo, rem;
    divmod(a, b, quo, rem);
    // Relative cut-off: remainders that are rounding noise end the chain.
    if (max_abs(rem) <= 1e-10 * std::max(1.0, max_abs(a))) rem.clear();
    a = std::move(b);
    b = std::move(rem);
  }
  return a;
}

Vector complex_to_vec(Complex A) {
  Vector v(2);
  v << A.real(), A.imag();
  return v;
}

}  // namespace

RationalComplexFn::RationalComplexFn(std::vector<Complex> num, std::vector<Complex> den)
    : num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

RationalComplexFn RationalComplexFn::infinity() {
  RationalComplexFn f;
  f.infinite_ = true;
  f.num_ = {1.0};
  return f;
}

RationalComplexFn RationalComplexFn::constant(Complex c) { return RationalComplexFn({c}, {1.0}); }

void RationalComplexFn::normalize() {
  trim(den_);
  if (den_.empty()) throw std::invalid_argument("rational function: denominator is identically zero");
  trim(num_);
  if (!num_.empty()) {
    const Poly g = poly_gcd(num_, den_);
    if (g.size() > 1) {
      Poly q1, r1, q2, r2;
      divmod(num_, g, q1, r1);
      divmod(den_, g, q2, r2);
      num_ = q1;
      den_ = q2;
      trim(num_);
      trim(den_);
    }
  }
  const Complex lead = den_.back();
  for (auto& c : num_) c /= lead;
  for (auto& c : den_) c /= lead;
}

std::optional<Complex> RationalComplexFn::eval(Complex z) const {
  if (infinite_) return std::nullopt;
  const Complex d = den_at(z);
  if (d == 0.0) return std::nullopt;
  return num_at(z) / d;
}

Complex RationalComplexFn::num_at(Complex z) const { return horner(num_, z); }
Complex RationalComplexFn::den_at(Complex z) const { return infinite_ ? 0.0 : horner(den_, z); }
Complex RationalComplexFn::num_derivative_at(Complex z) const { return horner_derivative(num_, z); }
Complex RationalComplexFn::den_derivative_at(Complex z) const { return infinite_ ? 0.0 : horner_derivative(den_, z); }

bool RationalComplexFn::is_minus_inverse(double tol) const {
  if (infinite_) return false;
  // z num(z) + den(z) == 0
  Poly s(std::max(num_.size() + 1, den_.size()), 0.0);
  for (std::size_t k = 0; k < num_.size(); ++k) s[k + 1] += num_[k];
  for (std::size_t k = 0; k < den_.size(); ++k) s[k] += den_[k];
  return max_abs(s) <= tol * std::max(1.0, max_abs(den_));
}

AssociatedForm from_meromorphic(const RationalComplexFn& f) {
  AssociatedForm a;
  a.sig = Signature(2, 0);
  if (f.is_infinity()) {
    a = AssociatedForm::zero(Signature(2, 0));
    return a;
  }
  auto W_at = [f](Complex z) {
    const Complex W = std::conj(z) * f.den_at(z) + f.num_at(z);
    const double scale = std::max(1.0, std::abs(z)) * std::abs(f.den_at(z)) + std::abs(f.num_at(z));
    if (std::abs(W) <= 1e-14 * scale) throw DomainError("from_meromorphic: conj(z) + f(z) vanishes");
    return W;
  };
  a.eval = [f, W_at](const Vector& x) -> Vector {
    const Complex z(x(0), x(1));
    return complex_to_vec(-2.0 * f.den_at(z) / W_at(z));
  };
  a.jac = [f, W_at](const Vector& x) -> Matrix {
    const Complex z(x(0), x(1));
    const Complex W = W_at(z), D = f.den_at(z);
    const Complex dz = 2.0 * (f.num_derivative_at(z) * D - f.num_at(z) * f.den_derivative_at(z)) / (W * W);
    const Complex dzbar = 2.0 * D * D / (W * W);
    const Complex d1 = dz + dzbar;
    const Complex d2 = Complex(0.0, 1.0) * (dz - dzbar);
    Matrix J(2, 2);
    J << d1.real(), d1.imag(), d2.real(), d2.imag();
    return J;
  };
  return a;
}

AssociatedForm from_holomorphic(std::function<Complex(Complex)> f) {
  AssociatedForm a;
  a.sig = Signature(2, 0);
  a.eval = [f](const Vector& x) -> Vector {
    const Complex z(x(0), x(1));
    const Complex W = std::conj(z) + f(z);
    if (W == 0.0) throw DomainError("from_holomorphic: conj(z) + f(z) vanishes");
    return complex_to_vec(-2.0 / W);
  };
  return a;
}

AssociatedForm from_pair_11(const HatRealPair& p) {
  auto coeff = [](const HatRealFn& fn, double arg, double self) {
    if (fn.infinite) return 0.0;
    const double den = fn.f(arg) - self;
    if (den == 0.0) throw DomainError("from_pair_11: f(y) - y vanishes");
    return 1.0 / den;
  };
  auto deriv = [](const HatRealFn& fn, double t) {
    if (fn.infinite) return 0.0;
    if (fn.df) return fn.df(t);
    const double h = 1e-6 * std::max(1.0, std::abs(t));
    return (fn.f(t + h) - fn.f(t - h)) / (2.0 * h);
  };
  AssociatedForm a;
  a.sig = Signature(1, 1);
  a.eval = [p, coeff](const Vector& y) -> Vector {
    Vector b(2);
    b << coeff(p.f1, y(1), y(0)), coeff(p.f2, y(0), y(1));
    return b;
  };
  a.jac = [p, coeff, deriv](const Vector& y) -> Matrix {
    const double b1 = coeff(p.f1, y(1), y(0)), b2 = coeff(p.f2, y(0), y(1));
    Matrix J(2, 2);
    J << b1 * b1, -deriv(p.f2, y(0)) * b2 * b2, -deriv(p.f1, y(1)) * b1 * b1, b2 * b2;
    return J;
  };
  return a;
}

Vector coords_E11_to_Eprime(const Vector& x) {
  if (x.size() != 2) throw std::invalid_argument("coords_E11_to_Eprime: dimension must be 2");
  Vector y(2);
  y << x(0) + x(1), x(0) - x(1);
  return y;
}

Vector coords_Eprime_to_E11(const Vector& y) {
  if (y.size() != 2) throw std::invalid_argument("coords_Eprime_to_E11: dimension must be 2");
  Vector x(2);
  x << 0.5 * (y(0) + y(1)), 0.5 * (y(0) - y(1));
  return x;
}

AssociatedForm eprime_form_to_e11(const AssociatedForm& b) {
  Matrix Linv(2, 2);
  Linv << 0.5, 0.5, 0.5, -0.5;
  AssociatedForm a = pushforward_affine(b, AffineMap{Linv, Vector::Zero(2)});
  a.sig = Signature(1, 1);
  return a;
}

WeakStiffReport verify_weakstiff(const AssociatedForm& a, std::span<const Vector> probes, WeakStiffCoords coords,
                                 double tol, double fd_step) {
  if (probes.empty()) throw std::invalid_argument("verify_weakstiff: need at least one probe");
  if (a.sig.dim() != 2) throw std::invalid_argument("verify_weakstiff: dimension must be 2");
  WeakStiffReport rep;
  for (const auto& x : probes) {
    const Vector av = a.at(x);
    const Matrix D = numdiff::jacobian(a.eval, x, fd_step);
    double r1, r2;
    if (coords == WeakStiffCoords::Euclidean20) {
      r1 = D(0, 1) + D(1, 0) - 2.0 * av(0) * av(1);
      r2 = D(0, 0) - av(0) * av(0) - D(1, 1) + av(1) * av(1);
    } else {
      r1 = D(0, 0) - av(0) * av(0);
      r2 = D(1, 1) - av(1) * av(1);
    }
    rep.max_residual = std::max({rep.max_residual, std::abs(r1), std::abs(r2)});
    const CurvatureTensor R = curvature_from_derivatives(av, D);
    rep.max_trace = std::max(rep.max_trace, std::abs(R(0, 1, 0, 0) + R(0, 1, 1, 1)));
  }
  rep.weakly_stiff = rep.max_residual < tol;
  rep.isometric = rep.weakly_stiff && rep.max_trace < tol;
  return rep;
}

ConjDichotomy conj_dichotomy(const RationalComplexFn& f) {
  ConjDichotomy out;
  if (f.is_minus_inverse()) {
    out.canonical_disk_model = true;
    return out;
  }
  if (f.is_infinity()) {
    out.boundary_point = Complex(1.0, 0.0);
    out.boundary_value = std::numeric_limits<double>::infinity();
    return out;
  }
  constexpr int kSamples = 256;
  for (int k = 0; k < kSamples; ++k) {
    const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * k / kSamples);
    const auto fz = f.eval(z);
    if (!fz) continue;
    const double v = std::abs(std::conj(z) + *fz);
    if (v > out.boundary_value + 1e-12) {
      out.boundary_value = v;
      out.boundary_point = z;
    }
  }
  return out;
}

}  // namespace stiffgeo
