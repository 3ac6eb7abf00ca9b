#include "stiffgeo/projconn.hpp"

#include <cmath>
#include <stdexcept>

#include "stiffgeo/errors.hpp"
#include "stiffgeo/numdiff.hpp"

namespace stiffgeo {

namespace {

constexpr int kMaxCurvatureDim = 16;

double checked_value(double psi) {
  if (psi == 0.0 || !std::isfinite(psi)) throw DomainError("potential vanishes at evaluation point");
  return psi;
}

}  // namespace

double QuadraticPolynomial::value(const Vector& x) const {
  return 0.5 * x.dot(hessian * x) + linear.dot(x) + constant;
}

Vector QuadraticPolynomial::gradient(const Vector& x) const { return hessian * x + linear; }

QuadraticPotential::QuadraticPotential(Signature s, double K_, Vector lin_, double c_)
    : sig(s), K(K_), lin(std::move(lin_)), c(c_) {
  if (lin.size() != sig.dim()) throw std::invalid_argument("potential: linear part has wrong dimension");
  if (K == 0.0 && c == 0.0 && lin.isZero(0.0)) throw std::invalid_argument("potential: identically zero");
}

double QuadraticPotential::value(const Vector& x) const { return 0.5 * K * q(sig, x) + lin.dot(x) + c; }

Vector QuadraticPotential::gradient(const Vector& x) const {
  return K * sig.eps_vector().cwiseProduct(x) + lin;
}

QuadraticPolynomial QuadraticPotential::polynomial() const { return {hessian(), lin, c}; }

Matrix AssociatedForm::derivative(const Vector& x, double rel_step) const {
  if (jac) return jac(x);
  return numdiff::jacobian(eval, x, rel_step);
}

AssociatedForm AssociatedForm::zero(const Signature& sig) {
  const int d = sig.dim();
  return {sig, [d](const Vector&) { return Vector::Zero(d).eval(); },
          [d](const Vector&) { return Matrix::Zero(d, d).eval(); }};
}

CurvatureTensor::CurvatureTensor(int d) : d_(d) {
  if (d < 1 || d > kMaxCurvatureDim) throw std::invalid_argument("curvature tensor: dimension must be in [1, 16]");
  data_.assign(static_cast<std::size_t>(d) * d * d * d, 0.0);
}

double CurvatureTensor::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

ChristoffelMap christoffel(const AssociatedForm& a, const Vector& x) { return ChristoffelMap(a.at(x)); }

CurvatureTensor curvature_from_derivatives(const Vector& a, const Matrix& D) {
  const int d = static_cast<int>(a.size());
  CurvatureTensor R(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double v = 0.0;
          if (i == l) v += a(j) * a(k) - D(j, k);
          if (j == l) v -= a(i) * a(k) - D(i, k);
          if (k == l) v += D(i, j) - D(j, i);
          R(i, j, k, l) = v;
        }
  return R;
}

CurvatureTensor curvature(const AssociatedForm& a, const Vector& x) {
  return curvature_from_derivatives(a.at(x), a.derivative(x));
}

RicciTensor ricci(const AssociatedForm& a, const Vector& x) {
  const Vector av = a.at(x);
  const Matrix D = a.derivative(x);
  const int d = static_cast<int>(av.size());
  return (d - 1) * av * av.transpose() + D.transpose() - d * D;
}

RicciTensor contract(const CurvatureTensor& R) {
  const int d = R.dim();
  Matrix Ric = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i) Ric(j, k) += R(i, j, k, i);
  return Ric;
}

Matrix infinitesimal_holonomy(const CurvatureTensor& R, int i, int j) {
  const int d = R.dim();
  Matrix M(d, d);
  for (int l = 0; l < d; ++l)
    for (int k = 0; k < d; ++k) M(l, k) = -R(i, j, k, l);
  return M;
}

IncompressibilityReport incompressibility_report(const AssociatedForm& a,
                                                 std::span<const Vector> probes, double tol) {
  if (probes.empty()) throw std::invalid_argument("incompressibility_report: need at least one probe");
  IncompressibilityReport rep;
  for (const auto& x : probes) {
    const Matrix D = a.derivative(x);
    rep.max_asymmetry = std::max(rep.max_asymmetry, (D - D.transpose()).cwiseAbs().maxCoeff());
  }
  rep.closed = rep.max_asymmetry < tol;
  return rep;
}

AssociatedForm form_from_polynomial(const Signature& sig, const QuadraticPolynomial& P) {
  if (P.dim() != sig.dim()) throw std::invalid_argument("form_from_polynomial: dimension mismatch");
  auto eval = [P](const Vector& x) -> Vector {
    const double psi = checked_value(P.value(x));
    return -P.gradient(x) / psi;
  };
  auto jac = [P](const Vector& x) -> Matrix {
    const double psi = checked_value(P.value(x));
    const Vector g = P.gradient(x);
    return -P.hessian / psi + g * g.transpose() / (psi * psi);
  };
  return {sig, eval, jac};
}

AssociatedForm form_from_potential(const QuadraticPotential& P) {
  return form_from_polynomial(P.sig, P.polynomial());
}

CurvatureTensor curvature_from_potential(const QuadraticPotential& P, const Vector& x) {
  const int d = P.dim();
  if (x.size() != d) throw std::invalid_argument("curvature_from_potential: dimension mismatch");
  const double psi = checked_value(P.value(x));
  const Matrix H = P.hessian();
  CurvatureTensor R(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        R(i, j, k, i) += H(j, k) / psi;
        R(i, j, k, j) -= H(i, k) / psi;
      }
  return R;
}

AssociatedForm pushforward_affine(const AssociatedForm& a, const AffineMap& A) {
  const AffineMap Ainv = A.inverse();
  const Matrix LinvT = Ainv.linear.transpose();
  const Matrix Linv = Ainv.linear;
  AssociatedForm out;
  out.sig = a.sig;
  out.eval = [a, Ainv, LinvT](const Vector& y) -> Vector { return LinvT * a.at(Ainv.apply(y)); };
  out.jac = [a, Ainv, LinvT, Linv](const Vector& y) -> Matrix {
    return LinvT * a.derivative(Ainv.apply(y)) * Linv;
  };
  return out;
}

QuadraticPolynomial pushforward_affine(const QuadraticPolynomial& P, const AffineMap& A) {
  const AffineMap Ainv = A.inverse();
  const Matrix& Li = Ainv.linear;
  const Vector& t = Ainv.offset;
  return {Li.transpose() * P.hessian * Li, Li.transpose() * (P.hessian * t + P.linear), P.value(t)};
}

Vector ProjectiveMap::apply(const Vector& x) const {
  const double C = denominator(x);
  if (C == 0.0) throw DomainError("projective map: denominator vanishes");
  return numerator.apply(x) / C;
}

Vector ProjectiveMap::inverse(const Vector& y) const {
  const Matrix S = numerator.linear - y * denom_lin.transpose();
  Eigen::FullPivLU<Matrix> lu(S);
  if (!lu.isInvertible()) throw DomainError("projective map: not invertible at this point");
  return lu.solve(y * denom_const - numerator.offset);
}

double ProjectivePotential::operator()(const Vector& y) const {
  const Vector x = P_.inverse(y);
  const double C = P_.denominator(x);
  if (C == 0.0) throw DomainError("projective potential: denominator vanishes");
  return psi_.value(x) / C;
}

AssociatedForm ProjectivePotential::form(const Signature& sig) const {
  ProjectivePotential self = *this;
  AssociatedForm out;
  out.sig = sig;
  out.eval = [self](const Vector& y) -> Vector {
    const double psi = checked_value(self(y));
    return -numdiff::gradient(self, y) / psi;
  };
  return out;
}

ProjectivePotential pushforward_projective(const QuadraticPotential& P, const ProjectiveMap& map) {
  if (map.numerator.dim() != P.dim() || map.denom_lin.size() != P.dim())
    throw std::invalid_argument("pushforward_projective: dimension mismatch");
  return ProjectivePotential(P.polynomial(), map);
}

namespace {

void check_subspace(const AffineSubspace& F, int d) {
  if (F.origin.size() != d || F.basis.rows() != d || F.dim() < 1)
    throw std::invalid_argument("restrict: subspace dimension mismatch");
  if (Eigen::FullPivLU<Matrix>(F.basis).rank() < F.dim()) throw std::invalid_argument("restrict: degenerate basis");
}

Signature induced_signature(const Signature& sig, const Matrix& B) {
  const Matrix G = B.transpose() * sig.gram() * B;
  Eigen::SelfAdjointEigenSolver<Matrix> es(G);
  int p = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 0) ++p;
  return Signature(p, static_cast<int>(B.cols()) - p);
}

}  // namespace

QuadraticPolynomial restrict(const QuadraticPolynomial& P, const AffineSubspace& F) {
  check_subspace(F, P.dim());
  const Matrix& B = F.basis;
  return {B.transpose() * P.hessian * B, B.transpose() * P.gradient(F.origin), P.value(F.origin)};
}

QuadraticPolynomial restrict(const QuadraticPotential& P, const AffineSubspace& F) {
  return restrict(P.polynomial(), F);
}

AssociatedForm restrict(const AssociatedForm& a, const AffineSubspace& F) {
  check_subspace(F, a.sig.dim());
  AssociatedForm out;
  out.sig = induced_signature(a.sig, F.basis);
  out.eval = [a, F](const Vector& s) -> Vector { return F.basis.transpose() * a.at(F.point(s)); };
  out.jac = [a, F](const Vector& s) -> Matrix {
    return F.basis.transpose() * a.derivative(F.point(s)) * F.basis;
  };
  return out;
}

bool is_flat(const QuadraticPotential& P) {
  const double lin_max = P.lin.size() ? P.lin.cwiseAbs().maxCoeff() : 0.0;
  return std::abs(P.K) < 1e-12 * std::max({lin_max, std::abs(P.c), 1.0});
}

}  // namespace stiffgeo
