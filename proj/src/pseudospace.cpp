#include "stiffgeo/pseudospace.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace stiffgeo {

namespace {

void require_dim(const Signature& sig, const Vector& x, const char* what) {
  if (x.size() != sig.dim())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (expected " +
                                std::to_string(sig.dim()) + ", got " +
                                std::to_string(x.size()) + ")");
}

}  // namespace

Signature::Signature(int p_, int m_) : p(p_), m(m_) {
  if (p < 0 || m < 0 || p + m < 1) throw std::invalid_argument("signature: need p, m >= 0 and p + m >= 1");
}

Vector Signature::eps_vector() const {
  Vector e(dim());
  for (int i = 0; i < dim(); ++i) e(i) = eps(i);
  return e;
}

Matrix Signature::gram() const { return eps_vector().asDiagonal(); }

std::string Signature::str() const { return std::to_string(p) + "," + std::to_string(m); }

double q(const Signature& sig, const Vector& x) {
  require_dim(sig, x, "q");
  double s = 0.0;
  for (int i = 0; i < sig.dim(); ++i) s += sig.eps(i) * x(i) * x(i);
  return s;
}

double dot(const Signature& sig, const Vector& u, const Vector& v) {
  require_dim(sig, u, "dot");
  require_dim(sig, v, "dot");
  double s = 0.0;
  for (int i = 0; i < sig.dim(); ++i) s += sig.eps(i) * u(i) * v(i);
  return s;
}

AffineMap AffineMap::identity(int d) { return {Matrix::Identity(d, d), Vector::Zero(d)}; }

AffineMap AffineMap::translation(const Vector& t) {
  return {Matrix::Identity(t.size(), t.size()), t};
}

AffineMap AffineMap::inverse() const {
  Eigen::FullPivLU<Matrix> lu(linear);
  if (!lu.isInvertible()) throw std::invalid_argument("affine map: singular linear part");
  Matrix inv = lu.inverse();
  return {inv, -inv * offset};
}

AffineMap AffineMap::compose(const AffineMap& g) const {
  return {linear * g.linear, linear * g.offset + offset};
}

MapClassification classify_affine_map(const AffineMap& f, const Signature& from,
                                      const Signature& to, double rel_tol) {
  const int d = from.dim();
  if (to.dim() != d || f.linear.rows() != d || f.linear.cols() != d)
    throw std::invalid_argument("classify_affine_map: dimension mismatch");
  const Matrix& L = f.linear;
  if (Eigen::FullPivLU<Matrix>(L).rank() < d) return {MapKind::Other, 0.0};

  std::vector<Vector> sample;
  for (int i = 0; i < d; ++i) sample.push_back(Vector::Unit(d, i));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) sample.push_back(Vector::Unit(d, i) + Vector::Unit(d, j));

  // q_A(e_0) = eps_0 is never zero, so c is well defined.
  const double c = q(to, L * sample[0]) / q(from, sample[0]);
  const double tol = rel_tol * std::max(1.0, L.squaredNorm());
  for (const auto& v : sample)
    if (std::abs(q(to, L * v) - c * q(from, v)) > tol) return {MapKind::Other, 0.0};

  if (std::abs(c) <= tol) return {MapKind::Other, 0.0};
  const double r = std::sqrt(std::abs(c));
  if (c < 0) return {MapKind::Negalitude, r};
  if (std::abs(c - 1.0) <= tol) return {MapKind::Isometry, 1.0};
  return {MapKind::Similarity, r};
}

Matrix inf_rotation_J(const Signature& sig, int i, int j) {
  const int d = sig.dim();
  if (i < 0 || j < 0 || i >= d || j >= d) throw std::invalid_argument("inf_rotation_J: index out of range");
  if (i == j) throw std::invalid_argument("inf_rotation_J: indices must differ");
  Matrix J = Matrix::Zero(d, d);
  J(j, i) = sig.eps(i);
  J(i, j) = -sig.eps(j);
  return J;
}

InfClassification infinitesimal_kind(const Signature& sig, const Matrix& M, double tol) {
  const int d = sig.dim();
  if (M.rows() != d || M.cols() != d) throw std::invalid_argument("infinitesimal_kind: dimension mismatch");
  const double s = M.trace() / d;
  const Matrix A = M - s * Matrix::Identity(d, d);
  const Matrix GA = sig.gram() * A;
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((GA + GA.transpose()).cwiseAbs().maxCoeff() > tol * scale) return {InfKind::Other, 0.0};
  if (std::abs(s) <= tol * scale) return {InfKind::InfIsometry, 0.0};
  return {InfKind::InfSimilarity, s};
}

Matrix orthonormal_frame(const Signature& sig, const Vector& first) {
  const int d = sig.dim();
  const double q0 = q(sig, first);
  if (std::abs(q0) < 1e-14 * std::max(1.0, first.squaredNorm()))
    throw std::invalid_argument("orthonormal_frame: first vector is null");
  Matrix F(d, d);
  F.col(0) = first / std::sqrt(std::abs(q0));
  std::vector<bool> used(d, false);
  for (int c = 1; c < d; ++c) {
    int best = -1;
    double best_q = 0.0;
    Vector best_w;
    for (int k = 0; k < d; ++k) {
      if (used[k]) continue;
      Vector w = Vector::Unit(d, k);
      for (int prev = 0; prev < c; ++prev) {
        const Vector& f = F.col(prev);
        w -= dot(sig, w, f) / q(sig, f) * f;
      }
      const double qw = std::abs(q(sig, w));
      if (qw > best_q) {
        best_q = qw;
        best = k;
        best_w = w;
      }
    }
    if (best < 0 || best_q < 1e-12) throw std::runtime_error("orthonormal_frame: completion failed");
    used[best] = true;
    F.col(c) = best_w / std::sqrt(best_q);
  }
  return F;
}

}  // namespace stiffgeo
