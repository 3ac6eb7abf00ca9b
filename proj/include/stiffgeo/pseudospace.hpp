#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

namespace stiffgeo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Signature (p, m) of the diagonal quadratic form
///   q(x) = x_1^2 + ... + x_p^2 - x_{p+1}^2 - ... - x_d^2,  d = p + m.
/// Indices are 0-based: eps(i) = +1 for i < p, -1 otherwise.
struct Signature {
  int p = 0;
  int m = 0;

  Signature() = default;
  Signature(int p_, int m_);

  int dim() const { return p + m; }
  double eps(int i) const { return i < p ? 1.0 : -1.0; }
  Vector eps_vector() const;
  Matrix gram() const;  // diag(eps)
  Signature opposite() const { return {m, p}; }

  bool operator==(const Signature&) const = default;
  std::string str() const;
};

double q(const Signature& sig, const Vector& x);
double dot(const Signature& sig, const Vector& u, const Vector& v);

/// x -> linear * x + offset.
struct AffineMap {
  Matrix linear;
  Vector offset;

  static AffineMap identity(int d);
  static AffineMap translation(const Vector& t);

  int dim() const { return static_cast<int>(linear.rows()); }
  Vector apply(const Vector& x) const { return linear * x + offset; }
  Vector operator()(const Vector& x) const { return apply(x); }
  AffineMap inverse() const;
  /// (*this) o g
  AffineMap compose(const AffineMap& g) const;
};

enum class MapKind { Isometry, Similarity, Negalitude, Other };

struct MapClassification {
  MapKind kind = MapKind::Other;
  double ratio = 1.0;  // |q_B(Lv)| = ratio^2 |q_A(v)|
};

/// Classifies the linear part of f as a map (R^d, q_A) -> (R^d, q_B).
MapClassification classify_affine_map(const AffineMap& f, const Signature& from,
                                      const Signature& to, double rel_tol = 1e-9);

/// Infinitesimal rotation in the plane (i, j): eps_i e_j (x) e_i^* - eps_j e_i (x) e_j^*.
Matrix inf_rotation_J(const Signature& sig, int i, int j);

enum class InfKind { InfIsometry, InfSimilarity, Other };

struct InfClassification {
  InfKind kind = InfKind::Other;
  double scale = 0.0;  // M = scale * I + A, A in o(q)
};

InfClassification infinitesimal_kind(const Signature& sig, const Matrix& M, double tol = 1e-9);

/// Columns form a q-orthonormal basis whose first column is proportional to `first`
/// (first must be non-null). Completion picks, at each step, the candidate with
/// largest |q| after projection.
Matrix orthonormal_frame(const Signature& sig, const Vector& first);

}  // namespace stiffgeo
