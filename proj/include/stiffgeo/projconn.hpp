#pragma once

#include <functional>
#include <span>
#include <vector>

#include "stiffgeo/pseudospace.hpp"

namespace stiffgeo {

// psi(x) = 0.5 x^T H x + b.x + c. General quadratic; the result of restricting
// or transporting a potential.
struct QuadraticPolynomial {
  Matrix hessian;
  Vector linear;
  double constant = 0.0;

  int dim() const { return static_cast<int>(linear.size()); }
  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
};

// psi = (K/2) q(x) + lin.x + c
struct QuadraticPotential {
  Signature sig;
  double K = 0.0;
  Vector lin;
  double c = 0.0;

  QuadraticPotential() = default;
  QuadraticPotential(Signature s, double K_, Vector lin_, double c_);

  int dim() const { return sig.dim(); }
  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  Matrix hessian() const { return K * sig.gram(); }
  QuadraticPolynomial polynomial() const;
};

// The 1-form a with Gamma(u, v) = a(v) u + a(u) v.
struct AssociatedForm {
  Signature sig;
  std::function<Vector(const Vector&)> eval;
  std::function<Matrix(const Vector&)> jac;  // (i, j) = d_i a_j; optional

  Vector at(const Vector& x) const { return eval(x); }
  // Analytic when available, central differences otherwise.
  Matrix derivative(const Vector& x, double rel_step = 1e-6) const;
  bool has_analytic_jacobian() const { return static_cast<bool>(jac); }

  static AssociatedForm zero(const Signature& sig);
};

class ChristoffelMap {
 public:
  explicit ChristoffelMap(Vector a) : a_(std::move(a)) {}
  Vector operator()(const Vector& u, const Vector& v) const { return a_.dot(v) * u + a_.dot(u) * v; }
  // Gamma^k_ij
  double symbol(int k, int i, int j) const {
    return (k == i ? a_(j) : 0.0) + (k == j ? a_(i) : 0.0);
  }
  const Vector& form() const { return a_; }

 private:
  Vector a_;
};

// Dense R_{ijk}^l, index order (i, j, k, l).
class CurvatureTensor {
 public:
  explicit CurvatureTensor(int d);
  int dim() const { return d_; }
  double& operator()(int i, int j, int k, int l) { return data_[idx(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const { return data_[idx(i, j, k, l)]; }
  double max_abs() const;

 private:
  std::size_t idx(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * d_ + j) * d_ + k) * d_ + l;
  }
  int d_;
  std::vector<double> data_;
};

using RicciTensor = Matrix;

ChristoffelMap christoffel(const AssociatedForm& a, const Vector& x);
CurvatureTensor curvature_from_derivatives(const Vector& a, const Matrix& D);
CurvatureTensor curvature(const AssociatedForm& a, const Vector& x);
RicciTensor ricci(const AssociatedForm& a, const Vector& x);
// Ric_jk = sum_i R_{ijk}^i
RicciTensor contract(const CurvatureTensor& R);
// M(i,j)_{l,k} = -R_{ijk}^l
Matrix infinitesimal_holonomy(const CurvatureTensor& R, int i, int j);

struct IncompressibilityReport {
  bool closed = true;
  double max_asymmetry = 0.0;
};

IncompressibilityReport incompressibility_report(const AssociatedForm& a,
                                                 std::span<const Vector> probes,
                                                 double tol = 1e-6);

// a = -d(psi)/psi, throws DomainError where psi vanishes.
AssociatedForm form_from_potential(const QuadraticPotential& P);
AssociatedForm form_from_polynomial(const Signature& sig, const QuadraticPolynomial& P);
CurvatureTensor curvature_from_potential(const QuadraticPotential& P, const Vector& x);

// Pushes a connection through y = A(x).
AssociatedForm pushforward_affine(const AssociatedForm& a, const AffineMap& A);
QuadraticPolynomial pushforward_affine(const QuadraticPolynomial& P, const AffineMap& A);

// x -> F(x) / C(x), C(x) = denom_lin.x + denom_const.
struct ProjectiveMap {
  AffineMap numerator;
  Vector denom_lin;
  double denom_const = 1.0;

  double denominator(const Vector& x) const { return denom_lin.dot(x) + denom_const; }
  Vector apply(const Vector& x) const;
  Vector inverse(const Vector& y) const;
};

// psi~(y) = psi(P^{-1} y) / C(P^{-1} y).
class ProjectivePotential {
 public:
  ProjectivePotential(QuadraticPolynomial psi, ProjectiveMap P) : psi_(std::move(psi)), P_(std::move(P)) {}
  double operator()(const Vector& y) const;
  AssociatedForm form(const Signature& sig) const;  // FD derivatives

 private:
  QuadraticPolynomial psi_;
  ProjectiveMap P_;
};

ProjectivePotential pushforward_projective(const QuadraticPotential& P, const ProjectiveMap& map);

struct AffineSubspace {
  Vector origin;
  Matrix basis;  // columns

  int dim() const { return static_cast<int>(basis.cols()); }
  Vector point(const Vector& s) const { return origin + basis * s; }
};

QuadraticPolynomial restrict(const QuadraticPolynomial& P, const AffineSubspace& F);
QuadraticPolynomial restrict(const QuadraticPotential& P, const AffineSubspace& F);
AssociatedForm restrict(const AssociatedForm& a, const AffineSubspace& F);

bool is_flat(const QuadraticPotential& P);

}  // namespace stiffgeo
