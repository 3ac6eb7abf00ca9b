#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stiffgeo/models.hpp"

namespace stiffgeo {

enum class MetricKind { Flat, Ricci, Isochrone };

struct ConformalMetric {
  CanonicalModel model;
  double alpha = 1.0;
  MetricKind kind = MetricKind::Isochrone;
};

double conformal_factor(const ConformalMetric& m, const Vector& x);
Matrix metric_at(const ConformalMetric& m, const Vector& x);

// S(h) = 8 (d-1) (d lambda - (d-2) q) psi^2 / alpha^2; defined on the closure.
double scalar_curvature_h(const CanonicalModel& M, const Vector& x, double alpha = 1.0);

// Gamma^k_ij stored as (k, i, j).
class ChristoffelSymbols {
 public:
  explicit ChristoffelSymbols(int d) : d_(d), data_(static_cast<std::size_t>(d) * d * d, 0.0) {}
  int dim() const { return d_; }
  double& operator()(int k, int i, int j) { return data_[(static_cast<std::size_t>(k) * d_ + i) * d_ + j]; }
  double operator()(int k, int i, int j) const { return data_[(static_cast<std::size_t>(k) * d_ + i) * d_ + j]; }
  // sum_ij Gamma^k_ij u^i v^j
  Vector contract(const Vector& u, const Vector& v) const;

 private:
  int d_;
  std::vector<double> data_;
};

// Levi-Civita connection of h = alpha^2 g / psi^4.
ChristoffelSymbols levi_civita_h(const CanonicalModel& M, const Vector& x, double alpha = 1.0);

struct HGeodesicTrace {
  std::vector<double> t;
  std::vector<Vector> x;
  std::vector<Vector> v;
  double max_speed_drift = 0.0;  // relative drift of h(v, v)
};

HGeodesicTrace h_geodesic(const CanonicalModel& M, const Vector& x0, const Vector& v0, double t_end,
                          double tol = 1e-10, double alpha = 1.0, int samples = 0);
// Residual of x'' + Gamma_h(x', x') along a parametrized curve, by central differences.
double h_geodesic_residual(const CanonicalModel& M, const std::function<Vector(double)>& curve, double t,
                           double alpha = 1.0, double h = 1e-4);

double volume_form_coeff(const CanonicalModel& M, double beta, const Vector& x);
double vol_g(const Vector& x);
double vol_h(const CanonicalModel& M, double alpha, const Vector& x);

struct CurvatureForms {
  double kappa_nabla = 0.0;
  double kappa_h = 0.0;
  double gaussian_rel = 0.0;
};

CurvatureForms curvature_forms(const CanonicalModel& M, const Vector& x);

// z -> z^{-3} / 3 in polar coordinates (Euclidean or hyperbolic): radius
// 1 / (3 r^3), angle -3 theta. Isometry from (U, h) to (U, g) for lambda = 0.
Vector flatten_lambda0(const Signature& sig, const Vector& x);

struct TableRow {
  std::string connection;
  std::optional<Matrix> metric;  // absent when no metric is preserved
  double volume = 0.0;           // coefficient of dx ^ dy
  double curvature = 0.0;        // coefficient of dx ^ dy
  bool geodesically_complete = false;
  bool infinitesimally_conformal = false;
  bool straight_geodesics = false;
};

// Flat, Cayley-Klein, Poincare and S(2,0;-1;-) on the unit disk.
std::vector<TableRow> comparison_table(const Vector& x);

}  // namespace stiffgeo
