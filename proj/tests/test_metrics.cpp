#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "stiffgeo/errors.hpp"
#include "stiffgeo/geodesics.hpp"
#include "stiffgeo/metrics.hpp"
#include "stiffgeo/numdiff.hpp"
#include "stiffgeo/transport.hpp"

using namespace stiffgeo;
using std::numbers::pi;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

const CanonicalModel kDisk(Signature(2, 0), -1.0, Nu::Minus);

std::vector<CanonicalModel> test_models() {
  std::vector<CanonicalModel> out;
  for (auto sig : {Signature(2, 0), Signature(1, 1), Signature(0, 2), Signature(3, 0), Signature(2, 1)})
    for (double lambda : {-1.0, 0.0, 1.0})
      for (Nu nu : {Nu::Plus, Nu::Minus}) {
        try {
          CanonicalModel whole(sig, lambda, nu);
          out.push_back(whole.full_set_disconnected() ? CanonicalModel(sig, lambda, nu, Branch::Right) : whole);
        } catch (const DomainError&) {
        }
      }
  return out;
}

Vector random_inside(std::mt19937_64& rng, const CanonicalModel& M, double min_psi = 0.2) {
  for (;;) {
    const Vector x = sample_point(M) + oracle::random_vector(rng, M.dim(), -0.4, 0.4);
    if (contains(M, x) && std::abs(M.psi(x)) > min_psi) return x;
  }
}

}  // namespace

TEST_CASE("metric coefficients") {
  CHECK(metric_at({kDisk, 1.0, MetricKind::Flat}, vec({0.3, 0.1})).isApprox(Matrix::Identity(2, 2)));
  CHECK(metric_at({kDisk, 1.0, MetricKind::Isochrone}, Vector::Zero(2)).isApprox(Matrix::Identity(2, 2)));
  const CanonicalModel ball(Signature(3, 0), 1.0, Nu::Plus);
  CHECK(metric_at({ball, 1.0, MetricKind::Ricci}, Vector::Zero(3)).isApprox(4.0 * Matrix::Identity(3, 3)));
  const CanonicalModel mink(Signature(1, 1), 1.0, Nu::Plus);
  Matrix g(2, 2);
  g << 1, 0, 0, -1;
  CHECK(metric_at({mink, 1.0, MetricKind::Flat}, vec({0.2, 0.1})).isApprox(g));
  CHECK(conformal_factor({kDisk, 3.0, MetricKind::Isochrone}, vec({0.5, 0})) ==
        doctest::Approx(9.0 / std::pow(0.75, 4)));
  CHECK_THROWS_AS(metric_at({kDisk, 1.0, MetricKind::Isochrone}, vec({2, 0})), DomainError);

  // The Ricci metric is the Ricci tensor of the connection.
  std::mt19937_64 rng(107);
  for (const auto& M : test_models()) {
    const Vector x = random_inside(rng, M);
    const Matrix Ric = ricci(form_from_potential(M.potential()), x);
    CHECK((metric_at({M, 1.0, MetricKind::Ricci}, x) - Ric).norm() < 1e-9 * std::max(1.0, Ric.norm()));
  }
}

TEST_CASE("scalar curvature of h") {
  const CanonicalModel cone(Signature(2, 0), 0.0, Nu::Plus);
  CHECK(scalar_curvature_h(cone, vec({0.3, 0.7})) == 0.0);
  CHECK(scalar_curvature_h(kDisk, Vector::Zero(2)) == -16.0);
  CHECK(scalar_curvature_h(kDisk, vec({0.6, 0.8})) == doctest::Approx(0.0).scale(1.0));
  const CanonicalModel hyp(Signature(2, 1), 1.0, Nu::Minus);
  CHECK(scalar_curvature_h(hyp, vec({0.0, 0.0, 1.0})) == 0.0);

  std::mt19937_64 rng(109);
  for (const auto& M : test_models()) {
    for (int n = 0; n < 4; ++n) {
      const Vector x = random_inside(rng, M, 0.4);
      for (double alpha : {1.0, 0.5}) {
        const ConformalMetric h{M, alpha, MetricKind::Isochrone};
        const double fd = oracle::scalar_curvature([&](const Vector& y) { return metric_at(h, y); }, x);
        const double exact = scalar_curvature_h(M, x, alpha);
        CHECK(fd == doctest::Approx(exact).epsilon(1e-4).scale(0.1));
      }
    }
  }
}

TEST_CASE("Levi-Civita symbols of h") {
  const auto G0 = levi_civita_h(kDisk, Vector::Zero(2));
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(G0(k, i, j) == 0.0);

  const auto G = levi_civita_h(kDisk, vec({0.5, 0}));
  CHECK(G(0, 0, 1) == 0.0);
  CHECK(G(1, 0, 1) == doctest::Approx(8.0 / 3.0));  // d_1 f
  CHECK(G(0, 0, 0) == doctest::Approx(8.0 / 3.0));

  std::mt19937_64 rng(113);
  for (const auto& M : test_models()) {
    const Vector x = random_inside(rng, M);
    const ConformalMetric h{M, 1.0, MetricKind::Isochrone};
    const auto fd = oracle::metric_symbols([&](const Vector& y) { return metric_at(h, y); })(x);
    const auto LC = levi_civita_h(M, x);
    const int d = M.dim();
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          CHECK(LC(k, i, j) == doctest::Approx(fd[oracle::at(d, k, i, j)]).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("h-geodesics") {
  const CanonicalModel plane(Signature(2, 0), 1.0, Nu::Plus);
  const double r = 1.0 / std::sqrt(3.0);
  auto circle = [r](double t) { return vec({r * std::cos(t), r * std::sin(t)}); };
  for (double t : {0.0, 1.0, 2.5}) CHECK(h_geodesic_residual(plane, circle, t) < 1e-6);
  auto wrong = [](double t) { return vec({0.7 * std::cos(t), 0.7 * std::sin(t)}); };
  CHECK(h_geodesic_residual(plane, wrong, 0.3) > 1e-2);

  const auto tr = h_geodesic(plane, vec({r, 0}), vec({0, r}), 2 * pi, 1e-11);
  CHECK((tr.x.back() - vec({r, 0})).norm() < 1e-7);
  CHECK(tr.max_speed_drift < 1e-8);

  // Radial lines through the origin stay radial.
  for (const auto& M : {kDisk, plane, CanonicalModel(Signature(3, 0), 1.0, Nu::Plus)}) {
    Vector v0 = Vector::Zero(M.dim());
    v0(0) = 0.3;
    v0(M.dim() - 1) = 0.2;
    const auto ray = h_geodesic(M, Vector::Zero(M.dim()), v0, 1.0, 1e-10, 1.0, 20);
    for (const auto& x : ray.x) CHECK((x - x.dot(v0) / v0.squaredNorm() * v0).norm() < 1e-10);
    CHECK(ray.max_speed_drift < 1e-8);
  }

  std::mt19937_64 rng(127);
  for (const auto& M : test_models()) {
    const Vector x = random_inside(rng, M, 0.5);
    const Vector v = 0.05 * oracle::random_vector(rng, M.dim());
    try {
      const auto t = h_geodesic(M, x, v, 0.5, 1e-11, 1.0, 10);
      CHECK(t.max_speed_drift < 1e-8);
    } catch (const DomainError&) {
    }
  }
  CHECK_THROWS_AS(h_geodesic(kDisk, vec({1.5, 0}), vec({0, 1}), 1.0), DomainError);
}

TEST_CASE("isochrony picks out the exponent 4") {
  std::mt19937_64 rng(131);
  for (const auto& M : test_models()) {
    int tested = 0;
    for (int n = 0; n < 50 && tested < 3; ++n) {
      const Vector x = random_inside(rng, M, 0.3);
      const GeodesicLine line{M, x, oracle::random_vector(rng, M.dim())};
      const double qe = q(M.sig, line.e);
      if (std::abs(qe) < 0.05) continue;
      const auto sol = solve_geodesic(line);
      // Times over which psi changes appreciably.
      double lo = std::max(sol.t_min, -1.0), hi = std::min(sol.t_max, 1.0);
      if (std::isfinite(sol.t_min)) lo = std::max(lo, sol.t_min + 0.2 * (std::min(sol.t_max, 1.0) - sol.t_min));
      if (std::isfinite(sol.t_max)) hi = std::min(hi, sol.t_max - 0.2 * (sol.t_max - lo));
      double s4_min = 1e300, s4_max = 0, s39_min = 1e300, s39_max = 0, psi_min = 1e300, psi_max = 0;
      for (int k = 0; k <= 20; ++k) {
        const double t = lo + (hi - lo) * k / 20.0;
        const Vector p = sol.point(t), v = sol.velocity(t);
        const double psi = std::abs(M.psi(p));
        const double s4 = std::abs(q(M.sig, v)) / std::pow(psi, 4);
        const double s39 = std::abs(q(M.sig, v)) / std::pow(psi, 3.9);
        s4_min = std::min(s4_min, s4), s4_max = std::max(s4_max, s4);
        s39_min = std::min(s39_min, s39), s39_max = std::max(s39_max, s39);
        psi_min = std::min(psi_min, psi), psi_max = std::max(psi_max, psi);
      }
      if (psi_max / psi_min < 1.5) continue;
      ++tested;
      CHECK(s4_max / s4_min - 1.0 < 1e-8);
      CHECK(s39_max / s39_min - 1.0 > 1e-2);
    }
  }
}

TEST_CASE("volume forms") {
  CHECK(volume_form_coeff(kDisk, 1.0, Vector::Zero(2)) == -1.0);
  CHECK(vol_g(vec({0.1, 0.2})) == 1.0);
  CHECK(vol_h(kDisk, 2.0, vec({0.5, 0})) == doctest::Approx(4.0 / std::pow(0.75, 4)));

  // Total volume of S(2,0;1;+) is pi/2.
  const CanonicalModel plane(Signature(2, 0), 1.0, Nu::Plus);
  const double total = 2 * pi * oracle::integrate(
                                    [&](double r) { return r * volume_form_coeff(plane, 1.0, vec({r, 0})); }, 0.0,
                                    1e4);
  CHECK(total == doctest::Approx(pi / 2).epsilon(1e-8));

  // Preserved by transport.
  std::mt19937_64 rng(137);
  for (const auto& M : test_models()) {
    const Vector a = random_inside(rng, M, 0.3);
    const Vector b = a + oracle::random_vector(rng, M.dim(), -0.1, 0.1);
    if (!contains(M, b) || std::abs(M.psi(b)) < 0.2) continue;
    const auto T = transport_ode(M, PathSpec::line({a, b}));
    CHECK(T.matrix.determinant() * volume_form_coeff(M, 1.0, b) ==
          doctest::Approx(volume_form_coeff(M, 1.0, a)).epsilon(1e-8));
  }
}

TEST_CASE("curvature forms") {
  const auto c = curvature_forms(kDisk, Vector::Zero(2));
  CHECK(c.kappa_nabla == -2.0);
  CHECK(c.kappa_h == -8.0);
  CHECK(c.gaussian_rel == -2.0);
  CHECK(curvature_forms(CanonicalModel(Signature(2, 0), 0.0, Nu::Plus), vec({0.5, 0.2})).kappa_h == 0.0);
  CHECK_THROWS_AS(curvature_forms(CanonicalModel(Signature(3, 0), 1.0, Nu::Plus), Vector::Zero(3)),
                  std::invalid_argument);

  std::mt19937_64 rng(139);
  for (const auto& M : test_models()) {
    if (M.dim() != 2) continue;
    const Vector x = random_inside(rng, M);
    const auto f = curvature_forms(M, x);
    CHECK(f.kappa_h == doctest::Approx(scalar_curvature_h(M, x) / 2 * vol_h(M, 1.0, x)).epsilon(1e-8));
  }

  // Holonomy angle over enclosed area tends to the curvature form coefficient.
  for (double r : {0.02, 0.01}) {
    const auto H = holonomy_loop(kDisk, PathSpec::circle(Vector::Zero(2), vec({1, 0}), vec({0, 1}), r));
    const double angle = std::atan2(H.matrix(1, 0), H.matrix(0, 0));
    CHECK(angle / (pi * r * r) == doctest::Approx(c.kappa_nabla).epsilon(2 * r * r * 10));
  }
}

TEST_CASE("flattening map for lambda = 0") {
  CHECK(flatten_lambda0(Signature(2, 0), vec({1, 0})).isApprox(vec({1.0 / 3.0, 0})));
  CHECK_THROWS_AS(flatten_lambda0(Signature(1, 1), vec({1, 1})), DomainError);

  std::mt19937_64 rng(149);
  for (auto sig : {Signature(2, 0), Signature(0, 2), Signature(1, 1)}) {
    const Matrix G = sig.gram();
    for (int n = 0; n < 20; ++n) {
      const Vector x = oracle::random_vector(rng, 2, -1.5, 1.5);
      const double qx = q(sig, x);
      if (std::abs(qx) < 0.3) continue;
      const Matrix J = numdiff::jacobian([&](const Vector& y) { return flatten_lambda0(sig, y); }, x);
      const Matrix pullback = J * G * J.transpose();
      const Matrix h = G / std::pow(qx, 4);
      CHECK((pullback - h).norm() < 1e-6 * h.norm());
      if (sig == Signature(1, 1)) {
        const Vector y = flatten_lambda0(sig, x);
        CHECK(q(sig, y) * qx > 0);
        if (qx > 0) CHECK(y(0) * x(0) > 0);
        else CHECK(y(1) * x(1) > 0);
      }
    }
  }

  // h-geodesics of the lambda = 0 plane model become straight lines.
  const CanonicalModel cone(Signature(2, 0), 0.0, Nu::Plus);
  const auto tr = h_geodesic(cone, vec({1, 0.2}), vec({-0.3, 0.4}), 1.0, 1e-11, 1.0, 20);
  const Vector p0 = flatten_lambda0(Signature(2, 0), tr.x.front());
  const Vector p1 = flatten_lambda0(Signature(2, 0), tr.x.back());
  const Vector dir = (p1 - p0).normalized();
  for (const auto& x : tr.x) {
    const Vector p = flatten_lambda0(Signature(2, 0), x) - p0;
    CHECK(std::abs(dir(0) * p(1) - dir(1) * p(0)) < 1e-6);
  }
}

TEST_CASE("comparison table") {
  const auto rows = comparison_table(Vector::Zero(2));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].connection == "Flat");
  CHECK(rows[0].curvature == 0.0);
  CHECK_FALSE(rows[0].geodesically_complete);
  CHECK(rows[1].connection == "Cayley-Klein");
  CHECK(rows[1].curvature == -1.0);
  CHECK_FALSE(rows[1].infinitesimally_conformal);
  CHECK(rows[2].volume == 4.0);
  CHECK_FALSE(rows[2].straight_geodesics);
  CHECK(rows[3].volume == 1.0);
  CHECK(rows[3].curvature == -2.0);
  CHECK_FALSE(rows[3].metric);
  CHECK(rows[3].geodesically_complete);
  CHECK(rows[3].infinitesimally_conformal);
  CHECK(rows[3].straight_geodesics);

  // Cross-check the hyperbolic rows against their metrics: Gaussian curvature -1,
  // volume sqrt(det g), curvature form K vol.
  const Vector x = vec({0.3, -0.4});
  const auto at = comparison_table(x);
  for (int row : {1, 2}) {
    auto g = [row](const Vector& y) { return *comparison_table(y)[row].metric; };
    CHECK(oracle::scalar_curvature(g, x) == doctest::Approx(-2.0).epsilon(1e-4));
    CHECK(at[row].volume == doctest::Approx(std::sqrt(g(x).determinant())).epsilon(1e-12));
    CHECK(at[row].curvature == doctest::Approx(-at[row].volume).epsilon(1e-12));
  }
  const double u = 1 - x.squaredNorm();
  CHECK(at[3].volume == doctest::Approx(std::abs(volume_form_coeff(kDisk, 1.0, x))));
  CHECK(at[3].volume == doctest::Approx(1.0 / (u * u * u)));
  CHECK(at[3].curvature == doctest::Approx(curvature_forms(kDisk, x).kappa_nabla));
  CHECK_THROWS_AS(comparison_table(vec({1, 0})), DomainError);
}
