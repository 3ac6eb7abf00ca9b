#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "stiffgeo/errors.hpp"
#include "stiffgeo/geodesics.hpp"
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
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<CanonicalModel> test_models() {
  std::vector<CanonicalModel> out;
  for (auto sig : {Signature(2, 0), Signature(1, 1), Signature(0, 2), Signature(3, 0), Signature(2, 1),
                   Signature(1, 2), Signature(0, 3)})
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

// Random line through a point of M, at a point where psi is not tiny.
GeodesicLine random_line(std::mt19937_64& rng, const CanonicalModel& M) {
  for (;;) {
    const Vector x = sample_point(M) + oracle::random_vector(rng, M.dim(), -0.3, 0.3);
    if (!contains(M, x) || std::abs(M.psi(x)) < 0.1) continue;
    return {M, x, oracle::random_vector(rng, M.dim())};
  }
}

// Interior times of a solution, away from its ends.
std::vector<double> sample_times(const GeodesicSolution& sol, int n) {
  const double lo = std::isfinite(sol.t_min) ? sol.t_min : -5.0;
  const double hi = std::isfinite(sol.t_max) ? sol.t_max : 5.0;
  const double a = std::max(lo, std::isfinite(sol.t_max) ? sol.t_max - 5.0 : lo);
  const double b = std::min(hi, std::isfinite(sol.t_min) ? sol.t_min + 5.0 : hi);
  std::vector<double> ts;
  for (int k = 1; k <= n; ++k) ts.push_back(a + (b - a) * (0.1 + 0.8 * k / (n + 1.0)));
  return ts;
}

}  // namespace

TEST_CASE("line reduction examples") {
  const auto c1 = reduce_line({CanonicalModel(Signature(1, 1), 1.0, Nu::Plus), Vector::Zero(2), vec({1, 1})});
  CHECK(c1.kind == GeodesicCaseKind::C1_Constant);
  CHECK_FALSE(c1.lambda_prime);

  const auto c3 = reduce_line({kDisk, Vector::Zero(2), vec({1, 0})});
  CHECK(c3.kind == GeodesicCaseKind::C3_TwoPoles);
  CHECK(c3.inside);
  CHECK(c3.lambda_prime == -1);

  const auto c2 = reduce_line({CanonicalModel(Signature(1, 1), 0.0, Nu::Plus, Branch::Right), vec({1, 0}), vec({1, 1})});
  CHECK(c2.kind == GeodesicCaseKind::C2_SinglePole);
  for (double s : {-0.3, 0.0, 2.0}) CHECK(c2.psi_s(s) == doctest::Approx(1.0 + 2.0 * s));

  const auto c4 = reduce_line({CanonicalModel(Signature(2, 0), 0.0, Nu::Plus), vec({1, 0}), vec({1, 0})});
  CHECK(c4.kind == GeodesicCaseKind::C4_DoublePole);
  CHECK(c4.lambda_prime == 0);

  const auto c5 = reduce_line({CanonicalModel(Signature(2, 0), 1.0, Nu::Plus), Vector::Zero(2), vec({1, 0})});
  CHECK(c5.kind == GeodesicCaseKind::C5_NoPole);
  CHECK(c5.lambda_prime == 1);

  const auto outside = reduce_line({CanonicalModel(Signature(2, 0), -1.0, Nu::Plus), vec({2, 0}), vec({1, 0})});
  CHECK(outside.kind == GeodesicCaseKind::C3_TwoPoles);
  CHECK_FALSE(outside.inside);

  CHECK_THROWS_AS(reduce_line({kDisk, Vector::Zero(2), Vector::Zero(2)}), std::invalid_argument);
}

TEST_CASE("normal forms hold after reparametrization") {
  std::mt19937_64 rng(83);
  for (const auto& M : test_models()) {
    for (int n = 0; n < 20; ++n) {
      const auto line = random_line(rng, M);
      const auto gc = reduce_line(line);
      for (double s : {-0.7, 0.1, 0.9}) {
        const double expect = q(M.sig, line.point(s)) + M.lambda;
        CHECK(gc.psi_s(s) == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
        const double y = gc.y_of(s);
        double psi_y = 1.0;
        switch (gc.kind) {
          case GeodesicCaseKind::C1_Constant: psi_y = 1.0; break;
          case GeodesicCaseKind::C2_SinglePole: psi_y = y; break;
          case GeodesicCaseKind::C3_TwoPoles: psi_y = y * y - 1; break;
          case GeodesicCaseKind::C4_DoublePole: psi_y = y * y; break;
          case GeodesicCaseKind::C5_NoPole: psi_y = y * y + 1; break;
        }
        CHECK(gc.psi_s(s) == doctest::Approx(gc.kappa * psi_y).epsilon(1e-9).scale(1.0));
      }
    }
  }
}

TEST_CASE("antiderivatives") {
  CHECK(F_eval(-1, 0.0) == 0.0);
  CHECK(F_eval(-1, 0.5) == doctest::Approx(2.0 - 2.0 / 3.0 + std::log(3.0)).epsilon(1e-14));
  CHECK(F_eval(-1, 0.5) == doctest::Approx(2.43195).epsilon(1e-5));
  CHECK(F_eval(1, 1e12) == doctest::Approx(pi / 2).epsilon(1e-12));
  CHECK(F_eval(0, 2.0) == doctest::Approx(-1.0 / 8.0));
  CHECK_THROWS_AS(F_eval(-1, 1.0), DomainError);
  CHECK_THROWS_AS(F_eval(0, 0.0), DomainError);
  CHECK_THROWS_AS(F_eval(2, 0.0), std::invalid_argument);

  // F' = c / psi_y^2 with c = 4, 3, 2 by quadrature.
  auto quad = [](int lp, double a, double b) {
    const double c = lp == -1 ? 4.0 : lp == 0 ? 3.0 : 2.0;
    return oracle::integrate(
        [=](double y) {
          const double p = lp == -1 ? y * y - 1 : lp == 0 ? y * y : y * y + 1;
          return c / (p * p);
        },
        a, b);
  };
  for (auto [a, b] : {std::pair{0.0, 0.5}, {-0.9, 0.8}, {1.5, 7.0}, {-30.0, -1.1}})
    CHECK(F_eval(-1, b) - F_eval(-1, a) == doctest::Approx(quad(-1, a, b)).epsilon(1e-10));
  for (auto [a, b] : {std::pair{0.5, 3.0}, {-4.0, -0.2}})
    CHECK(F_eval(0, b) - F_eval(0, a) == doctest::Approx(quad(0, a, b)).epsilon(1e-10));
  for (auto [a, b] : {std::pair{-3.0, 2.0}, {0.0, 50.0}})
    CHECK(F_eval(1, b) - F_eval(1, a) == doctest::Approx(quad(1, a, b)).epsilon(1e-10));

  // Large |y| uses a series for F_{-1}; it must join the closed form smoothly.
  for (double y : {3.99, 4.01, 10.0, 100.0})
    CHECK(F_eval(-1, y) == doctest::Approx(F_eval(-1, 4.0) + quad(-1, 4.0, y)).epsilon(1e-9));
  for (double y : {0.3, 4.0, 7.0}) CHECK(F_eval(-1, -y) == -F_eval(-1, y));
  CHECK(F_eval(-1, 1e6) == doctest::Approx(-4.0 / 3.0 * 1e-18).epsilon(1e-9));
}

TEST_CASE("inversion") {
  const YInterval mid = component_of(-1, 0.3);
  CHECK(mid.lo == -1.0);
  CHECK(mid.hi == 1.0);
  CHECK(F_invert(-1, mid, F_eval(-1, 0.3)) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(std::abs(F_invert(1, component_of(1, 0.0), 0.0)) < 1e-15);
  const YInterval neg = component_of(0, -2.0);
  CHECK(F_invert(0, neg, F_eval(0, -2.0)) == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(F_invert(0, component_of(0, 0.7), F_eval(0, 0.7)) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK_THROWS_AS(F_invert(1, component_of(1, 0.0), 2.0), DomainError);

  std::mt19937_64 rng(89);
  for (int lp : {-1, 0, 1}) {
    for (int n = 0; n < 200; ++n) {
      double y = oracle::uniform(rng, -20, 20);
      if (std::abs(std::abs(y) - 1.0) < 1e-3 || std::abs(y) < 1e-3) continue;
      const double v = F_eval(lp, y);
      const double back = F_invert(lp, component_of(lp, y), v);
      CHECK(std::abs(F_eval(lp, back) - v) <= 1e-12 * std::max(1.0, std::abs(v)) * 10);
      CHECK(back == doctest::Approx(y).epsilon(1e-8));
    }
  }
}

TEST_CASE("maximal intervals") {
  const GeodesicLine c5{CanonicalModel(Signature(2, 0), 1.0, Nu::Plus), Vector::Zero(2), vec({1, 0})};
  const auto s5 = solve_geodesic(c5);
  CHECK(s5.t_min == doctest::Approx(-pi / 4).epsilon(1e-14));
  CHECK(s5.t_max == doctest::Approx(pi / 4).epsilon(1e-14));
  CHECK(s5.upper.kind == EndKind::ReachesInfinity);
  CHECK(std::abs(s5.s_at(pi / 4 - 1e-10)) > 1e3);

  const auto s3 = solve_geodesic({kDisk, Vector::Zero(2), vec({1, 0})});
  CHECK(s3.t_min == -kInf);
  CHECK(s3.t_max == kInf);
  CHECK(s3.upper.kind == EndKind::ApproachesBoundary);
  CHECK(s3.upper.s_limit == doctest::Approx(1.0));
  // distance to the boundary ~ kappa / |t|
  const double t1 = 1e3, t2 = 2e3;
  const double d1 = 1.0 - s3.s_at(t1), d2 = 1.0 - s3.s_at(t2);
  CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(1e-2));

  const auto s1 = solve_geodesic({CanonicalModel(Signature(1, 1), 1.0, Nu::Plus), Vector::Zero(2), vec({1, 1})});
  CHECK(s1.t_min == -kInf);
  CHECK(s1.t_max == kInf);
  CHECK(s1.lower.kind == EndKind::Unbounded);
  CHECK(s1.s_at(2.0) - s1.s_at(1.0) == doctest::Approx(s1.s_at(1.0) - s1.s_at(0.0)));

  // Case 4: psi_s = (1 + s)^2 and 1 + s blows up like (t0 - t)^(-1/3)
  const auto s4 = solve_geodesic({CanonicalModel(Signature(2, 0), 0.0, Nu::Plus), vec({1, 0}), vec({1, 0})});
  REQUIRE(std::isfinite(s4.t_max));
  const double e1 = 1e-4, e2 = 8e-4;
  CHECK((1 + s4.s_at(s4.t_max - e1)) / (1 + s4.s_at(s4.t_max - e2)) == doctest::Approx(2.0).epsilon(1e-3));

  CHECK_THROWS_AS(solve_geodesic({kDisk, vec({2, 0}), vec({1, 0})}), DomainError);
  CHECK_THROWS_AS(solve_geodesic({kDisk, Vector::Zero(2), vec({1, 0})}, 0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(s5.s_at(1.0), DomainError);
}

TEST_CASE("geodesic equation, isochrony and reparametrization") {
  std::mt19937_64 rng(97);
  for (const auto& M : test_models()) {
    for (int n = 0; n < 10; ++n) {
      const auto line = random_line(rng, M);
      const double sdot0 = oracle::uniform(rng, 0.5, 2.0) * (n % 2 ? 1 : -1);
      const auto sol = solve_geodesic(line, 0.3, 0.0, sdot0);
      CHECK(sol.point(0.3).isApprox(line.x0, 1e-10));
      const double qe = q(M.sig, line.e);
      for (double t : sample_times(sol, 5)) {
        const Vector x = sol.point(t);
        CHECK(contains(M, x));
        const Vector v = sol.velocity(t);
        const double h = 1e-3 * std::max(1.0, std::abs(t));
        if (t - 2 * h > sol.t_min && t + 2 * h < sol.t_max) {
          const Vector acc = (sol.point(t + h) - 2.0 * x + sol.point(t - h)) / (h * h);
          const Vector res = acc + gamma_at(M, x)(v, v);
          CHECK(res.norm() <= 1e-6 * std::max(1.0, acc.norm() + v.squaredNorm()) * 1e2);
          const double k = 1e-5 * std::max(1.0, std::abs(t));
          const Vector vfd = (sol.point(t + k) - sol.point(t - k)) / (2 * k);
          CHECK((vfd - v).norm() <= 1e-5 * std::max(1.0, v.norm()));
        }
        if (std::abs(qe) > 1e-3) {
          const double speed = std::abs(q(M.sig, v)) / std::pow(M.psi(x), 4);
          const double expect = sol.alpha * sol.alpha * std::abs(qe);
          CHECK(speed == doctest::Approx(expect).epsilon(1e-8));
        }
      }
      // Restart from a later point with the same velocity: same curve shifted in time.
      const double tau = sample_times(sol, 3)[1];
      const double s_tau = sol.s_at(tau);
      const double sdot_tau = sol.velocity(tau).dot(line.e) / line.e.squaredNorm();
      const auto other = solve_geodesic(line, 0.0, s_tau, sdot_tau);
      if (std::isfinite(sol.t_min)) CHECK(other.t_min == doctest::Approx(sol.t_min - tau).epsilon(1e-9).scale(1.0));
      else CHECK(other.t_min == sol.t_min);
      for (double t : sample_times(sol, 4))
        CHECK((other.point(t - tau) - sol.point(t)).norm() <= 1e-9 * std::max(1.0, sol.point(t).norm()));
    }
  }
}

TEST_CASE("completeness") {
  CHECK(completeness_verdict(CanonicalModel(Signature(3, 0), -1.0, Nu::Minus)).complete);
  CHECK(completeness_verdict(CanonicalModel(Signature(0, 2), 1.0, Nu::Plus)).complete);
  const auto cone = completeness_verdict(CanonicalModel(Signature(2, 0), 0.0, Nu::Plus));
  CHECK_FALSE(cone.complete);
  REQUIRE(cone.witness);
  CHECK(solve_geodesic(*cone.witness).bounded_interval());
  CHECK_FALSE(completeness_verdict(CanonicalModel(Signature(2, 0), 1.0, Nu::Plus)).complete);

  std::mt19937_64 rng(101);
  for (const auto& M : test_models()) {
    const auto v = completeness_verdict(M);
    bool any_bounded = false;
    for (int n = 0; n < 100; ++n) any_bounded |= solve_geodesic(random_line(rng, M)).bounded_interval();
    INFO(to_string(M));
    CHECK(v.complete == !any_bounded);
    if (!v.complete) {
      REQUIRE(v.witness);
      CHECK(solve_geodesic(*v.witness).bounded_interval());
    }
  }
}

TEST_CASE("travel times") {
  const Vector o = Vector::Zero(2), a = vec({0.9, 0}), b = vec({0, 0.9});
  CHECK(travel_time(kDisk, a, a).time == 0.0);
  const auto toa = travel_time(kDisk, o, a);
  CHECK(toa.time == doctest::Approx(F_eval(-1, 0.9) / 4).epsilon(1e-12));
  CHECK(toa.time == doctest::Approx(3.1045).epsilon(1e-4));
  CHECK(toa.regime == ChordRegime::Spacelike);
  CHECK(travel_time(kDisk, a, b).time == doctest::Approx(8.18).epsilon(1e-3));
  CHECK(travel_time(kDisk, a, b, 2.0).time == doctest::Approx(2 * travel_time(kDisk, a, b).time));

  const CanonicalModel mink(Signature(1, 1), 1.0, Nu::Plus);
  const auto null = travel_time(mink, vec({0, 0}), vec({0.5, 0.5}));
  CHECK(null.regime == ChordRegime::Null);
  CHECK(null.time == 0.0);
  CHECK_FALSE(null.warning.empty());
  CHECK(travel_time(mink, vec({0, 0}), vec({0.1, 0.5})).regime == ChordRegime::Timelike);

  const CanonicalModel annulus(Signature(2, 0), -1.0, Nu::Plus);
  CHECK_THROWS_AS(travel_time(annulus, vec({-2, 0}), vec({2, 0})), DomainError);
  CHECK_THROWS_AS(travel_time(kDisk, o, vec({1.2, 0})), DomainError);
}

TEST_CASE("travel time against quadrature, additivity") {
  std::mt19937_64 rng(103);
  for (const auto& M : test_models()) {
    int done = 0;
    for (int n = 0; n < 200 && done < 10; ++n) {
      const auto line = random_line(rng, M);
      const Vector a = line.x0, c = line.point(oracle::uniform(rng, 0.2, 0.6));
      bool inside = true;
      for (int k = 0; k <= 64 && inside; ++k) {
        const Vector x = a + (c - a) * (k / 64.0);
        inside = contains(M, x) && std::abs(M.psi(x)) > 0.05;
      }
      if (!inside) continue;
      ++done;
      const Vector b = 0.5 * (a + c);
      const auto T = travel_time(M, a, c);
      const double qd = std::abs(q(M.sig, c - a));
      const double expect = oracle::integrate(
          [&](double t) {
            const double p = M.psi(a + t * (c - a));
            return std::sqrt(qd) / (p * p);
          },
          0.0, 1.0);
      CHECK(T.time == doctest::Approx(expect).epsilon(1e-9));
      CHECK(T.time == doctest::Approx(travel_time(M, a, b).time + travel_time(M, b, c).time).epsilon(1e-10));
    }
    CHECK(done == 10);
  }
}

TEST_CASE("triangle experiment") {
  const auto r = triangle_experiment(0.9);
  CHECK(r.T_ab == doctest::Approx(8.18).epsilon(1e-3));
  CHECK(r.T_sum == doctest::Approx(6.21).epsilon(1e-3));
  CHECK(r.violates);
  const auto small = triangle_experiment(1e-3);
  CHECK(small.T_ab < 1e-2);
  CHECK(small.T_sum < 1e-2);
  CHECK_FALSE(small.violates);
  const double s0 = find_s0();
  CHECK(s0 == doctest::Approx(0.687).epsilon(0.001 / 0.687));
  CHECK_FALSE(triangle_experiment(s0 - 1e-3).violates);
  CHECK(triangle_experiment(s0 + 1e-3).violates);
  CHECK_THROWS_AS(triangle_experiment(1.0), DomainError);
}
