#include "stiffgeo/ode.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "stiffgeo/errors.hpp"

namespace stiffgeo::ode {

namespace odeint = boost::numeric::odeint;

std::size_t integrate(const System& sys, State& x, double t0, double t1, const Options& opt,
                      const Observer& observe) {
  if (observe) observe(x, t0);
  if (t1 == t0) return 0;
  auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_dopri5<State>());
  const double dir = t1 > t0 ? 1.0 : -1.0;
  double t = t0;
  double dt = dir * std::min(opt.initial_step, std::abs(t1 - t0));
  std::size_t accepted = 0;
  std::size_t attempts = 0;
  while (dir * (t1 - t) > 0) {
    if (dir * (t + dt - t1) > 0) dt = t1 - t;
    const double dt_before = dt;
    if (stepper.try_step(sys, x, t, dt) == odeint::success) {
      ++accepted;
      if (observe) observe(x, t);
      // try_step may enlarge dt; the last step must land exactly on t1.
      if (std::abs(t1 - t) <= 1e-15 * std::max(1.0, std::abs(t1))) t = t1;
    } else if (std::abs(dt) < 1e-14 * std::max(1.0, std::abs(t)) || dt == dt_before) {
      throw DomainError("ode: step size underflow (solution approaches a singularity)");
    }
    if (++attempts > opt.max_steps) throw DomainError("ode: step budget exhausted");
  }
  return accepted;
}

}  // namespace stiffgeo::ode
