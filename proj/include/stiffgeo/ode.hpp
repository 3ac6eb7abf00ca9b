#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace stiffgeo::ode {

using State = std::vector<double>;
using System = std::function<void(const State& x, State& dxdt, double t)>;
using Observer = std::function<void(const State& x, double t)>;

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 1e-3;
  std::size_t max_steps = 10'000'000;
};

// Adaptive Dormand-Prince 4(5) from t0 to t1 (either direction). The observer
// sees the initial state and every accepted step. Returns the number of
// accepted steps; throws DomainError on step-size underflow or when the step
// budget runs out.
std::size_t integrate(const System& sys, State& x, double t0, double t1, const Options& opt,
                      const Observer& observe = {});

}  // namespace stiffgeo::ode
