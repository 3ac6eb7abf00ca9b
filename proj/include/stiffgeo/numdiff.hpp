#pragma once

#include <algorithm>
#include <cmath>

#include "stiffgeo/pseudospace.hpp"

// Central finite differences with per-coordinate step rel * max(1, |x_i|).
namespace stiffgeo::numdiff {

inline double step(double xi, double rel) { return rel * std::max(1.0, std::abs(xi)); }

// J(i, j) = d f_j / d x_i
template <class F>
Matrix jacobian(F&& f, const Vector& x, double rel = 1e-6) {
  const int d = static_cast<int>(x.size());
  Matrix J;
  for (int i = 0; i < d; ++i) {
    const double h = step(x(i), rel);
    Vector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    const Vector diff = (f(xp) - f(xm)) / (2.0 * h);
    if (i == 0) J.resize(d, diff.size());
    J.row(i) = diff.transpose();
  }
  return J;
}

template <class F>
Vector gradient(F&& f, const Vector& x, double rel = 1e-6) {
  const int d = static_cast<int>(x.size());
  Vector g(d);
  for (int i = 0; i < d; ++i) {
    const double h = step(x(i), rel);
    Vector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

template <class F>
Matrix hessian(F&& f, const Vector& x, double rel = 1e-4) {
  const int d = static_cast<int>(x.size());
  Matrix H(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double hi = step(x(i), rel), hj = step(x(j), rel);
      auto at = [&](double si, double sj) {
        Vector y = x;
        y(i) += si * hi;
        y(j) += sj * hj;
        return f(y);
      };
      H(i, j) = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * hi * hj);
    }
  }
  return H;
}

}  // namespace stiffgeo::numdiff
