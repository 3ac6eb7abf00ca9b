#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "stiffgeo/projconn.hpp"

namespace stiffgeo {

using Complex = std::complex<double>;

// num(z) / den(z), ascending coefficients. The tagged infinite function
// (f = infinity everywhere) is represented with an empty denominator.
class RationalComplexFn {
 public:
  RationalComplexFn(std::vector<Complex> num, std::vector<Complex> den);
  static RationalComplexFn infinity();
  static RationalComplexFn constant(Complex c);

  bool is_infinity() const { return infinite_; }
  const std::vector<Complex>& num() const { return num_; }
  const std::vector<Complex>& den() const { return den_; }

  // nullopt at poles (and everywhere for the infinite function)
  std::optional<Complex> eval(Complex z) const;
  Complex num_at(Complex z) const;
  Complex den_at(Complex z) const;
  Complex num_derivative_at(Complex z) const;
  Complex den_derivative_at(Complex z) const;
  // f == -1/z as rational functions
  bool is_minus_inverse(double tol = 1e-12) const;

 private:
  RationalComplexFn() = default;
  void normalize();

  std::vector<Complex> num_, den_;
  bool infinite_ = false;
};

// Smooth function of one real variable with values in R u {infinity}.
struct HatRealFn {
  std::function<double(double)> f;
  std::function<double(double)> df;  // optional
  bool infinite = false;

  static HatRealFn infinity() { return {{}, {}, true}; }
  static HatRealFn constant(double c) {
    return {[c](double) { return c; }, [](double) { return 0.0; }, false};
  }
};

struct HatRealPair {
  HatRealFn f1;  // of y2
  HatRealFn f2;  // of y1
};

// A = -2 / (conj(z) + f(z)) = -2 den / (conj(z) den + num); a = (Re A, Im A).
AssociatedForm from_meromorphic(const RationalComplexFn& f);
// Same construction for an arbitrary holomorphic callable; no pole handling.
AssociatedForm from_holomorphic(std::function<Complex(Complex)> f);

// b1 = 1 / (f1(y2) - y1), b2 = 1 / (f2(y1) - y2), in E' coordinates where q = y1 y2.
AssociatedForm from_pair_11(const HatRealPair& p);

Vector coords_E11_to_Eprime(const Vector& x);
Vector coords_Eprime_to_E11(const Vector& y);
// The same connection written in the (1,1) coordinates x.
AssociatedForm eprime_form_to_e11(const AssociatedForm& b);

enum class WeakStiffCoords { Euclidean20, Eprime11 };

struct WeakStiffReport {
  double max_residual = 0.0;
  double max_trace = 0.0;  // |R_121^1 + R_122^2|
  bool weakly_stiff = false;
  bool isometric = false;
};

WeakStiffReport verify_weakstiff(const AssociatedForm& a, std::span<const Vector> probes, WeakStiffCoords coords,
                                 double tol = 1e-6, double fd_step = 1e-5);

struct ConjDichotomy {
  bool canonical_disk_model = false;
  std::optional<Complex> boundary_point;  // where conj(z) + f(z) != 0
  double boundary_value = 0.0;            // |conj(z) + f(z)| there
};

ConjDichotomy conj_dichotomy(const RationalComplexFn& f);

}  // namespace stiffgeo
