#pragma once

#include <optional>
#include <string>

#include "stiffgeo/projconn.hpp"
#include "stiffgeo/pseudospace.hpp"

namespace stiffgeo {

enum class Nu { Minus = -1, Plus = 1 };
enum class Branch { Whole, Right, Left };
enum class ClassifyMode { Similarity, Isometry };

inline double sign_of(Nu nu) { return nu == Nu::Plus ? 1.0 : -1.0; }

// The connection with potential psi = q + lambda restricted to a connected
// component of {nu * psi > 0}. Right/Left select x_1 > 0 / x_1 < 0 when nu = +
// and x_d > 0 / x_d < 0 when nu = -.
struct CanonicalModel {
  Signature sig;
  double lambda = 0.0;
  Nu nu = Nu::Plus;
  Branch branch = Branch::Whole;

  CanonicalModel() = default;
  CanonicalModel(Signature s, double lambda_, Nu nu_, Branch b = Branch::Whole);

  int dim() const { return sig.dim(); }
  double psi(const Vector& x) const { return q(sig, x) + lambda; }
  Vector grad_psi(const Vector& x) const { return 2.0 * sig.eps_vector().cwiseProduct(x); }
  QuadraticPotential potential() const;
  // Whether {nu * psi > 0} falls apart into two components.
  bool full_set_disconnected() const;

  bool operator==(const CanonicalModel&) const = default;
};

std::string to_string(const CanonicalModel& M);
// "S(p,m;lambda;nu[;L|R])"
CanonicalModel parse_model(const std::string& text);

bool contains(const CanonicalModel& M, const Vector& x);
// Throws DomainError unless contains(M, x).
void require_inside(const CanonicalModel& M, const Vector& x, const char* what);
// A point that lies in the model.
Vector sample_point(const CanonicalModel& M);

struct DomainFacts {
  bool empty = false;
  bool connected = true;
  bool simply_connected = true;
  bool bounded = false;
  bool contains_origin = false;
};

DomainFacts domain_facts(const CanonicalModel& M);

bool stiffness_check(const Signature& sig, const QuadraticPolynomial& P);
bool stiffness_check(const QuadraticPotential& P);

struct FlatteningData {
  // x -> numerator(x) / (denom_lin.x + denom_const) trivializes the connection.
  ProjectiveMap map;
};

struct ModelReduction {
  CanonicalModel model;
  AffineMap reducing_map;  // x -> z, with psi(x) = (K r^2 / 2) (q(z) + lambda)
  double scale = 1.0;      // r
  double factor = 1.0;     // K r^2 / 2
  bool gauge_free = false; // lambda = 0: r is arbitrary, fixed to 1
};

struct ClassificationResult {
  bool flat = false;
  std::optional<FlatteningData> flattening;
  std::optional<ModelReduction> reduction;
};

ClassificationResult classify(const QuadraticPotential& P, const Vector& basepoint,
                              ClassifyMode mode = ClassifyMode::Similarity);

CanonicalModel rescale(const CanonicalModel& M, double r);

struct IsomorphismCheck {
  bool maps_models = false;  // f carries Ma onto Mb
  bool negalitude = false;   // ...but reverses q: not a pseudo-Euclidean isomorphism
  double ratio = 0.0;
  bool is_isomorphism() const { return maps_models && !negalitude; }
};

IsomorphismCheck is_isomorphism(const CanonicalModel& Ma, const CanonicalModel& Mb, const AffineMap& f);

enum class AutomorphismGroup {
  FullSimilarities,
  OrthochronousSimilarities,
  AntiorthochronousSimilarities,
  FullIsometries,
  Oplus,
  Ominus
};

AutomorphismGroup automorphism_descriptor(const CanonicalModel& M);
std::string to_string(AutomorphismGroup g);

double relative_scalar_curvature(const CanonicalModel& M, const Vector& x);

}  // namespace stiffgeo
