#include "stiffgeo/models.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "stiffgeo/errors.hpp"

namespace stiffgeo {

CanonicalModel::CanonicalModel(Signature s, double lambda_, Nu nu_, Branch b)
    : sig(s), lambda(lambda_), nu(nu_), branch(b) {
  if (sig.dim() < 2) throw DomainError("canonical model: dimension must be at least 2");
  if (!std::isfinite(lambda)) throw DomainError("canonical model: lambda must be finite");
  if (nu == Nu::Minus && sig.m == 0 && lambda >= 0) throw DomainError("canonical model: empty domain (nu = -, q positive definite, lambda >= 0)");
  if (nu == Nu::Plus && sig.p == 0 && lambda <= 0) throw DomainError("canonical model: empty domain (nu = +, q negative definite, lambda <= 0)");
  if (branch != Branch::Whole && !full_set_disconnected())
    throw DomainError("canonical model: branch given but the domain is connected");
}

bool CanonicalModel::full_set_disconnected() const {
  return (nu == Nu::Plus && sig.p == 1 && lambda <= 0) || (nu == Nu::Minus && sig.m == 1 && lambda >= 0);
}

QuadraticPotential CanonicalModel::potential() const {
  return QuadraticPotential(sig, 2.0, Vector::Zero(dim()), lambda);
}

std::string to_string(const CanonicalModel& M) {
  char lam[64];
  std::snprintf(lam, sizeof lam, "%.12g", M.lambda == 0.0 ? 0.0 : M.lambda);
  std::string s = "S(" + M.sig.str() + ";" + lam + ";" + (M.nu == Nu::Plus ? "+" : "-");
  if (M.branch == Branch::Right) s += ";R";
  if (M.branch == Branch::Left) s += ";L";
  return s + ")";
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw ParseError("cannot parse " + what + ": '" + s + "'");
  }
  if (pos != t.size()) throw ParseError("cannot parse " + what + ": '" + s + "'");
  return v;
}

int parse_count(const std::string& s, const std::string& what) {
  const double v = parse_real(s, what);
  if (v != std::floor(v) || v < 0 || v > 64) throw ParseError("bad " + what + ": '" + s + "'");
  return static_cast<int>(v);
}

}  // namespace

CanonicalModel parse_model(const std::string& text) {
  const std::string t = trim(text);
  if (t.size() < 4 || t.rfind("S(", 0) != 0 || t.back() != ')')
    throw ParseError("model must look like S(p,m;lambda;nu[;L|R]): '" + text + "'");
  const auto parts = split(t.substr(2, t.size() - 3), ';');
  if (parts.size() < 3 || parts.size() > 4) throw ParseError("model needs 3 or 4 ';'-separated fields: '" + text + "'");
  const auto pm = split(parts[0], ',');
  if (pm.size() != 2) throw ParseError("model signature must be 'p,m': '" + parts[0] + "'");
  const int p = parse_count(pm[0], "signature p");
  const int m = parse_count(pm[1], "signature m");
  if (p + m < 1) throw ParseError("model signature is empty");
  const double lambda = parse_real(parts[1], "lambda");
  const std::string nu_s = trim(parts[2]);
  Nu nu;
  if (nu_s == "+") nu = Nu::Plus;
  else if (nu_s == "-") nu = Nu::Minus;
  else throw ParseError("model nu must be '+' or '-': '" + parts[2] + "'");
  Branch b = Branch::Whole;
  if (parts.size() == 4) {
    const std::string bs = trim(parts[3]);
    if (bs == "R") b = Branch::Right;
    else if (bs == "L") b = Branch::Left;
    else throw ParseError("model branch must be 'L' or 'R': '" + parts[3] + "'");
  }
  return CanonicalModel(Signature(p, m), lambda, nu, b);
}

bool contains(const CanonicalModel& M, const Vector& x) {
  if (x.size() != M.dim()) throw std::invalid_argument("contains: dimension mismatch");
  if (!(sign_of(M.nu) * M.psi(x) > 0)) return false;
  if (M.branch == Branch::Whole) return true;
  const double coord = M.nu == Nu::Plus ? x(0) : x(M.dim() - 1);
  return M.branch == Branch::Right ? coord > 0 : coord < 0;
}

void require_inside(const CanonicalModel& M, const Vector& x, const char* what) {
  if (!contains(M, x)) throw DomainError(std::string(what) + ": point outside " + to_string(M));
}

Vector sample_point(const CanonicalModel& M) {
  const int d = M.dim();
  Vector x = Vector::Zero(d);
  if (M.nu == Nu::Plus) {
    if (M.lambda <= 0) x(0) = std::sqrt(std::abs(M.lambda) + 1.0);
  } else {
    if (M.lambda >= 0) x(d - 1) = std::sqrt(M.lambda + 1.0);
  }
  if (M.branch == Branch::Left) x = -x;
  return x;
}

DomainFacts domain_facts(const CanonicalModel& M) {
  DomainFacts f;
  const bool plus = M.nu == Nu::Plus;
  const int d = M.dim();
  const bool branch = M.branch != Branch::Whole;
  f.connected = branch || !M.full_set_disconnected();
  if (!f.connected) {
    f.simply_connected = false;
  } else if (branch) {
    f.simply_connected = true;
  } else if (plus) {
    f.simply_connected = !(M.sig.p == 2 && M.lambda <= 0);
  } else {
    f.simply_connected = !(M.sig.m == 2 && M.lambda >= 0);
  }
  f.bounded = plus ? M.sig.p == 0 : M.sig.p == d;
  f.contains_origin = contains(M, Vector::Zero(d));
  return f;
}

bool stiffness_check(const Signature& sig, const QuadraticPolynomial& P) {
  const int d = sig.dim();
  if (P.dim() != d || P.hessian.rows() != d || P.hessian.cols() != d)
    throw std::invalid_argument("stiffness_check: dimension mismatch");
  const double K = sig.eps(0) * P.hessian(0, 0);
  const double tol = 1e-12 * std::max(1.0, P.hessian.norm());
  return (P.hessian - K * sig.gram()).cwiseAbs().maxCoeff() <= tol;
}

bool stiffness_check(const QuadraticPotential& P) { return stiffness_check(P.sig, P.polynomial()); }

ClassificationResult classify(const QuadraticPotential& P, const Vector& basepoint, ClassifyMode mode) {
  const Signature& sig = P.sig;
  const int d = sig.dim();
  if (basepoint.size() != d) throw std::invalid_argument("classify: basepoint dimension mismatch");
  if (d < 2) throw DomainError("classify: dimension must be at least 2");
  const double psi_b = P.value(basepoint);
  if (psi_b == 0.0) throw DomainError("classify: potential vanishes at basepoint");

  ClassificationResult res;
  if (is_flat(P)) {
    res.flat = true;
    ProjectiveMap map{AffineMap::translation(-basepoint), P.lin, P.c};
    res.flattening = FlatteningData{map};
    return res;
  }

  const double K = P.K;
  const Vector v = sig.eps_vector().cwiseProduct(P.lin);
  const Vector center = -v / K;
  const double qv_term = q(sig, v) / (2.0 * K);
  const double kprime = P.c - qv_term;
  const double mu = 2.0 * kprime / K;

  ModelReduction red;
  double lambda, r;
  const bool mu_zero = std::abs(kprime) <= 1e-12 * std::max({1.0, std::abs(P.c), std::abs(qv_term)});
  if (mode == ClassifyMode::Similarity) {
    if (mu_zero) {
      lambda = 0.0;
      r = 1.0;
      red.gauge_free = true;
    } else {
      r = std::sqrt(std::abs(mu));
      lambda = mu > 0 ? 1.0 : -1.0;
    }
  } else {
    r = 1.0;
    lambda = mu_zero ? 0.0 : mu;
    red.gauge_free = lambda == 0.0;
  }

  Vector w = (basepoint - center) / r;
  const double val = q(sig, w) + lambda;
  if (val == 0.0) throw DomainError("classify: basepoint on the zero set of the potential");
  const Nu nu = val > 0 ? Nu::Plus : Nu::Minus;

  Matrix S = Matrix::Identity(d, d);
  Branch branch = Branch::Whole;
  CanonicalModel whole(sig, lambda, nu);
  if (whole.full_set_disconnected()) {
    const double coord = nu == Nu::Plus ? w(0) : w(d - 1);
    if (coord < 0) {
      S(0, 0) = -1.0;
      S(d - 1, d - 1) = -1.0;
    }
    branch = Branch::Right;
  }

  red.model = CanonicalModel(sig, lambda, nu, branch);
  red.scale = r;
  red.factor = K * r * r / 2.0;
  red.reducing_map = {S / r, -S * center / r};

  // psi(x) = factor * (q(z) + lambda) at a few points around the basepoint.
  for (int k = -1; k < d; ++k) {
    Vector x = basepoint;
    if (k >= 0) x(k) += 1.0;
    const Vector z = red.reducing_map.apply(x);
    const double lhs = P.value(x), rhs = red.factor * (q(sig, z) + lambda);
    const double scale = std::max({1.0, std::abs(lhs), std::abs(red.factor) * (z.squaredNorm() + std::abs(lambda))});
    if (std::abs(lhs - rhs) > 1e-9 * scale) throw std::runtime_error("classify: reduction check failed");
  }
  if (!contains(red.model, red.reducing_map.apply(basepoint)))
    throw std::runtime_error("classify: reduced basepoint outside model");
  res.reduction = red;
  return res;
}

CanonicalModel rescale(const CanonicalModel& M, double r) {
  if (!(r > 0)) throw std::invalid_argument("rescale: r must be positive");
  return CanonicalModel(M.sig, M.lambda * r * r, M.nu, M.branch);
}

IsomorphismCheck is_isomorphism(const CanonicalModel& Ma, const CanonicalModel& Mb, const AffineMap& f) {
  IsomorphismCheck out;
  const int d = Ma.dim();
  if (Mb.dim() != d || f.dim() != d) return out;
  const double scale = std::max(1.0, f.linear.cwiseAbs().maxCoeff());
  if (f.offset.cwiseAbs().maxCoeff() > 1e-12 * scale) return out;

  const MapClassification cls = classify_affine_map(f, Ma.sig, Mb.sig);
  if (cls.kind == MapKind::Other) return out;
  const double r2 = cls.ratio * cls.ratio;
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
  if (cls.kind == MapKind::Negalitude) {
    if (Mb.sig.p != Ma.sig.m || !close(Mb.lambda, -Ma.lambda * r2) || Mb.nu == Ma.nu) return out;
    out.negalitude = true;
  } else {
    if (!(Mb.sig == Ma.sig) || !close(Mb.lambda, Ma.lambda * r2) || Mb.nu != Ma.nu) return out;
  }

  // Component bookkeeping: f is continuous, so one point per component decides.
  std::vector<Vector> pts{sample_point(Ma)};
  if (Ma.branch == Branch::Whole && Ma.full_set_disconnected()) pts.push_back(-pts[0]);
  for (const auto& x : pts)
    if (!contains(Mb, f.apply(x))) return out;
  const AffineMap finv = f.inverse();
  std::vector<Vector> back{sample_point(Mb)};
  if (Mb.branch == Branch::Whole && Mb.full_set_disconnected()) back.push_back(-back[0]);
  for (const auto& y : back)
    if (!contains(Ma, finv.apply(y))) return out;

  out.maps_models = true;
  out.ratio = cls.ratio;
  return out;
}

AutomorphismGroup automorphism_descriptor(const CanonicalModel& M) {
  const bool plus = M.nu == Nu::Plus;
  if (M.lambda == 0.0) {
    if (plus && M.sig.p == 1) return AutomorphismGroup::OrthochronousSimilarities;
    if (!plus && M.sig.m == 1) return AutomorphismGroup::AntiorthochronousSimilarities;
    return AutomorphismGroup::FullSimilarities;
  }
  if (plus && M.sig.p == 1 && M.lambda < 0) return AutomorphismGroup::Oplus;
  if (!plus && M.sig.m == 1 && M.lambda > 0) return AutomorphismGroup::Ominus;
  return AutomorphismGroup::FullIsometries;
}

std::string to_string(AutomorphismGroup g) {
  switch (g) {
    case AutomorphismGroup::FullSimilarities: return "FullSimilarities";
    case AutomorphismGroup::OrthochronousSimilarities: return "OrthochronousSimilarities";
    case AutomorphismGroup::AntiorthochronousSimilarities: return "AntiorthochronousSimilarities";
    case AutomorphismGroup::FullIsometries: return "FullIsometries";
    case AutomorphismGroup::Oplus: return "Oplus";
    case AutomorphismGroup::Ominus: return "Ominus";
  }
  return "?";
}

double relative_scalar_curvature(const CanonicalModel& M, const Vector& x) {
  require_inside(M, x, "relative_scalar_curvature");
  const int d = M.dim();
  return d * (d - 1) * 2.0 / M.psi(x);
}

}  // namespace stiffgeo
