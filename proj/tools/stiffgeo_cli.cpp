#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stiffgeo/errors.hpp"
#include "stiffgeo/geodesics.hpp"
#include "stiffgeo/io.hpp"
#include "stiffgeo/metrics.hpp"
#include "stiffgeo/models.hpp"
#include "stiffgeo/transport.hpp"
#include "stiffgeo/weakstiff2d.hpp"

using namespace stiffgeo;
using io::json;

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitParse = 3;

struct Globals {
  double tol = 1e-10;
  std::string out;
  std::string mode = "similarity";
};

json envelope(const std::string& verb) { return {{"schema", io::kSchema}, {"verb", verb}}; }

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

// One row per sample, shortest round-trip formatting.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  for (std::size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
  f << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) f << (i ? "," : "") << io::shortest(r[i]);
    f << '\n';
  }
}

std::vector<std::string> coord_names(const std::string& prefix, int d) {
  std::vector<std::string> out;
  for (int i = 1; i <= d; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// "x;y;z" with comma-separated coordinates
std::vector<Vector> parse_points(const std::string& text) {
  std::vector<Vector> pts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) pts.push_back(io::parse_vector(item));
  if (pts.size() < 2) throw ParseError("a path needs at least two points");
  for (const auto& p : pts)
    if (p.size() != pts.front().size()) throw ParseError("path points have different dimensions");
  return pts;
}

void require_dim(const Vector& v, int d, const char* what) {
  if (v.size() != d)
    throw ParseError(std::string(what) + ": expected " + std::to_string(d) + " coordinates, got " +
                     std::to_string(v.size()));
}

ClassifyMode parse_mode(const std::string& s) {
  if (s == "similarity") return ClassifyMode::Similarity;
  if (s == "isometry") return ClassifyMode::Isometry;
  throw ParseError("--mode must be 'similarity' or 'isometry'");
}

json affine_json(const AffineMap& f) {
  return {{"linear", io::matrix(f.linear)}, {"translation", io::vector(f.offset)}};
}

json curvature_json(const CurvatureTensor& R) {
  json comps = json::array();
  const int d = R.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const double v = R(i, j, k, l);
          if (std::abs(v) > 1e-13) comps.push_back({{"ijkl", {i + 1, j + 1, k + 1, l + 1}}, {"value", io::number(v)}});
        }
  return comps;
}

// Polynomial in one real variable, or the tagged infinite function.
HatRealFn hat_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return HatRealFn::infinity();
  if (!j.is_array() || j.empty()) throw ParseError("pair entries must be \"inf\" or ascending coefficient arrays");
  const auto c = j.get<std::vector<double>>();
  auto f = [c](double t) {
    double v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
    return v;
  };
  auto df = [c](double t) {
    double v = 0;
    for (std::size_t k = c.size(); k-- > 1;) v = v * t + static_cast<double>(k) * c[k];
    return v;
  };
  return {f, df, false};
}

std::vector<Vector> disk_probes(const Vector& center, double radius, int n) {
  // Deterministic sunflower pattern.
  std::vector<Vector> out;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < n; ++k) {
    const double rho = radius * std::sqrt((k + 0.5) / n);
    Vector p(2);
    p << center(0) + rho * std::cos(k * golden), center(1) + rho * std::sin(k * golden);
    out.push_back(p);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stiff connections on pseudo-Euclidean spaces: classification, transport, geodesics, metrics."};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--tol", g.tol, "ODE tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "CSV file for traces");
  app.add_option("--mode", g.mode, "classification mode: similarity|isometry")->capture_default_str();

  std::function<json()> action;

  // classify
  std::string potential_text, at_text;
  auto* classify_cmd = app.add_subcommand("classify", "Reduce a quadratic potential to its canonical model");
  classify_cmd->add_option("--potential", potential_text, "potential JSON")->required();
  classify_cmd->add_option("--at", at_text, "basepoint, e.g. 1,0")->required();
  classify_cmd->callback([&] {
    action = [&] {
      const auto P = io::potential_from_json(io::parse_json(potential_text));
      const Vector x = io::parse_vector(at_text);
      require_dim(x, P.dim(), "--at");
      const auto res = classify(P, x, parse_mode(g.mode));
      json j = envelope("classify");
      j["flat"] = res.flat;
      if (res.reduction) {
        const auto& r = *res.reduction;
        j["model"] = to_string(r.model);
        j["model_detail"] = io::to_json(r.model);
        j["map"] = affine_json(r.reducing_map);
        j["scale"] = io::number(r.scale);
        j["factor"] = io::number(r.factor);
        j["gauge_free"] = r.gauge_free;
        j["automorphisms"] = to_string(automorphism_descriptor(r.model));
      }
      if (res.flattening) {
        const auto& m = res.flattening->map;
        j["flattening"] = {{"numerator", affine_json(m.numerator)},
                           {"denominator_linear", io::vector(m.denom_lin)},
                           {"denominator_constant", io::number(m.denom_const)}};
      }
      return j;
    };
  });

  // curvature
  std::string curv_potential, curv_model, curv_at;
  auto* curv_cmd = app.add_subcommand("curvature", "Curvature and Ricci tensors at a point");
  auto* curv_p = curv_cmd->add_option("--potential", curv_potential, "potential JSON");
  auto* curv_m = curv_cmd->add_option("--model", curv_model, "model string S(p,m;lambda;nu[;L|R])");
  curv_p->excludes(curv_m);
  curv_cmd->add_option("--at", curv_at, "point")->required();
  curv_cmd->callback([&] {
    action = [&] {
      if (curv_potential.empty() && curv_model.empty()) throw ParseError("curvature: give --potential or --model");
      std::optional<CanonicalModel> M;
      QuadraticPotential P;
      if (!curv_model.empty()) {
        M = parse_model(curv_model);
        P = M->potential();
      } else {
        P = io::potential_from_json(io::parse_json(curv_potential));
      }
      const Vector x = io::parse_vector(curv_at);
      require_dim(x, P.dim(), "--at");
      if (M) require_inside(*M, x, "curvature");
      if (P.value(x) == 0.0) throw DomainError("curvature: potential vanishes at the point");
      const auto a = form_from_potential(P);
      const auto R = curvature_from_potential(P, x);
      json j = envelope("curvature");
      j["psi"] = io::number(P.value(x));
      j["form"] = io::vector(a.at(x));
      j["R"] = curvature_json(R);
      j["ricci"] = io::matrix(contract(R));
      if (M) j["relative_scalar_curvature"] = io::number(relative_scalar_curvature(*M, x));
      return j;
    };
  });

  // transport
  std::string tr_model, tr_path, tr_ray, tr_plane;
  double tr_t0 = 0, tr_t1 = 0, tr_r = 1, tr_th0 = 0, tr_th1 = 0;
  auto* tr_cmd = app.add_subcommand("transport", "Parallel transport along a path, ray or arc");
  tr_cmd->add_option("--model", tr_model, "model string")->required();
  auto* o_path = tr_cmd->add_option("--path", tr_path, "polyline 'x1,x2;y1,y2;...' (ODE)");
  auto* o_ray = tr_cmd->add_option("--ray", tr_ray, "unit direction e_r of a ray through the origin");
  auto* o_arc = tr_cmd->add_option("--arc", tr_plane, "coordinate plane i,j of an arc about the origin");
  o_path->excludes(o_ray)->excludes(o_arc);
  o_ray->excludes(o_arc);
  tr_cmd->add_option("--t0", tr_t0, "ray start parameter");
  tr_cmd->add_option("--t1", tr_t1, "ray end parameter");
  tr_cmd->add_option("--r", tr_r, "arc radius");
  tr_cmd->add_option("--theta0", tr_th0, "arc start angle");
  tr_cmd->add_option("--theta1", tr_th1, "arc end angle");
  tr_cmd->callback([&] {
    action = [&] {
      const CanonicalModel M = parse_model(tr_model);
      json j = envelope("transport");
      j["model"] = to_string(M);
      TransportMap T;
      if (!tr_path.empty()) {
        const auto pts = parse_points(tr_path);
        require_dim(pts.front(), M.dim(), "--path");
        T = transport_ode(M, PathSpec::line(pts), {g.tol, true});
      } else if (!tr_ray.empty()) {
        const Vector e = io::parse_vector(tr_ray);
        require_dim(e, M.dim(), "--ray");
        T = transport_ray(M, e, tr_t0, tr_t1);
      } else if (!tr_plane.empty()) {
        const auto [i, k] = io::parse_index_pair(tr_plane);
        T = transport_arc(M, i, k, tr_r, tr_th0, tr_th1);
      } else {
        throw ParseError("transport: give one of --path, --ray, --arc");
      }
      j["transport"] = io::to_json(T);
      return j;
    };
  });

  // holonomy
  std::string hol_model, hol_plane = "1,2", hol_at;
  double hol_radius = 0;
  auto* hol_cmd = app.add_subcommand("holonomy", "Holonomy around a circle, or the infinitesimal holonomy");
  hol_cmd->add_option("--model", hol_model, "model string")->required();
  auto* o_circ = hol_cmd->add_option("--circle-radius", hol_radius, "radius of a circle about the origin");
  auto* o_inf = hol_cmd->add_option("--at", hol_at, "point for the infinitesimal holonomy");
  o_circ->excludes(o_inf);
  hol_cmd->add_option("--plane", hol_plane, "coordinate plane i,j")->capture_default_str();
  hol_cmd->callback([&] {
    action = [&] {
      const CanonicalModel M = parse_model(hol_model);
      const auto [i, k] = io::parse_index_pair(hol_plane);
      const int d = M.dim();
      if (i >= d || k >= d || i == k) throw ParseError("--plane: indices out of range");
      json j = envelope("holonomy");
      j["model"] = to_string(M);
      if (!hol_at.empty()) {
        const Vector x = io::parse_vector(hol_at);
        require_dim(x, d, "--at");
        j["infinitesimal"] = io::matrix(infinitesimal_holonomy(M, x, i, k));
        return j;
      }
      if (!(hol_radius > 0)) throw ParseError("holonomy: give --circle-radius > 0 or --at");
      const Vector u = Vector::Unit(d, i), w = Vector::Unit(d, k);
      const auto closed = transport_arc(M, u, w, hol_radius, 0.0, 2.0 * std::numbers::pi);
      const auto ode = holonomy_loop(M, PathSpec::circle(Vector::Zero(d), u, w, hol_radius), {g.tol, true});
      // Express the ODE result in the polar frame at the base point.
      const Matrix& F = closed.frame->frame_from;
      const Matrix polar = (F.transpose() * M.sig.gram() * F).inverse() * F.transpose() * M.sig.gram() * ode.matrix * F;
      j["radius"] = io::number(hol_radius);
      j["matrix"] = io::matrix(ode.matrix);
      j["polar_frame"] = io::matrix(polar);
      j["closed_form_polar_frame"] = io::matrix(closed.frame->in_frame);
      j["det"] = io::number(ode.matrix.determinant());
      j["est_error"] = io::number(ode.est_error);
      return j;
    };
  });

  // geodesic
  std::string geo_model, geo_x0, geo_e;
  int geo_samples = 0;
  double geo_span = 10.0;
  auto* geo_cmd = app.add_subcommand("geodesic", "Closed-form geodesic through x0 along e");
  geo_cmd->add_option("--model", geo_model, "model string")->required();
  geo_cmd->add_option("--x0", geo_x0, "starting point")->required();
  geo_cmd->add_option("--e", geo_e, "direction")->required();
  geo_cmd->add_option("--samples", geo_samples, "trace samples written to --out")->check(CLI::NonNegativeNumber);
  geo_cmd->add_option("--span", geo_span, "time span used when the interval is unbounded")->capture_default_str();
  geo_cmd->callback([&] {
    action = [&] {
      const CanonicalModel M = parse_model(geo_model);
      const Vector x0 = io::parse_vector(geo_x0), e = io::parse_vector(geo_e);
      require_dim(x0, M.dim(), "--x0");
      require_dim(e, M.dim(), "--e");
      require_inside(M, x0, "geodesic");
      const auto sol = solve_geodesic({M, x0, e});
      json j = envelope("geodesic");
      j["model"] = to_string(M);
      j["solution"] = io::to_json(sol);
      if (geo_samples > 1) {
        // Stay strictly inside the maximal interval.
        const double lo = std::isfinite(sol.t_min) ? sol.t_min : -geo_span;
        const double hi = std::isfinite(sol.t_max) ? sol.t_max : geo_span;
        std::vector<std::vector<double>> rows;
        for (int n = 0; n < geo_samples; ++n) {
          const double t = lo + (hi - lo) * (n + 0.5) / geo_samples;
          std::vector<double> row{t, sol.s_at(t)};
          const Vector p = sol.point(t);
          row.insert(row.end(), p.data(), p.data() + p.size());
          rows.push_back(row);
        }
        auto header = coord_names("x", M.dim());
        header.insert(header.begin(), {"t", "s"});
        if (!g.out.empty()) {
          write_csv(g.out, header, rows);
          j["csv"] = g.out;
        }
        j["samples"] = geo_samples;
      }
      return j;
    };
  });

  // travel-time
  std::string tt_model = "S(2,0;-1;-)", tt_a, tt_b;
  double tt_alpha = 1.0;
  auto* tt_cmd = app.add_subcommand("travel-time", "Isochrone travel time along a chord");
  tt_cmd->add_option("--model", tt_model, "model string")->capture_default_str();
  tt_cmd->add_option("--a", tt_a, "first point")->required();
  tt_cmd->add_option("--b", tt_b, "second point")->required();
  tt_cmd->add_option("--alpha", tt_alpha, "metric scale")->capture_default_str()->check(CLI::PositiveNumber);
  tt_cmd->callback([&] {
    action = [&] {
      const CanonicalModel M = parse_model(tt_model);
      const Vector a = io::parse_vector(tt_a), b = io::parse_vector(tt_b);
      require_dim(a, M.dim(), "--a");
      require_dim(b, M.dim(), "--b");
      const auto T = travel_time(M, a, b, tt_alpha);
      json j = envelope("travel-time");
      j["model"] = to_string(M);
      j["time"] = io::number(T.time);
      j["regime"] = to_string(T.regime);
      if (!T.warning.empty()) j["warning"] = T.warning;
      return j;
    };
  });

  // triangle
  double tri_s = 0.9;
  bool tri_s0 = false;
  auto* tri_cmd = app.add_subcommand("triangle", "Triangle inequality experiment in the disk model");
  tri_cmd->add_option("--s", tri_s, "abscissa of a = (s, 0) and b = (0, s)")->capture_default_str();
  tri_cmd->add_flag("--find-s0", tri_s0, "also locate the crossover abscissa");
  tri_cmd->callback([&] {
    action = [&] {
      const auto r = triangle_experiment(tri_s);
      json j = envelope("triangle");
      j["s"] = io::number(r.s);
      j["T_ab"] = io::number(r.T_ab);
      j["T_sum"] = io::number(r.T_sum);
      j["violates"] = r.violates;
      if (tri_s0) j["s0"] = io::number(find_s0());
      return j;
    };
  });

  // h-geodesic
  std::string hg_model, hg_x0, hg_v0;
  double hg_t = 1.0, hg_alpha = 1.0;
  int hg_samples = 101;
  auto* hg_cmd = app.add_subcommand("h-geodesic", "Integrate a geodesic of the isochrone metric");
  hg_cmd->add_option("--model", hg_model, "model string")->required();
  hg_cmd->add_option("--x0", hg_x0, "starting point")->required();
  hg_cmd->add_option("--v0", hg_v0, "starting velocity")->required();
  hg_cmd->add_option("--t-end", hg_t, "final time")->capture_default_str();
  hg_cmd->add_option("--alpha", hg_alpha, "metric scale")->capture_default_str()->check(CLI::PositiveNumber);
  hg_cmd->add_option("--samples", hg_samples, "trace samples")->capture_default_str()->check(CLI::Range(2, 1000000));
  hg_cmd->callback([&] {
    action = [&] {
      const CanonicalModel M = parse_model(hg_model);
      const Vector x0 = io::parse_vector(hg_x0), v0 = io::parse_vector(hg_v0);
      require_dim(x0, M.dim(), "--x0");
      require_dim(v0, M.dim(), "--v0");
      const auto tr = h_geodesic(M, x0, v0, hg_t, g.tol, hg_alpha, hg_samples);
      json j = envelope("h-geodesic");
      j["model"] = to_string(M);
      j["end"] = io::vector(tr.x.back());
      j["end_velocity"] = io::vector(tr.v.back());
      j["max_speed_drift"] = io::number(tr.max_speed_drift);
      j["samples"] = static_cast<int>(tr.t.size());
      if (!g.out.empty()) {
        std::vector<std::vector<double>> rows;
        for (std::size_t n = 0; n < tr.t.size(); ++n) {
          std::vector<double> row{tr.t[n]};
          row.insert(row.end(), tr.x[n].data(), tr.x[n].data() + tr.x[n].size());
          row.insert(row.end(), tr.v[n].data(), tr.v[n].data() + tr.v[n].size());
          rows.push_back(row);
        }
        auto header = coord_names("x", M.dim());
        const auto vs = coord_names("v", M.dim());
        header.insert(header.begin(), "t");
        header.insert(header.end(), vs.begin(), vs.end());
        write_csv(g.out, header, rows);
        j["csv"] = g.out;
      }
      return j;
    };
  });

  // table
  std::string tab_at = "0,0";
  auto* tab_cmd = app.add_subcommand("table", "Compare disk connections at a point");
  tab_cmd->add_option("--at", tab_at, "point of the unit disk")->capture_default_str();
  tab_cmd->callback([&] {
    action = [&] {
      const Vector x = io::parse_vector(tab_at);
      require_dim(x, 2, "--at");
      json j = envelope("table");
      j["at"] = io::vector(x);
      j["rows"] = json::array();
      for (const auto& row : comparison_table(x)) j["rows"].push_back(io::to_json(row));
      return j;
    };
  });

  // weakstiff
  std::string ws_f, ws_pair, ws_center = "0,0";
  double ws_radius = 0.5;
  int ws_probes = 100;
  auto* ws_cmd = app.add_subcommand("weakstiff", "Build and check a two-dimensional weakly stiff connection");
  auto* o_f = ws_cmd->add_option("--f", ws_f, "rational function JSON {\"num\":[...],\"den\":[...]}");
  auto* o_pair = ws_cmd->add_option("--pair", ws_pair, "pair JSON {\"f1\":[coeffs]|\"inf\",\"f2\":...}");
  o_f->excludes(o_pair);
  ws_cmd->add_option("--center", ws_center, "probe disk center")->capture_default_str();
  ws_cmd->add_option("--radius", ws_radius, "probe disk radius")->capture_default_str()->check(CLI::PositiveNumber);
  ws_cmd->add_option("--probes", ws_probes, "number of probes")->capture_default_str()->check(CLI::Range(1, 100000));
  ws_cmd->callback([&] {
    action = [&] {
      const Vector c = io::parse_vector(ws_center);
      require_dim(c, 2, "--center");
      const auto probes = disk_probes(c, ws_radius, ws_probes);
      json j = envelope("weakstiff");
      AssociatedForm a;
      WeakStiffCoords coords;
      if (!ws_f.empty()) {
        const auto f = io::rational_from_json(io::parse_json(ws_f));
        a = from_meromorphic(f);
        coords = WeakStiffCoords::Euclidean20;
        const auto dich = conj_dichotomy(f);
        j["signature"] = io::to_json(Signature(2, 0));
        j["canonical_disk_model"] = dich.canonical_disk_model;
        if (dich.boundary_point)
          j["boundary_point"] = {io::number(dich.boundary_point->real()), io::number(dich.boundary_point->imag())};
      } else if (!ws_pair.empty()) {
        const json p = io::parse_json(ws_pair);
        try {
          a = from_pair_11({hat_from_json(p.at("f1")), hat_from_json(p.at("f2"))});
        } catch (const json::exception& e) {
          throw ParseError(std::string("pair: ") + e.what());
        }
        coords = WeakStiffCoords::Eprime11;
        j["signature"] = io::to_json(Signature(1, 1));
        j["coordinates"] = "y1 = x1 + x2, y2 = x1 - x2";
      } else {
        throw ParseError("weakstiff: give --f or --pair");
      }
      const auto rep = verify_weakstiff(a, probes, coords);
      const auto inc = incompressibility_report(a, probes);
      j["probes"] = ws_probes;
      j["max_residual"] = io::number(rep.max_residual);
      j["max_trace"] = io::number(rep.max_trace);
      j["weakly_stiff"] = rep.weakly_stiff;
      j["isometric"] = rep.isometric;
      j["closed"] = inc.closed;
      j["max_asymmetry"] = io::number(inc.max_asymmetry);
      return j;
    };
  });

  // facts
  std::string facts_model;
  auto* facts_cmd = app.add_subcommand("facts", "Domain, automorphism and completeness facts of a model");
  facts_cmd->add_option("--model", facts_model, "model string")->required();
  facts_cmd->callback([&] {
    action = [&] {
      const CanonicalModel M = parse_model(facts_model);
      json j = envelope("facts");
      j["model"] = io::to_json(M);
      j["domain"] = io::to_json(domain_facts(M));
      j["automorphisms"] = to_string(automorphism_descriptor(M));
      const auto v = completeness_verdict(M);
      j["geodesically_complete"] = v.complete;
      if (v.witness) {
        const auto sol = solve_geodesic(*v.witness);
        j["witness"] = {{"x0", io::vector(v.witness->x0)},
                        {"e", io::vector(v.witness->e)},
                        {"t_min", io::number(sol.t_min)},
                        {"t_max", io::number(sol.t_max)}};
      }
      return j;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (argc > 1 && argv[1][0] != '-' && app.get_subcommands().empty())
      std::cerr << "error: unknown verb '" << argv[1] << "'\n\n" << app.help();
    else
      std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitParse;
  }

  try {
    emit(action());
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
