#ifndef HEISLAB_TOOLS_CLI_HPP
#define HEISLAB_TOOLS_CLI_HPP

// Experiment driver: one subcommand per pipeline. Every run writes its
// artifacts plus manifest.json (config echo, versions, wall time, SHA-256 of
// each file) to the output directory and prints a JSON summary on stdout.

#include <heislab.hpp>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <boost/version.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace heislab::cli {

inline constexpr const char* kVersion = "1.0.0";

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

/// JSON config files for CLI11: {"threads": 2, "hopf": {"level": 3}}. Keys
/// at the top level address global options, nested objects address the
/// subcommand of that name. Arrays become multi-valued inputs.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    return echo(app, default_also).dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    Json j;
    try {
      input >> j;
    } catch (const Json::exception& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    flatten(j, {}, items);
    return items;
  }

  static Json echo(const CLI::App* app, bool default_also) {
    Json j = Json::object();
    for (const CLI::Option* opt : app->get_options()) {
      const std::string name = opt->get_single_name();
      if (name.empty() || name == "help" || name == "config") continue;
      if (opt->count() > 0) {
        const auto& res = opt->results();
        if (opt->get_expected_max() > 1) j[name] = res;
        else if (!res.empty()) j[name] = res.back();
      } else if (default_also) {
        j[name] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app->get_subcommands())
      j[sub->get_name()] = echo(sub, default_also);
    return j;
  }

 private:
  static std::string scalar(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("config values must be scalars or arrays of scalars");
  }

  static void flatten(const Json& j, std::vector<std::string> parents, std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto p = parents;
        p.push_back(key);
        flatten(value, p, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array())
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      else
        item.inputs.push_back(scalar(value));
      items.push_back(std::move(item));
    }
  }
};

/// Output of one subcommand: a summary (also written as result.json) and
/// extra files.
struct Artifacts {
  Json summary = Json::object();
  std::vector<std::pair<std::string, std::string>> files;
};

namespace detail {

inline Eigen::Vector3d vec3(const std::vector<double>& v, const std::string& what) {
  require(v.size() == 3, what + " needs three components");
  return Eigen::Vector3d(v[0], v[1], v[2]);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline DifferentialForm load_form(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
  }
  return form_from_json(j);
}

inline std::string curve_csv(const PLCurve& c) {
  std::ostringstream os;
  write_curve_csv(os, c);
  return os.str();
}

/// A fixed non-closed polynomial 1-form on R^dim, used where a generic form is
/// needed.
inline DifferentialForm generic_one_form(int dim) {
  DifferentialForm w(dim, 1);
  for (int i = 0; i < dim; ++i) {
    const Polynomial xi = Polynomial::variable(dim, i), xj = Polynomial::variable(dim, (i + 1) % dim);
    w.add_term({i}, Polynomial::constant(dim, 1.0 + 0.25 * i) + xi * xj + 0.5 * xj * xj);
  }
  return w;
}

/// Default degree-k test form on R^{k+1} for the Stokes harness.
inline DifferentialForm default_stokes_form(int k) {
  const int dim = k + 1;
  auto x = [dim](int i) { return Polynomial::variable(dim, i); };
  DifferentialForm w(dim, k);
  if (k == 1) {
    w.add_term({0}, x(0) * x(0) * x(1) + x(1));
    w.add_term({1}, x(0) * x(1) * x(1) * x(1) + 2.0 * x(0));
  } else {
    w.add_term({0, 1}, x(2) * x(2) * x(0) + x(2));
    w.add_term({0, 2}, x(1) * x(1) * x(1) + x(0) * x(1));
    w.add_term({1, 2}, x(0) * x(2) + x(0));
  }
  return w;
}

inline std::vector<PLCurve> preset_pair(const std::string& name, std::size_t segments) {
  auto circle = [](Eigen::Vector3d c, Eigen::Vector3d u, Eigen::Vector3d v) {
    return [=](double s) { return Vec(c + std::cos(s) * u + std::sin(s) * v); };
  };
  const Eigen::Vector3d ex = Eigen::Vector3d::UnitX(), ey = Eigen::Vector3d::UnitY(), ez = Eigen::Vector3d::UnitZ();
  if (name == "unlink")
    return {sample_closed_curve(circle(Eigen::Vector3d::Zero(), ex, ey), segments),
            sample_closed_curve(circle(3.0 * ez, ex, ey), segments)};
  if (name == "hopf")
    return {sample_closed_curve(circle(Eigen::Vector3d::Zero(), ex, ey), segments),
            sample_closed_curve(circle(ex, ex, ez), segments)};
  if (name == "torus24") {
    auto torus = [](double phase) {
      return [=](double s) {
        const double v = 2.0 * s + phase;
        return Vec(Eigen::Vector3d((2.0 + std::cos(v)) * std::cos(s), (2.0 + std::cos(v)) * std::sin(s), std::sin(v)));
      };
    };
    return {sample_closed_curve(torus(0.0), segments), sample_closed_curve(torus(kPi), segments)};
  }
  throw InvalidArgument("unknown preset '" + name + "' (expected unlink, hopf or torus24)");
}

inline SmoothMap hopf_test_map(const std::string& name) {
  if (name == "hopf_map") return hopf_map().map;
  if (name == "hopf_reflected") {
    std::vector<Polynomial> r;
    for (int i = 0; i < 4; ++i) r.push_back((i == 3 ? -1.0 : 1.0) * Polynomial::variable(4, i));
    return compose(hopf_map().map, SmoothMap::polynomial(r));
  }
  if (name == "null_homotopic") return null_homotopic_map();
  throw InvalidArgument("unknown map '" + name + "' (expected hopf_map, hopf_reflected or null_homotopic)");
}

inline Json fit_json(const LineFit& f, bool valid) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"valid", valid}};
}

}  // namespace detail

/// Runs the driver on argv-style arguments (without the program name).
/// Returns the process exit status; errors are reported as JSON on `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"heislab: Heisenberg-group geometry experiments"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  int threads = 0;
  std::string out_dir;
  app.add_option("--threads", threads, "worker thread cap (default: HEISLAB_THREADS, else 1)");
  app.add_option("--out", out_dir, "output directory (default: heislab-out/<subcommand>)");

  std::map<std::string, std::function<Artifacts()>> handlers;

  // koranyi-dist
  {
    auto* sub = app.add_subcommand("koranyi-dist", "Koranyi distance between two points of H_n");
    auto n = std::make_shared<int>(1);
    auto p = std::make_shared<std::vector<double>>();
    auto q = std::make_shared<std::vector<double>>();
    sub->add_option("--n", *n, "Heisenberg dimension n")->capture_default_str();
    sub->add_option("--p", *p, "first point, 2n+1 comma-separated coordinates")->required()->delimiter(',');
    sub->add_option("--q", *q, "second point")->required()->delimiter(',');
    handlers[sub->get_name()] = [=] {
      const HeisenbergPoint a(*n, Eigen::Map<const Vec>(p->data(), static_cast<Eigen::Index>(p->size())));
      const HeisenbergPoint b(*n, Eigen::Map<const Vec>(q->data(), static_cast<Eigen::Index>(q->size())));
      Artifacts r;
      r.summary = {{"distance", koranyi_dist(a, b)}};
      return r;
    };
  }

  // verify-metric
  {
    auto* sub = app.add_subcommand("verify-metric", "symmetry, triangle inequality and left-invariance on random triples");
    auto n = std::make_shared<int>(1);
    auto triples = std::make_shared<std::size_t>(10000);
    auto radius = std::make_shared<double>(2.0);
    auto seed = std::make_shared<std::uint64_t>(0);
    sub->add_option("--n", *n)->capture_default_str();
    sub->add_option("--triples", *triples)->capture_default_str();
    sub->add_option("--radius", *radius)->capture_default_str();
    sub->add_option("--seed", *seed)->required();
    handlers[sub->get_name()] = [=] {
      require(*triples >= 1 && *radius > 0.0, "verify-metric: need triples >= 1 and radius > 0");
      Rng rng(*seed);
      const int dim = 2 * *n + 1;
      double sym = 0.0, tri = 0.0, inv = 0.0, vert = 0.0;
      for (std::size_t i = 0; i < *triples; ++i) {
        const HeisenbergPoint a(*n, random_in_ball(rng, dim, *radius)), b(*n, random_in_ball(rng, dim, *radius)),
            c(*n, random_in_ball(rng, dim, *radius)), g(*n, random_in_ball(rng, dim, *radius));
        const double ab = koranyi_dist(a, b);
        sym = std::max(sym, std::abs(ab - koranyi_dist(b, a)));
        tri = std::max(tri, koranyi_dist(a, c) - ab - koranyi_dist(b, c));
        inv = std::max(inv, std::abs(koranyi_dist(group_mul(g, a), group_mul(g, b)) - ab));
        Vec v = Vec::Zero(dim);
        v[dim - 1] = c.t();
        vert = std::max(vert, std::abs(koranyi_dist(HeisenbergPoint::origin(*n), HeisenbergPoint(*n, v)) -
                                       std::sqrt(std::abs(c.t()))));
      }
      Artifacts r;
      r.summary = {{"triples", *triples},
                   {"max_symmetry_error", sym},
                   {"max_triangle_violation", std::max(tri, 0.0)},
                   {"max_invariance_error", inv},
                   {"max_vertical_error", vert}};
      return r;
    };
  }

  // comparison-scan
  {
    auto* sub = app.add_subcommand("comparison-scan", "extremal Euclidean/Koranyi comparison ratios");
    auto n = std::make_shared<int>(1);
    auto samples = std::make_shared<std::size_t>(10000);
    auto radius = std::make_shared<double>(2.0);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto refine = std::make_shared<std::size_t>(8);
    sub->add_option("--n", *n)->capture_default_str();
    sub->add_option("--samples", *samples)->capture_default_str();
    sub->add_option("--radius", *radius)->capture_default_str();
    sub->add_option("--refine", *refine, "number of best pairs refined by local ascent")->capture_default_str();
    sub->add_option("--seed", *seed)->required();
    handlers[sub->get_name()] = [=] {
      const ComparisonScan s = comparison_ratio_scan(*samples, *radius, *seed, *n, *refine);
      auto ratios = [](const ComparisonRatios& c) {
        return Json{{"euclidean_over_koranyi", c.euclidean_over_koranyi},
                    {"koranyi_over_root_euclidean", c.koranyi_over_root_euclidean}};
      };
      Artifacts r;
      r.summary = {{"valid", s.valid}, {"pairs_used", s.pairs_used}, {"raw", ratios(s.raw)}, {"refined", ratios(s.refined)}};
      return r;
    };
  }

  // lefschetz
  {
    auto* sub = app.add_subcommand("lefschetz", "decompose a polynomial k-form as alpha^beta + dalpha^sigma");
    auto form = std::make_shared<std::string>();
    sub->add_option("--form", *form, "form JSON file")->required();
    handlers[sub->get_name()] = [=] {
      const DifferentialForm kappa = detail::load_form(*form);
      require(kappa.dim() % 2 == 1 && kappa.dim() >= 3, "lefschetz: form must live on R^{2n+1}");
      const int n = (kappa.dim() - 1) / 2;
      const LefschetzDecomposition d = lefschetz_decompose(kappa, n);
      Artifacts r;
      r.summary = {{"n", n}, {"degree", kappa.degree()}, {"exact", lefschetz_reconstruct(d, n) == kappa}};
      r.files.emplace_back("beta.json", form_to_json(d.beta).dump(2) + "\n");
      r.files.emplace_back("sigma.json", form_to_json(d.sigma).dump(2) + "\n");
      return r;
    };
  }

  // stokes-check
  {
    auto* sub = app.add_subcommand("stokes-check", "Stokes residual on refined ball meshes");
    auto k = std::make_shared<int>(1);
    auto levels = std::make_shared<std::vector<int>>(std::vector<int>{1, 2, 3, 4});
    auto form = std::make_shared<std::string>();
    sub->add_option("--k", *k, "sphere dimension (ball B^{k+1})")->capture_default_str();
    sub->add_option("--levels", *levels)->delimiter(',')->capture_default_str();
    sub->add_option("--form", *form, "degree-k form JSON on R^{k+1} (default: built-in test form)");
    handlers[sub->get_name()] = [=] {
      require(*k == 1 || *k == 2, "stokes-check: k must be 1 or 2");
      require(levels->size() >= 2, "stokes-check: need at least two levels");
      const DifferentialForm w = form->empty() ? detail::default_stokes_form(*k) : detail::load_form(*form);
      require(w.dim() == *k + 1 && w.degree() == *k, "stokes-check: form must be a k-form on R^{k+1}");
      const SmoothMap id = SmoothMap::identity(*k + 1);
      std::vector<double> hs, res;
      std::string csv = "level,h,residual\n";
      for (int level : *levels) {
        const BallMesh ball = make_ball_mesh(*k, level);
        const double h = ball.max_edge();
        const double residual = std::abs(stokes_residual(id, w, ball));
        hs.push_back(h);
        res.push_back(residual);
        csv += fmt::format("{},{},{}\n", level, format_real(h), format_real(residual));
      }
      bool valid = true;
      for (double v : res) valid = valid && v > 0.0;
      Artifacts r;
      r.summary = {{"k", *k}, {"residuals", res}, {"order", valid ? fit_loglog(hs, res).slope : 0.0}, {"order_valid", valid}};
      r.files.emplace_back("stokes.csv", csv);
      return r;
    };
  }

  // linking-gauss
  {
    auto* sub = app.add_subcommand("linking-gauss", "Gauss linking number of two closed polygons");
    auto a = std::make_shared<std::string>();
    auto b = std::make_shared<std::string>();
    auto preset = std::make_shared<std::string>();
    auto segments = std::make_shared<std::size_t>(512);
    sub->add_option("--a", *a, "first curve CSV");
    sub->add_option("--b", *b, "second curve CSV");
    sub->add_option("--preset", *preset, "unlink, hopf or torus24 instead of files");
    sub->add_option("--segments", *segments, "segments per preset curve")->capture_default_str();
    handlers[sub->get_name()] = [=] {
      std::vector<PLCurve> curves;
      if (!preset->empty()) {
        require(a->empty() && b->empty(), "linking-gauss: give either --preset or --a/--b");
        curves = detail::preset_pair(*preset, *segments);
      } else {
        require(!a->empty() && !b->empty(), "linking-gauss: need --a and --b (or --preset)");
        std::ifstream fa(*a), fb(*b);
        require(fa.good() && fb.good(), "linking-gauss: cannot read curve files");
        curves = {read_curve_csv(fa), read_curve_csv(fb)};
      }
      Artifacts r;
      r.summary = {{"linking", gauss_linking(curves[0], curves[1])}};
      r.files.emplace_back("curve_a.csv", detail::curve_csv(curves[0]));
      r.files.emplace_back("curve_b.csv", detail::curve_csv(curves[1]));
      return r;
    };
  }

  // linking-analytic
  {
    auto* sub = app.add_subcommand("linking-analytic", "mollified pullback integrals of a 1-form along a sampled curve");
    auto map = std::make_shared<std::string>("figure_eight_polygon");
    auto form = std::make_shared<std::string>();
    auto eps = std::make_shared<std::vector<double>>(std::vector<double>{0.4, 0.2, 0.1, 0.05});
    auto kernel = std::make_shared<std::string>("bump");
    auto res = std::make_shared<int>(512);
    auto no_support = std::make_shared<bool>(false);
    sub->add_option("--map", *map, "gallery circle map")->capture_default_str();
    sub->add_option("--form", *form, "1-form JSON (default: a fixed generic polynomial form, support check off)");
    sub->add_option("--eps", *eps)->delimiter(',')->capture_default_str();
    sub->add_option("--kernel", *kernel, "bump or polynomial")->capture_default_str();
    sub->add_option("--res", *res, "samples on the circle")->capture_default_str();
    sub->add_flag("--no-support-check", *no_support, "skip the check that d omega vanishes on the curve");
    handlers[sub->get_name()] = [=] {
      const ParametricMap m = gallery_map(*map);
      require(m.domain == ParamDomain::Circle, "linking-analytic: map must be a circle map");
      const DifferentialForm w = form->empty() ? detail::generic_one_form(m.map.codomain_dim()) : detail::load_form(*form);
      const AnalyticLinking a =
          analytic_linking(sample_circle_map(m, *res), w, *eps, kernel_from_name(*kernel), !*no_support && !form->empty());
      std::vector<SweepRow> rows;
      for (std::size_t i = 0; i < a.eps.size(); ++i)
        rows.push_back({a.eps[i], a.integrals[i], i == 0 ? 0.0 : a.defects[i - 1]});
      std::ostringstream csv;
      write_sweep_csv(csv, rows);
      Artifacts r;
      r.summary = {{"map", *map},
                   {"value", a.value},
                   {"extrapolated", a.extrapolated},
                   {"defects", a.defects},
                   {"convergence", a.converged ? "defects decrease" : "no convergence evidence"}};
      r.files.emplace_back("sweep.csv", csv.str());
      return r;
    };
  }

  // mv-build
  {
    auto* sub = app.add_subcommand("mv-build", "inductive linking form of the unit S^0 or S^1 in R^3");
    auto k = std::make_shared<int>(1);
    auto tube = std::make_shared<double>(0.1);
    auto level = std::make_shared<int>(8);
    sub->add_option("--k", *k, "0 or 1")->capture_default_str();
    sub->add_option("--tube", *tube, "tube radius")->capture_default_str();
    sub->add_option("--level", *level, "circle mesh level for the integral")->capture_default_str();
    handlers[sub->get_name()] = [=] {
      require(*k == 0 || *k == 1, "mv-build: k must be 0 or 1");
      Artifacts r;
      if (*k == 0) {
        const SmoothMap phi = SmoothMap::polynomial({Polynomial::variable(1, 0), Polynomial(1), Polynomial(1)});
        const LinkingForm f = mv_induction_build(phi, 0, *tube);
        const auto& w = f.omega.coefficient({});
        const double integral = w(phi(Vec::Ones(1))) - w(phi(-Vec::Ones(1)));
        r.summary = {{"k", 0}, {"integral", integral}, {"support_gap", f.support_gap}};
        return r;
      }
      const SmoothMap phi = SmoothMap::polynomial({Polynomial::variable(2, 0), Polynomial::variable(2, 1), Polynomial(2)});
      const LinkingForm f = mv_induction_build(phi, 1, *tube);
      const SimplicialSphereMesh mesh = make_sphere_mesh(1, *level);
      double eta_max = 0.0;
      for (const auto& v : mesh.vertices)
        for (const auto& [idx, c] : f.eta.terms()) eta_max = std::max(eta_max, std::abs(c(phi(v))));
      r.summary = {{"k", 1},
                   {"integral", integrate_pullback(phi, f.omega, mesh)},
                   {"support_gap", f.support_gap},
                   {"max_eta_on_curve", eta_max},
                   {"mesh_level", *level}};
      return r;
    };
  }

  // hopf
  {
    auto* sub = app.add_subcommand("hopf", "Hopf invariant of a map S^3 -> S^2 by fiber linking");
    auto map = std::make_shared<std::string>("hopf_map");
    auto level = std::make_shared<int>(4);
    auto p = std::make_shared<std::vector<double>>(std::vector<double>{0.1, 0.2, 1.0});
    auto q = std::make_shared<std::vector<double>>(std::vector<double>{0.3, -0.9, -0.2});
    auto pole = std::make_shared<std::vector<double>>();
    auto forms = std::make_shared<bool>(false);
    sub->add_option("--map", *map, "hopf_map, hopf_reflected or null_homotopic")->capture_default_str();
    sub->add_option("--level", *level, "S^3 mesh level")->capture_default_str();
    sub->add_option("--p", *p, "first regular value (normalised)")->delimiter(',')->capture_default_str();
    sub->add_option("--q", *q, "second regular value (normalised)")->delimiter(',')->capture_default_str();
    sub->add_option("--pole", *pole, "projection pole in R^4 (default: farthest candidate)")->delimiter(',');
    sub->add_flag("--forms", *forms, "also integrate omega ^ phi^* eta (hopf_map only)");
    handlers[sub->get_name()] = [=] {
      const SmoothMap f = detail::hopf_test_map(*map);
      const SimplicialSphereMesh mesh = make_sphere_mesh(3, *level);
      const SphereMapSample s = sample_sphere_map(f, mesh);
      std::optional<Vec> pl;
      if (!pole->empty()) {
        require(pole->size() == 4, "hopf: pole needs four components");
        pl = Eigen::Map<const Vec>(pole->data(), 4).normalized();
      }
      const HopfFiberResult h = hopf_via_fibers(s, detail::vec3(*p, "--p").normalized(),
                                                detail::vec3(*q, "--q").normalized(), pl);
      Artifacts r;
      r.summary = {{"map", *map},
                   {"p", std::vector<double>(h.p.data(), h.p.data() + 3)},
                   {"q", std::vector<double>(h.q.data(), h.q.data() + 3)},
                   {"value", h.value},
                   {"mesh_level", *level},
                   {"pole", std::vector<double>(h.pole.data(), h.pole.data() + 4)}};
      if (*forms) {
        require(*map == "hopf_map", "hopf: --forms needs the hopf_map primitive");
        r.summary["form_value"] = hopf_via_forms(f, hopf_area_form(), hopf_primitive(), mesh);
      }
      const auto fp = extract_fiber(s, h.p), fq = extract_fiber(s, h.q);
      for (std::size_t i = 0; i < fp.size(); ++i) r.files.emplace_back(fmt::format("fiber_p_{}.csv", i), detail::curve_csv(fp[i]));
      for (std::size_t i = 0; i < fq.size(); ++i) r.files.emplace_back(fmt::format("fiber_q_{}.csv", i), detail::curve_csv(fq[i]));
      return r;
    };
  }

  // mollify-rates
  {
    auto* sub = app.add_subcommand("mollify-rates", "contact defect of mollified maps against eps");
    auto map = std::make_shared<std::string>("figure_eight_polygon");
    auto res = std::make_shared<int>(0);
    auto eps = std::make_shared<std::vector<double>>();
    auto kernel = std::make_shared<std::string>("bump");
    auto generic = std::make_shared<bool>(false);
    sub->add_option("--map", *map, "gallery circle map or identity_H1/identity_H2")->capture_default_str();
    sub->add_option("--res", *res, "grid resolution (default 512 on circles, 32 on cubes)");
    sub->add_option("--eps", *eps, "decreasing eps list")->delimiter(',');
    sub->add_option("--kernel", *kernel)->capture_default_str();
    sub->add_flag("--generic", *generic, "also measure a generic polynomial 1-form");
    handlers[sub->get_name()] = [=] {
      const ParametricMap m = gallery_map(*map);
      SampledMap base;
      std::vector<double> e = *eps;
      if (m.domain == ParamDomain::Circle) {
        base = sample_circle_map(m, *res > 0 ? *res : 512);
        if (e.empty()) e = {0.2, 0.1, 0.05, 0.025};
      } else {
        require(m.domain == ParamDomain::Cube, "mollify-rates: map must live on a circle or a cube");
        base = sample_cube(m.domain_dim, *res > 0 ? *res : 32, m.half_width, [&m](const Vec& x) { return m.map(x); });
        if (e.empty()) e = {0.5, 0.4, 0.3, 0.2, 0.14};
      }
      require(m.heisenberg_n >= 1, "mollify-rates: map must take values in H_n");
      std::vector<DifferentialForm> forms{contact_form(m.heisenberg_n)};
      std::vector<std::string> ids{"alpha"};
      if (*generic) {
        forms.push_back(detail::generic_one_form(2 * m.heisenberg_n + 1));
        ids.emplace_back("generic");
      }
      const DefectRates rates = contact_defect_rates(make_mollified_family(base, e, kernel_from_name(*kernel)), forms);
      std::string csv = "eps,defect,form_id\n";
      Json fits = Json::array();
      for (std::size_t f = 0; f < forms.size(); ++f) {
        for (std::size_t i = 0; i < rates.eps.size(); ++i)
          csv += fmt::format("{},{},{}\n", format_real(rates.eps[i]), format_real(rates.defects[f][i]), ids[f]);
        Json fj = detail::fit_json(rates.fits[f], rates.fit_valid[f]);
        fj["form_id"] = ids[f];
        fits.push_back(fj);
      }
      Artifacts r;
      r.summary = {{"map", *map}, {"fits", fits}};
      r.files.emplace_back("rates.csv", csv);
      return r;
    };
  }

  // holder-fit
  {
    auto* sub = app.add_subcommand("holder-fit", "Hoelder exponent of a gallery map");
    auto map = std::make_shared<std::string>();
    auto metric = std::make_shared<std::string>("euclidean");
    auto pairs = std::make_shared<std::size_t>(10000);
    auto seed = std::make_shared<std::uint64_t>(0);
    sub->add_option("--map", *map)->required();
    sub->add_option("--metric", *metric, "euclidean or koranyi")->capture_default_str();
    sub->add_option("--pairs", *pairs)->capture_default_str();
    sub->add_option("--seed", *seed)->required();
    handlers[sub->get_name()] = [=] {
      const HolderFit f = holder_fit(gallery_map(*map), metric_from_name(*metric), *pairs, *seed);
      Artifacts r;
      r.summary = {{"map", *map},         {"gamma", f.exponent},   {"C", f.constant}, {"metric", metric_name(f.metric)},
                   {"residual", f.residual}, {"defined", f.defined}, {"pairs", f.pairs}};
      return r;
    };
  }

  // gromov-region
  {
    auto* sub = app.add_subcommand("gromov-region", "predicate 2 gamma + theta (k - 1) - k > 0");
    auto k = std::make_shared<int>(1);
    auto gamma = std::make_shared<double>(1.0);
    auto theta = std::make_shared<double>(1.0);
    auto grid = std::make_shared<bool>(false);
    sub->add_option("--k", *k)->capture_default_str();
    sub->add_option("--gamma", *gamma)->capture_default_str();
    sub->add_option("--theta", *theta)->capture_default_str();
    sub->add_flag("--grid", *grid, "also tabulate k = 1..3, gamma = 0.55..1.0, theta = 0.1..1.0");
    handlers[sub->get_name()] = [=] {
      const GromovRegion g = gromov_region(*k, *gamma, *theta);
      Artifacts r;
      r.summary = {{"inside", g.inside}, {"value", g.value}};
      if (*grid) {
        std::string csv = "k,gamma,theta,inside,value\n";
        for (int kk = 1; kk <= 3; ++kk)
          for (int i = 11; i <= 20; ++i)
            for (int j = 1; j <= 10; ++j) {
              const double ga = i / 20.0, th = j / 10.0;
              const GromovRegion c = gromov_region(kk, ga, th);
              csv += fmt::format("{},{},{},{},{}\n", kk, format_real(ga), format_real(th), c.inside ? 1 : 0,
                                 format_real(c.value));
            }
        r.files.emplace_back("grid.csv", csv);
      }
      return r;
    };
  }

  // gallery-list
  {
    auto* sub = app.add_subcommand("gallery-list", "list the named test maps");
    handlers[sub->get_name()] = [] {
      Json list = Json::array();
      for (const auto& name : gallery_names()) {
        const ParametricMap m = gallery_map(name);
        Json tags = Json::object();
        for (const auto& [metric, exponent] : m.holder_tags) tags[metric] = exponent;
        list.push_back({{"name", m.name},
                        {"description", m.description},
                        {"domain_dim", m.domain_dim},
                        {"codomain_dim", m.map.codomain_dim()},
                        {"heisenberg_n", m.heisenberg_n},
                        {"horizontal", m.horizontal},
                        {"holder_tags", tags}});
      }
      Artifacts r;
      r.summary = {{"maps", list}};
      return r;
    };
  }

  auto report = [&err](const std::string& kind, const std::string& message, int code) {
    err << Json{{"error", kind}, {"message", message}}.dump() << "\n";
    return code;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);  // --help, --version
  } catch (const CLI::ParseError& e) {
    return report("invalid_config", e.what(), 2);
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  if (threads > 0) set_thread_cap(threads);
  const auto start = std::chrono::steady_clock::now();
  Artifacts result;
  try {
    result = handlers.at(name)();
  } catch (const InvalidArgument& e) {
    return report("invalid_argument", e.what(), 2);
  } catch (const DegenerateInput& e) {
    return report("degenerate_input", e.what(), 3);
  } catch (const std::exception& e) {
    return report("failure", e.what(), 1);
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  namespace fs = std::filesystem;
  const fs::path dir = out_dir.empty() ? fs::path("heislab-out") / name : fs::path(out_dir);
  try {
    fs::create_directories(dir);
    const std::string summary_text = result.summary.dump(2) + "\n";
    result.files.insert(result.files.begin(), {"result.json", summary_text});
    Json files = Json::array();
    for (const auto& [file, content] : result.files) {
      std::ofstream os(dir / file, std::ios::binary);
      os << content;
      if (!os) throw std::runtime_error("cannot write " + (dir / file).string());
      files.push_back({{"name", file}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
    }
    const Json manifest = {{"subcommand", name},
                           {"config", JsonConfig::echo(&app, true)},
                           {"versions",
                            {{"heislab", kVersion},
                             {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
                             {"boost", BOOST_LIB_VERSION},
                             {"fmt", FMT_VERSION},
                             {"compiler", __VERSION__}}},
                           {"threads", thread_cap()},
                           {"wall_time_seconds", wall},
                           {"files", files}};
    std::ofstream ms(dir / "manifest.json", std::ios::binary);
    ms << manifest.dump(2) << "\n";
    if (!ms) throw std::runtime_error("cannot write manifest");
    out << summary_text;
  } catch (const std::exception& e) {
    return report("io_error", e.what(), 4);
  }
  return 0;
}

}  // namespace heislab::cli

#endif  // HEISLAB_TOOLS_CLI_HPP
