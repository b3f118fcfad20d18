#include "cfm/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "cfm/closed_forms.hpp"
#include "cfm/convolution.hpp"
#include "cfm/errors.hpp"
#include "cfm/heat.hpp"
#include "cfm/mc_oracle.hpp"
#include "cfm/metrics.hpp"
#include "cfm/moment_engine.hpp"
#include "cfm/sample_io.hpp"
#include "cfm/specfun.hpp"

namespace cfm::cli {

const char* const kVersion = CFM_VERSION;

namespace {

const char* const kTasks[] = {"moment", "metric", "membership", "heat", "convolve", "verify", "sample"};

// Typed access to a JSON object with the dotted path kept for error messages.
class Node {
 public:
  Node(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }
  Node at(const char* key) const {
    if (!has(key)) throw ConfigError(path_ + "." + key + ": required field missing");
    return {j_.at(key), path_ + "." + key};
  }
  double num(const char* key) const { return at(key).as_num(); }
  double num(const char* key, double fallback) const { return has(key) ? num(key) : fallback; }
  int integer(const char* key) const {
    const double v = num(key);
    if (v != std::floor(v)) throw ConfigError(path_ + "." + key + ": expected an integer");
    return static_cast<int>(v);
  }
  int integer(const char* key, int fallback) const { return has(key) ? integer(key) : fallback; }
  std::string str(const char* key) const {
    const Node n = at(key);
    if (!n.j_.is_string()) throw ConfigError(n.path_ + ": expected a string");
    return n.j_.get<std::string>();
  }
  std::string str(const char* key, const std::string& fallback) const { return has(key) ? str(key) : fallback; }
  bool flag(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_boolean()) throw ConfigError(path_ + "." + key + ": expected true or false");
    return j_.at(key).get<bool>();
  }
  double as_num() const {
    if (!j_.is_number()) throw ConfigError(path_ + ": expected a number");
    return j_.get<double>();
  }
  std::vector<double> nums(const char* key) const {
    const Node n = at(key);
    if (n.j_.is_number()) return {n.as_num()};
    if (!n.j_.is_array()) throw ConfigError(n.path_ + ": expected a number or an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < n.j_.size(); ++i) out.push_back(n.item(i).as_num());
    return out;
  }
  std::size_t size() const { return j_.size(); }
  bool is_array() const { return j_.is_array(); }
  Node item(std::size_t i) const { return {j_.at(i), path_ + "[" + std::to_string(i) + "]"}; }
  const Json& json() const { return j_; }
  const std::string& path() const { return path_; }

 private:
  const Json& j_;
  std::string path_;
};

std::vector<std::vector<double>> points(const Node& n) {
  if (!n.is_array()) throw ConfigError(n.path() + ": expected an array of points");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const Node row = n.item(i);
    if (row.json().is_number()) {
      out.push_back({row.as_num()});
      continue;
    }
    if (!row.is_array()) throw ConfigError(row.path() + ": expected a point");
    std::vector<double> p;
    for (std::size_t c = 0; c < row.size(); ++c) p.push_back(row.item(c).as_num());
    out.push_back(std::move(p));
  }
  return out;
}

CharFn build_measure(const Node& n, const std::string& base) {
  const std::string family = n.str("family");
  const int d = n.integer("d", 1);
  if (family == "gaussian") return make_gaussian(n.num("t", 1.0), d);
  if (family == "stable") return make_stable(n.num("p"), n.num("t", 1.0), d);
  if (family == "cauchy") return make_stable(1.0, n.num("t", 1.0), d);
  if (family == "linnik") return make_linnik(n.num("p"), n.num("beta", 1.0), d);
  if (family == "mittag_leffler") return make_mittag_leffler(n.num("delta"), n.num("t", 1.0), d);
  if (family == "delta") return make_constant_one(d);
  if (family == "point_mass") return make_point_mass(n.nums("atom"));
  if (family == "discrete") {
    DiscreteMeasure mu;
    mu.atoms = points(n.at("atoms"));
    mu.weights = n.nums("weights");
    return make_discrete(mu);
  }
  if (family == "empirical") return make_empirical(points(n.at("points")));
  if (family == "samples") {
    std::filesystem::path path = n.str("path");
    if (path.is_relative()) path = std::filesystem::path(base) / path;
    if (!std::filesystem::exists(path)) throw ConfigError(n.path() + ".path: sample file not found: " + path.string());
    return make_empirical(read_samples_csv_file(path.string()));
  }
  if (family == "pathological") return make_discrete(pathological_measure(n.num("alpha"), n.integer("K"), d));
  if (family == "schoenberg") {
    DiscreteMeasure nu;
    for (double t : n.nums("times")) nu.atoms.push_back({t});
    nu.weights = n.nums("weights");
    return make_schoenberg(nu, n.num("p"), d);
  }
  if (family == "scaled") return make_scaled(build_measure(n.at("measure"), base), n.num("c"));
  if (family == "product") {
    const Node f = n.at("factors");
    if (!f.is_array() || f.size() == 0) throw ConfigError(f.path() + ": expected a nonempty array of measures");
    CharFn out = build_measure(f.item(0), base);
    for (std::size_t i = 1; i < f.size(); ++i) out = make_product(out, build_measure(f.item(i), base));
    return out;
  }
  if (family == "mixture") {
    const Node c = n.at("components");
    if (!c.is_array()) throw ConfigError(c.path() + ": expected an array of measures");
    std::vector<CharFn> parts;
    for (std::size_t i = 0; i < c.size(); ++i) parts.push_back(build_measure(c.item(i), base));
    return make_mixture(n.nums("weights"), parts);
  }
  throw ConfigError(n.path() + ".family: unknown family '" + family + "'");
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json strings(const std::vector<std::string>& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

struct Context {
  Node cfg;
  RunOptions opts;
  QuadratureSpec spec;

  CharFn measure(const char* key) const { return build_measure(cfg.at(key), opts.config_dir); }
  std::uint64_t seed() const {
    if (opts.seed) return *opts.seed;
    return cfg.has("seed") ? static_cast<std::uint64_t>(cfg.at("seed").json().get<std::uint64_t>()) : 0;
  }
};

Json moment_row(const CharFn& phi, double alpha, const MomentResult& r) {
  Json row;
  row["measure"] = phi.name();
  row["alpha"] = alpha;
  row["value"] = number(r.value);
  row["error_estimate"] = number(r.error_estimate);
  row["formula"] = to_string(r.formula);
  row["k"] = r.k_used;
  row["A"] = number(r.constant_A);
  row["S"] = number(r.sum_S);
  row["I"] = number(r.constant_I);
  row["integral"] = number(r.integral);
  row["panels"] = r.panels;
  if (const auto ref = phi.analytic_moment(alpha)) row["closed_form"] = number(*ref);
  row["diagnostics"] = strings(r.diagnostics);
  return row;
}

Json task_moment(const Context& c) {
  const CharFn phi = c.measure("measure");
  MomentOptions o;
  if (c.cfg.has("k")) o.k = c.cfg.integer("k");
  o.prefer_real = c.cfg.flag("prefer_real", true);
  o.allow_shortcut = c.cfg.flag("shortcut", false);
  Json rows = Json::array();
  for (double alpha : c.cfg.nums("alpha")) {
    if (!(alpha > 0.0)) throw RangeError("alpha must be positive");
    if (o.k && is_near_integer(alpha, 1e-6) && std::lround(alpha) % 2 == 0)
      throw RangeError("alpha is an even integer: excluded from the difference formulas, use the even-order limit");
    rows.push_back(moment_row(phi, alpha, absolute_moment(phi, alpha, c.spec, o)));
  }
  return rows;
}

Json metric_row(const std::string& kind, const MetricResult& m) {
  Json row;
  row["kind"] = kind;
  row["value"] = number(m.value);
  row["sup_component"] = number(m.sup_component);
  row["integral_component"] = number(m.integral_component);
  row["integral_error"] = number(m.integral_error);
  row["argmax_radius"] = number(m.grid_report.argmax_radius);
  return row;
}

Json task_metric(const Context& c) {
  const CharFn a = c.measure("A"), b = c.measure("B");
  const std::string kind = c.cfg.str("kind");
  MetricResult m;
  if (kind == "d_inf") {
    m = d_inf(a, b, c.spec);
  } else if (kind == "d_beta") {
    m = d_beta(a, b, c.cfg.num("beta"), c.spec);
  } else if (kind == "rho") {
    m = rho_alpha(a, b, c.cfg.num("alpha"), c.spec);
  } else if (kind == "seminorm") {
    m = seminorm_alpha_k(a, b, c.cfg.num("alpha"), c.cfg.integer("k"), c.spec);
  } else if (kind == "real_seminorm") {
    m = real_seminorm_alpha_k(a, b, c.cfg.num("alpha"), c.cfg.integer("k"), c.spec);
  } else {
    const CompositeKind ck = composite_kind_from_string(kind);
    const double beta = (ck == CompositeKind::F || ck == CompositeKind::H) ? c.cfg.num("beta") : 0.0;
    m = composite_metric(ck, a, b, c.cfg.num("alpha"), beta, c.cfg.integer("k"), c.spec);
  }
  return Json::array({metric_row(kind, m)});
}

Json task_membership(const Context& c) {
  const CharFn phi = c.measure("measure");
  Json rows = Json::array();
  for (double alpha : c.cfg.nums("alpha")) {
    const int k = c.cfg.integer("k", select_k(alpha, false).k);
    const MembershipReport r = membership(phi, alpha, k, c.spec);
    Json row;
    row["measure"] = phi.name();
    row["alpha"] = alpha;
    row["k"] = k;
    row["classification"] = to_string(r.classification);
    row["integral_value"] = number(r.integral_value);
    row["slope"] = number(r.slope);
    row["tail"] = number(r.tail);
    row["implied_moment"] = number(r.implied_moment);
    row["notes"] = strings(r.notes);
    rows.push_back(row);
  }
  return rows;
}

Json task_heat(const Context& c) {
  const CharFn init = c.measure("measure");
  const double p = c.cfg.num("p", 2.0);
  const std::string check = c.cfg.str("check", "moment");
  Json rows = Json::array();
  if (check == "moment") {
    for (double t : c.cfg.nums("t")) {
      const double alpha = c.cfg.num("alpha");
      const MomentCheck m = solution_moment_check(init, p, t, alpha, c.spec, c.cfg.num("initial_alpha", 0.0));
      Json row = moment_row(evolve(init, p, t), alpha, m.moment);
      row["t"] = t;
      row["initial_moment"] = number(m.initial_moment);
      row["bound_scale"] = number(m.bound_scale);
      row["ratio"] = number(m.ratio);
      rows.push_back(row);
    }
  } else if (check == "small_time") {
    for (double t : c.cfg.nums("t")) {
      const SmallTimeReport s = small_time_check(init, p, t, c.cfg.num("alpha"), c.spec);
      rows.push_back({{"t", t}, {"rho", number(s.rho)}, {"bound", number(s.bound)}, {"sup_initial", number(s.sup_initial)}});
    }
  } else if (check == "rate") {
    const DecayReport r =
        refined_rate_check(init, c.measure("B"), p, c.cfg.num("alpha"), c.cfg.integer("sigma", 0), c.cfg.nums("times"), c.spec);
    for (std::size_t i = 0; i < r.times.size(); ++i)
      rows.push_back({{"t", r.times[i]},
                      {"measured_sup", number(r.measured_sup[i])},
                      {"bound", number(r.bound[i])},
                      {"rho", number(r.rho)},
                      {"fitted_rate", number(r.fitted_rate)},
                      {"expected_rate", number(r.expected_rate)}});
  } else if (check == "sup") {
    const int sigma = c.cfg.integer("sigma", 0);
    const std::optional<CharFn> other = c.cfg.has("B") ? std::optional<CharFn>(c.measure("B")) : std::nullopt;
    for (double t : c.cfg.nums("t")) {
      const double s = other ? derivative_sup_distance_auto(init, *other, p, t, sigma, c.spec.policy)
                             : derivative_sup_distance_auto(init, make_constant_one(1), p, t, sigma, c.spec.policy);
      Json row{{"t", t}, {"sigma", sigma}, {"measured_sup", number(s)}};
      if (!other) row["note"] = "distance to the fundamental solution";
      row["C_sigma_bound"] = number(heat_constant_C(sigma, p, 1) * std::pow(t, -(1.0 + sigma) / p) *
                                    d_inf(init, other ? *other : make_constant_one(1), c.spec).value);
      rows.push_back(row);
    }
  } else {
    throw ConfigError("config.check: expected moment, small_time, rate or sup");
  }
  return rows;
}

Json task_convolve(const Context& c) {
  const CharFn a = c.measure("A"), b = c.measure("B");
  Json rows = Json::array();
  if (c.cfg.has("gamma")) {
    const double g = c.cfg.num("gamma");
    rows.push_back(moment_row(make_product(a, b), g, convolution_moment(a, b, g, c.spec)));
  }
  if (c.cfg.has("alpha") && c.cfg.has("beta")) {
    const ConvolutionBoundReport r = convolution_bound_report(a, b, c.cfg.num("alpha"), c.cfg.num("beta"), c.spec);
    rows.push_back({{"gamma", r.gamma}, {"lhs", number(r.lhs)}, {"rhs_core", number(r.rhs_core)}, {"ratio", number(r.ratio)}});
  }
  if (rows.empty()) throw ConfigError("config: convolve needs gamma, or alpha and beta");
  return rows;
}

Json task_sample(const Context& c) {
  const std::string family = c.cfg.str("family");
  const auto n = static_cast<std::size_t>(c.cfg.integer("n"));
  const std::uint64_t seed = c.seed();
  SampleSet s;
  if (family == "gaussian") s = sample_gaussian(c.cfg.num("t", 1.0), c.cfg.integer("d", 1), n, seed);
  else if (family == "cauchy") s = sample_isotropic_cauchy(c.cfg.integer("d", 1), n, seed);
  else if (family == "stable") s = sample_sym_stable_1d(c.cfg.num("p"), n, seed);
  else if (family == "linnik") s = sample_linnik_1d(c.cfg.num("p"), c.cfg.num("beta", 1.0), n, seed);
  else throw ConfigError("config.family: expected gaussian, cauchy, stable or linnik");
  Json rows = Json::array();
  for (const auto& pt : s.points) {
    Json row;
    for (std::size_t i = 0; i < pt.size(); ++i) row["x" + std::to_string(i)] = pt[i];
    rows.push_back(row);
  }
  return rows;
}

Json check_row(const std::string& name, double value, double reference, double tol, bool relative) {
  const double err = relative ? std::fabs(value / reference - 1.0) : std::fabs(value - reference);
  return {{"check", name}, {"value", number(value)}, {"reference", number(reference)}, {"tolerance", tol},
          {"pass", err <= tol}};
}

Json task_verify(const Context& c) {
  Json rows = Json::array();
  const QuadratureSpec& q = c.spec;
  rows.push_back(check_row("I(1,1)", constant_I(1, 1.0), -std::numbers::pi, 1e-10, false));
  rows.push_back(check_row("I(3,3)", constant_I(3, 3.0), std::numbers::pi, 1e-10, false));
  rows.push_back(check_row("cauchy half moment", absolute_moment(make_stable(1, 1, 1), 0.5, q).value, std::numbers::sqrt2, 1e-6, true));
  rows.push_back(check_row("gaussian d=2 order 1.5", absolute_moment(make_gaussian(1, 2), 1.5, q).value, gaussian_moment(1, 1.5, 2), 1e-6, true));
  rows.push_back(check_row("linnik(1.5,2) order 0.7", absolute_moment(make_linnik(1.5, 2, 1), 0.7, q).value, linnik_moment(1.5, 2, 0.7), 1e-6, true));
  rows.push_back(check_row("even limit order 2", even_order_moment(make_gaussian(1, 1), 1, q).value, 2.0, 1e-4, true));
  const CharFn g = make_gaussian(1, 1), s = make_stable(1.5, 1, 1), one = make_constant_one(1);
  rows.push_back(check_row("rho equals first seminorm", rho_alpha(g, s, 0.5, q).value, seminorm_alpha_k(g, s, 0.5, 1, q).value, 1e-12, false));
  const double xi[1] = {0.7};
  rows.push_back(check_row("leibniz k=3", std::abs(leibniz_difference(g, s, xi, 3) - iterated_difference(make_product(g, s), xi, 3)), 0.0, 1e-13, false));
  rows.push_back(check_row("semigroup", std::abs(evolve(evolve(s, 1.5, 0.3), 1.5, 0.9).evaluate(xi) - evolve(s, 1.5, 1.2).evaluate(xi)), 0.0, 1e-14, false));
  rows.push_back(check_row("heat sup sharpness", derivative_sup(one, 2, 1, 0, {0.0}, q.policy), heat_constant_C(0, 2, 1), 1e-9, true));
  rows.push_back(check_row("rho equality case", rho_alpha(g, one, 0.5, q).value, 2.0 * gamma(0.75) / 0.5, 1e-6, true));
  const McEstimate mc = mc_moment(sample_gaussian(1, 1, 100000, c.seed(), q.policy), 1.0);
  Json row = check_row("gaussian mc order 1", mc.estimate, 2.0 / std::sqrt(std::numbers::pi), 3.0 * mc.std_error, false);
  rows.push_back(row);
  return rows;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  std::string s;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "; " : "") + (v[i].is_string() ? v[i].get<std::string>() : v[i].dump());
  } else {
    s = v.is_string() ? v.get<std::string>() : v.dump();
  }
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const nlohmann::json::exception*>(&e))
    return 2;
  if (dynamic_cast<const std::logic_error*>(&e)) return 3;
  if (dynamic_cast<const std::runtime_error*>(&e)) return 4;
  return 1;
}

std::string error_type(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return "json";
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const RangeError*>(&e)) return "range";
  if (dynamic_cast<const DivergenceSuspected*>(&e)) return "divergence-suspected";
  if (dynamic_cast<const MomentDivergence*>(&e)) return "moment-divergence";
  if (dynamic_cast<const QuadratureFailure*>(&e)) return "quadrature-failure";
  if (dynamic_cast<const SeriesDivergence*>(&e)) return "series-divergence";
  if (dynamic_cast<const ExtrapolationFailure*>(&e)) return "extrapolation-failure";
  return "internal";
}

}  // namespace

CharFn measure_from_json(const Json& spec, const std::string& base_dir) {
  return build_measure(Node(spec, "measure"), base_dir);
}

QuadratureSpec quadrature_from_json(const Json& config, std::optional<double> tol) {
  QuadratureSpec q;
  const Node root(config, "config");
  if (root.has("quadrature")) {
    const Node n = root.at("quadrature");
    q.rel_tol = n.num("rel_tol", q.rel_tol);
    q.abs_tol = n.num("abs_tol", q.abs_tol);
    q.max_panels = n.integer("max_panels", q.max_panels);
    q.sphere_order = n.integer("sphere_order", q.sphere_order);
    q.r_split = n.num("r_split", q.r_split);
    q.max_radius = n.num("max_radius", q.max_radius);
    if (n.has("tail_mode")) q.tail_mode = tail_mode_from_string(n.str("tail_mode"));
    if (n.has("policy")) {
      const std::string p = n.str("policy");
      if (p != "serial" && p != "parallel") throw ConfigError("config.quadrature.policy: expected serial or parallel");
      q.policy = p == "serial" ? ExecPolicy::Serial : ExecPolicy::Parallel;
    }
  }
  if (tol) q.rel_tol = *tol;
  q.validate();
  return q;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Json run_task(const Json& config, const RunOptions& options) {
  if (!config.is_object()) throw ConfigError("config: expected a JSON object");
  std::string task = options.task;
  if (config.contains("task")) {
    const std::string named = Node(config, "config").str("task");
    if (!task.empty() && named != task) throw ConfigError("config.task: '" + named + "' does not match subcommand '" + task + "'");
    task = named;
  }
  Context ctx{Node(config, "config"), options, quadrature_from_json(config, options.tol)};
  Json effective = config;
  effective["task"] = task;
  if (options.seed) effective["seed"] = *options.seed;
  if (options.tol) effective["tol"] = *options.tol;
  Json report;
  report["version"] = kVersion;
  report["config_hash"] = hex(fnv1a(effective.dump()));
  report["task"] = task;
  if (task == "moment") report["results"] = task_moment(ctx);
  else if (task == "metric") report["results"] = task_metric(ctx);
  else if (task == "membership") report["results"] = task_membership(ctx);
  else if (task == "heat") report["results"] = task_heat(ctx);
  else if (task == "convolve") report["results"] = task_convolve(ctx);
  else if (task == "verify") report["results"] = task_verify(ctx);
  else if (task == "sample") report["results"] = task_sample(ctx);
  else throw ConfigError("config.task: unknown task '" + task + "'");
  return report;
}

std::string render_csv(const Json& report) {
  std::ostringstream os;
  os << "# version " << report.at("version").get<std::string>() << "\n";
  os << "# config_hash " << report.at("config_hash").get<std::string>() << "\n";
  os << "# task " << report.at("task").get<std::string>() << "\n";
  std::vector<std::string> columns;
  for (const auto& row : report.at("results"))
    for (const auto& [key, value] : row.items())
      if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const auto& row : report.at("results")) {
    for (std::size_t i = 0; i < columns.size(); ++i)
      os << (i ? "," : "") << (row.contains(columns[i]) ? csv_cell(row.at(columns[i])) : "");
    os << "\n";
  }
  return os.str();
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Absolute moments and Fourier-based metrics from characteristic functions"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1, 1);
  std::string config_path, out_path, format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  for (const char* name : kTasks) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " task");
    sub->add_option("--config", config_path, "task configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "report path (default: standard output)");
    sub->add_option("--format", format, "report format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed, "random seed for sampling tasks");
    sub->add_option("--tol", tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  RunOptions opts;
  opts.task = app.get_subcommands().front()->get_name();
  opts.format = format;
  opts.seed = seed;
  opts.tol = tol;
  opts.config_dir = std::filesystem::absolute(config_path).parent_path().string();
  try {
    std::ifstream in(config_path);
    Json config;
    try {
      config = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(config_path + ": " + e.what());
    }
    const Json report = run_task(config, opts);
    const std::string text = format == "csv" ? render_csv(report) : report.dump(2) + "\n";
    if (out_path.empty()) {
      out << text;
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw ConfigError("--out: cannot write " + out_path);
      f << text;
    }
    return 0;
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    Json obj;
    obj["error"] = {{"type", error_type(e)}, {"message", e.what()}, {"exit_code", code}};
    out << obj.dump(2) << "\n";
    err << "error: " << e.what() << "\n";
    return code;
  }
}

}  // namespace cfm::cli
