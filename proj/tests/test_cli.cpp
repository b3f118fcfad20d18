#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cfm/cli.hpp"
#include "cfm/errors.hpp"

using namespace cfm;
using cli::Json;

namespace {
namespace fs = std::filesystem;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "cfm_cli");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  Run r;
  r.code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const auto dir = fs::temp_directory_path() / "cfm_cli_test";
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path;
}
}  // namespace

TEST_CASE("moment task") {
  const Json cfg = Json::parse(R"({"task": "moment", "measure": {"family": "stable", "p": 1, "d": 1}, "alpha": 0.5})");
  const Json rep = cli::run_task(cfg, {});
  CHECK(rep.at("task") == "moment");
  CHECK(rep.at("version") == cli::kVersion);
  CHECK(rep.at("config_hash").get<std::string>().size() == 16);
  const auto& row = rep.at("results").at(0);
  CHECK(std::fabs(row.at("value").get<double>() - std::numbers::sqrt2) < 1e-8);
  CHECK(row.at("formula") == "M13");
  CHECK(row.at("k") == 1);
  CHECK(row.contains("A"));
  CHECK(row.contains("S"));
  CHECK(row.contains("I"));

  const Json multi = Json::parse(
      R"({"measure": {"family": "gaussian", "t": 1, "d": 2}, "alpha": [0.5, 1.5], "quadrature": {"rel_tol": 1e-8}})");
  cli::RunOptions o;
  o.task = "moment";
  CHECK(cli::run_task(multi, o).at("results").size() == 2);
}

TEST_CASE("metric task") {
  const Json cfg = Json::parse(R"({"task": "metric", "kind": "F", "alpha": 0.5, "beta": 0.5, "k": 1,
    "A": {"family": "gaussian", "t": 1}, "B": {"family": "gaussian", "t": 2}})");
  const auto row = cli::run_task(cfg, {}).at("results").at(0);
  const double v = row.at("value").get<double>();
  CHECK(v > 0.0);
  CHECK(std::fabs(v - row.at("sup_component").get<double>() - row.at("integral_component").get<double>()) <= 1e-12 * v);
}

TEST_CASE("verify task") {
  const auto rows = cli::run_task(Json::parse(R"({"task": "verify"})"), {}).at("results");
  CHECK(rows.size() == 12);
  for (const auto& r : rows) CHECK_MESSAGE(r.at("pass").get<bool>(), r.at("check").get<std::string>());
}

TEST_CASE("composite measures") {
  const Json spec = Json::parse(R"({"family": "mixture", "weights": [0.25, 0.75],
    "components": [{"family": "point_mass", "atom": [1.0]}, {"family": "scaled", "c": 2,
    "measure": {"family": "linnik", "p": 1.5, "beta": 1}}]})");
  const CharFn phi = cli::measure_from_json(spec);
  CHECK(phi.dim() == 1);
  const std::vector<double> xi = {0.0};
  CHECK(std::abs(phi(xi) - 1.0) < 1e-15);
  CHECK_THROWS_AS(cli::measure_from_json(Json::parse(R"({"family": "nope"})")), ConfigError);
  CHECK_THROWS_AS(cli::measure_from_json(Json::parse(R"({"family": "gaussian", "t": "one"})")), ConfigError);
}

TEST_CASE("quadrature settings") {
  const auto q = cli::quadrature_from_json(Json::parse(R"({"quadrature": {"rel_tol": 1e-7, "policy": "serial"}})"), 1e-5);
  CHECK(q.rel_tol == 1e-5);
  CHECK(q.policy == ExecPolicy::Serial);
  CHECK_THROWS_AS(cli::quadrature_from_json(Json::parse(R"({"quadrature": {"policy": "gpu"}})"), std::nullopt),
                  ConfigError);
  CHECK(cli::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(cli::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("determinism and formats") {
  const auto path = write_config("moment.json", R"({"measure": {"family": "linnik", "p": 1.5, "beta": 2}, "alpha": 0.7})");
  const Run a = invoke({"moment", "--config", path.string()});
  const Run b = invoke({"moment", "--config", path.string()});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const Run csv = invoke({"moment", "--config", path.string(), "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("# version ", 0) == 0);
  CHECK(csv.out.find("\nmeasure,alpha,value,") != std::string::npos);

  const auto sample_cfg = write_config("sample.json", R"({"family": "stable", "p": 1.3, "n": 50})");
  const Run s1 = invoke({"sample", "--config", sample_cfg.string(), "--seed", "5", "--format", "csv"});
  const Run s2 = invoke({"sample", "--config", sample_cfg.string(), "--seed", "5", "--format", "csv"});
  const Run s3 = invoke({"sample", "--config", sample_cfg.string(), "--seed", "6", "--format", "csv"});
  CHECK(s1.out == s2.out);
  CHECK(s1.out != s3.out);

  // sample -> CSV -> empirical measure
  const auto csv_path = path.parent_path() / "drawn.csv";
  CHECK(invoke({"sample", "--config", sample_cfg.string(), "--seed", "5", "--format", "csv", "--out", csv_path.string()})
            .code == 0);
  const auto emp_cfg = write_config(
      "empirical.json", R"({"measure": {"family": "samples", "path": "drawn.csv"}, "alpha": 0.5, "shortcut": true})");
  const Run e = invoke({"moment", "--config", emp_cfg.string()});
  CHECK(e.code == 0);
  CHECK(Json::parse(e.out).at("results").at(0).at("formula") == "discrete-exact");
}

TEST_CASE("errors") {
  const auto even = write_config("even.json", R"({"measure": {"family": "gaussian", "t": 1}, "alpha": 2, "k": 3})");
  const Run r = invoke({"moment", "--config", even.string()});
  CHECK(r.code == 3);
  const Json obj = Json::parse(r.out);
  CHECK(obj.at("error").at("type") == "range");
  CHECK(obj.at("error").at("exit_code") == 3);
  CHECK(obj.at("error").at("message").get<std::string>().find("even integer") != std::string::npos);

  const auto bad = write_config("bad.json", "{ not json");
  const Run p = invoke({"moment", "--config", bad.string()});
  CHECK(p.code == 2);
  CHECK(Json::parse(p.out).at("error").at("type") == "config");

  const auto missing = write_config("missing.json", R"({"measure": {"family": "samples", "path": "absent.csv"}, "alpha": 0.5})");
  CHECK(invoke({"moment", "--config", missing.string()}).code == 2);

  const auto mismatch = write_config("mismatch.json", R"({"task": "metric"})");
  CHECK(invoke({"moment", "--config", mismatch.string()}).code == 2);

  const auto cauchy = write_config("cauchy.json", R"({"measure": {"family": "cauchy"}, "alpha": 1.5})");
  const Run dv = invoke({"moment", "--config", cauchy.string()});
  CHECK(dv.code == 4);
  CHECK(Json::parse(dv.out).at("error").at("type") == "divergence-suspected");

  CHECK(invoke({"moment"}).code != 0);
  CHECK(invoke({"frobnicate", "--config", even.string()}).code != 0);
}
