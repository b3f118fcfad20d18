#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "cfm/charfn.hpp"
#include "cfm/radial.hpp"

namespace cfm::cli {

using Json = nlohmann::ordered_json;

extern const char* const kVersion;

struct RunOptions {
  std::string task;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string config_dir = ".";  ///< base for relative sample-file paths
};

/// Build a characteristic function from a measure description such as
/// {"family": "stable", "p": 1, "t": 1, "d": 2} or {"family": "product", "factors": [...]}.
CharFn measure_from_json(const Json& spec, const std::string& base_dir = ".");

/// Quadrature settings from the optional "quadrature" object, with --tol applied last.
QuadratureSpec quadrature_from_json(const Json& config, std::optional<double> tol);

/// 64-bit FNV-1a of a string.
std::uint64_t fnv1a(const std::string& text);

/// Run one task and return its report: version, config hash, task and result rows.
Json run_task(const Json& config, const RunOptions& options);

/// Render a report as CSV (header comments, one header row, one line per result row).
std::string render_csv(const Json& report);

/// Entry point shared by the executable and the tests; returns the process exit status.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace cfm::cli
