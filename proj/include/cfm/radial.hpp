#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfm/quadrature.hpp"

namespace cfm {

enum class TailMode { Auto, AnalyticBound, OscillatoryIbp };

std::string to_string(TailMode mode);
TailMode tail_mode_from_string(const std::string& name);

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  int max_panels = 400;  ///< subdivision budget for each radial block
  TailMode tail_mode = TailMode::Auto;
  int sphere_order = 64;
  double r_split = 1.0;
  double max_radius = 16384.0;  ///< cutoff cap on the oscillatory far field
  ExecPolicy policy = ExecPolicy::Parallel;

  void validate() const;
};

/// Integrand r^{-1-alpha} h(r) on (0, inf).
struct RadialIntegrand {
  std::function<double(double)> h;
  double alpha = 0.5;
  std::optional<double> limit;  ///< h(r) -> limit as r -> inf; empty for oscillatory h
  double amplitude = 2.0;       ///< a bound on |h|
  /// Sum of the magnitudes of the terms that cancel inside h(r); sets the rounding floor near 0.
  std::function<double(double)> magnitude;
};

enum class OriginStatus { Converged, Diverging, Unresolved };

struct RadialOutcome {
  double value = 0.0;
  double error = 0.0;
  double origin_part = 0.0;
  double far_part = 0.0;
  double origin_remainder = 0.0;
  double origin_slope = 0.0;
  OriginStatus origin_status = OriginStatus::Unresolved;
  double far_radius = 0.0;
  TailMode tail_used = TailMode::AnalyticBound;
  int blocks = 0;
  int intervals = 0;
  /// (r, |h(r)|) at the lower end of each near-origin block, in decreasing r.
  std::vector<std::pair<double, double>> origin_samples;
};

RadialOutcome integrate_radial(const RadialIntegrand& f, const QuadratureSpec& spec);

}  // namespace cfm
