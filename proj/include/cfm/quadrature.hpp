#pragma once

#include <functional>
#include <span>
#include <vector>

namespace cfm {

/// Serial runs the reference loop; Parallel distributes independent panels with OpenMP.
/// Both write per-panel results by index and reduce in index order, so they agree bit for bit.
enum class ExecPolicy { Serial, Parallel };

namespace quad {

using RealFn = std::function<double(double)>;

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

struct Panel {
  double a = 0.0;
  double b = 0.0;
};

/// 21-point Gauss-Kronrod rule with the embedded 10-point Gauss error estimate.
Estimate gauss_kronrod21(const RealFn& f, double a, double b);

/// Globally adaptive bisection on [a, b] driven by the Kronrod error estimate.
AdaptiveResult integrate_adaptive(const RealFn& f, double a, double b, double abs_tol, double rel_tol,
                                  int max_intervals);

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b].
Rule gauss_legendre(int n, double a, double b);

/// Adaptive integration of f over every panel; results indexed like `panels`.
std::vector<AdaptiveResult> integrate_panels(const RealFn& f, std::span<const Panel> panels, double abs_tol,
                                             double rel_tol, int max_intervals, ExecPolicy policy);

std::vector<AdaptiveResult> integrate_panels_serial(const RealFn& f, std::span<const Panel> panels,
                                                    double abs_tol, double rel_tol, int max_intervals);

/// Evaluate g(i) for i in [0, n) into a vector.
std::vector<double> evaluate_indexed(const std::function<double(std::size_t)>& g, std::size_t n,
                                     ExecPolicy policy);

}  // namespace quad
}  // namespace cfm
