#pragma once

#include <vector>

#include "cfm/charfn.hpp"
#include "cfm/moment_engine.hpp"

namespace cfm {

/// Solution of the fractional heat equation with initial law mu, on the Fourier side.
struct HeatSolution {
  double p = 2.0;
  double t = 0.0;
  CharFn initial;
  CharFn solution;
};

/// exp(-t |xi|^p) phi(xi); t = 0 returns phi itself.
CharFn evolve(const CharFn& initial, double p, double t);
HeatSolution solve_heat(const CharFn& initial, double p, double t);

struct MomentCheck {
  MomentResult moment;
  double initial_moment = 0.0;
  double bound_scale = 0.0;  ///< (1+t)^{alpha/p} M_mu(alpha), or its beta-branch analogue
  double ratio = 0.0;        ///< moment / bound_scale; +inf when the bound degenerates to 0
  bool ok = false;           ///< ratio finite
};

/// Moment of the evolved law at order alpha against the growth bound. For p < 2 and alpha >= p the
/// initial moment is taken at order initial_alpha (>= p) and the solution moment at alpha < p.
MomentCheck solution_moment_check(const CharFn& initial, double p, double t, double alpha,
                                  const QuadratureSpec& spec = {}, double initial_alpha = 0.0);

/// C_sigma = 2 Gamma((d+|sigma|)/p) / (p (4 pi)^{d/2} Gamma(d/2)).
double heat_constant_C(int sigma, double p, int d);
/// A_sigma = (2 pi)^{-d} ((alpha+d+|sigma|)/(e p))^{(alpha+d+|sigma|)/p}.
double heat_constant_A(int sigma, double p, double alpha, int d);

/// d^sigma (f - g)(x, t) in d = 1 by Fourier inversion; phiB may be empty (g = 0).
cplx inverse_derivative(const CharFn& phiA, const std::optional<CharFn>& phiB, double p, double t, int sigma, double x);

/// max over x_grid of |d^sigma (f - g)(x, t)|, d = 1.
double derivative_sup_distance(const CharFn& phiA, const CharFn& phiB, double p, double t, int sigma,
                               const std::vector<double>& x_grid, ExecPolicy policy = ExecPolicy::Parallel);
/// max over x_grid of |d^sigma f(x, t)|, d = 1.
double derivative_sup(const CharFn& initial, double p, double t, int sigma, const std::vector<double>& x_grid,
                      ExecPolicy policy = ExecPolicy::Parallel);
/// Supremum over the line: a coarse grid scaled with t^{1/p} and a local refinement around the argmax.
double derivative_sup_distance_auto(const CharFn& phiA, const CharFn& phiB, double p, double t, int sigma,
                                    ExecPolicy policy = ExecPolicy::Parallel);

struct DecayReport {
  int sigma = 0;
  std::vector<double> times;
  std::vector<double> measured_sup;
  std::vector<double> bound;
  double rho = 0.0;
  double fitted_rate = 0.0;
  double expected_rate = 0.0;
  bool bound_holds = true;
};

/// Sup distance of the two solutions at each time, the A_sigma bound and the fitted log-log decay rate.
DecayReport refined_rate_check(const CharFn& phiA, const CharFn& phiB, double p, double alpha, int sigma,
                               const std::vector<double>& times, const QuadratureSpec& spec = {});

struct SmallTimeReport {
  double rho = 0.0;
  double bound = 0.0;
  double sup_initial = 0.0;  ///< sup |phi| on the metric grid
};

SmallTimeReport small_time_check(const CharFn& initial, double p, double t, double alpha,
                                 const QuadratureSpec& spec = {});

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cfm
