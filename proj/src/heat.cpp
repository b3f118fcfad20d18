#include "cfm/heat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>

#include "cfm/closed_forms.hpp"
#include "cfm/errors.hpp"
#include "cfm/metrics.hpp"
#include "cfm/parallel.hpp"
#include "cfm/quadrature.hpp"
#include "cfm/specfun.hpp"

namespace cfm {

namespace {

constexpr double kTruncation = 1e-12;
constexpr int kCoarseNodes = 241;

void check_p(double p) {
  if (!(p > 0.0 && p <= 2.0)) throw RangeError("diffusion exponent p must lie in (0, 2]");
}

// Smallest R with (1/pi) int_R^inf 2 xi^sigma exp(-t xi^p) dxi below the truncation target.
double truncation_radius(double p, double t, int sigma) {
  const double a = (sigma + 1.0) / p;
  auto remainder = [&](double r) {
    return 2.0 / std::numbers::pi * std::pow(t, -a) / p * boost::math::tgamma(a, t * std::pow(r, p));
  };
  double hi = std::pow(1.0 / t, 1.0 / p);
  while (remainder(hi) > kTruncation) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (remainder(mid) > kTruncation ? lo : hi) = mid;
  }
  return hi;
}

cplx i_pow(int sigma) {
  static constexpr cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[sigma % 4];
}

double atom_spread(const CharFn& phi) {
  double s = 0.0;
  if (const auto& mu = phi.atoms())
    for (const auto& a : mu->atoms) s = std::max(s, std::fabs(a[0]));
  return s;
}

}  // namespace

CharFn evolve(const CharFn& initial, double p, double t) {
  check_p(p);
  if (!(t >= 0.0)) throw RangeError("evolve: t must be non-negative");
  if (t == 0.0) return initial;
  return make_product(initial, make_stable(p, t, initial.dim()));
}

HeatSolution solve_heat(const CharFn& initial, double p, double t) {
  return {p, t, initial, evolve(initial, p, t)};
}

MomentCheck solution_moment_check(const CharFn& initial, double p, double t, double alpha, const QuadratureSpec& spec,
                                  double initial_alpha) {
  check_p(p);
  if (!(alpha > 0.0)) throw RangeError("solution_moment_check: alpha must be positive");
  if (initial_alpha == 0.0) initial_alpha = alpha;
  if (p < 2.0 && alpha >= p) throw RangeError("solution_moment_check: for p < 2 the solution moment needs alpha < p");
  if (initial_alpha != alpha && !(p < 2.0 && initial_alpha >= p))
    throw RangeError("solution_moment_check: a separate initial order applies only when it is >= p < 2");
  MomentOptions shortcut;
  shortcut.allow_shortcut = true;
  MomentCheck out;
  out.moment = absolute_moment(evolve(initial, p, t), alpha, spec);
  out.initial_moment = absolute_moment(initial, initial_alpha, spec, shortcut).value;
  out.bound_scale = std::pow(1.0 + t, alpha / p) * std::pow(out.initial_moment, alpha / initial_alpha);
  out.ratio = out.bound_scale > 0.0 ? out.moment.value / out.bound_scale : std::numeric_limits<double>::infinity();
  out.ok = std::isfinite(out.ratio);
  return out;
}

double heat_constant_C(int sigma, double p, int d) {
  return 2.0 * gamma((d + sigma) / p) / (p * std::pow(4.0 * std::numbers::pi, d / 2.0) * gamma(d / 2.0));
}

double heat_constant_A(int sigma, double p, double alpha, int d) {
  const double q = alpha + d + sigma;
  return std::pow(2.0 * std::numbers::pi, -d) * std::pow(q / (std::numbers::e * p), q / p);
}

cplx inverse_derivative(const CharFn& phiA, const std::optional<CharFn>& phiB, double p, double t, int sigma,
                        double x) {
  check_p(p);
  if (phiA.dim() != 1 || (phiB && phiB->dim() != 1)) throw DomainError("inversion is implemented for d = 1 only");
  if (!(t > 0.0)) throw RangeError("inversion needs t > 0");
  if (sigma < 0) throw RangeError("sigma must be non-negative");
  const double R = truncation_radius(p, t, sigma);
  auto diff = [&](double xi) {
    const double pt[1] = {xi};
    if (phiB) return phiA.minus_one(pt) - phiB->minus_one(pt);
    return phiA.evaluate(pt);
  };
  // Pair xi with -xi so each piece is a smooth function on [0, R].
  auto integrand = [&](double xi) {
    const cplx w = std::pow(xi, sigma) * std::exp(-t * std::pow(xi, p));
    const cplx plus = std::polar(1.0, x * xi) * diff(xi);
    const cplx minus = std::polar(1.0, -x * xi) * diff(-xi) * (sigma % 2 ? -1.0 : 1.0);
    return w * (plus + minus);
  };
  const double freq = std::fabs(x) + 1.0 + atom_spread(phiA) + (phiB ? atom_spread(*phiB) : 0.0);
  const int n = std::clamp(static_cast<int>(std::ceil(R * freq / 2.0)), 4, 8192);
  CompensatedSum re, im;
  for (int i = 0; i < n; ++i) {
    const double a = R * i / n, b = R * (i + 1) / n;
    re.add(quad::integrate_adaptive([&](double xi) { return integrand(xi).real(); }, a, b, 1e-15, 1e-13, 200).value);
    im.add(quad::integrate_adaptive([&](double xi) { return integrand(xi).imag(); }, a, b, 1e-15, 1e-13, 200).value);
  }
  return i_pow(sigma) * cplx(re.value(), im.value()) / (2.0 * std::numbers::pi);
}

double derivative_sup_distance(const CharFn& phiA, const CharFn& phiB, double p, double t, int sigma,
                               const std::vector<double>& x_grid, ExecPolicy policy) {
  const auto v = quad::evaluate_indexed(
      [&](std::size_t i) { return std::abs(inverse_derivative(phiA, phiB, p, t, sigma, x_grid[i])); }, x_grid.size(),
      policy);
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

double derivative_sup(const CharFn& initial, double p, double t, int sigma, const std::vector<double>& x_grid,
                      ExecPolicy policy) {
  const auto v = quad::evaluate_indexed(
      [&](std::size_t i) { return std::abs(inverse_derivative(initial, std::nullopt, p, t, sigma, x_grid[i])); },
      x_grid.size(), policy);
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

double derivative_sup_distance_auto(const CharFn& phiA, const CharFn& phiB, double p, double t, int sigma,
                                    ExecPolicy policy) {
  const double half = 12.0 * std::pow(t, 1.0 / p) + atom_spread(phiA) + atom_spread(phiB) + 1.0;
  std::vector<double> grid(kCoarseNodes);
  for (int i = 0; i < kCoarseNodes; ++i) grid[i] = -half + 2.0 * half * i / (kCoarseNodes - 1);
  auto value = [&](double x) { return std::abs(inverse_derivative(phiA, phiB, p, t, sigma, x)); };
  const auto v = quad::evaluate_indexed([&](std::size_t i) { return value(grid[i]); }, grid.size(), policy);
  const auto best = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  if (v[best] == 0.0) return 0.0;
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  const auto [xm, neg] = boost::math::tools::brent_find_minima([&](double x) { return -value(x); }, lo, hi, 40);
  (void)xm;
  return std::max(v[best], -neg);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw RangeError("loglog_slope: need at least two paired points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= x.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

DecayReport refined_rate_check(const CharFn& phiA, const CharFn& phiB, double p, double alpha, int sigma,
                               const std::vector<double>& times, const QuadratureSpec& spec) {
  check_p(p);
  if (!(alpha > 0.0 && alpha < 1.0)) throw RangeError("refined_rate_check: alpha must lie in (0, 1)");
  if (phiA.dim() != 1 || phiB.dim() != 1) throw DomainError("refined_rate_check: d = 1 only");
  DecayReport rep;
  rep.sigma = sigma;
  rep.times = times;
  rep.rho = rho_alpha(phiA, phiB, alpha, spec).value;
  rep.expected_rate = -(alpha + 1.0 + sigma) / p;
  const double A = heat_constant_A(sigma, p, alpha, 1);
  for (double t : times) {
    const double m = derivative_sup_distance_auto(phiA, phiB, p, t, sigma, spec.policy);
    const double b = A * std::pow(t, rep.expected_rate) * rep.rho;
    rep.measured_sup.push_back(m);
    rep.bound.push_back(b);
    if (m > b * (1.0 + 1e-9) + 1e-13) rep.bound_holds = false;
  }
  rep.fitted_rate = times.size() >= 2 ? loglog_slope(times, rep.measured_sup) : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

SmallTimeReport small_time_check(const CharFn& initial, double p, double t, double alpha, const QuadratureSpec& spec) {
  check_p(p);
  if (!(alpha > 0.0 && alpha < std::min(1.0, p)))
    throw RangeError("small_time_check: alpha must lie in (0, min(1, p))");
  if (!(t >= 0.0)) throw RangeError("small_time_check: t must be non-negative");
  const int d = initial.dim();
  SupProblem sup;
  sup.dimension = d;
  sup.radial = initial.is_radial();
  sup.ratio = [&](std::span<const double> xi) { return std::abs(initial.evaluate(xi)); };
  SmallTimeReport rep;
  grid_sup(sup, spec, &rep.sup_initial);
  rep.sup_initial = std::min(rep.sup_initial, 1.0);
  rep.rho = t == 0.0 ? 0.0 : rho_alpha(evolve(initial, p, t), initial, alpha, spec).value;
  rep.bound = 2.0 * std::pow(std::numbers::pi, d / 2.0) * gamma(1.0 - alpha / p) / (alpha * gamma(d / 2.0)) *
              std::pow(t, alpha / p) * rep.sup_initial;
  return rep;
}

}  // namespace cfm
