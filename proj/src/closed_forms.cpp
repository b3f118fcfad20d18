#include "cfm/closed_forms.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "cfm/errors.hpp"
#include "cfm/specfun.hpp"

namespace cfm {

namespace {

constexpr double kPi = std::numbers::pi;

void check_index(double p) {
  if (!(p > 0.0 && p <= 2.0)) throw RangeError("stable index p must lie in (0, 2]");
}

void check_dim(int d) {
  if (d < 1) throw RangeError("dimension must be positive");
}

}  // namespace

double ep_moment(double p, double alpha, int d) {
  check_index(p);
  check_dim(d);
  if (alpha < 0.0) throw RangeError("ep_moment: alpha must be nonnegative");
  if (alpha == 0.0) return 1.0;
  if (p == 2.0) return std::pow(2.0, alpha) * gamma((alpha + d) / 2.0) / gamma(d / 2.0);
  if (alpha >= p) throw MomentDivergence("ep_moment: moment of order >= p is infinite");
  return std::pow(2.0, alpha) * gamma(1.0 - alpha / p) * gamma((alpha + d) / 2.0) /
         (gamma(1.0 - alpha / 2.0) * gamma(d / 2.0));
}

double ep_moment_singularity(double p, double alpha, int d) {
  check_index(p);
  check_dim(d);
  if (!(p < 2.0) || !(alpha < p)) throw RangeError("ep_moment_singularity: requires alpha < p < 2");
  return std::pow(2.0, p) * gamma((p + d) / 2.0) / (gamma(1.0 - p / 2.0) * gamma(d / 2.0)) / (1.0 - alpha / p);
}

double stable_moment(double p, double t, double alpha, int d) {
  if (!(t > 0.0)) throw RangeError("stable_moment: t must be positive");
  return std::pow(t, alpha / p) * ep_moment(p, alpha, d);
}

double gaussian_moment(double t, double alpha, int d) { return stable_moment(2.0, t, alpha, d); }

double ep_density_series(double p, double v, int d, int terms) {
  check_index(p);
  check_dim(d);
  if (v < 0.0) throw RangeError("ep_density: norm must be nonnegative");
  if (terms < 2) throw RangeError("ep_density: at least two terms required");
  const double lead = 2.0 * std::pow(4.0 * kPi, -d / 2.0) / p;
  if (v == 0.0) return lead * gamma(static_cast<double>(d) / p) / gamma(d / 2.0);
  const double logx = 2.0 * std::log(v / 2.0);
  CompensatedSum sum;
  double largest = 0.0, last = 0.0, before_last = 0.0;
  for (int m = 0; m < terms; ++m) {
    const double a = (2.0 * m + d) / p;
    const double b = (2.0 * m + d) / 2.0;
    const double mag = std::exp(log_gamma(a) - log_gamma(m + 1.0) - log_gamma(b) + m * logx);
    const double term = (m % 2 == 0) ? mag : -mag;
    sum.add(term);
    largest = std::fmax(largest, mag);
    before_last = last;
    last = mag;
  }
  const double s = sum.value();
  if (!(last < before_last) || last > 1e-15 * largest || largest > 1e12 * std::fabs(s))
    throw SeriesDivergence("ep_density: series has not converged at |v| = " + std::to_string(v));
  return lead * s;
}

double ep_density(double p, double v, int d, int terms) {
  check_index(p);
  check_dim(d);
  if (v < 0.0) throw RangeError("ep_density: norm must be nonnegative");
  if (p == 2.0) return std::pow(4.0 * kPi, -d / 2.0) * std::exp(-v * v / 4.0);
  if (p == 1.0) return gamma((d + 1.0) / 2.0) * std::pow(kPi * (1.0 + v * v), -(d + 1.0) / 2.0);
  return ep_density_series(p, v, d, terms);
}

double bg_tail_constant(double p, int d) {
  check_dim(d);
  if (!(p > 0.0 && p < 2.0)) throw RangeError("bg_tail_constant: p must lie in (0, 2)");
  return p * std::pow(2.0, p - 1.0) / std::pow(kPi, d / 2.0 + 1.0) * std::sin(p * kPi / 2.0) *
         gamma((d + p) / 2.0) * gamma(p / 2.0);
}

double linnik_moment(double p, double beta, double alpha, int d) {
  if (!(beta > 0.0)) throw RangeError("linnik_moment: beta must be positive");
  return ep_moment(p, alpha, d) * std::exp(log_gamma(beta + alpha / p) - log_gamma(beta));
}

double schoenberg_moment(const DiscreteMeasure& nu, double p, double alpha, int d) {
  nu.validate();
  if (nu.dimension() != 1) throw RangeError("schoenberg_moment: mixing law must be one-dimensional");
  CompensatedSum mix;
  for (std::size_t j = 0; j < nu.size(); ++j) {
    const double t = nu.atoms[j][0];
    if (t < 0.0) throw RangeError("schoenberg_moment: mixing law must live on [0, inf)");
    if (t > 0.0) mix.add(nu.weights[j] * std::pow(t, alpha / p));
  }
  return ep_moment(p, alpha, d) * mix.value();
}

double mittag_leffler_moment(double delta, double alpha) { return ml_process_moment(delta, 1.0, alpha); }

double ml_process_moment(double delta, double t, double alpha) {
  if (!(delta > 0.0 && delta <= 1.0)) throw RangeError("Mittag-Leffler index must lie in (0, 1]");
  if (!(t > 0.0)) throw RangeError("Mittag-Leffler time must be positive");
  if (alpha < 0.0) throw RangeError("Mittag-Leffler order must be nonnegative");
  if (alpha >= delta) throw MomentDivergence("Mittag-Leffler moment of order >= delta is infinite");
  if (alpha == 0.0) return 1.0;
  return gamma(1.0 - alpha / delta) * std::exp(log_gamma(t + alpha / delta) - log_gamma(t)) / gamma(1.0 - alpha);
}

DiscreteMeasure quantile_grid(const std::function<double(double)>& quantile, int n) {
  if (n < 1) throw RangeError("quantile_grid: need at least one atom");
  DiscreteMeasure nu;
  for (int j = 0; j < n; ++j) {
    nu.atoms.push_back({quantile((j + 0.5) / n)});
    nu.weights.push_back(1.0 / n);
  }
  return nu;
}

DiscreteMeasure gamma_quantile_atoms(double shape, int n) {
  if (!(shape > 0.0)) throw RangeError("gamma_quantile_atoms: shape must be positive");
  return quantile_grid([shape](double u) { return boost::math::gamma_p_inv(shape, u); }, n);
}

}  // namespace cfm
