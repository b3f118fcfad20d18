#include "cfm/moment_engine.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cfm/errors.hpp"
#include "cfm/parallel.hpp"
#include "cfm/specfun.hpp"

namespace cfm {

namespace {

constexpr double kIntegerGuard = 1e-6;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

double project(Channel channel, cplx z) {
  switch (channel) {
    case Channel::Real:
      return z.real();
    case Channel::Imag:
      return z.imag();
    case Channel::Modulus:
      return std::abs(z);
    case Channel::RealModulus:
      return std::fabs(z.real());
  }
  return z.real();
}

double safe_constant_I(int k, double alpha) {
  try {
    return constant_I(k, alpha);
  } catch (const std::exception&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

void check_order(int k) {
  if (k < 1 || k > kMaxDifferenceOrder) throw RangeError("difference order k must lie in [1, 12]");
}

bool admissible(int k, double alpha, Formula f) {
  const bool integer = is_near_integer(alpha, kIntegerGuard);
  if (f == Formula::M12) return !integer && alpha < k;
  if (k % 2 == 0) return false;
  if (integer) return std::lround(alpha) == k;
  return alpha < k + 1;
}

}  // namespace

std::string to_string(Formula f) {
  switch (f) {
    case Formula::M12:
      return "M12";
    case Formula::M13:
      return "M13";
    case Formula::EvenLimit:
      return "even-limit";
    case Formula::AnalyticOracle:
      return "analytic-oracle";
    case Formula::DiscreteExact:
      return "discrete-exact";
  }
  return "M13";
}

KChoice select_k(double alpha, bool prefer_real) {
  if (!(alpha > 0.0)) throw RangeError("select_k: alpha must be positive");
  if (is_near_integer(alpha, kIntegerGuard)) {
    const long j = std::lround(alpha);
    if (j % 2 == 0) return {static_cast<int>(j - 1), Formula::EvenLimit};
    if (j > kMaxDifferenceOrder) throw RangeError("select_k: order exceeds the supported difference order");
    return {static_cast<int>(j), Formula::M13};
  }
  const int k = prefer_real ? 2 * static_cast<int>(std::floor(alpha / 2.0)) + 1 : static_cast<int>(std::floor(alpha)) + 1;
  if (k > kMaxDifferenceOrder) throw RangeError("select_k: order exceeds the supported difference order");
  return {k, prefer_real ? Formula::M13 : Formula::M12};
}

SphereRule sphere_rule(int d, int order) {
  if (order < 2) throw RangeError("sphere_rule: order must be at least 2");
  SphereRule rule;
  if (d == 1) {
    rule.directions = {{1.0}, {-1.0}};
    rule.weights = {1.0, 1.0};
    return rule;
  }
  if (d == 2) {
    const auto gl = quad::gauss_legendre(std::max(1, order / 2), 0.0, std::numbers::pi);
    for (int shift = 0; shift < 2; ++shift)
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double th = gl.nodes[i] + shift * std::numbers::pi;
        rule.directions.push_back({std::cos(th), std::sin(th)});
        rule.weights.push_back(gl.weights[i]);
      }
    return rule;
  }
  if (d == 3) {
    const auto gz = quad::gauss_legendre(std::max(2, order / 4), -1.0, 1.0);
    const auto ga = quad::gauss_legendre(std::max(1, order / 4), 0.0, std::numbers::pi);
    for (std::size_t i = 0; i < gz.nodes.size(); ++i) {
      const double z = gz.nodes[i];
      const double s = std::sqrt(std::fmax(0.0, 1.0 - z * z));
      for (int shift = 0; shift < 2; ++shift)
        for (std::size_t j = 0; j < ga.nodes.size(); ++j) {
          const double ph = ga.nodes[j] + shift * std::numbers::pi;
          rule.directions.push_back({s * std::cos(ph), s * std::sin(ph), z});
          rule.weights.push_back(gz.weights[i] * ga.weights[j]);
        }
    }
    return rule;
  }
  throw DomainError("sphere_rule: non-radial integration supports d <= 3");
}

DifferenceIntegral difference_integral(const CharFn& phi, const std::optional<CharFn>& psi, int k, double alpha,
                                       Channel channel, const QuadratureSpec& spec) {
  spec.validate();
  check_order(k);
  if (!(alpha > 0.0)) throw RangeError("difference integral: alpha must be positive");
  if (psi && psi->dim() != phi.dim()) throw RangeError("difference integral: dimension mismatch");
  const int d = phi.dim();

  std::vector<double> w(k + 1);
  for (int m = 1; m <= k; ++m) w[m] = difference_weight(k, m);
  const double weight_sum = (k % 2 == 0) ? -1.0 : 1.0;
  const auto lphi = phi.limit_at_infinity();
  const std::optional<cplx> lpsi = psi ? psi->limit_at_infinity() : std::optional<cplx>(1.0);
  std::optional<double> limit;
  if (lphi && lpsi) limit = project(channel, (*lphi - *lpsi) * weight_sum);
  const double amplitude = std::ldexp(1.0, k + 1);

  DifferenceIntegral out;
  out.radial = phi.is_radial() && (!psi || psi->is_radial());
  if (out.radial) {
    RadialIntegrand f;
    f.alpha = alpha;
    f.limit = limit;
    f.amplitude = amplitude;
    f.h = [&](double r) {
      CompensatedComplexSum s;
      for (int m = 1; m <= k; ++m) {
        cplx v = phi.radial_minus_one(m * r);
        if (psi) v -= psi->radial_minus_one(m * r);
        s.add(w[m] * v);
      }
      return project(channel, s.value());
    };
    f.magnitude = [&](double r) {
      double s = 0.0;
      for (int m = 1; m <= k; ++m) {
        cplx v = phi.radial_minus_one(m * r);
        if (psi) v -= psi->radial_minus_one(m * r);
        s += std::fabs(w[m]) * std::abs(v);
      }
      return s;
    };
    const RadialOutcome o = integrate_radial(f, spec);
    const double area = sphere_area(d);
    out.value = area * o.value;
    out.error = area * o.error;
    out.panels = o.intervals;
    out.origin_status = o.origin_status;
    out.origin_slope = o.origin_slope;
    out.far_radius = o.far_radius;
    out.far_part = area * o.far_part;
    out.tail_used = o.tail_used;
    out.origin_samples = o.origin_samples;
    return out;
  }

  if (d > 3) throw DomainError("non-radial characteristic functions are supported for d <= 3 only");
  const SphereRule rule = sphere_rule(d, spec.sphere_order);
  QuadratureSpec inner = spec;
  inner.policy = ExecPolicy::Serial;
  const auto outcomes = map_indexed<RadialOutcome>(
      rule.directions.size(),
      [&](std::size_t i) {
        const std::vector<double>& dir = rule.directions[i];
        RadialIntegrand f;
        f.alpha = alpha;
        f.limit = limit;
        f.amplitude = amplitude;
        f.h = [&](double r) {
          double pt[3];
          CompensatedComplexSum s;
          for (int m = 1; m <= k; ++m) {
            for (int c = 0; c < d; ++c) pt[c] = m * r * dir[c];
            const std::span<const double> xi(pt, d);
            cplx v = phi.minus_one(xi);
            if (psi) v -= psi->minus_one(xi);
            s.add(w[m] * v);
          }
          return project(channel, s.value());
        };
        f.magnitude = [&](double r) {
          double pt[3];
          double s = 0.0;
          for (int m = 1; m <= k; ++m) {
            for (int c = 0; c < d; ++c) pt[c] = m * r * dir[c];
            const std::span<const double> xi(pt, d);
            cplx v = phi.minus_one(xi);
            if (psi) v -= psi->minus_one(xi);
            s += std::fabs(w[m]) * std::abs(v);
          }
          return s;
        };
        return integrate_radial(f, inner);
      },
      spec.policy);

  CompensatedSum value, error, far;
  double total_weight = 0.0;
  out.origin_slope = std::numeric_limits<double>::infinity();
  std::size_t samples = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    value.add(rule.weights[i] * o.value);
    error.add(rule.weights[i] * o.error);
    far.add(rule.weights[i] * o.far_part);
    total_weight += rule.weights[i];
    out.panels += o.intervals;
    out.far_radius = std::fmax(out.far_radius, o.far_radius);
    out.tail_used = o.tail_used;
    if (o.origin_status == OriginStatus::Diverging) out.origin_status = OriginStatus::Diverging;
    if (o.origin_status == OriginStatus::Unresolved && out.origin_status == OriginStatus::Converged)
      out.origin_status = OriginStatus::Unresolved;
    if (std::isfinite(o.origin_slope)) out.origin_slope = std::fmin(out.origin_slope, o.origin_slope);
    samples = std::min(samples, o.origin_samples.size());
  }
  if (!std::isfinite(out.origin_slope)) out.origin_slope = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t b = 0; b < samples; ++b) {
    double avg = 0.0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) avg += rule.weights[i] * outcomes[i].origin_samples[b].second;
    out.origin_samples.emplace_back(outcomes.front().origin_samples[b].first, avg / total_weight);
  }
  out.value = value.value();
  out.error = error.value();
  out.far_part = far.value();
  return out;
}

double radial_difference_integral(const CharFn& phi, int k, double alpha, const QuadratureSpec& spec) {
  if (!phi.is_radial()) throw DomainError("radial_difference_integral requires a radial characteristic function");
  const auto r = difference_integral(phi, std::nullopt, k, alpha, Channel::Real, spec);
  if (r.origin_status != OriginStatus::Converged)
    throw DivergenceSuspected("radial difference integral does not converge at the origin");
  return r.value / sphere_area(phi.dim());
}

cplx fulldim_difference_integral(const CharFn& phi, int k, double alpha, const QuadratureSpec& spec) {
  QuadratureSpec s = spec;
  if (phi.is_radial()) {
    // Force the direction sum even for radial phi by hiding the profile.
    CharFn::Parts parts = phi.parts();
    parts.radial_minus_one = nullptr;
    const CharFn plain(std::move(parts));
    const auto re = difference_integral(plain, std::nullopt, k, alpha, Channel::Real, s);
    const auto im = difference_integral(plain, std::nullopt, k, alpha, Channel::Imag, s);
    if (re.origin_status != OriginStatus::Converged)
      throw DivergenceSuspected("difference integral does not converge at the origin");
    return {re.value, im.value};
  }
  const auto re = difference_integral(phi, std::nullopt, k, alpha, Channel::Real, s);
  const auto im = difference_integral(phi, std::nullopt, k, alpha, Channel::Imag, s);
  if (re.origin_status != OriginStatus::Converged)
    throw DivergenceSuspected("difference integral does not converge at the origin");
  return {re.value, im.value};
}

MomentResult absolute_moment(const CharFn& phi, double alpha, const QuadratureSpec& spec,
                             const MomentOptions& options) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw RangeError("absolute_moment: alpha must be positive");
  spec.validate();
  MomentResult res;
  if (options.allow_shortcut && phi.atoms()) {
    res.value = phi.atoms()->absolute_moment(alpha);
    res.formula = Formula::DiscreteExact;
    res.diagnostics.push_back("exact sum over " + std::to_string(phi.atoms()->size()) + " atoms");
    return res;
  }
  if (options.allow_shortcut) {
    if (const auto m = phi.analytic_moment(alpha)) {
      if (!std::isfinite(*m)) throw MomentDivergence("closed-form moment is infinite");
      res.value = *m;
      res.formula = Formula::AnalyticOracle;
      return res;
    }
  }

  KChoice choice;
  if (options.k) {
    check_order(*options.k);
    choice.k = *options.k;
    const bool integer = is_near_integer(alpha, kIntegerGuard);
    if (integer && std::lround(alpha) % 2 == 0)
      throw DomainError("absolute_moment: even integer orders require even_order_moment");
    choice.formula = (options.prefer_real && choice.k % 2 == 1) || integer ? Formula::M13 : Formula::M12;
    if (!admissible(choice.k, alpha, choice.formula))
      throw DomainError("absolute_moment: k = " + std::to_string(choice.k) + " is not admissible for alpha = " + fmt(alpha));
  } else {
    choice = select_k(alpha, options.prefer_real);
  }
  if (choice.formula == Formula::EvenLimit) {
    MomentResult even = even_order_moment(phi, static_cast<int>(std::lround(alpha)) / 2, spec);
    if (std::fabs(alpha - std::round(alpha)) > 0.0)
      even.diagnostics.push_back("order within the integer guard band; evaluated at " + fmt(std::round(alpha)));
    return even;
  }

  const int k = choice.k;
  const double A = constant_A(k, alpha, phi.dim());
  const auto re = difference_integral(phi, std::nullopt, k, alpha, Channel::Real, spec);
  if (re.origin_status == OriginStatus::Diverging)
    throw DivergenceSuspected("difference integral diverges at the origin (local slope " + fmt(re.origin_slope) +
                              " <= alpha = " + fmt(alpha) + ")");
  if (re.origin_status == OriginStatus::Unresolved)
    throw DivergenceSuspected("difference integral did not settle near the origin");
  res.formula = choice.formula;
  res.k_used = k;
  res.constant_A = A;
  res.sum_S = sum_S(k, alpha);
  res.constant_I = safe_constant_I(k, alpha);
  res.integral = re.value;
  res.value = A * re.value;
  res.error_estimate = std::fabs(A) * re.error;
  res.panels = re.panels;
  res.diagnostics.push_back(re.radial ? "radial reduction" : "direction sum over the unit sphere");
  res.diagnostics.push_back("tail " + to_string(re.tail_used) + ", far radius " + fmt(re.far_radius));
  res.diagnostics.push_back("origin slope " + fmt(re.origin_slope));
  if (choice.formula == Formula::M12 && !re.radial && !phi.is_real()) {
    const auto im = difference_integral(phi, std::nullopt, k, alpha, Channel::Imag, spec);
    res.diagnostics.push_back("imaginary residual " + fmt(A * im.value));
    res.panels += im.panels;
  }
  if (res.value < -std::fmax(10.0 * res.error_estimate, 1e-12))
    throw DivergenceSuspected("difference integral gives a negative moment (" + fmt(res.value) +
                              "); the law is not in P_alpha");
  return res;
}

MomentResult even_order_moment(const CharFn& phi, int n, const QuadratureSpec& spec) {
  if (n < 1) throw RangeError("even_order_moment: n must be positive");
  std::vector<double> m(7);
  double err = 0.0;
  int panels = 0;
  int k = 0;
  for (int j = 0; j < 7; ++j) {
    const double eps = 0.1 * std::ldexp(1.0, -j);
    const MomentResult r = absolute_moment(phi, 2.0 * n - eps, spec);
    m[j] = r.value;
    err = std::fmax(err, r.error_estimate);
    panels += r.panels;
    k = r.k_used;
  }
  auto richardson = [&](int j) {
    const double a = 2.0 * m[j - 1] - m[j - 2];
    const double b = 2.0 * m[j] - m[j - 1];
    return (4.0 * b - a) / 3.0;
  };
  const double best = richardson(6);
  const double prev = richardson(5);
  const double spread = std::fabs(best - prev);
  if (spread > 1e-3 * std::fabs(best) + 1e-12)
    throw ExtrapolationFailure("even-order limit did not settle (spread " + fmt(spread) + ")");
  MomentResult res;
  res.value = best;
  res.error_estimate = spread + 5.0 * err;
  res.formula = Formula::EvenLimit;
  res.k_used = k;
  res.panels = panels;
  res.constant_I = std::numeric_limits<double>::quiet_NaN();
  res.diagnostics.push_back("Richardson over eps = 0.1 * 2^-j, j = 4..6");
  return res;
}

}  // namespace cfm
