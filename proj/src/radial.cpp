#include "cfm/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cfm/errors.hpp"
#include "cfm/specfun.hpp"

namespace cfm {

namespace {

constexpr int kBatch = 4;
constexpr double kOriginFloor = -690.0;  // log of the smallest radius probed
constexpr double kFarCeiling = 690.0;
constexpr double kSlopeGap = 1e-7;
// a run of sub-alpha block slopes this long, below this depth, is reported as divergence
constexpr int kDivergenceRun = 12;
constexpr int kDivergenceDepth = 14;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double tolerance(const QuadratureSpec& spec, double scale) {
  return std::max(spec.abs_tol, spec.rel_tol * std::fabs(scale));
}

struct BlockSweep {
  std::vector<quad::AdaptiveResult> results;
  std::vector<quad::Panel> panels;
};

BlockSweep sweep(const quad::RealFn& g, double start, double step, int count, const QuadratureSpec& spec) {
  BlockSweep s;
  for (int i = 0; i < count; ++i) {
    const double a = start + step * i;
    const double b = a + step;
    s.panels.push_back(step > 0 ? quad::Panel{a, b} : quad::Panel{b, a});
  }
  s.results = quad::integrate_panels(g, s.panels, spec.abs_tol / 8.0, spec.rel_tol / 4.0, spec.max_panels,
                                     spec.policy);
  return s;
}

struct OriginResult {
  double value = 0.0;
  double error = 0.0;
  double remainder = 0.0;
  double slope = std::nan("");
  OriginStatus status = OriginStatus::Unresolved;
  int blocks = 0;
  int intervals = 0;
  std::vector<std::pair<double, double>> samples;
};

// Integrates over u = log r in unit blocks descending from log(r_split). Below the last block the
// integrand is continued as a power law fitted to the two smallest samples; the descent stops once
// that extrapolation has settled or once rounding in h dominates the fitted slope.
OriginResult integrate_origin(const RadialIntegrand& f, const QuadratureSpec& spec) {
  const double alpha = f.alpha;
  const quad::RealFn g = [&](double u) {
    const double hv = f.h(std::exp(u));
    return hv == 0.0 ? 0.0 : hv * std::exp(-alpha * u);
  };
  auto noise_of = [&](double r, double hv) {
    const double scale = f.magnitude ? f.magnitude(r) : std::fabs(hv);
    if (scale == 0.0) return 0.0;
    return hv == 0.0 ? std::numeric_limits<double>::infinity() : 8.0 * kEps * scale / std::fabs(hv);
  };
  OriginResult out;
  CompensatedSum partial, err;
  const double u_top = std::log(spec.r_split);
  double prev_u = u_top;
  double prev_h = f.h(spec.r_split);
  double prev_noise = noise_of(spec.r_split, prev_h);
  out.samples.emplace_back(spec.r_split, std::fabs(prev_h));

  double prev_estimate = std::nan("");
  double prev_uncertainty = std::numeric_limits<double>::infinity();
  double best_estimate = std::nan(""), best_uncertainty = std::numeric_limits<double>::infinity();
  double best_remainder = 0.0;
  int low_slope_run = 0;
  int j = 0;
  auto finish = [&](OriginStatus status, double value, double error, double remainder) {
    out.status = status;
    out.value = value;
    out.error = error;
    out.remainder = remainder;
    return out;
  };
  while (true) {
    const BlockSweep s = sweep(g, u_top - j, -1.0, kBatch, spec);
    for (int b = 0; b < kBatch; ++b, ++j) {
      const auto& res = s.results[b];
      partial.add(res.value);
      err.add(res.error);
      out.intervals += res.intervals;
      out.blocks = j + 1;
      const double u_lo = u_top - (j + 1);
      const double r_lo = std::exp(u_lo);
      const double hv = f.h(r_lo);
      const double noise = noise_of(r_lo, hv);
      if (noise < 1e-3) out.samples.emplace_back(r_lo, std::fabs(hv));
      double slope = std::nan("");
      if (hv != 0.0 && prev_h != 0.0)
        slope = (std::log(std::fabs(prev_h)) - std::log(std::fabs(hv))) / (prev_u - u_lo);
      const double slope_noise = noise + prev_noise;
      prev_h = hv;
      prev_u = u_lo;
      prev_noise = noise;

      const double p = partial.value();
      const double tol = tolerance(spec, p);
      const double edge = std::fabs(hv) * std::exp(-alpha * u_lo);
      const bool trusted = std::isfinite(slope) && slope_noise < 1e-3;
      if (trusted) {
        out.slope = slope;
        low_slope_run = (slope - alpha <= kSlopeGap) ? low_slope_run + 1 : 0;
      }

      if (std::fabs(res.value) <= tol / 8.0 && edge <= tol / 8.0) {
        const double rem = (trusted && slope - alpha > kSlopeGap) ? hv * std::exp(-alpha * u_lo) / (slope - alpha) : 0.0;
        return finish(OriginStatus::Converged, p + rem, err.value() + std::fabs(rem) * 1e-3, rem);
      }
      if (trusted && slope - alpha > kSlopeGap) {
        const double rem = hv * std::exp(-alpha * u_lo) / (slope - alpha);
        const double estimate = p + rem;
        const double rounding = std::fabs(rem) * slope_noise / (slope - alpha);
        const double uncertainty =
            std::isfinite(prev_estimate) ? std::fabs(estimate - prev_estimate) + rounding : std::numeric_limits<double>::infinity();
        if (uncertainty < best_uncertainty) {
          best_uncertainty = uncertainty;
          best_estimate = estimate;
          best_remainder = rem;
        }
        if (uncertainty <= 0.1 * tol && prev_uncertainty <= 0.1 * tol)
          return finish(OriginStatus::Converged, estimate, err.value() + uncertainty, rem);
        prev_estimate = estimate;
        prev_uncertainty = uncertainty;
      } else {
        prev_estimate = std::nan("");
        prev_uncertainty = std::numeric_limits<double>::infinity();
      }
      if (j >= kDivergenceDepth && low_slope_run >= kDivergenceRun)
        return finish(OriginStatus::Diverging, p, err.value(), 0.0);
      if (noise > 1e-2 || u_lo < kOriginFloor) {
        if (std::isfinite(best_estimate))
          return finish(OriginStatus::Converged, best_estimate, err.value() + best_uncertainty, best_remainder);
        return finish(OriginStatus::Unresolved, p, err.value() + edge / std::max(alpha, 1e-3), 0.0);
      }
    }
  }
}

struct FarResult {
  double value = 0.0;
  double error = 0.0;
  double radius = 0.0;
  int blocks = 0;
  int intervals = 0;
  bool converged = false;
};

FarResult integrate_far_settling(const RadialIntegrand& f, double limit, double scale,
                                 const QuadratureSpec& spec) {
  const double alpha = f.alpha;
  const quad::RealFn g = [&](double u) {
    const double dev = f.h(std::exp(u)) - limit;
    return dev == 0.0 ? 0.0 : dev * std::exp(-alpha * u);
  };
  FarResult out;
  const double u_split = std::log(spec.r_split);
  CompensatedSum partial, err;
  partial.add(limit * std::exp(-alpha * u_split) / alpha);
  std::vector<double> blocks, history;
  int j = 0;
  while (true) {
    const BlockSweep s = sweep(g, u_split + j, 1.0, kBatch, spec);
    for (int b = 0; b < kBatch; ++b, ++j) {
      const auto& res = s.results[b];
      partial.add(res.value);
      err.add(res.error);
      out.intervals += res.intervals;
      blocks.push_back(res.value);
      const double u_hi = u_split + j + 1;
      out.radius = std::exp(u_hi);
      out.blocks = j + 1;
      const double p = partial.value();
      const double tol = tolerance(spec, p + scale);
      const double dev = std::fabs(f.h(out.radius) - limit) * std::exp(-alpha * u_hi) / alpha;
      if (std::fabs(res.value) <= tol / 8.0 && dev <= tol / 8.0) {
        out.value = p;
        out.error = err.value() + dev;
        out.converged = true;
        return out;
      }
      const std::size_t n = blocks.size();
      double geometric = std::nan("");
      if (n >= 3) {
        const double r1 = blocks[n - 1] / blocks[n - 2];
        const double r2 = blocks[n - 2] / blocks[n - 3];
        if (r1 > 0.0 && r1 < 0.95 && r2 > 0.0 && r2 < 0.95 && std::fabs(r1 - r2) < 0.05)
          geometric = blocks[n - 1] * r1 / (1.0 - r1);
      }
      if (std::isfinite(geometric)) {
        history.push_back(p + geometric);
        const std::size_t m = history.size();
        if (m >= 3 && std::fabs(history[m - 1] - history[m - 2]) <= 0.1 * tol &&
            std::fabs(history[m - 2] - history[m - 3]) <= 0.1 * tol) {
          out.value = history.back();
          out.error = err.value() + std::fabs(history[m - 1] - history[m - 2]);
          out.converged = true;
          return out;
        }
      } else {
        history.clear();
      }
      if (u_hi > kFarCeiling) {
        out.value = p;
        out.error = err.value() + dev;
        return out;
      }
    }
  }
}

// Truncated integral averaged over cutoffs in [R/2, R] (a linear taper), which cancels the leading
// integration-by-parts boundary term, plus the mean of h beyond R/2 integrated exactly.
FarResult integrate_far_oscillatory(const RadialIntegrand& f, double scale, const QuadratureSpec& spec) {
  const double alpha = f.alpha;
  const double tol = tolerance(spec, scale);
  double R = std::pow(8.0 * f.amplitude / tol, 1.0 / (2.0 + alpha));
  R = std::clamp(R, 64.0, spec.max_radius);
  R = std::max(R, 4.0 * spec.r_split);
  const double half = 0.5 * R;
  const double width = half;

  std::vector<quad::Panel> body, window;
  const int n_body = static_cast<int>(std::ceil(half - spec.r_split));
  for (int i = 0; i < n_body; ++i) {
    const double a = spec.r_split + (half - spec.r_split) * i / n_body;
    const double b = spec.r_split + (half - spec.r_split) * (i + 1) / n_body;
    body.push_back({a, b});
  }
  const int n_win = static_cast<int>(std::ceil(width));
  for (int i = 0; i < n_win; ++i) window.push_back({half + width * i / n_win, half + width * (i + 1) / n_win});

  const quad::RealFn plain = [&](double r) { return f.h(r) * std::pow(r, -1.0 - alpha); };
  const quad::RealFn tapered = [&](double r) { return f.h(r) * std::pow(r, -1.0 - alpha) * (R - r) / width; };
  const quad::RealFn hann = [&](double r) {
    const double s = std::sin(std::numbers::pi * (r - half) / width);
    return f.h(r) * s * s;
  };
  const double ptol = spec.abs_tol / 8.0;
  const auto rb = quad::integrate_panels(plain, body, ptol, spec.rel_tol / 4.0, spec.max_panels, spec.policy);
  const auto rt = quad::integrate_panels(tapered, window, ptol, spec.rel_tol / 4.0, spec.max_panels, spec.policy);
  const auto rh = quad::integrate_panels(hann, window, ptol, spec.rel_tol / 4.0, spec.max_panels, spec.policy);

  CompensatedSum value, err, mean;
  FarResult out;
  for (const auto& r : rb) {
    value.add(r.value);
    err.add(r.error);
    out.intervals += r.intervals;
  }
  for (const auto& r : rt) {
    value.add(r.value);
    err.add(r.error);
    out.intervals += r.intervals;
  }
  for (const auto& r : rh) {
    mean.add(r.value);
    out.intervals += r.intervals;
  }
  const double h_bar = mean.value() / (0.5 * width);
  const double ramp_part = (alpha == 1.0)
                               ? (2.0 / R) * (std::log(2.0) - half * (1.0 / half - 1.0 / R))
                               : (2.0 / R) * ((std::pow(R, 1.0 - alpha) - std::pow(half, 1.0 - alpha)) / (1.0 - alpha) -
                                              half * (std::pow(half, -alpha) - std::pow(R, -alpha)) / alpha);
  const double tail_weight = ramp_part + std::pow(R, -alpha) / alpha;
  value.add(h_bar * tail_weight);
  out.value = value.value();
  out.error = err.value() + 10.0 * f.amplitude * std::pow(R, -2.0 - alpha);
  out.radius = R;
  out.blocks = static_cast<int>(body.size() + window.size());
  out.converged = true;
  return out;
}

}  // namespace

std::string to_string(TailMode mode) {
  switch (mode) {
    case TailMode::Auto:
      return "auto";
    case TailMode::AnalyticBound:
      return "analytic-bound";
    case TailMode::OscillatoryIbp:
      return "oscillatory-ibp";
  }
  return "auto";
}

TailMode tail_mode_from_string(const std::string& name) {
  if (name == "auto") return TailMode::Auto;
  if (name == "analytic-bound") return TailMode::AnalyticBound;
  if (name == "oscillatory-ibp") return TailMode::OscillatoryIbp;
  throw ConfigError("unknown tail mode: " + name);
}

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw RangeError("quadrature tolerances must be positive");
  if (max_panels < 16) throw RangeError("max_panels must be at least 16");
  if (sphere_order < 2) throw RangeError("sphere_order must be at least 2");
  if (!(r_split > 0.0)) throw RangeError("r_split must be positive");
  if (!(max_radius >= 64.0)) throw RangeError("max_radius must be at least 64");
}

RadialOutcome integrate_radial(const RadialIntegrand& f, const QuadratureSpec& spec) {
  spec.validate();
  if (!(f.alpha > 0.0)) throw RangeError("radial integral: alpha must be positive");
  RadialOutcome out;
  OriginResult origin = integrate_origin(f, spec);
  out.origin_part = origin.value;
  out.origin_remainder = origin.remainder;
  out.origin_slope = origin.slope;
  out.origin_status = origin.status;
  out.origin_samples = std::move(origin.samples);
  out.blocks = origin.blocks;
  out.intervals = origin.intervals;

  TailMode mode = spec.tail_mode;
  if (mode == TailMode::Auto) mode = f.limit ? TailMode::AnalyticBound : TailMode::OscillatoryIbp;
  if (mode == TailMode::AnalyticBound && !f.limit)
    throw DomainError("analytic-bound tail requires an integrand with a limit at infinity");
  out.tail_used = mode;
  const FarResult far = (mode == TailMode::AnalyticBound)
                            ? integrate_far_settling(f, *f.limit, origin.value, spec)
                            : integrate_far_oscillatory(f, origin.value, spec);
  out.far_part = far.value;
  out.far_radius = far.radius;
  out.blocks += far.blocks;
  out.intervals += far.intervals;
  out.value = origin.value + far.value;
  out.error = origin.error + far.error;
  return out;
}

}  // namespace cfm
