#include "cfm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "cfm/errors.hpp"
#include "cfm/specfun.hpp"

namespace cfm {

namespace {

constexpr int kRadii = 96;
constexpr double kRadiusMin = 1e-6;
constexpr double kRadiusMax = 1e6;
constexpr int kRefine = 32;
constexpr double kSlopeMargin = 0.05;

std::vector<std::vector<double>> sup_directions(int d, bool radial, int order) {
  if (radial) {
    std::vector<double> e(d, 0.0);
    e[0] = 1.0;
    return {e};
  }
  if (d == 1) return {{1.0}, {-1.0}};
  std::vector<std::vector<double>> dirs;
  if (d == 2) {
    for (int i = 0; i < order; ++i) {
      const double th = 2.0 * std::numbers::pi * i / order;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
    return dirs;
  }
  if (d == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < order; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / order;
      const double s = std::sqrt(1.0 - z * z);
      dirs.push_back({s * std::cos(golden * i), s * std::sin(golden * i), z});
    }
    return dirs;
  }
  throw DomainError("grid supremum over non-radial functions supports d <= 3");
}

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 2.0))
    throw RangeError("beta must lie in (0, 2); the seminorm only admits constants at beta >= 2");
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

MetricResult integral_metric(const CharFn& phi, const CharFn& psi, double alpha, int k, Channel channel,
                             const QuadratureSpec& spec) {
  const auto r = difference_integral(phi, psi, k, alpha, channel, spec);
  if (r.origin_status != OriginStatus::Converged)
    throw DivergenceSuspected("seminorm integral does not converge at the origin (slope " + fmt(r.origin_slope) + ")");
  MetricResult m;
  m.integral_component = std::fmax(r.value, 0.0);
  m.integral_error = r.error;
  m.value = m.integral_component;
  return m;
}

double least_squares_slope(const std::vector<std::pair<double, double>>& samples, std::size_t count) {
  std::vector<std::pair<double, double>> pts;
  for (auto it = samples.rbegin(); it != samples.rend() && pts.size() < count; ++it)
    if (it->second > 0.0) pts.emplace_back(std::log(it->first), std::log(it->second));
  if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= pts.size();
  my /= pts.size();
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxy / sxx;
}

}  // namespace

std::string to_string(Classification c) {
  return c == Classification::Finite ? "finite" : "divergence-suspected";
}

GridReport grid_sup(const SupProblem& problem, const QuadratureSpec& spec, double* value) {
  const auto dirs = sup_directions(problem.dimension, problem.radial, spec.sphere_order);
  const std::size_t nd = dirs.size();
  std::vector<double> radii(kRadii);
  const double step = std::log(kRadiusMax / kRadiusMin) / (kRadii - 1);
  for (int i = 0; i < kRadii; ++i) radii[i] = kRadiusMin * std::exp(step * i);
  auto at = [&](double r, const std::vector<double>& dir) {
    double pt[3];
    std::vector<double> big;
    double* x = pt;
    if (dir.size() > 3) {
      big.resize(dir.size());
      x = big.data();
    }
    for (std::size_t c = 0; c < dir.size(); ++c) x[c] = r * dir[c];
    return problem.ratio(std::span<const double>(x, dir.size()));
  };
  const auto coarse = quad::evaluate_indexed(
      [&](std::size_t idx) { return at(radii[idx / nd], dirs[idx % nd]); }, radii.size() * nd, spec.policy);
  std::size_t best = 0;
  for (std::size_t i = 1; i < coarse.size(); ++i)
    if (coarse[i] > coarse[best]) best = i;
  GridReport rep;
  rep.radial_nodes = kRadii;
  rep.angular_nodes = static_cast<int>(nd);
  rep.refinement_nodes = kRefine;
  rep.coarse_value = coarse[best];
  const std::size_t ri = best / nd;
  const auto& dir = dirs[best % nd];
  const double lo = radii[ri == 0 ? 0 : ri - 1];
  const double hi = radii[std::min<std::size_t>(ri + 1, radii.size() - 1)];
  double top = coarse[best];
  double arg = radii[ri];
  const auto fine = quad::evaluate_indexed(
      [&](std::size_t i) { return at(lo * std::pow(hi / lo, static_cast<double>(i) / (kRefine - 1)), dir); }, kRefine,
      spec.policy);
  for (int i = 0; i < kRefine; ++i)
    if (fine[i] > top) {
      top = fine[i];
      arg = lo * std::pow(hi / lo, static_cast<double>(i) / (kRefine - 1));
    }
  rep.argmax_radius = arg;
  rep.argmax_direction = dir;
  *value = top;
  return rep;
}

MetricResult d_inf(const CharFn& phi, const CharFn& psi, const QuadratureSpec& spec) {
  if (phi.dim() != psi.dim()) throw RangeError("d_inf: dimension mismatch");
  SupProblem p;
  p.dimension = phi.dim();
  p.radial = phi.is_radial() && psi.is_radial();
  p.ratio = [&](std::span<const double> xi) { return std::abs(phi.minus_one(xi) - psi.minus_one(xi)); };
  MetricResult m;
  m.grid_report = grid_sup(p, spec, &m.value);
  m.sup_component = m.value;
  return m;
}

MetricResult d_beta(const CharFn& phi, const CharFn& psi, double beta, const QuadratureSpec& spec) {
  check_beta(beta);
  if (phi.dim() != psi.dim()) throw RangeError("d_beta: dimension mismatch");
  SupProblem p;
  p.dimension = phi.dim();
  p.radial = phi.is_radial() && psi.is_radial();
  p.ratio = [&](std::span<const double> xi) {
    double r2 = 0.0;
    for (double v : xi) r2 += v * v;
    return std::abs(phi.minus_one(xi) - psi.minus_one(xi)) / std::pow(r2, beta / 2.0);
  };
  MetricResult m;
  m.grid_report = grid_sup(p, spec, &m.value);
  m.sup_component = m.value;
  return m;
}

MetricResult difference_sup(const CharFn& phi, int k, double beta, const QuadratureSpec& spec) {
  check_beta(beta);
  SupProblem p;
  p.dimension = phi.dim();
  p.radial = phi.is_radial();
  p.ratio = [&](std::span<const double> xi) {
    double r2 = 0.0;
    for (double v : xi) r2 += v * v;
    return std::abs(iterated_difference(phi, xi, k)) / std::pow(r2, beta / 2.0);
  };
  MetricResult m;
  m.grid_report = grid_sup(p, spec, &m.value);
  m.sup_component = m.value;
  return m;
}

MetricResult kbeta_seminorm(const CharFn& phi, double beta, const QuadratureSpec& spec) {
  return difference_sup(phi, 1, beta, spec);
}

MetricResult seminorm_alpha_k(const CharFn& phi, const CharFn& psi, double alpha, int k, const QuadratureSpec& spec) {
  return integral_metric(phi, psi, alpha, k, Channel::Modulus, spec);
}

MetricResult real_seminorm_alpha_k(const CharFn& phi, const CharFn& psi, double alpha, int k,
                                   const QuadratureSpec& spec) {
  return integral_metric(phi, psi, alpha, k, Channel::RealModulus, spec);
}

MetricResult rho_alpha(const CharFn& phi, const CharFn& psi, double alpha, const QuadratureSpec& spec) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw RangeError("rho_alpha: alpha must lie in (0, 1)");
  return seminorm_alpha_k(phi, psi, alpha, 1, spec);
}

CompositeKind composite_kind_from_string(const std::string& name) {
  if (name == "D") return CompositeKind::D;
  if (name == "F") return CompositeKind::F;
  if (name == "G") return CompositeKind::G;
  if (name == "H") return CompositeKind::H;
  throw ConfigError("unknown composite metric: " + name);
}

MetricResult composite_metric(CompositeKind kind, const CharFn& phi, const CharFn& psi, double alpha, double beta,
                              int k, const QuadratureSpec& spec) {
  if (!(alpha > 0.0)) throw RangeError("composite_metric: alpha must be positive");
  if (k < 1) throw RangeError("composite_metric: k must be positive");
  const bool uses_beta = kind == CompositeKind::F || kind == CompositeKind::H;
  if (uses_beta && !(beta > 0.0 && beta <= std::min(alpha, 1.0)))
    throw RangeError("composite_metric: beta must lie in (0, min(alpha, 1)]");
  if (kind == CompositeKind::H && is_near_integer(alpha) && std::lround(alpha) == k && k % 2 == 0)
    throw RangeError("composite_metric: H with alpha = k requires odd k");
  const MetricResult sup = uses_beta ? d_beta(phi, psi, beta, spec) : d_inf(phi, psi, spec);
  const Channel channel = (kind == CompositeKind::G || kind == CompositeKind::H) ? Channel::RealModulus : Channel::Modulus;
  const MetricResult integral = integral_metric(phi, psi, alpha, k, channel, spec);
  MetricResult m;
  m.sup_component = sup.value;
  m.integral_component = integral.integral_component;
  m.integral_error = integral.integral_error;
  m.value = m.sup_component + m.integral_component;
  m.grid_report = sup.grid_report;
  return m;
}

MembershipReport membership(const CharFn& phi, double alpha, int k, const QuadratureSpec& spec) {
  if (!(alpha > 0.0)) throw RangeError("membership: alpha must be positive");
  MembershipReport rep;
  const auto modulus = difference_integral(phi, std::nullopt, k, alpha, Channel::Modulus, spec);
  rep.integral_value = modulus.value;
  rep.tail = modulus.far_part;
  rep.slope = least_squares_slope(modulus.origin_samples, 8);
  bool finite = true;
  if (modulus.origin_status != OriginStatus::Converged) {
    finite = false;
    rep.notes.push_back("truncated integral does not stabilise as the cutoff shrinks");
  }
  if (!(rep.slope > alpha + kSlopeMargin)) {
    finite = false;
    rep.notes.push_back("near-origin slope " + fmt(rep.slope) + " does not exceed alpha + 0.05");
  }
  const bool integer = is_near_integer(alpha, 1e-6);
  const bool signed_defined = !(integer && (std::lround(alpha) % 2 == 0 || std::lround(alpha) < k));
  if (finite && signed_defined) {
    const auto signed_part = difference_integral(phi, std::nullopt, k, alpha, Channel::Real, spec);
    rep.implied_moment = constant_A(k, alpha, phi.dim()) * signed_part.value;
    const double slack = 1e-8 * std::fabs(rep.implied_moment) + 10.0 * std::fabs(constant_A(k, alpha, phi.dim())) * signed_part.error;
    if (rep.implied_moment < -slack) {
      finite = false;
      rep.notes.push_back("signed integral implies a negative moment " + fmt(rep.implied_moment));
    }
    if (std::fabs(constant_A(k, alpha, phi.dim())) * rep.integral_value < std::fabs(rep.implied_moment) - slack) {
      finite = false;
      rep.notes.push_back("modulus bound violated");
    }
  }
  // For alpha < 2 the first difference of Re(phi) has a fixed sign, so its integral characterises
  // membership without cancellation; use it to confirm higher-order verdicts.
  if (finite && k > 1 && alpha < 2.0) {
    const auto first = difference_integral(phi, std::nullopt, 1, alpha, Channel::Real, spec);
    const double s1 = least_squares_slope(first.origin_samples, 8);
    if (first.origin_status != OriginStatus::Converged || !(s1 > alpha + kSlopeMargin)) {
      finite = false;
      rep.notes.push_back("first-difference check: slope " + fmt(s1) + " does not exceed alpha + 0.05");
    }
  }
  rep.classification = finite ? Classification::Finite : Classification::DivergenceSuspected;
  rep.notes.push_back("heuristic classification from numerical evidence");
  return rep;
}

double derivative_seminorm(const CharFn& phi, const std::vector<int>& sigma, double gamma, const QuadratureSpec& spec) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw RangeError("derivative_seminorm: gamma must lie in (0, 1)");
  if (!phi.has_derivative()) throw DomainError("derivative_seminorm: characteristic function has no derivative oracle");
  if (static_cast<int>(sigma.size()) != phi.dim()) throw RangeError("derivative_seminorm: multi-index of wrong length");
  const std::vector<double> origin(phi.dim(), 0.0);
  const cplx at_zero = phi.derivative(sigma, origin);
  CharFn::Parts parts;
  parts.dimension = phi.dim();
  parts.evaluate = [phi, sigma](std::span<const double> xi) { return phi.derivative(sigma, xi); };
  parts.minus_one = [phi, sigma, at_zero](std::span<const double> xi) { return phi.derivative(sigma, xi) - at_zero; };
  const auto l = phi.limit_at_infinity();
  const int order = [&] {
    int s = 0;
    for (int v : sigma) s += v;
    return s;
  }();
  if (l && (*l == 0.0 || order == 0)) parts.limit = (order == 0 ? *l : cplx(0.0)) - at_zero + 1.0;
  parts.name = "derivative";
  const CharFn shifted(std::move(parts));
  return integral_metric(shifted, make_constant_one(phi.dim()), gamma, 1, Channel::Modulus, spec).value;
}

}  // namespace cfm
