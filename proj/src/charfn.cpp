#include "cfm/charfn.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "cfm/closed_forms.hpp"
#include "cfm/errors.hpp"
#include "cfm/specfun.hpp"

namespace cfm {

namespace {

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double dot(std::span<const double> x, const std::vector<double>& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * a[i];
  return s;
}

void check_dim(int d) {
  if (d < 1) throw RangeError("dimension must be positive");
}

void check_index(double p) {
  if (!(p > 0.0 && p <= 2.0)) throw RangeError("stable index p must lie in (0, 2]");
}

/// e^{-i theta} - 1 without cancellation.
cplx expi_minus_one(double theta) {
  const double s = std::sin(0.5 * theta);
  return {-2.0 * s * s, -std::sin(theta)};
}

/// Scaled copy of a point held on the stack for the common low-dimensional case.
class ScaledPoint {
 public:
  ScaledPoint(std::span<const double> x, double c) : n_(x.size()) {
    double* dst = n_ <= kInline ? inline_ : (heap_.resize(n_), heap_.data());
    for (std::size_t i = 0; i < n_; ++i) dst[i] = c * x[i];
  }
  ScaledPoint(std::span<const double> x, std::span<const double> y, double c) : n_(x.size()) {
    double* dst = n_ <= kInline ? inline_ : (heap_.resize(n_), heap_.data());
    for (std::size_t i = 0; i < n_; ++i) dst[i] = x[i] + c * y[i];
  }
  std::span<const double> span() const { return {n_ <= kInline ? inline_ : heap_.data(), n_}; }

 private:
  static constexpr std::size_t kInline = 8;
  std::size_t n_;
  double inline_[kInline] = {};
  std::vector<double> heap_;
};

CharFn radial_family(int d, std::function<cplx(double)> minus_one, std::optional<cplx> limit, std::string name,
                     std::function<double(double)> moment) {
  CharFn::Parts parts;
  parts.dimension = d;
  parts.radial_minus_one = minus_one;
  parts.evaluate = [minus_one](std::span<const double> xi) { return 1.0 + minus_one(norm(xi)); };
  parts.minus_one = [minus_one](std::span<const double> xi) { return minus_one(norm(xi)); };
  parts.is_real = true;
  parts.limit = limit;
  parts.analytic_moment = std::move(moment);
  parts.name = std::move(name);
  return CharFn(std::move(parts));
}

double hermite(int n, double y) {
  double h0 = 1.0;
  if (n == 0) return h0;
  double h1 = 2.0 * y;
  for (int j = 1; j < n; ++j) {
    const double h2 = 2.0 * y * h1 - 2.0 * j * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

}  // namespace

void DiscreteMeasure::validate() const {
  if (atoms.empty()) throw RangeError("discrete measure has no atoms");
  if (atoms.size() != weights.size()) throw RangeError("discrete measure: atoms and weights differ in length");
  const std::size_t d = atoms.front().size();
  if (d == 0) throw RangeError("discrete measure: zero-dimensional atom");
  CompensatedSum total;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (atoms[j].size() != d) throw RangeError("discrete measure: atoms of unequal dimension");
    if (!(weights[j] >= 0.0)) throw RangeError("discrete measure: negative weight");
    total.add(weights[j]);
  }
  if (std::fabs(total.value() - 1.0) > 1e-9) throw RangeError("discrete measure: weights do not sum to one");
}

double DiscreteMeasure::absolute_moment(double alpha) const {
  CompensatedSum s;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    const double r = norm(atoms[j]);
    if (r > 0.0 || alpha == 0.0) s.add(weights[j] * std::pow(r, alpha));
  }
  return s.value();
}

DiscreteMeasure empirical_measure(const std::vector<std::vector<double>>& samples) {
  DiscreteMeasure mu;
  mu.atoms = samples;
  mu.weights.assign(samples.size(), samples.empty() ? 0.0 : 1.0 / static_cast<double>(samples.size()));
  mu.validate();
  return mu;
}

CharFn::CharFn(Parts parts) : parts_(std::make_shared<const Parts>(std::move(parts))) {
  check_dim(parts_->dimension);
  if (!parts_->evaluate) throw RangeError("CharFn requires an evaluator");
}

cplx CharFn::evaluate(std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != parts_->dimension) throw RangeError("CharFn: point of wrong dimension");
  return parts_->evaluate(xi);
}

cplx CharFn::minus_one(std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != parts_->dimension) throw RangeError("CharFn: point of wrong dimension");
  return parts_->minus_one ? parts_->minus_one(xi) : parts_->evaluate(xi) - 1.0;
}

cplx CharFn::radial_minus_one(double r) const {
  if (!is_radial()) throw DomainError("CharFn '" + name() + "' is not radial");
  return parts_->radial_minus_one(r);
}

cplx CharFn::derivative(std::span<const int> sigma, std::span<const double> xi) const {
  if (!has_derivative()) throw DomainError("CharFn '" + name() + "' has no derivative oracle");
  if (static_cast<int>(sigma.size()) != dim() || static_cast<int>(xi.size()) != dim())
    throw RangeError("CharFn::derivative: wrong dimension");
  return parts_->derivative(sigma, xi);
}

std::optional<double> CharFn::analytic_moment(double alpha) const {
  if (!parts_->analytic_moment) return std::nullopt;
  return parts_->analytic_moment(alpha);
}

CharFn make_stable(double p, double t, int d) {
  check_index(p);
  check_dim(d);
  if (!(t > 0.0)) throw RangeError("make_stable: t must be positive");
  auto minus_one = [p, t](double r) -> cplx { return std::expm1(-t * std::pow(r, p)); };
  auto moment = [p, t, d](double alpha) {
    if (p < 2.0 && alpha >= p) return std::numeric_limits<double>::infinity();
    return stable_moment(p, t, alpha, d);
  };
  CharFn base = radial_family(d, minus_one, cplx(0.0), "stable(p=" + std::to_string(p) + ",t=" + std::to_string(t) + ")",
                              moment);
  if (p != 2.0) return base;
  CharFn::Parts parts = base.parts();
  parts.name = "gaussian(t=" + std::to_string(t) + ")";
  parts.derivative = [t](std::span<const int> sigma, std::span<const double> xi) -> cplx {
    const double st = std::sqrt(t);
    double v = 1.0;
    for (std::size_t i = 0; i < xi.size(); ++i) {
      const int n = sigma[i];
      v *= ((n % 2 == 0) ? 1.0 : -1.0) * std::pow(st, n) * hermite(n, st * xi[i]) * std::exp(-t * xi[i] * xi[i]);
    }
    return v;
  };
  return CharFn(std::move(parts));
}

CharFn make_gaussian(double t, int d) { return make_stable(2.0, t, d); }

CharFn make_linnik(double p, double beta, int d) {
  check_index(p);
  check_dim(d);
  if (!(beta > 0.0)) throw RangeError("make_linnik: beta must be positive");
  auto minus_one = [p, beta](double r) -> cplx { return std::expm1(-beta * std::log1p(std::pow(r, p))); };
  auto moment = [p, beta, d](double alpha) {
    if (p < 2.0 && alpha >= p) return std::numeric_limits<double>::infinity();
    return linnik_moment(p, beta, alpha, d);
  };
  return radial_family(d, minus_one, cplx(0.0),
                       "linnik(p=" + std::to_string(p) + ",beta=" + std::to_string(beta) + ")", moment);
}

CharFn make_mittag_leffler(double delta, double t, int d) {
  if (!(delta > 0.0 && delta <= 1.0)) throw RangeError("make_mittag_leffler: delta must lie in (0, 1]");
  return make_linnik(delta, t, d);
}

CharFn make_point_mass(const std::vector<double>& a) {
  if (a.empty()) throw RangeError("make_point_mass: empty location");
  const bool origin = norm(a) == 0.0;
  CharFn::Parts parts;
  parts.dimension = static_cast<int>(a.size());
  parts.evaluate = [a](std::span<const double> xi) { return std::exp(cplx(0.0, -dot(xi, a))); };
  parts.minus_one = [a](std::span<const double> xi) { return expi_minus_one(dot(xi, a)); };
  if (origin) {
    parts.radial_minus_one = [](double) { return cplx(0.0); };
    parts.limit = cplx(1.0);
  }
  parts.is_real = origin;
  parts.derivative = [a](std::span<const int> sigma, std::span<const double> xi) {
    cplx f = std::exp(cplx(0.0, -dot(xi, a)));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (int j = 0; j < sigma[i]; ++j) f *= cplx(0.0, -a[i]);
    return f;
  };
  const double r = norm(a);
  parts.analytic_moment = [r](double alpha) { return (r == 0.0 && alpha > 0.0) ? 0.0 : std::pow(r, alpha); };
  parts.atoms = DiscreteMeasure{{a}, {1.0}};
  parts.name = "point_mass";
  return CharFn(std::move(parts));
}

CharFn make_constant_one(int d) { return make_point_mass(std::vector<double>(d, 0.0)); }

CharFn make_discrete(const DiscreteMeasure& mu) {
  mu.validate();
  if (mu.size() == 1) {
    CharFn::Parts parts = make_point_mass(mu.atoms.front()).parts();
    parts.name = "discrete";
    return CharFn(std::move(parts));
  }
  auto shared = std::make_shared<const DiscreteMeasure>(mu);
  bool all_origin = true;
  for (const auto& a : mu.atoms) all_origin = all_origin && norm(a) == 0.0;
  CharFn::Parts parts;
  parts.dimension = mu.dimension();
  parts.evaluate = [shared](std::span<const double> xi) {
    CompensatedComplexSum s;
    for (std::size_t j = 0; j < shared->size(); ++j)
      s.add(shared->weights[j] * std::exp(cplx(0.0, -dot(xi, shared->atoms[j]))));
    return s.value();
  };
  parts.minus_one = [shared](std::span<const double> xi) {
    CompensatedComplexSum s;
    for (std::size_t j = 0; j < shared->size(); ++j)
      s.add(shared->weights[j] * expi_minus_one(dot(xi, shared->atoms[j])));
    return s.value();
  };
  if (all_origin) {
    parts.radial_minus_one = [](double) { return cplx(0.0); };
    parts.limit = cplx(1.0);
  }
  parts.is_real = all_origin;
  parts.derivative = [shared](std::span<const int> sigma, std::span<const double> xi) {
    CompensatedComplexSum s;
    for (std::size_t j = 0; j < shared->size(); ++j) {
      const auto& a = shared->atoms[j];
      cplx f = shared->weights[j] * std::exp(cplx(0.0, -dot(xi, a)));
      for (std::size_t i = 0; i < a.size(); ++i)
        for (int m = 0; m < sigma[i]; ++m) f *= cplx(0.0, -a[i]);
      s.add(f);
    }
    return s.value();
  };
  parts.analytic_moment = [shared](double alpha) { return shared->absolute_moment(alpha); };
  parts.atoms = mu;
  parts.name = "discrete";
  return CharFn(std::move(parts));
}

CharFn make_empirical(const std::vector<std::vector<double>>& samples) {
  CharFn::Parts parts = make_discrete(empirical_measure(samples)).parts();
  parts.name = "empirical(n=" + std::to_string(samples.size()) + ")";
  return CharFn(std::move(parts));
}

CharFn make_product(const CharFn& phi, const CharFn& psi) {
  if (phi.dim() != psi.dim()) throw RangeError("make_product: dimension mismatch");
  CharFn::Parts parts;
  parts.dimension = phi.dim();
  parts.evaluate = [phi, psi](std::span<const double> xi) { return phi.evaluate(xi) * psi.evaluate(xi); };
  parts.minus_one = [phi, psi](std::span<const double> xi) {
    const cplx a = phi.minus_one(xi), b = psi.minus_one(xi);
    return a * b + a + b;
  };
  if (phi.is_radial() && psi.is_radial()) {
    parts.radial_minus_one = [phi, psi](double r) {
      const cplx a = phi.radial_minus_one(r), b = psi.radial_minus_one(r);
      return a * b + a + b;
    };
  }
  parts.is_real = phi.is_real() && psi.is_real();
  const auto la = phi.limit_at_infinity(), lb = psi.limit_at_infinity();
  if ((la && *la == 0.0) || (lb && *lb == 0.0))
    parts.limit = cplx(0.0);
  else if (la && lb)
    parts.limit = *la * *lb;
  if (phi.has_derivative() && psi.has_derivative()) {
    parts.derivative = [phi, psi](std::span<const int> sigma, std::span<const double> xi) {
      const std::size_t d = sigma.size();
      std::vector<int> tau(d, 0), rest(d);
      CompensatedComplexSum s;
      while (true) {
        double coeff = 1.0;
        for (std::size_t i = 0; i < d; ++i) {
          coeff *= static_cast<double>(binomial(sigma[i], tau[i]));
          rest[i] = sigma[i] - tau[i];
        }
        s.add(coeff * phi.derivative(tau, xi) * psi.derivative(rest, xi));
        std::size_t i = 0;
        while (i < d && tau[i] == sigma[i]) tau[i++] = 0;
        if (i == d) break;
        ++tau[i];
      }
      return s.value();
    };
  }
  parts.name = "product(" + phi.name() + "," + psi.name() + ")";
  return CharFn(std::move(parts));
}

CharFn make_mixture(const std::vector<double>& weights, const std::vector<CharFn>& components) {
  if (weights.empty() || weights.size() != components.size())
    throw RangeError("make_mixture: weights and components must match and be nonempty");
  CompensatedSum total;
  for (double w : weights) {
    if (!(w >= 0.0)) throw RangeError("make_mixture: negative weight");
    total.add(w);
  }
  if (std::fabs(total.value() - 1.0) > 1e-9) throw RangeError("make_mixture: weights do not sum to one");
  const int d = components.front().dim();
  bool radial = true, real = true;
  std::optional<cplx> limit = cplx(0.0);
  for (const auto& c : components) {
    if (c.dim() != d) throw RangeError("make_mixture: dimension mismatch");
    radial = radial && c.is_radial();
    real = real && c.is_real();
  }
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto l = components[i].limit_at_infinity();
    if (!l || !limit) {
      limit.reset();
      continue;
    }
    *limit += weights[i] * *l;
  }
  CharFn::Parts parts;
  parts.dimension = d;
  parts.evaluate = [weights, components](std::span<const double> xi) {
    CompensatedComplexSum s;
    for (std::size_t i = 0; i < components.size(); ++i) s.add(weights[i] * components[i].evaluate(xi));
    return s.value();
  };
  parts.minus_one = [weights, components](std::span<const double> xi) {
    CompensatedComplexSum s;
    for (std::size_t i = 0; i < components.size(); ++i) s.add(weights[i] * components[i].minus_one(xi));
    return s.value();
  };
  if (radial) {
    parts.radial_minus_one = [weights, components](double r) {
      CompensatedComplexSum s;
      for (std::size_t i = 0; i < components.size(); ++i) s.add(weights[i] * components[i].radial_minus_one(r));
      return s.value();
    };
  }
  parts.is_real = real;
  parts.limit = limit;
  bool moments = true;
  for (const auto& c : components) moments = moments && c.analytic_moment(1.0).has_value();
  if (moments) {
    parts.analytic_moment = [weights, components](double alpha) {
      double s = 0.0;
      for (std::size_t i = 0; i < components.size(); ++i) s += weights[i] * *components[i].analytic_moment(alpha);
      return s;
    };
  }
  parts.name = "mixture";
  return CharFn(std::move(parts));
}

CharFn make_schoenberg(const DiscreteMeasure& nu, double p, int d) {
  nu.validate();
  check_index(p);
  check_dim(d);
  if (nu.dimension() != 1) throw RangeError("make_schoenberg: mixing law must be one-dimensional");
  std::vector<double> t, w;
  double at_zero = 0.0;
  for (std::size_t j = 0; j < nu.size(); ++j) {
    if (nu.atoms[j][0] < 0.0) throw RangeError("make_schoenberg: mixing law must live on [0, inf)");
    t.push_back(nu.atoms[j][0]);
    w.push_back(nu.weights[j]);
    if (nu.atoms[j][0] == 0.0) at_zero += nu.weights[j];
  }
  auto minus_one = [t, w, p](double r) -> cplx {
    const double rp = std::pow(r, p);
    CompensatedSum s;
    for (std::size_t j = 0; j < t.size(); ++j) s.add(w[j] * std::expm1(-t[j] * rp));
    return s.value();
  };
  auto moment = [nu, p, d](double alpha) {
    if (p < 2.0 && alpha >= p) return std::numeric_limits<double>::infinity();
    return schoenberg_moment(nu, p, alpha, d);
  };
  return radial_family(d, minus_one, cplx(at_zero), "schoenberg(p=" + std::to_string(p) + ")", moment);
}

CharFn make_scaled(const CharFn& phi, double c) {
  if (!(c > 0.0)) throw RangeError("make_scaled: factor must be positive");
  CharFn::Parts parts = phi.parts();
  parts.evaluate = [phi, c](std::span<const double> xi) { return phi.evaluate(ScaledPoint(xi, c).span()); };
  parts.minus_one = [phi, c](std::span<const double> xi) { return phi.minus_one(ScaledPoint(xi, c).span()); };
  if (phi.is_radial()) parts.radial_minus_one = [phi, c](double r) { return phi.radial_minus_one(c * r); };
  if (phi.has_derivative()) {
    parts.derivative = [phi, c](std::span<const int> sigma, std::span<const double> xi) {
      const int order = std::accumulate(sigma.begin(), sigma.end(), 0);
      return std::pow(c, order) * phi.derivative(sigma, ScaledPoint(xi, c).span());
    };
  }
  if (phi.analytic_moment(1.0)) parts.analytic_moment = [phi, c](double alpha) { return std::pow(c, alpha) * *phi.analytic_moment(alpha); };
  if (phi.atoms()) {
    DiscreteMeasure mu = *phi.atoms();
    for (auto& a : mu.atoms)
      for (double& x : a) x *= c;
    parts.atoms = mu;
  }
  parts.name = "scaled(" + phi.name() + ")";
  return CharFn(std::move(parts));
}

DiscreteMeasure pathological_measure(double alpha, int K, int d) {
  if (!(alpha > 0.0)) throw RangeError("pathological_measure: alpha must be positive");
  if (K < 1 || K > 60) throw RangeError("pathological_measure: K must lie in [1, 60]");
  check_dim(d);
  DiscreteMeasure mu;
  CompensatedSum total;
  for (int k = 1; k <= K; ++k) {
    std::vector<double> a(d, 0.0);
    a[0] = std::ldexp(1.0, k);
    mu.atoms.push_back(a);
    const double w = std::pow(2.0, -k * alpha) / (static_cast<double>(k) * k);
    mu.weights.push_back(w);
    total.add(w);
  }
  for (double& w : mu.weights) w /= total.value();
  return mu;
}

cplx iterated_difference(const CharFn::PointFn& f, std::span<const double> xi, int k) {
  if (k < 0 || k > kMaxDifferenceOrder) throw RangeError("iterated_difference: k must lie in [0, 12]");
  CompensatedComplexSum s;
  for (int m = 0; m <= k; ++m) s.add(difference_weight(k, m) * f(ScaledPoint(xi, m).span()));
  return s.value();
}

cplx iterated_difference(const CharFn& phi, std::span<const double> xi, int k) {
  if (k < 0 || k > kMaxDifferenceOrder) throw RangeError("iterated_difference: k must lie in [0, 12]");
  if (static_cast<int>(xi.size()) != phi.dim()) throw RangeError("iterated_difference: wrong dimension");
  if (k == 0) return 1.0;
  CompensatedComplexSum s;
  for (int m = 1; m <= k; ++m) s.add(difference_weight(k, m) * phi.minus_one(ScaledPoint(xi, m).span()));
  return s.value();
}

double real_part_difference(const CharFn& phi, std::span<const double> xi, int k) {
  return iterated_difference(phi, xi, k).real();
}

cplx radial_difference(const CharFn& phi, double r, int k) {
  if (k < 0 || k > kMaxDifferenceOrder) throw RangeError("radial_difference: k must lie in [0, 12]");
  if (k == 0) return 1.0;
  CompensatedComplexSum s;
  for (int m = 1; m <= k; ++m) s.add(difference_weight(k, m) * phi.radial_minus_one(m * r));
  return s.value();
}

cplx difference_at(const CharFn& phi, std::span<const double> x, std::span<const double> xi, int k) {
  if (k < 0 || k > kMaxDifferenceOrder) throw RangeError("difference_at: k must lie in [0, 12]");
  CompensatedComplexSum s;
  for (int m = 0; m <= k; ++m) s.add(difference_weight(k, m) * phi.evaluate(ScaledPoint(x, xi, m).span()));
  return s.value();
}

}  // namespace cfm
