#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfm/measure.hpp"

namespace cfm {

using cplx = std::complex<double>;

/// Characteristic function of a probability measure on R^d, phi(xi) = E exp(-i xi.X).
/// Immutable; all evaluators are pure and safe to call concurrently.
class CharFn {
 public:
  using PointFn = std::function<cplx(std::span<const double>)>;
  using ProfileFn = std::function<cplx(double)>;
  using DerivativeFn = std::function<cplx(std::span<const int>, std::span<const double>)>;

  struct Parts {
    int dimension = 1;
    PointFn evaluate;
    PointFn minus_one;         ///< phi - 1 without cancellation; defaults to evaluate - 1
    ProfileFn radial_minus_one;  ///< F(r) - 1 for radial phi(xi) = F(|xi|); empty if not radial
    bool is_real = false;
    std::optional<cplx> limit;  ///< phi(xi) as |xi| -> inf when it exists
    DerivativeFn derivative;
    std::function<double(double)> analytic_moment;
    std::optional<DiscreteMeasure> atoms;
    std::string name;
  };

  explicit CharFn(Parts parts);

  int dim() const { return parts_->dimension; }
  const std::string& name() const { return parts_->name; }

  cplx evaluate(std::span<const double> xi) const;
  cplx operator()(std::span<const double> xi) const { return evaluate(xi); }
  cplx minus_one(std::span<const double> xi) const;

  bool is_radial() const { return static_cast<bool>(parts_->radial_minus_one); }
  bool is_real() const { return parts_->is_real; }
  cplx radial_profile(double r) const { return radial_minus_one(r) + 1.0; }
  cplx radial_minus_one(double r) const;

  std::optional<cplx> limit_at_infinity() const { return parts_->limit; }

  bool has_derivative() const { return static_cast<bool>(parts_->derivative); }
  /// Partial derivative d^sigma phi at xi.
  cplx derivative(std::span<const int> sigma, std::span<const double> xi) const;

  /// Closed-form alpha-th absolute moment when known (+inf if the moment is infinite).
  std::optional<double> analytic_moment(double alpha) const;

  const std::optional<DiscreteMeasure>& atoms() const { return parts_->atoms; }
  const Parts& parts() const { return *parts_; }

 private:
  std::shared_ptr<const Parts> parts_;
};

/// exp(-t |xi|^2): centred Gaussian with variance 2t per coordinate.
CharFn make_gaussian(double t, int d);
/// exp(-t |xi|^p), 0 < p <= 2.
CharFn make_stable(double p, double t, int d);
/// (1 + |xi|^p)^{-beta}.
CharFn make_linnik(double p, double beta, int d);
/// Mittag-Leffler law with index delta at time t, (1 + |xi|^delta)^{-t}.
CharFn make_mittag_leffler(double delta, double t, int d);
CharFn make_point_mass(const std::vector<double>& a);
CharFn make_constant_one(int d);
CharFn make_discrete(const DiscreteMeasure& mu);
CharFn make_empirical(const std::vector<std::vector<double>>& samples);
/// Product of characteristic functions: the law of the independent sum.
CharFn make_product(const CharFn& phi, const CharFn& psi);
CharFn make_mixture(const std::vector<double>& weights, const std::vector<CharFn>& components);
/// Scale mixture: sum_j w_j exp(-t_j |xi|^p) for a discrete mixing law nu of t_j >= 0.
CharFn make_schoenberg(const DiscreteMeasure& nu, double p, int d);
/// phi(c xi): the law of c X.
CharFn make_scaled(const CharFn& phi, double c);

/// Atoms 2^k e_1 (k = 1..K) with weights proportional to 2^{-k alpha} k^{-2}.
DiscreteMeasure pathological_measure(double alpha, int K, int d = 1);

/// sum_{m=0}^k C(k,m) (-1)^{k-m} f(m xi) for an arbitrary function f.
cplx iterated_difference(const CharFn::PointFn& f, std::span<const double> xi, int k);
/// k-th difference of phi at the origin, computed as sum_{m>=1} C(k,m)(-1)^{k-m} (phi(m xi) - 1).
cplx iterated_difference(const CharFn& phi, std::span<const double> xi, int k);
double real_part_difference(const CharFn& phi, std::span<const double> xi, int k);
/// Radial form: the k-th difference of the profile F at 0 with step r.
cplx radial_difference(const CharFn& phi, double r, int k);
/// k-th difference of phi at base point x with step xi.
cplx difference_at(const CharFn& phi, std::span<const double> x, std::span<const double> xi, int k);

}  // namespace cfm
