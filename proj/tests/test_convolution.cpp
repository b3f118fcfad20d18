#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "cfm/closed_forms.hpp"
#include "cfm/convolution.hpp"
#include "cfm/errors.hpp"
#include "cfm/metrics.hpp"

using namespace cfm;

namespace {
double rel(double a, double b) { return std::fabs(a / b - 1.0); }

std::vector<std::vector<double>> draws(int n, double scale, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.3, scale);
  std::vector<std::vector<double>> out;
  for (int i = 0; i < n; ++i) out.push_back({nd(gen)});
  return out;
}
}  // namespace

TEST_CASE("Leibniz rule") {
  std::vector<CharFn> fns = {make_gaussian(0.7, 1),
                             make_stable(1.3, 1.1, 1),
                             make_linnik(1.5, 2.0, 1),
                             make_point_mass({0.9}),
                             make_discrete(DiscreteMeasure{{{-1.0}, {2.5}}, {0.4, 0.6}}),
                             make_empirical(draws(7, 1.0, 5)),
                             make_scaled(make_stable(0.8, 1.0, 1), 1.7)};
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (std::size_t i = 0; i < fns.size(); ++i)
    for (std::size_t j = 0; j < fns.size(); ++j) {
      const auto prod = make_product(fns[i], fns[j]);
      for (int k = 1; k <= 5; ++k)
        for (int s = 0; s < 4; ++s) {
          const std::vector<double> xi = {u(gen)};
          const cplx a = leibniz_difference(fns[i], fns[j], xi, k);
          const cplx b = iterated_difference(prod, xi, k);
          CHECK(std::abs(a - b) <= 1e-12);
        }
    }

  const auto g2 = make_gaussian(0.5, 2);
  const auto l2 = make_linnik(1.2, 0.8, 2);
  const std::vector<double> xi = {0.4, -1.3};
  for (int k = 1; k <= 5; ++k)
    CHECK(std::abs(leibniz_difference(g2, l2, xi, k) - iterated_difference(make_product(g2, l2), xi, k)) <= 1e-12);
  CHECK_THROWS_AS(leibniz_difference(g2, make_gaussian(1.0, 1), xi, 2), RangeError);
}

TEST_CASE("convolution moments") {
  const auto g = make_gaussian(1.0, 1);
  CHECK(rel(convolution_moment(g, g, 1.0).value, 2.0 * std::sqrt(2.0 / std::numbers::pi)) < 1e-8);

  const auto x = draws(20, 1.0, 1);
  const auto y = draws(20, 2.0, 2);
  double pair_sum = 0.0;
  for (const auto& a : x)
    for (const auto& b : y) pair_sum += std::pow(std::fabs(a[0] + b[0]), 0.7);
  pair_sum /= 400.0;
  QuadratureSpec loose;
  loose.rel_tol = 1e-6;
  const auto emp = convolution_moment(make_empirical(x), make_empirical(y), 0.7, loose);
  CHECK(rel(emp.value, pair_sum) < 1e-3);

  const auto delta = make_constant_one(1);
  const auto lin = make_linnik(1.6, 1.0, 1);
  for (double gamma : {0.4, 0.9, 1.3})
    CHECK(rel(convolution_moment(lin, delta, gamma).value, absolute_moment(lin, gamma).value) < 1e-12);

  // stable laws are closed under convolution: t adds
  CHECK(rel(convolution_moment(make_stable(1.4, 0.5, 1), make_stable(1.4, 1.5, 1), 0.8).value,
            stable_moment(1.4, 2.0, 0.8, 1)) < 1e-7);
}

TEST_CASE("convolution gains no moment order") {
  const auto cauchy = make_stable(1.0, 1.0, 1);
  const auto g = make_gaussian(1.0, 1);
  CHECK_THROWS_AS(convolution_moment(cauchy, g, 1.5), DivergenceSuspected);
  CHECK(membership(make_product(cauchy, g), 1.5, 2).classification == Classification::DivergenceSuspected);
  CHECK(membership(make_product(cauchy, g), 0.5, 1).classification == Classification::Finite);
}

TEST_CASE("convolution bound report") {
  MomentOptions exact;
  exact.allow_shortcut = true;

  const auto g = make_gaussian(1.0, 1);
  const auto cauchy = make_stable(1.0, 1.0, 1);
  const auto gc = convolution_bound_report(g, cauchy, 2.0, 0.5, {}, exact);
  CHECK(gc.gamma == 0.5);
  CHECK(std::isfinite(gc.ratio));
  CHECK(gc.ratio > 0.0);
  CHECK(rel(gc.rhs_core, std::pow(gaussian_moment(1.0, 2.0, 1), 0.25) + stable_moment(1.0, 1.0, 0.5, 1)) < 1e-12);

  for (auto [a, b] : {std::pair{0.5, -1.5}, std::pair{2.0, 2.0}, std::pair{-0.3, 0.1}})
    for (double gamma : {0.3, 0.8, 1.0}) {
      const auto r = convolution_bound_report(make_point_mass({a}), make_point_mass({b}), gamma, gamma, {}, exact);
      CHECK(rel(r.lhs, std::pow(std::fabs(a + b), gamma)) < 1e-7);
      CHECK(r.ratio <= 2.0);
    }

  const auto lin = make_linnik(1.8, 1.5, 1);
  const double base = convolution_bound_report(g, lin, 0.9, 0.9).ratio;
  for (double c : {0.5, 2.0, 7.0}) {
    const auto r = convolution_bound_report(make_scaled(g, c), make_scaled(lin, c), 0.9, 0.9);
    CHECK(rel(r.ratio, base) < 1e-6);
  }
  CHECK_THROWS_AS(convolution_bound_report(g, lin, 0.0, 1.0), RangeError);
}

TEST_CASE("bound ratios stay bounded across families") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double orders[] = {0.5, 0.9, 1.5};
  MomentOptions exact;
  exact.allow_shortcut = true;
  double worst = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = make_gaussian(0.2 + 2.0 * u(gen), 1);
    const auto lin = make_linnik(1.7 + 0.3 * u(gen), 1.0 + u(gen), 1);
    const auto emp = make_empirical(draws(12, 0.5 + u(gen), 100 + trial));
    const CharFn* pick[] = {&g, &lin, &emp};
    const int kind = trial % 3;
    const CharFn& phi = *pick[kind];
    const CharFn& psi = *pick[(kind + 1) % 3];
    const double alpha = orders[static_cast<int>(3.0 * u(gen))];
    const double beta = orders[static_cast<int>(3.0 * u(gen))];
    const auto r = convolution_bound_report(phi, psi, alpha, beta, {}, exact);
    CHECK(r.ratio > 0.0);
    worst = std::fmax(worst, r.ratio);
  }
  CHECK(worst <= 4.0);
  MESSAGE("largest observed ratio " << worst);
}
