#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cfm/closed_forms.hpp"
#include "cfm/errors.hpp"
#include "cfm/moment_engine.hpp"
#include "cfm/specfun.hpp"
#include "oracles.hpp"

using namespace cfm;

namespace {
double rel(double a, double b) { return std::fabs(a / b - 1.0); }
const double kSqrtPi = std::sqrt(std::numbers::pi);
}  // namespace

TEST_CASE("stretched-exponential moments") {
  CHECK(rel(ep_moment(1, 0.5, 1), std::numbers::sqrt2) < 1e-14);
  CHECK(rel(ep_moment(2, 1, 1), 2.0 / kSqrtPi) < 1e-14);
  CHECK(rel(ep_moment(2, 2, 3), 6.0) < 1e-14);
  CHECK(ep_moment(1.3, 0.0, 2) == 1.0);
  // values from an arbitrary-precision evaluation of the Gaussian-mixture formula
  CHECK(rel(ep_moment(0.7, 0.3, 2), 1.60933112450535890) < 1e-13);
  CHECK(rel(ep_moment(1.5, 0.7, 1), 1.22560923629735623) < 1e-13);
  CHECK(rel(ep_moment(1.5, 1.2, 3), 5.61466877749590803) < 1e-13);
  CHECK(rel(ep_moment(1, 0.5, 2), 1.85407467730137205) < 1e-13);
  CHECK(rel(ep_moment(0.7, 0.5, 3), 3.76894549897732682) < 1e-13);
  CHECK_THROWS_AS(ep_moment(1, 1, 1), MomentDivergence);
  CHECK_THROWS_AS(ep_moment(1.5, 1.7, 2), MomentDivergence);
  CHECK(rel(stable_moment(1.5, 2.0, 0.7, 1), std::pow(2.0, 0.7 / 1.5) * ep_moment(1.5, 0.7, 1)) < 1e-15);
  CHECK(rel(gaussian_moment(3.0, 1.0, 2), static_cast<double>(oracle::gaussian_moment(3.0, 1.0, 2))) < 1e-13);
}

TEST_CASE("growth near the critical order") {
  for (auto [p, d] : {std::pair{1.0, 1}, std::pair{1.5, 2}, std::pair{0.7, 3}}) {
    double prev = 1e300;
    for (int j = 2; j <= 4; ++j) {
      const double a = p * (1.0 - std::pow(10.0, -j));
      const double gap = std::fabs(ep_moment(p, a, d) / ep_moment_singularity(p, a, d) - 1.0);
      CHECK(gap < prev);
      prev = gap;
    }
    CHECK(prev < 0.05);
  }
  CHECK(std::isfinite(ep_moment(1, 0.99, 1)));
  CHECK(ep_moment(1, 0.99, 1) > 50.0);
  CHECK(std::isfinite(ep_moment(1.5, 1.49, 2)));
  CHECK(ep_moment(1.5, 1.49, 2) > 50.0);
}

TEST_CASE("densities") {
  CHECK(rel(ep_density(2, 0.0, 1), 1.0 / std::sqrt(4.0 * std::numbers::pi)) < 1e-15);
  CHECK(rel(ep_density(1, 1.0, 1), 1.0 / (2.0 * std::numbers::pi)) < 1e-15);
  CHECK(std::fabs(ep_density_series(1, 0.5, 1, 40) - ep_density(1, 0.5, 1)) < 1e-10);
  CHECK(std::fabs(ep_density_series(1, 0.3, 3, 60) - ep_density(1, 0.3, 3)) < 1e-10);
  CHECK(std::fabs(ep_density_series(2, 0.8, 2, 60) - ep_density(2, 0.8, 2)) < 1e-10);
  CHECK(ep_density(1.3, 0.4, 1) > 0.0);
  CHECK_THROWS_AS(ep_density_series(0.5, 30.0, 1, 40), SeriesDivergence);
}

TEST_CASE("density of the heavy-tailed family at infinity") {
  CHECK(rel(bg_tail_constant(1, 1), 1.0 / std::numbers::pi) < 1e-14);
  const double p = 1.0;
  const int d = 3;
  const double expected = p * std::pow(2.0, p - 1) / std::pow(std::numbers::pi, d / 2.0 + 1) *
                          std::sin(p * std::numbers::pi / 2) * cfm::gamma((d + p) / 2) * cfm::gamma(p / 2);
  CHECK(rel(bg_tail_constant(1, 3), expected) < 1e-14);
  CHECK(bg_tail_constant(1.99, 1) < 0.05 * bg_tail_constant(1.5, 1));
  for (int dim : {1, 2}) {
    double prev = 1.0;
    for (double v : {20.0, 40.0, 80.0}) {
      const double gap = std::fabs(std::pow(v, dim + 1.0) * ep_density(1, v, dim) / bg_tail_constant(1, dim) - 1.0);
      CHECK(gap < 0.1);
      CHECK(gap < prev);
      prev = gap;
    }
  }
}

TEST_CASE("Linnik moments") {
  CHECK(rel(linnik_moment(1, 1, 0.5), std::numbers::sqrt2 * cfm::gamma(1.5)) < 1e-14);
  CHECK(rel(linnik_moment(2, 1, 2), 2.0) < 1e-14);
  CHECK(linnik_moment(1.3, 2.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  const double direct = std::pow(2.0, 0.6) * cfm::gamma(1 - 0.6 / 1.5) * cfm::gamma(1.6 / 2) * cfm::gamma(2.5 + 0.6 / 1.5) /
                        (kSqrtPi * cfm::gamma(1 - 0.3) * cfm::gamma(2.5));
  CHECK(rel(linnik_moment(1.5, 2.5, 0.6), direct) < 1e-13);
}

TEST_CASE("scale mixtures") {
  DiscreteMeasure one{{{1.0}}, {1.0}};
  CHECK(rel(schoenberg_moment(one, 1.5, 0.8, 2), ep_moment(1.5, 0.8, 2)) < 1e-15);
  DiscreteMeasure c{{{3.0}}, {1.0}};
  CHECK(rel(schoenberg_moment(c, 1.5, 0.8, 2), ep_moment(1.5, 0.8, 2) * std::pow(3.0, 0.8 / 1.5)) < 1e-14);
  DiscreteMeasure two{{{1.0}, {4.0}}, {0.5, 0.5}};
  CHECK(rel(schoenberg_moment(two, 2, 1, 1), 2.0 / kSqrtPi * 1.5) < 1e-14);
}

TEST_CASE("Gamma mixing recovers fractional Gamma moments") {
  const auto nu = gamma_quantile_atoms(1.0, 200);
  CHECK(nu.size() == 200);
  for (double a : {0.3, 0.5}) {
    const double r1 = schoenberg_moment(nu, 1, a, 1) / ep_moment(1, a, 1);
    const double r3 = schoenberg_moment(nu, 1, a, 3) / ep_moment(1, a, 3);
    CHECK(rel(r1, cfm::gamma(1.0 + a)) < 1e-3);
    CHECK(rel(r3, r1) < 1e-14);
  }
  const auto nu2 = gamma_quantile_atoms(2.5, 200);
  CHECK(rel(schoenberg_moment(nu2, 1, 0.4, 2) / ep_moment(1, 0.4, 2), cfm::gamma(2.9) / cfm::gamma(2.5)) < 1e-3);
}

TEST_CASE("Mittag-Leffler moments") {
  CHECK(rel(mittag_leffler_moment(1.0, 0.5), cfm::gamma(1.5)) < 1e-14);
  CHECK(mittag_leffler_moment(0.6, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  for (double dl : {0.4, 0.8})
    for (double a : {0.1, 0.3}) CHECK(rel(ml_process_moment(dl, 1.0, a), mittag_leffler_moment(dl, a)) < 1e-15);
  CHECK(rel(ml_process_moment(0.7, 2.0, 0.3),
            cfm::gamma(1 - 0.3 / 0.7) * cfm::gamma(2 + 0.3 / 0.7) / (cfm::gamma(0.7) * cfm::gamma(2.0))) < 1e-14);
  CHECK_THROWS_AS(mittag_leffler_moment(0.5, 0.5), MomentDivergence);
  CHECK_THROWS_AS(mittag_leffler_moment(1.5, 0.5), RangeError);
}

TEST_CASE("engine agrees with closed forms across families") {
  int combos = 0;
  for (int d = 1; d <= 3; ++d) {
    for (double p : {0.8, 1.3, 2.0})
      for (double a : {0.25, 0.6}) {
        CHECK(rel(absolute_moment(make_stable(p, 1.5, d), a).value, stable_moment(p, 1.5, a, d)) < 1e-6);
        ++combos;
      }
    const double edge = 1.3 - 0.04;
    CHECK(rel(absolute_moment(make_stable(1.3, 1, d), edge).value, ep_moment(1.3, edge, d)) < 1e-4);
    DiscreteMeasure two{{{0.5}, {2.0}}, {0.4, 0.6}};
    CHECK(rel(absolute_moment(make_schoenberg(two, 1.2, d), 0.7).value, schoenberg_moment(two, 1.2, 0.7, d)) < 1e-6);
    combos += 2;
  }
  for (auto [p, b, a] : {std::tuple{1.0, 1.0, 0.5}, {1.5, 2.0, 0.7}, {2.0, 2.0, 1.5}, {0.8, 0.5, 0.3}, {2.0, 1.0, 3.0}}) {
    CAPTURE(p);
    CAPTURE(b);
    CAPTURE(a);
    CHECK(rel(absolute_moment(make_linnik(p, b, 1), a).value, linnik_moment(p, b, a)) < 1e-6);
    ++combos;
  }
  for (double a : {0.2, 0.4}) {
    CHECK(rel(absolute_moment(make_mittag_leffler(0.5, 1.0, 1), a).value,
              linnik_moment(0.5, 1.0, a)) < 1e-6);
    ++combos;
  }
  CHECK(combos >= 20);
}
