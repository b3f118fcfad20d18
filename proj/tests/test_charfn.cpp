#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cfm/charfn.hpp"
#include "cfm/closed_forms.hpp"
#include "cfm/errors.hpp"

using namespace cfm;

namespace {

std::vector<CharFn> builtins(int d) {
  std::vector<double> a(d, 0.0), b(d, 0.0);
  a[0] = 0.7;
  b[d - 1] = -1.3;
  std::vector<CharFn> out = {make_gaussian(0.7, d), make_stable(0.6, 1.2, d), make_linnik(1.5, 2.0, d),
                             make_point_mass(a), make_mittag_leffler(0.5, 1.0, d)};
  out.push_back(make_product(out[0], out[3]));
  out.push_back(make_mixture({0.3, 0.7}, {out[1], make_point_mass(b)}));
  out.push_back(make_empirical({a, b, a}));
  return out;
}

std::vector<std::vector<double>> grid(int d, int n, unsigned seed) {
  std::mt19937 g(seed);
  std::normal_distribution<double> nd(0.0, 2.0);
  std::vector<std::vector<double>> out(n, std::vector<double>(d));
  for (auto& x : out)
    for (double& c : x) c = nd(g);
  return out;
}

}  // namespace

TEST_CASE("parametric families") {
  const double one[1] = {1.0}, two[1] = {2.0}, pi[1] = {std::numbers::pi};
  CHECK(make_gaussian(1, 1).evaluate(one) == std::exp(-1.0));
  CHECK(make_stable(1, 1, 1).evaluate(two).real() == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  const double v3[3] = {4.0 / std::sqrt(3.0), 4.0 / std::sqrt(3.0), 4.0 / std::sqrt(3.0)};
  CHECK(std::abs(make_stable(0.5, 1, 3).evaluate(v3) - std::exp(-2.0)) < 1e-15);
  CHECK(std::abs(make_linnik(1, 1, 1).evaluate(one) - 0.5) < 1e-15);
  CHECK(std::abs(make_point_mass({1.0}).evaluate(pi) + 1.0) < 1e-15);
  CHECK_THROWS_AS(make_stable(2.5, 1, 1), RangeError);
  CHECK_THROWS_AS(make_gaussian(0.0, 1), RangeError);
  for (double r : {0.1, 1.0, 3.0}) {
    const double x[2] = {0.6 * r, 0.8 * r};
    CHECK(make_stable(2, 1, 2).evaluate(x) == make_gaussian(1, 2).evaluate(x));
  }
}

TEST_CASE("normalisation, bounds and Hermitian symmetry") {
  for (int d = 1; d <= 3; ++d)
    for (const auto& phi : builtins(d)) {
      CAPTURE(phi.name());
      const std::vector<double> zero(d, 0.0);
      CHECK(phi.evaluate(zero) == std::complex<double>(1.0, 0.0));
      for (const auto& x : grid(d, 40, 3 + d)) {
        const auto v = phi.evaluate(x);
        CHECK(std::abs(v) <= 1.0 + 1e-15);
        std::vector<double> neg(x);
        for (double& c : neg) c = -c;
        CHECK(std::abs(phi.evaluate(neg) - std::conj(v)) < 1e-15);
        CHECK(std::abs(phi.minus_one(x) - (v - 1.0)) < 1e-15);
        if (phi.is_real()) CHECK(std::fabs(v.imag()) <= 1e-14);
        if (phi.is_radial()) {
          double r2 = 0.0;
          for (double c : x) r2 += c * c;
          CHECK(std::abs(phi.radial_profile(std::sqrt(r2)) - v) < 1e-14);
        }
      }
    }
}

TEST_CASE("products") {
  const auto g1 = make_gaussian(1, 2), g2 = make_gaussian(2, 2), g3 = make_gaussian(3, 2);
  const auto one = make_constant_one(2);
  const auto pa = make_point_mass({0.5, -1.0}), pb = make_point_mass({1.5, 0.25}), pab = make_point_mass({2.0, -0.75});
  for (const auto& x : grid(2, 30, 11)) {
    CHECK(std::abs(make_product(g1, g2).evaluate(x) - g3.evaluate(x)) < 1e-15);
    CHECK(make_product(g1, one).evaluate(x) == g1.evaluate(x));
    CHECK(std::abs(make_product(pa, pb).evaluate(x) - pab.evaluate(x)) < 1e-14);
  }
  CHECK(make_product(g1, g2).is_radial());
  CHECK_FALSE(make_product(g1, pa).is_radial());
  CHECK_FALSE(make_product(g1, pa).is_real());
}

TEST_CASE("scale mixtures") {
  DiscreteMeasure delta1{{{1.0}}, {1.0}};
  const auto s = make_schoenberg(delta1, 1.3, 2), st = make_stable(1.3, 1, 2);
  for (const auto& x : grid(2, 20, 5)) CHECK(std::abs(s.evaluate(x) - st.evaluate(x)) < 1e-15);
  DiscreteMeasure two{{{1.0}, {4.0}}, {0.5, 0.5}};
  const double one[1] = {1.0};
  CHECK(std::abs(make_schoenberg(two, 2, 1).evaluate(one) - 0.5 * (std::exp(-1.0) + std::exp(-4.0))) < 1e-16);
  const double expected = ep_moment(2, 0.7, 1) * 0.5 * (1.0 + std::pow(4.0, 0.35));
  CHECK(*make_schoenberg(two, 2, 1).analytic_moment(0.7) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("iterated differences") {
  const double one[1] = {1.0};
  CHECK(std::abs(iterated_difference(make_gaussian(1, 1), one, 2) -
                 (std::exp(-4.0) - 2.0 * std::exp(-1.0) + 1.0)) < 1e-15);
  CHECK(std::abs(iterated_difference(make_gaussian(1, 1), one, 2) - 0.282557) < 1e-6);
  for (int k = 1; k <= 6; ++k) CHECK(iterated_difference(make_constant_one(2), std::vector<double>{0.3, 2.0}, k) == 0.0);
  const std::vector<double> a = {0.4, -1.1};
  const auto pm = make_point_mass(a);
  for (const auto& x : grid(2, 20, 7)) {
    const std::complex<double> base = std::polar(1.0, -(x[0] * a[0] + x[1] * a[1])) - 1.0;
    for (int k = 1; k <= 5; ++k) {
      CHECK(std::abs(iterated_difference(pm, x, k) - std::pow(base, k)) < 1e-14 * std::pow(2.0, k));
      CHECK(real_part_difference(pm, x, k) == iterated_difference(pm, x, k).real());
    }
    CHECK(std::fabs(real_part_difference(pm, x, 1) - (std::cos(x[0] * a[0] + x[1] * a[1]) - 1.0)) < 1e-15);
  }
  // the stabilised sum agrees with the raw binomial sum including the m = 0 term
  const auto g = make_linnik(1.2, 0.8, 1);
  for (double x : {0.01, 0.3, 2.0, 9.0}) {
    const double xi[1] = {x};
    for (int k = 1; k <= 4; ++k) {
      const auto raw = iterated_difference(CharFn::PointFn([&](std::span<const double> v) { return g.evaluate(v); }), xi, k);
      CHECK(std::abs(raw - iterated_difference(g, xi, k)) < 1e-14 * std::pow(2.0, k));
    }
  }
}

TEST_CASE("differences of an asymmetric two-atom law") {
  DiscreteMeasure mu{{{0.5}, {-2.0}}, {0.25, 0.75}};
  const auto phi = make_discrete(mu);
  for (double x : {0.2, 1.0, 3.7}) {
    const double xi[1] = {x};
    for (int k = 1; k <= 4; ++k) {
      double direct = 0.0;
      for (int m = 0; m <= k; ++m) {
        double c = 1.0;
        for (int i = 1; i <= m; ++i) c = c * (k - m + i) / i;
        const double sign = (k - m) % 2 ? -1.0 : 1.0;
        direct += sign * c * (0.25 * std::cos(m * x * 0.5) + 0.75 * std::cos(m * x * 2.0));
      }
      CHECK(std::fabs(real_part_difference(phi, xi, k) - direct) < 1e-14);
    }
  }
}

TEST_CASE("empirical characteristic functions") {
  const auto one = make_empirical({{1.5}});
  const auto pm = make_point_mass({1.5});
  const double x[1] = {0.8};
  CHECK(std::abs(one.evaluate(x) - pm.evaluate(x)) < 1e-16);
  const auto sym = make_empirical({{0.9}, {-0.9}});
  CHECK(std::abs(sym.evaluate(x) - std::cos(0.8 * 0.9)) < 1e-16);
  std::mt19937_64 g(5);
  std::normal_distribution<double> nd;
  std::vector<std::vector<double>> pts(100, std::vector<double>(1));
  for (auto& p : pts) p[0] = nd(g);
  const auto emp = make_empirical(pts);
  const double xi[1] = {0.3};
  std::complex<double> direct = 0.0;
  double moment = 0.0;
  for (const auto& p : pts) {
    direct += std::polar(1.0, -0.3 * p[0]);
    moment += std::pow(std::fabs(p[0]), 0.7);
  }
  CHECK(std::abs(emp.evaluate(xi) - direct / 100.0) < 1e-15);
  CHECK(*emp.analytic_moment(0.7) == doctest::Approx(moment / 100.0).epsilon(1e-14));
  CHECK_THROWS(make_empirical({}));
}

TEST_CASE("truncated heavy-tailed atom family") {
  const auto m1 = pathological_measure(1.0, 1);
  REQUIRE(m1.size() == 1);
  CHECK(m1.atoms[0][0] == 2.0);
  CHECK(m1.weights[0] == 1.0);
  const auto m3 = pathological_measure(1.0, 3);
  const double raw[3] = {0.5, 1.0 / 16.0, 1.0 / 72.0};
  const double total = raw[0] + raw[1] + raw[2];
  for (int i = 0; i < 3; ++i) CHECK(m3.weights[i] == doctest::Approx(raw[i] / total).epsilon(1e-15));
  double prev = 0.0;
  for (int K : {4, 8, 12, 16}) {
    const double m = pathological_measure(0.5, K).absolute_moment(0.8);
    CHECK(m > prev);
    prev = m;
  }
}
