#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cfm/errors.hpp"
#include "cfm/specfun.hpp"
#include "oracles.hpp"

using namespace cfm;
using doctest::Approx;

namespace {
double rel(double a, double b) { return std::fabs(a / b - 1.0); }
}  // namespace

TEST_CASE("gamma at known points") {
  CHECK(rel(cfm::gamma(0.5), std::sqrt(std::numbers::pi)) < 1e-14);
  CHECK(rel(cfm::gamma(5.0), 24.0) < 1e-14);
  CHECK(rel(cfm::gamma(3.7), 4.1706517837966) < 1e-13);
  CHECK_THROWS_AS(cfm::gamma(0.0), DomainError);
  CHECK_THROWS_AS(cfm::gamma(-3.0), DomainError);
}

TEST_CASE("gamma agrees with the Stirling oracle") {
  for (double x = 0.1; x <= 50.0; x += 0.37) CHECK(rel(cfm::gamma(x), static_cast<double>(oracle::gamma(x))) < 1e-12);
  for (double x : {-0.5, -1.3, -2.7}) CHECK(rel(cfm::gamma(x), static_cast<double>(oracle::gamma(x))) < 1e-12);
  CHECK(std::fabs(log_gamma(30.5) - std::log(static_cast<double>(oracle::gamma(30.5)))) < 1e-12);
}

TEST_CASE("gamma identities") {
  for (double x = 0.1; x <= 50.0; x += 0.29) CHECK(rel(cfm::gamma(x + 1.0), x * cfm::gamma(x)) < 1e-12);
  for (double x = 0.05; x < 1.0; x += 0.07)
    CHECK(rel(cfm::gamma(1.0 - x) * cfm::gamma(x) * std::sin(std::numbers::pi * x), std::numbers::pi) < 1e-12);
  for (double x = 0.2; x < 20.0; x += 0.61)
    CHECK(rel(cfm::gamma(x) * cfm::gamma(x + 0.5), std::pow(2.0, 1.0 - 2.0 * x) * std::sqrt(std::numbers::pi) * cfm::gamma(2.0 * x)) <
          1e-11);
}

TEST_CASE("alternating binomial sums") {
  CHECK(sum_S(2, 1.0) == 0.0);
  CHECK(sum_S(3, 3.0) == 6.0);
  CHECK(sum_S(1, 0.5) == 1.0);
  for (int k = 1; k <= 8; ++k) {
    for (int j = 1; j < k; ++j) CHECK(sum_S(k, j) == 0.0);
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    CHECK(sum_S(k, k) == fact);
  }
  CHECK_THROWS_AS(sum_S(0, 1.0), RangeError);
  CHECK_THROWS_AS(sum_S(13, 1.0), RangeError);
}

TEST_CASE("mean value form of the alternating sum") {
  for (int k = 1; k <= 6; ++k)
    for (double a = 0.05; a < k; a += 0.1) {
      if (is_near_integer(a, 1e-6)) continue;
      const double th = theta_recovery(k, a);
      CHECK(th > 0.0);
      CHECK(th < 1.0);
    }
  CHECK_THROWS_AS(theta_recovery(3, 3.0), DomainError);
}

TEST_CASE("constant A") {
  CHECK(constant_A(1, 1.0, 1) == Approx(-1.0 / std::numbers::pi).epsilon(1e-14));
  CHECK(constant_A(1, 0.5, 1) ==
        Approx(-std::sin(std::numbers::pi / 4) * cfm::gamma(1.5) / std::numbers::pi).epsilon(1e-14));
  for (double a : {0.3, 0.7, 1.4, 1.9})
    CHECK(constant_A(1, a, 1) ==
          Approx(-std::sin(a * std::numbers::pi / 2) * cfm::gamma(a + 1) / std::numbers::pi).epsilon(1e-13));
  CHECK_THROWS_AS(constant_A(2, 1.0, 1), DomainError);
  CHECK_THROWS_AS(constant_A(3, 2.0, 1), DomainError);
  CHECK_THROWS_AS(constant_A(1, 4.0, 2), DomainError);
}

TEST_CASE("constant B is the reciprocal of A") {
  CHECK(constant_B(1, 1.0, 1) == Approx(-std::numbers::pi).epsilon(1e-14));
  CHECK(constant_B(1, 0.5, 1) == Approx(1.0 / constant_A(1, 0.5, 1)).epsilon(1e-14));
  CHECK(std::isfinite(constant_B(3, 3.0, 2)));
  CHECK(constant_B(3, 3.0, 2) != 0.0);
  for (int k = 1; k <= 5; ++k)
    for (int d = 1; d <= 3; ++d)
      for (double a = 0.15; a < k + 1; a += 0.2) {
        if (is_near_integer(a, 1e-6)) continue;
        CHECK(rel(constant_A(k, a, d) * constant_B(k, a, d), 1.0) < 1e-12);
      }
}

TEST_CASE("constant I special values") {
  CHECK(std::fabs(constant_I(1, 1.0) + std::numbers::pi) < 1e-12);
  CHECK(std::fabs(constant_I(3, 3.0) - std::numbers::pi) < 1e-12);
  CHECK(std::fabs(constant_I(5, 5.0) + std::numbers::pi) < 1e-12);
  CHECK(constant_I(4, 2.0) == 0.0);
  CHECK_THROWS_AS(constant_I(2, 2.0), RangeError);
  CHECK_THROWS_AS(constant_I(3, 4.0), RangeError);
  CHECK_THROWS_AS(constant_I(1, 0.0), RangeError);
}

TEST_CASE("constant I matches the defining integral") {
  CHECK(std::fabs(constant_I(2, 0.7) - static_cast<double>(oracle::constant_I(2, 0.7L))) < 1e-8);
  CHECK(std::fabs(constant_I(1, 1.0) - static_cast<double>(oracle::constant_I(1, 1.0L))) < 1e-8);
  for (int k = 1; k <= 5; ++k) {
    const double top = k % 2 ? k + 1.0 : k;
    for (double a = 0.3; a < top; a += 0.4) {
      if (std::fabs(a - std::round(a)) < 0.05) continue;
      CAPTURE(k);
      CAPTURE(a);
      CHECK(std::fabs(constant_I(k, a) - static_cast<double>(oracle::constant_I(k, a))) < 1e-7);
    }
  }
}

TEST_CASE("Mellin transform of sin squared") {
  CHECK(mellin_sin2(0.0) == std::numbers::pi / 2);
  CHECK(mellin_sin2(0.5) ==
        Approx(std::sqrt(2.0) * cfm::gamma(0.5) / (0.5 * 1.5) * std::sin(std::numbers::pi / 4)).epsilon(1e-14));
  for (double dl : {-0.9, -0.5, -0.1, 0.3, 0.5, 0.8})
    CHECK(std::fabs(mellin_sin2(dl) - static_cast<double>(oracle::mellin_sin2(dl))) < 1e-8);
  CHECK_THROWS_AS(mellin_sin2(1.0), RangeError);
  CHECK_THROWS_AS(mellin_sin2(-1.0), RangeError);
}

TEST_CASE("sphere area") {
  CHECK(sphere_area(1) == 2.0);
  CHECK(sphere_area(2) == Approx(2.0 * std::numbers::pi).epsilon(1e-15));
  CHECK(sphere_area(3) == Approx(4.0 * std::numbers::pi).epsilon(1e-15));
}

TEST_CASE("difference kernel and its bound") {
  for (int k = 1; k <= 7; k += 2)
    for (double r = 1e-3; r < 200.0; r *= 1.37) {
      std::complex<double> e = std::pow(std::complex<double>(std::cos(r) - 1.0, -std::sin(r)), k);
      CHECK(std::fabs(difference_kernel(k, r) - 2.0 * e.real()) < 1e-12 * std::pow(2.0, k + 1));
      CHECK(std::fabs(difference_kernel(k, r)) <= difference_kernel_bound(k, r) * (1 + 1e-12));
      CHECK(difference_kernel_bound(k, r) == Approx(std::min(std::pow(2.0, k + 1), k * std::pow(r, k + 1))));
    }
}
