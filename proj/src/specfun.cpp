#include "cfm/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "cfm/errors.hpp"

namespace cfm {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_series(double xm1) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (xm1 + static_cast<double>(i));
  return a;
}

void check_pole(double x) {
  if (x <= 0.0 && x == std::floor(x)) throw DomainError("gamma: pole at " + std::to_string(x));
}

double int_power(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

double sin_pi(double x) {
  double r = std::fmod(x, 2.0);
  if (r < -1.0) r += 2.0;
  if (r > 1.0) r -= 2.0;
  if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(kPi * r);
}

double gamma(double x) {
  check_pole(x);
  if (x < 0.5) return kPi / (sin_pi(x) * gamma(1.0 - x));
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  const double half = std::pow(t, 0.5 * (xm1 + 0.5));
  return std::sqrt(2.0 * kPi) * half * (half * std::exp(-t)) * lanczos_series(xm1);
}

double log_gamma(double x) {
  check_pole(x);
  if (x < 0.5) return std::log(kPi / std::fabs(sin_pi(x))) - log_gamma(1.0 - x);
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (xm1 + 0.5) * std::log(t) - t + std::log(lanczos_series(xm1));
}

std::int64_t binomial(int k, int m) {
  if (k < 0 || k > 62) throw RangeError("binomial: k out of range");
  if (m < 0 || m > k) return 0;
  if (m > k - m) m = k - m;
  std::int64_t c = 1;
  for (int i = 1; i <= m; ++i) c = c * (k - m + i) / i;
  return c;
}

double difference_weight(int k, int m) {
  const double c = static_cast<double>(binomial(k, m));
  return ((k - m) % 2 == 0) ? c : -c;
}

bool is_near_integer(double x, double tol) { return std::fabs(x - std::round(x)) <= tol; }

double sum_S(int k, double alpha) {
  if (k < 1 || k > kMaxDifferenceOrder) throw RangeError("sum_S: k must lie in [1, 12]");
  const bool integral = alpha >= 0.0 && alpha == std::floor(alpha) && alpha <= 64.0;
  CompensatedSum s;
  for (int m = 1; m <= k; ++m) {
    const double pw = integral ? int_power(m, static_cast<int>(alpha)) : std::pow(static_cast<double>(m), alpha);
    s.add(difference_weight(k, m) * pw);
  }
  return s.value();
}

double falling_factorial(double alpha, int k) {
  double f = 1.0;
  for (int j = 0; j < k; ++j) f *= alpha - j;
  return f;
}

double constant_A(int k, double alpha, int d) {
  if (d < 1) throw RangeError("constant_A: dimension must be positive");
  if (!(alpha > 0.0)) throw RangeError("constant_A: alpha must be positive");
  if (is_near_integer(alpha) && static_cast<long>(std::round(alpha)) % 2 == 0)
    throw DomainError("constant_A: even integer order");
  if (is_near_integer(alpha) && std::round(alpha) < k)
    throw DomainError("constant_A: S(k, alpha) vanishes for integer alpha < k");
  const double s = sum_S(k, alpha);
  if (s == 0.0) throw DomainError("constant_A: S(k, alpha) vanishes");
  const double num = -std::sin(alpha * kPi / 2.0) * gamma(alpha + 1.0) * gamma((alpha + d) / 2.0);
  const double den = std::pow(kPi, (d + 1) / 2.0) * s * gamma((alpha + 1.0) / 2.0);
  return num / den;
}

double constant_B(int k, double alpha, int d) { return 1.0 / constant_A(k, alpha, d); }

double constant_I(int k, double alpha) {
  if (k < 1 || k > kMaxDifferenceOrder) throw RangeError("constant_I: k must lie in [1, 12]");
  const double upper = (k % 2 == 1) ? k + 1.0 : static_cast<double>(k);
  if (!(alpha > 0.0 && alpha < upper)) throw RangeError("constant_I: alpha outside the convergence range");
  if (is_near_integer(alpha) && std::round(alpha) < k) return 0.0;
  if (is_near_integer(alpha) && std::round(alpha) == k) return (((k + 1) / 2) % 2 == 0) ? kPi : -kPi;
  return -kPi * sum_S(k, alpha) / (std::sin(kPi * alpha / 2.0) * gamma(alpha + 1.0));
}

double mellin_sin2(double delta) {
  if (!(std::fabs(delta) < 1.0)) throw RangeError("mellin_sin2: |delta| must be < 1");
  if (delta == 0.0) return kPi / 2.0;
  const double x = kPi * delta / 2.0;
  const double sinc = (std::fabs(x) < 1e-4) ? 1.0 - x * x / 6.0 + x * x * x * x / 120.0 : std::sin(x) / x;
  return std::pow(2.0, delta) * gamma(1.0 - delta) * (kPi / 2.0) * sinc / (1.0 + delta);
}

double sphere_area(int d) {
  if (d < 1) throw RangeError("sphere_area: dimension must be positive");
  if (d == 1) return 2.0;
  return 2.0 * std::pow(kPi, d / 2.0) / gamma(d / 2.0);
}

double theta_recovery(int k, double alpha) {
  const double ff = falling_factorial(alpha, k);
  if (std::fabs(ff) < 1e-10) throw DomainError("theta_recovery: falling factorial vanishes");
  if (is_near_integer(alpha - k)) throw DomainError("theta_recovery: alpha = k leaves theta undetermined");
  const double ratio = sum_S(k, alpha) / ff;
  if (!(ratio > 0.0)) throw DomainError("theta_recovery: mean-value ratio is not positive");
  return std::pow(ratio, 1.0 / (alpha - k)) / k;
}

double difference_kernel(int k, double r) {
  const double s = std::pow(std::sin(r / 2.0), k) * std::pow(2.0, k + 1);
  if (k % 2 == 1) {
    const double sign = (((k + 1) / 2) % 2 == 0) ? 1.0 : -1.0;
    return sign * s * std::sin(k * r / 2.0);
  }
  const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
  return sign * s * std::cos(k * r / 2.0);
}

double difference_kernel_bound(int k, double r) {
  const double cap = std::pow(2.0, k + 1);
  const double small = (k % 2 == 1) ? k * std::pow(r, k + 1) : 2.0 * std::pow(r, k);
  return std::fmin(cap, small);
}

}  // namespace cfm
