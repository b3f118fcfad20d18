#pragma once

#include <complex>
#include <cstdint>

namespace cfm {

inline constexpr int kMaxDifferenceOrder = 12;

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_, im_;
};

/// Gamma function (Lanczos, g = 7, nine terms; reflection below 1/2).
double gamma(double x);

/// log|Gamma(x)|.
double log_gamma(double x);

/// sin(pi x) with exact argument reduction.
double sin_pi(double x);

/// Exact binomial coefficient C(k, m) for 0 <= m <= k <= 62.
std::int64_t binomial(int k, int m);

/// Signed binomial weight C(k, m) (-1)^(k-m) of the k-th forward difference.
double difference_weight(int k, int m);

bool is_near_integer(double x, double tol = 1e-12);

/// S(k, alpha) = sum_{m=1}^k C(k,m) (-1)^(k-m) m^alpha, for 1 <= k <= 12.
double sum_S(int k, double alpha);

/// alpha (alpha-1) ... (alpha-k+1).
double falling_factorial(double alpha, int k);

/// Constant A(k, alpha, d) turning the difference integral into the alpha-th absolute moment.
double constant_A(int k, double alpha, int d);

/// B = 1/A: integral of (e^{-i xi.v} - 1)^k / |xi|^{d+alpha} equals B |v|^alpha.
double constant_B(int k, double alpha, int d);

/// I(k, alpha) = int_0^inf r^{-1-alpha} [(e^{-ir}-1)^k + (e^{ir}-1)^k] dr.
double constant_I(int k, double alpha);

/// int_0^inf r^{-2-delta} sin^2 r dr for |delta| < 1.
double mellin_sin2(double delta);

/// Surface area of the unit sphere in R^d (2 for d = 1).
double sphere_area(int d);

/// theta in (0,1) with S(k, alpha) = alpha (alpha-1)...(alpha-k+1) (theta k)^{alpha-k}.
double theta_recovery(int k, double alpha);

/// E_k(r) = (e^{-ir}-1)^k + (e^{ir}-1)^k in product form.
double difference_kernel(int k, double r);

/// min(2^{k+1}, k r^{k+1}) for odd k, min(2^{k+1}, 2 r^k) for even k.
double difference_kernel_bound(int k, double r);

}  // namespace cfm
