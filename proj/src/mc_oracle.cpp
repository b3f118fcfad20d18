#include "cfm/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cfm/errors.hpp"
#include "cfm/parallel.hpp"
#include "cfm/specfun.hpp"

namespace cfm {

namespace rng {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) { return splitmix64(seed ^ splitmix64(stream)); }

}  // namespace rng

namespace {

// Transforms are written out so the output is fixed by the mt19937_64 bit stream alone.
class Source {
 public:
  explicit Source(std::uint64_t s) : eng_(s) {}

  double uniform() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53; }
  double normal() {
    const double u = uniform(), v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }
  double exponential() { return -std::log(uniform()); }
  double gamma(double shape) {
    if (shape < 1.0) return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }
  double cms(double p) {
    const double v = std::numbers::pi * (uniform() - 0.5);
    const double w = exponential();
    return std::sin(p * v) / std::pow(std::cos(v), 1.0 / p) * std::pow(std::cos(v - p * v) / w, (1.0 - p) / p);
  }
  double stable(double p) {
    if (p == 2.0) return std::numbers::sqrt2 * normal();
    if (p == 1.0) return normal() / std::fabs(normal());
    return cms(p);
  }

 private:
  std::mt19937_64 eng_;
};

using PointGen = std::function<void(Source&, std::vector<double>&)>;

SampleSet generate(int d, std::size_t n, std::uint64_t seed, std::string family, const PointGen& gen,
                   ExecPolicy policy) {
  if (n < 1) throw RangeError("sampler: n must be at least 1");
  if (d < 1) throw RangeError("sampler: dimension must be at least 1");
  SampleSet out;
  out.dimension = d;
  out.seed = seed;
  out.family = std::move(family);
  out.points.assign(n, std::vector<double>(d));
  const std::size_t chunks = (n + rng::kChunk - 1) / rng::kChunk;
  map_indexed<int>(
      chunks,
      [&](std::size_t c) {
        Source src(rng::stream_seed(seed, c));
        const std::size_t end = std::min(n, (c + 1) * rng::kChunk);
        for (std::size_t i = c * rng::kChunk; i < end; ++i) gen(src, out.points[i]);
        return 0;
      },
      policy);
  return out;
}

void check_p(double p) {
  if (!(p > 0.0 && p <= 2.0)) throw RangeError("stable index p must lie in (0, 2]");
}

}  // namespace

SampleSet sample_gaussian(double t, int d, std::size_t n, std::uint64_t seed, ExecPolicy policy) {
  if (!(t > 0.0)) throw RangeError("sample_gaussian: t must be positive");
  const double s = std::sqrt(2.0 * t);
  return generate(
      d, n, seed, "gaussian",
      [s](Source& src, std::vector<double>& x) {
        for (double& c : x) c = s * src.normal();
      },
      policy);
}

SampleSet sample_isotropic_cauchy(int d, std::size_t n, std::uint64_t seed, ExecPolicy policy) {
  return generate(
      d, n, seed, "cauchy",
      [](Source& src, std::vector<double>& x) {
        for (double& c : x) c = src.normal();
        const double w = std::fabs(src.normal());
        for (double& c : x) c /= w;
      },
      policy);
}

SampleSet sample_sym_stable_1d(double p, std::size_t n, std::uint64_t seed, ExecPolicy policy) {
  check_p(p);
  return generate(
      1, n, seed, "stable", [p](Source& src, std::vector<double>& x) { x[0] = src.stable(p); }, policy);
}

SampleSet sample_cms_1d(double p, std::size_t n, std::uint64_t seed, ExecPolicy policy) {
  check_p(p);
  return generate(
      1, n, seed, "stable-cms", [p](Source& src, std::vector<double>& x) { x[0] = src.cms(p); }, policy);
}

SampleSet sample_linnik_1d(double p, double beta, std::size_t n, std::uint64_t seed, ExecPolicy policy) {
  check_p(p);
  if (!(beta > 0.0)) throw RangeError("sample_linnik_1d: beta must be positive");
  return generate(
      1, n, seed, "linnik",
      [p, beta](Source& src, std::vector<double>& x) {
        const double t = src.gamma(beta);
        x[0] = std::pow(t, 1.0 / p) * src.stable(p);
      },
      policy);
}

McEstimate mc_moment(const SampleSet& samples, double alpha) {
  if (!(alpha >= 0.0)) throw RangeError("mc_moment: alpha must be non-negative");
  const std::size_t n = samples.points.size();
  if (n == 0) throw RangeError("mc_moment: empty sample");
  CompensatedSum sum, sq;
  for (const auto& x : samples.points) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    const double v = std::pow(r2, alpha / 2.0);
    sum.add(v);
    sq.add(v * v);
  }
  McEstimate e;
  e.estimate = sum.value() / n;
  if (n > 1) {
    const double var = std::max(0.0, (sq.value() - n * e.estimate * e.estimate) / (n - 1));
    e.std_error = std::sqrt(var / n);
  }
  return e;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw RangeError("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

double ks_statistic(std::vector<double> a, const std::function<double(double)>& cdf) {
  if (a.empty()) throw RangeError("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = cdf(a[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

}  // namespace cfm
