#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cfm/quadrature.hpp"

namespace cfm {

/// Points in R^d drawn by one of the samplers below. Reproducible from (family, seed, n).
struct SampleSet {
  int dimension = 1;
  std::vector<std::vector<double>> points;
  std::uint64_t seed = 0;
  std::string family;
};

/// Stream s of a run seeded with `seed` starts mt19937_64 from splitmix64(seed ^ splitmix64(s)).
/// Chunks of kChunk consecutive points use consecutive streams, so output does not depend on threads.
namespace rng {
inline constexpr std::size_t kChunk = 65536;
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);
}  // namespace rng

/// Variance 2t per coordinate: the law with characteristic function exp(-t |xi|^2).
SampleSet sample_gaussian(double t, int d, std::size_t n, std::uint64_t seed, ExecPolicy policy = ExecPolicy::Parallel);
/// Z / |W| with Z standard normal in R^d and W standard normal: characteristic function exp(-|xi|).
SampleSet sample_isotropic_cauchy(int d, std::size_t n, std::uint64_t seed, ExecPolicy policy = ExecPolicy::Parallel);
/// Symmetric p-stable with characteristic function exp(-|xi|^p); p = 1, 2 use the Cauchy and Gaussian samplers.
SampleSet sample_sym_stable_1d(double p, std::size_t n, std::uint64_t seed, ExecPolicy policy = ExecPolicy::Parallel);
/// Chambers-Mallows-Stuck without the p = 1, 2 special cases.
SampleSet sample_cms_1d(double p, std::size_t n, std::uint64_t seed, ExecPolicy policy = ExecPolicy::Parallel);
/// T^{1/p} S with T ~ Gamma(beta, 1) and S symmetric p-stable: characteristic function (1 + |xi|^p)^{-beta}.
SampleSet sample_linnik_1d(double p, double beta, std::size_t n, std::uint64_t seed,
                           ExecPolicy policy = ExecPolicy::Parallel);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;  ///< sample standard deviation over sqrt(n)
};

/// Sample mean of |X|^alpha.
McEstimate mc_moment(const SampleSet& samples, double alpha);

/// Two-sample Kolmogorov-Smirnov statistic for d = 1.
double ks_statistic(std::vector<double> a, std::vector<double> b);
/// One-sample Kolmogorov-Smirnov statistic against a CDF, d = 1.
double ks_statistic(std::vector<double> a, const std::function<double(double)>& cdf);

}  // namespace cfm
