#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfm/charfn.hpp"
#include "cfm/radial.hpp"

namespace cfm {

enum class Formula { M12, M13, EvenLimit, AnalyticOracle, DiscreteExact };

std::string to_string(Formula f);

struct MomentResult {
  double value = 0.0;
  double error_estimate = 0.0;
  Formula formula = Formula::M13;
  int k_used = 0;
  double constant_A = 0.0;
  double sum_S = 0.0;
  double constant_I = 0.0;  ///< NaN where I(k, alpha) is undefined
  double integral = 0.0;    ///< the difference integral over R^d before scaling by A
  int panels = 0;
  std::vector<std::string> diagnostics;
};

struct MomentOptions {
  std::optional<int> k;     ///< difference order; chosen by select_k when empty
  bool prefer_real = true;  ///< integrate Re(phi) with odd k
  bool allow_shortcut = false;  ///< use exact sums for discrete laws and closed forms when known
};

struct KChoice {
  int k = 1;
  Formula formula = Formula::M13;
};

/// Smallest admissible difference order for alpha; even integers route to the even-order limit.
KChoice select_k(double alpha, bool prefer_real = true);

/// Quadrature nodes on the unit sphere S^{d-1} (d <= 3), closed under antipodes; weights sum to its area.
struct SphereRule {
  std::vector<std::vector<double>> directions;
  std::vector<double> weights;
};
SphereRule sphere_rule(int d, int order);

/// Which real quantity of the k-th difference of h = phi - psi is integrated.
enum class Channel { Real, Imag, Modulus, RealModulus };

struct DifferenceIntegral {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
  bool radial = false;
  OriginStatus origin_status = OriginStatus::Converged;
  double origin_slope = 0.0;  ///< smallest log-log slope of the integrand numerator at the origin
  double far_radius = 0.0;
  double far_part = 0.0;  ///< contribution from |xi| > r_split
  TailMode tail_used = TailMode::AnalyticBound;
  /// (r, direction-averaged |numerator|) at the lower end of each near-origin block.
  std::vector<std::pair<double, double>> origin_samples;
};

/// Integral over R^d of channel(Delta_xi^k (phi - psi)(0)) / |xi|^{d+alpha}; psi defaults to 1.
DifferenceIntegral difference_integral(const CharFn& phi, const std::optional<CharFn>& psi, int k, double alpha,
                                       Channel channel, const QuadratureSpec& spec);

/// int_0^inf r^{-1-alpha} Re Delta_r^k F(0) dr for the radial profile F of phi.
double radial_difference_integral(const CharFn& phi, int k, double alpha, const QuadratureSpec& spec = {});

/// Complex integral over R^d of Delta_xi^k phi(0) / |xi|^{d+alpha} via sphere nodes times radial quadrature.
cplx fulldim_difference_integral(const CharFn& phi, int k, double alpha, const QuadratureSpec& spec = {});

/// alpha-th absolute moment of the law of phi.
MomentResult absolute_moment(const CharFn& phi, double alpha, const QuadratureSpec& spec = {},
                             const MomentOptions& options = {});

/// Moment of even order 2n as the Richardson limit of M(2n - eps_j), eps_j = 0.1 * 2^{-j}.
MomentResult even_order_moment(const CharFn& phi, int n, const QuadratureSpec& spec = {});

}  // namespace cfm
