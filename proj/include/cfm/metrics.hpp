#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cfm/charfn.hpp"
#include "cfm/moment_engine.hpp"

namespace cfm {

/// Where a grid supremum was attained and how it was searched.
struct GridReport {
  int radial_nodes = 0;
  int angular_nodes = 0;
  int refinement_nodes = 0;
  double argmax_radius = 0.0;
  std::vector<double> argmax_direction;
  double coarse_value = 0.0;  ///< supremum before the refinement pass
};

struct MetricResult {
  double value = 0.0;
  double sup_component = 0.0;
  double integral_component = 0.0;
  double integral_error = 0.0;
  GridReport grid_report;
};

enum class Classification { Finite, DivergenceSuspected };
std::string to_string(Classification c);

struct MembershipReport {
  Classification classification = Classification::DivergenceSuspected;
  double integral_value = 0.0;  ///< integral of |Delta^k phi(0)| / |xi|^{d+alpha}
  double slope = 0.0;           ///< least-squares log-log slope of mean |Delta^k| over the 8 smallest radii
  double tail = 0.0;            ///< contribution from |xi| > r_split
  double implied_moment = 0.0;  ///< A(k,alpha,d) times the signed integral, when defined
  std::vector<std::string> notes;
};

/// Supremum of ratio(xi) over 96 log-spaced radii in [1e-6, 1e6] times sphere nodes, refined once
/// with 32 nodes around the argmax. Radial functions use a single direction.
struct SupProblem {
  std::function<double(std::span<const double>)> ratio;
  int dimension = 1;
  bool radial = false;
};
GridReport grid_sup(const SupProblem& problem, const QuadratureSpec& spec, double* value);

MetricResult d_inf(const CharFn& phi, const CharFn& psi, const QuadratureSpec& spec = {});
MetricResult d_beta(const CharFn& phi, const CharFn& psi, double beta, const QuadratureSpec& spec = {});
/// sup |Delta_xi phi(0)| / |xi|^beta.
MetricResult kbeta_seminorm(const CharFn& phi, double beta, const QuadratureSpec& spec = {});
/// sup |Delta_xi^k phi(0)| / |xi|^beta.
MetricResult difference_sup(const CharFn& phi, int k, double beta, const QuadratureSpec& spec = {});

/// Integral of |Delta^k (phi - psi)(0)| / |xi|^{d+alpha}.
MetricResult seminorm_alpha_k(const CharFn& phi, const CharFn& psi, double alpha, int k,
                              const QuadratureSpec& spec = {});
/// Same with Re phi - Re psi.
MetricResult real_seminorm_alpha_k(const CharFn& phi, const CharFn& psi, double alpha, int k,
                                   const QuadratureSpec& spec = {});
/// Integral of |phi - psi| / |xi|^{d+alpha}, 0 < alpha < 1.
MetricResult rho_alpha(const CharFn& phi, const CharFn& psi, double alpha, const QuadratureSpec& spec = {});

enum class CompositeKind { D, F, G, H };
CompositeKind composite_kind_from_string(const std::string& name);

/// D = sup + seminorm, F = d_beta + seminorm, G = sup + Re-seminorm, H = d_beta + Re-seminorm.
MetricResult composite_metric(CompositeKind kind, const CharFn& phi, const CharFn& psi, double alpha, double beta,
                              int k, const QuadratureSpec& spec = {});

/// Numerical classification of whether phi belongs to the class with a finite alpha-th moment.
MembershipReport membership(const CharFn& phi, double alpha, int k, const QuadratureSpec& spec = {});

/// Integral of |d^sigma phi(xi) - d^sigma phi(0)| / |xi|^{d+gamma}, 0 < gamma < 1.
double derivative_seminorm(const CharFn& phi, const std::vector<int>& sigma, double gamma,
                           const QuadratureSpec& spec = {});

}  // namespace cfm
