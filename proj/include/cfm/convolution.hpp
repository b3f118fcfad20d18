#pragma once

#include <span>

#include "cfm/charfn.hpp"
#include "cfm/moment_engine.hpp"

namespace cfm {

struct ConvolutionBoundReport {
  double gamma = 0.0;     ///< min(alpha, beta)
  double lhs = 0.0;       ///< moment of the convolution at order gamma
  double rhs_core = 0.0;  ///< M_mu(alpha)^{gamma/alpha} + M_nu(beta)^{gamma/beta}
  double ratio = 0.0;
  MomentResult lhs_detail;
};

/// sum_m C(k,m) Delta^m phi(0) Delta^{k-m} psi(m xi), the k-th difference of phi psi at the origin.
cplx leibniz_difference(const CharFn& phi, const CharFn& psi, std::span<const double> xi, int k);

/// Moment of order gamma of the convolution, i.e. of the product characteristic function.
MomentResult convolution_moment(const CharFn& phi, const CharFn& psi, double gamma, const QuadratureSpec& spec = {},
                                const MomentOptions& options = {});

ConvolutionBoundReport convolution_bound_report(const CharFn& phi, const CharFn& psi, double alpha, double beta,
                                                const QuadratureSpec& spec = {}, const MomentOptions& options = {});

}  // namespace cfm
