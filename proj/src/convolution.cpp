#include "cfm/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cfm/errors.hpp"
#include "cfm/specfun.hpp"

namespace cfm {

cplx leibniz_difference(const CharFn& phi, const CharFn& psi, std::span<const double> xi, int k) {
  if (k < 1 || k > kMaxDifferenceOrder) throw RangeError("leibniz_difference: k out of range");
  if (phi.dim() != psi.dim() || static_cast<int>(xi.size()) != phi.dim())
    throw RangeError("leibniz_difference: dimension mismatch");
  std::vector<double> base(xi.size());
  CompensatedComplexSum sum;
  for (int m = 0; m <= k; ++m) {
    const cplx left = m == 0 ? cplx(1.0) : iterated_difference(phi, xi, m);
    for (std::size_t c = 0; c < xi.size(); ++c) base[c] = m * xi[c];
    const cplx right = m == k ? psi.evaluate(base) : difference_at(psi, base, xi, k - m);
    sum.add(static_cast<double>(binomial(k, m)) * left * right);
  }
  return sum.value();
}

MomentResult convolution_moment(const CharFn& phi, const CharFn& psi, double gamma, const QuadratureSpec& spec,
                                const MomentOptions& options) {
  return absolute_moment(make_product(phi, psi), gamma, spec, options);
}

ConvolutionBoundReport convolution_bound_report(const CharFn& phi, const CharFn& psi, double alpha, double beta,
                                                const QuadratureSpec& spec, const MomentOptions& options) {
  if (!(alpha > 0.0 && beta > 0.0)) throw RangeError("convolution_bound_report: orders must be positive");
  ConvolutionBoundReport rep;
  rep.gamma = std::min(alpha, beta);
  rep.lhs_detail = convolution_moment(phi, psi, rep.gamma, spec, options);
  rep.lhs = rep.lhs_detail.value;
  const double ma = absolute_moment(phi, alpha, spec, options).value;
  const double mb = absolute_moment(psi, beta, spec, options).value;
  rep.rhs_core = std::pow(ma, rep.gamma / alpha) + std::pow(mb, rep.gamma / beta);
  rep.ratio = rep.lhs / rep.rhs_core;
  return rep;
}

}  // namespace cfm
