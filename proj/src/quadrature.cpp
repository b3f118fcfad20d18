#include "cfm/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <numbers>
#include <queue>

#include "cfm/errors.hpp"
#include "cfm/specfun.hpp"

namespace cfm::quad {

namespace {

constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525242371, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Piece {
  double a, b;
  Estimate est;
  bool operator<(const Piece& o) const { return est.error < o.est.error; }
};

}  // namespace

Estimate gauss_kronrod21(const RealFn& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = kWgk[10] * fc;
  double gauss = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {kron * h, std::fabs((kron - gauss) * h)};
}

AdaptiveResult integrate_adaptive(const RealFn& f, double a, double b, double abs_tol, double rel_tol,
                                  int max_intervals) {
  if (a == b) return {0.0, 0.0, 0, true};
  std::priority_queue<Piece> heap;
  const Estimate first = gauss_kronrod21(f, a, b);
  heap.push({a, b, first});
  double total = first.value;
  double err = first.error;
  int count = 1;
  while (err > std::max(abs_tol, rel_tol * std::fabs(total)) && count < max_intervals) {
    const Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    const Estimate l = gauss_kronrod21(f, worst.a, mid);
    const Estimate r = gauss_kronrod21(f, mid, worst.b);
    total += l.value + r.value - worst.est.value;
    err += l.error + r.error - worst.est.error;
    heap.push({worst.a, mid, l});
    heap.push({mid, worst.b, r});
    ++count;
  }
  std::vector<Piece> pieces;
  pieces.reserve(heap.size());
  while (!heap.empty()) {
    pieces.push_back(heap.top());
    heap.pop();
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
  CompensatedSum value, error;
  for (const Piece& p : pieces) {
    value.add(p.est.value);
    error.add(p.est.error);
  }
  AdaptiveResult out;
  out.value = value.value();
  out.error = error.value();
  out.intervals = count;
  out.converged = out.error <= std::max(abs_tol, rel_tol * std::fabs(out.value));
  if (!std::isfinite(out.value)) throw QuadratureFailure("non-finite integrand value");
  return out;
}

Rule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw RangeError("gauss_legendre: order must be positive");
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = c - h * x;
    rule.nodes[n - 1 - i] = c + h * x;
    rule.weights[i] = rule.weights[n - 1 - i] = w * h;
  }
  return rule;
}

std::vector<AdaptiveResult> integrate_panels_serial(const RealFn& f, std::span<const Panel> panels,
                                                    double abs_tol, double rel_tol, int max_intervals) {
  std::vector<AdaptiveResult> out(panels.size());
  for (std::size_t i = 0; i < panels.size(); ++i)
    out[i] = integrate_adaptive(f, panels[i].a, panels[i].b, abs_tol, rel_tol, max_intervals);
  return out;
}

std::vector<AdaptiveResult> integrate_panels(const RealFn& f, std::span<const Panel> panels, double abs_tol,
                                             double rel_tol, int max_intervals, ExecPolicy policy) {
  if (policy == ExecPolicy::Serial || panels.size() < 2)
    return integrate_panels_serial(f, panels, abs_tol, rel_tol, max_intervals);
  std::vector<AdaptiveResult> out(panels.size());
  std::vector<std::exception_ptr> errors(panels.size());
  const long n = static_cast<long>(panels.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = integrate_adaptive(f, panels[i].a, panels[i].b, abs_tol, rel_tol, max_intervals);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<double> evaluate_indexed(const std::function<double(std::size_t)>& g, std::size_t n,
                                     ExecPolicy policy) {
  std::vector<double> out(n);
  if (policy == ExecPolicy::Serial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = g(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(n);
  const long m = static_cast<long>(n);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < m; ++i) {
    try {
      out[i] = g(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace cfm::quad
