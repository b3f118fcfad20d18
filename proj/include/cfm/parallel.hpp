#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include "cfm/quadrature.hpp"

namespace cfm {

/// out[i] = f(i) for i in [0, n). Exceptions are rethrown after the loop, lowest index first.
template <class T, class F>
std::vector<T> map_indexed(std::size_t n, F&& f, ExecPolicy policy) {
  std::vector<T> out(n);
  if (policy == ExecPolicy::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(n);
  const long m = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < m; ++i) {
    try {
      out[i] = f(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace cfm
