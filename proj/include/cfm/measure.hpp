#pragma once

#include <vector>

namespace cfm {

/// Finitely supported probability measure: atoms with nonnegative weights summing to one.
struct DiscreteMeasure {
  std::vector<std::vector<double>> atoms;
  std::vector<double> weights;

  int dimension() const { return atoms.empty() ? 0 : static_cast<int>(atoms.front().size()); }
  std::size_t size() const { return atoms.size(); }

  /// Throws RangeError on empty support, ragged atoms, negative weights or a total off 1 by > 1e-9.
  void validate() const;

  /// Exact sum of w_j |a_j|^alpha.
  double absolute_moment(double alpha) const;
};

DiscreteMeasure empirical_measure(const std::vector<std::vector<double>>& samples);

}  // namespace cfm
