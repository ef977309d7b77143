#pragma once

// Top-k selection of a nonnegative multiset that keeps half the total mass
// whenever the pairwise-min sum is small.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "l1lab/error.hpp"

namespace l1lab {

// Ceiling that ignores floating noise just above an integer.
inline std::size_t ceil_count(double x) {
  if (!(x > 0.0)) return 0;
  return static_cast<std::size_t>(std::ceil(x - 1e-9 * std::max(1.0, std::abs(x))));
}

// Positions of `values` sorted by decreasing value, ties by lower position.
inline std::vector<std::size_t> order_by_weight(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order;
}

// Sum over ordered pairs x != y of min(x, y); equals sum_r 2(r-1) a_r on the
// decreasing order.
inline double pairwise_min_sum(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double s = 0.0;
  for (std::size_t r = 1; r < sorted.size(); ++r) s += 2.0 * static_cast<double>(r) * sorted[r];
  return s;
}

struct SparseSelection {
  std::vector<std::size_t> indices;  // positions into the input, heaviest first
  double selected_sum = 0.0;
  double total_sum = 0.0;
  bool precondition_held = false;
};

// Picks the ceil(delta(|S|-1)) largest entries. When
//   delta (|S|-1) sum(S) >= sum_{x != y} min(x, y)
// the selection carries at least half of sum(S); that case is asserted.
inline SparseSelection sparse_select(std::span<const double> values, double delta) {
  if (values.size() < 2) throw InvalidArgument("sparse_select needs at least two values");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("sparse_select needs delta in (0,1)");
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("values must be nonnegative");

  const double m = static_cast<double>(values.size() - 1);
  const std::size_t take = std::min(values.size(), ceil_count(delta * m));

  SparseSelection out;
  const auto order = order_by_weight(values);
  out.indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
  for (double v : values) out.total_sum += v;
  for (std::size_t i : out.indices) out.selected_sum += values[i];

  const double lhs = delta * m * out.total_sum;
  const double rhs = pairwise_min_sum(values);
  out.precondition_held = lhs >= rhs - 1e-12 * std::max(1.0, rhs);
  if (out.precondition_held && out.selected_sum < 0.5 * out.total_sum - 1e-9) {
    throw CertificateViolation("sparse_select.half_mass",
                               "top-k selection lost more than half the mass");
  }
  return out;
}

}  // namespace l1lab
