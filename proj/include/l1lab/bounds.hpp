#pragma once

// Closed-form dimension lower bounds for (1+eps)-embeddings of the n-star.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "l1lab/error.hpp"

namespace l1lab {

enum class BoundBranch { SingleAtom, Counting, Volume };

inline const char* branch_name(BoundBranch b) {
  switch (b) {
    case BoundBranch::SingleAtom: return "single-atom-case";
    case BoundBranch::Counting: return "counting-case";
    case BoundBranch::Volume: return "volume";
  }
  return "?";
}

struct BoundReport {
  std::uint64_t n = 0;
  double eps = 0.0;  // distortion 1+eps; for the volume bound eps = D - 1
  std::uint64_t d_lower = 1;
  BoundBranch branch = BoundBranch::Counting;
  std::uint64_t family_size = 0;     // floor((n-1)/14), members that must fit
  std::uint64_t support_bound = 0;   // s at d_lower, capped at 2d+1
  double log_count = 0.0;            // log of the number of admissible members at d_lower
  double support_constant = 224.0;
  double packing_base = 3.0;
  std::string note = "as-stated constants, not optimized";
};

namespace detail {

inline double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

struct Feasibility {
  bool feasible;
  std::uint64_t support;
  double log_count;
  BoundBranch branch;
};

// Can a 1/2-unrelated family of `required` probability measures on 2d+1
// atoms with supports of size <= s exist, by the counting argument?
inline Feasibility counting_feasible(std::uint64_t d, std::uint64_t n, double eps,
                                     std::uint64_t required) {
  const double ground = 2.0 * static_cast<double>(d) + 1.0;
  const double s_raw =
      std::ceil(224.0 * eps * (2.0 * eps + 1.0 / static_cast<double>(n - 1)) * ground);
  const double s = std::min(s_raw, ground);
  Feasibility f{};
  f.support = static_cast<std::uint64_t>(s);
  if (s <= 1.0) {
    f.branch = BoundBranch::SingleAtom;
    f.log_count = std::log(ground);
    f.feasible = static_cast<double>(required) <= ground;
  } else {
    f.branch = BoundBranch::Counting;
    f.log_count = log_binomial(ground, s) + s * std::log(3.0);
    f.feasible = std::log(static_cast<double>(required)) <= f.log_count;
  }
  return f;
}

}  // namespace detail

// Smallest d >= 1 not ruled out by the counting inequality
//   floor((n-1)/14) <= C(2d+1, s) 3^s,  s = ceil(224 eps (2eps + 1/(n-1)) (2d+1)),
// with the single-atom case floor((n-1)/14) <= 2d+1 when s <= 1. No range
// checks beyond n >= 2 and eps > 0; see evaluate_lower_bound.
inline BoundReport lower_bound_search(std::uint64_t n, double eps) {
  if (n < 2) throw InvalidArgument("n must be at least 2");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  BoundReport r;
  r.n = n;
  r.eps = eps;
  r.family_size = (n - 1) / 14;
  const std::uint64_t required = std::max<std::uint64_t>(r.family_size, 1);

  // Feasibility is monotone in d: bracket by doubling, then bisect.
  std::uint64_t hi = 1;
  while (!detail::counting_feasible(hi, n, eps, required).feasible) hi *= 2;
  std::uint64_t lo = hi / 2;  // infeasible unless 0
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (detail::counting_feasible(mid, n, eps, required).feasible) hi = mid;
    else lo = mid;
  }
  const auto f = detail::counting_feasible(hi, n, eps, required);
  r.d_lower = hi;
  r.branch = f.branch;
  r.support_bound = f.support;
  r.log_count = f.log_count;
  return r;
}

// Requires 0 < eps < 1/16 and n >= 1/eps^2.
inline BoundReport evaluate_lower_bound(std::uint64_t n, double eps) {
  if (!(eps > 0.0 && eps < 1.0 / 16.0)) throw OutOfRange("evaluate_lower_bound needs 0 < eps < 1/16");
  if (static_cast<double>(n) < 1.0 / (eps * eps)) throw OutOfRange("evaluate_lower_bound needs n >= 1/eps^2");
  return lower_bound_search(n, eps);
}

// Smallest d >= 1 with (2D)^d >= n-1: disjoint l1 balls of radius 1/D inside a
// ball of radius 2.
inline std::uint64_t volume_lower_bound(std::uint64_t n, double D) {
  if (n < 2) throw OutOfRange("volume_lower_bound needs n >= 2");
  if (!(D > 1.0) || !std::isfinite(D)) throw OutOfRange("volume_lower_bound needs D > 1");
  const double target = static_cast<double>(n - 1);
  std::uint64_t d = 1;
  double capacity = 2.0 * D;
  while (capacity < target) {
    capacity *= 2.0 * D;
    ++d;
  }
  return d;
}

inline BoundReport volume_bound_report(std::uint64_t n, double D) {
  BoundReport r;
  r.n = n;
  r.eps = D - 1.0;
  r.d_lower = volume_lower_bound(n, D);
  r.branch = BoundBranch::Volume;
  r.family_size = n - 1;
  r.support_constant = 0.0;
  r.packing_base = 2.0 * D;
  r.log_count = static_cast<double>(r.d_lower) * std::log(2.0 * D);
  return r;
}

}  // namespace l1lab
