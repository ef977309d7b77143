#pragma once

// Finite measures on the ground set {0, ..., k-1}, total variation geometry,
// domination, restriction, and the eps-unrelatedness predicate.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "l1lab/error.hpp"

namespace l1lab {

// Weights below this are stored as exact zero so supports are well defined.
inline constexpr double kWeightFloor = 1e-15;
inline constexpr double kMassTolerance = 1e-9;
inline constexpr double kUnrelatedTolerance = 1e-9;

class FiniteMeasure {
 public:
  FiniteMeasure() = default;

  explicit FiniteMeasure(std::vector<double> weights) : weights_(std::move(weights)) {
    for (double& w : weights_) {
      if (!std::isfinite(w) || w < -kWeightFloor) {
        throw InvalidArgument("measure weights must be finite and nonnegative");
      }
      if (w < kWeightFloor) w = 0.0;
    }
    mass_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  }

  static FiniteMeasure zero(std::size_t k) { return FiniteMeasure(std::vector<double>(k, 0.0)); }

  static FiniteMeasure point_mass(std::size_t k, std::size_t atom, double weight = 1.0) {
    if (atom >= k) throw InvalidArgument("atom out of range");
    std::vector<double> w(k, 0.0);
    w[atom] = weight;
    return FiniteMeasure(std::move(w));
  }

  std::size_t ground_size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  double total_mass() const { return mass_; }

  double mass_of(std::span<const std::size_t> atoms) const {
    double s = 0.0;
    for (std::size_t i : atoms) s += weights_.at(i);
    return s;
  }

  std::size_t support_size() const {
    return static_cast<std::size_t>(
        std::count_if(weights_.begin(), weights_.end(), [](double w) { return w > 0.0; }));
  }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < weights_.size(); ++i)
      if (weights_[i] > 0.0) s.push_back(i);
    return s;
  }

  bool is_probability(double tol = kMassTolerance) const {
    return std::abs(mass_ - 1.0) <= tol;
  }

  friend bool operator==(const FiniteMeasure& a, const FiniteMeasure& b) {
    return a.weights_ == b.weights_;
  }

 private:
  std::vector<double> weights_;
  double mass_ = 0.0;
};

// A FiniteMeasure whose total mass is 1 within kMassTolerance.
class ProbabilityMeasure {
 public:
  explicit ProbabilityMeasure(FiniteMeasure m) : m_(std::move(m)) {
    if (!m_.is_probability()) throw InvalidArgument("probability measure must have mass 1");
  }
  const FiniteMeasure& measure() const { return m_; }
  operator const FiniteMeasure&() const { return m_; }
  std::size_t ground_size() const { return m_.ground_size(); }
  double operator[](std::size_t i) const { return m_[i]; }

 private:
  FiniteMeasure m_;
};

namespace detail {
inline void require_same_ground(const FiniteMeasure& a, const FiniteMeasure& b) {
  if (a.ground_size() != b.ground_size()) {
    throw GroundSetMismatch("measures live on different ground sets");
  }
}
}  // namespace detail

// min(mu, nu)([k]) without materializing the measure.
inline double min_mass(const FiniteMeasure& mu, const FiniteMeasure& nu) {
  detail::require_same_ground(mu, nu);
  double s = 0.0;
  for (std::size_t i = 0; i < mu.ground_size(); ++i) s += std::min(mu[i], nu[i]);
  return s;
}

inline FiniteMeasure min_measure(const FiniteMeasure& mu, const FiniteMeasure& nu) {
  detail::require_same_ground(mu, nu);
  std::vector<double> w(mu.ground_size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::min(mu[i], nu[i]);
  return FiniteMeasure(std::move(w));
}

// ||mu - nu||_TV = (mu([k]) + nu([k]))/2 - min(mu, nu)([k]).
inline double tv_distance(const FiniteMeasure& mu, const FiniteMeasure& nu) {
  return 0.5 * (mu.total_mass() + nu.total_mass()) - min_mass(mu, nu);
}

// mu restricted to the atoms in `keep`.
inline FiniteMeasure restrict(const FiniteMeasure& mu, std::span<const std::size_t> keep) {
  std::vector<double> w(mu.ground_size(), 0.0);
  for (std::size_t i : keep) {
    if (i >= w.size()) throw InvalidArgument("restriction index out of range");
    w[i] = mu[i];
  }
  return FiniteMeasure(std::move(w));
}

// Coordinatewise; equivalent to mu'(T) <= mu(T) for every subset T.
inline bool is_dominated(const FiniteMeasure& lower, const FiniteMeasure& upper) {
  detail::require_same_ground(lower, upper);
  for (std::size_t i = 0; i < lower.ground_size(); ++i)
    if (lower[i] > upper[i]) return false;
  return true;
}

inline ProbabilityMeasure normalize(const FiniteMeasure& mu) {
  const double mass = mu.total_mass();
  if (!(mass > 0.0)) throw ZeroMass("cannot normalize a zero measure");
  std::vector<double> w(mu.weights());
  for (double& x : w) x /= mass;
  return ProbabilityMeasure(FiniteMeasure(std::move(w)));
}

inline std::size_t support_size(const FiniteMeasure& mu) { return mu.support_size(); }

// Ordered collection of measures on a shared ground set; duplicates allowed.
class MeasureFamily {
 public:
  explicit MeasureFamily(std::size_t k) : k_(k) {}

  MeasureFamily(std::size_t k, std::vector<FiniteMeasure> members)
      : k_(k), members_(std::move(members)) {
    for (const auto& m : members_)
      if (m.ground_size() != k_) throw GroundSetMismatch("family member has wrong ground set");
  }

  void push_back(FiniteMeasure m) {
    if (m.ground_size() != k_) throw GroundSetMismatch("family member has wrong ground set");
    members_.push_back(std::move(m));
  }

  std::size_t ground_size() const { return k_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const FiniteMeasure& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<FiniteMeasure>& members() const { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  // Sum over members of mu({i}).
  std::vector<double> column_mass() const {
    std::vector<double> col(k_, 0.0);
    for (const auto& m : members_)
      for (std::size_t i = 0; i < k_; ++i) col[i] += m[i];
    return col;
  }

  friend bool operator==(const MeasureFamily&, const MeasureFamily&) = default;

 private:
  std::size_t k_;
  std::vector<FiniteMeasure> members_;
};

// Symmetric |F| x |F| table of min(mu_a, mu_b)([k]); the diagonal is left 0.
// Work is proportional to the sum over atoms of (members charging the atom)^2,
// so sparse families are cheap.
inline std::vector<double> pairwise_overlap(const MeasureFamily& family) {
  const std::size_t n = family.size(), k = family.ground_size();
  std::vector<double> overlap(n * n, 0.0);
  std::vector<std::pair<std::size_t, double>> column;
  for (std::size_t i = 0; i < k; ++i) {
    column.clear();
    for (std::size_t a = 0; a < n; ++a)
      if (family[a][i] > 0.0) column.emplace_back(a, family[a][i]);
    for (std::size_t x = 0; x < column.size(); ++x) {
      for (std::size_t y = x + 1; y < column.size(); ++y) {
        const double m = std::min(column[x].second, column[y].second);
        overlap[column[x].first * n + column[y].first] += m;
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) overlap[b * n + a] = overlap[a * n + b];
  return overlap;
}

struct UnrelatedResult {
  bool holds = true;
  // Smallest TV - ((mu(X)+nu(X))/2 - eps) over distinct pairs; +inf if none.
  double min_slack = std::numeric_limits<double>::infinity();
  std::optional<std::pair<std::size_t, std::size_t>> violation;  // first failing pair
  explicit operator bool() const { return holds; }
};

// Every distinct pair needs ||mu-nu||_TV >= (mu(X)+nu(X))/2 - eps. By the
// min-form of TV the slack is eps - min(mu,nu)([k]).
inline UnrelatedResult is_unrelated(const MeasureFamily& family, double eps,
                                    double tol = kUnrelatedTolerance) {
  if (eps < 0.0) throw InvalidArgument("eps must be nonnegative");
  UnrelatedResult r;
  const std::size_t n = family.size();
  const std::vector<double> overlap = pairwise_overlap(family);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double slack = eps - overlap[a * n + b];
      if (slack < r.min_slack) r.min_slack = slack;
      if (slack < -tol && r.holds) {
        r.holds = false;
        r.violation = std::make_pair(a, b);
      }
    }
  }
  return r;
}

// Delta_S({i}) = sum over ordered distinct pairs of min(mu({i}), nu({i})).
// Per atom this is sum_r 2(r-1) a_r over the column sorted decreasingly.
inline FiniteMeasure delta_family(const MeasureFamily& family) {
  if (family.size() < 2) throw InvalidFamily("delta needs at least two members");
  const std::size_t k = family.ground_size();
  std::vector<double> delta(k, 0.0), col(family.size());
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t a = 0; a < family.size(); ++a) col[a] = family[a][i];
    std::sort(col.begin(), col.end(), std::greater<>());
    double s = 0.0;
    for (std::size_t r = 1; r < col.size(); ++r) s += 2.0 * static_cast<double>(r) * col[r];
    delta[i] = s;
  }
  return FiniteMeasure(std::move(delta));
}

// Delta_S([k]) <= eps |S| (|S|-1) for eps-unrelated probability families.
inline bool check_delta_bound(const MeasureFamily& family, double eps) {
  for (const auto& m : family)
    if (!m.is_probability()) throw InvalidFamily("delta bound needs probability measures");
  const double n = static_cast<double>(family.size());
  return delta_family(family).total_mass() <= eps * n * (n - 1.0) + kUnrelatedTolerance;
}

}  // namespace l1lab
