#pragma once

// Finite metric spaces (stars, complete k-ary trees), embeddings into
// normed spaces, and exact Lipschitz/distortion computation.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "l1lab/error.hpp"

namespace l1lab {

inline constexpr double kMetricTolerance = 1e-9;
inline constexpr std::size_t kDefaultSizeLimit = 100000;

// JSON field names shared by the serializers in io.hpp.
namespace schema {
inline constexpr const char* kN = "n";
inline constexpr const char* kDist = "dist";  // strictly-lower triangle, row-major
inline constexpr const char* kLabels = "labels";
inline constexpr const char* kDim = "dim";
inline constexpr const char* kNorm = "norm";
inline constexpr const char* kPoints = "points";
inline constexpr const char* kSource = "source";
}  // namespace schema

class FiniteMetricSpace {
 public:
  // `dist` is the full row-major n*n table.
  FiniteMetricSpace(std::size_t n, std::vector<double> dist,
                    std::vector<std::string> labels = {})
      : n_(n), dist_(std::move(dist)), labels_(std::move(labels)) {
    if (n_ == 0) throw InvalidArgument("metric space needs at least one point");
    if (dist_.size() != n_ * n_) throw InvalidArgument("distance table must be n*n");
    if (!labels_.empty() && labels_.size() != n_) {
      throw InvalidArgument("label count must equal n");
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (std::abs(at(i, i)) > kMetricTolerance) {
        throw InvalidArgument("dist(i,i) must be 0");
      }
      at(i, i) = 0.0;
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double a = at(i, j), b = at(j, i);
        if (!std::isfinite(a) || std::abs(a - b) > kMetricTolerance) {
          throw InvalidArgument("distance table must be finite and symmetric");
        }
        if (!(a > 0.0)) throw InvalidArgument("distinct points must be at positive distance");
      }
    }
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& table() const { return dist_; }

  // First triple (i, j, l) with dist(i,l) > dist(i,j) + dist(j,l) + tol.
  std::optional<std::array<std::size_t, 3>> triangle_violation(
      double tol = kMetricTolerance) const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t l = 0; l < n_; ++l)
          if ((*this)(i, l) > (*this)(i, j) + (*this)(j, l) + tol)
            return std::array<std::size_t, 3>{i, j, l};
    return std::nullopt;
  }

  bool satisfies_triangle_inequality(double tol = kMetricTolerance) const {
    return !triangle_violation(tol).has_value();
  }

  // Center 0 at distance 1 from every other point, leaves pairwise at 2.
  bool is_star(double tol = kMetricTolerance) const {
    if (n_ < 2) return false;
    for (std::size_t i = 1; i < n_; ++i) {
      if (std::abs((*this)(0, i) - 1.0) > tol) return false;
      for (std::size_t j = i + 1; j < n_; ++j)
        if (std::abs((*this)(i, j) - 2.0) > tol) return false;
    }
    return true;
  }

  friend bool operator==(const FiniteMetricSpace&, const FiniteMetricSpace&) = default;

 private:
  double& at(std::size_t i, std::size_t j) { return dist_[i * n_ + j]; }
  double at(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }

  std::size_t n_;
  std::vector<double> dist_;
  std::vector<std::string> labels_;
};

using MetricPtr = std::shared_ptr<const FiniteMetricSpace>;

inline MetricPtr star_metric(std::size_t n) {
  if (n < 2) throw InvalidArgument("star_metric requires n >= 2");
  std::vector<double> d(n * n, 2.0);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
  for (std::size_t i = 1; i < n; ++i) d[i] = d[i * n] = 1.0;
  return std::make_shared<const FiniteMetricSpace>(n, std::move(d));
}

// Complete k-ary tree of height h in BFS order: node 0 is the root (height 0),
// the children of v are k*v+1 .. k*v+k.
class KaryTree {
 public:
  KaryTree(std::size_t k, std::size_t h, std::size_t size_limit = kDefaultSizeLimit)
      : k_(k), h_(h) {
    if (k < 2) throw InvalidArgument("k-ary tree requires k >= 2");
    if (h < 1) throw InvalidArgument("k-ary tree requires h >= 1");
    std::size_t level = 1, total = 1;
    level_start_.push_back(0);
    for (std::size_t depth = 1; depth <= h; ++depth) {
      if (level > size_limit / k) throw ResourceLimit("k-ary tree exceeds size limit");
      level *= k;
      level_start_.push_back(total);
      total += level;
      if (total > size_limit) throw ResourceLimit("k-ary tree exceeds size limit");
    }
    level_start_.push_back(total);
    nodes_ = total;
  }

  std::size_t arity() const { return k_; }
  std::size_t height() const { return h_; }
  std::size_t size() const { return nodes_; }
  std::size_t parent(std::size_t v) const { return (v - 1) / k_; }
  std::size_t first_child(std::size_t v) const { return k_ * v + 1; }

  std::size_t depth(std::size_t v) const {
    std::size_t d = 0;
    while (level_start_[d + 1] <= v) ++d;
    return d;
  }

  // Nodes at a given depth form a contiguous index range.
  std::pair<std::size_t, std::size_t> level(std::size_t depth) const {
    return {level_start_[depth], level_start_[depth + 1]};
  }

  // The leaf reached from v by always taking the first child.
  std::size_t first_leaf_below(std::size_t v) const {
    for (std::size_t d = depth(v); d < h_; ++d) v = first_child(v);
    return v;
  }

  std::size_t distance(std::size_t u, std::size_t v) const {
    std::size_t du = depth(u), dv = depth(v), steps = 0;
    while (du > dv) { u = parent(u); --du; ++steps; }
    while (dv > du) { v = parent(v); --dv; ++steps; }
    while (u != v) { u = parent(u); v = parent(v); steps += 2; }
    return steps;
  }

 private:
  std::size_t k_, h_, nodes_ = 0;
  std::vector<std::size_t> level_start_;
};

inline MetricPtr kary_tree_metric(std::size_t k, std::size_t h,
                                  std::size_t size_limit = kDefaultSizeLimit) {
  const KaryTree tree(k, h, size_limit);
  const std::size_t n = tree.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      d[u * n + v] = d[v * n + u] = static_cast<double>(tree.distance(u, v));
  return std::make_shared<const FiniteMetricSpace>(n, std::move(d));
}

enum class Norm { L1, L2 };

class Embedding {
 public:
  Embedding(MetricPtr source, std::size_t dim, Norm norm, std::vector<double> points)
      : source_(std::move(source)), dim_(dim), norm_(norm), points_(std::move(points)) {
    if (!source_) throw InvalidArgument("embedding needs a source metric");
    if (points_.size() != source_->size() * dim_) {
      throw InvalidArgument("embedding needs exactly n*dim coordinates");
    }
    for (double x : points_)
      if (!std::isfinite(x)) throw InvalidArgument("embedding coordinates must be finite");
  }

  const FiniteMetricSpace& source() const { return *source_; }
  const MetricPtr& source_ptr() const { return source_; }
  std::size_t size() const { return source_->size(); }
  std::size_t dim() const { return dim_; }
  Norm norm() const { return norm_; }
  const std::vector<double>& coordinates() const { return points_; }

  std::span<const double> point(std::size_t i) const {
    return {points_.data() + i * dim_, dim_};
  }

  double image_distance(std::size_t i, std::size_t j) const {
    const double* a = points_.data() + i * dim_;
    const double* b = points_.data() + j * dim_;
    double s = 0.0;
    if (norm_ == Norm::L1) {
      for (std::size_t c = 0; c < dim_; ++c) s += std::abs(a[c] - b[c]);
      return s;
    }
    for (std::size_t c = 0; c < dim_; ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
    return std::sqrt(s);
  }

 private:
  MetricPtr source_;
  std::size_t dim_;
  Norm norm_;
  std::vector<double> points_;
};

struct DistortionReport {
  double expansion = 0.0;    // max image/source ratio, the Lipschitz constant
  double contraction = 0.0;  // max source/image ratio, Lip of the inverse
  double distortion = 0.0;   // infinite when two points collide
  std::pair<std::size_t, std::size_t> expansion_pair{0, 0};
  std::pair<std::size_t, std::size_t> contraction_pair{0, 0};
  bool injective() const { return std::isfinite(distortion); }
};

inline DistortionReport distortion_report(const Embedding& e) {
  const std::size_t n = e.size();
  if (n < 2) throw InvalidArgument("distortion needs at least two points");
  DistortionReport r;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double ratio = e.image_distance(i, j) / e.source()(i, j);
      if (ratio > r.expansion) {
        r.expansion = ratio;
        r.expansion_pair = {i, j};
      }
      if (ratio < min_ratio) {
        min_ratio = ratio;
        r.contraction_pair = {i, j};
      }
    }
  }
  if (min_ratio > 0.0) {
    r.contraction = 1.0 / min_ratio;
    r.distortion = r.expansion * r.contraction;
  } else {
    r.contraction = r.distortion = std::numeric_limits<double>::infinity();
  }
  return r;
}

inline double lipschitz_constant(const Embedding& e) { return distortion_report(e).expansion; }

inline double distortion(const Embedding& e) { return distortion_report(e).distortion; }

// Translate `base` to the origin and rescale so the Lipschitz constant is 1.
inline Embedding normalize_to_one_lipschitz(const Embedding& e, std::size_t base = 0) {
  if (base >= e.size()) throw InvalidArgument("base point out of range");
  const DistortionReport r = distortion_report(e);
  if (!r.injective()) throw DegenerateEmbedding("embedding is not injective");
  const double scale = 1.0 / r.expansion;
  std::vector<double> pts(e.coordinates());
  const auto origin = e.point(base);
  std::vector<double> shift(origin.begin(), origin.end());
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t c = 0; c < e.dim(); ++c)
      pts[i * e.dim() + c] = (pts[i * e.dim() + c] - shift[c]) * scale;
  return Embedding(e.source_ptr(), e.dim(), e.norm(), std::move(pts));
}

}  // namespace l1lab
