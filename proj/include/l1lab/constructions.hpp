#pragma once

// Upper-bound embeddings: sparse block-code stars, the standard-basis
// equilateral set, edge-code tree embeddings, and the k-ary tree -> star
// reduction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "l1lab/error.hpp"
#include "l1lab/metric.hpp"
#include "l1lab/rng.hpp"

namespace l1lab {

inline MetricPtr uniform_metric(std::size_t n, double distance) {
  if (n < 1) throw InvalidArgument("uniform metric needs at least one point");
  if (!(distance > 0.0)) throw InvalidArgument("uniform metric distance must be positive");
  std::vector<double> d(n * n, distance);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
  return std::make_shared<const FiniteMetricSpace>(n, std::move(d));
}

// Standard basis e_1..e_n in l1^n: every pair at distance exactly 2.
inline Embedding equilateral_set(std::size_t n) {
  if (n < 2) throw InvalidArgument("equilateral_set requires n >= 2");
  std::vector<double> pts(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) pts[i * n + i] = 1.0;
  return Embedding(uniform_metric(n, 2.0), n, Norm::L1, std::move(pts));
}

// Isometric star embedding: center at the origin, leaf v at e_v, in l1^d with
// d >= n-1 (extra coordinates stay zero).
inline Embedding basis_star_embedding(std::size_t n, std::size_t d) {
  if (n < 2) throw InvalidArgument("star needs n >= 2");
  if (d + 1 < n) throw InvalidArgument("basis star embedding needs d >= n-1");
  std::vector<double> pts(n * d, 0.0);
  for (std::size_t v = 1; v < n; ++v) pts[v * d + (v - 1)] = 1.0;
  return Embedding(star_metric(n), d, Norm::L1, std::move(pts));
}

struct SparseStarParams {
  std::size_t blocks = 1;       // m: support size of every leaf
  std::size_t block_width = 1;  // b: coordinates per block
  std::size_t dim() const { return blocks * block_width; }
};

// m = ceil(16 ln n / eps) blocks of width ceil(3 / eps): a pair of leaves
// agrees in a block with probability 1/b <= eps/3, and distortion 1+eps needs
// the agreement fraction to stay below eps/(1+eps).
inline SparseStarParams default_sparse_star_params(std::size_t n, double eps) {
  if (n < 2) throw InvalidArgument("star needs n >= 2");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in (0,1)");
  SparseStarParams p;
  p.blocks = static_cast<std::size_t>(std::ceil(16.0 * std::log(static_cast<double>(n)) / eps));
  p.block_width = static_cast<std::size_t>(std::ceil(3.0 / eps));
  p.blocks = std::max<std::size_t>(p.blocks, 1);
  return p;
}

// Random sparse-support star embedding into l1^d. Coordinates are split into
// floor(d / block_width) blocks; every leaf picks one coordinate per block
// uniformly and puts 1/m there, so its support has exactly m atoms and its
// l1 norm is exactly 1. Leaf-leaf distance is 2(1 - agreements/m).
inline Embedding random_sparse_star_embedding(std::size_t n, std::size_t d,
                                              std::size_t block_width, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("star needs n >= 2");
  if (d < 1) throw InvalidArgument("dimension must be positive");
  if (block_width < 1 || block_width > d) throw InvalidArgument("block width must lie in [1, d]");
  const std::size_t blocks = d / block_width;
  const double value = 1.0 / static_cast<double>(blocks);
  CounterRng rng(seed);
  std::vector<double> pts(n * d, 0.0);
  for (std::size_t v = 1; v < n; ++v)
    for (std::size_t j = 0; j < blocks; ++j)
      pts[v * d + j * block_width + rng.below(block_width)] = value;
  return Embedding(star_metric(n), d, Norm::L1, std::move(pts));
}

// Historical name kept for callers; the leaves are sparse block codes, not
// sign vectors (sign codes cannot make leaf-leaf twice center-leaf).
inline Embedding random_sign_star_embedding(std::size_t n, std::size_t d, std::uint64_t seed,
                                            double eps = 0.25) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in (0,1)");
  const auto width = static_cast<std::size_t>(std::ceil(3.0 / eps));
  return random_sparse_star_embedding(n, d, std::min(width, std::max<std::size_t>(d, 1)), seed);
}

// The construction used for dimension sweeps: isometric once d >= n-1,
// sparse block code below that.
inline Embedding star_upper_bound_embedding(std::size_t n, std::size_t d, double eps,
                                            std::uint64_t seed) {
  if (d + 1 >= n) return basis_star_embedding(n, d);
  const auto width = static_cast<std::size_t>(std::ceil(3.0 / eps));
  return random_sparse_star_embedding(n, d, std::min(width, d), seed);
}

// Complete k-ary tree embedding: every edge (identified with its child node)
// carries a code vector of l1 norm 1 and a node maps to the sum over its root
// path. With d >= #edges the codes are distinct basis vectors and the map is
// an isometry; otherwise they are sparse block codes as in the star case.
inline Embedding tree_code_embedding(std::size_t k, std::size_t h, std::size_t d, double eps,
                                     std::uint64_t seed) {
  const KaryTree tree(k, h);
  const std::size_t n = tree.size(), edges = n - 1;
  if (d < 1) throw InvalidArgument("dimension must be positive");
  std::vector<double> code(n * d, 0.0);  // row v = code of edge (parent(v), v)
  if (d >= edges) {
    for (std::size_t v = 1; v < n; ++v) code[v * d + (v - 1)] = 1.0;
  } else {
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in (0,1)");
    const std::size_t width = std::min(d, static_cast<std::size_t>(std::ceil(3.0 / eps)));
    const std::size_t blocks = d / width;
    const double value = 1.0 / static_cast<double>(blocks);
    CounterRng rng(seed);
    for (std::size_t v = 1; v < n; ++v)
      for (std::size_t j = 0; j < blocks; ++j) code[v * d + j * width + rng.below(width)] = value;
  }
  std::vector<double> pts(n * d, 0.0);
  for (std::size_t v = 1; v < n; ++v) {
    const std::size_t p = tree.parent(v);
    for (std::size_t c = 0; c < d; ++c) pts[v * d + c] = pts[p * d + c] + code[v * d + c];
  }
  return Embedding(kary_tree_metric(k, h), d, Norm::L1, std::move(pts));
}

inline constexpr double kTreeReductionMaxEps = 1.0 / 8.0;

// Star on 1 + k^ceil(h/2) points from a (1+eps)-embedding of the complete
// k-ary tree of height h: the center goes to 0 and each node w at height
// ceil(h/2) yields the leaf (f(x_w) - f(w)) / (h - ceil(h/2)), where x_w is the
// first-child-descent leaf below w. The result is 1-Lipschitz with distortion
// at most 1+4eps; both are asserted.
inline Embedding tree_to_star_embedding(const Embedding& f, std::size_t k, std::size_t h,
                                        double eps) {
  if (h < 2) throw InvalidArgument("tree_to_star_embedding needs h >= 2");
  if (!(eps >= 0.0 && eps <= kTreeReductionMaxEps)) throw OutOfRange("tree_to_star_embedding needs 0 <= eps <= 1/8");
  if (f.norm() != Norm::L1) throw InvalidSource("tree embedding must target l1");
  const KaryTree tree(k, h);
  if (f.size() != tree.size()) throw InvalidSource("embedding source is not the k-ary tree");
  for (std::size_t u = 0; u < tree.size(); ++u)
    for (std::size_t v = u + 1; v < tree.size(); ++v)
      if (std::abs(f.source()(u, v) - static_cast<double>(tree.distance(u, v))) > kMetricTolerance)
        throw InvalidSource("embedding source is not the k-ary tree");

  const double dist = distortion(f);
  if (!(dist <= 1.0 + eps + kMetricTolerance)) {
    throw NotAnEmbedding("tree embedding distortion " + std::to_string(dist) + " exceeds 1+eps");
  }
  const Embedding g1 = normalize_to_one_lipschitz(f, 0);

  const std::size_t mid = (h + 1) / 2;
  const double span = static_cast<double>(h - mid);
  const auto [first, last] = tree.level(mid);
  const std::size_t leaves = last - first, n = leaves + 1, d = f.dim();
  std::vector<double> pts(n * d, 0.0);
  for (std::size_t w = first; w < last; ++w) {
    const auto top = g1.point(w);
    const auto bottom = g1.point(tree.first_leaf_below(w));
    const std::size_t row = w - first + 1;
    for (std::size_t c = 0; c < d; ++c) pts[row * d + c] = (bottom[c] - top[c]) / span;
  }
  Embedding g(star_metric(n), d, Norm::L1, std::move(pts));

  const DistortionReport r = distortion_report(g);
  if (r.expansion > 1.0 + kMetricTolerance) {
    throw CertificateViolation("tree_to_star.lipschitz", "reduced star map is not 1-Lipschitz");
  }
  const double bound = 1.0 + 4.0 * eps;
  const double tol = eps == 0.0 ? kMetricTolerance : 1e-6 * bound;
  if (!(r.distortion <= bound + tol)) {
    throw CertificateViolation("tree_to_star.distortion", "reduced star map exceeds 1+4eps");
  }
  return g;
}

}  // namespace l1lab
