#pragma once

// Small-scale distortion minimization for star embeddings into l1^d, plus an
// exhaustive grid oracle for tiny instances.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "l1lab/error.hpp"
#include "l1lab/metric.hpp"
#include "l1lab/rng.hpp"

namespace l1lab {

struct SearchOptions {
  std::size_t starts = 8;
  std::size_t max_n = 64;
  std::size_t max_d = 16;
  double step = 0.1;           // initial relative step
  double temperature = 0.05;   // initial softmax temperature (log-ratio units)
  double min_temperature = 1e-3;
};

struct SearchResult {
  Embedding embedding;
  double distortion;
  std::size_t best_start;
};

namespace detail {

// All pairs (i, j), i < j, with their target distances.
struct PairList {
  std::vector<std::size_t> a, b;
  std::vector<double> target;
};

inline PairList star_pairs(std::size_t n) {
  PairList p;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      p.a.push_back(i);
      p.b.push_back(j);
      p.target.push_back(i == 0 ? 1.0 : 2.0);
    }
  return p;
}

inline double exact_star_distortion(const std::vector<double>& x, std::size_t d, const PairList& p) {
  double hi = 0.0, lo = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < p.a.size(); ++q) {
    double s = 0.0;
    for (std::size_t c = 0; c < d; ++c) s += std::abs(x[p.a[q] * d + c] - x[p.b[q] * d + c]);
    const double r = s / p.target[q];
    hi = std::max(hi, r);
    lo = std::min(lo, r);
  }
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

// Log-sum-exp softmax weights of v / t, in place; returns T * LSE(v / t).
inline double softmax(const std::vector<double>& v, double t, std::vector<double>& w) {
  const double top = *std::max_element(v.begin(), v.end());
  double z = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) z += (w[i] = std::exp((v[i] - top) / t));
  for (double& x : w) x /= z;
  return top + t * std::log(z);
}

}  // namespace detail

// Multi-start subgradient descent on the smoothed log-distortion
//   T LSE(l / T) + T LSE(-l / T),  l_pq = log(||x_p - x_q||_1 / rho(p, q)),
// over leaf coordinates with the center pinned at the origin. The step and
// temperature schedules depend only on the iteration index, so a longer run
// extends a shorter one and the best exact distortion can only go down.
inline SearchResult min_distortion_star(std::size_t n, std::size_t d, std::size_t iterations,
                                        std::uint64_t seed, const SearchOptions& opt = {}) {
  if (n < 2) throw InvalidArgument("star needs n >= 2");
  if (d < 1) throw InvalidArgument("dimension must be positive");
  if (n > opt.max_n || d > opt.max_d) throw ResourceLimit("min_distortion_star instance exceeds caps");
  if (opt.starts < 1) throw InvalidArgument("need at least one start");

  const detail::PairList pairs = detail::star_pairs(n);
  const std::size_t m = pairs.a.size();
  std::vector<double> best_x;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_start = 0;

  std::vector<double> ell(m), wp(m), wq(m), grad(n * d), len(m);
  for (std::size_t s = 0; s < opt.starts; ++s) {
    CounterRng rng(seed, s);
    std::vector<double> x(n * d, 0.0);
    for (std::size_t i = d; i < n * d; ++i) x[i] = rng.uniform(-1.0, 1.0);

    auto consider = [&](const std::vector<double>& y) {
      const double v = detail::exact_star_distortion(y, d, pairs);
      if (v < best) {
        best = v;
        best_x = y;
        best_start = s;
      }
    };
    consider(x);

    for (std::size_t t = 0; t < iterations; ++t) {
      double scale = 0.0;
      for (std::size_t q = 0; q < m; ++q) {
        double sum = 0.0;
        for (std::size_t c = 0; c < d; ++c) sum += std::abs(x[pairs.a[q] * d + c] - x[pairs.b[q] * d + c]);
        len[q] = std::max(sum, 1e-300);
        ell[q] = std::log(len[q] / pairs.target[q]);
        scale += ell[q];
      }
      const double temp = std::max(opt.min_temperature, opt.temperature / (1.0 + 0.01 * static_cast<double>(t)));
      detail::softmax(ell, temp, wp);
      for (double& v : ell) v = -v;
      detail::softmax(ell, temp, wq);

      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t q = 0; q < m; ++q) {
        const double coeff = (wp[q] - wq[q]) / len[q];
        if (coeff == 0.0) continue;
        for (std::size_t c = 0; c < d; ++c) {
          const double diff = x[pairs.a[q] * d + c] - x[pairs.b[q] * d + c];
          const double sg = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
          grad[pairs.a[q] * d + c] += coeff * sg;
          grad[pairs.b[q] * d + c] -= coeff * sg;
        }
      }
      double gnorm = 0.0;
      for (std::size_t i = d; i < n * d; ++i) gnorm = std::max(gnorm, std::abs(grad[i]));
      if (gnorm == 0.0) break;

      // Step measured against the typical pair length (geometric mean). A pair
      // length sums d coordinate moves, hence the 1/sqrt(d).
      const double typical = std::exp(scale / static_cast<double>(m));
      const double eta = opt.step * typical / (1.0 + 0.01 * static_cast<double>(t)) / gnorm /
                         std::sqrt(static_cast<double>(d));
      for (std::size_t i = d; i < n * d; ++i) x[i] -= eta * grad[i];
      // Distortion is scale free; keep the typical length near 1.
      for (std::size_t i = d; i < n * d; ++i) x[i] /= typical;
      consider(x);
    }
  }
  return {Embedding(star_metric(n), d, Norm::L1, std::move(best_x)), best, best_start};
}

// Exhaustive search over leaf positions on the grid
// {-2, -2 + step, ..., 2}^(n-1) in l1^1 (the center stays at 0). The grid is
// built from integer multiples of step so nested grids (step, step/2) nest.
inline double brute_force_min_distortion(std::size_t n, std::size_t d, double grid_step) {
  if (n < 2 || n > 4 || d != 1) throw ResourceLimit("brute force is limited to n <= 4, d = 1");
  if (!(grid_step > 0.0) || grid_step > 2.0) throw InvalidArgument("grid step must lie in (0, 2]");
  const auto half = static_cast<long>(std::floor(2.0 / grid_step + 1e-9));
  const std::size_t leaves = n - 1;
  const detail::PairList pairs = detail::star_pairs(n);
  std::vector<long> idx(leaves, -half);
  std::vector<double> x(n, 0.0);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    for (std::size_t v = 0; v < leaves; ++v) x[v + 1] = static_cast<double>(idx[v]) * grid_step;
    best = std::min(best, detail::exact_star_distortion(x, 1, pairs));
    std::size_t v = 0;
    while (v < leaves && idx[v] == half) idx[v++] = -half;
    if (v == leaves) break;
    ++idx[v];
  }
  return best;
}

}  // namespace l1lab
