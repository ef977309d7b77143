#pragma once

// Test-only generators shared by the unit suites and the acceptance binary.

#include <cmath>
#include <cstdint>
#include <vector>

#include "l1lab/metric.hpp"
#include "l1lab/rng.hpp"

namespace l1lab::fixtures {

// Star embedding e_v + noise in l1^d (d >= n-1), with the noise amplitude
// halved until the distortion is at most 1+eps. The result is a genuine
// (1+eps)-embedding whose leaves have full, uneven supports.
inline Embedding perturbed_star(std::size_t n, std::size_t d, double eps, std::uint64_t seed,
                                double start_noise = 0.5) {
  CounterRng rng(seed);
  std::vector<double> noise(n * d);
  for (auto& x : noise) x = rng.uniform(-1.0, 1.0);
  for (double sigma = start_noise / static_cast<double>(d);; sigma *= 0.5) {
    std::vector<double> pts(n * d, 0.0);
    for (std::size_t v = 1; v < n; ++v) {
      for (std::size_t c = 0; c < d; ++c) pts[v * d + c] = sigma * noise[v * d + c];
      pts[v * d + (v - 1) % d] += 1.0;
    }
    Embedding e(star_metric(n), d, Norm::L1, std::move(pts));
    if (distortion(e) <= 1.0 + eps) return e;
  }
}

}  // namespace l1lab::fixtures
