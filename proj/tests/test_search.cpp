#include <gtest/gtest.h>

#include <cmath>

#include "l1lab/bounds.hpp"
#include "l1lab/search.hpp"

using namespace l1lab;

TEST(BruteForce, Examples) {
  EXPECT_NEAR(brute_force_min_distortion(3, 1, 0.1), 1.0, 1e-12);
  EXPECT_NEAR(brute_force_min_distortion(2, 1, 0.5), 1.0, 1e-12);
  EXPECT_THROW(brute_force_min_distortion(5, 1, 0.1), ResourceLimit);
  EXPECT_THROW(brute_force_min_distortion(3, 2, 0.1), ResourceLimit);
  EXPECT_THROW(brute_force_min_distortion(3, 1, 0.0), InvalidArgument);
}

TEST(BruteForce, RefinementNeverHurts) {
  for (std::size_t n : {3u, 4u}) {
    const double coarse = brute_force_min_distortion(n, 1, 0.2);
    const double fine = brute_force_min_distortion(n, 1, 0.1);
    const double finer = brute_force_min_distortion(n, 1, 0.05);
    EXPECT_LE(fine, coarse);
    EXPECT_LE(finer, fine);
  }
}

TEST(BruteForce, FourPointsOnALineAreDistorted) {
  // Three leaves on a line: two lie on the same side of the center.
  const double best = brute_force_min_distortion(4, 1, 0.05);
  EXPECT_GT(best, 1.5);
  // (2D)^1 >= 3 needs D >= 1.5.
  EXPECT_EQ(volume_lower_bound(4, 1.5), 1u);
  EXPECT_GT(volume_lower_bound(4, 1.4), 1u);
}

TEST(Search, ThreePointsOnALine) {
  const auto r = min_distortion_star(3, 1, 500, 1);
  EXPECT_LE(r.distortion, 1.0 + 1e-6);
  EXPECT_EQ(r.distortion, distortion(r.embedding));
}

TEST(Search, NoBetterThanGridOptimumBeyondSlack) {
  for (std::size_t n : {3u, 4u}) {
    const double grid = brute_force_min_distortion(n, 1, 0.05);
    const auto r = min_distortion_star(n, 1, 2000, 3);
    EXPECT_GE(r.distortion, 1.0);
    EXPECT_LE(r.distortion, grid + 0.05) << n;
    // A grid of step 0.05 over [-2,2] loses at most a few percent near the optimum.
    EXPECT_GE(r.distortion, grid * (1.0 - 0.1)) << n;
  }
}

TEST(Search, FindsIsometryWhenDimensionAllows) {
  for (std::size_t n : {4u, 6u, 9u, 13u, 17u}) {
    const auto r = min_distortion_star(n, n - 1, 2000, 5);
    EXPECT_LE(r.distortion, 1.01) << n;
  }
}

TEST(Search, MonotoneInIterations) {
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t it : {0u, 1u, 10u, 100u, 1000u}) {
    const auto r = min_distortion_star(10, 4, it, 9);
    EXPECT_LE(r.distortion, prev);
    prev = r.distortion;
  }
}

TEST(Search, ZeroIterationsIsBestStart) {
  const auto r = min_distortion_star(6, 3, 0, 2);
  SearchOptions one;
  one.starts = 1;
  double best = std::numeric_limits<double>::infinity();
  // Start s is seeded by stream s; reproduce each start as a single-start search.
  for (std::size_t s = 0; s < 8; ++s) {
    CounterRng rng(2, s);
    std::vector<double> x(6 * 3, 0.0);
    for (std::size_t i = 3; i < x.size(); ++i) x[i] = rng.uniform(-1.0, 1.0);
    best = std::min(best, distortion(Embedding(star_metric(6), 3, Norm::L1, x)));
  }
  EXPECT_EQ(r.distortion, best);
}

TEST(Search, DeterministicAndCapped) {
  const auto a = min_distortion_star(8, 3, 200, 4), b = min_distortion_star(8, 3, 200, 4);
  EXPECT_EQ(a.embedding.coordinates(), b.embedding.coordinates());
  EXPECT_THROW(min_distortion_star(65, 3, 1, 1), ResourceLimit);
  EXPECT_THROW(min_distortion_star(8, 17, 1, 1), ResourceLimit);
  SearchOptions big;
  big.max_n = 100;
  EXPECT_NO_THROW(min_distortion_star(65, 2, 1, 1, big));
}
