#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "l1lab/measure.hpp"
#include "l1lab/rng.hpp"

using namespace l1lab;

namespace {

FiniteMeasure M(std::vector<double> w) { return FiniteMeasure(std::move(w)); }

double half_l1(const FiniteMeasure& a, const FiniteMeasure& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.ground_size(); ++i) s += std::fabs(a[i] - b[i]);
  return 0.5 * s;
}

// Domination by the subset definition: mu(T) <= nu(T) for every T.
bool dominated_by_subsets(const FiniteMeasure& lo, const FiniteMeasure& hi) {
  const std::size_t k = lo.ground_size();
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1u) {
        a += lo[i];
        b += hi[i];
      }
    if (a > b) return false;
  }
  return true;
}

// Ordered-pair enumeration of Delta at a single atom.
double delta_by_pairs(const MeasureFamily& f, std::size_t atom) {
  double s = 0.0;
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = 0; b < f.size(); ++b)
      if (a != b) s += std::min(f[a][atom], f[b][atom]);
  return s;
}

FiniteMeasure random_measure(CounterRng& rng, std::size_t k, double zero_prob = 0.3) {
  std::vector<double> w(k);
  for (auto& x : w) x = rng.uniform() < zero_prob ? 0.0 : rng.uniform();
  return M(w);
}

}  // namespace

TEST(FiniteMeasure, Basics) {
  auto m = M({0.3, 0.0, 0.1});
  EXPECT_EQ(m.ground_size(), 3u);
  EXPECT_NEAR(m.total_mass(), 0.4, 1e-15);
  EXPECT_EQ(m.support_size(), 2u);
  EXPECT_EQ(support_size(m), 2u);
  EXPECT_EQ(m.support(), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(support_size(FiniteMeasure::zero(4)), 0u);
  EXPECT_EQ(support_size(FiniteMeasure::point_mass(5, 3)), 1u);
  EXPECT_THROW(M({-0.1}), InvalidArgument);
  EXPECT_THROW(M({NAN}), InvalidArgument);
  EXPECT_EQ(M({1e-16, 1.0})[0], 0.0);  // clamped below the floor
  EXPECT_EQ(M({1e-16, 1.0}).support_size(), 1u);
  EXPECT_THROW(ProbabilityMeasure(M({0.5})), InvalidArgument);
}

TEST(TvDistance, Examples) {
  EXPECT_DOUBLE_EQ(tv_distance(FiniteMeasure::point_mass(2, 0), FiniteMeasure::point_mass(2, 1)), 1.0);
  EXPECT_DOUBLE_EQ(tv_distance(M({0.2, 0.8}), M({0.2, 0.8})), 0.0);
  EXPECT_NEAR(tv_distance(M({0.5, 0.5}), M({0.8, 0.2})), 0.3, 1e-15);
  EXPECT_NEAR(half_l1(M({0.5, 0.5}), M({0.8, 0.2})), 0.3, 1e-15);
  EXPECT_THROW(tv_distance(M({1}), M({1, 0})), GroundSetMismatch);
}

TEST(TvDistance, MinFormMatchesHalfL1ForEqualMass) {
  CounterRng rng(1);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t k = 1 + rng.below(64);
    auto a = random_measure(rng, k), b = random_measure(rng, k);
    if (a.total_mass() == 0.0 || b.total_mass() == 0.0) continue;
    auto pa = normalize(a), pb = normalize(b);
    ASSERT_NEAR(tv_distance(pa, pb), half_l1(pa, pb), 1e-12);
  }
}

TEST(MinMeasure, Examples) {
  EXPECT_EQ(min_measure(M({1, 0}), M({0, 1})), M({0, 0}));
  EXPECT_EQ(min_measure(M({0.3, 0.7}), M({0.3, 0.7})), M({0.3, 0.7}));
  EXPECT_EQ(min_measure(M({0.5, 0.5}), M({0.8, 0.2})), M({0.5, 0.2}));
  EXPECT_DOUBLE_EQ(min_mass(M({0.5, 0.5}), M({0.8, 0.2})), 0.7);
}

TEST(Restrict, Examples) {
  auto mu = M({0.3, 0.3, 0.4});
  std::vector<std::size_t> all{0, 1, 2}, none{}, y{0, 2};
  EXPECT_EQ(restrict(mu, all), mu);
  EXPECT_EQ(restrict(mu, none), FiniteMeasure::zero(3));
  EXPECT_EQ(restrict(mu, y), M({0.3, 0, 0.4}));
  std::vector<std::size_t> bad{3};
  EXPECT_THROW(restrict(mu, bad), InvalidArgument);
}

TEST(Domination, Examples) {
  auto mu = M({0.3, 0.3, 0.4});
  std::vector<std::size_t> y{1};
  EXPECT_TRUE(is_dominated(restrict(mu, y), mu));
  EXPECT_TRUE(is_dominated(mu, mu));
  EXPECT_FALSE(is_dominated(M({0.5, 0.2}), M({0.4, 0.9})));
}

TEST(Domination, AgreesWithSubsetDefinition) {
  CounterRng rng(2);
  for (std::size_t k = 1; k <= 12; ++k) {
    for (int t = 0; t < (k <= 8 ? 200 : 20); ++t) {
      auto a = random_measure(rng, k), b = random_measure(rng, k);
      if (rng.uniform() < 0.5) {  // make domination likely
        std::vector<double> w(b.weights());
        for (auto& x : w) x *= rng.uniform();
        a = M(w);
      }
      ASSERT_EQ(is_dominated(a, b), dominated_by_subsets(a, b)) << "k=" << k;
    }
  }
}

TEST(Normalize, Examples) {
  auto p = M({0.25, 0.75});
  EXPECT_EQ(normalize(p).measure(), p);
  EXPECT_EQ(normalize(M({2, 2})).measure(), M({0.5, 0.5}));
  auto n = normalize(M({0.3, 0, 0.1}));
  EXPECT_NEAR(n[0], 0.75, 1e-15);
  EXPECT_EQ(n[1], 0.0);
  EXPECT_NEAR(n[2], 0.25, 1e-15);
  EXPECT_THROW(normalize(FiniteMeasure::zero(3)), ZeroMass);
}

TEST(Unrelated, Examples) {
  MeasureFamily disjoint(3, {FiniteMeasure::point_mass(3, 0), FiniteMeasure::point_mass(3, 1),
                             FiniteMeasure::point_mass(3, 2)});
  EXPECT_TRUE(is_unrelated(disjoint, 0.0).holds);
  EXPECT_TRUE(is_unrelated(disjoint, 0.3).holds);
  MeasureFamily same(2, {M({0.5, 0.5}), M({0.5, 0.5})});
  auto r = is_unrelated(same, 0.1);
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.violation.has_value());
  EXPECT_EQ(*r.violation, std::make_pair(std::size_t{0}, std::size_t{1}));
  EXPECT_NEAR(r.min_slack, -0.9, 1e-15);
  MeasureFamily single(2, {M({0.5, 0.5})});
  EXPECT_TRUE(is_unrelated(single, 0.0).holds);
  EXPECT_THROW(MeasureFamily(2, {M({1.0})}), GroundSetMismatch);
}

TEST(Unrelated, MatchesDirectTvDefinition) {
  CounterRng rng(9);
  for (int t = 0; t < 300; ++t) {
    const std::size_t k = 1 + rng.below(10), n = 2 + rng.below(6);
    MeasureFamily f(k);
    for (std::size_t i = 0; i < n; ++i) f.push_back(random_measure(rng, k, 0.6));
    const double eps = rng.uniform(0, 0.6);
    bool direct = true;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        direct &= tv_distance(f[a], f[b]) >= 0.5 * (f[a].total_mass() + f[b].total_mass()) - eps - 1e-9;
    EXPECT_EQ(is_unrelated(f, eps).holds, direct);
  }
}

TEST(DeltaFamily, Examples) {
  MeasureFamily disjoint(2, {FiniteMeasure::point_mass(2, 0), FiniteMeasure::point_mass(2, 1)});
  EXPECT_EQ(delta_family(disjoint), FiniteMeasure::zero(2));
  MeasureFamily copies(2, {M({0.5, 0.5}), M({0.5, 0.5})});
  EXPECT_EQ(delta_family(copies), M({1, 1}));
  MeasureFamily dd(2, {FiniteMeasure::point_mass(2, 0), FiniteMeasure::point_mass(2, 0),
                       FiniteMeasure::point_mass(2, 1)});
  EXPECT_EQ(delta_family(dd), M({2, 0}));
  EXPECT_THROW(delta_family(MeasureFamily(2, {M({1, 0})})), InvalidFamily);
}

TEST(DeltaFamily, OrderedPairOracleAndLinearity) {
  CounterRng rng(4);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 1 + rng.below(12), n = 2 + rng.below(9);
    MeasureFamily f(k);
    for (std::size_t i = 0; i < n; ++i) f.push_back(random_measure(rng, k, 0.4));
    const auto delta = delta_family(f);
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      ASSERT_NEAR(delta[i], delta_by_pairs(f, i), 1e-12);
      total += delta_by_pairs(f, i);
    }
    EXPECT_NEAR(delta.total_mass(), total, 1e-10);
  }
}

TEST(DeltaBound, Examples) {
  MeasureFamily disjoint(2, {FiniteMeasure::point_mass(2, 0), FiniteMeasure::point_mass(2, 1)});
  EXPECT_TRUE(check_delta_bound(disjoint, 0.0));
  MeasureFamily copies(2, {M({0.5, 0.5}), M({0.5, 0.5})});
  EXPECT_TRUE(check_delta_bound(copies, 1.0));   // equality 2 <= 2
  EXPECT_FALSE(check_delta_bound(copies, 0.9));
  EXPECT_THROW(check_delta_bound(MeasureFamily(2, {M({0.5, 0}), M({1, 0})}), 1.0), InvalidFamily);
}

TEST(DeltaBound, HoldsForRandomUnrelatedFamilies) {
  CounterRng rng(6);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 2 + rng.below(30), n = 2 + rng.below(10);
    MeasureFamily f(k);
    for (std::size_t i = 0; i < n; ++i) {
      auto m = random_measure(rng, k, 0.8);
      if (m.total_mass() == 0.0) m = FiniteMeasure::point_mass(k, rng.below(k));
      f.push_back(normalize(m).measure());
    }
    // The tightest eps this family satisfies.
    const double eps = std::max(0.0, -is_unrelated(f, 0.0).min_slack);
    ASSERT_TRUE(is_unrelated(f, eps).holds);
    EXPECT_TRUE(check_delta_bound(f, eps));
  }
}

TEST(Observation, RestrictionPreservesUnrelatednessGrid) {
  // Exhaustive on k <= 4, weights in {0, 1/4, 1/2, 3/4, 1}, restrictions over all subsets.
  const double grid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  const double eps_values[] = {0.0, 0.1, 0.25, 0.5};
  std::size_t checked = 0;
  for (std::size_t k = 1; k <= 3; ++k) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < k; ++i) count *= 5;
    auto build = [&](std::size_t code) {
      std::vector<double> w(k);
      for (std::size_t i = 0; i < k; ++i, code /= 5) w[i] = grid[code % 5];
      return M(w);
    };
    for (std::size_t a = 0; a < count; ++a)
      for (std::size_t b = 0; b < count; ++b) {
        const auto mu = build(a), nu = build(b);
        for (double eps : eps_values) {
          if (!(tv_distance(mu, nu) >= 0.5 * (mu.total_mass() + nu.total_mass()) - eps)) continue;
          for (std::uint32_t ym = 0; ym < (1u << k); ++ym)
            for (std::uint32_t zm = 0; zm < (1u << k); ++zm) {
              std::vector<std::size_t> y, z;
              for (std::size_t i = 0; i < k; ++i) {
                if (ym >> i & 1u) y.push_back(i);
                if (zm >> i & 1u) z.push_back(i);
              }
              const auto mu2 = restrict(mu, y), nu2 = restrict(nu, z);
              ASSERT_GE(tv_distance(mu2, nu2), 0.5 * (mu2.total_mass() + nu2.total_mass()) - eps - 1e-9);
              ++checked;
            }
        }
      }
  }
  EXPECT_GT(checked, 0u);
}

TEST(Observation, RestrictionPreservesUnrelatednessK4) {
  // k = 4 with general dominated pairs: mu' ranges over coordinatewise grid values <= mu.
  const double grid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  CounterRng rng(8);
  for (int t = 0; t < 20000; ++t) {
    std::vector<double> a(4), b(4), a2(4), b2(4);
    for (int i = 0; i < 4; ++i) {
      a[i] = grid[rng.below(5)];
      b[i] = grid[rng.below(5)];
      a2[i] = grid[rng.below(static_cast<std::uint64_t>(a[i] * 4) + 1)];
      b2[i] = grid[rng.below(static_cast<std::uint64_t>(b[i] * 4) + 1)];
    }
    const auto mu = M(a), nu = M(b), mu2 = M(a2), nu2 = M(b2);
    ASSERT_TRUE(is_dominated(mu2, mu));
    const double eps = grid[rng.below(5)] / 2;
    if (tv_distance(mu, nu) >= 0.5 * (mu.total_mass() + nu.total_mass()) - eps) {
      ASSERT_GE(tv_distance(mu2, nu2), 0.5 * (mu2.total_mass() + nu2.total_mass()) - eps - 1e-9);
    }
  }
}

TEST(Observation, RestrictionPreservesUnrelatednessRandom) {
  CounterRng rng(10);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t k = 1 + rng.below(64);
    auto mu = random_measure(rng, k, 0.5), nu = random_measure(rng, k, 0.5);
    const double eps = rng.uniform(0, 1);
    if (!(tv_distance(mu, nu) >= 0.5 * (mu.total_mass() + nu.total_mass()) - eps)) continue;
    std::vector<std::size_t> y, z;
    for (std::size_t i = 0; i < k; ++i) {
      if (rng.uniform() < 0.5) y.push_back(i);
      if (rng.uniform() < 0.5) z.push_back(i);
    }
    const auto mu2 = restrict(mu, y), nu2 = restrict(nu, z);
    ASSERT_GE(tv_distance(mu2, nu2), 0.5 * (mu2.total_mass() + nu2.total_mass()) - eps - 1e-9);
  }
}

TEST(PairwiseOverlap, MatchesDenseMinMass) {
  CounterRng rng(12);
  MeasureFamily f(20);
  for (int i = 0; i < 15; ++i) f.push_back(random_measure(rng, 20, 0.7));
  const auto o = pairwise_overlap(f);
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = 0; b < f.size(); ++b)
      if (a != b) {
        EXPECT_NEAR(o[a * f.size() + b], min_mass(f[a], f[b]), 1e-14);
      }
}
