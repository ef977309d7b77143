#pragma once

// Star embedding -> eps-unrelated probability family -> sparse 1/2-unrelated
// family, with every inequality of the four-stage argument recorded in a
// certificate that can be re-verified from the stored families alone.
//
// Notation used below: N is the size of the first-stage family (star size
// minus one) and k its ground-set size (2d+1 for an embedding into l1^d).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "l1lab/error.hpp"
#include "l1lab/measure.hpp"
#include "l1lab/metric.hpp"
#include "l1lab/selection.hpp"

namespace l1lab {

inline constexpr double kCheckTolerance = 1e-9;
inline constexpr double kMaxPipelineEps = 1.0 / 16.0;
inline constexpr double kMaxStageEps = 1.0 / 8.0;

enum class Relation { LessEqual, GreaterEqual, Less };

inline const char* relation_symbol(Relation r) {
  switch (r) {
    case Relation::LessEqual: return "<=";
    case Relation::GreaterEqual: return ">=";
    case Relation::Less: return "<";
  }
  return "?";
}

inline Relation parse_relation(const std::string& s) {
  if (s == "<=") return Relation::LessEqual;
  if (s == ">=") return Relation::GreaterEqual;
  if (s == "<") return Relation::Less;
  throw InvalidArgument("unknown relation '" + s + "'");
}

// Strict "<" also gets the slack; the stored integer-valued bounds make a
// strict comparison meaningful only up to rounding anyway.
inline bool relation_holds(Relation r, double lhs, double rhs, double tol = kCheckTolerance) {
  switch (r) {
    case Relation::LessEqual: return lhs <= rhs + tol;
    case Relation::GreaterEqual: return lhs >= rhs - tol;
    case Relation::Less: return lhs < rhs + tol;
  }
  return false;
}

struct Check {
  std::string name;
  Relation relation = Relation::LessEqual;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;

  friend bool operator==(const Check&, const Check&) = default;
};

inline Check make_check(std::string name, double lhs, Relation rel, double rhs) {
  Check c{std::move(name), rel, lhs, rhs, false};
  c.pass = relation_holds(rel, lhs, rhs);
  return c;
}

inline void throw_on_failure(const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) {
      throw CertificateViolation(
          c.name, "certificate check " + c.name + " failed: " + std::to_string(c.lhs) + " " +
                      relation_symbol(c.relation) + " " + std::to_string(c.rhs));
    }
  }
}

namespace detail {

inline double max_mass_deviation(const MeasureFamily& f) {
  double worst = 0.0;
  for (const auto& m : f) worst = std::max(worst, std::abs(m.total_mass() - 1.0));
  return worst;
}

inline double unrelated_slack(const MeasureFamily& f, double eps) {
  if (f.size() < 2) return 0.0;
  return is_unrelated(f, eps).min_slack;
}

inline double max_abs_diff(const FiniteMeasure& a, const FiniteMeasure& b) {
  if (a.ground_size() != b.ground_size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.ground_size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline std::size_t total_support(const MeasureFamily& f) {
  std::size_t s = 0;
  for (const auto& m : f) s += m.support_size();
  return s;
}

inline bool valid_indices(const std::vector<std::size_t>& idx, std::size_t bound) {
  return std::all_of(idx.begin(), idx.end(), [&](std::size_t i) { return i < bound; });
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Entry: star embedding to probability measures on 2d+1 atoms.

// Positive parts in atoms [0, d), negative parts in [d, 2d), and the slack
// 1 - ||f(v)||_1 in atom 2d, after moving the center to the origin and
// rescaling to Lipschitz constant 1.
inline MeasureFamily embedding_to_measures(const Embedding& e, double eps) {
  if (e.norm() != Norm::L1) throw InvalidSource("embedding must target l1");
  if (!e.source().is_star()) throw InvalidSource("embedding source is not a star metric");
  if (eps < 0.0) throw InvalidArgument("eps must be nonnegative");
  const double dist = distortion(e);
  if (!(dist <= 1.0 + eps + kCheckTolerance)) {
    throw NotAnEmbedding("embedding distortion " + std::to_string(dist) + " exceeds 1+eps");
  }
  const Embedding f = normalize_to_one_lipschitz(e, 0);
  const std::size_t d = f.dim(), k = 2 * d + 1;
  MeasureFamily family(k);
  for (std::size_t v = 1; v < f.size(); ++v) {
    std::vector<double> w(k, 0.0);
    double norm = 0.0;
    const auto p = f.point(v);
    for (std::size_t i = 0; i < d; ++i) {
      w[i] = std::max(0.0, p[i]);
      w[d + i] = std::max(0.0, -p[i]);
      norm += std::abs(p[i]);
    }
    w[2 * d] = std::max(0.0, 1.0 - norm);
    family.push_back(FiniteMeasure(std::move(w)));
  }
  if (family.size() >= 2) {
    const auto r = is_unrelated(family, eps);
    if (!r) {
      throw CertificateViolation("entry.unrelated",
                                 "measure family from embedding is not eps-unrelated");
    }
  }
  return family;
}

// ---------------------------------------------------------------------------
// Stage I -> II: keep, for each low-overlap atom, the few members carrying
// half its column mass.

struct StageOneResult {
  MeasureFamily family{0};
  std::vector<std::size_t> coordinate_set;                   // A
  std::map<std::size_t, std::vector<std::size_t>> witnesses;  // i -> W_i
  std::vector<std::vector<std::size_t>> restrictions;        // Y_mu per member
  std::vector<Check> checks;
};

inline bool in_coordinate_set(double delta_i, double column_i, double eps, std::size_t n) {
  const double bound = 2.0 * eps * static_cast<double>(n - 1) * column_i;
  return delta_i <= bound + 1e-12 * std::max(1.0, bound);
}

inline std::vector<Check> stage_one_checks(const MeasureFamily& s1, const MeasureFamily& s2,
                                           const std::vector<std::size_t>& a_set,
                                           const std::map<std::size_t, std::vector<std::size_t>>& w,
                                           const std::vector<std::vector<std::size_t>>& y,
                                           double eps) {
  std::vector<Check> out;
  const std::size_t n = s1.size(), k = s1.ground_size();
  const double nd = static_cast<double>(n);

  out.push_back(make_check("I.probability", detail::max_mass_deviation(s1), Relation::LessEqual, 0.0));
  out.push_back(make_check("I.unrelated", detail::unrelated_slack(s1, eps), Relation::GreaterEqual, 0.0));
  const FiniteMeasure delta = n >= 2 ? delta_family(s1) : FiniteMeasure::zero(k);
  out.push_back(make_check("I.delta_bound", delta.total_mass(), Relation::LessEqual,
                           eps * nd * (nd - 1.0)));

  const std::vector<double> column = s1.column_mass();
  std::size_t a_mismatch = detail::valid_indices(a_set, k) ? 0 : 1;
  std::vector<char> in_a(k, 0);
  for (std::size_t i : a_set)
    if (i < k) in_a[i] = 1;
  for (std::size_t i = 0; i < k; ++i)
    if (static_cast<bool>(in_a[i]) != in_coordinate_set(delta[i], column[i], eps, n)) ++a_mismatch;
  out.push_back(make_check("I.A_definition", static_cast<double>(a_mismatch), Relation::LessEqual, 0.0));

  double mass_on_a = 0.0;
  for (const auto& m : s1) mass_on_a += m.mass_of(a_set);
  out.push_back(make_check("I.markov_A", nd > 0 ? mass_on_a / nd : 0.0, Relation::GreaterEqual, 0.5));

  std::size_t max_w = 0, w_invalid = 0;
  double worst_half = 0.0;
  bool first = true;
  for (const auto& [i, members] : w) {
    if (i >= k || !in_a[i] || !detail::valid_indices(members, n)) {
      ++w_invalid;
      continue;
    }
    max_w = std::max(max_w, members.size());
    double kept = 0.0;
    for (std::size_t mu : members) kept += s1[mu][i];
    const double slack = kept - 0.5 * column[i];
    if (first || slack < worst_half) worst_half = slack;
    first = false;
  }
  for (std::size_t i : a_set)
    if (i < k && !w.count(i)) ++w_invalid;
  out.push_back(make_check("I.W_size", static_cast<double>(max_w), Relation::LessEqual,
                           static_cast<double>(ceil_count(2.0 * eps * (nd - 1.0)))));
  out.push_back(make_check("I.W_half_mass", worst_half, Relation::GreaterEqual, 0.0));

  // Y_mu must be exactly {i : mu in W_i}.
  std::size_t y_mismatch = (y.size() == n) ? w_invalid : w_invalid + 1;
  if (y.size() == n) {
    std::vector<std::vector<std::size_t>> expected(n);
    for (const auto& [i, members] : w)
      for (std::size_t mu : members)
        if (mu < n) expected[mu].push_back(i);
    for (std::size_t mu = 0; mu < n; ++mu) {
      auto e = expected[mu];
      std::sort(e.begin(), e.end());
      if (e != y[mu]) ++y_mismatch;
    }
  }
  out.push_back(make_check("II.Y_from_W", static_cast<double>(y_mismatch), Relation::LessEqual, 0.0));

  double derivation = (s2.size() == n && y.size() == n) ? 0.0 : std::numeric_limits<double>::infinity();
  if (std::isfinite(derivation)) {
    for (std::size_t mu = 0; mu < n; ++mu) {
      if (!detail::valid_indices(y[mu], k)) {
        derivation = std::numeric_limits<double>::infinity();
        break;
      }
      derivation = std::max(derivation, detail::max_abs_diff(s2[mu], restrict(s1[mu], y[mu])));
    }
  }
  out.push_back(make_check("II.derivation", derivation, Relation::LessEqual, 0.0));

  double max_mass = 0.0, sum_mass = 0.0;
  for (const auto& m : s2) {
    max_mass = std::max(max_mass, m.total_mass());
    sum_mass += m.total_mass();
  }
  out.push_back(make_check("II.a", max_mass, Relation::LessEqual, 1.0));
  out.push_back(make_check("II.b", sum_mass, Relation::GreaterEqual, nd / 4.0));
  out.push_back(make_check("II.c", static_cast<double>(detail::total_support(s2)), Relation::Less,
                           (2.0 * eps * nd + 1.0) * static_cast<double>(k)));
  out.push_back(make_check("II.unrelated", detail::unrelated_slack(s2, eps), Relation::GreaterEqual, 0.0));
  return out;
}

inline StageOneResult stage_one_to_two(const MeasureFamily& s1, double eps) {
  if (s1.size() < 2) throw InvalidFamily("stage I needs at least two measures");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  for (const auto& m : s1)
    if (!m.is_probability()) throw InvalidFamily("stage I needs probability measures");
  if (!is_unrelated(s1, eps)) {
    throw CertificateViolation("I.unrelated", "stage I family is not eps-unrelated");
  }

  const std::size_t n = s1.size(), k = s1.ground_size();
  const FiniteMeasure delta = delta_family(s1);
  const std::vector<double> column = s1.column_mass();
  const double select_delta = std::min(2.0 * eps, std::nextafter(1.0, 0.0));

  StageOneResult r;
  r.restrictions.assign(n, {});
  std::vector<double> col(n);
  for (std::size_t i = 0; i < k; ++i) {
    if (!in_coordinate_set(delta[i], column[i], eps, n)) continue;
    r.coordinate_set.push_back(i);
    auto& wi = r.witnesses[i];
    if (!(column[i] > 0.0)) continue;
    for (std::size_t mu = 0; mu < n; ++mu) col[mu] = s1[mu][i];
    for (std::size_t mu : sparse_select(col, select_delta).indices)
      if (col[mu] > 0.0) wi.push_back(mu);
    std::sort(wi.begin(), wi.end());
    for (std::size_t mu : wi) r.restrictions[mu].push_back(i);
  }

  std::vector<FiniteMeasure> members;
  members.reserve(n);
  for (std::size_t mu = 0; mu < n; ++mu) members.push_back(restrict(s1[mu], r.restrictions[mu]));
  r.family = MeasureFamily(k, std::move(members));
  r.checks = stage_one_checks(s1, r.family, r.coordinate_set, r.witnesses, r.restrictions, eps);
  throw_on_failure(r.checks);
  return r;
}

// ---------------------------------------------------------------------------
// Stage II -> III: drop light members, then members with large support.

struct StageTwoResult {
  MeasureFamily family{0};
  std::vector<std::size_t> heavy;  // S': indices into S_II with mass >= 1/8
  std::vector<std::size_t> kept;   // S_III: indices into S_II
  std::vector<Check> checks;
};

inline constexpr double kHeavyMass = 1.0 / 8.0;

inline std::vector<std::size_t> heavy_members(const MeasureFamily& s2) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < s2.size(); ++j)
    if (s2[j].total_mass() >= kHeavyMass) out.push_back(j);
  return out;
}

inline std::vector<std::size_t> sparse_members(const MeasureFamily& s2,
                                               const std::vector<std::size_t>& heavy) {
  std::vector<std::size_t> out;
  if (heavy.empty()) return out;
  const double cap = 2.0 * static_cast<double>(detail::total_support(s2)) /
                     static_cast<double>(heavy.size());
  for (std::size_t j : heavy)
    if (j < s2.size() && static_cast<double>(s2[j].support_size()) <= cap) out.push_back(j);
  return out;
}

inline std::vector<Check> stage_two_checks(const MeasureFamily& s2, const MeasureFamily& s3,
                                           const std::vector<std::size_t>& heavy,
                                           const std::vector<std::size_t>& kept, double eps,
                                           std::size_t n) {
  std::vector<Check> out;
  const double nd = static_cast<double>(n);
  const double k = static_cast<double>(s2.ground_size());

  const bool heavy_ok = heavy == heavy_members(s2);
  out.push_back(make_check("III.heavy_definition", heavy_ok ? 0.0 : 1.0, Relation::LessEqual, 0.0));
  out.push_back(make_check("III.heavy_size", static_cast<double>(heavy.size()), Relation::GreaterEqual,
                           static_cast<double>(s2.size()) / 7.0));
  const bool kept_ok = detail::valid_indices(heavy, s2.size()) && kept == sparse_members(s2, heavy);
  out.push_back(make_check("III.kept_definition", kept_ok ? 0.0 : 1.0, Relation::LessEqual, 0.0));
  out.push_back(make_check("III.markov", static_cast<double>(kept.size()), Relation::GreaterEqual,
                           static_cast<double>(heavy.size()) / 2.0));
  out.push_back(make_check("III.size", static_cast<double>(s3.size()), Relation::GreaterEqual,
                           static_cast<double>(s2.size()) / 14.0));

  double derivation = (s3.size() == kept.size() && detail::valid_indices(kept, s2.size()))
                          ? 0.0 : std::numeric_limits<double>::infinity();
  if (std::isfinite(derivation))
    for (std::size_t t = 0; t < kept.size(); ++t)
      derivation = std::max(derivation, detail::max_abs_diff(s3[t], s2[kept[t]]));
  out.push_back(make_check("III.derivation", derivation, Relation::LessEqual, 0.0));

  std::size_t max_support = 0;
  double min_mass = s3.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  for (const auto& m : s3) {
    max_support = std::max(max_support, m.support_size());
    min_mass = std::min(min_mass, m.total_mass());
  }
  out.push_back(make_check("III.a", static_cast<double>(max_support), Relation::Less,
                           14.0 * k * (2.0 * eps + 1.0 / nd)));
  out.push_back(make_check("III.b", min_mass, Relation::GreaterEqual, kHeavyMass));
  out.push_back(make_check("III.unrelated", detail::unrelated_slack(s3, eps), Relation::GreaterEqual, 0.0));
  return out;
}

// `n` is the size of the stage-I family; it defaults to |S_II|.
inline StageTwoResult stage_two_to_three(const MeasureFamily& s2, double eps, std::size_t n = 0) {
  if (n == 0) n = s2.size();
  if (n == 0) throw InvalidFamily("stage II family is empty");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  StageTwoResult r;
  r.heavy = heavy_members(s2);
  r.kept = sparse_members(s2, r.heavy);
  std::vector<FiniteMeasure> members;
  for (std::size_t j : r.kept) members.push_back(s2[j]);
  r.family = MeasureFamily(s2.ground_size(), std::move(members));
  r.checks = stage_two_checks(s2, r.family, r.heavy, r.kept, eps, n);
  throw_on_failure(r.checks);
  return r;
}

// ---------------------------------------------------------------------------
// Stage III -> IV: truncate each member to its heaviest atoms and renormalize.

struct StageThreeResult {
  MeasureFamily family{0};
  std::vector<std::vector<std::size_t>> truncations;  // Z_mu per member, sorted
  std::vector<Check> checks;
};

// ceil(16 eps * 14k(2 eps + 1/n)) = ceil(224 eps (2 eps + 1/n) k).
inline std::size_t truncation_size(double eps, std::size_t n, std::size_t k) {
  return ceil_count(224.0 * eps * (2.0 * eps + 1.0 / static_cast<double>(n)) *
                    static_cast<double>(k));
}

// The `size` heaviest atoms of mu (ties by lower atom index), restricted to
// the support, returned sorted.
inline std::vector<std::size_t> heaviest_atoms(const FiniteMeasure& mu, std::size_t size) {
  auto order = order_by_weight(mu.weights());
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < order.size() && out.size() < size; ++r)
    if (mu[order[r]] > 0.0) out.push_back(order[r]);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Check> stage_three_checks(const MeasureFamily& s3, const MeasureFamily& s4,
                                             const std::vector<std::vector<std::size_t>>& z,
                                             double eps, std::size_t n) {
  std::vector<Check> out;
  const std::size_t k = s3.ground_size();
  const std::size_t t = truncation_size(eps, n, k);
  const bool shape_ok = z.size() == s3.size() && s4.size() == s3.size();

  std::size_t z_mismatch = shape_ok ? 0 : 1;
  double min_z_mass = s3.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  double derivation = shape_ok ? 0.0 : std::numeric_limits<double>::infinity();
  if (shape_ok) {
    for (std::size_t j = 0; j < s3.size(); ++j) {
      if (z[j] != heaviest_atoms(s3[j], t)) ++z_mismatch;
      if (!detail::valid_indices(z[j], k)) {
        derivation = std::numeric_limits<double>::infinity();
        continue;
      }
      const double zm = s3[j].mass_of(z[j]);
      min_z_mass = std::min(min_z_mass, zm);
      if (zm > 0.0) {
        const FiniteMeasure cut = restrict(s3[j], z[j]);
        std::vector<double> w(cut.weights());
        for (double& x : w) x /= zm;
        derivation = std::max(derivation, detail::max_abs_diff(s4[j], FiniteMeasure(std::move(w))));
      } else {
        derivation = std::numeric_limits<double>::infinity();
      }
    }
  }
  out.push_back(make_check("IV.Z_definition", static_cast<double>(z_mismatch), Relation::LessEqual, 0.0));
  out.push_back(make_check("IV.Z_mass", min_z_mass, Relation::GreaterEqual, 2.0 * eps));
  out.push_back(make_check("IV.derivation", derivation, Relation::LessEqual, 0.0));
  out.push_back(make_check("IV.probability", detail::max_mass_deviation(s4), Relation::LessEqual, 0.0));

  std::size_t max_support = 0;
  for (const auto& m : s4) max_support = std::max(max_support, m.support_size());
  out.push_back(make_check("IV.support", static_cast<double>(max_support), Relation::LessEqual,
                           static_cast<double>(t)));
  out.push_back(make_check("IV.size", static_cast<double>(s4.size()), Relation::GreaterEqual,
                           std::floor(static_cast<double>(n) / 14.0)));
  out.push_back(make_check("IV.unrelated", detail::unrelated_slack(s4, 0.5), Relation::GreaterEqual, 0.0));
  return out;
}

inline StageThreeResult stage_three_to_four(const MeasureFamily& s3, double eps, std::size_t n) {
  if (!(eps > 0.0) || eps > kMaxStageEps) throw OutOfRange("stage III needs 0 < eps <= 1/8");
  if (n == 0) throw InvalidArgument("n must be positive");
  const std::size_t t = truncation_size(eps, n, s3.ground_size());
  StageThreeResult r;
  std::vector<FiniteMeasure> members;
  for (const auto& mu : s3) {
    auto z = heaviest_atoms(mu, t);
    const double zm = mu.mass_of(z);
    if (!(zm > 0.0)) throw CertificateViolation("IV.Z_mass", "truncated member has zero mass");
    members.push_back(normalize(restrict(mu, z)).measure());
    r.truncations.push_back(std::move(z));
  }
  r.family = MeasureFamily(s3.ground_size(), std::move(members));
  r.checks = stage_three_checks(s3, r.family, r.truncations, eps, n);
  throw_on_failure(r.checks);
  return r;
}

// ---------------------------------------------------------------------------
// Full chain and certificate.

struct PipelineCertificate {
  double eps = 0.0;
  double entry_distortion = 1.0;
  std::size_t family_size = 0;  // N = |S_I|
  std::size_t ground_size = 0;  // k
  std::vector<MeasureFamily> stages;  // S_I .. S_IV
  std::vector<std::size_t> coordinate_set;
  std::map<std::size_t, std::vector<std::size_t>> witnesses;
  std::vector<std::vector<std::size_t>> restrictions;
  std::vector<std::size_t> heavy;
  std::vector<std::size_t> kept;
  std::vector<std::vector<std::size_t>> truncations;
  std::vector<Check> checks;

  friend bool operator==(const PipelineCertificate&, const PipelineCertificate&) = default;
};

inline PipelineCertificate run_pipeline_on_family(const MeasureFamily& s1, double eps) {
  if (!(eps > 0.0) || eps > kMaxPipelineEps) throw OutOfRange("pipeline needs 0 < eps <= 1/16");
  PipelineCertificate c;
  c.eps = eps;
  c.family_size = s1.size();
  c.ground_size = s1.ground_size();

  auto one = stage_one_to_two(s1, eps);
  auto two = stage_two_to_three(one.family, eps, s1.size());
  auto three = stage_three_to_four(two.family, eps, s1.size());

  c.stages = {s1, one.family, two.family, three.family};
  c.coordinate_set = std::move(one.coordinate_set);
  c.witnesses = std::move(one.witnesses);
  c.restrictions = std::move(one.restrictions);
  c.heavy = std::move(two.heavy);
  c.kept = std::move(two.kept);
  c.truncations = std::move(three.truncations);
  for (auto* v : {&one.checks, &two.checks, &three.checks})
    c.checks.insert(c.checks.end(), v->begin(), v->end());
  return c;
}

inline PipelineCertificate run_pipeline(const Embedding& e, double eps) {
  if (!(eps > 0.0) || eps > kMaxPipelineEps) throw OutOfRange("pipeline needs 0 < eps <= 1/16");
  MeasureFamily s1 = embedding_to_measures(e, eps);
  if (s1.size() < 2) throw InvalidSource("pipeline needs a star with at least 3 points");
  auto c = run_pipeline_on_family(s1, eps);
  c.entry_distortion = distortion(e);
  return c;
}

struct VerificationResult {
  bool ok = true;
  std::vector<std::string> failures;  // "check-name: reason"
  explicit operator bool() const { return ok; }
};

// Recomputes every check in `c.checks` from the stored families and index
// sets; a check fails if it does not hold or its stored sides are stale.
inline VerificationResult verify_certificate(const PipelineCertificate& c) {
  VerificationResult out;
  if (c.checks.empty()) return out;

  std::map<std::string, Check> fresh;
  auto absorb = [&](const std::vector<Check>& v) {
    for (const auto& ch : v) fresh[ch.name] = ch;
  };
  try {
    if (c.stages.size() != 4) throw InvalidFamily("certificate must hold four stage families");
    absorb(stage_one_checks(c.stages[0], c.stages[1], c.coordinate_set, c.witnesses,
                            c.restrictions, c.eps));
    absorb(stage_two_checks(c.stages[1], c.stages[2], c.heavy, c.kept, c.eps, c.family_size));
    absorb(stage_three_checks(c.stages[2], c.stages[3], c.truncations, c.eps, c.family_size));
  } catch (const std::exception& ex) {
    out.ok = false;
    out.failures.push_back(std::string("structure: ") + ex.what());
    return out;
  }

  auto close = [](double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= kCheckTolerance * std::max(1.0, std::abs(b));
  };
  for (const auto& recorded : c.checks) {
    auto it = fresh.find(recorded.name);
    if (it == fresh.end()) {
      out.ok = false;
      out.failures.push_back(recorded.name + ": unknown check");
      continue;
    }
    const Check& now = it->second;
    if (!close(recorded.lhs, now.lhs) || !close(recorded.rhs, now.rhs) ||
        recorded.relation != now.relation) {
      out.ok = false;
      out.failures.push_back(recorded.name + ": recorded sides do not match recomputation");
    }
    if (!now.pass || !recorded.pass) {
      out.ok = false;
      out.failures.push_back(recorded.name + ": inequality fails (" + std::to_string(now.lhs) +
                             " " + relation_symbol(now.relation) + " " +
                             std::to_string(now.rhs) + ")");
    }
  }
  return out;
}

}  // namespace l1lab
