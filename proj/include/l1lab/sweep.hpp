#pragma once

// Frontier sweep: for each (n, eps, trial) find the smallest dimension at
// which the upper-bound construction reaches distortion 1+eps, run the
// reduction pipeline on it, and compare against the counting lower bound.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "l1lab/bounds.hpp"
#include "l1lab/constructions.hpp"
#include "l1lab/metric.hpp"
#include "l1lab/pipeline.hpp"
#include "l1lab/rng.hpp"

namespace l1lab {

struct SweepConfig {
  std::vector<std::size_t> n_list{64, 256, 512};
  std::vector<double> eps_list{0.05, 0.0625};
  std::size_t trials = 2;
  std::uint64_t seed = 1;
};

struct SweepRow {
  std::size_t n = 0;
  double eps = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t d_achieved = 0;
  double distortion = 0.0;
  std::uint64_t d_lower = 0;
  bool in_theorem_range = false;  // 0 < eps < 1/16 and n >= 1/eps^2
  bool cert_pass = false;
  std::size_t final_family = 0;   // |S_IV|, 0 when the pipeline did not finish
  std::string note;               // failure reason, empty on success
  std::string timestamp;          // excluded from reproducibility comparisons
};

inline const char* kSweepHeader =
    "n,eps,trial,seed,d_achieved,distortion,d_lower,in_theorem_range,cert_pass,final_family,note,timestamp";

inline std::uint64_t derive_seed(std::uint64_t master, std::size_t n, std::size_t eps_index,
                                 std::size_t trial) {
  CounterRng r(master, (static_cast<std::uint64_t>(n) << 24) ^ (static_cast<std::uint64_t>(eps_index) << 12) ^
                           static_cast<std::uint64_t>(trial));
  return r();
}

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct DimensionSearch {
  std::size_t d = 0;
  double distortion = 0.0;
};

// Doubling from d = 1 until the construction reaches 1+eps, then bisection
// between the last failure and the first success. Success is guaranteed at
// d = n-1 (the isometric basis embedding), so the doubling is capped there.
inline DimensionSearch smallest_dimension(std::size_t n, double eps, std::uint64_t seed) {
  auto ok = [&](std::size_t d, double& dist) {
    dist = distortion(star_upper_bound_embedding(n, d, eps, seed));
    return dist <= 1.0 + eps;
  };
  const std::size_t cap = std::max<std::size_t>(n - 1, 1);
  double dist = 0.0, best = 0.0;
  std::size_t lo = 0, hi = 1;
  while (!ok(hi, dist)) {
    if (hi == cap) throw NotAnEmbedding("construction failed at d = n-1");
    lo = hi;
    hi = std::min(2 * hi, cap);
  }
  best = dist;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (ok(mid, dist)) {
      hi = mid;
      best = dist;
    } else {
      lo = mid;
    }
  }
  return {hi, best};
}

inline SweepRow sweep_one(std::size_t n, double eps, std::size_t trial, std::uint64_t seed) {
  SweepRow row;
  row.n = n;
  row.eps = eps;
  row.trial = trial;
  row.seed = seed;
  const auto found = smallest_dimension(n, eps, seed);
  row.d_achieved = found.d;
  row.distortion = found.distortion;
  row.d_lower = lower_bound_search(n, eps).d_lower;
  row.in_theorem_range = eps > 0.0 && eps < 1.0 / 16.0 && static_cast<double>(n) >= 1.0 / (eps * eps);
  try {
    const auto cert = run_pipeline(star_upper_bound_embedding(n, found.d, eps, seed), eps);
    const auto v = verify_certificate(cert);
    row.cert_pass = v.ok;
    row.final_family = cert.stages.back().size();
    if (!v.ok) row.note = v.failures.front();
  } catch (const CertificateViolation& e) {
    row.note = e.check();
  } catch (const std::exception& e) {
    row.note = e.what();
  }
  row.timestamp = utc_timestamp();
  return row;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline void write_sweep_row(std::ostream& out, const SweepRow& r) {
  char num[64];
  out << r.n << ',';
  std::snprintf(num, sizeof num, "%.17g", r.eps);
  out << num << ',' << r.trial << ',' << r.seed << ',' << r.d_achieved << ',';
  std::snprintf(num, sizeof num, "%.17g", r.distortion);
  out << num << ',' << r.d_lower << ',' << (r.in_theorem_range ? "true" : "false") << ','
      << (r.cert_pass ? "true" : "false") << ',' << r.final_family << ',' << csv_escape(r.note) << ','
      << r.timestamp << '\n';
  out.flush();
}

// Rows arrive in (n, eps, trial) order. `stop` is polled between rows so an
// interrupted run keeps everything written so far.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg,
                                       const std::function<void(const SweepRow&)>& on_row = {},
                                       const std::atomic<bool>* stop = nullptr) {
  if (cfg.n_list.empty() || cfg.eps_list.empty()) throw InvalidArgument("sweep lists must be nonempty");
  for (std::size_t n : cfg.n_list)
    if (n < 3) throw InvalidArgument("sweep needs n >= 3");
  for (double e : cfg.eps_list)
    if (!(e > 0.0 && e <= kMaxPipelineEps)) throw OutOfRange("sweep eps must lie in (0, 1/16]");
  std::vector<SweepRow> rows;
  for (std::size_t n : cfg.n_list)
    for (std::size_t ei = 0; ei < cfg.eps_list.size(); ++ei)
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        if (stop && stop->load()) return rows;
        rows.push_back(sweep_one(n, cfg.eps_list[ei], t, derive_seed(cfg.seed, n, ei, t)));
        if (on_row) on_row(rows.back());
      }
  return rows;
}

// Frontier file produced by the search oracle.
inline const char* kFrontierHeader = "n,d,eps_target,best_distortion,seed,iterations";

inline void write_frontier_row(std::ostream& out, std::size_t n, std::size_t d, double eps_target,
                               double best, std::uint64_t seed, std::size_t iterations) {
  char a[64], b[64];
  std::snprintf(a, sizeof a, "%.17g", eps_target);
  std::snprintf(b, sizeof b, "%.17g", best);
  out << n << ',' << d << ',' << a << ',' << b << ',' << seed << ',' << iterations << '\n';
  out.flush();
}

}  // namespace l1lab
