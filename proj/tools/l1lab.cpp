// l1lab: embeddings, reduction certificates, dimension bounds and sweeps.
//
// Exit codes: 0 ok, 2 usage / out-of-range parameters, 3 I/O, parse or
// construction failure, 4 certificate violation.

#include <atomic>
#include <csignal>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "l1lab/bounds.hpp"
#include "l1lab/constructions.hpp"
#include "l1lab/io.hpp"
#include "l1lab/kahane.hpp"
#include "l1lab/pipeline.hpp"
#include "l1lab/search.hpp"
#include "l1lab/sweep.hpp"

using namespace l1lab;

namespace {

constexpr int kOk = 0, kUsage = 2, kFailure = 3, kViolation = 4;

std::atomic<bool> g_stop{false};
extern "C" void on_sigint(int) { g_stop.store(true); }

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  const char* env = std::getenv("L1LAB_SEED");
  if (!env || !*env) return 1;
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(env, &pos);
    if (pos != std::string(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw UsageError("L1LAB_SEED must be an unsigned integer");
  }
}

void print_distortion(double d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  std::cout << "distortion " << buf << '\n';
}

void emit(const Json& j, const std::string& out) {
  if (out.empty()) std::cout << to_canonical_string(j) << '\n';
  else write_json_file(out, j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"l1lab: star and tree embeddings into l1, reduction certificates, bounds"};
  app.set_help_flag("--help", "print this help and exit");  // -h would clash with --h
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  try {
    seed = default_seed();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  // embed star|tree
  auto* embed = app.add_subcommand("embed", "build an upper-bound embedding");
  embed->require_subcommand(1);
  std::size_t n = 0, k = 0, h = 0, d = 0;
  double eps = 0.25;
  std::string out;

  auto* star = embed->add_subcommand("star", "sparse block-code star embedding");
  star->add_option("--n", n, "number of points (center + n-1 leaves)")->required()->check(CLI::Range(2, 1 << 20));
  star->add_option("--d", d, "target dimension (default: construction default for n, eps)");
  star->add_option("--eps", eps, "target distortion 1+eps")->check(CLI::Range(1e-6, 0.999999));
  star->add_option("--seed", seed, "seed (default L1LAB_SEED or 1)");
  star->add_option("--out", out, "output embedding JSON (default stdout)");

  auto* tree = embed->add_subcommand("tree", "edge-code complete k-ary tree embedding");
  tree->add_option("--k", k, "arity")->required()->check(CLI::Range(1, 64));
  tree->add_option("--h", h, "height")->required()->check(CLI::Range(0, 30));
  tree->add_option("--d", d, "target dimension")->required();
  tree->add_option("--eps", eps, "target distortion 1+eps (used below d = #edges)")->check(CLI::Range(1e-6, 0.999999));
  tree->add_option("--seed", seed, "seed (default L1LAB_SEED or 1)");
  tree->add_option("--out", out, "output embedding JSON (default stdout)");

  // pipeline run|verify
  auto* pipeline = app.add_subcommand("pipeline", "measure-family reduction with certificate");
  pipeline->require_subcommand(1);
  std::string embedding_path, cert_path;
  double pipe_eps = 0.0;
  auto* run = pipeline->add_subcommand("run", "run all four stages on a star embedding");
  run->add_option("--embedding", embedding_path, "input embedding JSON")->required();
  run->add_option("--eps", pipe_eps, "distortion parameter, 0 < eps <= 1/16")->required();
  run->add_option("--out", out, "output certificate JSON (default stdout)");
  auto* verify = pipeline->add_subcommand("verify", "recheck every inequality in a certificate");
  verify->add_option("certificate", cert_path, "certificate JSON")->required();

  // bounds
  auto* bounds = app.add_subcommand("bounds", "evaluate dimension lower bounds");
  std::uint64_t bn = 0;
  double beps = 0.0, D = 0.0;
  bool volume = false;
  bounds->add_option("--n", bn, "number of star points")->required();
  auto* beps_opt = bounds->add_option("--eps", beps, "distortion 1+eps, 0 < eps < 1/16");
  auto* volume_flag = bounds->add_flag("--volume", volume, "use the volume bound (2D)^d >= n-1");
  bounds->add_option("--D", D, "distortion for the volume bound")->needs(volume_flag);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "upper vs lower bound frontier");
  SweepConfig cfg;
  std::string sweep_out;
  sweep->add_option("--n-list", cfg.n_list, "star sizes")->expected(1, -1);
  sweep->add_option("--eps-list", cfg.eps_list, "eps values in (0, 1/16]")->expected(1, -1);
  sweep->add_option("--trials", cfg.trials, "trials per (n, eps)");
  sweep->add_option("--seed", seed, "master seed (default L1LAB_SEED or 1)");
  sweep->add_option("--out", sweep_out, "output CSV (default stdout)");

  // search
  auto* search = app.add_subcommand("search", "heuristic minimum-distortion star embedding");
  std::size_t iterations = 2000, starts = 8;
  double eps_target = 0.0;
  std::string frontier;
  search->add_option("--n", n, "number of star points")->required();
  search->add_option("--d", d, "dimension")->required();
  search->add_option("--iterations", iterations, "subgradient iterations per start");
  search->add_option("--starts", starts, "random starts");
  search->add_option("--eps-target", eps_target, "recorded in the frontier file");
  search->add_option("--seed", seed, "seed (default L1LAB_SEED or 1)");
  search->add_option("--frontier", frontier, "CSV file to append a result row to");
  search->add_option("--out", out, "output embedding JSON");

  // kahane
  auto* kahane = app.add_subcommand("kahane", "calibrate a square-root helix map on [lo, hi]");
  double lo = 0.0, hi = 1.0, min_scale = 0.0;
  kahane->add_option("--eps", eps, "target eps in (0, 1)")->required();
  kahane->add_option("--lo", lo, "range start");
  kahane->add_option("--hi", hi, "range end");
  kahane->add_option("--min-scale", min_scale, "smallest |x-y| covered (default 1e-4 (hi-lo))");
  kahane->add_option("--out", out, "output map JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*star) {
      if (d == 0) d = default_sparse_star_params(n, eps).dim();
      const Embedding e = star_upper_bound_embedding(n, d, eps, seed);
      if (!out.empty()) write_json_file(out, embedding_to_json(e));
      print_distortion(distortion(e));
      return kOk;
    }
    if (*tree) {
      const Embedding e = tree_code_embedding(k, h, d, eps, seed);
      if (!out.empty()) write_json_file(out, embedding_to_json(e));
      print_distortion(distortion(e));
      return kOk;
    }
    if (*run) {
      if (!(pipe_eps > 0.0 && pipe_eps <= kMaxPipelineEps)) throw UsageError("--eps must lie in (0, 1/16]");
      const Embedding e = embedding_from_json(read_json_file(embedding_path));
      const PipelineCertificate c = run_pipeline(e, pipe_eps);
      emit(certificate_to_json(c), out);
      std::cerr << "certificate: " << c.checks.size() << " checks passed, |S_IV| = "
                << c.stages.back().size() << '\n';
      return kOk;
    }
    if (*verify) {
      const PipelineCertificate c = certificate_from_json(read_json_file(cert_path));
      const VerificationResult v = verify_certificate(c);
      if (v.ok) {
        std::cout << "ok " << c.checks.size() << " checks\n";
        return kOk;
      }
      for (const auto& f : v.failures) std::cout << "FAIL " << f << '\n';
      return kViolation;
    }
    if (*bounds) {
      if (volume) {
        if (D == 0.0) throw UsageError("--volume needs --D");
        emit(bound_report_to_json(volume_bound_report(bn, D)), "");
      } else {
        if (beps_opt->count() == 0) throw UsageError("--eps is required without --volume");
        emit(bound_report_to_json(evaluate_lower_bound(bn, beps)), "");
      }
      return kOk;
    }
    if (*sweep) {
      cfg.seed = seed;
      std::ofstream file;
      if (!sweep_out.empty()) {
        file.open(sweep_out, std::ios::binary);
        if (!file) throw ParseError("cannot write " + sweep_out);
      }
      std::ostream& os = sweep_out.empty() ? std::cout : file;
      os << kSweepHeader << '\n';
      std::signal(SIGINT, on_sigint);
      bool all_pass = true;
      const auto rows = run_sweep(cfg, [&](const SweepRow& r) {
        write_sweep_row(os, r);
        all_pass = all_pass && r.cert_pass;
      }, &g_stop);
      if (g_stop.load()) std::cerr << "interrupted after " << rows.size() << " rows\n";
      return all_pass ? kOk : kViolation;
    }
    if (*search) {
      SearchOptions opt;
      opt.starts = starts;
      const SearchResult r = min_distortion_star(n, d, iterations, seed, opt);
      if (!out.empty()) write_json_file(out, embedding_to_json(r.embedding));
      if (!frontier.empty()) {
        const bool fresh = !std::ifstream(frontier).good();
        std::ofstream f(frontier, std::ios::app | std::ios::binary);
        if (!f) throw ParseError("cannot write " + frontier);
        if (fresh) f << kFrontierHeader << '\n';
        write_frontier_row(f, n, d, eps_target, r.distortion, seed, iterations);
      }
      print_distortion(r.distortion);
      return kOk;
    }
    if (*kahane) {
      const KahaneMap m = kahane_map(eps, lo, hi, min_scale);
      emit(kahane_to_json(m), out);
      std::cerr << "achieved eps " << m.achieved_eps() << ", dim " << m.dim() << '\n';
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const OutOfRange& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceLimit& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CertificateViolation& e) {
    std::cerr << "certificate violation: " << e.check() << ": " << e.what() << '\n';
    return kViolation;
  } catch (const NotAnEmbedding& e) {
    std::cerr << "certificate violation: entry.distortion: " << e.what() << '\n';
    return kViolation;
  } catch (const CalibrationError& e) {
    std::cerr << "error: " << e.what() << " (achieved " << e.achieved_eps() << ")\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
