#include "msvi/bench.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "msvi/problem_io.hpp"

namespace msvi {

namespace {

/// Shortest-exact double formatting for CSV cells: %.17g round-trips and
/// repeated runs of the same computation print identical bytes.
std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_time(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

ProblemInstance make_instance(const RunConfig& config, std::uint64_t trial_seed) {
  if (config.problem_file) return load_problem(*config.problem_file);
  if (!config.generator) {
    throw ValidationError("RunConfig: needs either a generator or a problem file");
  }
  const GeneratorSpec& g = *config.generator;
  if (g.family == "affine") {
    return gen_random_affine(g.atom_count, g.n0, g.n1, trial_seed);
  }
  if (g.family == "random_walk_socp") {
    return gen_random_walk_socp(g.stages, g.steps_per_stage);
  }
  throw ValidationError("RunConfig: unknown generator family '" + g.family + "'");
}

}  // namespace

std::string algorithm_name(Algorithm a) {
  return a == Algorithm::PcAdmm ? "pc_admm" : "pha";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "pc_admm") return Algorithm::PcAdmm;
  if (name == "pha") return Algorithm::Pha;
  throw ValidationError("unknown algorithm '" + name + "' (expected pc_admm or pha)");
}

bool BenchSummary::all_converged() const {
  for (const auto& t : trials) {
    if (t.status != SolveStatus::Converged) return false;
  }
  return true;
}

void write_trace_csv(std::ostream& out, const SolverReport& report) {
  out << "iter,err,d_gnorm,phi,elapsed_ms\n";
  for (std::size_t k = 0; k < report.trace.size(); ++k) {
    const IterRecord& rec = report.trace[k];
    out << k << ',' << fmt_double(rec.err) << ',' << fmt_double(rec.d_gnorm) << ','
        << fmt_double(rec.phi) << ',' << fmt_time(rec.elapsed_ms) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const BenchSummary& summary) {
  bool with_known = false;
  for (const auto& s : summary.summaries) {
    if (s.avg_known_solution_err) with_known = true;
  }
  out << "algo,m,n,eps,avg_iter,avg_time_ms";
  if (with_known) out << ",known_sol_err";
  out << '\n';
  for (const auto& s : summary.summaries) {
    out << algorithm_name(s.algo) << ',' << summary.m << ',' << summary.n << ','
        << fmt_double(summary.eps) << ',' << fmt_double(s.avg_iterations) << ','
        << fmt_time(s.avg_time_ms);
    if (with_known) {
      out << ',' << (s.avg_known_solution_err ? fmt_double(*s.avg_known_solution_err) : "");
    }
    out << '\n';
  }
}

BenchSummary run(const RunConfig& config) {
  if (config.trials < 1) throw ValidationError("RunConfig: trials must be >= 1");
  if (config.algorithms.empty()) {
    throw ValidationError("RunConfig: needs at least one algorithm");
  }

  const bool write_files = !config.out_dir.empty();
  if (write_files) std::filesystem::create_directories(config.out_dir);

  BenchSummary summary;
  summary.eps = config.eps;

  for (Algorithm algo : config.algorithms) {
    double iter_sum = 0.0;
    double time_sum = 0.0;
    double known_sum = 0.0;
    int known_count = 0;

    for (int trial = 0; trial < config.trials; ++trial) {
      const std::uint64_t trial_seed = config.seed + static_cast<std::uint64_t>(trial);
      ProblemInstance inst = make_instance(config, trial_seed);
      summary.m = inst.space->atom_count();
      summary.n = inst.filtration.dim();

      const OperatorHandle F = inst.handle();
      const double lipschitz = F.lipschitz();

      const auto t0 = std::chrono::steady_clock::now();
      const SolverReport report = [&]() -> SolverReport {
        if (algo == Algorithm::PcAdmm) {
          PcAdmmParams params =
              PcAdmmParams::for_lipschitz(lipschitz, config.eps, config.beta_scale);
          params.alpha = config.alpha;
          params.max_iter = config.max_iter;
          params.assert_theory = config.assert_theory;
          return solve_pc_admm(F, inst.sets, inst.filtration, params,
                               pc_admm_default_start(inst.sets, inst.filtration));
        }
        PhaParams params = PhaParams::for_lipschitz(lipschitz, config.eps, config.beta_scale);
        params.max_iter = config.max_iter;
        if (config.inner_tol) params.inner_tol = *config.inner_tol;
        return solve_pha(F, inst.sets, inst.filtration, params,
                         pha_default_start(inst.sets, inst.filtration));
      }();
      const double elapsed_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
              .count();

      TrialResult result;
      result.algo = algo;
      result.trial = trial;
      result.seed = trial_seed;
      result.status = report.status;
      result.iterations = report.iterations;
      result.time_ms = elapsed_ms;
      result.final_err = report.final_err;
      if (inst.known_solution) {
        result.known_solution_err = l2_norm(report.certificate.x - *inst.known_solution);
        known_sum += *result.known_solution_err;
        ++known_count;
      }
      iter_sum += report.iterations;
      time_sum += elapsed_ms;
      summary.trials.push_back(result);

      if (write_files) {
        const auto path = config.out_dir / ("trace_" + algorithm_name(algo) + "_trial" +
                                            std::to_string(trial) + ".csv");
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write trace file " + path.string());
        write_trace_csv(out, report);
      }
    }

    AlgoSummary algo_summary;
    algo_summary.algo = algo;
    algo_summary.avg_iterations = iter_sum / config.trials;
    algo_summary.avg_time_ms = time_sum / config.trials;
    if (known_count > 0) algo_summary.avg_known_solution_err = known_sum / known_count;
    summary.summaries.push_back(algo_summary);
  }

  if (write_files) {
    const auto path = config.out_dir / "summary.csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write summary file " + path.string());
    write_summary_csv(out, summary);
  }
  return summary;
}

}  // namespace msvi
