#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "msvi/pc_admm.hpp"
#include "msvi/pha.hpp"
#include "msvi/problems.hpp"

namespace msvi {

enum class Algorithm { PcAdmm, Pha };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

/// Problem source for a run: either a generator recipe or a file.
struct GeneratorSpec {
  std::string family;  // "affine" | "random_walk_socp"
  int atom_count = 10;
  int n0 = 5;
  int n1 = 5;
  int stages = 3;
  int steps_per_stage = 2;
};

struct RunConfig {
  std::optional<GeneratorSpec> generator;
  std::optional<std::filesystem::path> problem_file;
  std::vector<Algorithm> algorithms;

  double eps = 1e-3;
  int max_iter = 100000;
  double alpha = 0.61;
  double beta_scale = 1.1;
  std::optional<double> inner_tol;  // implicit solver; defaults to eps/10
  bool assert_theory = false;

  int trials = 10;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir;  // empty: no artifacts written
};

struct TrialResult {
  Algorithm algo;
  int trial = 0;
  std::uint64_t seed = 0;
  SolveStatus status = SolveStatus::IterationLimit;
  int iterations = 0;
  double time_ms = 0.0;  // wall clock around the solve call only
  double final_err = 0.0;
  std::optional<double> known_solution_err;  // L2 distance when a solution is known
};

struct AlgoSummary {
  Algorithm algo;
  double avg_iterations = 0.0;
  double avg_time_ms = 0.0;
  std::optional<double> avg_known_solution_err;
};

struct BenchSummary {
  int m = 0;
  int n = 0;
  double eps = 0.0;
  std::vector<TrialResult> trials;
  std::vector<AlgoSummary> summaries;  // means of the per-trial rows

  bool all_converged() const;
};

/// Executes trials with seeds seed, seed+1, ... for every requested
/// algorithm. When out_dir is set, writes one per-iteration trace CSV per
/// (algorithm, trial) plus summary.csv. Trace and summary bytes are fully
/// determined by (config, seed) except for the wall-time columns.
BenchSummary run(const RunConfig& config);

/// Header: iter,err,d_gnorm,phi,elapsed_ms
void write_trace_csv(std::ostream& out, const SolverReport& report);

/// Header: algo,m,n,eps,avg_iter,avg_time_ms and, when a known solution was
/// attached, a trailing known_sol_err column.
void write_summary_csv(std::ostream& out, const BenchSummary& summary);

}  // namespace msvi
