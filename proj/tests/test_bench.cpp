#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "msvi/bench.hpp"

using namespace msvi;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Strips the trailing (wall-time) column from every CSV line.
std::string drop_time_column(const std::string& csv) {
  std::stringstream out;
  std::stringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.rfind(',');
    out << line.substr(0, pos) << '\n';
  }
  return out.str();
}

RunConfig small_config(const std::filesystem::path& out) {
  RunConfig config;
  GeneratorSpec gen;
  gen.family = "affine";
  gen.atom_count = 6;
  gen.n0 = 2;
  gen.n1 = 2;
  config.generator = gen;
  config.algorithms = {Algorithm::PcAdmm, Algorithm::Pha};
  config.eps = 1e-4;
  config.trials = 2;
  config.seed = 21;
  config.out_dir = out;
  return config;
}

}  // namespace

TEST_CASE("algorithm names round-trip") {
  CHECK(algorithm_name(Algorithm::PcAdmm) == "pc_admm");
  CHECK(algorithm_from_name("pha") == Algorithm::Pha);
  CHECK_THROWS_AS(algorithm_from_name("newton"), ValidationError);
}

TEST_CASE("run writes consistent artifacts") {
  const auto dir = std::filesystem::temp_directory_path() / "msvi_bench_test" / "run1";
  std::filesystem::remove_all(dir);
  BenchSummary summary = run(small_config(dir));

  CHECK(summary.m == 6);
  CHECK(summary.n == 4);
  CHECK(summary.all_converged());
  REQUIRE(summary.trials.size() == 4);       // 2 algorithms x 2 trials
  REQUIRE(summary.summaries.size() == 2);

  // Summary means equal the arithmetic means of the per-trial rows, and the
  // per-trial iteration counts equal the trace lengths on disk.
  for (const auto& algo_summary : summary.summaries) {
    double iter_sum = 0.0;
    double time_sum = 0.0;
    int count = 0;
    for (const auto& t : summary.trials) {
      if (t.algo != algo_summary.algo) continue;
      iter_sum += t.iterations;
      time_sum += t.time_ms;
      ++count;

      const auto trace_path = dir / ("trace_" + algorithm_name(t.algo) + "_trial" +
                                     std::to_string(t.trial) + ".csv");
      const std::string trace = slurp(trace_path);
      const auto lines = std::count(trace.begin(), trace.end(), '\n');
      CHECK(lines == t.iterations + 1);  // header plus one row per iteration
      CHECK(trace.rfind("iter,err,d_gnorm,phi,elapsed_ms\n", 0) == 0);
    }
    CHECK(count == 2);
    CHECK(algo_summary.avg_iterations == doctest::Approx(iter_sum / count).epsilon(1e-15));
    CHECK(algo_summary.avg_time_ms == doctest::Approx(time_sum / count).epsilon(1e-12));
  }

  CHECK(std::filesystem::exists(dir / "summary.csv"));
  const std::string summary_csv = slurp(dir / "summary.csv");
  CHECK(summary_csv.rfind("algo,m,n,eps,avg_iter,avg_time_ms\n", 0) == 0);
}

TEST_CASE("identical configs produce identical traces up to wall time") {
  const auto base = std::filesystem::temp_directory_path() / "msvi_bench_test";
  std::filesystem::remove_all(base / "a");
  std::filesystem::remove_all(base / "b");
  run(small_config(base / "a"));
  run(small_config(base / "b"));

  for (const char* name :
       {"trace_pc_admm_trial0.csv", "trace_pc_admm_trial1.csv", "trace_pha_trial0.csv",
        "trace_pha_trial1.csv"}) {
    const std::string lhs = drop_time_column(slurp(base / "a" / name));
    const std::string rhs = drop_time_column(slurp(base / "b" / name));
    CHECK(lhs == rhs);
    CHECK(!lhs.empty());
  }
}

TEST_CASE("known-solution column appears for the tree family") {
  const auto dir = std::filesystem::temp_directory_path() / "msvi_bench_test" / "walk";
  std::filesystem::remove_all(dir);
  RunConfig config;
  GeneratorSpec gen;
  gen.family = "random_walk_socp";
  gen.stages = 2;
  gen.steps_per_stage = 1;
  config.generator = gen;
  config.algorithms = {Algorithm::PcAdmm};
  config.eps = 1e-5;
  config.trials = 1;
  config.out_dir = dir;

  BenchSummary summary = run(config);
  REQUIRE(summary.trials.size() == 1);
  REQUIRE(summary.trials[0].known_solution_err.has_value());
  CHECK(*summary.trials[0].known_solution_err < 1e-2);
  const std::string csv = slurp(dir / "summary.csv");
  CHECK(csv.rfind("algo,m,n,eps,avg_iter,avg_time_ms,known_sol_err\n", 0) == 0);
}

TEST_CASE("config validation") {
  RunConfig config;
  config.algorithms = {Algorithm::PcAdmm};
  CHECK_THROWS_AS(run(config), ValidationError);  // no problem source

  config.generator = GeneratorSpec{.family = "bogus"};
  CHECK_THROWS_AS(run(config), ValidationError);

  config.generator->family = "affine";
  config.trials = 0;
  CHECK_THROWS_AS(run(config), ValidationError);
}
