#pragma once

#include <string>
#include <vector>

#include "votegraph/attacks.hpp"

namespace votegraph::bench {

/// Benchmark configuration: adversarial No instances of the chosen attack at
/// fixed j, sized by voter count, with the action budget scaled along so the
/// brute-force search space keeps growing.
struct BenchConfig {
  std::string attack = "bribery";
  std::string rule = "schulze";
  int j = 3;
  std::vector<long long> voters;
  double budget_ratio = 0.25;  // k = max(1, floor(n * ratio))
  int trials = 3;
  double time_cap_s = 2.0;
  std::vector<std::string> solvers = {"brute", "fpt"};
};

BenchConfig bench_config_from_json(const std::string& text);

struct BenchRow {
  long long voters = 0;
  long long k = 0;
  std::string solver;
  double wall_s = 0;      // median over trials
  std::string decision;
  long long work = 0;     // brute: states; fpt: models solved
  long long model_vars = 0;
};

AttackInstance bench_instance(const BenchConfig& cfg, long long voters);

std::vector<BenchRow> run_bench(const BenchConfig& cfg);

std::string bench_csv(const std::vector<BenchRow>& rows);

/// Least-squares slope of log(wall) against log(voters).
double loglog_slope(const std::vector<std::pair<double, double>>& points);

}  // namespace votegraph::bench
