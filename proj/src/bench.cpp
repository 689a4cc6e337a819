#include "votegraph/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "votegraph/fpt.hpp"
#include "votegraph/io.hpp"
#include "votegraph/oracle.hpp"

namespace votegraph::bench {

using Clock = std::chrono::steady_clock;

BenchConfig bench_config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw io::ParseError(std::string("bench config: ") + e.what());
  }
  BenchConfig cfg;
  cfg.attack = j.value("attack", cfg.attack);
  cfg.rule = j.value("rule", cfg.rule);
  cfg.j = j.value("j", cfg.j);
  if (j.contains("voters")) cfg.voters = j.at("voters").get<std::vector<long long>>();
  cfg.budget_ratio = j.value("budget_ratio", cfg.budget_ratio);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.time_cap_s = j.value("time_cap_s", cfg.time_cap_s);
  if (j.contains("solvers")) cfg.solvers = j.at("solvers").get<std::vector<std::string>>();
  if (cfg.voters.empty()) throw io::ParseError("bench config: no voter counts given");
  if (cfg.attack != "bribery") throw io::ParseError("bench config: unsupported attack");
  if (cfg.j < 2) throw io::ParseError("bench config: need at least two candidates");
  if (cfg.trials < 1) throw io::ParseError("bench config: trials must be positive");
  return cfg;
}

AttackInstance bench_instance(const BenchConfig& cfg, long long voters) {
  // Everyone ranks the distinguished candidate last with one shared ballot,
  // so every margin against p is the full electorate and no affordable bribe
  // can close it: both solvers must exhaust their search.
  AttackInstance inst;
  inst.type = AttackType::bribery;
  inst.goal = {GoalMode::constructive, WinnerModel::nonunique};
  inst.p = 0;
  inst.rule = cfg.rule == "schulze" ? Rule::schulze() : Rule::rp_default(cfg.j);
  for (int c = 0; c < cfg.j; ++c) inst.election.candidates.push_back("c" + std::to_string(c));
  Ballot b;
  for (int c = 1; c < cfg.j; ++c) b.order.push_back(c);
  b.order.push_back(0);
  b.count = voters;
  inst.election.ballots.push_back(std::move(b));
  inst.budget = std::max<long long>(1, static_cast<long long>(static_cast<double>(voters) *
                                                              cfg.budget_ratio));
  return inst;
}

namespace {

struct OneRun {
  double wall_s = 0;
  Decision decision = Decision::no;
  long long work = 0;
  long long model_vars = 0;
};

OneRun run_once(const AttackInstance& inst, const std::string& solver, double cap_s) {
  OneRun out;
  const auto start = Clock::now();
  SolveResult r;
  if (solver == "brute") {
    oracle::SearchBudget budget;
    budget.max_states = std::numeric_limits<long long>::max() / 2;
    budget.time_cap_s = cap_s;
    r = oracle::solve_brute(inst, budget);
    out.work = r.stats.states;
  } else {
    r = fpt::solve_fpt(inst);
    out.work = r.stats.models;
    out.model_vars = r.stats.model_vars;
  }
  out.wall_s = std::chrono::duration<double>(Clock::now() - start).count();
  out.decision = r.decision;
  return out;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  std::vector<BenchRow> rows;
  for (long long n : cfg.voters) {
    const AttackInstance inst = bench_instance(cfg, n);
    for (const auto& solver : cfg.solvers) {
      std::vector<OneRun> runs;
      for (int t = 0; t < cfg.trials; ++t) runs.push_back(run_once(inst, solver, cfg.time_cap_s));
      std::sort(runs.begin(), runs.end(),
                [](const OneRun& a, const OneRun& b) { return a.wall_s < b.wall_s; });
      const OneRun& median = runs[runs.size() / 2];
      BenchRow row;
      row.voters = n;
      row.k = inst.budget;
      row.solver = solver;
      row.wall_s = median.wall_s;
      row.decision = to_string(median.decision);
      row.work = median.work;
      row.model_vars = median.model_vars;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "voters,k,solver,wall_s,decision,work,model_vars\n";
  for (const auto& r : rows)
    os << r.voters << ',' << r.k << ',' << r.solver << ',' << r.wall_s << ',' << r.decision << ','
       << r.work << ',' << r.model_vars << '\n';
  return os.str();
}

double loglog_slope(const std::vector<std::pair<double, double>>& points) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(points.size());
  for (auto [x, y] : points) {
    const double lx = std::log(x);
    const double ly = std::log(std::max(y, 1e-9));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace votegraph::bench
