// Command-line front end: winner evaluation, attack solving, McGarvey
// synthesis, reduction generation, and benchmarking. Human-readable lines go
// to stdout together with one machine-readable JSON line per result.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "votegraph/bench.hpp"
#include "votegraph/fpt.hpp"
#include "votegraph/io.hpp"
#include "votegraph/oracle.hpp"
#include "votegraph/reductions.hpp"

namespace {

using namespace votegraph;
using Clock = std::chrono::steady_clock;

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitRefused = 2;
constexpr int kExitError = 4;

std::string names_of(const Election& e, const std::vector<int>& ids) {
  std::string out;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ' ';
    out += e.candidates[ids[i]];
  }
  return out;
}

void machine_line(const nlohmann::json& j) { std::cout << j.dump() << "\n"; }

int cmd_winners(const std::string& election_path, const std::string& rule_name,
                const std::string& tiebreak_path, bool trace) {
  const Election e = io::election_from_json(io::read_file(election_path));
  Rule rule = Rule::schulze();
  if (rule_name == "ranked-pairs") {
    rule = tiebreak_path.empty()
               ? Rule::rp_default(e.num_candidates())
               : Rule::rp(io::tiebreak_from_json(io::read_file(tiebreak_path),
                                                 e.num_candidates()));
  } else if (rule_name != "schulze") {
    throw VoteError("unknown rule: " + rule_name);
  }

  const auto start = Clock::now();
  const auto winners = evaluate_winners(rule, e);
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();

  std::cout << names_of(e, winners) << "\n";
  nlohmann::json out;
  out["event"] = "winners";
  out["rule"] = rule_name;
  out["winners"] = winners;
  out["wall_ms"] = ms;
  if (trace && rule.kind == VotingRule::ranked_pairs) {
    const RpTrace t = ranked_pairs(build_wmg(e), rule.tiebreak);
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : t.steps) {
      std::cout << "consider {" << e.candidates[s.pair.first] << ","
                << e.candidates[s.pair.second] << "} edge " << e.candidates[s.edge.first] << "->"
                << e.candidates[s.edge.second] << (s.fixed ? " fixed: " : " skipped: ")
                << e.candidates[s.relation.first] << " beats " << e.candidates[s.relation.second]
                << "\n";
      steps.push_back({{"pair", {s.pair.first, s.pair.second}},
                       {"edge", {s.edge.first, s.edge.second}},
                       {"fixed", s.fixed},
                       {"relation", {s.relation.first, s.relation.second}}});
    }
    std::cout << "order:";
    for (int c : t.final_order) std::cout << ' ' << e.candidates[c];
    std::cout << "\n";
    out["trace"] = std::move(steps);
    out["final_order"] = t.final_order;
  }
  machine_line(out);
  return kExitYes;
}

int cmd_attack(const std::string& instance_path, const std::string& solver_name,
               long long state_budget, const std::string& encoding, int jobs,
               const std::string& witness_out, bool verify) {
  const AttackInstance inst = io::attack_from_json(io::read_file(instance_path));

  fpt::FptOptions opts;
  opts.jobs = jobs;
  opts.encoding = encoding == "faithful" ? fpt::FptOptions::Encoding::faithful
                                         : fpt::FptOptions::Encoding::reduced;
  if (const char* cap = std::getenv("VOTEGRAPH_FRAMEWORK_CAP")) {
    opts.schulze_cap = opts.rp_cap = std::atoi(cap);
  }
  oracle::SearchBudget budget;
  if (state_budget > 0) budget.max_states = state_budget;

  const auto start = Clock::now();
  SolveResult res;
  std::string solver_used = solver_name;
  if (solver_name == "brute") {
    res = oracle::solve_brute(inst, budget);
  } else if (solver_name == "fpt") {
    res = fpt::solve_fpt(inst, opts);
    if (!fpt::uses_framework_loop(inst.type)) solver_used = "brute";
  } else if (solver_name == "auto") {
    const bool use_fpt = !fpt::uses_framework_loop(inst.type) || fpt::within_caps(inst, opts);
    res = fpt::solve_auto(inst, opts, budget);
    solver_used = use_fpt && fpt::uses_framework_loop(inst.type) ? "fpt" : "brute";
  } else {
    throw VoteError("unknown solver: " + solver_name);
  }

  io::RunReport report;
  report.instance_digest = io::instance_digest(inst);
  report.solver = solver_used;
  report.decision = res.decision;
  report.witness = res.witness;
  report.stats = res.stats;
  report.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();

  std::cout << "decision: " << to_string(res.decision) << "\n";
  if (res.witness && !witness_out.empty()) {
    io::write_file(witness_out, io::witness_to_json(*res.witness));
    std::cout << "witness written to " << witness_out << "\n";
  }
  if (res.witness && verify) {
    const auto winners = apply_witness(inst, *res.witness);
    const bool ok = goal_satisfied(winners, inst.goal, inst.p);
    std::cout << "witness replay: " << (ok ? "goal satisfied" : "GOAL NOT SATISFIED") << "\n";
    if (!ok) return kExitError;
  }
  machine_line(nlohmann::json::parse(io::report_to_json(report)));

  switch (res.decision) {
    case Decision::yes: return kExitYes;
    case Decision::no: return kExitNo;
    default: return kExitRefused;
  }
}

int cmd_synthesize(const std::string& wmg_path, bool weighted, long long ballot_budget,
                   const std::string& out_path) {
  const io::NamedWmg target = io::wmg_from_json(io::read_file(wmg_path));
  McgarveyOptions opts;
  opts.weighted = weighted;
  if (ballot_budget > 0) opts.ballot_budget = ballot_budget;
  Election e = mcgarvey_synthesize(target.wmg, opts);
  e.candidates = target.candidates;
  const std::string text = io::election_to_json(e);
  if (out_path.empty()) std::cout << text << "\n";
  else io::write_file(out_path, text);
  nlohmann::json out;
  out["event"] = "synthesize";
  out["ballots"] = e.total_votes();
  out["entries"] = e.ballots.size();
  machine_line(out);
  return kExitYes;
}

int cmd_reduce(const std::string& kind, const std::string& in_path, const std::string& out_path,
               int candidates) {
  const auto j = nlohmann::json::parse(io::read_file(in_path));
  AttackInstance inst;
  if (kind == "hs") {
    reductions::HittingSetInstance h;
    h.universe = j.at("universe").get<int>();
    h.sets = j.at("sets").get<std::vector<std::vector<int>>>();
    h.k = j.at("k").get<long long>();
    inst = reductions::hs_to_ccac(h);
  } else if (kind == "partition") {
    reductions::PartitionInstance p;
    p.values = j.at("values").get<std::vector<long long>>();
    inst = reductions::partition_to_wcm(p, candidates);
  } else {
    throw VoteError("unknown reduction: " + kind);
  }
  const std::string text = io::attack_to_json(inst);
  if (out_path.empty()) std::cout << text << "\n";
  else io::write_file(out_path, text);
  nlohmann::json out;
  out["event"] = "reduce";
  out["kind"] = kind;
  out["candidates"] = inst.election.num_candidates();
  out["voters"] = inst.election.total_votes();
  machine_line(out);
  return kExitYes;
}

int cmd_bench(const std::string& config_path, const std::string& out_path) {
  const auto cfg = bench::bench_config_from_json(io::read_file(config_path));
  const auto rows = bench::run_bench(cfg);
  const std::string csv = bench::bench_csv(rows);
  if (out_path.empty()) std::cout << csv;
  else io::write_file(out_path, csv);
  nlohmann::json out;
  out["event"] = "bench";
  out["rows"] = rows.size();
  machine_line(out);
  return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schulze / ranked-pairs election evaluation and attack solving"};
  app.require_subcommand(1);

  std::string election_path, rule_name = "schulze", tiebreak_path;
  bool trace = false;
  auto* winners = app.add_subcommand("winners", "evaluate an election's winners");
  winners->add_option("--election", election_path, "election JSON file")->required();
  winners->add_option("--rule", rule_name, "schulze | ranked-pairs");
  winners->add_option("--tiebreak", tiebreak_path, "tie-break JSON file (ranked pairs)");
  winners->add_flag("--trace", trace, "print the ranked-pairs step trace");

  std::string instance_path, solver_name = "auto", encoding = "reduced", witness_out;
  long long state_budget = 0;
  int jobs = 1;
  bool verify = false;
  auto* attack = app.add_subcommand("attack", "decide an attack instance");
  attack->add_option("--instance", instance_path, "attack JSON file")->required();
  attack->add_option("--solver", solver_name, "auto | fpt | brute");
  attack->add_option("--budget", state_budget, "brute-force state cap");
  attack->add_option("--encoding", encoding, "reduced | faithful (fpt bribery)");
  attack->add_option("--jobs", jobs, "parallel framework-loop workers");
  attack->add_option("--witness-out", witness_out, "write the yes-witness here");
  attack->add_flag("--verify", verify, "replay the witness and check the goal");

  std::string wmg_path, synth_out;
  bool weighted = false;
  long long ballot_budget = 0;
  auto* synth = app.add_subcommand("synthesize", "realize a WMG as an election");
  synth->add_option("--wmg", wmg_path, "WMG JSON file")->required();
  synth->add_flag("--weighted", weighted, "use weighted ballots");
  synth->add_option("--ballot-budget", ballot_budget, "unweighted ballot cap");
  synth->add_option("--out", synth_out, "output election file (default stdout)");

  std::string reduce_kind, reduce_in, reduce_out;
  int reduce_candidates = 5;
  auto* reduce = app.add_subcommand("reduce", "generate a hardness-reduction image");
  reduce->add_option("kind", reduce_kind, "hs | partition")->required();
  reduce->add_option("--in", reduce_in, "source instance JSON")->required();
  reduce->add_option("--out", reduce_out, "output attack file (default stdout)");
  reduce->add_option("--candidates", reduce_candidates, "candidate count (partition, >= 5)");

  std::string bench_config, bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "brute vs fpt runtime comparison");
  bench_cmd->add_option("--config", bench_config, "bench config JSON")->required();
  bench_cmd->add_option("--out", bench_out, "CSV output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (winners->parsed()) return cmd_winners(election_path, rule_name, tiebreak_path, trace);
    if (attack->parsed())
      return cmd_attack(instance_path, solver_name, state_budget, encoding, jobs, witness_out,
                        verify);
    if (synth->parsed()) return cmd_synthesize(wmg_path, weighted, ballot_budget, synth_out);
    if (reduce->parsed()) return cmd_reduce(reduce_kind, reduce_in, reduce_out, reduce_candidates);
    if (bench_cmd->parsed()) return cmd_bench(bench_config, bench_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
