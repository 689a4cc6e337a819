#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "votegraph/io.hpp"

using namespace votegraph;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "votegraph-cli-test";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const fs::path out = work_dir() / "stdout.txt";
  const fs::path err = work_dir() / "stderr.txt";
  const std::string cmd = env_prefix + std::string(VOTEGRAPH_CLI_BIN) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int raw = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path write_temp(const std::string& name, const std::string& content) {
  const fs::path p = work_dir() / name;
  io::write_file(p.string(), content);
  return p;
}

fs::path fixture_election_file() {
  Election e = fig1_election();
  e.candidates = {"1", "2", "3", "4"};
  return write_temp("fig1-election.json", io::election_to_json(e));
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

}  // namespace

TEST_CASE("cli: winners under both rules on the fixture") {
  const fs::path election = fixture_election_file();
  const auto schulze = run_cli("winners --election " + election.string());
  CHECK(schulze.exit_code == 0);
  CHECK(first_line(schulze.out) == "4");

  const auto rp = run_cli("winners --election " + election.string() + " --rule ranked-pairs");
  CHECK(rp.exit_code == 0);
  CHECK(first_line(rp.out) == "3");

  const auto traced =
      run_cli("winners --election " + election.string() + " --rule ranked-pairs --trace");
  CHECK(traced.exit_code == 0);
  CHECK(traced.out.find("skipped") != std::string::npos);
  CHECK(traced.out.find("order: 3 4 2 1") != std::string::npos);
}

TEST_CASE("cli: single-candidate election") {
  Election e;
  e.candidates = {"only"};
  const fs::path p = write_temp("single.json", io::election_to_json(e));
  const auto res = run_cli("winners --election " + p.string());
  CHECK(res.exit_code == 0);
  CHECK(first_line(res.out) == "only");
}

TEST_CASE("cli: parse failures exit nonzero with a message") {
  const fs::path bad = write_temp("bad.json", "{ nope");
  const auto res = run_cli("winners --election " + bad.string());
  CHECK(res.exit_code != 0);
  CHECK(res.err.find("error:") != std::string::npos);

  const auto gone = run_cli("winners --election " + (work_dir() / "missing.json").string());
  CHECK(gone.exit_code != 0);
}

TEST_CASE("cli: attack exit codes and witness verification") {
  // ranked pairs keeps the four-candidate fixture inside the framework caps
  AttackInstance inst;
  inst.type = AttackType::bribery;
  inst.election = fig1_election();
  inst.election.candidates = {"1", "2", "3", "4"};
  inst.p = 2;
  inst.rule = Rule::rp_default(4);
  inst.goal = {GoalMode::constructive, WinnerModel::nonunique};
  inst.budget = 0;
  const fs::path yes_file = write_temp("attack-yes.json", io::attack_to_json(inst));
  const fs::path witness_file = work_dir() / "witness.json";

  const auto yes = run_cli("attack --instance " + yes_file.string() + " --witness-out " +
                           witness_file.string() + " --verify");
  CHECK(yes.exit_code == 0);
  CHECK(yes.out.find("decision: yes") != std::string::npos);
  CHECK(yes.out.find("goal satisfied") != std::string::npos);
  CHECK(fs::exists(witness_file));
  CHECK(yes.out.find("\"solver\":\"fpt\"") != std::string::npos);

  inst.p = 0;
  const fs::path no_file = write_temp("attack-no.json", io::attack_to_json(inst));
  const auto no = run_cli("attack --instance " + no_file.string());
  CHECK(no.exit_code == 1);
  CHECK(no.out.find("decision: no") != std::string::npos);

  const auto brute = run_cli("attack --instance " + no_file.string() + " --solver brute");
  CHECK(brute.exit_code == 1);
  CHECK(brute.out.find("\"solver\":\"brute\"") != std::string::npos);

  AttackInstance small;
  small.type = AttackType::bribery;
  small.election.candidates = {"a", "b", "c"};
  small.election.ballots.push_back({{2, 1, 0}, 1, 1, 3});
  small.p = 2;
  small.rule = Rule::schulze();
  small.goal = {GoalMode::constructive, WinnerModel::nonunique};
  small.budget = 1;
  const fs::path small_file = write_temp("attack-small.json", io::attack_to_json(small));
  const auto faithful = run_cli("attack --instance " + small_file.string() +
                                " --encoding faithful");
  CHECK(faithful.exit_code == 0);

  const auto jobs = run_cli("attack --instance " + no_file.string() + " --jobs 3");
  CHECK(jobs.exit_code == 1);
}

TEST_CASE("cli: framework cap refusal surfaces as exit 2") {
  Election e;
  for (int c = 0; c < 6; ++c) e.candidates.push_back(std::to_string(c + 1));
  Ballot b;
  b.order = {0, 1, 2, 3, 4, 5};
  e.ballots.push_back(b);
  AttackInstance inst;
  inst.type = AttackType::bribery;
  inst.election = e;
  inst.p = 0;
  inst.rule = Rule::schulze();
  inst.goal = {GoalMode::constructive, WinnerModel::nonunique};
  inst.budget = 1;
  const fs::path f = write_temp("attack-big.json", io::attack_to_json(inst));
  const auto refused = run_cli("attack --instance " + f.string() + " --solver fpt");
  CHECK(refused.exit_code == 2);
  CHECK(refused.out.find("cap-refused") != std::string::npos);

  // auto avoids the cap by falling back to brute force
  const auto env = run_cli("attack --instance " + f.string() + " --solver auto");
  CHECK(env.exit_code != 2);
}

TEST_CASE("cli: the environment variable overrides the framework caps") {
  AttackInstance inst;
  inst.type = AttackType::bribery;
  inst.election.candidates = {"a", "b", "c"};
  inst.election.ballots.push_back({{0, 1, 2}, 1, 1, 1});
  inst.p = 0;
  inst.rule = Rule::schulze();
  inst.goal = {GoalMode::constructive, WinnerModel::nonunique};
  inst.budget = 0;
  const fs::path f = write_temp("attack-capped.json", io::attack_to_json(inst));
  const auto normal = run_cli("attack --instance " + f.string() + " --solver fpt");
  CHECK(normal.exit_code == 0);
  const auto lowered = run_cli("attack --instance " + f.string() + " --solver fpt",
                               "VOTEGRAPH_FRAMEWORK_CAP=2 ");
  CHECK(lowered.exit_code == 2);
  CHECK(lowered.out.find("cap-refused") != std::string::npos);
}

TEST_CASE("cli: a tiny state budget surfaces as exit 2") {
  Election e;
  e.candidates = {"p", "x", "y"};
  Ballot b;
  b.order = {1, 2, 0};
  b.count = 10;
  e.ballots.push_back(b);
  AttackInstance inst;
  inst.type = AttackType::bribery;
  inst.election = e;
  inst.p = 0;
  inst.rule = Rule::schulze();
  inst.goal = {GoalMode::constructive, WinnerModel::nonunique};
  inst.budget = 2;
  const fs::path f = write_temp("attack-tiny-budget.json", io::attack_to_json(inst));
  const auto res =
      run_cli("attack --instance " + f.string() + " --solver brute --budget 3");
  CHECK(res.exit_code == 2);
  CHECK(res.out.find("budget-exceeded") != std::string::npos);
}

TEST_CASE("cli: synthesize round-trips a WMG file") {
  io::NamedWmg target;
  target.candidates = {"1", "2", "3", "4"};
  target.wmg = fig1_wmg();
  const fs::path wmg_file = write_temp("fig1-wmg.json", io::wmg_to_json(target));
  const fs::path out_file = work_dir() / "synth.json";
  const auto res =
      run_cli("synthesize --wmg " + wmg_file.string() + " --out " + out_file.string());
  CHECK(res.exit_code == 0);
  const Election e = io::election_from_json(slurp(out_file));
  CHECK(build_wmg(e) == target.wmg);
  CHECK(e.candidates == target.candidates);

  // zero target synthesizes the empty election
  io::NamedWmg zero;
  zero.candidates = {"a", "b"};
  zero.wmg = Wmg(2);
  const fs::path zero_file = write_temp("zero-wmg.json", io::wmg_to_json(zero));
  const auto zres = run_cli("synthesize --wmg " + zero_file.string());
  CHECK(zres.exit_code == 0);
  CHECK(zres.out.find("\"ballots\": []") != std::string::npos);
}

TEST_CASE("cli: reduce generates attack files") {
  const fs::path hs_file = write_temp("hs.json", R"({"universe":3,"sets":[[0,1],[1,2]],"k":1})");
  const fs::path out = work_dir() / "hs-attack.json";
  const auto res = run_cli("reduce hs --in " + hs_file.string() + " --out " + out.string());
  CHECK(res.exit_code == 0);
  const AttackInstance inst = io::attack_from_json(slurp(out));
  CHECK(inst.type == AttackType::control_add_candidates);
  CHECK(inst.election.num_candidates() == 6);

  const fs::path part_file = write_temp("part.json", R"({"values":[1,1]})");
  const auto pres = run_cli("reduce partition --in " + part_file.string());
  CHECK(pres.exit_code == 0);
  CHECK(pres.out.find("\"type\": \"manipulation\"") != std::string::npos);
}

TEST_CASE("cli: bench rejects an empty config and emits CSV otherwise") {
  const fs::path empty = write_temp("bench-empty.json", "{}");
  const auto bad = run_cli("bench --config " + empty.string());
  CHECK(bad.exit_code != 0);

  const fs::path cfg = write_temp(
      "bench.json", R"({"voters":[6,10],"trials":1,"time_cap_s":2.0,"budget_ratio":0.25})");
  const auto res = run_cli("bench --config " + cfg.string());
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("voters,k,solver,wall_s,decision,work,model_vars") != std::string::npos);
  CHECK(res.out.find("6,1,brute,") != std::string::npos);
  CHECK(res.out.find("10,2,fpt,") != std::string::npos);
}
