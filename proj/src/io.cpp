#include "votegraph/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace votegraph::io {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("json parse failure: ") + e.what());
  }
}

template <typename T>
T get_field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad or missing field '") + key + "': " + e.what());
  }
}

json ballot_to_json(const Ballot& b) {
  json out;
  out["order"] = b.order;
  if (b.weight != 1) out["weight"] = b.weight;
  if (b.price != 1) out["price"] = b.price;
  if (b.count != 1) out["count"] = b.count;
  return out;
}

Ballot ballot_from_json(const json& j) {
  Ballot b;
  b.order = get_field<std::vector<int>>(j, "order");
  b.weight = j.value("weight", 1LL);
  b.price = j.value("price", 1LL);
  b.count = j.value("count", 1LL);
  return b;
}

json election_to_obj(const Election& e) {
  json out;
  out["candidates"] = e.candidates;
  json ballots = json::array();
  for (const auto& b : e.ballots) ballots.push_back(ballot_to_json(b));
  out["ballots"] = std::move(ballots);
  return out;
}

Election election_from_obj(const json& j) {
  Election e;
  e.candidates = get_field<std::vector<std::string>>(j, "candidates");
  if (j.contains("ballots"))
    for (const auto& b : j.at("ballots")) e.ballots.push_back(ballot_from_json(b));
  e.validate();
  return e;
}

json tiebreak_to_obj(const TieBreak& t) {
  json out;
  out["candidates"] = t.candidate_order;
  json pairs = json::array();
  for (auto [a, b] : t.pair_order) pairs.push_back(json::array({a, b}));
  out["pairs"] = std::move(pairs);
  return out;
}

TieBreak tiebreak_from_obj(const json& j, int jj) {
  TieBreak t;
  t.candidate_order = get_field<std::vector<int>>(j, "candidates");
  for (const auto& p : j.at("pairs")) {
    if (!p.is_array() || p.size() != 2) throw ParseError("tie-break pair must be a 2-array");
    t.pair_order.emplace_back(p[0].get<int>(), p[1].get<int>());
  }
  t.validate(jj);
  return t;
}

json rule_to_obj(const Rule& r) {
  json out;
  out["kind"] = r.kind == VotingRule::schulze ? "schulze" : "ranked-pairs";
  if (r.kind == VotingRule::ranked_pairs) out["tiebreak"] = tiebreak_to_obj(r.tiebreak);
  return out;
}

Rule rule_from_obj(const json& j, int jj) {
  const auto kind = get_field<std::string>(j, "kind");
  if (kind == "schulze") return Rule::schulze();
  if (kind != "ranked-pairs") throw ParseError("unknown rule kind '" + kind + "'");
  if (j.contains("tiebreak")) return Rule::rp(tiebreak_from_obj(j.at("tiebreak"), jj));
  return Rule::rp_default(jj);
}

json goal_to_obj(const Goal& g) {
  json out;
  out["mode"] = g.mode == GoalMode::constructive ? "constructive" : "destructive";
  out["winner"] = g.model == WinnerModel::nonunique ? "nonunique" : "unique";
  return out;
}

Goal goal_from_obj(const json& j) {
  Goal g;
  const auto mode = get_field<std::string>(j, "mode");
  const auto winner = get_field<std::string>(j, "winner");
  if (mode == "constructive") g.mode = GoalMode::constructive;
  else if (mode == "destructive") g.mode = GoalMode::destructive;
  else throw ParseError("unknown goal mode '" + mode + "'");
  if (winner == "nonunique") g.model = WinnerModel::nonunique;
  else if (winner == "unique") g.model = WinnerModel::unique;
  else throw ParseError("unknown winner model '" + winner + "'");
  return g;
}

}  // namespace

std::string election_to_json(const Election& e) { return election_to_obj(e).dump(2); }

Election election_from_json(const std::string& text) { return election_from_obj(parse(text)); }

std::string wmg_to_json(const NamedWmg& w) {
  json out;
  out["candidates"] = w.candidates;
  json rows = json::array();
  for (int a = 0; a < w.wmg.j; ++a) {
    json row = json::array();
    for (int b = 0; b < w.wmg.j; ++b) row.push_back(w.wmg.at(a, b));
    rows.push_back(std::move(row));
  }
  out["d"] = std::move(rows);
  return out.dump(2);
}

NamedWmg wmg_from_json(const std::string& text) {
  const json j = parse(text);
  NamedWmg out;
  out.candidates = get_field<std::vector<std::string>>(j, "candidates");
  const auto& rows = j.at("d");
  const int n = static_cast<int>(out.candidates.size());
  if (static_cast<int>(rows.size()) != n) throw ParseError("WMG matrix has the wrong row count");
  out.wmg = Wmg(n);
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(rows[a].size()) != n)
      throw ParseError("WMG matrix has the wrong column count");
    for (int b = 0; b < n; ++b) out.wmg.at(a, b) = rows[a][b].get<long long>();
  }
  return out;
}

std::string tiebreak_to_json(const TieBreak& t) { return tiebreak_to_obj(t).dump(2); }

TieBreak tiebreak_from_json(const std::string& text, int j) {
  return tiebreak_from_obj(parse(text), j);
}

std::string attack_type_tag(AttackType t) {
  switch (t) {
    case AttackType::bribery: return "bribery";
    case AttackType::manipulation: return "manipulation";
    case AttackType::control_add_voters: return "ccav";
    case AttackType::control_delete_voters: return "ccdv";
    case AttackType::control_partition_voters: return "ccpv";
    case AttackType::control_add_candidates: return "ccac";
    case AttackType::control_unlimited_add_candidates: return "ccuac";
    case AttackType::control_delete_candidates: return "ccdc";
    case AttackType::control_partition_candidates: return "ccpc";
    case AttackType::control_runoff_partition_candidates: return "ccrpc";
  }
  return "?";
}

AttackType attack_type_from_tag(const std::string& tag) {
  if (tag == "bribery") return AttackType::bribery;
  if (tag == "manipulation") return AttackType::manipulation;
  if (tag == "ccav") return AttackType::control_add_voters;
  if (tag == "ccdv") return AttackType::control_delete_voters;
  if (tag == "ccpv") return AttackType::control_partition_voters;
  if (tag == "ccac") return AttackType::control_add_candidates;
  if (tag == "ccuac") return AttackType::control_unlimited_add_candidates;
  if (tag == "ccdc") return AttackType::control_delete_candidates;
  if (tag == "ccpc") return AttackType::control_partition_candidates;
  if (tag == "ccrpc") return AttackType::control_runoff_partition_candidates;
  throw ParseError("unknown attack type tag '" + tag + "'");
}

std::string attack_to_json(const AttackInstance& inst) {
  json out;
  out["type"] = attack_type_tag(inst.type);
  out["rule"] = rule_to_obj(inst.rule);
  out["goal"] = goal_to_obj(inst.goal);
  out["p"] = inst.p;
  out["election"] = election_to_obj(inst.election);
  switch (inst.type) {
    case AttackType::bribery:
    case AttackType::control_add_voters:
    case AttackType::control_delete_voters:
    case AttackType::control_add_candidates:
    case AttackType::control_delete_candidates:
      out["k"] = inst.budget;
      break;
    default:
      break;
  }
  if (inst.type == AttackType::control_add_voters) {
    json pool = json::array();
    for (const auto& b : inst.pool) pool.push_back(ballot_to_json(b));
    out["pool"] = std::move(pool);
  }
  if (inst.type == AttackType::manipulation) out["weights"] = inst.manip_weights;
  if (inst.type == AttackType::control_partition_voters ||
      inst.type == AttackType::control_partition_candidates ||
      inst.type == AttackType::control_runoff_partition_candidates)
    out["tie_handling"] = inst.tie_handling == TieHandling::te ? "te" : "tp";
  if (inst.type == AttackType::control_add_candidates ||
      inst.type == AttackType::control_unlimited_add_candidates)
    out["spoilers"] = inst.spoilers;
  return out.dump(2);
}

AttackInstance attack_from_json(const std::string& text) {
  const json j = parse(text);
  AttackInstance inst;
  inst.type = attack_type_from_tag(get_field<std::string>(j, "type"));
  inst.election = election_from_obj(j.at("election"));
  inst.rule = rule_from_obj(j.at("rule"), inst.election.num_candidates());
  inst.goal = goal_from_obj(j.at("goal"));
  inst.p = get_field<int>(j, "p");
  inst.budget = j.value("k", 0LL);
  if (j.contains("pool"))
    for (const auto& b : j.at("pool")) inst.pool.push_back(ballot_from_json(b));
  if (j.contains("weights")) inst.manip_weights = get_field<std::vector<long long>>(j, "weights");
  if (j.contains("tie_handling")) {
    const auto th = j.at("tie_handling").get<std::string>();
    if (th == "te") inst.tie_handling = TieHandling::te;
    else if (th == "tp") inst.tie_handling = TieHandling::tp;
    else throw ParseError("unknown tie handling '" + th + "'");
  }
  if (j.contains("spoilers")) inst.spoilers = get_field<std::vector<int>>(j, "spoilers");
  if (inst.type == AttackType::control_unlimited_add_candidates)
    inst.budget = static_cast<long long>(inst.spoilers.size());
  inst.validate();
  return inst;
}

std::string witness_to_json(const Witness& w) {
  json out;
  out["type"] = attack_type_tag(w.type);
  if (!w.rewrites.empty()) {
    json rewrites = json::array();
    for (const auto& r : w.rewrites) {
      json row;
      row["from"] = r.from_order;
      if (r.weight != 1) row["weight"] = r.weight;
      if (r.price != 1) row["price"] = r.price;
      row["to"] = r.to_order;
      row["count"] = r.count;
      rewrites.push_back(std::move(row));
    }
    out["rewrites"] = std::move(rewrites);
  }
  if (!w.manip_orders.empty()) out["orders"] = w.manip_orders;
  if (!w.chosen_counts.empty()) out["counts"] = w.chosen_counts;
  if (!w.chosen_candidates.empty()) out["candidates"] = w.chosen_candidates;
  // keep empty-but-meaningful fields representable
  if (w.type == AttackType::manipulation && w.manip_orders.empty()) out["orders"] = json::array();
  return out.dump(2);
}

Witness witness_from_json(const std::string& text) {
  const json j = parse(text);
  Witness w;
  w.type = attack_type_from_tag(get_field<std::string>(j, "type"));
  if (j.contains("rewrites"))
    for (const auto& r : j.at("rewrites")) {
      BriberyRewrite rw;
      rw.from_order = get_field<std::vector<int>>(r, "from");
      rw.to_order = get_field<std::vector<int>>(r, "to");
      rw.weight = r.value("weight", 1LL);
      rw.price = r.value("price", 1LL);
      rw.count = r.value("count", 1LL);
      w.rewrites.push_back(std::move(rw));
    }
  if (j.contains("orders")) w.manip_orders = get_field<std::vector<std::vector<int>>>(j, "orders");
  if (j.contains("counts")) w.chosen_counts = get_field<std::vector<long long>>(j, "counts");
  if (j.contains("candidates")) w.chosen_candidates = get_field<std::vector<int>>(j, "candidates");
  return w;
}

std::string instance_digest(const AttackInstance& inst) {
  const std::string text = attack_to_json(inst);
  unsigned long long h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

std::string report_to_json(const RunReport& r) {
  json out;
  out["instance"] = r.instance_digest;
  out["solver"] = r.solver;
  out["decision"] = to_string(r.decision);
  out["witness"] = r.witness ? json::parse(witness_to_json(*r.witness)) : json(nullptr);
  out["wall_ms"] = r.wall_ms;
  out["frameworks"] = r.stats.frameworks;
  out["models"] = r.stats.models;
  out["model_vars"] = r.stats.model_vars;
  out["states"] = r.stats.states;
  return out.dump();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw VoteError("cannot write file: " + path);
  out << content;
  out.flush();
  if (!out) throw VoteError("write failed: " + path);
}

}  // namespace votegraph::io
