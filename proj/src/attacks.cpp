#include "votegraph/attacks.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace votegraph {

bool is_candidate_control(AttackType t) {
  switch (t) {
    case AttackType::control_add_candidates:
    case AttackType::control_unlimited_add_candidates:
    case AttackType::control_delete_candidates:
    case AttackType::control_partition_candidates:
    case AttackType::control_runoff_partition_candidates:
      return true;
    default:
      return false;
  }
}

std::string to_string(Decision d) {
  switch (d) {
    case Decision::yes: return "yes";
    case Decision::no: return "no";
    case Decision::budget_exceeded: return "budget-exceeded";
    case Decision::cap_refused: return "cap-refused";
  }
  return "?";
}

std::vector<int> AttackInstance::original_candidates() const {
  std::vector<int> c;
  std::set<int> d(spoilers.begin(), spoilers.end());
  for (int i = 0; i < election.num_candidates(); ++i)
    if (!d.count(i)) c.push_back(i);
  return c;
}

void AttackInstance::validate() const {
  election.validate();
  const int j = election.num_candidates();
  if (p < 0 || p >= j) throw VoteError("attack: distinguished candidate not in roster");
  if (budget < 0) throw VoteError("attack: negative budget");
  if (rule.kind == VotingRule::ranked_pairs) rule.tiebreak.validate(j);

  const bool adding_cands = type == AttackType::control_add_candidates ||
                            type == AttackType::control_unlimited_add_candidates;
  if (!adding_cands && !spoilers.empty())
    throw VoteError("attack: spoiler pool only belongs to adding-candidates control");
  if (adding_cands) {
    std::set<int> seen;
    for (int c : spoilers) {
      if (c < 0 || c >= j || !seen.insert(c).second)
        throw VoteError("attack: malformed spoiler pool");
      if (c == p) throw VoteError("attack: distinguished candidate cannot be a spoiler");
    }
    if (static_cast<int>(spoilers.size()) >= j)
      throw VoteError("attack: spoiler pool swallows the whole roster");
  }

  if (type == AttackType::control_add_voters) {
    for (const auto& b : pool) {
      Election probe;
      probe.candidates = election.candidates;
      probe.ballots = {b};
      probe.validate();
    }
  } else if (!pool.empty()) {
    throw VoteError("attack: voter pool only belongs to adding-voters control");
  }

  if (type == AttackType::manipulation) {
    for (long long w : manip_weights)
      if (w < 1) throw VoteError("attack: manipulator weights must be positive");
  } else if (!manip_weights.empty()) {
    throw VoteError("attack: manipulator weights only belong to manipulation");
  }

  if (type != AttackType::bribery && type != AttackType::manipulation) {
    for (const auto& b : election.ballots)
      if (b.weight != 1)
        throw VoteError("attack: control instances take unit-weight votes");
    for (const auto& b : pool)
      if (b.weight != 1)
        throw VoteError("attack: control instances take unit-weight votes");
  }
}

bool goal_satisfied(const std::vector<int>& winners, Goal g, int p) {
  const bool member = std::find(winners.begin(), winners.end(), p) != winners.end();
  const bool hit = g.model == WinnerModel::nonunique ? member
                                                     : (member && winners.size() == 1);
  return g.mode == GoalMode::constructive ? hit : !hit;
}

std::vector<int> evaluate_winners(const Rule& rule, const Election& e) {
  const Wmg w = build_wmg(e);
  if (rule.kind == VotingRule::schulze) return schulze_winners(w);
  return {RpEvaluator(w.j, rule.tiebreak).winner(w)};
}

std::vector<int> evaluate_winners_subset(const Rule& rule, const Election& e,
                                         const std::vector<int>& keep) {
  if (static_cast<int>(keep.size()) == e.num_candidates()) return evaluate_winners(rule, e);
  const Election sub = restrict_election(e, keep);
  Rule local = rule;
  if (rule.kind == VotingRule::ranked_pairs) local.tiebreak = rule.tiebreak.restricted(keep);
  std::vector<int> winners = evaluate_winners(local, sub);
  for (int& c : winners) c = keep[c];
  return winners;
}

namespace {

// First-round winners inside two-stage control. A side nobody votes in
// promotes nobody; `keep` empty means the side holds no candidates.
std::vector<int> first_round_winners(const Rule& rule, const Election& e,
                                     const std::vector<int>& keep) {
  if (keep.empty()) return {};
  long long votes = 0;
  for (const auto& b : e.ballots) votes += b.count;
  if (votes == 0) return {};
  return evaluate_winners_subset(rule, e, keep);
}

std::vector<int> surviving(const std::vector<int>& winners, TieHandling th) {
  if (th == TieHandling::te && winners.size() != 1) return {};
  return winners;
}

std::vector<int> final_round(const Rule& rule, const Election& e,
                             std::vector<int> promoted) {
  std::sort(promoted.begin(), promoted.end());
  promoted.erase(std::unique(promoted.begin(), promoted.end()), promoted.end());
  if (promoted.empty()) return {};
  return evaluate_winners_subset(rule, e, promoted);
}

}  // namespace

std::vector<int> eval_voter_partition(const Rule& rule, const Election& e,
                                      const std::vector<long long>& v1_counts,
                                      TieHandling th) {
  if (v1_counts.size() != e.ballots.size())
    throw VoteError("voter partition: count vector does not match ballot entries");
  Election v1, v2;
  v1.candidates = v2.candidates = e.candidates;
  for (size_t i = 0; i < e.ballots.size(); ++i) {
    const long long c1 = v1_counts[i];
    if (c1 < 0 || c1 > e.ballots[i].count)
      throw VoteError("voter partition: count out of range");
    if (c1 > 0) {
      Ballot b = e.ballots[i];
      b.count = c1;
      v1.ballots.push_back(std::move(b));
    }
    if (c1 < e.ballots[i].count) {
      Ballot b = e.ballots[i];
      b.count -= c1;
      v2.ballots.push_back(std::move(b));
    }
  }
  std::vector<int> all(e.num_candidates());
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> promoted = surviving(first_round_winners(rule, v1, all), th);
  for (int c : surviving(first_round_winners(rule, v2, all), th)) promoted.push_back(c);
  return final_round(rule, e, std::move(promoted));
}

std::vector<int> eval_candidate_partition(const Rule& rule, const Election& e,
                                          const std::vector<int>& c1, PartitionKind kind,
                                          TieHandling th) {
  std::vector<char> in1(e.num_candidates(), 0);
  for (int c : c1) {
    if (c < 0 || c >= e.num_candidates()) throw VoteError("candidate partition: bad id");
    in1[c] = 1;
  }
  std::vector<int> side1, side2;
  for (int c = 0; c < e.num_candidates(); ++c) (in1[c] ? side1 : side2).push_back(c);

  std::vector<int> promoted = surviving(first_round_winners(rule, e, side1), th);
  if (kind == PartitionKind::runoff) {
    for (int c : surviving(first_round_winners(rule, e, side2), th)) promoted.push_back(c);
  } else {
    for (int c : side2) promoted.push_back(c);  // byes
  }
  return final_round(rule, e, std::move(promoted));
}

namespace {

long long witness_add_count(const std::vector<long long>& counts,
                            const std::vector<Ballot>& entries, const char* what) {
  if (counts.size() != entries.size())
    throw VoteError(std::string("witness: count vector does not match ") + what);
  long long total = 0;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0 || counts[i] > entries[i].count)
      throw VoteError("witness: count out of range");
    total += counts[i];
  }
  return total;
}

}  // namespace

std::vector<int> apply_witness(const AttackInstance& inst, const Witness& w) {
  inst.validate();
  if (w.type != inst.type) throw VoteError("witness: attack type mismatch");

  switch (inst.type) {
    case AttackType::bribery: {
      Election e = inst.election;
      long long cost = 0;
      for (const auto& rw : w.rewrites) {
        if (rw.count < 1) throw VoteError("witness: empty rewrite");
        long long remaining = rw.count;
        for (auto& b : e.ballots) {
          if (b.order != rw.from_order || b.weight != rw.weight || b.price != rw.price)
            continue;
          const long long take = std::min(remaining, b.count);
          b.count -= take;
          remaining -= take;
          if (remaining == 0) break;
        }
        if (remaining > 0) throw VoteError("witness: rewrites more voters than exist");
        Ballot nb;
        nb.order = rw.to_order;
        nb.weight = rw.weight;
        nb.price = rw.price;
        nb.count = rw.count;
        e.ballots.push_back(std::move(nb));
        cost += rw.price * rw.count;
      }
      if (cost > inst.budget) throw VoteError("witness: bribery cost exceeds the budget");
      std::erase_if(e.ballots, [](const Ballot& b) { return b.count == 0; });
      return evaluate_winners(inst.rule, e);
    }

    case AttackType::manipulation: {
      if (w.manip_orders.size() != inst.manip_weights.size())
        throw VoteError("witness: one ballot per manipulator required");
      Election e = inst.election;
      for (size_t i = 0; i < w.manip_orders.size(); ++i) {
        Ballot b;
        b.order = w.manip_orders[i];
        b.weight = inst.manip_weights[i];
        e.ballots.push_back(std::move(b));
      }
      return evaluate_winners(inst.rule, e);
    }

    case AttackType::control_add_voters: {
      const long long added = witness_add_count(w.chosen_counts, inst.pool, "the pool");
      if (added > inst.budget) throw VoteError("witness: adds more voters than the budget");
      Election e = inst.election;
      for (size_t i = 0; i < w.chosen_counts.size(); ++i)
        if (w.chosen_counts[i] > 0) {
          Ballot b = inst.pool[i];
          b.count = w.chosen_counts[i];
          e.ballots.push_back(std::move(b));
        }
      return evaluate_winners(inst.rule, e);
    }

    case AttackType::control_delete_voters: {
      const long long deleted =
          witness_add_count(w.chosen_counts, inst.election.ballots, "the ballots");
      if (deleted > inst.budget) throw VoteError("witness: deletes more voters than the budget");
      Election e = inst.election;
      for (size_t i = 0; i < w.chosen_counts.size(); ++i) e.ballots[i].count -= w.chosen_counts[i];
      std::erase_if(e.ballots, [](const Ballot& b) { return b.count == 0; });
      return evaluate_winners(inst.rule, e);
    }

    case AttackType::control_partition_voters: {
      witness_add_count(w.chosen_counts, inst.election.ballots, "the ballots");
      return eval_voter_partition(inst.rule, inst.election, w.chosen_counts,
                                  inst.tie_handling);
    }

    case AttackType::control_add_candidates:
    case AttackType::control_unlimited_add_candidates: {
      std::set<int> pool(inst.spoilers.begin(), inst.spoilers.end());
      std::set<int> chosen;
      for (int c : w.chosen_candidates) {
        if (!pool.count(c)) throw VoteError("witness: added candidate is not in the pool");
        if (!chosen.insert(c).second) throw VoteError("witness: candidate added twice");
      }
      if (inst.type == AttackType::control_add_candidates &&
          static_cast<long long>(chosen.size()) > inst.budget)
        throw VoteError("witness: adds more candidates than the budget");
      std::vector<int> keep = inst.original_candidates();
      keep.insert(keep.end(), chosen.begin(), chosen.end());
      std::sort(keep.begin(), keep.end());
      return evaluate_winners_subset(inst.rule, inst.election, keep);
    }

    case AttackType::control_delete_candidates: {
      std::set<int> gone;
      for (int c : w.chosen_candidates) {
        if (c < 0 || c >= inst.election.num_candidates())
          throw VoteError("witness: deleted candidate not in roster");
        if (c == inst.p) throw VoteError("witness: the distinguished candidate cannot be deleted");
        if (!gone.insert(c).second) throw VoteError("witness: candidate deleted twice");
      }
      if (static_cast<long long>(gone.size()) > inst.budget)
        throw VoteError("witness: deletes more candidates than the budget");
      std::vector<int> keep;
      for (int c = 0; c < inst.election.num_candidates(); ++c)
        if (!gone.count(c)) keep.push_back(c);
      return evaluate_winners_subset(inst.rule, inst.election, keep);
    }

    case AttackType::control_partition_candidates:
    case AttackType::control_runoff_partition_candidates: {
      std::set<int> seen;
      for (int c : w.chosen_candidates)
        if (!seen.insert(c).second) throw VoteError("witness: C1 repeats a candidate");
      const auto kind = inst.type == AttackType::control_partition_candidates
                            ? PartitionKind::partition
                            : PartitionKind::runoff;
      return eval_candidate_partition(inst.rule, inst.election, w.chosen_candidates, kind,
                                      inst.tie_handling);
    }
  }
  throw VoteError("witness: unknown attack type");
}

}  // namespace votegraph
