#include "votegraph/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <optional>

namespace votegraph::oracle {

namespace {

using Clock = std::chrono::steady_clock;

struct Counter {
  long long states = 0;
  long long max_states;
  Clock::time_point deadline;
  bool has_deadline;
  bool exceeded = false;

  explicit Counter(const SearchBudget& b)
      : max_states(b.max_states),
        deadline(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                    std::chrono::duration<double>(b.time_cap_s))),
        has_deadline(b.time_cap_s > 0) {}

  // one evaluated action; false once any cap is blown
  bool tick() {
    ++states;
    if (states > max_states) exceeded = true;
    if (has_deadline && (states & 1023) == 0 && Clock::now() > deadline) exceeded = true;
    return !exceeded;
  }
};

std::vector<std::vector<int>> all_orders(int j) {
  std::vector<int> base(j);
  std::iota(base.begin(), base.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(base);
  while (std::next_permutation(base.begin(), base.end()));
  return out;
}

struct TypeKey {
  std::vector<int> order;
  long long weight;
  long long price;
  auto operator<=>(const TypeKey&) const = default;
};

struct TypeGroup {
  TypeKey key;
  long long count = 0;
};

std::vector<TypeGroup> group_types(const std::vector<Ballot>& ballots) {
  std::map<TypeKey, long long> m;
  for (const auto& b : ballots) m[{b.order, b.weight, b.price}] += b.count;
  std::vector<TypeGroup> out;
  for (auto& [k, c] : m) out.push_back({k, c});
  return out;
}

// Spreads per-type takes over the original ballot entries, in entry order.
std::vector<long long> spread_over_entries(const std::vector<Ballot>& entries,
                                           const std::vector<TypeGroup>& types,
                                           const std::vector<long long>& take) {
  std::map<TypeKey, long long> left;
  for (size_t t = 0; t < types.size(); ++t) left[types[t].key] = take[t];
  std::vector<long long> out(entries.size(), 0);
  for (size_t i = 0; i < entries.size(); ++i) {
    auto it = left.find({entries[i].order, entries[i].weight, entries[i].price});
    if (it == left.end()) continue;
    const long long x = std::min(it->second, entries[i].count);
    out[i] = x;
    it->second -= x;
  }
  return out;
}

// All vectors c with sum(c) == s and 0 <= c[t] <= cap[t], lexicographic.
// The callback returns false to abort the whole enumeration.
template <typename F>
bool compositions(const std::vector<long long>& cap, long long s, std::vector<long long>& c,
                  size_t t, F&& f) {
  if (t == cap.size()) return s == 0 ? f(c) : true;
  long long rest = 0;
  for (size_t u = t + 1; u < cap.size(); ++u) rest += cap[u];
  const long long hi = std::min(cap[t], s);
  const long long lo = std::max<long long>(0, s - rest);
  for (long long x = lo; x <= hi; ++x) {
    c[t] = x;
    if (!compositions(cap, s - x, c, t + 1, f)) return false;
  }
  c[t] = 0;
  return true;
}

struct BruteSearch {
  const AttackInstance& inst;
  Counter counter;
  std::optional<Witness> found;

  BruteSearch(const AttackInstance& i, const SearchBudget& b) : inst(i), counter(b) {}

  bool goal_met(const std::vector<int>& winners) const {
    return goal_satisfied(winners, inst.goal, inst.p);
  }

  SolveResult result() const {
    SolveResult r;
    r.stats.states = counter.states;
    if (found) {
      r.decision = Decision::yes;
      r.witness = found;
    } else {
      r.decision = counter.exceeded ? Decision::budget_exceeded : Decision::no;
    }
    return r;
  }
};

void brute_bribery(BruteSearch& s) {
  const auto types = group_types(s.inst.election.ballots);
  const auto orders = all_orders(s.inst.election.num_candidates());
  std::vector<long long> cap;
  long long total = 0;
  for (const auto& t : types) {
    cap.push_back(t.count);
    total += t.count;
  }

  // retarget[t] holds the nondecreasing order-rank multiset the bribed
  // voters of type t are rewritten to
  // free rewrites (price 0) leave the size unbounded; otherwise the budget
  // divided by the cheapest price caps how many voters can be touched
  long long min_price = std::numeric_limits<long long>::max();
  for (const auto& t : types) min_price = std::min(min_price, t.key.price);
  const long long max_size =
      types.empty() ? 0 : (min_price > 0 ? std::min(total, s.inst.budget / min_price) : total);

  std::vector<std::vector<int>> retarget(types.size());
  std::vector<long long> take(types.size(), 0);

  auto evaluate = [&]() -> bool {  // false aborts enumeration
    if (!s.counter.tick()) return false;
    Election e;
    e.candidates = s.inst.election.candidates;
    for (size_t t = 0; t < types.size(); ++t) {
      if (types[t].count > take[t]) {
        Ballot b;
        b.order = types[t].key.order;
        b.weight = types[t].key.weight;
        b.price = types[t].key.price;
        b.count = types[t].count - take[t];
        e.ballots.push_back(std::move(b));
      }
      for (int rank : retarget[t]) {
        Ballot b;
        b.order = orders[rank];
        b.weight = types[t].key.weight;
        b.price = types[t].key.price;
        e.ballots.push_back(std::move(b));
      }
    }
    if (!s.goal_met(evaluate_winners(s.inst.rule, e))) return true;
    Witness w;
    w.type = AttackType::bribery;
    for (size_t t = 0; t < types.size(); ++t) {
      std::map<int, long long> per_order;
      for (int rank : retarget[t]) ++per_order[rank];
      for (auto [rank, cnt] : per_order)
        w.rewrites.push_back({types[t].key.order, types[t].key.weight, types[t].key.price,
                              orders[rank], cnt});
    }
    s.found = std::move(w);
    return false;
  };

  // nondecreasing retarget multiset per bribed type, depth-first over types
  auto assign = [&](auto&& self, size_t t) -> bool {
    if (t == types.size()) return evaluate();
    if (take[t] == 0) return self(self, t + 1);
    retarget[t].assign(take[t], 0);
    auto spin = [&](auto&& rec, size_t slot, int least) -> bool {
      if (slot == retarget[t].size()) return self(self, t + 1);
      for (int o = least; o < static_cast<int>(orders.size()); ++o) {
        retarget[t][slot] = o;
        if (!rec(rec, slot + 1, o)) return false;
      }
      return true;
    };
    const bool keep_going = spin(spin, 0, 0);
    retarget[t].clear();
    return keep_going;
  };

  std::vector<long long> c(types.size(), 0);
  for (long long size = 0; size <= max_size; ++size) {
    const bool keep_going = compositions(cap, size, c, 0, [&](const std::vector<long long>& pick) {
      long long cost = 0;
      for (size_t t = 0; t < types.size(); ++t) cost += pick[t] * types[t].key.price;
      if (cost > s.inst.budget) return true;
      take = pick;
      return assign(assign, 0);
    });
    if (!keep_going) return;
  }
}

// Shared by adding and deleting voters: enumerate per-type counts summing to
// each cardinality in turn and evaluate the modified election.
void brute_voter_sets(BruteSearch& s, bool adding) {
  const auto& source = adding ? s.inst.pool : s.inst.election.ballots;
  const auto types = group_types(source);
  std::vector<long long> cap;
  long long total = 0;
  for (const auto& t : types) {
    cap.push_back(t.count);
    total += t.count;
  }
  const long long max_size = std::min<long long>(total, s.inst.budget);
  std::vector<long long> c(types.size(), 0);
  for (long long size = 0; size <= max_size; ++size) {
    const bool keep_going = compositions(cap, size, c, 0, [&](const std::vector<long long>& pick) {
      if (!s.counter.tick()) return false;
      Election e = s.inst.election;
      if (adding) {
        for (size_t t = 0; t < types.size(); ++t)
          if (pick[t] > 0) {
            Ballot b;
            b.order = types[t].key.order;
            b.weight = types[t].key.weight;
            b.price = types[t].key.price;
            b.count = pick[t];
            e.ballots.push_back(std::move(b));
          }
      } else {
        const auto deleted = spread_over_entries(e.ballots, types, pick);
        for (size_t i = 0; i < e.ballots.size(); ++i) e.ballots[i].count -= deleted[i];
        std::erase_if(e.ballots, [](const Ballot& b) { return b.count == 0; });
      }
      if (!s.goal_met(evaluate_winners(s.inst.rule, e))) return true;
      Witness w;
      w.type = s.inst.type;
      w.chosen_counts = spread_over_entries(source, types, pick);
      s.found = std::move(w);
      return false;
    });
    if (!keep_going) return;
  }
}

void brute_voter_partition(BruteSearch& s) {
  const auto types = group_types(s.inst.election.ballots);
  std::vector<long long> c(types.size(), 0);
  // odometer over all per-type splits; (V1,V2) and (V2,V1) are equivalent,
  // so mirrored splits are visited once
  while (true) {
    bool mirror_canonical = true;
    for (size_t t = 0; t < types.size(); ++t) {
      const long long other = types[t].count - c[t];
      if (c[t] != other) {
        mirror_canonical = c[t] < other;
        break;
      }
    }
    if (mirror_canonical) {
      if (!s.counter.tick()) return;
      const auto v1 = spread_over_entries(s.inst.election.ballots, types, c);
      if (s.goal_met(eval_voter_partition(s.inst.rule, s.inst.election, v1, s.inst.tie_handling))) {
        Witness w;
        w.type = AttackType::control_partition_voters;
        w.chosen_counts = v1;
        s.found = std::move(w);
        return;
      }
    }
    size_t t = 0;
    while (t < types.size() && c[t] == types[t].count) c[t++] = 0;
    if (t == types.size()) return;
    ++c[t];
  }
}

// Candidate subsets ordered by cardinality, then lexicographically on the
// sorted id list.
template <typename F>
bool candidate_subsets(const std::vector<int>& universe, long long max_size, F&& f) {
  const int n = static_cast<int>(universe.size());
  std::vector<int> pick;
  auto rec = [&](auto&& self, int start, int need) -> bool {
    if (need == 0) return f(pick);
    for (int i = start; i <= n - need; ++i) {
      pick.push_back(universe[i]);
      if (!self(self, i + 1, need - 1)) return false;
      pick.pop_back();
    }
    return true;
  };
  const long long top = std::min<long long>(n, max_size);
  for (long long size = 0; size <= top; ++size)
    if (!rec(rec, 0, static_cast<int>(size))) return false;
  return true;
}

void brute_candidate_sets(BruteSearch& s) {
  const AttackType type = s.inst.type;
  std::vector<int> universe;
  long long max_size = 0;
  if (type == AttackType::control_add_candidates ||
      type == AttackType::control_unlimited_add_candidates) {
    universe = s.inst.spoilers;
    max_size = type == AttackType::control_add_candidates
                   ? s.inst.budget
                   : static_cast<long long>(universe.size());
  } else {
    for (int cnd = 0; cnd < s.inst.election.num_candidates(); ++cnd)
      if (cnd != s.inst.p) universe.push_back(cnd);
    max_size = s.inst.budget;
  }
  const auto original = s.inst.original_candidates();

  candidate_subsets(universe, max_size, [&](const std::vector<int>& pick) {
    if (!s.counter.tick()) return false;
    std::vector<int> keep;
    if (type == AttackType::control_delete_candidates) {
      std::vector<char> gone(s.inst.election.num_candidates(), 0);
      for (int cnd : pick) gone[cnd] = 1;
      for (int cnd = 0; cnd < s.inst.election.num_candidates(); ++cnd)
        if (!gone[cnd]) keep.push_back(cnd);
    } else {
      keep = original;
      keep.insert(keep.end(), pick.begin(), pick.end());
      std::sort(keep.begin(), keep.end());
    }
    if (!s.goal_met(evaluate_winners_subset(s.inst.rule, s.inst.election, keep))) return true;
    Witness w;
    w.type = type;
    w.chosen_candidates = pick;
    s.found = std::move(w);
    return false;
  });
}

void brute_candidate_partition(BruteSearch& s) {
  const int j = s.inst.election.num_candidates();
  const bool runoff = s.inst.type == AttackType::control_runoff_partition_candidates;
  const auto kind = runoff ? PartitionKind::runoff : PartitionKind::partition;
  std::vector<int> universe(j);
  std::iota(universe.begin(), universe.end(), 0);

  candidate_subsets(universe, j, [&](const std::vector<int>& c1) {
    // runoff is symmetric in the two sides; keep the half containing 0
    if (runoff && (c1.empty() || c1.front() != 0)) return true;
    if (!s.counter.tick()) return false;
    if (!s.goal_met(eval_candidate_partition(s.inst.rule, s.inst.election, c1, kind,
                                             s.inst.tie_handling)))
      return true;
    Witness w;
    w.type = s.inst.type;
    w.chosen_candidates = c1;
    s.found = std::move(w);
    return false;
  });
}

struct ManipClass {
  long long weight = 0;
  std::vector<size_t> members;  // indices into inst.manip_weights
};

std::vector<ManipClass> manip_classes(const std::vector<long long>& weights) {
  std::map<long long, ManipClass> m;
  for (size_t i = 0; i < weights.size(); ++i) {
    auto& c = m[weights[i]];
    c.weight = weights[i];
    c.members.push_back(i);
  }
  std::vector<ManipClass> out;
  for (auto& [w, c] : m) out.push_back(std::move(c));
  return out;
}

void brute_manipulation(BruteSearch& s) {
  const int j = s.inst.election.num_candidates();
  const auto orders = all_orders(j);
  const auto classes = manip_classes(s.inst.manip_weights);
  const Wmg base = build_wmg(s.inst.election);

  // pairwise contribution of each order, applied incrementally
  std::vector<std::vector<int8_t>> contrib(orders.size(),
                                           std::vector<int8_t>(static_cast<size_t>(j) * j, 0));
  for (size_t o = 0; o < orders.size(); ++o) {
    std::vector<int> pos(j);
    for (int r = 0; r < j; ++r) pos[orders[o][r]] = r;
    for (int a = 0; a < j; ++a)
      for (int b = 0; b < j; ++b)
        if (a != b) contrib[o][static_cast<size_t>(a) * j + b] = pos[a] < pos[b] ? 1 : -1;
  }

  std::optional<RpEvaluator> rp;
  if (s.inst.rule.kind == VotingRule::ranked_pairs) rp.emplace(j, s.inst.rule.tiebreak);

  Wmg cur = base;
  std::vector<std::vector<int>> picks(classes.size());  // order ranks per class, nondecreasing

  auto add = [&](int o, long long w) {
    for (size_t i = 0; i < cur.d.size(); ++i) cur.d[i] += w * contrib[o][i];
  };

  auto leaf = [&]() -> bool {
    if (!s.counter.tick()) return false;
    std::vector<int> winners;
    if (rp) winners = {rp->winner(cur)};
    else winners = schulze_winners(cur);
    if (!s.goal_met(winners)) return true;
    Witness w;
    w.type = AttackType::manipulation;
    w.manip_orders.resize(s.inst.manip_weights.size());
    for (size_t ci = 0; ci < classes.size(); ++ci)
      for (size_t slot = 0; slot < classes[ci].members.size(); ++slot)
        w.manip_orders[classes[ci].members[slot]] = orders[picks[ci][slot]];
    s.found = std::move(w);
    return false;
  };

  auto rec = [&](auto&& self, size_t ci, size_t slot, int least) -> bool {
    if (ci == classes.size()) return leaf();
    if (slot == classes[ci].members.size()) return self(self, ci + 1, 0, 0);
    for (int o = least; o < static_cast<int>(orders.size()); ++o) {
      picks[ci].push_back(o);
      add(o, classes[ci].weight);
      const bool keep_going = self(self, ci, slot + 1, o);
      add(o, -classes[ci].weight);
      picks[ci].pop_back();
      if (!keep_going) return false;
    }
    return true;
  };
  rec(rec, 0, 0, 0);
}

}  // namespace

SolveResult solve_brute(const AttackInstance& inst, const SearchBudget& budget) {
  inst.validate();
  BruteSearch s(inst, budget);
  switch (inst.type) {
    case AttackType::bribery: brute_bribery(s); break;
    case AttackType::manipulation: brute_manipulation(s); break;
    case AttackType::control_add_voters: brute_voter_sets(s, true); break;
    case AttackType::control_delete_voters: brute_voter_sets(s, false); break;
    case AttackType::control_partition_voters: brute_voter_partition(s); break;
    case AttackType::control_add_candidates:
    case AttackType::control_unlimited_add_candidates:
    case AttackType::control_delete_candidates: brute_candidate_sets(s); break;
    case AttackType::control_partition_candidates:
    case AttackType::control_runoff_partition_candidates: brute_candidate_partition(s); break;
  }
  return s.result();
}

SolveResult solve_uniform_vote(const AttackInstance& inst, const SearchBudget& budget) {
  inst.validate();
  if (inst.type != AttackType::manipulation)
    throw VoteError("uniform-vote solving applies to manipulation instances only");
  const int j = inst.election.num_candidates();

  BruteSearch s(inst, budget);
  if (inst.manip_weights.empty()) {
    if (s.counter.tick() && s.goal_met(evaluate_winners(inst.rule, inst.election))) {
      Witness w;
      w.type = AttackType::manipulation;
      s.found = std::move(w);
    }
  } else {
    for (const auto& order : all_orders(j)) {
      if (!s.counter.tick()) break;
      Election e = inst.election;
      for (long long mw : inst.manip_weights) {
        Ballot b;
        b.order = order;
        b.weight = mw;
        e.ballots.push_back(std::move(b));
      }
      if (s.goal_met(evaluate_winners(inst.rule, e))) {
        Witness w;
        w.type = AttackType::manipulation;
        w.manip_orders.assign(inst.manip_weights.size(), order);
        s.found = std::move(w);
        break;
      }
    }
  }
  SolveResult r = s.result();
  const bool schulze_regime = inst.rule.kind == VotingRule::schulze &&
                              inst.goal.mode == GoalMode::constructive &&
                              inst.goal.model == WinnerModel::nonunique;
  const bool rp_regime = inst.rule.kind == VotingRule::ranked_pairs && j <= 4 &&
                         inst.goal.mode == GoalMode::constructive;
  r.complete = r.decision == Decision::yes || (schulze_regime || rp_regime);
  return r;
}

}  // namespace votegraph::oracle
