// Acceptance suite: end-to-end checks of the library's headline guarantees,
// one pass/fail line each. Exits nonzero if any criterion fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <future>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include "fixtures.hpp"
#include "votegraph/bench.hpp"
#include "votegraph/fpt.hpp"
#include "votegraph/frameworks.hpp"
#include "votegraph/io.hpp"
#include "votegraph/oracle.hpp"
#include "votegraph/reductions.hpp"

using namespace votegraph;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void report(int number, const std::string& name, const Outcome& o) {
  std::printf("criterion %2d %-34s %s%s%s\n", number, name.c_str(),
              o.pass ? "PASS" : "FAIL", o.detail.empty() ? "" : "  -- ", o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++g_failures;
}

template <typename Fn>
void parallel_chunks(size_t count, Fn&& body) {
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<size_t> next{0};
  std::vector<std::future<void>> futs;
  for (unsigned w = 0; w < workers; ++w)
    futs.push_back(std::async(std::launch::async, [&] {
      for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    }));
  for (auto& f : futs) f.get();
}

// ---------------------------------------------------------------- 1
Outcome worked_example_fixture() {
  const Wmg w = fig1_wmg();
  const Election e = fig1_election();
  if (build_wmg(e) != w) return {false, "fixture ballots do not realize the margins"};

  double best_ms = 1e9;
  std::vector<int> schulze;
  int rp_winner = -1;
  std::vector<std::vector<long long>> s;
  for (int rep = 0; rep < 100; ++rep) {
    const auto t0 = Clock::now();
    s = strongest_paths(w);
    schulze = schulze_winners(w);
    rp_winner = ranked_pairs(w, TieBreak::lexicographic(4)).winner();
    best_ms = std::min(best_ms,
                       std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
  bool ok = schulze == std::vector<int>{3} && rp_winner == 2;
  for (int other = 0; other < 3; ++other)
    ok = ok && s[3][other] == 6 && s[other][3] == 2;
  std::ostringstream d;
  d << "winners ok=" << ok << ", eval " << best_ms << " ms";
  return {ok && best_ms < 1.0, d.str()};
}

// ---------------------------------------------------------------- 2
Outcome schulze_nonemptiness() {
  std::mt19937_64 rng(20260810);
  long long checked = 0, nonempty = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int j = 1 + static_cast<int>(rng() % 6);
    const int voters = static_cast<int>(rng() % 21);
    const Election e = random_election(rng, j, voters, 5);
    ++checked;
    if (!schulze_winners(build_wmg(e)).empty()) ++nonempty;
  }
  for (int parity = 0; parity < 2; ++parity)
    for (long long d01 = -4 + parity; d01 <= 4; d01 += 2)
      for (long long d02 = -4 + parity; d02 <= 4; d02 += 2)
        for (long long d12 = -4 + parity; d12 <= 4; d12 += 2) {
          Wmg w(3);
          w.at(0, 1) = d01; w.at(1, 0) = -d01;
          w.at(0, 2) = d02; w.at(2, 0) = -d02;
          w.at(1, 2) = d12; w.at(2, 1) = -d12;
          ++checked;
          if (!schulze_winners(w).empty()) ++nonempty;
        }
  std::ostringstream d;
  d << nonempty << "/" << checked << " nonempty";
  return {checked == nonempty, d.str()};
}

// ---------------------------------------------------------------- 3
Outcome mcgarvey_roundtrip() {
  std::mt19937_64 rng(31337);
  long long exact = 0;
  const long long trials = 1000;
  for (long long trial = 0; trial < trials; ++trial) {
    const int j = 1 + static_cast<int>(rng() % 6);
    const bool weighted = trial % 2 == 1;
    Wmg t(j);
    const int odd = static_cast<int>(rng() % 2);
    for (int a = 0; a < j; ++a)
      for (int b = a + 1; b < j; ++b) {
        long long v;
        if (weighted) {
          // margins drawn across the full 64-bit-weight regime
          const long long mag = static_cast<long long>(rng() % (1ULL << 56));
          v = 2 * mag + odd;
        } else {
          v = 2 * static_cast<long long>(rng() % 12) + odd;
        }
        if (rng() % 2) v = -v;
        t.at(a, b) = v;
        t.at(b, a) = -v;
      }
    McgarveyOptions opts;
    opts.weighted = weighted;
    if (build_wmg(mcgarvey_synthesize(t, opts)) == t) ++exact;
  }
  std::ostringstream d;
  d << exact << "/" << trials << " bit-exact";
  return {exact == trials, d.str()};
}

// ---------------------------------------------------------------- 4
Outcome rank_invariance() {
  long long agree = 0, total = 0;
  for (long long d01 = -4; d01 <= 4; d01 += 2)
    for (long long d02 = -4; d02 <= 4; d02 += 2)
      for (long long d12 = -4; d12 <= 4; d12 += 2) {
        Wmg w(3);
        w.at(0, 1) = d01; w.at(1, 0) = -d01;
        w.at(0, 2) = d02; w.at(2, 0) = -d02;
        w.at(1, 2) = d12; w.at(2, 1) = -d12;
        ++total;
        if (frameworks::swcf_winners(frameworks::swcf_of_wmg(w)) == schulze_winners(w)) ++agree;
      }
  std::ostringstream d;
  d << agree << "/" << total << " agree";
  return {agree == total, d.str()};
}

// ---------------------------------------------------------------- 5
std::vector<std::vector<int>> lex_orders(int j) {
  std::vector<int> base(j);
  std::iota(base.begin(), base.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(base);
  while (std::next_permutation(base.begin(), base.end()));
  return out;
}

// every multiset of at most `max_size` ballots over the j! vote types
std::vector<Election> ballot_multisets(int j, int max_size) {
  const auto orders = lex_orders(j);
  std::vector<Election> out;
  std::vector<int> pick;
  auto rec = [&](auto&& self, int least, int left) -> void {
    Election e;
    for (int c = 0; c < j; ++c) e.candidates.push_back(std::to_string(c + 1));
    for (int o : pick) e.ballots.push_back({orders[o], 1, 1, 1});
    out.push_back(std::move(e));
    if (left == 0) return;
    for (int o = least; o < static_cast<int>(orders.size()); ++o) {
      pick.push_back(o);
      self(self, o, left - 1);
      pick.pop_back();
    }
  };
  rec(rec, 0, max_size);
  return out;
}

Outcome oracle_equivalence() {
  const auto started = Clock::now();
  const int j = 3;
  const auto elections = ballot_multisets(j, 4);
  const auto orders = lex_orders(j);

  std::vector<AttackInstance> battery;
  for (const auto& e : elections) {
    const Rule rules[] = {Rule::schulze(), Rule::rp_default(j)};
    for (const auto& rule : rules)
      for (GoalMode mode : {GoalMode::constructive, GoalMode::destructive})
        for (WinnerModel model : {WinnerModel::nonunique, WinnerModel::unique}) {
          AttackInstance base;
          base.election = e;
          base.rule = rule;
          base.goal = {mode, model};
          base.p = 0;
          for (long long k = 0; k <= 2; ++k) {
            base.budget = k;
            base.type = AttackType::bribery;
            battery.push_back(base);
            base.type = AttackType::control_delete_voters;
            battery.push_back(base);
            base.type = AttackType::control_add_voters;
            for (const auto& o : orders) base.pool.push_back({o, 1, 1, 1});
            battery.push_back(base);
            base.pool.clear();
          }
          base.budget = 0;
          base.type = AttackType::control_partition_voters;
          for (TieHandling th : {TieHandling::te, TieHandling::tp}) {
            base.tie_handling = th;
            battery.push_back(base);
          }
          base.type = AttackType::manipulation;
          for (int manips = 0; manips <= 2; ++manips) {
            base.manip_weights.assign(manips, 1);
            battery.push_back(base);
          }
          base.manip_weights.clear();
        }
  }

  frameworks::swcf_catalog(j);  // warm the shared cache before going parallel
  std::atomic<long long> disagreements{0};
  parallel_chunks(battery.size(), [&](size_t i) {
    const auto fast = fpt::solve_fpt(battery[i]);
    const auto slow = oracle::solve_brute(battery[i]);
    if (fast.decision != slow.decision || fast.decision == Decision::cap_refused ||
        slow.decision == Decision::budget_exceeded)
      ++disagreements;
  });
  const double minutes = std::chrono::duration<double>(Clock::now() - started).count() / 60.0;
  std::ostringstream d;
  d << battery.size() << " instances, " << disagreements.load() << " disagreements, " << minutes
    << " min";
  return {disagreements == 0 && minutes <= 30.0, d.str()};
}

// ---------------------------------------------------------------- 6
Outcome weighted_encodings() {
  std::mt19937_64 rng(777);
  const auto orders = lex_orders(3);
  long long disagreements = 0;
  const int trials = 500;
  for (int trial = 0; trial < trials; ++trial) {
    AttackInstance inst;
    inst.rule = trial % 2 ? Rule::schulze() : Rule::rp_default(3);
    inst.goal = {rng() % 2 ? GoalMode::constructive : GoalMode::destructive,
                 rng() % 2 ? WinnerModel::nonunique : WinnerModel::unique};
    inst.p = static_cast<int>(rng() % 3);
    inst.election.candidates = {"a", "b", "c"};
    const long long weights[2] = {1, 1 + static_cast<long long>(rng() % 4)};
    const long long prices[2] = {static_cast<long long>(rng() % 3),
                                 static_cast<long long>(rng() % 3)};
    const int voters = 1 + static_cast<int>(rng() % 4);
    for (int v = 0; v < voters; ++v)
      inst.election.ballots.push_back(
          {orders[rng() % 6], weights[rng() % 2], prices[rng() % 2], 1});
    if (trial % 3 == 2) {
      inst.type = AttackType::manipulation;
      for (auto& b : inst.election.ballots) b.price = 1;
      const int manips = 1 + static_cast<int>(rng() % 3);
      for (int m = 0; m < manips; ++m) inst.manip_weights.push_back(weights[rng() % 2]);
    } else {
      inst.type = AttackType::bribery;
      inst.budget = static_cast<long long>(rng() % 6);
    }
    if (fpt::solve_fpt(inst).decision != oracle::solve_brute(inst).decision) ++disagreements;
  }
  std::ostringstream d;
  d << trials << " instances, " << disagreements << " disagreements";
  return {disagreements == 0, d.str()};
}

// ---------------------------------------------------------------- 7
Outcome rp_monotonicity() {
  std::mt19937_64 rng(55555);
  long long lifts = 0, preserved = 0;
  while (lifts < 10000) {
    const int j = 2 + static_cast<int>(rng() % 4);
    Election e = random_election(rng, j, 1 + static_cast<int>(rng() % 7));
    const TieBreak t = TieBreak::lexicographic(j);
    const int winner = ranked_pairs(build_wmg(e), t).winner();
    bool lifted = false;
    for (auto& b : e.ballots) {
      const auto it = std::find(b.order.begin(), b.order.end(), winner);
      if (it == b.order.begin()) continue;
      std::iter_swap(it, it - 1);
      lifted = true;
      break;
    }
    if (!lifted) continue;
    ++lifts;
    if (ranked_pairs(build_wmg(e), t).winner() == winner) ++preserved;
  }
  std::ostringstream d;
  d << preserved << "/" << lifts << " preserved";
  return {preserved == lifts, d.str()};
}

// ---------------------------------------------------------------- 8
Outcome uniform_vote_completeness() {
  std::atomic<long long> disagreements{0};
  std::vector<AttackInstance> battery;

  const std::vector<std::vector<long long>> wlists = {{}, {1}, {2}, {1, 1}, {1, 2}, {2, 2}};
  auto add = [&](const Election& e, const Rule& rule) {
    for (const auto& wl : wlists) {
      AttackInstance inst;
      inst.type = AttackType::manipulation;
      inst.election = e;
      inst.rule = rule;
      inst.goal = {GoalMode::constructive, WinnerModel::nonunique};
      inst.p = 0;
      inst.manip_weights = wl;
      battery.push_back(std::move(inst));
    }
  };

  // every nonmanipulator profile of at most two ballots: weighted ones at
  // three candidates, unit ones at four
  for (int j : {3, 4}) {
    const auto orders = lex_orders(j);
    const std::vector<long long> ballot_weights =
        j == 3 ? std::vector<long long>{1, 2} : std::vector<long long>{1};
    std::vector<std::pair<int, long long>> slots;
    for (int o = 0; o < static_cast<int>(orders.size()); ++o)
      for (long long bw : ballot_weights) slots.emplace_back(o, bw);
    const int n = static_cast<int>(slots.size());

    std::vector<Election> profiles;
    Election empty;
    for (int c = 0; c < j; ++c) empty.candidates.push_back(std::to_string(c + 1));
    profiles.push_back(empty);
    for (int first = 0; first < n; ++first) {
      Election e1 = empty;
      e1.ballots.push_back({orders[slots[first].first], slots[first].second, 1, 1});
      profiles.push_back(e1);
      for (int second = first; second < n; ++second) {
        Election e2 = e1;
        if (second == first) e2.ballots.back().count = 2;
        else e2.ballots.push_back({orders[slots[second].first], slots[second].second, 1, 1});
        profiles.push_back(e2);
      }
    }
    for (const auto& e : profiles) {
      add(e, Rule::rp_default(j));
      if (j == 3) add(e, Rule::schulze());
    }
  }

  parallel_chunks(battery.size(), [&](size_t i) {
    const auto uniform = oracle::solve_uniform_vote(battery[i]);
    const auto brute = oracle::solve_brute(battery[i]);
    if (uniform.decision != brute.decision || !uniform.complete) ++disagreements;
  });
  std::ostringstream d;
  d << battery.size() << " instances, " << disagreements.load() << " disagreements";
  return {disagreements == 0, d.str()};
}

// ---------------------------------------------------------------- 9
Outcome reduction_correctness() {
  using namespace reductions;

  // every hitting-set instance with a universe of at most four elements and
  // at most three distinct nonempty sets, bounds 0..2
  std::vector<HittingSetInstance> hs_battery;
  for (int u = 0; u <= 4; ++u) {
    std::vector<std::vector<int>> subsets;
    for (int mask = 1; mask < (1 << u); ++mask) {
      std::vector<int> s;
      for (int x = 0; x < u; ++x)
        if ((mask >> x) & 1) s.push_back(x);
      subsets.push_back(std::move(s));
    }
    std::vector<int> pick;
    auto families = [&](auto&& self, int least, int left) -> void {
      for (long long k = 0; k <= 2; ++k) {
        HittingSetInstance h;
        h.universe = u;
        for (int i : pick) h.sets.push_back(subsets[i]);
        h.k = k;
        hs_battery.push_back(std::move(h));
      }
      if (left == 0) return;
      for (int i = least; i < static_cast<int>(subsets.size()); ++i) {
        pick.push_back(i);
        self(self, i + 1, left - 1);
        pick.pop_back();
      }
    };
    families(families, 0, 3);
  }
  const auto hs_report = verify_hs_battery(hs_battery);

  bool edge_bound_ok = true;
  for (const auto& h : hs_battery) {
    const Wmg w = build_wmg(hs_to_ccac(h).election);
    for (int a = 0; a < w.j; ++a)
      for (int b = 0; b < w.j; ++b)
        if (std::abs(w.at(a, b)) > 2) edge_bound_ok = false;
  }

  // every positive list of length at most three with entries 1..3
  std::vector<PartitionInstance> part_battery = {{{}}};
  for (long long a = 1; a <= 3; ++a) {
    part_battery.push_back({{a}});
    for (long long b = 1; b <= 3; ++b) {
      part_battery.push_back({{a, b}});
      for (long long c = 1; c <= 3; ++c) part_battery.push_back({{a, b, c}});
    }
  }

  bool margins_ok = true;
  for (const auto& p : part_battery) {
    const AttackInstance inst = partition_to_wcm(p, 5);
    const long long s = std::accumulate(p.values.begin(), p.values.end(), 0LL);
    const Wmg w = build_wmg(inst.election);
    auto expect = [&](int a, int b, long long v) {
      if (w.at(a, b) != v) margins_ok = false;
    };
    expect(1, 0, 6 * s - 4);
    expect(2, 0, 6 * s - 4);
    expect(3, 0, 6 * s + 2);
    expect(4, 0, 6 * s + 2);
    expect(3, 2, 18 * s + 4);
    expect(4, 1, 18 * s + 4);
    expect(3, 1, 6 * s - 4);
    expect(4, 2, 6 * s - 4);
    expect(1, 2, 0);
    expect(3, 4, 0);
  }

  std::atomic<int> part_disagreements{0};
  parallel_chunks(part_battery.size(), [&](size_t i) {
    const bool source = partition_decide(part_battery[i]);
    const auto image = oracle::solve_brute(partition_to_wcm(part_battery[i], 5));
    if (image.decision != (source ? Decision::yes : Decision::no)) ++part_disagreements;
  });

  std::ostringstream d;
  d << "hitting set " << hs_report.disagreements << "/" << hs_battery.size()
    << " disagree, edge bound " << (edge_bound_ok ? "ok" : "violated") << "; partition "
    << part_disagreements.load() << "/" << part_battery.size() << " disagree, margins "
    << (margins_ok ? "exact" : "off");
  const bool pass =
      hs_report.disagreements == 0 && edge_bound_ok && margins_ok && part_disagreements == 0;
  if (!pass && hs_report.disagreements == 0 && edge_bound_ok && margins_ok)
    d << " [every disagreement is a partitionable list whose image stays a No: the two"
         " locked 18S+4 cross relations plus the needed a1>b1 and a2>b2 close a cycle"
         " ranked pairs never locks, so p cannot transitively cover both b1 and b2]";
  return {pass, d.str()};
}

// ---------------------------------------------------------------- 10
Outcome fpt_shape() {
  // model size must not grow with the electorate
  std::set<long long> var_counts;
  for (long long n : {5LL, 50LL, 500LL}) {
    Election e;
    e.candidates = {"a", "b", "c"};
    Ballot b;
    b.order = {1, 2, 0};
    b.count = n;
    e.ballots.push_back(b);
    AttackInstance inst;
    inst.type = AttackType::bribery;
    inst.election = e;
    inst.p = 0;
    inst.rule = Rule::schulze();
    inst.goal = {GoalMode::constructive, WinnerModel::nonunique};
    inst.budget = std::max<long long>(1, n / 4);
    var_counts.insert(fpt::solve_fpt(inst).stats.model_vars);
  }
  const bool constant_vars = var_counts.size() == 1 && *var_counts.begin() > 0;

  bench::BenchConfig cfg;
  cfg.voters = {32, 64, 128, 256};
  cfg.trials = 1;
  cfg.time_cap_s = 1.5;
  const auto rows = bench::run_bench(cfg);

  std::vector<std::pair<double, double>> fpt_points, brute_points;
  bool brute_timed_out = false;
  for (const auto& r : rows) {
    if (r.solver == "fpt") fpt_points.push_back({static_cast<double>(r.voters), r.wall_s});
    else if (r.decision == "budget-exceeded") brute_timed_out = true;
    else brute_points.push_back({static_cast<double>(r.voters), r.wall_s});
  }
  const double fpt_slope = bench::loglog_slope(fpt_points);
  const double brute_slope = brute_points.size() >= 2 ? bench::loglog_slope(brute_points) : 99.0;
  const bool pass = constant_vars && fpt_slope <= 1.5 && (brute_timed_out || brute_slope > 3.0);
  std::ostringstream d;
  d << "model vars " << (constant_vars ? "constant" : "growing") << ", fpt slope " << fpt_slope
    << ", brute " << (brute_timed_out ? "timed out" : "slope " + std::to_string(brute_slope));
  return {pass, d.str()};
}

}  // namespace

int main() {
  report(1, "worked-example fixture", worked_example_fixture());
  report(2, "schulze winner nonemptiness", schulze_nonemptiness());
  report(3, "mcgarvey round-trip", mcgarvey_roundtrip());
  report(4, "rank invariance", rank_invariance());
  report(5, "fpt/brute oracle equivalence", oracle_equivalence());
  report(6, "weighted encodings", weighted_encodings());
  report(7, "ranked-pairs monotonicity", rp_monotonicity());
  report(8, "uniform-vote completeness", uniform_vote_completeness());
  report(9, "reduction correctness", reduction_correctness());
  report(10, "fpt shape and bench slopes", fpt_shape());

  if (g_failures == 0) {
    std::printf("acceptance: all criteria pass\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failing\n", g_failures);
  return 1;
}
