#pragma once

#include <optional>
#include <string>
#include <vector>

#include "votegraph/election.hpp"

namespace votegraph {

enum class VotingRule { schulze, ranked_pairs };

struct Rule {
  VotingRule kind = VotingRule::schulze;
  TieBreak tiebreak;  // ranked pairs only; ignored for Schulze

  static Rule schulze() { return {VotingRule::schulze, {}}; }
  static Rule rp(TieBreak t) { return {VotingRule::ranked_pairs, std::move(t)}; }
  static Rule rp_default(int j) { return rp(TieBreak::lexicographic(j)); }

  bool operator==(const Rule&) const = default;
};

enum class GoalMode { constructive, destructive };
enum class WinnerModel { nonunique, unique };

struct Goal {
  GoalMode mode = GoalMode::constructive;
  WinnerModel model = WinnerModel::nonunique;

  bool operator==(const Goal&) const = default;
};

enum class TieHandling { te, tp };  // ties-eliminate / ties-promote

/// The attack catalog: bribery (weights and prices ride on the ballots, so
/// the priced and weighted variants are the same instance shape),
/// coalitional manipulation, and the benchmark control kinds. Each control
/// kind doubles into constructive/destructive via the goal, and the
/// partition kinds double again via tie_handling.
enum class AttackType {
  bribery,
  manipulation,
  control_add_voters,
  control_delete_voters,
  control_partition_voters,
  control_add_candidates,
  control_unlimited_add_candidates,
  control_delete_candidates,
  control_partition_candidates,
  control_runoff_partition_candidates,
};

bool is_candidate_control(AttackType t);

struct AttackInstance {
  Rule rule;
  Goal goal;
  int p = 0;
  AttackType type = AttackType::bribery;

  /// The standing election. For the adding-candidates kinds the roster is
  /// C union D and ballots rank all of it; `spoilers` lists D.
  Election election;
  long long budget = 0;                    // k: bribe cost / add / delete cap
  std::vector<Ballot> pool;                // control_add_voters: the set W
  std::vector<long long> manip_weights;    // manipulation: one weight per manipulator
  TieHandling tie_handling = TieHandling::tp;
  std::vector<int> spoilers;               // adding-candidates: D, sorted

  /// Original candidate set C (roster minus spoilers), sorted.
  std::vector<int> original_candidates() const;
  void validate() const;
};

/// Attack-specific action description. Replaying it through apply_witness is
/// the only sanctioned way to trust it.
struct BriberyRewrite {
  std::vector<int> from_order;
  long long weight = 1;
  long long price = 1;
  std::vector<int> to_order;
  long long count = 1;

  bool operator==(const BriberyRewrite&) const = default;
};

struct Witness {
  AttackType type = AttackType::bribery;
  std::vector<BriberyRewrite> rewrites;        // bribery
  std::vector<std::vector<int>> manip_orders;  // manipulation, aligned with manip_weights
  /// control_add_voters: per pool entry, how many of it are added;
  /// control_delete_voters: per ballot entry, how many are deleted;
  /// control_partition_voters: per ballot entry, how many go into V1.
  std::vector<long long> chosen_counts;
  /// adding candidates: the added set; deleting: the deleted set;
  /// candidate partitions: C1.
  std::vector<int> chosen_candidates;

  bool operator==(const Witness&) const = default;
};

enum class Decision { yes, no, budget_exceeded, cap_refused };

std::string to_string(Decision d);

struct SolveStats {
  long long states = 0;      // brute: actions evaluated
  long long frameworks = 0;  // fpt: frameworks examined
  long long models = 0;      // fpt: feasibility models solved
  long long model_vars = 0;  // fpt: variable count of the emitted models
};

struct SolveResult {
  Decision decision = Decision::no;
  std::optional<Witness> witness;
  SolveStats stats;
  /// Uniform-vote solving: a No is only conclusive in the regimes where
  /// same-vote manipulations are known sufficient.
  bool complete = true;
};

bool goal_satisfied(const std::vector<int>& winners, Goal g, int p);

/// Winners of one election under the rule; Schulze yields the full co-winner
/// set, ranked pairs a singleton.
std::vector<int> evaluate_winners(const Rule& rule, const Election& e);

/// Winners of the subelection on `keep` (sorted candidate ids), reported in
/// the original id space. The ranked-pairs tie-break is restricted to the
/// surviving candidates with relative priority preserved.
std::vector<int> evaluate_winners_subset(const Rule& rule, const Election& e,
                                         const std::vector<int>& keep);

/// Two-stage partition-of-voters election. v1_counts gives, per ballot entry
/// of e, how many of its copies vote in the first-round subelection V1; the
/// rest form V2. A side with no voters promotes nobody. Ties-eliminate
/// promotes a first-round winner set only if it is a singleton; ties-promote
/// promotes all. The final election runs over the promoted union with every
/// voter, votes masked down; an empty union yields an empty winner set.
std::vector<int> eval_voter_partition(const Rule& rule, const Election& e,
                                      const std::vector<long long>& v1_counts,
                                      TieHandling th);

enum class PartitionKind { partition, runoff };

/// Two-stage partition/runoff-partition of candidates over roster subset c1.
/// Runoff sends both sides through first-round subelections; plain partition
/// gives C2 a bye into the final.
std::vector<int> eval_candidate_partition(const Rule& rule, const Election& e,
                                          const std::vector<int>& c1, PartitionKind kind,
                                          TieHandling th);

/// Replays the witness against the instance and evaluates the rule
/// end-to-end, returning the resulting winner set. Throws VoteError on a
/// structural mismatch or a budget violation.
std::vector<int> apply_witness(const AttackInstance& inst, const Witness& w);

}  // namespace votegraph
