#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace votegraph {

struct VoteError : std::runtime_error {
  explicit VoteError(const std::string& what) : std::runtime_error(what) {}
};

/// A cast ballot: a strict linear order over the full candidate roster,
/// most-preferred first. `count` is a succinct multiplicity; `weight` and
/// `price` default to 1 so the unweighted/unpriced problems are the special
/// case of the general ones.
struct Ballot {
  std::vector<int> order;
  long long weight = 1;
  long long price = 1;
  long long count = 1;

  bool operator==(const Ballot&) const = default;
};

struct Election {
  std::vector<std::string> candidates;  // display names; ids are the indices
  std::vector<Ballot> ballots;

  int num_candidates() const { return static_cast<int>(candidates.size()); }
  long long total_votes() const;   // sum of counts
  long long total_weight() const;  // sum of weight * count
  void validate() const;           // throws VoteError on any broken invariant

  bool operator==(const Election&) const = default;
};

/// Weighted majority graph. d(a,b) is the total ballot weight preferring a
/// over b minus the weight preferring b over a; antisymmetric with zero
/// diagonal. `symbolic` marks rank matrices derived from certification
/// frameworks, which carry the same comparison structure but need not be
/// antisymmetric.
struct Wmg {
  int j = 0;
  std::vector<long long> d;
  bool symbolic = false;

  Wmg() = default;
  explicit Wmg(int n) : j(n), d(static_cast<size_t>(n) * n, 0) {}

  long long& at(int a, int b) { return d[static_cast<size_t>(a) * j + b]; }
  long long at(int a, int b) const { return d[static_cast<size_t>(a) * j + b]; }

  bool antisymmetric() const;
  /// 0 if every off-diagonal entry is even, 1 if every one is odd,
  /// nullopt on mixed parity. A 0- or 1-candidate graph counts as even.
  std::optional<int> parity() const;

  bool operator==(const Wmg&) const = default;
};

/// Tie handling for ranked pairs: a strict priority order over candidates
/// (resolves pairs whose edges are both zero) and one over unordered
/// candidate pairs (resolves which equally heavy edge is considered first).
/// Pairs are stored normalized as (lo, hi).
struct TieBreak {
  std::vector<int> candidate_order;  // highest priority first
  std::vector<std::pair<int, int>> pair_order;

  /// The ordering used in the worked examples: candidate j-1 outranks j-2
  /// outranks ... 0, and pairs sort by larger member, then smaller member,
  /// both descending.
  static TieBreak lexicographic(int j);

  /// Tie-break for a subelection: entries outside `keep` drop out, relative
  /// priority is preserved, ids are renumbered by rank within sorted keep.
  TieBreak restricted(const std::vector<int>& keep) const;

  /// Relabels every candidate id a as perm[a].
  TieBreak conjugated(const std::vector<int>& perm) const;

  void validate(int j) const;

  bool operator==(const TieBreak&) const = default;
};

struct RpStep {
  std::pair<int, int> pair;      // unordered pair considered, as (lo, hi)
  std::pair<int, int> edge;      // the directed edge actually weighed
  bool fixed = true;             // false: discarded, already ordered transitively
  std::pair<int, int> relation;  // (winner, loser), fixed or implied
};

struct RpTrace {
  std::vector<RpStep> steps;
  std::vector<int> final_order;  // best first

  int winner() const { return final_order.at(0); }
};

Wmg build_wmg(const Election& e);

/// Max-min path strengths between all ordered pairs. Works on any integer
/// matrix (symbolic rank matrices included); entries may be negative.
std::vector<std::vector<long long>> strongest_paths(const Wmg& w);

/// Candidates c with S[c][d] >= S[d][c] for every rival d; never empty.
/// Sorted ascending.
std::vector<int> schulze_winners(const Wmg& w);

RpTrace ranked_pairs(const Wmg& w, const TieBreak& t);

/// Reusable ranked-pairs winner evaluation with the tie-break compiled once.
/// Thread-safe; winner() allocates nothing for j <= 8.
class RpEvaluator {
 public:
  RpEvaluator(int j, const TieBreak& t);
  int winner(const Wmg& w) const;
  RpTrace trace(const Wmg& w) const;

  const std::vector<int>& candidate_rank() const { return cand_rank_; }
  const std::vector<int>& pair_rank() const { return pair_rank_; }

 private:
  int run(const Wmg& w, RpTrace* trace_out) const;

  int j_;
  std::vector<int> cand_rank_;                // candidate id -> priority rank
  std::vector<int> pair_rank_;                // pair index -> priority rank
  std::vector<std::pair<int, int>> pairs_;    // canonical pair list
};

/// Canonical index of the unordered pair {a,b} within the lexicographic list
/// (0,1),(0,2),...,(0,j-1),(1,2),...
int pair_index(int j, int a, int b);
std::vector<std::pair<int, int>> all_pairs(int j);

struct McgarveyOptions {
  bool weighted = false;
  long long ballot_budget = 1'000'000;  // unweighted mode only
};

/// Builds an election whose WMG equals `target` exactly, out of canceling
/// vote pairs. Odd-parity targets are seeded with the identity-order ballot.
/// Candidates are named "1".."j"; callers may rename.
Election mcgarvey_synthesize(const Wmg& target, const McgarveyOptions& opts = {});

/// Masks every ballot down to `keep` (sorted ascending, nonempty), preserving
/// relative order, weights, prices and counts. Candidates are renumbered to
/// 0..|keep|-1 in keep order.
Election restrict_election(const Election& e, const std::vector<int>& keep);

}  // namespace votegraph
