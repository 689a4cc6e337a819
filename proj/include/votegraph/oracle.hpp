#pragma once

#include "votegraph/attacks.hpp"

namespace votegraph::oracle {

struct SearchBudget {
  long long max_states = 50'000'000;  // cap on evaluated actions
  double time_cap_s = 0;              // 0: no wall-clock cap
};

/// Exhaustive search over the full action space of the attack, smallest
/// action first; a No means the space was exhausted. Enumeration order is
/// lexicographic over the action encodings described in the README, so
/// results are deterministic and the returned witness is minimal.
SolveResult solve_brute(const AttackInstance& inst, const SearchBudget& budget = {});

/// Tries only manipulations in which every manipulator casts the same
/// ballot. Yes answers are always sound; the result's `complete` flag is set
/// only in the regimes where same-vote manipulations are known sufficient:
/// Schulze constructive nonunique (any weights), and ranked pairs
/// constructive with at most four candidates.
SolveResult solve_uniform_vote(const AttackInstance& inst, const SearchBudget& budget = {});

}  // namespace votegraph::oracle
