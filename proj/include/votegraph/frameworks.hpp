#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "votegraph/election.hpp"

namespace votegraph::frameworks {

struct CapRefused : VoteError {
  using VoteError::VoteError;
};

using Edge = std::pair<int, int>;

/// Schulze winner-set certification framework: a weak order over the
/// 2*C(j,2) directed edges, from heaviest level down, consistent with edge
/// reversal (edge (a,b) sits at least as high as (c,d) exactly when (d,c)
/// sits at least as high as (b,a)). The induced winner set is cached.
struct Swcf {
  int j = 0;
  std::vector<std::vector<Edge>> levels;  // levels[0] is the top level
  std::vector<int> winners;

  bool operator==(const Swcf& o) const { return j == o.j && levels == o.levels; }
  std::string dump() const;
};

/// Weak-order partition plus reversal consistency.
bool swcf_valid(const Swcf& f);

/// Rank matrix of a framework: each edge scored by its level, higher level
/// meaning a larger integer. Not antisymmetric in general, hence symbolic.
Wmg swcf_rank_matrix(const Swcf& f);

/// Winners induced by the framework alone: the Schulze evaluation run on the
/// rank matrix. Sound because winner sets are invariant under replacing
/// weights by their ranks.
std::vector<int> swcf_winners(const Swcf& f);

/// The framework realized by an actual WMG: its edges weak-ordered by weight.
Swcf swcf_of_wmg(const Wmg& w);

inline constexpr int kDefaultEnumerationCap = 4;

/// Lazy, deterministic enumeration of every valid j-SWCF, each exactly once.
class SwcfStream {
 public:
  explicit SwcfStream(int j, int cap = kDefaultEnumerationCap);
  std::optional<Swcf> next();

 private:
  struct Frame {
    uint32_t remaining;      // undecided pair indices
    uint32_t subset;         // current pair subset chosen for the next level
    uint32_t orient;         // orientation bits within the subset
    bool middle_pending;     // "all remaining edges become the middle level"
    std::vector<Edge> level; // the level this frame contributed
  };

  int j_ = 0;
  int m_ = 0;
  std::vector<Edge> pairs_;
  std::vector<Frame> stack_;
  bool done_ = false;
};

std::vector<Swcf> enumerate_swcf(int j, int cap = kDefaultEnumerationCap);

/// Memoized enumeration for the solver loops; winner sets precomputed.
const std::vector<Swcf>& swcf_catalog(int j, int cap = kDefaultEnumerationCap);

enum class SignClaim : uint8_t {
  first_positive,   // d(lo,hi) > 0
  second_positive,  // d(hi,lo) > 0
  both_zero,
};

/// Ranked-pairs winner-set certification framework: one sign claim per
/// unordered pair, a claimed encounter order over the pairs, and the derived
/// step story (fixed or skipped, with the resulting relation). A step is
/// skipped exactly when the fixed prefix already orders the pair
/// transitively; the derivation enforces that, so every instance is
/// internally consistent by construction.
struct Rpwcf {
  int j = 0;
  TieBreak tiebreak;
  std::vector<SignClaim> signs;      // by canonical pair index
  std::vector<int> encounter_order;  // pair indices, first considered first
  std::vector<RpStep> steps;
  std::vector<int> final_order;

  int winner() const { return final_order.at(0); }
  bool same_claims(const Rpwcf& o) const {
    return j == o.j && signs == o.signs && encounter_order == o.encounter_order;
  }
  std::string dump() const;
};

Rpwcf make_rpwcf(int j, const TieBreak& t, std::vector<SignClaim> signs,
                 std::vector<int> encounter_order);

/// Validates an explicit fixed/skipped claim pattern against the derivation.
bool rpwcf_story_consistent(int j, const TieBreak& t, const std::vector<SignClaim>& signs,
                            const std::vector<int>& encounter_order,
                            const std::vector<char>& skipped);

Rpwcf rpwcf_of_wmg(const Wmg& w, const TieBreak& t);

/// Lazy, index-addressable enumeration over all (encounter order, sign
/// claim) combinations: count = C(j,2)! * 3^C(j,2).
class RpwcfStream {
 public:
  RpwcfStream(int j, TieBreak t, int cap = kDefaultEnumerationCap);
  unsigned long long count() const { return count_; }
  Rpwcf item(unsigned long long index) const;
  /// Like item(), but reuses `out`'s buffers; the tight loops over the
  /// half-million four-candidate frameworks live on this.
  void item_into(unsigned long long index, Rpwcf& out) const;
  std::optional<Rpwcf> next();
  /// Index of the element carrying these exact claims.
  unsigned long long index_of(const Rpwcf& f) const;

 private:
  int j_ = 0;
  int m_ = 0;
  TieBreak tiebreak_;
  std::vector<Edge> pairs_;
  std::vector<int> cand_rank_;
  unsigned long long count_ = 0;
  unsigned long long cursor_ = 0;
};

/// A path-and-weak-link certificate in the style of the winner definition
/// itself: per (winner, rival) a strong path plus a designated weak link on
/// every simple return path; per nonwinner an eliminating rival whose return
/// paths all carry strictly weaker links.
struct WeakLinkClaim {
  std::vector<int> path;  // simple path, endpoints included
  Edge link;

  bool operator==(const WeakLinkClaim&) const = default;
};

struct PathClaim {
  std::vector<int> strong_path;
  std::vector<WeakLinkClaim> return_links;

  bool operator==(const PathClaim&) const = default;
};

struct SchulzeCertificate {
  int j = 0;
  std::vector<int> winners;
  std::vector<int> nonwinners;
  std::map<std::pair<int, int>, PathClaim> winner_claims;     // (winner, rival)
  std::map<int, std::pair<int, PathClaim>> nonwinner_claims;  // loser -> (eliminator, claim)
};

/// True iff every weak-link condition holds in w (non-strict for winners,
/// strict for nonwinners). Structural defects (non-simple paths, a link off
/// its path, a return path without a designated link) throw.
bool check_certificate(const SchulzeCertificate& c, const Wmg& w);

}  // namespace votegraph::frameworks
