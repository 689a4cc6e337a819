#include "votegraph/election.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>

namespace votegraph {

long long Election::total_votes() const {
  long long n = 0;
  for (const auto& b : ballots) n += b.count;
  return n;
}

long long Election::total_weight() const {
  long long n = 0;
  for (const auto& b : ballots) n += b.weight * b.count;
  return n;
}

void Election::validate() const {
  const int j = num_candidates();
  if (j < 1) throw VoteError("election needs at least one candidate");
  std::vector<char> seen(j);
  for (const auto& b : ballots) {
    if (static_cast<int>(b.order.size()) != j)
      throw VoteError("ballot does not rank the full roster");
    std::fill(seen.begin(), seen.end(), 0);
    for (int c : b.order) {
      if (c < 0 || c >= j) throw VoteError("ballot ranks unknown candidate");
      if (seen[c]) throw VoteError("ballot ranks a candidate twice");
      seen[c] = 1;
    }
    if (b.weight < 1) throw VoteError("ballot weight must be positive");
    if (b.price < 0) throw VoteError("ballot price must be nonnegative");
    if (b.count < 1) throw VoteError("ballot count must be positive");
  }
}

bool Wmg::antisymmetric() const {
  for (int a = 0; a < j; ++a) {
    if (at(a, a) != 0) return false;
    for (int b = a + 1; b < j; ++b)
      if (at(a, b) != -at(b, a)) return false;
  }
  return true;
}

std::optional<int> Wmg::parity() const {
  int p = -1;
  for (int a = 0; a < j; ++a)
    for (int b = 0; b < j; ++b) {
      if (a == b) continue;
      const int q = static_cast<int>(((at(a, b) % 2) + 2) % 2);
      if (p == -1) p = q;
      if (p != q) return std::nullopt;
    }
  return p == -1 ? 0 : p;
}

Wmg build_wmg(const Election& e) {
  e.validate();
  const int j = e.num_candidates();
  Wmg w(j);
  std::vector<__int128> acc(static_cast<size_t>(j) * j, 0);
  std::vector<int> pos(j);
  for (const auto& b : e.ballots) {
    for (int r = 0; r < j; ++r) pos[b.order[r]] = r;
    const __int128 m = static_cast<__int128>(b.weight) * b.count;
    for (int a = 0; a < j; ++a)
      for (int c = a + 1; c < j; ++c) {
        const __int128 s = pos[a] < pos[c] ? m : -m;
        acc[static_cast<size_t>(a) * j + c] += s;
        acc[static_cast<size_t>(c) * j + a] -= s;
      }
  }
  constexpr __int128 lo = std::numeric_limits<long long>::min();
  constexpr __int128 hi = std::numeric_limits<long long>::max();
  for (size_t i = 0; i < acc.size(); ++i) {
    if (acc[i] < lo || acc[i] > hi) throw VoteError("WMG entry overflows 64 bits");
    w.d[i] = static_cast<long long>(acc[i]);
  }
  return w;
}

std::vector<std::vector<long long>> strongest_paths(const Wmg& w) {
  const int j = w.j;
  std::vector<std::vector<long long>> s(j, std::vector<long long>(j, 0));
  for (int a = 0; a < j; ++a)
    for (int b = 0; b < j; ++b)
      if (a != b) s[a][b] = w.at(a, b);
  // Max-min closure over walks; a cycle cannot raise a path's minimum edge,
  // so this equals the closure over simple paths.
  for (int k = 0; k < j; ++k)
    for (int a = 0; a < j; ++a) {
      if (a == k) continue;
      for (int b = 0; b < j; ++b) {
        if (b == k || b == a) continue;
        s[a][b] = std::max(s[a][b], std::min(s[a][k], s[k][b]));
      }
    }
  return s;
}

std::vector<int> schulze_winners(const Wmg& w) {
  const auto s = strongest_paths(w);
  std::vector<int> winners;
  for (int c = 0; c < w.j; ++c) {
    bool wins = true;
    for (int d = 0; d < w.j && wins; ++d)
      if (d != c && s[c][d] < s[d][c]) wins = false;
    if (wins) winners.push_back(c);
  }
  return winners;
}

int pair_index(int j, int a, int b) {
  if (a > b) std::swap(a, b);
  // pairs (a, *) start after all pairs with smaller first member
  return a * j - a * (a + 1) / 2 + (b - a - 1);
}

std::vector<std::pair<int, int>> all_pairs(int j) {
  std::vector<std::pair<int, int>> p;
  p.reserve(static_cast<size_t>(j) * (j - 1) / 2);
  for (int a = 0; a < j; ++a)
    for (int b = a + 1; b < j; ++b) p.emplace_back(a, b);
  return p;
}

TieBreak TieBreak::lexicographic(int j) {
  TieBreak t;
  for (int c = j - 1; c >= 0; --c) t.candidate_order.push_back(c);
  for (int hi = j - 1; hi >= 1; --hi)
    for (int lo = hi - 1; lo >= 0; --lo) t.pair_order.emplace_back(lo, hi);
  return t;
}

void TieBreak::validate(int j) const {
  if (static_cast<int>(candidate_order.size()) != j)
    throw VoteError("tie-break candidate order is not total");
  std::vector<char> seen(j, 0);
  for (int c : candidate_order) {
    if (c < 0 || c >= j || seen[c]) throw VoteError("tie-break candidate order invalid");
    seen[c] = 1;
  }
  const size_t m = static_cast<size_t>(j) * (j - 1) / 2;
  if (pair_order.size() != m) throw VoteError("tie-break pair order is not total");
  std::vector<char> pseen(m, 0);
  for (auto [a, b] : pair_order) {
    if (a < 0 || b < 0 || a >= j || b >= j || a >= b)
      throw VoteError("tie-break pair order has a malformed pair");
    const int idx = pair_index(j, a, b);
    if (pseen[idx]) throw VoteError("tie-break pair order repeats a pair");
    pseen[idx] = 1;
  }
}

TieBreak TieBreak::restricted(const std::vector<int>& keep) const {
  std::vector<int> local(candidate_order.size(), -1);
  for (size_t i = 0; i < keep.size(); ++i) local[keep[i]] = static_cast<int>(i);
  TieBreak t;
  for (int c : candidate_order)
    if (local[c] >= 0) t.candidate_order.push_back(local[c]);
  for (auto [a, b] : pair_order)
    if (local[a] >= 0 && local[b] >= 0) {
      int x = local[a], y = local[b];
      if (x > y) std::swap(x, y);
      t.pair_order.emplace_back(x, y);
    }
  return t;
}

TieBreak TieBreak::conjugated(const std::vector<int>& perm) const {
  TieBreak t;
  for (int c : candidate_order) t.candidate_order.push_back(perm[c]);
  for (auto [a, b] : pair_order) {
    int x = perm[a], y = perm[b];
    if (x > y) std::swap(x, y);
    t.pair_order.emplace_back(x, y);
  }
  return t;
}

RpEvaluator::RpEvaluator(int j, const TieBreak& t) : j_(j) {
  t.validate(j);
  cand_rank_.assign(j, 0);
  for (size_t r = 0; r < t.candidate_order.size(); ++r)
    cand_rank_[t.candidate_order[r]] = static_cast<int>(r);
  pairs_ = all_pairs(j);
  pair_rank_.assign(pairs_.size(), 0);
  for (size_t r = 0; r < t.pair_order.size(); ++r)
    pair_rank_[pair_index(j, t.pair_order[r].first, t.pair_order[r].second)] =
        static_cast<int>(r);
}

namespace {
constexpr int kMaxRpCandidates = 64;
}

int RpEvaluator::run(const Wmg& w, RpTrace* trace_out) const {
  const int j = j_;
  if (w.j != j) throw VoteError("ranked pairs: WMG size mismatch");
  if (j > kMaxRpCandidates) throw VoteError("ranked pairs supports at most 64 candidates");
  const int m = static_cast<int>(pairs_.size());

  // The edge weights never change while pairs are processed, so the full
  // encounter order is a plain sort: heaviest pair edge first, tie-break
  // rank second.
  std::array<int, 2016> order_buf;  // 64 choose 2
  for (int i = 0; i < m; ++i) order_buf[i] = i;
  auto key = [&](int idx) {
    auto [a, b] = pairs_[idx];
    return std::max(w.at(a, b), w.at(b, a));
  };
  std::sort(order_buf.begin(), order_buf.begin() + m, [&](int x, int y) {
    const long long kx = key(x), ky = key(y);
    if (kx != ky) return kx > ky;
    return pair_rank_[x] < pair_rank_[y];
  });

  std::array<uint64_t, kMaxRpCandidates> reach{};  // reach[a] bit b: a beats b
  for (int step = 0; step < m; ++step) {
    auto [a, b] = pairs_[order_buf[step]];
    // Considered edge: the positive direction, or the candidate tie-break
    // winner's edge when both directions are zero.
    int from = a, to = b;
    if (w.at(a, b) < w.at(b, a) ||
        (w.at(a, b) == w.at(b, a) && cand_rank_[b] < cand_rank_[a])) {
      from = b;
      to = a;
    }
    const bool ordered = ((reach[a] >> b) & 1) || ((reach[b] >> a) & 1);
    int winner = from, loser = to;
    if (ordered && ((reach[to] >> from) & 1)) {
      winner = to;
      loser = from;
    }
    if (!ordered) {
      reach[winner] |= reach[loser] | (uint64_t{1} << loser);
      for (int x = 0; x < j; ++x)
        if ((reach[x] >> winner) & 1) reach[x] |= reach[winner];
    }
    if (trace_out)
      trace_out->steps.push_back(
          {{a, b}, {from, to}, !ordered, {winner, loser}});
  }

  int top = 0;
  if (trace_out) {
    std::vector<int> final_order(j);
    std::iota(final_order.begin(), final_order.end(), 0);
    std::sort(final_order.begin(), final_order.end(), [&](int x, int y) {
      return std::popcount(reach[x]) > std::popcount(reach[y]);
    });
    trace_out->final_order = std::move(final_order);
    top = trace_out->final_order[0];
  } else {
    for (int x = 0; x < j; ++x)
      if (std::popcount(reach[x]) == j - 1) top = x;
  }
  return top;
}

int RpEvaluator::winner(const Wmg& w) const { return run(w, nullptr); }

RpTrace RpEvaluator::trace(const Wmg& w) const {
  RpTrace t;
  run(w, &t);
  return t;
}

RpTrace ranked_pairs(const Wmg& w, const TieBreak& t) {
  return RpEvaluator(w.j, t).trace(w);
}

Election mcgarvey_synthesize(const Wmg& target, const McgarveyOptions& opts) {
  if (target.symbolic) throw VoteError("mcgarvey: symbolic rank matrix is not a margin target");
  if (target.j < 1) throw VoteError("mcgarvey: empty candidate set");
  if (!target.antisymmetric()) throw VoteError("mcgarvey: target is not antisymmetric");
  const auto parity = target.parity();
  if (!parity) throw VoteError("mcgarvey: target edge weights have mixed parity");

  const int j = target.j;
  Election e;
  for (int c = 0; c < j; ++c) e.candidates.push_back(std::to_string(c + 1));

  Wmg cur(j);
  if (*parity == 1) {
    Ballot seed;
    seed.order.resize(j);
    std::iota(seed.order.begin(), seed.order.end(), 0);
    e.ballots.push_back(seed);
    for (int a = 0; a < j; ++a)
      for (int b = a + 1; b < j; ++b) {
        cur.at(a, b) = 1;
        cur.at(b, a) = -1;
      }
  }

  if (!opts.weighted) {
    __int128 total = *parity == 1 ? 1 : 0;
    for (int a = 0; a < j; ++a)
      for (int b = a + 1; b < j; ++b) {
        __int128 delta = static_cast<__int128>(target.at(a, b)) - cur.at(a, b);
        total += delta < 0 ? -delta : delta;  // one ballot pair per two units
      }
    if (total > opts.ballot_budget)
      throw VoteError("mcgarvey: target exceeds the unweighted ballot budget");
  }

  for (int a = 0; a < j; ++a)
    for (int b = a + 1; b < j; ++b) {
      const long long delta = target.at(a, b) - cur.at(a, b);
      if (delta == 0) continue;
      const int x = delta > 0 ? a : b;
      const int y = delta > 0 ? b : a;
      const long long mag = (delta > 0 ? delta : -delta) / 2;

      // The canceling pair x>y>rest and rest-reversed>x>y shifts only d(x,y).
      Ballot first, second;
      first.order = {x, y};
      for (int c = 0; c < j; ++c)
        if (c != x && c != y) first.order.push_back(c);
      for (int c = j - 1; c >= 0; --c)
        if (c != x && c != y) second.order.push_back(c);
      second.order.push_back(x);
      second.order.push_back(y);

      if (opts.weighted) {
        first.weight = second.weight = mag;
      } else {
        first.count = second.count = mag;
      }
      e.ballots.push_back(std::move(first));
      e.ballots.push_back(std::move(second));
    }
  return e;
}

Election restrict_election(const Election& e, const std::vector<int>& keep) {
  if (keep.empty()) throw VoteError("restrict: keep set is empty");
  const int j = e.num_candidates();
  std::vector<int> local(j, -1);
  for (size_t i = 0; i < keep.size(); ++i) {
    const int c = keep[i];
    if (c < 0 || c >= j) throw VoteError("restrict: unknown candidate in keep set");
    if (i > 0 && keep[i - 1] >= c) throw VoteError("restrict: keep set must be sorted and unique");
    local[c] = static_cast<int>(i);
  }
  Election r;
  for (int c : keep) r.candidates.push_back(e.candidates[c]);
  for (const auto& b : e.ballots) {
    Ballot nb;
    nb.weight = b.weight;
    nb.price = b.price;
    nb.count = b.count;
    for (int c : b.order)
      if (local[c] >= 0) nb.order.push_back(local[c]);
    r.ballots.push_back(std::move(nb));
  }
  return r;
}

}  // namespace votegraph
