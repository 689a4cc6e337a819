#include "votegraph/frameworks.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

namespace votegraph::frameworks {

namespace {

std::vector<Edge> sorted_level(std::vector<Edge> level) {
  std::sort(level.begin(), level.end());
  return level;
}

int level_count_edges(const Swcf& f) {
  int n = 0;
  for (const auto& l : f.levels) n += static_cast<int>(l.size());
  return n;
}

}  // namespace

std::string Swcf::dump() const {
  std::ostringstream os;
  os << "swcf j=" << j << "\n";
  for (size_t t = 0; t < levels.size(); ++t) {
    os << "  level " << t << ":";
    for (auto [a, b] : levels[t]) os << " (" << a << "->" << b << ")";
    os << "\n";
  }
  return os.str();
}

bool swcf_valid(const Swcf& f) {
  const int m2 = f.j * (f.j - 1);
  if (level_count_edges(f) != m2) return false;
  std::map<Edge, int> lvl;
  for (size_t t = 0; t < f.levels.size(); ++t) {
    if (f.levels[t].empty()) return false;
    for (auto [a, b] : f.levels[t]) {
      if (a == b || a < 0 || b < 0 || a >= f.j || b >= f.j) return false;
      if (!lvl.emplace(Edge{a, b}, static_cast<int>(t)).second) return false;
    }
  }
  // Reversal must turn the order upside down.
  const int last = static_cast<int>(f.levels.size()) - 1;
  for (const auto& [e, t] : lvl)
    if (lvl.at({e.second, e.first}) != last - t) return false;
  return true;
}

Wmg swcf_rank_matrix(const Swcf& f) {
  Wmg w(f.j);
  w.symbolic = true;
  const long long top = static_cast<long long>(f.levels.size());
  for (size_t t = 0; t < f.levels.size(); ++t)
    for (auto [a, b] : f.levels[t]) w.at(a, b) = top - static_cast<long long>(t);
  return w;
}

std::vector<int> swcf_winners(const Swcf& f) { return schulze_winners(swcf_rank_matrix(f)); }

Swcf swcf_of_wmg(const Wmg& w) {
  if (!w.symbolic && !w.antisymmetric())
    throw VoteError("swcf_of_wmg: WMG is not antisymmetric");
  std::vector<std::pair<long long, Edge>> edges;
  for (int a = 0; a < w.j; ++a)
    for (int b = 0; b < w.j; ++b)
      if (a != b) edges.push_back({w.at(a, b), {a, b}});
  std::sort(edges.begin(), edges.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  Swcf f;
  f.j = w.j;
  for (size_t i = 0; i < edges.size();) {
    size_t k = i;
    std::vector<Edge> level;
    while (k < edges.size() && edges[k].first == edges[i].first) level.push_back(edges[k++].second);
    f.levels.push_back(std::move(level));
    i = k;
  }
  f.winners = swcf_winners(f);
  return f;
}

SwcfStream::SwcfStream(int j, int cap) : j_(j) {
  if (j < 1) throw VoteError("enumerate_swcf: need at least one candidate");
  if (j > cap)
    throw CapRefused("enumerate_swcf: " + std::to_string(j) +
                     " candidates exceeds the enumeration cap " + std::to_string(cap));
  pairs_ = all_pairs(j);
  m_ = static_cast<int>(pairs_.size());
  stack_.push_back({m_ ? (uint32_t{1} << m_) - 1 : 0u, 0, 0, true, {}});
}

std::optional<Swcf> SwcfStream::next() {
  auto assemble = [&](size_t depth, const std::vector<Edge>* middle) {
    Swcf f;
    f.j = j_;
    for (size_t i = 0; i < depth; ++i) f.levels.push_back(sorted_level(stack_[i].level));
    if (middle) f.levels.push_back(sorted_level(*middle));
    for (size_t i = depth; i-- > 0;) {
      std::vector<Edge> rev;
      for (auto [a, b] : stack_[i].level) rev.push_back({b, a});
      f.levels.push_back(sorted_level(std::move(rev)));
    }
    f.winners = swcf_winners(f);
    return f;
  };

  while (!done_) {
    if (stack_.empty()) {
      done_ = true;
      break;
    }
    Frame& f = stack_.back();
    const size_t depth = stack_.size() - 1;

    if (f.middle_pending) {
      f.middle_pending = false;
      if (f.remaining == 0) {
        // no pairs left: the stacked levels are the whole structure
        Swcf out = assemble(depth, nullptr);
        stack_.pop_back();
        return out;
      }
      f.subset = f.remaining;  // descending submask iteration starts at R itself
      f.orient = 0;
      std::vector<Edge> middle;
      for (int pi = 0; pi < m_; ++pi)
        if ((f.remaining >> pi) & 1) {
          middle.push_back(pairs_[pi]);
          middle.push_back({pairs_[pi].second, pairs_[pi].first});
        }
      return assemble(depth, &middle);
    }

    if (f.subset == 0) {
      stack_.pop_back();
      continue;
    }

    // Materialize the level for the current (subset, orientation) choice,
    // advance the iterator, then descend.
    f.level.clear();
    int bit = 0;
    for (int pi = 0; pi < m_; ++pi)
      if ((f.subset >> pi) & 1) {
        auto [a, b] = pairs_[pi];
        f.level.push_back(((f.orient >> bit) & 1) ? Edge{b, a} : Edge{a, b});
        ++bit;
      }
    const uint32_t child_remaining = f.remaining & ~f.subset;
    ++f.orient;
    if (f.orient == (uint32_t{1} << std::popcount(f.subset))) {
      f.orient = 0;
      f.subset = (f.subset - 1) & f.remaining;
    }
    stack_.push_back({child_remaining, 0, 0, true, {}});
  }
  return std::nullopt;
}

std::vector<Swcf> enumerate_swcf(int j, int cap) {
  SwcfStream s(j, cap);
  std::vector<Swcf> out;
  while (auto f = s.next()) out.push_back(std::move(*f));
  return out;
}

const std::vector<Swcf>& swcf_catalog(int j, int cap) {
  static std::mutex mu;
  static std::map<int, std::vector<Swcf>> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(j);
  if (it == cache.end()) it = cache.emplace(j, enumerate_swcf(j, cap)).first;
  return it->second;
}

std::string Rpwcf::dump() const {
  std::ostringstream os;
  os << "rpwcf j=" << j << "\n";
  for (size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    os << "  step " << i + 1 << ": pair {" << s.pair.first << "," << s.pair.second << "} edge ("
       << s.edge.first << "->" << s.edge.second << ") "
       << (s.fixed ? "fixed" : "skipped") << " => " << s.relation.first << " beats "
       << s.relation.second << "\n";
  }
  os << "  order:";
  for (int c : final_order) os << ' ' << c;
  os << "\n";
  return os.str();
}

namespace {

// Derives the step story and final order from the claims already sitting in
// f.signs / f.encounter_order, reusing f's buffers.
void derive_rpwcf_story(Rpwcf& f, const std::vector<Edge>& pairs,
                        const std::vector<int>& cand_rank) {
  const int j = f.j;
  f.steps.clear();
  uint64_t reach[64] = {};
  for (int pi : f.encounter_order) {
    auto [a, b] = pairs[pi];
    int from = a, to = b;
    switch (f.signs[pi]) {
      case SignClaim::first_positive: break;
      case SignClaim::second_positive: from = b; to = a; break;
      case SignClaim::both_zero:
        if (cand_rank[b] < cand_rank[a]) { from = b; to = a; }
        break;
    }
    const bool ordered = ((reach[a] >> b) & 1) || ((reach[b] >> a) & 1);
    int winner = from, loser = to;
    if (ordered && ((reach[to] >> from) & 1)) { winner = to; loser = from; }
    if (!ordered) {
      reach[winner] |= reach[loser] | (uint64_t{1} << loser);
      for (int x = 0; x < j; ++x)
        if ((reach[x] >> winner) & 1) reach[x] |= reach[winner];
    }
    f.steps.push_back({{a, b}, {from, to}, !ordered, {winner, loser}});
  }
  f.final_order.resize(j);
  std::iota(f.final_order.begin(), f.final_order.end(), 0);
  std::sort(f.final_order.begin(), f.final_order.end(), [&](int x, int y) {
    return std::popcount(reach[x]) > std::popcount(reach[y]);
  });
}

}  // namespace

Rpwcf make_rpwcf(int j, const TieBreak& t, std::vector<SignClaim> signs,
                 std::vector<int> encounter_order) {
  t.validate(j);
  if (j > 64) throw VoteError("rpwcf: too many candidates");
  const auto pairs = all_pairs(j);
  const int m = static_cast<int>(pairs.size());
  if (static_cast<int>(signs.size()) != m || static_cast<int>(encounter_order.size()) != m)
    throw VoteError("rpwcf: claims do not cover every pair exactly once");
  {
    std::vector<char> seen(m, 0);
    for (int pi : encounter_order) {
      if (pi < 0 || pi >= m || seen[pi]) throw VoteError("rpwcf: bad encounter order");
      seen[pi] = 1;
    }
  }
  std::vector<int> cand_rank(j);
  for (size_t r = 0; r < t.candidate_order.size(); ++r)
    cand_rank[t.candidate_order[r]] = static_cast<int>(r);

  Rpwcf f;
  f.j = j;
  f.tiebreak = t;
  f.signs = std::move(signs);
  f.encounter_order = std::move(encounter_order);
  derive_rpwcf_story(f, pairs, cand_rank);
  return f;
}

bool rpwcf_story_consistent(int j, const TieBreak& t, const std::vector<SignClaim>& signs,
                            const std::vector<int>& encounter_order,
                            const std::vector<char>& skipped) {
  const Rpwcf f = make_rpwcf(j, t, signs, encounter_order);
  if (skipped.size() != f.steps.size()) return false;
  for (size_t i = 0; i < f.steps.size(); ++i)
    if (static_cast<bool>(skipped[i]) == f.steps[i].fixed) return false;
  return true;
}

Rpwcf rpwcf_of_wmg(const Wmg& w, const TieBreak& t) {
  if (!w.antisymmetric()) throw VoteError("rpwcf_of_wmg: WMG is not antisymmetric");
  const RpTrace trace = ranked_pairs(w, t);
  const int m = w.j * (w.j - 1) / 2;
  std::vector<SignClaim> signs(m);
  for (auto [a, b] : all_pairs(w.j)) {
    SignClaim s = SignClaim::both_zero;
    if (w.at(a, b) > 0) s = SignClaim::first_positive;
    if (w.at(b, a) > 0) s = SignClaim::second_positive;
    signs[pair_index(w.j, a, b)] = s;
  }
  std::vector<int> order;
  order.reserve(m);
  for (const auto& s : trace.steps) order.push_back(pair_index(w.j, s.pair.first, s.pair.second));
  return make_rpwcf(w.j, t, std::move(signs), std::move(order));
}

namespace {

unsigned long long pow3(int m) {
  unsigned long long r = 1;
  for (int i = 0; i < m; ++i) r *= 3;
  return r;
}

unsigned long long factorial(int m) {
  unsigned long long r = 1;
  for (int i = 2; i <= m; ++i) r *= i;
  return r;
}

unsigned long long rank_permutation(const std::vector<int>& perm) {
  const int m = static_cast<int>(perm.size());
  std::vector<int> items(m);
  std::iota(items.begin(), items.end(), 0);
  unsigned long long rank = 0;
  for (int i = 0; i < m; ++i) {
    const auto it = std::find(items.begin(), items.end(), perm[i]);
    rank = rank * static_cast<unsigned long long>(items.size()) +
           static_cast<unsigned long long>(it - items.begin());
    items.erase(it);
  }
  return rank;
}

}  // namespace

RpwcfStream::RpwcfStream(int j, TieBreak t, int cap) : j_(j), tiebreak_(std::move(t)) {
  if (j < 1) throw VoteError("enumerate_rpwcf: need at least one candidate");
  if (j > cap)
    throw CapRefused("enumerate_rpwcf: " + std::to_string(j) +
                     " candidates exceeds the enumeration cap " + std::to_string(cap));
  tiebreak_.validate(j);
  m_ = j * (j - 1) / 2;
  count_ = factorial(m_) * pow3(m_);
  pairs_ = all_pairs(j);
  cand_rank_.assign(j, 0);
  for (size_t r = 0; r < tiebreak_.candidate_order.size(); ++r)
    cand_rank_[tiebreak_.candidate_order[r]] = static_cast<int>(r);
}

Rpwcf RpwcfStream::item(unsigned long long index) const {
  Rpwcf f;
  item_into(index, f);
  return f;
}

void RpwcfStream::item_into(unsigned long long index, Rpwcf& out) const {
  const unsigned long long signs_count = pow3(m_);
  const unsigned long long order_rank = index / signs_count;
  unsigned long long sign_rank = index % signs_count;
  out.j = j_;
  out.tiebreak = tiebreak_;
  out.signs.resize(m_);
  for (int i = 0; i < m_; ++i) {
    out.signs[i] = static_cast<SignClaim>(sign_rank % 3);
    sign_rank /= 3;
  }
  // unrank the encounter permutation without reallocating
  out.encounter_order.resize(m_);
  int items[64];
  std::iota(items, items + m_, 0);
  unsigned long long f = factorial(m_);
  unsigned long long rest = order_rank;
  for (int i = 0; i < m_; ++i) {
    f /= static_cast<unsigned long long>(m_ - i);
    const int idx = static_cast<int>(rest / f);
    rest %= f;
    out.encounter_order[i] = items[idx];
    for (int k = idx; k < m_ - i - 1; ++k) items[k] = items[k + 1];
  }
  derive_rpwcf_story(out, pairs_, cand_rank_);
}

std::optional<Rpwcf> RpwcfStream::next() {
  if (cursor_ >= count_) return std::nullopt;
  return item(cursor_++);
}

unsigned long long RpwcfStream::index_of(const Rpwcf& f) const {
  unsigned long long sign_rank = 0;
  for (int i = m_; i-- > 0;) sign_rank = sign_rank * 3 + static_cast<unsigned long long>(f.signs[i]);
  return rank_permutation(f.encounter_order) * pow3(m_) + sign_rank;
}

namespace {

long long path_strength(const Wmg& w, const std::vector<int>& path, int from, int to) {
  if (path.size() < 2 || path.front() != from || path.back() != to)
    throw VoteError("certificate: path endpoints are wrong");
  std::set<int> seen;
  long long strength = std::numeric_limits<long long>::max();
  for (size_t i = 0; i < path.size(); ++i) {
    if (path[i] < 0 || path[i] >= w.j || !seen.insert(path[i]).second)
      throw VoteError("certificate: path is not simple");
    if (i + 1 < path.size()) strength = std::min(strength, w.at(path[i], path[i + 1]));
  }
  return strength;
}

void all_simple_paths(const Wmg& w, int from, int to, std::vector<int>& cur,
                      std::vector<char>& used, std::vector<std::vector<int>>& out) {
  const int node = cur.back();
  if (node == to) {
    out.push_back(cur);
    return;
  }
  for (int nxt = 0; nxt < w.j; ++nxt) {
    if (used[nxt]) continue;
    used[nxt] = 1;
    cur.push_back(nxt);
    all_simple_paths(w, from, to, cur, used, out);
    cur.pop_back();
    used[nxt] = 0;
  }
}

std::vector<std::vector<int>> simple_paths(const Wmg& w, int from, int to) {
  std::vector<int> cur{from};
  std::vector<char> used(w.j, 0);
  used[from] = 1;
  std::vector<std::vector<int>> out;
  all_simple_paths(w, from, to, cur, used, out);
  return out;
}

// Checks link designations over every simple path from `from` to `to`:
// each path must carry a designated link, on the path, with weight <= cap
// (or < cap when strict).
bool links_hold(const Wmg& w, const PathClaim& claim, int from, int to, long long cap,
                bool strict) {
  std::map<std::vector<int>, Edge> designated;
  for (const auto& wl : claim.return_links) {
    path_strength(w, wl.path, from, to);  // structural validation only
    bool on_path = false;
    for (size_t i = 0; i + 1 < wl.path.size(); ++i)
      if (wl.path[i] == wl.link.first && wl.path[i + 1] == wl.link.second) on_path = true;
    if (!on_path) throw VoteError("certificate: weak link is not on its path");
    if (!designated.emplace(wl.path, wl.link).second)
      throw VoteError("certificate: duplicate weak-link path");
  }
  for (const auto& path : simple_paths(w, from, to)) {
    const auto it = designated.find(path);
    if (it == designated.end())
      throw VoteError("certificate: a simple path has no designated weak link");
    const long long lw = w.at(it->second.first, it->second.second);
    if (strict ? lw >= cap : lw > cap) return false;
  }
  return true;
}

}  // namespace

bool check_certificate(const SchulzeCertificate& c, const Wmg& w) {
  if (c.j != w.j) throw VoteError("certificate: candidate count mismatch");
  std::vector<char> claimed(c.j, 0);
  for (int x : c.winners) {
    if (x < 0 || x >= c.j || claimed[x]) throw VoteError("certificate: bad winner list");
    claimed[x] = 1;
  }
  for (int x : c.nonwinners) {
    if (x < 0 || x >= c.j || claimed[x]) throw VoteError("certificate: bad nonwinner list");
    claimed[x] = 1;
  }
  for (int x = 0; x < c.j; ++x)
    if (!claimed[x]) throw VoteError("certificate: candidate left unclaimed");

  for (int a : c.winners)
    for (int b = 0; b < c.j; ++b) {
      if (b == a) continue;
      const auto it = c.winner_claims.find({a, b});
      if (it == c.winner_claims.end()) throw VoteError("certificate: missing winner claim");
      const long long s = path_strength(w, it->second.strong_path, a, b);
      if (!links_hold(w, it->second, b, a, s, /*strict=*/false)) return false;
    }
  for (int a : c.nonwinners) {
    const auto it = c.nonwinner_claims.find(a);
    if (it == c.nonwinner_claims.end()) throw VoteError("certificate: missing nonwinner claim");
    const auto& [rival, claim] = it->second;
    if (rival < 0 || rival >= c.j || rival == a)
      throw VoteError("certificate: bad eliminating rival");
    const long long s = path_strength(w, claim.strong_path, rival, a);
    if (!links_hold(w, claim, a, rival, s, /*strict=*/true)) return false;
  }
  return true;
}

}  // namespace votegraph::frameworks
