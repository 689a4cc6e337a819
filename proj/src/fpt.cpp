#include "votegraph/fpt.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <map>
#include <numeric>

namespace votegraph::fpt {

using frameworks::Rpwcf;
using frameworks::SignClaim;
using frameworks::Swcf;
using ilp::RelOp;

VoteTypeTable::VoteTypeTable(int n) : j(n) {
  std::vector<int> base(n);
  std::iota(base.begin(), base.end(), 0);
  do orders.push_back(base);
  while (std::next_permutation(base.begin(), base.end()));
}

int VoteTypeTable::type_of(const std::vector<int>& order) const {
  const auto it = std::lower_bound(orders.begin(), orders.end(), order);
  if (it == orders.end() || *it != order) throw VoteError("unknown vote type");
  return static_cast<int>(it - orders.begin());
}

bool VoteTypeTable::prefers(int type, int a, int b) const {
  for (int c : orders[type]) {
    if (c == a) return true;
    if (c == b) return false;
  }
  return false;
}

void add_type_var(DeltaTable& dt, const VoteTypeTable& vt, int type, int var, long long coef) {
  const auto& order = vt.orders[type];
  for (size_t x = 0; x < order.size(); ++x)
    for (size_t y = x + 1; y < order.size(); ++y) {
      dt.at(order[x], order[y]).terms.push_back({var, coef});
      dt.at(order[y], order[x]).terms.push_back({var, -coef});
    }
}

void ModelBuilder::require(const LinExpr& lhs, RelOp op, const LinExpr& rhs, long long shift) {
  std::vector<ilp::LinTerm> terms;
  terms.reserve(lhs.terms.size() + rhs.terms.size());
  terms.insert(terms.end(), lhs.terms.begin(), lhs.terms.end());
  for (const auto& t : rhs.terms) terms.push_back({t.var, -t.coef});
  std::sort(terms.begin(), terms.end(),
            [](const ilp::LinTerm& a, const ilp::LinTerm& b) { return a.var < b.var; });
  size_t out = 0;
  for (size_t i = 0; i < terms.size();) {
    long long coef = 0;
    const int var = terms[i].var;
    while (i < terms.size() && terms[i].var == var) coef += terms[i++].coef;
    if (coef != 0) terms[out++] = {var, coef};
  }
  terms.resize(out);
  model.add_constraint(std::move(terms), op, rhs.constant + shift - lhs.constant);
}

void ModelBuilder::emit_bigger(const DeltaTable& t, int a, int b, int c, int d, bool strict) {
  require(t.at(a, b), RelOp::ge, t.at(c, d), strict ? 1 : 0);
}

void ModelBuilder::emit_framework(const DeltaTable& t, const Swcf& f) {
  // within a level every edge weighs the same; consecutive levels separate
  // strictly, so one representative per level carries the chain
  for (const auto& level : f.levels)
    for (size_t i = 1; i < level.size(); ++i)
      require(t.at(level[0].first, level[0].second), RelOp::eq,
              t.at(level[i].first, level[i].second));
  for (size_t l = 1; l < f.levels.size(); ++l)
    emit_bigger(t, f.levels[l - 1][0].first, f.levels[l - 1][0].second, f.levels[l][0].first,
                f.levels[l][0].second, /*strict=*/true);
}

void ModelBuilder::emit_framework(const DeltaTable& t, const Rpwcf& f) {
  const auto pairs = all_pairs(f.j);
  // sign claims
  for (size_t pi = 0; pi < pairs.size(); ++pi) {
    auto [a, b] = pairs[pi];
    switch (f.signs[pi]) {
      case SignClaim::first_positive:
        require(t.at(a, b), RelOp::ge, {}, 1);
        break;
      case SignClaim::second_positive:
        require(t.at(b, a), RelOp::ge, {}, 1);
        break;
      case SignClaim::both_zero:
        require(t.at(a, b), RelOp::eq, {});
        break;
    }
  }
  // encounter order: at each step the considered edge ties-or-beats every
  // not-yet-encountered pair below it in the tie-break priority and strictly
  // beats every one above it, both directed edges each
  std::vector<int> pair_rank(pairs.size());
  for (size_t r = 0; r < f.tiebreak.pair_order.size(); ++r)
    pair_rank[pair_index(f.j, f.tiebreak.pair_order[r].first, f.tiebreak.pair_order[r].second)] =
        static_cast<int>(r);
  for (size_t s = 0; s < f.steps.size(); ++s) {
    const auto edge = f.steps[s].edge;
    const int here = pair_rank[pair_index(f.j, f.steps[s].pair.first, f.steps[s].pair.second)];
    for (size_t later = s + 1; later < f.encounter_order.size(); ++later) {
      const int qi = f.encounter_order[later];
      auto [qa, qb] = pairs[qi];
      const bool strict = pair_rank[qi] < here;  // the other pair outranks us
      emit_bigger(t, edge.first, edge.second, qa, qb, strict);
      emit_bigger(t, edge.first, edge.second, qb, qa, strict);
    }
  }
}

bool uses_framework_loop(AttackType t) {
  switch (t) {
    case AttackType::bribery:
    case AttackType::manipulation:
    case AttackType::control_add_voters:
    case AttackType::control_delete_voters:
    case AttackType::control_partition_voters:
      return true;
    default:
      return false;
  }
}

bool within_caps(const AttackInstance& inst, const FptOptions& opts) {
  if (!uses_framework_loop(inst.type)) return true;  // brute-force route
  const int j = inst.election.num_candidates();
  return j <= (inst.rule.kind == VotingRule::schulze ? opts.schulze_cap : opts.rp_cap);
}

namespace {

// Uniform view over the two framework catalogs. RP items decode into a
// caller-owned scratch object so the big loops stay allocation-free.
class FrameworkSet {
 public:
  FrameworkSet(const Rule& rule, int j, const FptOptions& opts) {
    if (rule.kind == VotingRule::schulze) {
      swcfs_ = &frameworks::swcf_catalog(j, opts.schulze_cap);
    } else {
      rps_.emplace(j, rule.tiebreak, opts.rp_cap);
    }
  }

  size_t size() const {
    return swcfs_ ? swcfs_->size() : static_cast<size_t>(rps_->count());
  }

  struct Item {
    const Swcf* swcf = nullptr;
    const Rpwcf* rpwcf = nullptr;

    bool outcome_matches(const Goal& goal, int p) const {
      if (swcf) return goal_satisfied(swcf->winners, goal, p);
      const bool winning = rpwcf->winner() == p;
      return goal.mode == GoalMode::constructive ? winning : !winning;
    }
    void emit(ModelBuilder& b, const DeltaTable& t) const {
      if (swcf) b.emit_framework(t, *swcf);
      else b.emit_framework(t, *rpwcf);
    }
  };

  Item get(size_t i, Rpwcf& scratch) const {
    Item it;
    if (swcfs_) {
      it.swcf = &(*swcfs_)[i];
    } else {
      rps_->item_into(i, scratch);
      it.rpwcf = &scratch;
    }
    return it;
  }

 private:
  const std::vector<Swcf>* swcfs_ = nullptr;
  std::optional<frameworks::RpwcfStream> rps_;
};

struct TryOutcome {
  bool modeled = false;  // passed the outcome filter and got a model solved
  std::optional<Witness> witness;
};

struct LoopResult {
  std::optional<Witness> witness;
  long long examined = 0;
  long long models = 0;
};

// Per-worker reusable state: one model skeleton clone plus framework decode
// buffers, so the framework loop performs no per-item allocation beyond the
// emitted constraint rows, which roll back after each solve.
struct WorkerCtx {
  ModelBuilder builder;
  size_t mark = 0;
  Rpwcf scratch1, scratch2;
};

// Runs try_idx over 0..count-1 and returns the first success in index order.
// Parallel runs work block-by-block so counters and the chosen witness do
// not depend on the job count.
template <typename Fn>
LoopResult run_indexed_loop(const ModelBuilder& proto, size_t count, int jobs, Fn&& try_idx) {
  auto make_ctx = [&] {
    WorkerCtx ctx;
    ctx.builder = proto;
    ctx.mark = ctx.builder.model.constraint_mark();
    return ctx;
  };
  LoopResult r;
  if (jobs <= 1) {
    WorkerCtx ctx = make_ctx();
    for (size_t i = 0; i < count; ++i) {
      TryOutcome o = try_idx(ctx, i);
      ctx.builder.model.rollback_constraints(ctx.mark);
      ++r.examined;
      if (o.modeled) ++r.models;
      if (o.witness) {
        r.witness = std::move(o.witness);
        return r;
      }
    }
    return r;
  }
  const size_t block = static_cast<size_t>(jobs) * 1024;
  std::vector<WorkerCtx> ctxs;
  for (int t = 0; t < jobs; ++t) ctxs.push_back(make_ctx());
  for (size_t start = 0; start < count; start += block) {
    const size_t end = std::min(count, start + block);
    std::vector<TryOutcome> outs(end - start);
    std::atomic<size_t> next{start};
    std::vector<std::future<void>> futs;
    for (int t = 0; t < jobs; ++t)
      futs.push_back(std::async(std::launch::async, [&, t] {
        WorkerCtx& ctx = ctxs[t];
        for (size_t i = next.fetch_add(1); i < end; i = next.fetch_add(1)) {
          outs[i - start] = try_idx(ctx, i);
          ctx.builder.model.rollback_constraints(ctx.mark);
        }
      }));
    for (auto& f : futs) f.get();
    for (size_t i = start; i < end; ++i) {
      TryOutcome& o = outs[i - start];
      ++r.examined;
      if (o.modeled) ++r.models;
      if (o.witness) {
        r.witness = std::move(o.witness);
        return r;
      }
    }
  }
  return r;
}

struct ClassCounts {
  long long weight = 1;
  long long price = 1;
  std::vector<long long> per_type;
  long long total = 0;
};

std::vector<ClassCounts> classify(const std::vector<Ballot>& ballots, const VoteTypeTable& vt) {
  std::map<std::pair<long long, long long>, ClassCounts> m;
  for (const auto& b : ballots) {
    auto& c = m[{b.weight, b.price}];
    if (c.per_type.empty()) {
      c.weight = b.weight;
      c.price = b.price;
      c.per_type.assign(vt.count(), 0);
    }
    c.per_type[vt.type_of(b.order)] += b.count;
    c.total += b.count;
  }
  std::vector<ClassCounts> out;
  for (auto& [k, c] : m) out.push_back(std::move(c));
  return out;
}

DeltaTable base_delta(const Wmg& base) {
  DeltaTable dt(base.j);
  for (int a = 0; a < base.j; ++a)
    for (int b = 0; b < base.j; ++b)
      if (a != b) dt.at(a, b).constant = base.at(a, b);
  return dt;
}

const ilp::FeasibilityBackend& backend_of(const FptOptions& opts) {
  static const ilp::PropagationSolver builtin;
  return opts.backend ? *opts.backend : builtin;
}

void verify_witness(const AttackInstance& inst, const Witness& w) {
  if (!goal_satisfied(apply_witness(inst, w), inst.goal, inst.p))
    throw VoteError("internal: decoded witness fails to replay to the goal");
}

SolveResult finish(const AttackInstance& inst, LoopResult&& loop, long long model_vars,
                   long long extra_states = 0) {
  SolveResult r;
  r.stats.frameworks = loop.examined;
  r.stats.models = loop.models;
  r.stats.states = extra_states;
  r.stats.model_vars = model_vars;
  if (loop.witness) {
    verify_witness(inst, *loop.witness);
    r.decision = Decision::yes;
    r.witness = std::move(loop.witness);
  } else {
    r.decision = Decision::no;
  }
  return r;
}

// ---------------- bribery ----------------

struct BriberyVars {
  // reduced: dep[c][t], arr[c][t]; faithful: mv[c][t][l]
  std::vector<std::vector<int>> dep, arr;
  std::vector<std::vector<std::vector<int>>> mv;
};

void build_bribery_skeleton(const AttackInstance& inst, const VoteTypeTable& vt,
                            const std::vector<ClassCounts>& classes, FptOptions::Encoding enc,
                            ModelBuilder& b, DeltaTable& dt, BriberyVars& vars) {
  const int ntypes = vt.count();
  std::vector<ilp::LinTerm> cost;
  if (enc == FptOptions::Encoding::reduced) {
    vars.dep.resize(classes.size());
    vars.arr.resize(classes.size());
    for (size_t c = 0; c < classes.size(); ++c) {
      vars.dep[c].assign(ntypes, -1);
      vars.arr[c].assign(ntypes, -1);
      std::vector<ilp::LinTerm> balance;
      for (int t = 0; t < ntypes; ++t) {
        if (classes[c].per_type[t] > 0) {
          const int v = b.model.add_variable(
              "dep_c" + std::to_string(c) + "_t" + std::to_string(t), 0, classes[c].per_type[t]);
          vars.dep[c][t] = v;
          add_type_var(dt, vt, t, v, -classes[c].weight);
          balance.push_back({v, 1});
          cost.push_back({v, classes[c].price});
        }
        const int v = b.model.add_variable(
            "arr_c" + std::to_string(c) + "_t" + std::to_string(t), 0, classes[c].total);
        vars.arr[c][t] = v;
        add_type_var(dt, vt, t, v, classes[c].weight);
        balance.push_back({v, -1});
      }
      b.model.add_constraint(std::move(balance), RelOp::eq, 0);  // departures == arrivals
    }
  } else {
    vars.mv.resize(classes.size());
    for (size_t c = 0; c < classes.size(); ++c) {
      vars.mv[c].assign(ntypes, std::vector<int>(ntypes, -1));
      for (int t = 0; t < ntypes; ++t) {
        if (classes[c].per_type[t] == 0) continue;
        std::vector<ilp::LinTerm> supply;
        for (int l = 0; l < ntypes; ++l) {
          const int v = b.model.add_variable("m_c" + std::to_string(c) + "_" + std::to_string(t) +
                                                 "_" + std::to_string(l),
                                             0, classes[c].per_type[t]);
          vars.mv[c][t][l] = v;
          add_type_var(dt, vt, t, v, -classes[c].weight);
          add_type_var(dt, vt, l, v, classes[c].weight);
          supply.push_back({v, 1});
          cost.push_back({v, classes[c].price});
        }
        b.model.add_constraint(std::move(supply), RelOp::le, classes[c].per_type[t]);
      }
    }
  }
  b.model.add_constraint(std::move(cost), RelOp::le, inst.budget);
}

Witness decode_bribery(const VoteTypeTable& vt, const std::vector<ClassCounts>& classes,
                       const BriberyVars& vars, FptOptions::Encoding enc,
                       const ilp::Assignment& a) {
  Witness w;
  w.type = AttackType::bribery;
  for (size_t c = 0; c < classes.size(); ++c) {
    // per-class transfer counts from type t to type l
    std::map<std::pair<int, int>, long long> moves;
    if (enc == FptOptions::Encoding::faithful) {
      for (int t = 0; t < vt.count(); ++t) {
        if (classes[c].per_type[t] == 0) continue;
        for (int l = 0; l < vt.count(); ++l)
          if (t != l && a[vars.mv[c][t][l]] > 0) moves[{t, l}] += a[vars.mv[c][t][l]];
      }
    } else {
      std::vector<long long> dep(vt.count(), 0), arr(vt.count(), 0);
      for (int t = 0; t < vt.count(); ++t) {
        if (vars.dep[c][t] >= 0) dep[t] = a[vars.dep[c][t]];
        arr[t] = a[vars.arr[c][t]];
        // self-moves change nothing; cancel them to keep the bribe cheap
        const long long self = std::min(dep[t], arr[t]);
        dep[t] -= self;
        arr[t] -= self;
      }
      int l = 0;
      for (int t = 0; t < vt.count(); ++t)
        while (dep[t] > 0) {
          while (l < vt.count() && arr[l] == 0) ++l;
          const long long x = std::min(dep[t], arr[l]);
          moves[{t, l}] += x;
          dep[t] -= x;
          arr[l] -= x;
        }
    }
    for (const auto& [tl, cnt] : moves)
      w.rewrites.push_back({vt.orders[tl.first], classes[c].weight, classes[c].price,
                            vt.orders[tl.second], cnt});
  }
  return w;
}

SolveResult solve_bribery(const AttackInstance& inst, const FptOptions& opts) {
  const int j = inst.election.num_candidates();
  const VoteTypeTable vt(j);
  const auto classes = classify(inst.election.ballots, vt);
  const Wmg base = build_wmg(inst.election);

  ModelBuilder proto;
  DeltaTable dt = base_delta(base);
  BriberyVars vars;
  build_bribery_skeleton(inst, vt, classes, opts.encoding, proto, dt, vars);
  const FrameworkSet fws(inst.rule, j, opts);
  const auto& backend = backend_of(opts);

  auto loop = run_indexed_loop(proto, fws.size(), opts.jobs,
                               [&](WorkerCtx& ctx, size_t i) -> TryOutcome {
    const auto item = fws.get(i, ctx.scratch1);
    if (!item.outcome_matches(inst.goal, inst.p)) return {};
    item.emit(ctx.builder, dt);
    const auto out = backend.solve(ctx.builder.model);
    if (!out.feasible) return {true, std::nullopt};
    return {true, decode_bribery(vt, classes, vars, opts.encoding, out.values)};
  });
  return finish(inst, std::move(loop), proto.model.num_variables());
}

// ---------------- voter control (adding / deleting) and manipulation ----------------

struct TypeVarSet {
  std::vector<int> var;  // per vote type, -1 when absent
};

Witness decode_counts(const VoteTypeTable& vt, const std::vector<Ballot>& entries,
                      const TypeVarSet& tv, const ilp::Assignment& a, AttackType type) {
  std::vector<long long> take_per_type(vt.count(), 0);
  for (int t = 0; t < vt.count(); ++t)
    if (tv.var[t] >= 0) take_per_type[t] = a[tv.var[t]];
  Witness w;
  w.type = type;
  w.chosen_counts.assign(entries.size(), 0);
  for (size_t i = 0; i < entries.size(); ++i) {
    long long& left = take_per_type[vt.type_of(entries[i].order)];
    w.chosen_counts[i] = std::min(left, entries[i].count);
    left -= w.chosen_counts[i];
  }
  return w;
}

SolveResult solve_voter_sets(const AttackInstance& inst, const FptOptions& opts) {
  const bool adding = inst.type == AttackType::control_add_voters;
  const int j = inst.election.num_candidates();
  const VoteTypeTable vt(j);
  const Wmg base = build_wmg(inst.election);

  std::vector<long long> supply(vt.count(), 0);
  const auto& source = adding ? inst.pool : inst.election.ballots;
  for (const auto& b : source) supply[vt.type_of(b.order)] += b.count;

  ModelBuilder proto;
  DeltaTable dt = base_delta(base);
  TypeVarSet tv;
  tv.var.assign(vt.count(), -1);
  std::vector<ilp::LinTerm> total;
  for (int t = 0; t < vt.count(); ++t) {
    if (supply[t] == 0) continue;
    const int v = proto.model.add_variable("v_t" + std::to_string(t), 0, supply[t]);
    tv.var[t] = v;
    add_type_var(dt, vt, t, v, adding ? 1 : -1);
    total.push_back({v, 1});
  }
  proto.model.add_constraint(std::move(total), RelOp::le, inst.budget);

  const FrameworkSet fws(inst.rule, j, opts);
  const auto& backend = backend_of(opts);
  auto loop = run_indexed_loop(proto, fws.size(), opts.jobs,
                               [&](WorkerCtx& ctx, size_t i) -> TryOutcome {
    const auto item = fws.get(i, ctx.scratch1);
    if (!item.outcome_matches(inst.goal, inst.p)) return {};
    item.emit(ctx.builder, dt);
    const auto out = backend.solve(ctx.builder.model);
    if (!out.feasible) return {true, std::nullopt};
    return {true, decode_counts(vt, source, tv, out.values, inst.type)};
  });
  return finish(inst, std::move(loop), proto.model.num_variables());
}

// Manipulation: unit weights route through adding-voters control with the
// addition bound turned into an equality; weighted instances get one
// variable per (weight, vote type) with class totals pinned.
SolveResult solve_manipulation(const AttackInstance& inst, const FptOptions& opts) {
  const int j = inst.election.num_candidates();
  const VoteTypeTable vt(j);
  const Wmg base = build_wmg(inst.election);

  std::map<long long, std::vector<size_t>> classes;  // weight -> manipulator slots
  for (size_t i = 0; i < inst.manip_weights.size(); ++i)
    classes[inst.manip_weights[i]].push_back(i);

  ModelBuilder proto;
  DeltaTable dt = base_delta(base);
  std::vector<std::vector<int>> mvar;  // per class, per type
  std::vector<long long> weights;
  for (const auto& [wgt, members] : classes) {
    std::vector<int> per_type(vt.count());
    std::vector<ilp::LinTerm> sum;
    for (int t = 0; t < vt.count(); ++t) {
      const int v = proto.model.add_variable(
          "m_w" + std::to_string(wgt) + "_t" + std::to_string(t), 0,
          static_cast<long long>(members.size()));
      per_type[t] = v;
      add_type_var(dt, vt, t, v, wgt);
      sum.push_back({v, 1});
    }
    // every manipulator of this weight casts exactly one ballot
    proto.model.add_constraint(std::move(sum), RelOp::eq,
                               static_cast<long long>(members.size()));
    mvar.push_back(std::move(per_type));
    weights.push_back(wgt);
  }

  const FrameworkSet fws(inst.rule, j, opts);
  const auto& backend = backend_of(opts);
  auto loop = run_indexed_loop(proto, fws.size(), opts.jobs,
                               [&](WorkerCtx& ctx, size_t i) -> TryOutcome {
    const auto item = fws.get(i, ctx.scratch1);
    if (!item.outcome_matches(inst.goal, inst.p)) return {};
    item.emit(ctx.builder, dt);
    const auto out = backend.solve(ctx.builder.model);
    if (!out.feasible) return {true, std::nullopt};
    Witness w;
    w.type = AttackType::manipulation;
    w.manip_orders.resize(inst.manip_weights.size());
    size_t ci = 0;
    for (const auto& [wgt, members] : classes) {
      size_t slot = 0;
      for (int t = 0; t < vt.count(); ++t)
        for (long long cnt = out.values[mvar[ci][t]]; cnt > 0; --cnt)
          w.manip_orders[members[slot++]] = vt.orders[t];
      ++ci;
    }
    return {true, std::move(w)};
  });
  return finish(inst, std::move(loop), proto.model.num_variables());
}

// ---------------- partition of voters ----------------

SolveResult solve_voter_partition(const AttackInstance& inst, const FptOptions& opts) {
  const int j = inst.election.num_candidates();
  const VoteTypeTable vt(j);
  const Wmg base = build_wmg(inst.election);
  const long long n_total = inst.election.total_votes();

  SolveStats stats;
  // One-sided partitions are checked directly: a voterless side promotes
  // nobody, which no framework claim expresses.
  const std::vector<long long> zeros(inst.election.ballots.size(), 0);
  std::vector<std::vector<long long>> direct{zeros};
  if (n_total > 0) {
    std::vector<long long> all;
    for (const auto& b : inst.election.ballots) all.push_back(b.count);
    direct.push_back(std::move(all));
  }
  for (const auto& v1 : direct) {
    ++stats.states;
    if (goal_satisfied(eval_voter_partition(inst.rule, inst.election, v1, inst.tie_handling),
                       inst.goal, inst.p)) {
      Witness w;
      w.type = AttackType::control_partition_voters;
      w.chosen_counts = v1;
      SolveResult r;
      r.decision = Decision::yes;
      r.witness = std::move(w);
      r.stats = stats;
      verify_witness(inst, *r.witness);
      return r;
    }
  }

  SolveResult r;
  r.stats = stats;
  r.decision = Decision::no;
  if (n_total < 2) return r;

  std::vector<long long> supply(vt.count(), 0);
  for (const auto& b : inst.election.ballots) supply[vt.type_of(b.order)] += b.count;

  ModelBuilder proto;
  DeltaTable d1(j), d2 = base_delta(base);
  TypeVarSet tv;
  tv.var.assign(vt.count(), -1);
  std::vector<ilp::LinTerm> total;
  for (int t = 0; t < vt.count(); ++t) {
    if (supply[t] == 0) continue;
    const int v = proto.model.add_variable("v_t" + std::to_string(t), 0, supply[t]);
    tv.var[t] = v;
    add_type_var(d1, vt, t, v, 1);
    add_type_var(d2, vt, t, v, -1);
    total.push_back({v, 1});
  }
  // both sides hold at least one voter; one-sided splits were handled above
  proto.model.add_constraint(total, RelOp::ge, 1);
  proto.model.add_constraint(std::move(total), RelOp::le, n_total - 1);

  const FrameworkSet fws(inst.rule, j, opts);
  const size_t n = fws.size();
  const auto& backend = backend_of(opts);

  // A pair's model can only be feasible if each side's framework is feasible
  // against its own margins alone, so the sides are screened once up front.
  std::vector<size_t> side1_ok, side2_ok;
  {
    Rpwcf scratch;
    ModelBuilder screen = proto;
    const size_t mark = screen.model.constraint_mark();
    for (size_t i = 0; i < n; ++i) {
      const auto item = fws.get(i, scratch);
      for (int side = 0; side < 2; ++side) {
        item.emit(screen, side == 0 ? d1 : d2);
        if (backend.solve(screen.model).feasible) (side == 0 ? side1_ok : side2_ok).push_back(i);
        screen.model.rollback_constraints(mark);
      }
    }
  }

  // Double loop over the surviving framework pairs; no outcome pre-filter is
  // possible because the goal is judged on the final round, after decoding.
  auto loop = run_indexed_loop(
      proto, side1_ok.size() * side2_ok.size(), opts.jobs,
      [&](WorkerCtx& ctx, size_t idx) -> TryOutcome {
        const auto k1 = fws.get(side1_ok[idx / side2_ok.size()], ctx.scratch1);
        const auto k2 = fws.get(side2_ok[idx % side2_ok.size()], ctx.scratch2);
        k1.emit(ctx.builder, d1);
        k2.emit(ctx.builder, d2);
        const auto out = backend.solve(ctx.builder.model);
        if (!out.feasible) return {true, std::nullopt};
        Witness w = decode_counts(vt, inst.election.ballots, tv, out.values,
                                  AttackType::control_partition_voters);
        const auto winners =
            eval_voter_partition(inst.rule, inst.election, w.chosen_counts, inst.tie_handling);
        if (!goal_satisfied(winners, inst.goal, inst.p)) return {true, std::nullopt};
        return {true, std::move(w)};
      });

  SolveResult out = finish(inst, std::move(loop), proto.model.num_variables(), stats.states);
  return out;
}

}  // namespace

SolveResult solve_fpt(const AttackInstance& inst, const FptOptions& opts) {
  inst.validate();
  if (!uses_framework_loop(inst.type)) {
    // Candidate control: exhaustive search over the bounded solution space
    // is already fixed-parameter tractable; no framework loop needed.
    return oracle::solve_brute(inst);
  }
  if (!within_caps(inst, opts)) {
    SolveResult r;
    r.decision = Decision::cap_refused;
    return r;
  }
  switch (inst.type) {
    case AttackType::bribery:
      return solve_bribery(inst, opts);
    case AttackType::control_add_voters:
    case AttackType::control_delete_voters:
      return solve_voter_sets(inst, opts);
    case AttackType::manipulation:
      return solve_manipulation(inst, opts);
    case AttackType::control_partition_voters:
      return solve_voter_partition(inst, opts);
    default:
      break;
  }
  throw VoteError("unreachable attack type");
}

SolveResult solve_auto(const AttackInstance& inst, const FptOptions& opts,
                       const oracle::SearchBudget& budget) {
  if (!uses_framework_loop(inst.type) || within_caps(inst, opts))
    return solve_fpt(inst, opts);
  return oracle::solve_brute(inst, budget);
}

}  // namespace votegraph::fpt
