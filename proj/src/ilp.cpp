#include "votegraph/ilp.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace votegraph::ilp {

namespace {

constexpr long long kBoundLimit = 1LL << 62;

using Wide = __int128;

long long floor_div(Wide a, Wide b) {
  Wide q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return static_cast<long long>(q);
}

long long ceil_div(Wide a, Wide b) {
  Wide q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return static_cast<long long>(q);
}

}  // namespace

int FeasibilityModel::add_variable(const std::string& name, long long lo, long long hi) {
  if (lo > hi) throw std::invalid_argument("ilp: variable '" + name + "' has an empty box");
  if (lo < -kBoundLimit || hi > kBoundLimit)
    throw std::invalid_argument("ilp: variable '" + name + "' has an unbounded box");
  names_.push_back(name);
  lo_.push_back(lo);
  hi_.push_back(hi);
  return static_cast<int>(lo_.size()) - 1;
}

void FeasibilityModel::add_constraint(std::vector<LinTerm> terms, RelOp op, long long rhs) {
  std::vector<char> seen(lo_.size(), 0);
  for (const auto& t : terms) {
    if (t.var < 0 || t.var >= num_variables())
      throw std::invalid_argument("ilp: constraint references an undeclared variable");
    if (seen[t.var]) throw std::invalid_argument("ilp: constraint repeats a variable");
    seen[t.var] = 1;
  }
  std::erase_if(terms, [](const LinTerm& t) { return t.coef == 0; });
  constraints_.push_back({std::move(terms), op, rhs});
}

bool check(const FeasibilityModel& m, const Assignment& a) {
  if (static_cast<int>(a.size()) != m.num_variables())
    throw std::invalid_argument("ilp: assignment does not cover every variable");
  for (int v = 0; v < m.num_variables(); ++v)
    if (a[v] < m.lower(v) || a[v] > m.upper(v)) return false;
  for (const auto& c : m.constraints()) {
    Wide sum = 0;
    for (const auto& t : c.terms) sum += static_cast<Wide>(t.coef) * a[t.var];
    const Wide rhs = c.rhs;
    const bool ok = c.op == RelOp::le ? sum <= rhs
                  : c.op == RelOp::ge ? sum >= rhs
                                      : sum == rhs;
    if (!ok) return false;
  }
  return true;
}

namespace {

// Internal row view: the original constraint, read negated for >= rows so
// everything propagates as <=. Equalities stay native and propagate from
// both sides, which tightens harder than a pair of inequalities.
struct Row {
  const LinearConstraint* c = nullptr;
  bool negated = false;
  bool equality = false;

  long long rhs() const { return negated ? -c->rhs : c->rhs; }
  long long coef(const LinTerm& t) const { return negated ? -t.coef : t.coef; }
};

struct Search {
  const FeasibilityModel& model;
  std::vector<Row> rows;
  long long nodes = 0;

  explicit Search(const FeasibilityModel& m) : model(m) {
    rows.reserve(m.constraints().size());
    for (const auto& c : m.constraints())
      rows.push_back({&c, c.op == RelOp::ge, c.op == RelOp::eq});
  }

  // Bounds tightening to fixpoint. Returns false on a proven conflict.
  bool propagate(std::vector<long long>& lo, std::vector<long long>& hi) const {
    for (int pass = 0; pass < 256; ++pass) {
      bool changed = false;
      for (const auto& r : rows) {
        const long long rhs = r.rhs();
        Wide min_act = 0, max_act = 0;
        for (const auto& t : r.c->terms) {
          const long long coef = r.coef(t);
          if (coef > 0) {
            min_act += static_cast<Wide>(coef) * lo[t.var];
            max_act += static_cast<Wide>(coef) * hi[t.var];
          } else {
            min_act += static_cast<Wide>(coef) * hi[t.var];
            max_act += static_cast<Wide>(coef) * lo[t.var];
          }
        }
        if (min_act > rhs) return false;
        if (r.equality && max_act < rhs) return false;
        for (const auto& t : r.c->terms) {
          const long long coef = r.coef(t);
          const Wide own_min = static_cast<Wide>(coef) * (coef > 0 ? lo[t.var] : hi[t.var]);
          const Wide own_max = static_cast<Wide>(coef) * (coef > 0 ? hi[t.var] : lo[t.var]);
          // coef * x <= rhs - (min_act - own_min)
          {
            const Wide slack = static_cast<Wide>(rhs) - (min_act - own_min);
            if (coef > 0) {
              const long long nb = floor_div(slack, coef);
              if (nb < hi[t.var]) { hi[t.var] = nb; changed = true; }
            } else {
              const long long nb = ceil_div(slack, coef);
              if (nb > lo[t.var]) { lo[t.var] = nb; changed = true; }
            }
            if (lo[t.var] > hi[t.var]) return false;
          }
          if (r.equality) {
            // coef * x >= rhs - (max_act - own_max)
            const Wide need = static_cast<Wide>(rhs) - (max_act - own_max);
            if (coef > 0) {
              const long long nb = ceil_div(need, coef);
              if (nb > lo[t.var]) { lo[t.var] = nb; changed = true; }
            } else {
              const long long nb = floor_div(need, coef);
              if (nb < hi[t.var]) { hi[t.var] = nb; changed = true; }
            }
            if (lo[t.var] > hi[t.var]) return false;
          }
        }
      }
      if (!changed) return true;
    }
    return true;
  }

  bool dfs(std::vector<long long> lo, std::vector<long long> hi, Assignment* out) {
    ++nodes;
    if (!propagate(lo, hi)) return false;
    // Fail-first: branch on the smallest unfixed domain, lower half first.
    int pick = -1;
    Wide best = 0;
    for (int v = 0; v < model.num_variables(); ++v) {
      const Wide width = static_cast<Wide>(hi[v]) - lo[v];
      if (width > 0 && (pick < 0 || width < best)) {
        pick = v;
        best = width;
      }
    }
    if (pick < 0) {
      if (!check(model, lo)) return false;  // all fixed; recheck exactly
      *out = lo;
      return true;
    }
    const long long mid = floor_div(static_cast<Wide>(lo[pick]) + hi[pick], 2);
    {
      auto nlo = lo;
      auto nhi = hi;
      nhi[pick] = mid;
      if (dfs(std::move(nlo), std::move(nhi), out)) return true;
    }
    lo[pick] = mid + 1;
    return dfs(std::move(lo), std::move(hi), out);
  }
};

}  // namespace

IlpOutcome PropagationSolver::solve(const FeasibilityModel& m) const {
  std::vector<long long> lo(m.num_variables()), hi(m.num_variables());
  for (int v = 0; v < m.num_variables(); ++v) {
    lo[v] = m.lower(v);
    hi[v] = m.upper(v);
  }
  Search s(m);
  IlpOutcome out;
  out.feasible = s.dfs(std::move(lo), std::move(hi), &out.values);
  out.nodes = s.nodes;
  if (!out.feasible) out.values.clear();
  return out;
}

IlpOutcome solve(const FeasibilityModel& m) { return PropagationSolver().solve(m); }

std::string dump_lp(const FeasibilityModel& m) {
  std::ostringstream os;
  os << "# votegraph feasibility model\n";
  for (int v = 0; v < m.num_variables(); ++v)
    os << "var " << m.names()[v] << " in [" << m.lower(v) << ", " << m.upper(v) << "]\n";
  for (const auto& c : m.constraints()) {
    os << "st";
    if (c.terms.empty()) os << " 0";
    for (const auto& t : c.terms) {
      os << ' ' << (t.coef < 0 ? "-" : "+") << (t.coef < 0 ? -t.coef : t.coef) << ' '
         << m.names()[t.var];
    }
    os << ' ' << (c.op == RelOp::le ? "<=" : c.op == RelOp::ge ? ">=" : "=") << ' ' << c.rhs
       << '\n';
  }
  return os.str();
}

}  // namespace votegraph::ilp
