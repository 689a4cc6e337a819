#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "votegraph/attacks.hpp"
#include "votegraph/frameworks.hpp"
#include "votegraph/ilp.hpp"
#include "votegraph/oracle.hpp"

namespace votegraph::fpt {

struct FptOptions {
  enum class Encoding { reduced, faithful };
  /// Bribery encoding: `faithful` carries the full (j!)^2 transfer matrix per
  /// voter class; `reduced` keeps per-type departures and arrivals balanced
  /// per class, which decides identically and propagates much better.
  Encoding encoding = Encoding::reduced;
  int schulze_cap = 3;  // framework loops refuse larger candidate counts
  int rp_cap = 4;
  int jobs = 1;
  const ilp::FeasibilityBackend* backend = nullptr;  // null: built-in solver
};

/// Attack types the framework loops cover. Candidate control is in scope for
/// solve_fpt but handled by exhaustive search, which at a fixed candidate
/// count is itself the fixed-parameter algorithm.
bool uses_framework_loop(AttackType t);

bool within_caps(const AttackInstance& inst, const FptOptions& opts);

/// Loop over winner-set certification frameworks with the sought outcome,
/// build the attack-specific feasibility model for each, and decode the
/// first satisfiable one into a verified witness. Deterministic: the
/// enumeration-order-minimal witness is returned regardless of `jobs`.
SolveResult solve_fpt(const AttackInstance& inst, const FptOptions& opts = {});

/// fpt when within caps, otherwise brute force.
SolveResult solve_auto(const AttackInstance& inst, const FptOptions& opts = {},
                       const oracle::SearchBudget& budget = {});

// ---- model-building pieces, exposed for direct testing ----

struct LinExpr {
  long long constant = 0;
  std::vector<ilp::LinTerm> terms;
};

/// Post-action WMG edge expressions: delta(a,b) is a linear expression over
/// the model variables equal to D(a,b) after the attack is carried out.
class DeltaTable {
 public:
  explicit DeltaTable(int j) : j_(j), cells_(static_cast<size_t>(j) * j) {}
  int j() const { return j_; }
  LinExpr& at(int a, int b) { return cells_[static_cast<size_t>(a) * j_ + b]; }
  const LinExpr& at(int a, int b) const { return cells_[static_cast<size_t>(a) * j_ + b]; }

 private:
  int j_;
  std::vector<LinExpr> cells_;
};

/// Vote types: every linear order over j candidates in lexicographic order.
struct VoteTypeTable {
  int j = 0;
  std::vector<std::vector<int>> orders;
  explicit VoteTypeTable(int j);
  int count() const { return static_cast<int>(orders.size()); }
  int type_of(const std::vector<int>& order) const;
  bool prefers(int type, int a, int b) const;  // type ranks a above b
};

class ModelBuilder {
 public:
  ilp::FeasibilityModel model;

  /// lhs (op) rhs + shift, merged into one linear row.
  void require(const LinExpr& lhs, ilp::RelOp op, const LinExpr& rhs, long long shift = 0);

  /// delta(a,b) >= delta(c,d), strictly when asked: the comparison bit both
  /// framework kinds are built from.
  void emit_bigger(const DeltaTable& t, int a, int b, int c, int d, bool strict);

  /// Framework constraints: a WMG satisfies them exactly when the framework
  /// realized by that WMG is f.
  void emit_framework(const DeltaTable& t, const frameworks::Swcf& f);
  void emit_framework(const DeltaTable& t, const frameworks::Rpwcf& f);
};

/// Adds +- coef * var to every edge expression the given vote type moves:
/// delta(a,b) += coef*var when the type prefers a to b, -= otherwise.
void add_type_var(DeltaTable& dt, const VoteTypeTable& vt, int type, int var, long long coef);

}  // namespace votegraph::fpt
