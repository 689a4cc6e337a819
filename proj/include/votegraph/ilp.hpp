#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace votegraph::ilp {

enum class RelOp { le, ge, eq };

struct LinTerm {
  int var = 0;
  long long coef = 0;
};

struct LinearConstraint {
  std::vector<LinTerm> terms;  // at most one term per variable
  RelOp op = RelOp::le;
  long long rhs = 0;
};

/// Integer variables with finite box bounds plus linear constraints, asked
/// only for feasibility. Construction rejects unbounded or inverted boxes
/// and constraints over undeclared variables.
class FeasibilityModel {
 public:
  int add_variable(const std::string& name, long long lo, long long hi);
  void add_constraint(std::vector<LinTerm> terms, RelOp op, long long rhs);

  int num_variables() const { return static_cast<int>(lo_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  long long lower(int v) const { return lo_[v]; }
  long long upper(int v) const { return hi_[v]; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }

  /// Constraints append-only; a mark and rollback let a caller reuse one
  /// model skeleton across many constraint suffixes.
  size_t constraint_mark() const { return constraints_.size(); }
  void rollback_constraints(size_t mark) { constraints_.resize(mark); }

 private:
  std::vector<std::string> names_;
  std::vector<long long> lo_, hi_;
  std::vector<LinearConstraint> constraints_;
};

using Assignment = std::vector<long long>;  // indexed like the model's variables

struct IlpOutcome {
  bool feasible = false;
  Assignment values;    // verified against every constraint before return
  long long nodes = 0;  // search nodes visited
};

/// Backend contract: anything that maps a model to Feasible/Infeasible may
/// stand in for the built-in solver.
class FeasibilityBackend {
 public:
  virtual ~FeasibilityBackend() = default;
  virtual IlpOutcome solve(const FeasibilityModel& m) const = 0;
};

/// Built-in solver: depth-first search with interval propagation after every
/// branching step and fail-first (smallest current domain) variable order.
/// Complete on the finite boxes the models here always have.
class PropagationSolver final : public FeasibilityBackend {
 public:
  IlpOutcome solve(const FeasibilityModel& m) const override;
};

IlpOutcome solve(const FeasibilityModel& m);
bool check(const FeasibilityModel& m, const Assignment& a);

/// Plain-text model dump for external solvers; grammar in the README.
std::string dump_lp(const FeasibilityModel& m);

}  // namespace votegraph::ilp
