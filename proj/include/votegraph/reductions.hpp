#pragma once

#include <string>
#include <vector>

#include "votegraph/attacks.hpp"
#include "votegraph/oracle.hpp"

namespace votegraph::reductions {

struct HittingSetInstance {
  int universe = 0;                     // elements 0..universe-1
  std::vector<std::vector<int>> sets;   // the family F
  long long k = 0;

  void validate() const;
};

struct PartitionInstance {
  std::vector<long long> values;  // positive integers

  void validate() const;
};

/// Brute-force decisions of the source problems; the ground truth the
/// reduction batteries compare against.
bool hitting_set_decide(const HittingSetInstance& h);
bool partition_decide(const PartitionInstance& p);

/// Hitting set -> Schulze constructive control by adding candidates
/// (nonunique winner). Roster: p, one candidate per set of F, one spoiler
/// per universe element. Margins: every set-candidate beats p by 2, p beats
/// every element by 2, every element beats the sets containing it by 2,
/// everything else ties; ballots realize that via canceling vote pairs. The
/// adding bound carries over unchanged.
AttackInstance hs_to_ccac(const HittingSetInstance& h);

/// Partition -> ranked-pairs weighted constructive coalitional manipulation
/// on j >= 5 candidates (p, a1, a2, b1, b2, extras). Manipulator weights are
/// six times the input values; the nonmanipulator margins put p within reach
/// exactly when the values split evenly. Throws on j < 5.
AttackInstance partition_to_wcm(const PartitionInstance& p, int j = 5);

struct ReductionReportRow {
  std::string instance;
  bool source_yes = false;
  bool image_yes = false;
  bool agree = false;
};

struct ReductionReport {
  std::vector<ReductionReportRow> rows;
  int disagreements = 0;
};

ReductionReport verify_hs_battery(const std::vector<HittingSetInstance>& battery,
                                  const oracle::SearchBudget& budget = {});
ReductionReport verify_partition_battery(const std::vector<PartitionInstance>& battery, int j = 5,
                                         const oracle::SearchBudget& budget = {});

}  // namespace votegraph::reductions
