#include "votegraph/reductions.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace votegraph::reductions {

void HittingSetInstance::validate() const {
  if (universe < 0 || k < 0) throw VoteError("hitting set: negative sizes");
  for (const auto& s : sets) {
    for (int u : s)
      if (u < 0 || u >= universe) throw VoteError("hitting set: element outside the universe");
    for (size_t i = 1; i < s.size(); ++i)
      if (s[i - 1] >= s[i]) throw VoteError("hitting set: sets must be sorted and duplicate-free");
  }
}

void PartitionInstance::validate() const {
  for (long long v : values)
    if (v < 1) throw VoteError("partition: values must be positive");
}

bool hitting_set_decide(const HittingSetInstance& h) {
  h.validate();
  if (h.sets.empty()) return true;
  const long long cap = std::min<long long>(h.k, h.universe);
  std::vector<int> pick;
  auto rec = [&](auto&& self, int start, long long left) -> bool {
    bool all_hit = true;
    for (const auto& s : h.sets) {
      bool hit = false;
      for (int u : s)
        if (std::find(pick.begin(), pick.end(), u) != pick.end()) hit = true;
      if (!hit) all_hit = false;
    }
    if (all_hit) return true;
    if (left == 0) return false;
    for (int u = start; u < h.universe; ++u) {
      pick.push_back(u);
      if (self(self, u + 1, left - 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  return rec(rec, 0, cap);
}

bool partition_decide(const PartitionInstance& p) {
  p.validate();
  const long long total = std::accumulate(p.values.begin(), p.values.end(), 0LL);
  if (total % 2 != 0) return false;
  const int n = static_cast<int>(p.values.size());
  for (long long mask = 0; mask < (1LL << n); ++mask) {
    long long sum = 0;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1) sum += p.values[i];
    if (2 * sum == total) return true;
  }
  return false;
}

AttackInstance hs_to_ccac(const HittingSetInstance& h) {
  h.validate();
  const int nsets = static_cast<int>(h.sets.size());
  const int j = 1 + nsets + h.universe;  // p, set candidates, element spoilers

  Wmg target(j);
  auto set_id = [&](int s) { return 1 + s; };
  auto elem_id = [&](int u) { return 1 + nsets + u; };
  auto put = [&](int a, int b) {
    target.at(a, b) = 2;
    target.at(b, a) = -2;
  };
  for (int s = 0; s < nsets; ++s) put(set_id(s), 0);
  for (int u = 0; u < h.universe; ++u) put(0, elem_id(u));
  for (int s = 0; s < nsets; ++s)
    for (int u : h.sets[s]) put(elem_id(u), set_id(s));

  AttackInstance inst;
  inst.rule = Rule::schulze();
  inst.goal = {GoalMode::constructive, WinnerModel::nonunique};
  inst.p = 0;
  inst.type = AttackType::control_add_candidates;
  inst.budget = h.k;
  inst.election = mcgarvey_synthesize(target);
  inst.election.candidates[0] = "p";
  for (int s = 0; s < nsets; ++s) {
    std::ostringstream name;
    name << "S" << s << "{";
    for (size_t i = 0; i < h.sets[s].size(); ++i) name << (i ? "," : "") << h.sets[s][i];
    name << "}";
    inst.election.candidates[set_id(s)] = name.str();
  }
  for (int u = 0; u < h.universe; ++u) {
    inst.election.candidates[elem_id(u)] = "u" + std::to_string(u);
    inst.spoilers.push_back(elem_id(u));
  }
  return inst;
}

AttackInstance partition_to_wcm(const PartitionInstance& p, int j) {
  p.validate();
  if (j < 5)
    throw VoteError("partition_to_wcm: fewer than five candidates is a polynomial-time regime");
  const long long big = std::accumulate(p.values.begin(), p.values.end(), 0LL);  // S

  // ids: p=0, a1=1, a2=2, b1=3, b2=4, extras 5..j-1
  Wmg target(j);
  auto put = [&](int a, int b, long long v) {
    target.at(a, b) = v;
    target.at(b, a) = -v;
  };
  put(1, 0, 6 * big - 4);
  put(2, 0, 6 * big - 4);
  put(3, 0, 6 * big + 2);
  put(4, 0, 6 * big + 2);
  put(3, 2, 18 * big + 4);
  put(4, 1, 18 * big + 4);
  put(3, 1, 6 * big - 4);
  put(4, 2, 6 * big - 4);
  for (int e = 5; e < j; ++e)
    for (int c = 0; c < 5; ++c) put(c, e, 18 * big + 4);

  AttackInstance inst;
  inst.rule = Rule::rp_default(j);
  inst.goal = {GoalMode::constructive, WinnerModel::nonunique};
  inst.p = 0;
  inst.type = AttackType::manipulation;
  McgarveyOptions opts;
  opts.weighted = true;
  inst.election = mcgarvey_synthesize(target, opts);
  inst.election.candidates = {"p", "a1", "a2", "b1", "b2"};
  for (int e = 5; e < j; ++e) inst.election.candidates.push_back("e" + std::to_string(e - 4));
  for (long long v : p.values) inst.manip_weights.push_back(6 * v);
  return inst;
}

namespace {

ReductionReportRow make_row(std::string name, bool src, const SolveResult& image) {
  ReductionReportRow row;
  row.instance = std::move(name);
  row.source_yes = src;
  row.image_yes = image.decision == Decision::yes;
  row.agree = image.decision != Decision::budget_exceeded && row.source_yes == row.image_yes;
  return row;
}

}  // namespace

ReductionReport verify_hs_battery(const std::vector<HittingSetInstance>& battery,
                                  const oracle::SearchBudget& budget) {
  ReductionReport rep;
  for (const auto& h : battery) {
    std::ostringstream name;
    name << "hs(u=" << h.universe << ",|F|=" << h.sets.size() << ",k=" << h.k << ",F=";
    for (const auto& s : h.sets) {
      name << "{";
      for (size_t i = 0; i < s.size(); ++i) name << (i ? "," : "") << s[i];
      name << "}";
    }
    name << ")";
    rep.rows.push_back(
        make_row(name.str(), hitting_set_decide(h), oracle::solve_brute(hs_to_ccac(h), budget)));
    if (!rep.rows.back().agree) ++rep.disagreements;
  }
  return rep;
}

ReductionReport verify_partition_battery(const std::vector<PartitionInstance>& battery, int j,
                                         const oracle::SearchBudget& budget) {
  ReductionReport rep;
  for (const auto& p : battery) {
    std::ostringstream name;
    name << "partition(";
    for (size_t i = 0; i < p.values.size(); ++i) name << (i ? "," : "") << p.values[i];
    name << ")";
    rep.rows.push_back(make_row(name.str(), partition_decide(p),
                                oracle::solve_brute(partition_to_wcm(p, j), budget)));
    if (!rep.rows.back().agree) ++rep.disagreements;
  }
  return rep;
}

}  // namespace votegraph::reductions
