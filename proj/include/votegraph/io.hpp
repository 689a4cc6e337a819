#pragma once

#include <string>
#include <utility>
#include <vector>

#include "votegraph/attacks.hpp"

namespace votegraph::io {

struct ParseError : VoteError {
  using VoteError::VoteError;
};

/// Election file: {"candidates":[names],"ballots":[{"order":[ids],"weight":w,
/// "price":p,"count":c}]}; weight/price/count omitted when 1. WMG file:
/// {"candidates":[names],"d":[[...]]}. Writes are byte-deterministic: sorted
/// keys, integers only.
std::string election_to_json(const Election& e);
Election election_from_json(const std::string& text);

struct NamedWmg {
  std::vector<std::string> candidates;
  Wmg wmg;
};

std::string wmg_to_json(const NamedWmg& w);
NamedWmg wmg_from_json(const std::string& text);

std::string tiebreak_to_json(const TieBreak& t);
TieBreak tiebreak_from_json(const std::string& text, int j);

std::string attack_to_json(const AttackInstance& inst);
AttackInstance attack_from_json(const std::string& text);

std::string witness_to_json(const Witness& w);
Witness witness_from_json(const std::string& text);

std::string attack_type_tag(AttackType t);
AttackType attack_type_from_tag(const std::string& tag);

/// Stable digest of an instance: FNV-1a over the canonical JSON.
std::string instance_digest(const AttackInstance& inst);

struct RunReport {
  std::string instance_digest;
  std::string solver;
  Decision decision = Decision::no;
  std::optional<Witness> witness;
  double wall_ms = 0;
  SolveStats stats;
};

/// One line of machine output (no trailing newline).
std::string report_to_json(const RunReport& r);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace votegraph::io
