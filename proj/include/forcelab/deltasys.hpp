#pragma once

// Finite Δ-systems of labeled supports, their countable (increasing)
// subsystems, restriction below a heart element, and guardrail covers.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "forcelab/common.hpp"

namespace forcelab::deltasys {

using Coord = std::uint64_t;

enum class Tag { S0, S3, S4 };
std::string_view tag_name(Tag t);
Tag parse_tag(std::string_view s);

struct Label {
  Tag tag = Tag::S0;
  std::string token;  // index token for S0, stem label otherwise
  Rational loss;      // 0 for S0

  bool operator==(const Label&) const = default;
};

struct LabeledSupport {
  std::vector<Coord> coords;  // strictly increasing
  std::vector<Label> labels;  // one per coord

  void validate() const;
  bool operator==(const LabeledSupport&) const = default;
};

struct DeltaSystem {
  std::vector<LabeledSupport> members;
  std::set<Coord> heart;
  std::size_t size = 0;  // common support size
  std::set<std::size_t> heartPositions;
};

/// Reasons the system breaks the definition; empty when valid.
std::vector<std::string> violations(const DeltaSystem& ds);
/// Additionally checks that every non-heart position increases along members.
std::vector<std::string> countable_violations(const DeltaSystem& ds);

/// Builds the system (heart and positions) from members; no validation.
DeltaSystem make_system(std::vector<LabeledSupport> members);

std::optional<DeltaSystem> extract_delta(const std::vector<LabeledSupport>& family,
                                         std::size_t minSize,
                                         std::uint64_t searchBudget = 2'000'000);

DeltaSystem countable_subsystem(const DeltaSystem& ds);

/// beta must be a heart element, max(heart)+1 (0 for an empty heart), or
/// above every coordinate.
DeltaSystem restrict(const DeltaSystem& ds, Coord beta);

using Guardrail = std::map<Coord, std::string>;

/// Total maps on the union of the input domains; every input is extended by
/// at least one of them.
std::vector<Guardrail> guardrail_cover(const std::vector<Guardrail>& partials,
                                       const std::map<Coord, std::vector<std::string>>& labelUniverse);

bool extends(const Guardrail& total, const Guardrail& partial);

}  // namespace forcelab::deltasys
