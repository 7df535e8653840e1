#pragma once

// Seeded property suites over random instances: the counting lemma items,
// the facts on loss, the measure bound and linkedness. Each run is a pure
// function of (trials, seed).

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "forcelab/common.hpp"
#include "forcelab/creature.hpp"

namespace forcelab::suites {

using Rng = std::mt19937_64;

struct SuiteResult {
  std::string name;
  std::uint64_t trials = 0;
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  /// First few violations, human readable.
  std::vector<std::string> examples;

  void fail(std::string what);
};

SuiteResult counting_a(std::uint64_t trials, std::uint64_t seed);
SuiteResult counting_b(std::uint64_t trials, std::uint64_t seed);
SuiteResult counting_c(std::uint64_t trials, std::uint64_t seed);
SuiteResult counting_d(std::uint64_t trials, std::uint64_t seed);

/// Removing one element when a(h) <= 2^h: the drop can reach 1/h exactly.
struct BoundaryExample {
  Natural bigM, base;
  unsigned h = 0;
  Natural n;          // size before the removal
  Rational normBefore, normAfter;
  bool dropBelowOneOverH = false;
};
/// The a = 4, h = 2 case: mu(15) = 2 and mu(14) = 3/2 on M = 16.
BoundaryExample counting_b_boundary();

SuiteResult loss_facts(std::uint64_t trials, std::uint64_t seed);
SuiteResult measure_bound(std::uint64_t trials, std::uint64_t seed);
SuiteResult linkedness(std::uint64_t trials, std::uint64_t seed);

/// Space of height H with a(h) the least power of two above h^(2h) and
/// M(h) = a(h)^2, so every level is fubini-, count- and edValid.
creature::SpacePtr standard_space(unsigned height);

/// Random condition above `stem` whose norms all meet 1 + 1/m. Omitted sets
/// reach the allowed maximum on some levels so that the bounds are tight.
creature::Condition random_condition(Rng& rng, const creature::SpacePtr& space,
                                     const creature::Node& stem, unsigned m);

/// Random node of height h inside the usable index range.
creature::Node random_node(Rng& rng, const creature::CreatureSpace& space, unsigned h);

Natural random_natural(Rng& rng, unsigned bits);

}  // namespace forcelab::suites
