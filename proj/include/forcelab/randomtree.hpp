#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "forcelab/common.hpp"
#include "forcelab/creature.hpp"

namespace forcelab::randomtree {

/// Clopen subset of Cantor space: a nonempty set of binary words of one length.
class RandomCondition {
 public:
  RandomCondition(unsigned depth, std::set<std::string> words);

  unsigned depth() const { return depth_; }
  const std::set<std::string>& words() const { return words_; }
  /// Longest common prefix of the words.
  std::string stem() const;
  /// Same set described by words of a larger length.
  RandomCondition refined_to(unsigned depth) const;

  bool operator==(const RandomCondition& o) const = default;

 private:
  unsigned depth_;
  std::set<std::string> words_;
};

RandomCondition full(unsigned depth);
Rational leb(const RandomCondition& c);
/// Measure of the cylinder above the stem, 2^-|stem|.
Rational stem_leb(const RandomCondition& c);
Rational loss_random(const RandomCondition& c);
std::optional<RandomCondition> intersect(const RandomCondition& a, const RandomCondition& b);

/// Kept creature nodes at a level, each of product-measure weight `nodeWeight`.
struct CreatureMeasureSet {
  unsigned depth = 0;
  std::vector<creature::Node> nodes;
  Rational nodeWeight;
  Rational measure;
};

CreatureMeasureSet from_creature(const creature::Condition& c, unsigned depth,
                                 std::size_t cap = 1u << 16);
/// Measure of the kept nodes at `depth` without listing them.
Rational creature_measure(const creature::Condition& c, unsigned depth);

/// A condition below both inputs grown from their deeper stem, if any.
std::optional<creature::Condition> common_extension(const creature::Condition& a,
                                                    const creature::Condition& b);

}  // namespace forcelab::randomtree
