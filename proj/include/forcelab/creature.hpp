#pragma once

// Creature spaces and condition trees.
//
// A condition is stored sparsely: its stem, an omitted-index set per level
// applied to every node of that level above the stem, and extra omitted sets
// at individual nodes. Kept successors of t are the indices below M̂(|t|)
// outside both. This lets flag-valid spaces with astronomically wide levels
// be handled exactly, while tiny spaces can still be listed node by node.

#include <boost/icl/interval_set.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "forcelab/common.hpp"

namespace forcelab::creature {

using ChildIndex = std::uint64_t;
using IndexSet = boost::icl::interval_set<ChildIndex>;
using Node = std::vector<ChildIndex>;

/// Half-open range [lo, hi) as an IndexSet.
IndexSet index_range(ChildIndex lo, ChildIndex hi);
IndexSet index_set(std::initializer_list<ChildIndex> elems);
Natural cardinality(const IndexSet& s);
/// Least index not in s.
ChildIndex least_outside(const IndexSet& s);

class CreatureSpace {
 public:
  CreatureSpace(std::vector<Natural> succCount, std::vector<Natural> base);

  unsigned height() const { return static_cast<unsigned>(succ_.size()); }
  const Natural& succCount(unsigned h) const { return succ_.at(h); }
  const Natural& base(unsigned h) const { return base_.at(h); }
  const std::vector<Natural>& succCounts() const { return succ_; }
  const std::vector<Natural>& bases() const { return base_; }

  /// a(h) > 2^h: removing one successor costs less than 1/h of norm.
  bool edValid(unsigned h) const;
  /// a(h) > j^h: j sets of norm >= x meet in a set of norm > x - 1/h.
  bool intersectValid(unsigned h, unsigned long j) const;
  /// a(h) > h^(2h): the weighted success set keeps norm > x - 1/h.
  bool fubiniValid(unsigned h) const;
  /// a(h) > h^2: norm >= 1 forces at least M(1 - 1/h^2) successors.
  bool countValid(unsigned h) const;

  /// Number of nodes of height `to` above a fixed node of height `from`.
  Natural level_size(unsigned from, unsigned to) const;
  /// Largest usable child index + 1 at level h (bounded by 2^64 - 1).
  ChildIndex index_limit(unsigned h) const;
  bool valid_node(const Node& n) const;

 private:
  std::vector<Natural> succ_;
  std::vector<Natural> base_;
};

using SpacePtr = std::shared_ptr<const CreatureSpace>;
SpacePtr make_space(std::vector<Natural> succCount, std::vector<Natural> base);

/// mu(n) >= p/q (or > when strict) for mu(n) = log_base(bigM / (bigM - n)).
bool norm_cmp(const Natural& bigM, const Natural& base, const Natural& n,
              const Rational& threshold, bool strict);
/// Least n in [0, bigM] with mu(n) >= threshold (or > when strict).
Natural least_count_with_norm(const Natural& bigM, const Natural& base,
                              const Rational& threshold, bool strict);

class Condition {
 public:
  using Omissions = std::map<Node, IndexSet>;

  static Condition full(SpacePtr space);
  /// Builds and canonicalizes; the stem slides down while it has one child.
  static Condition make(SpacePtr space, Node stem, std::map<unsigned, IndexSet> levelOmitted,
                        Omissions nodeOmitted);
  /// Explicit downward-closed node list (all heights), for small spaces.
  static Condition from_nodes(SpacePtr space, const std::vector<Node>& kept);

  const CreatureSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const Node& stem() const { return stem_; }
  unsigned stem_height() const { return static_cast<unsigned>(stem_.size()); }
  const std::map<unsigned, IndexSet>& level_omissions() const { return level_; }
  const Omissions& node_omissions() const { return nodes_; }

  bool contains(const Node& t) const;
  /// Omitted children of a kept node t above the stem (level and node parts).
  IndexSet omitted_at(const Node& t) const;
  Natural kept_successor_count(const Node& t) const;
  bool keeps_child(const Node& t, ChildIndex c) const;
  /// t lies on a path from the stem to a node with its own omissions.
  bool is_special(const Node& t) const;

  Natural count_at(unsigned h) const;
  /// Kept nodes of height h in lexicographic order; throws above cap.
  std::vector<Node> nodes_at(unsigned h, std::size_t cap = 1u << 20) const;
  /// Every kept node, sorted; throws above cap.
  std::vector<Node> all_nodes(std::size_t cap = 1u << 20) const;

  /// True when every kept node of *this is kept in p (this <= p).
  bool refines(const Condition& p) const;
  bool same_tree(const Condition& other) const { return refines(other) && other.refines(*this); }

 private:
  Condition() = default;
  void canonicalize();

  SpacePtr space_;
  Node stem_;
  std::map<unsigned, IndexSet> level_;
  Omissions nodes_;
  std::vector<Node> special_;  // sorted prefix closure of node-omission keys
};

/// A representative node standing for `multiplicity` nodes that all agree on
/// membership in every condition of the enumeration.
struct NodeClass {
  Node node;
  Natural multiplicity;
};

/// Partition of the height-h nodes of `base` into classes on which every
/// condition in `others` is constant. Throws enumeration-infeasible above cap.
std::vector<NodeClass> node_classes(const Condition& base,
                                    std::span<const Condition* const> others, unsigned h,
                                    std::size_t cap = 1u << 20);

bool is_condition(const Condition& c);
/// All norms at nodes from height `from` upward are >= threshold (> if strict).
bool norms_at_least(const Condition& c, const Rational& threshold, bool strict,
                    unsigned from = 0);
std::optional<Rational> loss(const Condition& c);

std::optional<Condition> common_refinement(std::span<const Condition> conds,
                                           const Node& witness);
/// [x] cap the conditions, pruned so that every node at or above the first
/// split after x meets 1 + 1/height-of-that-split; no 2h restriction.
std::optional<Condition> refine_at_node(std::span<const Condition* const> conds,
                                        const Node& x);

/// A condition below all inputs, grown from the least node they share at the
/// lowest height where intersecting at that node succeeds.
std::optional<Condition> linked_refinement(std::span<const Condition> conds);

Condition avoid_level(const Condition& c, unsigned h, ChildIndex value);
Rational relative_count(const Condition& c, unsigned h);

/// Children kept by a successor set, written as its omitted complement.
struct ChildSet {
  IndexSet omitted;
};

ChildSet weighted_success_set(const CreatureSpace& space, const Node& s,
                              std::span<const std::pair<ChildSet, Rational>> sets, unsigned h);

/// Nodes s of height h; predicate i is "keeps s_i and has stem height <= h".
std::vector<Node> linked_family(const CreatureSpace& space, unsigned h,
                                std::size_t cap = 1u << 16);
bool linked_member(const Condition& c, const Node& s);

}  // namespace forcelab::creature
