#pragma once

// Brute-force reference implementations used as test oracles. Trees are
// plain node sets on tiny spaces; nothing here touches the sparse condition
// representation except to convert to and from it.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "forcelab/common.hpp"
#include "forcelab/creature.hpp"

namespace oracle {

using forcelab::Natural;
using forcelab::Rational;
using Node = forcelab::creature::Node;
using Nodes = std::set<Node>;

/// Successor counts and bases of a tiny space as plain integers.
struct Tiny {
  std::vector<unsigned long> succ;
  std::vector<unsigned long> base;
  unsigned height() const { return static_cast<unsigned>(succ.size()); }
  forcelab::creature::SpacePtr space() const;
};

/// mu = log_a(M / (M - n)) >= p/q, decided as (M/(M-n))^q >= a^p over the rationals.
bool norm_at_least(unsigned long M, unsigned long a, unsigned long n, const Rational& x, bool strict);

/// Kept children of t in an explicit tree.
std::vector<unsigned long> children(const Nodes& tree, const Node& t);

/// Least node with two or more children, else the deepest node.
Node stem(const Tiny& sp, const Nodes& tree);

bool is_condition(const Tiny& sp, const Nodes& tree);
std::optional<Rational> loss(const Tiny& sp, const Nodes& tree);
Rational relative_count(const Tiny& sp, const Nodes& tree, unsigned h);

/// Every explicit tree of full height whose part below `stem` is the single
/// path to it and which has a nonempty successor set at every node above.
void for_each_tree(const Tiny& sp, const Node& stem, const std::function<void(const Nodes&)>& visit);

/// All nodes of the full tree at height h.
std::vector<Node> level(const Tiny& sp, unsigned h);

bool subset(const Nodes& a, const Nodes& b);

Nodes explicit_nodes(const forcelab::creature::Condition& c);

}  // namespace oracle
