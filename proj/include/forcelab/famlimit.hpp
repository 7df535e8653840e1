#pragma once

// Limits of (stem, loss)-sequences of creature conditions along an interval
// partition: per-interval majority conditions q_k, their weighted limit, and
// the finite witness search behind strong limits.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "forcelab/common.hpp"
#include "forcelab/creature.hpp"

namespace forcelab::famlimit {

using creature::Condition;
using creature::Node;

Rational zeta_tilde(unsigned hStar, unsigned h);
/// 1 - ((hStar-1)/hStar)·(h/(h-1)), or 0 when h = hStar.
Rational zeta_tilde_closed(unsigned hStar, unsigned h);

class IntervalPartition {
 public:
  explicit IntervalPartition(std::vector<std::uint64_t> boundaries);
  /// Consecutive intervals of the given sizes starting at 0.
  static IntervalPartition from_sizes(const std::vector<std::uint64_t>& sizes);

  std::size_t count() const { return bounds_.size() - 1; }
  std::uint64_t lo(std::size_t k) const { return bounds_.at(k); }
  std::uint64_t hi(std::size_t k) const { return bounds_.at(k + 1); }
  std::uint64_t size(std::size_t k) const { return hi(k) - lo(k); }
  const std::vector<std::uint64_t>& boundaries() const { return bounds_; }

 private:
  std::vector<std::uint64_t> bounds_;
};

/// Members p_ℓ for ℓ = offset, offset+1, ... sharing one stem and one loss.
struct ConditionFamily {
  std::vector<Condition> members;
  Node stemStar;
  Rational lossStar;
  std::uint64_t offset = 0;

  /// Checks every member against (stemStar, lossStar).
  void validate() const;
  const Condition& member(std::uint64_t ell) const;
};

class WeightVector {
 public:
  explicit WeightVector(std::map<std::uint64_t, Rational> weights);
  const std::map<std::uint64_t, Rational>& weights() const { return w_; }
  Rational weight(std::uint64_t k) const;

 private:
  std::map<std::uint64_t, Rational> w_;
};

Condition build_qk(const ConditionFamily& fam, const IntervalPartition& part, std::size_t k);

std::uint64_t branch_hit_count(const Node& x, const ConditionFamily& fam,
                               const IntervalPartition& part, std::size_t k);
/// Same count with a precomputed q_k.
std::uint64_t branch_hit_count(const Node& x, const ConditionFamily& fam,
                               const IntervalPartition& part, std::size_t k, const Condition& qk);

Condition weighted_limit(std::span<const std::pair<Condition, Rational>> qks);
/// Total weight of the q_k containing s.
Rational limit_weight(std::span<const std::pair<Condition, Rational>> qks, const Node& s);

/// Every node of height h >= stem has norm > 1 + loss - slack/h (>= when !strict).
bool norms_above_bound(const Condition& c, const Rational& loss, unsigned slack, bool strict);

bool a_qbar_contains(std::size_t k, const Node& x, const ConditionFamily& fam,
                     const IntervalPartition& part);

struct Block {
  std::set<std::uint64_t> ks;
  Rational weight;
};

struct StrongLimitWitness {
  std::set<std::uint64_t> u;
  Condition qPrime;
  Node s;
  /// Per family: |Z_s ∩ u| / |u|.
  std::vector<Rational> zFrequency;
  /// Per family: (1/|u|) Σ_{k∈u} |{ℓ ∈ I_k : q' <= p_ℓ}| / |I_k|.
  std::vector<Rational> average;
  bool blockBullet = false;
  bool averageBullet = false;
};

/// Searches u above kStar with |u| <= sizeCap matching the block weights
/// within eps and hitting each Z_s often; then refines q along u and
/// finitizes to a single branch. Absent when no u exists.
std::optional<StrongLimitWitness> strong_limit_witness(
    const std::vector<ConditionFamily>& families, const std::vector<Condition>& limits,
    const Condition& q, const IntervalPartition& part, const std::vector<Block>& blocks,
    const Rational& eps, std::uint64_t kStar, std::size_t sizeCap);

}  // namespace forcelab::famlimit
