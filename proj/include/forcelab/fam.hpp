#pragma once

// Finite traces of finitely additive measures: atom weights on a window
// [0, W) for the algebra generated by finitely many named sets.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "forcelab/common.hpp"

namespace forcelab::fam {

using Point = std::uint64_t;
using PointSet = std::set<Point>;

struct AtomWeight {
  PointSet atom;
  Rational weight;
};

class MeasureAssignment {
 public:
  /// Validates that the atoms are exactly those generated by `sets` on the
  /// window and that the weights are nonnegative and sum to 1.
  MeasureAssignment(Point window, std::map<std::string, PointSet> sets,
                    std::vector<AtomWeight> atoms);

  Point window() const { return window_; }
  const std::map<std::string, PointSet>& sets() const { return sets_; }
  const std::vector<AtomWeight>& atoms() const { return atoms_; }

  /// Sum of weights of atoms contained in s; s must be a union of atoms.
  Rational xi(const PointSet& s) const;
  Rational xi(const std::string& name) const { return xi(sets_.at(name)); }
  bool is_union_of_atoms(const PointSet& s) const;

 private:
  Point window_;
  std::map<std::string, PointSet> sets_;
  std::vector<AtomWeight> atoms_;  // sorted by least element
};

struct SupportWitness {
  PointSet u;
  std::map<std::string, Rational> perSetError;
};

/// Frequency |s ∩ u| / |u|.
Rational frequency(const PointSet& s, const PointSet& u);

/// Rounds atom weights to multiples of 1/(L·2^N) and takes the least points
/// above kStar in each atom. Every named set's frequency is within eps.
SupportWitness approximate_support(const MeasureAssignment& m, const Rational& eps,
                                   Point kStar);

Natural size_bound(unsigned n, const Rational& eps);

struct IntersectionReport {
  bool holds = true;
  /// First failure in (subfamily size, lexicographic) order.
  std::vector<std::size_t> subfamily;
  PointSet atom;
};

IntersectionReport check_intersection_hypothesis(const MeasureAssignment& m,
                                                 const std::vector<PointSet>& candidates);

struct AverageSequence {
  std::vector<Rational> a;  // values on the window
  Rational b;
};

/// First u ⊆ (kStar, W) in (size, lexicographic) order with |u| <= sizeCap
/// whose partition frequencies lie within eps of ξ and whose averages are
/// at least b - eps. Throws enumeration-infeasible above `budget` candidates.
std::optional<SupportWitness> check_average_hypothesis(
    const MeasureAssignment& m, const std::vector<PointSet>& partition,
    const std::vector<AverageSequence>& seqs, const Rational& eps, Point kStar,
    std::size_t sizeCap, std::uint64_t budget = 50'000'000);

}  // namespace forcelab::fam
