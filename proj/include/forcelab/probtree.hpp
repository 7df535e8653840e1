#pragma once

// Binomial tails and the finite probability tree used to pick a good branch:
// step kernels for random and creature conditions, and an exact dynamic
// program for the measure of bad branches.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "forcelab/common.hpp"
#include "forcelab/creature.hpp"
#include "forcelab/famlimit.hpp"
#include "forcelab/randomtree.hpp"

namespace forcelab::probtree {

/// P(at most l successes in n trials with success probability p), exactly.
Rational binom_cdf(long l, unsigned long n, const Rational& p);

struct SuccessProbs {
  Rational pPrimeUpper;  // >= 1 - sqrt(loss)
  Rational pLower;       // <= 1 - (1 + sqrt 2)/2 · loss
};
SuccessProbs success_probs(const Rational& loss, unsigned precisionBits);

/// Least c with c >= n·(1 - sqrt(loss)), decided by squaring.
std::uint64_t success_threshold(std::uint64_t n, const Rational& loss);

/// Least k with F(floor(|I_k|·p'_j); |I_k|, p_j) < 1/(2 j*) for every job.
std::size_t find_k(const famlimit::IntervalPartition& part, const std::vector<Rational>& losses,
                   unsigned precisionBits = 64);

struct Outcome {
  Rational prob;
  std::vector<bool> success;  // per job
  std::int64_t next = -1;     // node index on the next level; -1 at the last level
};

struct TreeNode {
  std::vector<Outcome> outcomes;
};

struct TreeLevel {
  std::optional<std::size_t> job;
  std::vector<TreeNode> nodes;
};

/// Level i holds the nodes of height i; the root is node 0 of level 0.
class ProbTree {
 public:
  ProbTree(std::size_t jobCount, std::vector<TreeLevel> levels);
  std::size_t job_count() const { return jobs_; }
  const std::vector<TreeLevel>& levels() const { return levels_; }

 private:
  std::size_t jobs_;
  std::vector<TreeLevel> levels_;
};

struct JobQuery {
  std::vector<std::size_t> levels;  // levels whose outcomes count for the job
  std::uint64_t threshold = 0;      // bad means fewer successes than this
};

struct BadMeasure {
  std::vector<Rational> perJob;
  Rational anyJob;
};

BadMeasure bad_branch_measure(const ProbTree& tree, const std::vector<JobQuery>& jobs,
                              std::size_t stateCap = 1u << 22);

struct RandomOutcome {
  Rational prob;
  randomtree::RandomCondition refined;
  std::vector<bool> success;
};

/// Atoms of the algebra generated by the inputs inside their common stem,
/// with relative measure (optionally rounded to multiples of 1/denominator).
std::vector<RandomOutcome> random_step(const std::vector<randomtree::RandomCondition>& conds,
                                       const Rational& lossStar, unsigned jStar,
                                       std::optional<std::uint64_t> roundingDenominator = {});

struct CreatureOutcome {
  Rational prob;             // total for the class
  Natural multiplicity;      // nodes of height hHat in the class
  creature::Node node;       // representative
  creature::Condition refined;
  std::vector<bool> success;
};

/// Uniform choice of a node of height hHat above the shared stem; the refined
/// condition lies below every input containing it.
std::vector<CreatureOutcome> creature_step(const std::vector<creature::Condition>& conds,
                                           unsigned hHat, unsigned jStar);

}  // namespace forcelab::probtree
