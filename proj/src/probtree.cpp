#include "forcelab/probtree.hpp"

#include <algorithm>
#include <numeric>

namespace forcelab::probtree {

namespace {

Natural nat(std::uint64_t v) { return Natural(static_cast<unsigned long>(v)); }

Natural floor_of(const Rational& q) {
  Natural f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f;
}

}  // namespace

Rational binom_cdf(long l, unsigned long n, const Rational& p) {
  require(p >= 0 && p <= 1, "probability must lie in [0, 1]");
  if (l < 0) return 0;
  const unsigned long top = std::min<unsigned long>(static_cast<unsigned long>(l), n);
  const Rational q = 1 - p;
  Rational sum = 0;
  Natural choose = 1;
  for (unsigned long i = 0; i <= top; ++i) {
    if (i > 0) choose = choose * (n - i + 1) / i;
    sum += Rational(choose) * forcelab::pow(p, i) * forcelab::pow(q, n - i);
  }
  return sum;
}

SuccessProbs success_probs(const Rational& loss, unsigned precisionBits) {
  require(loss > 0 && loss <= Rational(1, 2), "loss must lie in (0, 1/2]");
  const SqrtBracket rl = sqrt_bracket(loss, precisionBits);
  const SqrtBracket r2 = sqrt_bracket(Rational(2), precisionBits);
  return {1 - rl.lo, 1 - (1 + r2.hi) / 2 * loss};
}

std::uint64_t success_threshold(std::uint64_t n, const Rational& loss) {
  require(loss >= 0 && loss <= 1, "loss must lie in [0, 1]");
  // c >= n(1 - sqrt L)  <=>  (n - c)^2 <= n^2 L for c <= n.
  const Rational bound = Rational(nat(n) * nat(n)) * loss;
  std::uint64_t lo = 0, hi = n;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    const Natural gap = nat(n - mid);
    if (Rational(gap * gap) <= bound)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

std::size_t find_k(const famlimit::IntervalPartition& part, const std::vector<Rational>& losses,
                   unsigned precisionBits) {
  if (losses.empty()) return 0;
  const Rational target(1, 2 * static_cast<unsigned long>(losses.size()));
  std::vector<SuccessProbs> probs;
  for (const auto& l : losses) probs.push_back(success_probs(l, precisionBits));
  for (std::size_t k = 0; k < part.count(); ++k) {
    const std::uint64_t n = part.size(k);
    bool ok = true;
    for (const auto& sp : probs) {
      const Natural l = floor_of(Rational(nat(n)) * sp.pPrimeUpper);
      if (binom_cdf(l.get_si(), n, sp.pLower) >= target) {
        ok = false;
        break;
      }
    }
    if (ok) return k;
  }
  throw Error(Errc::prefix_exhausted, "no interval in the represented prefix qualifies");
}

ProbTree::ProbTree(std::size_t jobCount, std::vector<TreeLevel> levels)
    : jobs_(jobCount), levels_(std::move(levels)) {
  require(!levels_.empty() && levels_.front().nodes.size() == 1, "tree needs a single root");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const bool last = i + 1 == levels_.size();
    require(!levels_[i].job || *levels_[i].job < jobs_, "level job tag out of range");
    for (const auto& node : levels_[i].nodes) {
      require(!node.outcomes.empty(), "every node needs outcomes");
      Rational total = 0;
      for (const auto& o : node.outcomes) {
        require(o.prob >= 0, "outcome probabilities must be nonnegative");
        require(o.success.size() == jobs_, "success flags must cover every job");
        if (last)
          require(o.next == -1, "last-level outcomes have no successor node");
        else
          require(o.next >= 0 && static_cast<std::size_t>(o.next) < levels_[i + 1].nodes.size(),
                  "outcome points to a missing node");
        total += o.prob;
      }
      require(total == 1, "outcome probabilities must sum to 1", Errc::weight_sum);
    }
  }
}

BadMeasure bad_branch_measure(const ProbTree& tree, const std::vector<JobQuery>& jobs,
                              std::size_t stateCap) {
  require(jobs.size() == tree.job_count(), "one query per job");
  const auto& levels = tree.levels();
  std::vector<std::vector<std::size_t>> counted(levels.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    for (std::size_t lvl : jobs[j].levels) {
      require(lvl < levels.size(), "job level out of range");
      require(!levels[lvl].job || *levels[lvl].job == j, "level is tagged for another job");
      require(std::find(counted[lvl].begin(), counted[lvl].end(), j) == counted[lvl].end(),
              "a level may count at most once per job");
      counted[lvl].push_back(j);
    }
    require(jobs[j].threshold <= jobs[j].levels.size(), "threshold above the number of job levels");
  }
  // State: node on the current level and success counts capped at the thresholds.
  using State = std::pair<std::size_t, std::vector<std::uint64_t>>;
  std::map<State, Rational> cur{{State{0, std::vector<std::uint64_t>(jobs.size(), 0)}, 1}};
  std::map<std::vector<std::uint64_t>, Rational> finals;
  for (std::size_t lvl = 0; lvl < levels.size(); ++lvl) {
    std::map<State, Rational> next;
    for (const auto& [state, mass] : cur) {
      for (const auto& o : levels[lvl].nodes[state.first].outcomes) {
        if (o.prob == 0) continue;
        std::vector<std::uint64_t> c = state.second;
        for (std::size_t j : counted[lvl])
          if (o.success[j] && c[j] < jobs[j].threshold) ++c[j];
        const Rational m = mass * o.prob;
        if (o.next < 0)
          finals[c] += m;
        else
          next[State{static_cast<std::size_t>(o.next), std::move(c)}] += m;
      }
    }
    require(next.size() <= stateCap, "dynamic program exceeded its state cap",
            Errc::state_space_cap);
    cur = std::move(next);
  }
  BadMeasure out{std::vector<Rational>(jobs.size(), 0), 0};
  for (const auto& [c, m] : finals) {
    bool any = false;
    for (std::size_t j = 0; j < jobs.size(); ++j)
      if (c[j] < jobs[j].threshold) {
        out.perJob[j] += m;
        any = true;
      }
    if (any) out.anyJob += m;
  }
  return out;
}

std::vector<RandomOutcome> random_step(const std::vector<randomtree::RandomCondition>& conds,
                                       const Rational& lossStar, unsigned jStar,
                                       std::optional<std::uint64_t> roundingDenominator) {
  require(!conds.empty(), "random_step needs at least one condition");
  const std::string stem = conds.front().stem();
  unsigned depth = 0;
  for (const auto& c : conds) {
    require(c.stem() == stem, "conditions must share their stem");
    require(randomtree::loss_random(c) <= lossStar, "a condition's loss exceeds lossStar");
    depth = std::max(depth, c.depth());
  }
  std::vector<randomtree::RandomCondition> fine;
  for (const auto& c : conds) fine.push_back(c.refined_to(depth));

  // Words above the stem grouped by their membership signature.
  std::map<std::vector<bool>, std::set<std::string>> atoms;
  const unsigned free = depth - static_cast<unsigned>(stem.size());
  require(free < 24, "too many words to enumerate", Errc::enumeration_infeasible);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << free); ++bits) {
    std::string w = stem;
    for (unsigned i = free; i-- > 0;) w.push_back((bits >> i) & 1 ? '1' : '0');
    std::vector<bool> sig;
    for (const auto& c : fine) sig.push_back(c.words().count(w) > 0);
    atoms[sig].insert(w);
  }
  const Rational cylinder(nat(std::uint64_t{1} << free));
  std::vector<RandomOutcome> out;
  for (auto& [sig, words] : atoms) {
    randomtree::RandomCondition x(depth, std::move(words));
    Rational rel = Rational(nat(x.words().size())) / cylinder;
    out.push_back({rel, std::move(x), sig});
  }
  // Atoms in decreasing order of mass; ties keep signature order.
  std::stable_sort(out.begin(), out.end(),
                   [](const RandomOutcome& a, const RandomOutcome& b) { return a.prob > b.prob; });

  if (roundingDenominator) {
    const Natural den = nat(*roundingDenominator);
    require(den >= 1, "rounding denominator must be positive");
    std::vector<Rational> exact;
    Natural assigned = 0;
    std::vector<Natural> units;
    std::vector<Rational> rem;
    for (const auto& o : out) {
      exact.push_back(o.prob);
      const Rational scaled = o.prob * Rational(den);
      units.push_back(floor_of(scaled));
      rem.push_back(scaled - Rational(units.back()));
      assigned += units.back();
    }
    std::vector<std::size_t> order(out.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
    Natural missing = den - assigned;
    for (std::size_t i : order) {
      if (missing == 0) break;
      ++units[i];
      --missing;
    }
    const Rational budget = (sqrt_bracket(Rational(2), 64).lo - 1) / 2 * lossStar /
                            Rational(forcelab::pow(Natural(2), jStar));
    for (std::size_t i = 0; i < out.size(); ++i) {
      Rational y(units[i], den);
      y.canonicalize();
      require(abs(y - exact[i]) < budget, "rounding denominator too coarse for the error budget");
      out[i].prob = y;
    }
  }
  return out;
}

std::vector<CreatureOutcome> creature_step(const std::vector<creature::Condition>& conds,
                                           unsigned hHat, unsigned jStar) {
  require(!conds.empty(), "creature_step needs at least one condition");
  const auto& space = conds.front().space_ptr();
  const creature::Node stem = conds.front().stem();
  for (const auto& c : conds) require(c.stem() == stem, "conditions must share their stem");
  const unsigned H = space->height();
  require(hHat >= stem.size() && hHat <= H, "hHat must lie between the stem and the space height");
  const unsigned long many = std::max<unsigned long>(conds.size(), jStar);
  for (unsigned h = std::max(1u, hHat); h < H; ++h)
    require(space->intersectValid(h, many), "space cannot intersect that many conditions at height " +
                                                std::to_string(h), Errc::capacity);

  const creature::Condition base = creature::Condition::make(space, stem, {}, {});
  std::vector<const creature::Condition*> others;
  for (const auto& c : conds) others.push_back(&c);
  const Natural total = space->level_size(static_cast<unsigned>(stem.size()), hHat);
  std::vector<CreatureOutcome> out;
  for (auto& cls : creature::node_classes(base, others, hHat)) {
    std::vector<bool> success;
    std::vector<const creature::Condition*> hit;
    for (const auto& c : conds) {
      success.push_back(c.contains(cls.node));
      if (success.back()) hit.push_back(&c);
    }
    std::optional<creature::Condition> refined;
    if (hit.empty())
      refined = creature::Condition::make(space, cls.node, {}, {});
    else
      refined = creature::refine_at_node(hit, cls.node);
    require(refined.has_value(), "no condition below the inputs at a node", Errc::capacity);
    Rational p(cls.multiplicity, total);
    p.canonicalize();
    out.push_back({p, cls.multiplicity, cls.node, std::move(*refined), std::move(success)});
  }
  return out;
}

}  // namespace forcelab::probtree
