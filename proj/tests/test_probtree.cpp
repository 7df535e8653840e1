#include <doctest.h>

#include <functional>
#include <random>

#include "forcelab/probtree.hpp"
#include "forcelab/suites.hpp"

using namespace forcelab;
using namespace forcelab::probtree;
using randomtree::RandomCondition;

namespace {

// n single-node levels; each succeeds for job 0 with probability p.
ProbTree homogeneous(unsigned n, const Rational& p) {
  std::vector<TreeLevel> levels;
  for (unsigned i = 0; i < n; ++i) {
    const std::int64_t next = i + 1 < n ? 0 : -1;
    TreeNode node{{{p, {true}, next}, {1 - p, {false}, next}}};
    levels.push_back({0, {node}});
  }
  return ProbTree(1, std::move(levels));
}

// Full binary-outcome tree: node i of level d has children 2i, 2i+1. Success
// probability per node is drawn from [pMin, 1] in steps of 1/den.
ProbTree random_tree(std::mt19937_64& rng, unsigned depth, std::size_t jobs, const Rational& pMin,
                     unsigned den) {
  std::vector<TreeLevel> levels;
  std::size_t width = 1;
  for (unsigned d = 0; d < depth; ++d) {
    TreeLevel lvl;
    lvl.job = d % jobs;
    for (std::size_t i = 0; i < width; ++i) {
      Rational p = pMin + (1 - pMin) * Rational(rng() % (den + 1), den);
      p.canonicalize();
      std::vector<bool> yes(jobs, false), no(jobs, false);
      yes[d % jobs] = true;
      const std::int64_t a = d + 1 < depth ? static_cast<std::int64_t>(2 * i) : -1;
      const std::int64_t b = d + 1 < depth ? static_cast<std::int64_t>(2 * i + 1) : -1;
      lvl.nodes.push_back(TreeNode{{{p, yes, a}, {1 - p, no, b}}});
    }
    levels.push_back(std::move(lvl));
    width *= 2;
  }
  return ProbTree(jobs, std::move(levels));
}

// Walks every branch explicitly.
BadMeasure enumerate_bad(const ProbTree& t, const std::vector<JobQuery>& jobs) {
  BadMeasure out{std::vector<Rational>(jobs.size(), 0), 0};
  std::vector<std::uint64_t> count(jobs.size(), 0);
  std::function<void(std::size_t, std::size_t, Rational)> walk = [&](std::size_t lvl, std::size_t node,
                                                                    Rational mass) {
    for (const auto& o : t.levels()[lvl].nodes[node].outcomes) {
      auto saved = count;
      for (std::size_t j = 0; j < jobs.size(); ++j)
        for (std::size_t l : jobs[j].levels)
          if (l == lvl && o.success[j]) ++count[j];
      const Rational m = mass * o.prob;
      if (o.next < 0) {
        bool any = false;
        for (std::size_t j = 0; j < jobs.size(); ++j)
          if (count[j] < jobs[j].threshold) {
            out.perJob[j] += m;
            any = true;
          }
        if (any) out.anyJob += m;
      } else {
        walk(lvl + 1, static_cast<std::size_t>(o.next), m);
      }
      count = saved;
    }
  };
  walk(0, 0, 1);
  return out;
}

std::vector<std::size_t> levels_of(std::size_t job, std::size_t jobs, unsigned depth) {
  std::vector<std::size_t> out;
  for (std::size_t d = job; d < depth; d += jobs) out.push_back(d);
  return out;
}

}  // namespace

TEST_SUITE("probtree") {

TEST_CASE("binom_cdf examples") {
  CHECK(binom_cdf(1, 2, Rational(1, 2)) == Rational(3, 4));
  CHECK(binom_cdf(-1, 5, Rational(1, 3)) == 0);
  for (unsigned long n = 0; n <= 8; ++n)
    for (Rational p : {Rational(0), Rational(1, 3), Rational(5, 7), Rational(1)}) {
      CHECK(binom_cdf(static_cast<long>(n), n, p) == 1);
      CHECK(binom_cdf(0, n, p) == forcelab::pow(Rational(1 - p), n));
      for (long l = 0; l < static_cast<long>(n); ++l) CHECK(binom_cdf(l, n, p) <= binom_cdf(l + 1, n, p));
    }
  CHECK_THROWS(binom_cdf(1, 2, Rational(3, 2)));
}

TEST_CASE("success_probs") {
  auto q = success_probs(Rational(1, 4), 64);
  CHECK(q.pPrimeUpper == Rational(1, 2));
  CHECK(q.pLower > Rational(6982, 10000));
  CHECK(q.pLower < Rational(6983, 10000));
  // pLower <= 1 - (1 + sqrt 2)/8 iff (7 - 8 pLower)^2 >= 2
  const Rational g = 7 - 8 * q.pLower;
  CHECK(g * g >= 2);
  auto tiny = success_probs(Rational(1, 1 << 20), 64);
  CHECK(tiny.pPrimeUpper > Rational(998, 1000));
  CHECK(tiny.pLower > Rational(999, 1000));
  // pPrimeUpper >= 1 - sqrt(loss): (1 - pPrimeUpper)^2 <= loss
  for (Rational l : {Rational(1, 2), Rational(1, 3), Rational(2, 7)}) {
    auto s = success_probs(l, 80);
    CHECK((1 - s.pPrimeUpper) * (1 - s.pPrimeUpper) <= l);
  }
  CHECK_THROWS(success_probs(0, 64));
  CHECK_THROWS(success_probs(Rational(3, 4), 64));
}

TEST_CASE("success_threshold decides the square root by squaring") {
  CHECK(success_threshold(4, Rational(1, 4)) == 2);
  CHECK(success_threshold(10, 0) == 10);
  CHECK(success_threshold(10, 1) == 0);
  for (std::uint64_t n = 1; n < 30; ++n)
    for (Rational l : {Rational(1, 2), Rational(1, 9), Rational(1, 7)}) {
      const std::uint64_t c = success_threshold(n, l);
      auto ok = [&](std::uint64_t x) {
        const Rational gap(static_cast<unsigned long>(n - x));
        return gap * gap <= Rational(static_cast<unsigned long>(n * n)) * l;
      };
      CHECK(ok(c));
      if (c > 0) CHECK_FALSE(ok(c - 1));
    }
}

TEST_CASE("find_k examples") {
  std::vector<std::uint64_t> sizes;
  for (std::uint64_t k = 0; k < 10; ++k) sizes.push_back(k + 1);
  auto part = famlimit::IntervalPartition::from_sizes(sizes);
  CHECK(find_k(part, {}) == 0);
  CHECK(find_k(part, {Rational(1, 4)}) == 0);
  auto shortPart = famlimit::IntervalPartition::from_sizes({1, 1});
  try {
    find_k(shortPart, std::vector<Rational>(10, Rational(1, 2)));
    FAIL("expected prefix_exhausted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::prefix_exhausted);
  }
  // the returned k meets the bound and every earlier k fails it
  const std::vector<Rational> losses{Rational(1, 2), Rational(1, 3), Rational(1, 5)};
  std::vector<std::uint64_t> grow;
  for (std::uint64_t k = 0; k < 40; ++k) grow.push_back(2 * k + 1);
  auto p2 = famlimit::IntervalPartition::from_sizes(grow);
  const std::size_t k = find_k(p2, losses);
  auto meets = [&](std::size_t kk) {
    for (const auto& l : losses) {
      auto sp = success_probs(l, 64);
      const Rational cut = Rational(static_cast<unsigned long>(p2.size(kk))) * sp.pPrimeUpper;
      const Natural fl = cut.get_num() / cut.get_den();
      if (binom_cdf(fl.get_si(), p2.size(kk), sp.pLower) >= Rational(1, 6)) return false;
    }
    return true;
  };
  CHECK(meets(k));
  for (std::size_t kk = 0; kk < k; ++kk) CHECK_FALSE(meets(kk));
}

TEST_CASE("tree validation") {
  CHECK_THROWS(ProbTree(1, {}));
  TreeNode bad{{{Rational(1, 2), {true}, -1}}};
  CHECK_THROWS(ProbTree(1, {{0, {bad}}}));
  TreeNode wrongFlags{{{1, {true, false}, -1}}};
  CHECK_THROWS(ProbTree(1, {{0, {wrongFlags}}}));
}

TEST_CASE("bad_branch_measure: homogeneous trees equal the binomial closed form") {
  for (unsigned n = 1; n <= 12; ++n)
    for (Rational p : {Rational(1, 2), Rational(2, 3), Rational(9, 10)})
      for (std::uint64_t t = 0; t <= n; ++t) {
        std::vector<std::size_t> lv(n);
        for (unsigned i = 0; i < n; ++i) lv[i] = i;
        auto bad = bad_branch_measure(homogeneous(n, p), {{lv, t}});
        CHECK(bad.perJob[0] == binom_cdf(static_cast<long>(t) - 1, n, p));
      }
  auto sure = bad_branch_measure(homogeneous(5, 1), {{{0, 1, 2, 3, 4}, 5}});
  CHECK(sure.anyJob == 0);
}

TEST_CASE("bad_branch_measure agrees with branch enumeration and obeys domination and the union bound") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const unsigned depth = 2 + rng() % 6;
    const std::size_t jobs = 1 + rng() % 2;
    Rational pMin(1 + rng() % 3, 4);
    pMin.canonicalize();
    auto tree = random_tree(rng, depth, jobs, pMin, 6);
    std::vector<JobQuery> q;
    for (std::size_t j = 0; j < jobs; ++j) {
      auto lv = levels_of(j, jobs, depth);
      q.push_back({lv, rng() % (lv.size() + 1)});
    }
    auto dp = bad_branch_measure(tree, q);
    auto brute = enumerate_bad(tree, q);
    CHECK(dp.perJob == brute.perJob);
    CHECK(dp.anyJob == brute.anyJob);
    Rational sum = 0;
    for (std::size_t j = 0; j < jobs; ++j) {
      sum += dp.perJob[j];
      CHECK(dp.perJob[j] <= binom_cdf(static_cast<long>(q[j].threshold) - 1, q[j].levels.size(), pMin));
    }
    CHECK(dp.anyJob <= sum);
  }
}

TEST_CASE("job queries are rejected when a level repeats or belongs to another job") {
  auto t = homogeneous(3, Rational(1, 2));
  CHECK_THROWS(bad_branch_measure(t, {{{0, 0, 1}, 1}}));
  TreeNode half{{{Rational(1, 2), {true, false}, 0}, {Rational(1, 2), {false, true}, 0}}};
  TreeNode last{{{1, {true, true}, -1}}};
  ProbTree two(2, {{0, {half}}, {1, {last}}});
  CHECK_THROWS(bad_branch_measure(two, {{{1}, 1}, {{0}, 1}}));
  CHECK(bad_branch_measure(two, {{{0}, 1}, {{1}, 1}}).perJob[0] == Rational(1, 2));
}

TEST_CASE("bad_branch_measure state cap") {
  std::mt19937_64 rng(1);
  auto tree = random_tree(rng, 6, 1, Rational(1, 2), 4);
  try {
    bad_branch_measure(tree, {{levels_of(0, 1, 6), 3}}, 4);
    FAIL("expected state_space_cap");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::state_space_cap);
  }
}

TEST_CASE("random_step examples") {
  RandomCondition a(2, {"00", "01", "10"}), b(2, {"00", "01", "11"});
  auto same = random_step({a, a}, Rational(1, 3), 2);
  REQUIRE(same.size() == 2);
  CHECK(same[0].prob == Rational(3, 4));
  CHECK(same[0].success == std::vector<bool>{true, true});
  CHECK(same[1].prob == Rational(1, 4));
  CHECK(same[1].success == std::vector<bool>{false, false});

  auto out = random_step({a, b}, Rational(1, 3), 2);
  std::map<std::set<std::string>, Rational> probs;
  Rational sum = 0, succA = 0, succB = 0;
  for (const auto& o : out) {
    probs[o.refined.words()] = o.prob;
    sum += o.prob;
    if (o.success[0]) succA += o.prob;
    if (o.success[1]) succB += o.prob;
    CHECK(o.success[0] == (intersect(o.refined, a) == o.refined));
    CHECK(o.success[1] == (intersect(o.refined, b) == o.refined));
  }
  CHECK(sum == 1);
  CHECK(probs.size() == 3);
  CHECK(probs[{"00", "01"}] == Rational(1, 2));
  CHECK(probs[{"10"}] == Rational(1, 4));
  CHECK(probs[{"11"}] == Rational(1, 4));
  CHECK(succA == Rational(3, 4));
  CHECK(succB == Rational(3, 4));

  auto single = random_step({a}, Rational(1, 3), 1);
  REQUIRE(single.size() == 2);
  CHECK(single[0].refined == a);
  CHECK(single[0].prob == Rational(3, 4));
  CHECK(single[1].success == std::vector<bool>{false});
  CHECK_THROWS(random_step({a, b}, Rational(1, 4), 2));
}

TEST_CASE("creature_step: flags match membership and success meets 1 - loss/2") {
  auto sp = suites::standard_space(10);
  const creature::Node stem(7, 0);
  using creature::Condition;
  auto c0 = Condition::make(sp, stem, {}, {{stem, creature::index_set({1})}});
  auto c1 = Condition::make(sp, stem, {}, {{stem, creature::index_set({2, 3})}});
  auto out = creature_step({c0, c1}, 8, 2);
  Rational sum = 0, s0 = 0, s1 = 0;
  for (const auto& o : out) {
    sum += o.prob;
    CHECK(o.success[0] == c0.contains(o.node));
    CHECK(o.success[1] == c1.contains(o.node));
    if (o.success[0]) {
      s0 += o.prob;
      CHECK(o.refined.refines(c0));
    }
    if (o.success[1]) {
      s1 += o.prob;
      CHECK(o.refined.refines(c1));
    }
    CHECK(o.refined.contains(o.node));
  }
  CHECK(sum == 1);
  CHECK(s0 == creature::relative_count(c0, 8));
  CHECK(s1 == creature::relative_count(c1, 8));
  CHECK(s0 >= 1 - *creature::loss(c0) / 2);

  auto full = Condition::make(sp, stem, {}, {});
  for (const auto& o : creature_step({full}, 9, 1)) CHECK(o.success[0]);
}

}  // TEST_SUITE
