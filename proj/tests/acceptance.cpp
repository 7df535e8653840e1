// Acceptance run: one PASS/FAIL line per criterion with its tolerance and
// elapsed time. Exits nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "forcelab/cichon.hpp"
#include "forcelab/creature.hpp"
#include "forcelab/deltasys.hpp"
#include "forcelab/fam.hpp"
#include "forcelab/famlimit.hpp"
#include "forcelab/params.hpp"
#include "forcelab/probtree.hpp"
#include "forcelab/randomtree.hpp"
#include "forcelab/suites.hpp"
#include "oracle.hpp"

using namespace forcelab;
using creature::Condition;
using creature::Node;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> info;

  void expect(bool ok, const std::string& what) {
    if (!ok && pass) detail << " first failure: " << what << ";";
    pass = pass && ok;
  }
};

int failures = 0;

void report(int n, double limitSecs, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " exception: " << e.what() << ";";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool inTime = secs < limitSecs;
  const bool ok = o.pass && inTime;
  failures += !ok;
  std::printf("criterion %d: %s (%.2f s, limit %.0f s)%s\n", n, ok ? "PASS" : "FAIL", secs, limitSecs,
              o.detail.str().c_str());
  for (const auto& line : o.info) std::printf("  info: %s\n", line.c_str());
  std::fflush(stdout);
}

Natural two_to(unsigned long e) { return forcelab::pow(Natural(2), e); }

// ---------------------------------------------------------------- 1
void params_tower(Outcome& o) {
  auto t = params::tower(4);
  const auto& L0 = t.level(0);
  const auto& L1 = t.level(1);
  o.expect(L0.rho.exact && *L0.rho.exact == 2, "rho(0)");
  o.expect(L0.pi.exact && *L0.pi.exact == 2, "pi(0)");
  o.expect(L0.a.exact && *L0.a.exact == 4, "a(0)");
  o.expect(L0.bigM.exact && *L0.bigM.exact == 16, "M(0)");
  o.expect(L0.b.exact && *L0.b.exact == 2, "b(0)");
  o.expect(L1.b.exact && *L1.b.exact == 1024, "b(1)");
  o.expect(L1.pi.exact && *L1.pi.exact == two_to(160), "log2 pi(1) = 160");
  o.expect(L1.a.exact && *L1.a.exact == two_to(480), "log2 a(1) = 480");
  o.expect(L1.bigM.exact && *L1.bigM.exact == two_to(960), "log2 M(1) = 960");
  auto checks = params::verify_tower_identities(t);
  std::size_t symbolic = 0;
  for (const auto& c : checks) {
    o.expect(c.passed, c.name + " at h=" + std::to_string(c.h));
    symbolic += c.method == params::CheckMethod::symbolic;
  }
  o.detail << " " << checks.size() << " identities for h<=4 (" << symbolic << " symbolic)";
}

// ---------------------------------------------------------------- 2
void counting(Outcome& o) {
  for (auto run : {suites::counting_a, suites::counting_b, suites::counting_c, suites::counting_d}) {
    auto r = run(1000, kSeed);
    o.expect(r.trials == 1000 && r.violations == 0,
             r.name + " violations=" + std::to_string(r.violations) +
                 (r.examples.empty() ? "" : " e.g. " + r.examples.front()));
    o.detail << " " << r.name << ":" << r.violations << "/" << r.checks;
  }
  auto e = suites::counting_b_boundary();
  auto sp = creature::make_space({e.bigM}, {e.base});
  const bool flagInvalid = e.base <= two_to(e.h);
  o.expect(flagInvalid && e.normBefore - e.normAfter >= Rational(1, e.h) && !e.dropBelowOneOverH,
           "boundary example");
  o.detail << "; boundary M=" << e.bigM << " a=" << e.base << " h=" << e.h << " norm " << to_string(e.normBefore)
           << "->" << to_string(e.normAfter);
}

// ---------------------------------------------------------------- 3
void zeta(Outcome& o) {
  using famlimit::zeta_tilde;
  using famlimit::zeta_tilde_closed;
  std::size_t pairs = 0;
  for (unsigned hs = 2; hs <= 50; ++hs) {
    Rational prod = 1;
    for (unsigned h = hs; h <= 200; ++h) {
      if (h > hs) prod *= 1 - Rational(1, static_cast<unsigned long>(h - 1) * (h - 1));
      const Rational z = zeta_tilde_closed(hs, h);
      o.expect(z == 1 - prod && z == zeta_tilde(hs, h), "closed vs product at (" + std::to_string(hs) + "," +
                                                             std::to_string(h) + ")");
      o.expect(z < Rational(1, hs), "zeta < 1/h*");
      ++pairs;
    }
  }
  std::size_t legal = 0;
  for (unsigned hs = 2; hs <= 100; ++hs)
    for (unsigned long m = 2; 3 * m < hs; ++m) {
      const Rational loss(1, m);
      // zeta increases in h towards 1/h*, so the sup is 1/h*
      o.expect(zeta_tilde_closed(hs, 200) < loss / 3 && Rational(1, hs) < loss / 3,
               "zeta < loss/3 at h*=" + std::to_string(hs));
      ++legal;
    }
  o.detail << " " << pairs << " (h*,h) pairs, " << legal << " legal (h*,loss*) pairs";
}

// ---------------------------------------------------------------- 4
// Conditions with a defined loss among all trees of a height-4 binary space.
std::string literal_space_note() {
  oracle::Tiny tiny{{2, 2, 2, 2}, {2, 2, 2, 2}};
  auto sp = tiny.space();
  std::size_t trees = 0, withLoss = 0;
  oracle::for_each_tree(tiny, {}, [&](const oracle::Nodes& t) {
    ++trees;
    withLoss += creature::loss(Condition::from_nodes(sp, std::vector<Node>(t.begin(), t.end()))).has_value();
  });
  return "height-4 space: " + std::to_string(withLoss) + " of " + std::to_string(trees) +
         " trees have a loss (stems must reach height 7)";
}

void limits(Outcome& o) {
  using namespace famlimit;
  const unsigned H = 10;
  auto sp = suites::standard_space(H);
  suites::Rng rng(kSeed);
  const std::vector<Node> stems{Node(7, 0), Node(8, 1)};
  std::map<std::size_t, std::vector<Condition>> qksByStem;
  std::size_t families = 0, branchClasses = 0, weighted = 0, weightChecks = 0;
  for (; families < 200; ++families) {
    const std::size_t si = families % 2;
    const Node& stem = stems[si];
    const unsigned hs = static_cast<unsigned>(stem.size());
    const std::size_t size = 1 + rng() % 4;
    std::vector<Condition> members;
    for (std::size_t i = 0; i < size; ++i) members.push_back(suites::random_condition(rng, sp, stem, 2));
    ConditionFamily fam{members, stem, Rational(1, 2), 0};
    fam.validate();
    auto part = IntervalPartition::from_sizes({size});
    Condition qk = build_qk(fam, part, 0);
    o.expect(qk.stem() == stem, "q_k stem");
    o.expect(norms_above_bound(qk, fam.lossStar, 1, true), "q_k norms > 1 + loss - 1/h");
    std::vector<const Condition*> ptrs;
    for (const auto& m : members) ptrs.push_back(&m);
    for (const auto& cls : creature::node_classes(qk, ptrs, H)) {
      const auto hits = branch_hit_count(cls.node, fam, part, 0, qk);
      o.expect(Rational(hits) >= Rational(size) * (1 - zeta_tilde(hs, H)), "branch hits >= |I_k|(1 - zeta^H)");
      o.expect(Rational(hits) >= Rational(size) * (1 - fam.lossStar / 3), "branch hits >= |I_k|(1 - loss/3)");
      ++branchClasses;
    }
    qksByStem[si].push_back(qk);
  }
  for (auto& [si, qks] : qksByStem) {
    const unsigned hs = static_cast<unsigned>(stems[si].size());
    for (std::size_t start = 0; start + 1 < qks.size(); start += 4) {
      const std::size_t count = std::min<std::size_t>(2 + rng() % 3, qks.size() - start);
      std::vector<unsigned long> raw;
      unsigned long total = 0;
      for (std::size_t i = 0; i < count; ++i) total += raw.emplace_back(1 + rng() % 5);
      std::vector<std::pair<Condition, Rational>> in;
      std::vector<const Condition*> ptrs;
      for (std::size_t i = 0; i < count; ++i) {
        Rational w(raw[i], total);
        w.canonicalize();
        in.push_back({qks[start + i], w});
      }
      for (const auto& [q, w] : in) ptrs.push_back(&q);
      Condition r = weighted_limit(in);
      ++weighted;
      o.expect(norms_above_bound(r, Rational(1, 2), 2, false), "weighted limit norms >= 1 + loss - 2/h");
      for (unsigned h = hs; h <= H; ++h)
        for (const auto& cls : creature::node_classes(r, ptrs, h)) {
          const Rational w = limit_weight(in, cls.node);
          o.expect(w >= 1 - zeta_tilde(hs, h), "weight >= 1 - zeta^h");
          if (h > hs) {
            const Node parent(cls.node.begin(), cls.node.end() - 1);
            const Rational hp(static_cast<unsigned long>(h - 1));
            o.expect(w >= limit_weight(in, parent) * (1 - 1 / (hp * hp)), "child weight >= parent (1 - 1/h^2)");
          }
          ++weightChecks;
        }
    }
  }
  o.detail << " " << families << " families (|I_k|<=4, H=" << H << ", stems 7-8), " << branchClasses
           << " branch classes, " << weighted << " weighted limits, " << weightChecks << " weight checks";
  o.info.push_back(literal_space_note() + "; the bounds are checked instead on a fubini-valid height-10 space, "
                   "every branch covered by its membership class");
}

// ---------------------------------------------------------------- 5
void fam_approx(Outcome& o) {
  std::mt19937_64 rng(kSeed);
  std::size_t instances = 0;
  for (; instances < 500; ++instances) {
    const fam::Point window = 1000 + rng() % 1000;
    const unsigned n = 1 + rng() % 4;
    const unsigned long L = 1 + rng() % (n == 4 ? 4 : 6);
    const fam::Point kStar = rng() % 20;
    std::map<std::string, fam::PointSet> sets;
    for (unsigned i = 0; i < n; ++i) {
      fam::PointSet s;
      for (fam::Point p = 0; p < window; ++p)
        if (rng() % 2) s.insert(p);
      sets["A" + std::to_string(i)] = s;
    }
    std::map<std::vector<bool>, fam::PointSet> atoms;
    for (fam::Point p = 0; p < window; ++p) {
      std::vector<bool> sig;
      for (const auto& [name, s] : sets) sig.push_back(s.count(p));
      atoms[sig].insert(p);
    }
    const unsigned long need = L << n;
    std::vector<unsigned long> raw;
    unsigned long total = 0;
    for (const auto& [sig, atom] : atoms) {
      const auto above = std::distance(atom.upper_bound(kStar), atom.end());
      total += raw.emplace_back(static_cast<unsigned long>(above) >= need ? rng() % 7 : 0);
    }
    if (total == 0) raw[0] = total = 1;
    std::vector<fam::AtomWeight> aw;
    std::size_t i = 0;
    for (const auto& [sig, atom] : atoms) {
      Rational w(raw[i++], total);
      w.canonicalize();
      aw.push_back({atom, w});
    }
    fam::MeasureAssignment m(window, sets, aw);
    const Rational eps(1, L);
    auto w = fam::approximate_support(m, eps, kStar);
    o.expect(!w.u.empty() && *w.u.begin() > kStar, "u above kStar");
    o.expect(Natural(w.u.size()) <= fam::size_bound(n, eps), "|u| <= ceil(1/eps) 2^N");
    for (const auto& [name, s] : sets) o.expect(abs(fam::frequency(s, w.u) - m.xi(s)) < eps, "error < eps");
  }
  o.detail << " " << instances << " instances";
}

// ---------------------------------------------------------------- 6
probtree::ProbTree homogeneous(unsigned n, const Rational& p) {
  std::vector<probtree::TreeLevel> levels;
  for (unsigned i = 0; i < n; ++i) {
    const std::int64_t next = i + 1 < n ? 0 : -1;
    probtree::TreeNode node{{{p, {true}, next}, {1 - p, {false}, next}}};
    levels.push_back({0, {node}});
  }
  return probtree::ProbTree(1, std::move(levels));
}

// Clopen condition with empty stem keeping more than (1 - lossStar) of 2^depth words.
randomtree::RandomCondition random_clopen(std::mt19937_64& rng, unsigned depth, const Rational& lossStar) {
  const unsigned long words = 1UL << depth;
  const Rational cut = lossStar * Rational(words);
  unsigned long maxDrop = Natural(cut.get_num() / cut.get_den()).get_ui();
  if (Rational(maxDrop) == cut) --maxDrop;  // strict
  const unsigned long drop = maxDrop == 0 ? 0 : rng() % (maxDrop + 1);
  std::set<unsigned long> dropped;
  while (dropped.size() < drop) dropped.insert(1 + rng() % (words - 2));  // keep 00..0 and 11..1
  std::set<std::string> kept;
  for (unsigned long w = 0; w < words; ++w) {
    if (dropped.count(w)) continue;
    std::string s;
    for (int b = static_cast<int>(depth) - 1; b >= 0; --b) s += (w >> b & 1) ? '1' : '0';
    kept.insert(s);
  }
  return randomtree::RandomCondition(depth, kept);
}

bool scenario(Outcome& o, std::mt19937_64& rng, std::size_t s) {
  using namespace probtree;
  const std::size_t jStar = 1 + s % 3;
  const std::vector<Rational> menu{Rational(1, 4), Rational(1, 6), Rational(1, 8)};
  std::vector<Rational> losses;
  for (std::size_t j = 0; j < jStar; ++j) losses.push_back(menu[(s + j) % 3]);
  std::vector<std::uint64_t> sizes;
  for (std::uint64_t k = 0; k < 80; ++k) sizes.push_back(2 + 2 * k);
  auto part = famlimit::IntervalPartition::from_sizes(sizes);
  const std::size_t k = find_k(part, losses);
  const std::uint64_t n = part.size(k);

  // creature kernels need stems high enough for loss 1/m
  std::map<unsigned long, creature::SpacePtr> spaces;
  std::vector<SuccessProbs> probs;
  for (const auto& l : losses) probs.push_back(success_probs(l, 64));

  std::vector<TreeLevel> levels;
  std::vector<JobQuery> jobs(jStar);
  const std::size_t width = 2;
  for (std::size_t j = 0; j < jStar; ++j)
    for (std::uint64_t ell = 0; ell < n; ++ell) {
      const bool last = j + 1 == jStar && ell + 1 == n;
      TreeLevel lvl;
      lvl.job = j;
      jobs[j].levels.push_back(levels.size());
      const std::size_t nodes = levels.empty() ? 1 : width;
      for (std::size_t v = 0; v < nodes; ++v) {
        TreeNode node;
        Rational success = 0;
        if (rng() % 4 == 0) {
          const unsigned long m = losses[j].get_den().get_ui();
          const unsigned hs = static_cast<unsigned>(3 * m + 1);
          auto& sp = spaces[m];
          if (!sp) sp = suites::standard_space(hs + 2);
          suites::Rng crng(rng());
          Condition c = suites::random_condition(crng, sp, suites::random_node(crng, *sp, hs), static_cast<unsigned>(m));
          o.expect(creature::loss(c) && *creature::loss(c) <= losses[j], "creature kernel loss");
          for (auto& out : creature_step({c}, hs + 1, static_cast<unsigned>(jStar))) {
            std::vector<bool> flags(jStar, false);
            flags[j] = out.success[0];
            if (out.success[0]) success += out.prob;
            node.outcomes.push_back({out.prob, flags, last ? -1 : static_cast<std::int64_t>(rng() % width)});
          }
        } else {
          auto c0 = random_clopen(rng, 5, losses[j]);
          auto c1 = random_clopen(rng, 5, Rational(1, 4));
          for (auto& out : random_step({c0, c1}, Rational(1, 4), static_cast<unsigned>(jStar))) {
            std::vector<bool> flags(jStar, false);
            flags[j] = out.success[0];
            if (out.success[0]) success += out.prob;
            node.outcomes.push_back({out.prob, flags, last ? -1 : static_cast<std::int64_t>(rng() % width)});
          }
        }
        o.expect(success >= probs[j].pLower, "kernel success >= p_j");
        lvl.nodes.push_back(std::move(node));
      }
      levels.push_back(std::move(lvl));
    }
  for (std::size_t j = 0; j < jStar; ++j) {
    const Rational cut = Rational(static_cast<unsigned long>(n)) * probs[j].pPrimeUpper;
    jobs[j].threshold = Natural(cut.get_num() / cut.get_den()).get_ui() + 1;
  }
  ProbTree tree(jStar, std::move(levels));
  auto bad = bad_branch_measure(tree, jobs);
  Rational sum = 0;
  for (std::size_t j = 0; j < jStar; ++j) {
    const Rational bound = binom_cdf(static_cast<long>(jobs[j].threshold) - 1, n, probs[j].pLower);
    o.expect(bad.perJob[j] <= bound, "bad measure dominated by the binomial tail");
    o.expect(bound < Rational(1, 2 * jStar), "tail < 1/(2 j*)");
    sum += bad.perJob[j];
  }
  o.expect(bad.anyJob <= sum, "union bound");
  const bool good = 1 - bad.anyJob >= Rational(1, 2);
  o.expect(good, "good branches >= 1/2 in scenario " + std::to_string(s));
  return good;
}

void binomial(Outcome& o) {
  using namespace probtree;
  std::size_t homogeneousChecks = 0;
  for (unsigned n = 1; n <= 12; ++n)
    for (Rational p : {Rational(1, 3), Rational(1, 2), Rational(5, 7), Rational(9, 10)})
      for (std::uint64_t t = 0; t <= n; ++t) {
        std::vector<std::size_t> lv(n);
        for (unsigned i = 0; i < n; ++i) lv[i] = i;
        auto bad = bad_branch_measure(homogeneous(n, p), {{lv, t}});
        o.expect(bad.perJob[0] == binom_cdf(static_cast<long>(t) - 1, n, p), "DP = binom_cdf");
        ++homogeneousChecks;
      }

  std::mt19937_64 rng(kSeed);
  std::size_t trees = 0;
  for (; trees < 500; ++trees) {
    const unsigned depth = 3 + rng() % 8;
    Rational pMin(1 + rng() % 4, 5);
    pMin.canonicalize();
    std::vector<TreeLevel> levels;
    std::size_t width = 1;
    for (unsigned d = 0; d < depth; ++d) {
      TreeLevel lvl{0, {}};
      const std::size_t nextWidth = std::min<std::size_t>(4, width * 2);
      for (std::size_t i = 0; i < width; ++i) {
        Rational p = pMin + (1 - pMin) * Rational(rng() % 9, 8);
        p.canonicalize();
        const std::int64_t a = d + 1 < depth ? static_cast<std::int64_t>(rng() % nextWidth) : -1;
        const std::int64_t b = d + 1 < depth ? static_cast<std::int64_t>(rng() % nextWidth) : -1;
        lvl.nodes.push_back(TreeNode{{{p, {true}, a}, {1 - p, {false}, b}}});
      }
      levels.push_back(std::move(lvl));
      width = nextWidth;
    }
    std::vector<std::size_t> lv(depth);
    for (unsigned i = 0; i < depth; ++i) lv[i] = i;
    const std::uint64_t t = rng() % (depth + 1);
    auto bad = bad_branch_measure(ProbTree(1, std::move(levels)), {{lv, t}});
    o.expect(bad.perJob[0] <= binom_cdf(static_cast<long>(t) - 1, depth, pMin), "domination");
  }

  std::size_t good = 0;
  for (std::size_t s = 0; s < 20; ++s) good += scenario(o, rng, s);
  o.detail << " " << homogeneousChecks << " homogeneous cases (n<=12), " << trees << " inhomogeneous trees, " << good
           << "/20 scenarios certified";
}

// ---------------------------------------------------------------- 7 and 8
// Height 9: binary levels up to the stem region, then widths 3 and 2.
oracle::Tiny tiny_space(unsigned long base) {
  return {{2, 2, 2, 2, 2, 2, 2, 3, 2}, std::vector<unsigned long>(9, base)};
}

// Every condition with stem height >= 7 (the only ones with a loss).
void for_each_loss_tree(const oracle::Tiny& tiny, const std::function<void(const Condition&)>& visit) {
  auto sp = tiny.space();
  for (const Node& stem : oracle::level(tiny, 7))
    oracle::for_each_tree(tiny, stem, [&](const oracle::Nodes& t) {
      visit(Condition::from_nodes(sp, std::vector<Node>(t.begin(), t.end())));
    });
}

void measure(Outcome& o) {
  std::size_t conds = 0, checks = 0;
  auto tiny = tiny_space(128);  // count-valid: a > h^2 at every level
  for (unsigned h = 1; h < 9; ++h) o.expect(tiny.space()->countValid(h), "tiny space count-valid");
  for_each_loss_tree(tiny, [&](const Condition& c) {
    auto l = creature::loss(c);
    if (!l) return;
    ++conds;
    for (unsigned h = c.stem_height() + 1; h <= 9; ++h, ++checks)
      o.expect(creature::relative_count(c, h) >= 1 - *l / 2, "tiny relative_count >= 1 - loss/2");
  });
  auto r = suites::measure_bound(500, kSeed);
  o.expect(r.trials == 500 && r.violations == 0, "sampled measure bound");
  o.detail << " tiny: " << conds << " conditions with loss, " << checks << " checks; sampled: " << r.trials
           << " conditions, " << r.checks << " checks, " << r.violations << " violations";

  std::size_t invalid = 0, invalidConds = 0;
  for_each_loss_tree(tiny_space(2), [&](const Condition& c) {
    auto l = creature::loss(c);
    if (!l) return;
    ++invalidConds;
    for (unsigned h = c.stem_height() + 1; h <= 9; ++h)
      if (creature::relative_count(c, h) < 1 - *l / 2) {
        ++invalid;
        break;
      }
  });
  o.info.push_back("count-valid tiny spaces keep every successor above the stem, so the bound is met with equality "
                   "there; on the same shape with base 2 (not count-valid) " +
                   std::to_string(invalid) + " of " + std::to_string(invalidConds) + " loss-defined conditions break it");
}

void linked(Outcome& o) {
  auto tiny = tiny_space(1024);  // capacity-valid: a > 2^h for h < 9
  for (unsigned h = 1; h < 9; ++h) o.expect(tiny.space()->intersectValid(h, 2), "tiny space capacity-valid");
  std::map<std::pair<Node, std::string>, std::vector<Condition>> groups;
  for_each_loss_tree(tiny, [&](const Condition& c) {
    auto l = creature::loss(c);
    if (l) groups[{c.stem(), to_string(*l)}].push_back(c);
  });
  std::size_t sets = 0;
  for (const auto& [key, cs] : groups) {
    const Rational l = parse_rational(key.second);
    const std::size_t m = Natural(l.get_den() / l.get_num()).get_ui();
    o.expect(m <= 3, "m <= 3");
    // every m-element multiset
    std::vector<std::size_t> idx(m, 0);
    while (true) {
      std::vector<Condition> pick;
      for (std::size_t i : idx) pick.push_back(cs[i]);
      auto r = creature::linked_refinement(pick);
      o.expect(r.has_value(), "tiny common refinement exists");
      if (r)
        for (const auto& c : pick) o.expect(r->refines(c), "refinement lies below every input");
      ++sets;
      std::size_t pos = m;
      while (pos > 0 && idx[pos - 1] + 1 == cs.size()) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < m; ++j) idx[j] = idx[pos - 1];
    }
  }
  auto r = suites::linkedness(200, kSeed);
  o.expect(r.trials == 200 && r.violations == 0, "sampled linkedness");
  o.detail << " tiny: " << groups.size() << " (stem,loss) groups, " << sets << " sets; sampled: " << r.trials
           << " sets of m=floor(1/loss) conditions, " << r.violations << " violations";
  o.info.push_back(literal_space_note() + "; the exhaustive part uses height 9 with widths <= 3, where "
                   "capacity-valid bases leave only full trees above the stem");
}

// ---------------------------------------------------------------- 9
void cichon_checks(Outcome& o) {
  using namespace cichon;
  std::size_t fixturesOk = 0;
  for (const auto& f : fixtures()) {
    o.expect(check(f.values).empty(), "fixture " + f.name);
    fixturesOk += check(f.values).empty();
  }
  Assignment base{};
  for (const auto& f : fixtures())
    if (f.name == "old-order") base = f.values;
  std::size_t named = 0;
  for (const auto& ar : arrows()) {
    auto a = base;
    at(a, ar.from) = at(a, ar.to) + 1;
    bool found = false;
    for (const auto& v : check(a)) found = found || v.key == arrow_key(ar);
    o.expect(found, "mutation " + arrow_key(ar));
    named += found;
  }
  // dual encoding: arrows as a text table over string names
  const char* table =
      "aleph1 addN addN addM addN covN addM b addM covM b nonM b d covN nonM "
      "nonM cofM covM d covM nonN d cofM nonN cofN cofM cofN cofN c";
  std::vector<std::pair<std::string, std::string>> edges;
  std::istringstream in(table);
  for (std::string x, y; in >> x >> y;) edges.push_back({x, y});
  const std::vector<std::string> names{"addN", "covN", "addM", "b", "nonM", "covM", "d", "nonN", "cofM", "cofN"};
  std::size_t count = 0;
  for (unsigned mask = 0; mask < 1024; ++mask) {
    std::map<std::string, int> v{{"aleph1", 1}, {"c", 2}};
    for (std::size_t i = 0; i < names.size(); ++i) v[names[i]] = (mask >> i & 1) + 1;
    bool ok = true;
    for (const auto& e : edges) ok = ok && v[e.first] <= v[e.second];
    ok = ok && v["addM"] == std::min(v["b"], v["covM"]) && v["cofM"] == std::max(v["d"], v["nonM"]);
    count += ok;
  }
  const std::size_t lib = enumerate_two_valued().size();
  o.expect(arrows().size() == 15 && edges.size() == 15, "15 arrows");
  o.expect(lib == count, "two-valued count");
  o.detail << " " << fixturesOk << " fixtures, " << named << "/15 mutations named, two-valued " << lib
           << " (oracle " << count << ")";
}

// ---------------------------------------------------------------- 10
deltasys::LabeledSupport support(std::vector<deltasys::Coord> coords, std::mt19937_64* rng) {
  deltasys::LabeledSupport s{std::move(coords), {}};
  for (std::size_t i = 0; i < s.coords.size(); ++i) {
    if (rng && (*rng)() % 3 == 0)
      s.labels.push_back({deltasys::Tag::S3, "s" + std::to_string((*rng)() % 2), Rational(1, 2)});
    else
      s.labels.push_back({deltasys::Tag::S0, "x", 0});
  }
  return s;
}

bool independent_valid(const std::vector<deltasys::LabeledSupport>& ms) {
  std::set<deltasys::Coord> heart(ms[0].coords.begin(), ms[0].coords.end());
  for (const auto& s : ms) {
    std::set<deltasys::Coord> r;
    for (auto c : s.coords)
      if (heart.count(c)) r.insert(c);
    heart = r;
  }
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j) {
      std::set<deltasys::Coord> r;
      for (auto c : ms[j].coords)
        if (std::find(ms[i].coords.begin(), ms[i].coords.end(), c) != ms[i].coords.end()) r.insert(c);
      if (r != heart) return false;
    }
  for (const auto& s : ms) {
    if (s.coords.size() != ms[0].coords.size()) return false;
    for (std::size_t n = 0; n < s.coords.size(); ++n) {
      const auto c = s.coords[n], f = ms[0].coords[n];
      if (heart.count(c) != heart.count(f)) return false;
      for (auto h : heart)
        if ((c < h) != (f < h) || (c == h) != (f == h)) return false;
      if (!(s.labels[n].tag == ms[0].labels[n].tag)) return false;
      if (s.labels[n].tag != deltasys::Tag::S0 &&
          (s.labels[n].token != ms[0].labels[n].token || s.labels[n].loss != ms[0].labels[n].loss))
        return false;
    }
  }
  return true;
}

std::vector<deltasys::LabeledSupport> random_supports(std::mt19937_64& rng, std::size_t count, std::size_t k,
                                                      deltasys::Coord universe, bool labels) {
  auto choose = [&](deltasys::Coord u) {
    double c = 1;
    for (std::size_t i = 0; i < k; ++i) c = c * static_cast<double>(u - i) / static_cast<double>(i + 1);
    return u < k ? 0.0 : c;
  };
  while (choose(universe) < static_cast<double>(count)) ++universe;
  std::set<std::vector<deltasys::Coord>> seen;
  std::vector<deltasys::LabeledSupport> out;
  while (out.size() < count) {
    std::set<deltasys::Coord> s;
    while (s.size() < k) s.insert(rng() % universe);
    std::vector<deltasys::Coord> v(s.begin(), s.end());
    if (seen.insert(v).second) out.push_back(support(v, labels ? &rng : nullptr));
  }
  return out;
}

void delta(Outcome& o) {
  using namespace deltasys;
  std::mt19937_64 rng(kSeed);
  std::size_t found = 0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t k = 1 + rng() % 4;
    auto fam = random_supports(rng, 3 + rng() % 20, k, k + 2 + rng() % 10, true);
    auto ds = extract_delta(fam, 2 + rng() % 3);
    if (!ds) continue;
    ++found;
    o.expect(independent_valid(ds->members), "validator");
  }
  std::size_t sunflower = 0;
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t m = 1; m <= 3; ++m) {
      std::size_t bound = 1;
      for (std::size_t i = 2; i <= k; ++i) bound *= i;
      for (std::size_t i = 0; i < k; ++i) bound *= m - 1;
      for (int trial = 0; trial < 20; ++trial) {
        auto fam = random_supports(rng, bound + 1, k, static_cast<Coord>(k + 2 + 2 * k * m), false);
        auto ds = extract_delta(fam, m);
        o.expect(ds.has_value() && ds->members.size() >= m && independent_valid(ds->members),
                 "sunflower threshold k=" + std::to_string(k) + " m=" + std::to_string(m));
        ++sunflower;
      }
    }
  std::size_t covers = 0;
  for (; covers < 500; ++covers) {
    const Coord coords = 2 + rng() % 9;
    std::vector<Guardrail> partials;
    std::map<Coord, std::vector<std::string>> universe;
    for (Coord c = 0; c < coords; ++c) universe[c] = {"a", "b", "c"};
    const std::size_t count = 1 + rng() % 50;
    for (std::size_t i = 0; i < count; ++i) {
      Guardrail g;
      for (Coord c = 0; c < coords; ++c)
        if (rng() % 3 == 0) g[c] = universe[c][rng() % 3];
      partials.push_back(g);
    }
    auto cover = guardrail_cover(partials, universe);
    for (const auto& g : partials) {
      bool ext = false;
      for (const auto& t : cover) ext = ext || extends(t, g);
      o.expect(ext, "guardrail cover extends every input");
    }
  }
  o.detail << " " << found << "/500 families yielded systems (all validated), " << sunflower
           << " threshold families, " << covers << " covers";
}

}  // namespace

int main() {
  report(1, 5, params_tower);
  report(2, 60, counting);
  report(3, 60, zeta);
  report(4, 300, limits);
  report(5, 30, fam_approx);
  report(6, 300, binomial);
  report(7, 120, measure);
  report(8, 120, linked);
  report(9, 10, cichon_checks);
  report(10, 120, delta);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
