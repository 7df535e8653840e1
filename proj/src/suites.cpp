#include "forcelab/suites.hpp"

#include <algorithm>
#include <sstream>

namespace forcelab::suites {

using creature::ChildIndex;
using creature::Condition;
using creature::IndexSet;
using creature::Node;

namespace {

constexpr std::size_t kKeptExamples = 8;

std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

bool coin(Rng& rng, unsigned oneIn) { return uniform(rng, 0, oneIn - 1) == 0; }

/// Uniform-ish natural in [lo, hi] (hi >= lo).
Natural between(Rng& rng, const Natural& lo, const Natural& hi) {
  Natural span = hi - lo + 1;
  Natural r = random_natural(rng, static_cast<unsigned>(mpz_sizeinbase(span.get_mpz_t(), 2)) + 16);
  return lo + r % span;
}

Natural smallest_pow2_above(const Natural& x) {
  Natural p = 1;
  while (p <= x) p *= 2;
  return p;
}

/// Random omitted set of exactly `count` indices below `limit`: one interval,
/// sometimes split into two pieces.
IndexSet random_omission(Rng& rng, const Natural& count, ChildIndex limit) {
  IndexSet out;
  if (count == 0) return out;
  require(count <= Natural(std::to_string(limit)), "omission larger than the index range");
  const ChildIndex c = count.get_ui();
  const ChildIndex start = uniform(rng, 0, limit - c);
  if (c >= 2 && coin(rng, 2)) {
    const ChildIndex first = uniform(rng, 1, c - 1);
    out += creature::index_range(start, start + first);
    // second piece placed after a gap when room allows
    const ChildIndex rest = c - first;
    const ChildIndex room = limit - (start + first);
    if (room > rest) {
      const ChildIndex gap = uniform(rng, 0, std::min<ChildIndex>(room - rest, 1000));
      out += creature::index_range(start + first + gap, start + first + gap + rest);
      return out;
    }
    out += creature::index_range(start + first, start + c);
    return out;
  }
  out += creature::index_range(start, start + c);
  return out;
}

Natural omission_budget(const creature::CreatureSpace& sp, unsigned h, const Rational& x) {
  return sp.succCount(h) - creature::least_count_with_norm(sp.succCount(h), sp.base(h), x, false);
}

/// How many indices of a budget to actually omit: at the cap a quarter of the
/// time, otherwise anything up to it, clipped to what fits below the limit.
Natural pick_count(Rng& rng, const Natural& budget, ChildIndex limit) {
  Natural cap = std::min(budget, Natural(std::to_string(limit / 2)));
  if (cap <= 0) return 0;
  if (coin(rng, 4)) return cap;
  return between(rng, Natural(0), cap);
}

/// Largest p/den below or at mu(n), by bisection on p.
Rational norm_floor(const Natural& bigM, const Natural& base, const Natural& n, unsigned long den) {
  unsigned long lo = 0;
  unsigned long hi = den * (mpz_sizeinbase(bigM.get_mpz_t(), 2) + 2);
  while (lo < hi) {
    unsigned long mid = lo + (hi - lo + 1) / 2;
    if (creature::norm_cmp(bigM, base, n, Rational(mid, den), false))
      lo = mid;
    else
      hi = mid - 1;
  }
  Rational r(lo, den);
  r.canonicalize();
  return r;
}

std::string describe(std::initializer_list<std::pair<const char*, std::string>> kv) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : kv) {
    os << (first ? "" : " ") << k << "=" << v;
    first = false;
  }
  return os.str();
}

}  // namespace

void SuiteResult::fail(std::string what) {
  ++violations;
  if (examples.size() < kKeptExamples) examples.push_back(std::move(what));
}

Natural random_natural(Rng& rng, unsigned bits) {
  Natural r = 0;
  for (unsigned got = 0; got < bits; got += 64) {
    r <<= 64;
    r += Natural(std::to_string(rng()));
  }
  const unsigned extra = (bits + 63) / 64 * 64 - bits;
  return r >> extra;
}

Node random_node(Rng& rng, const creature::CreatureSpace& space, unsigned h) {
  Node n;
  for (unsigned lvl = 0; lvl < h; ++lvl) {
    const ChildIndex lim = space.index_limit(lvl);
    n.push_back(uniform(rng, 0, std::min<ChildIndex>(lim - 1, 1000)));
  }
  return n;
}

// ---------------------------------------------------------------------------
// Counting lemma

SuiteResult counting_a(std::uint64_t trials, std::uint64_t seed) {
  Rng rng(seed);
  SuiteResult r;
  r.name = "counting-a";
  for (std::uint64_t t = 0; t < trials; ++t) {
    ++r.trials;
    const unsigned h = static_cast<unsigned>(uniform(rng, 1, 8));
    Natural a = 2 + random_natural(rng, static_cast<unsigned>(uniform(rng, 1, 48)));
    Natural bigM = 2 + random_natural(rng, static_cast<unsigned>(uniform(rng, 1, 96)));
    // n at or just above the least count of norm 1, where the bound is tight
    Natural least = creature::least_count_with_norm(bigM, a, 1, false);
    Natural n = between(rng, least, std::min(bigM, Natural(least + 3)));
    ++r.checks;
    // mu >= 1 means M/(M-n) >= a, i.e. n·a >= M·(a-1)
    if (n * a < bigM * (a - 1))
      r.fail(describe({{"M", to_string(bigM)}, {"a", to_string(a)}, {"n", to_string(n)},
                       {"bound", "M(1-1/a)"}}));
    const Natural h2 = Natural(h) * h;
    if (a > h2 && n * h2 < bigM * (h2 - 1))
      r.fail(describe({{"M", to_string(bigM)}, {"a", to_string(a)}, {"n", to_string(n)},
                       {"h", std::to_string(h)}, {"bound", "M(1-1/h^2)"}}));
  }
  return r;
}

SuiteResult counting_b(std::uint64_t trials, std::uint64_t seed) {
  Rng rng(seed);
  SuiteResult r;
  r.name = "counting-b";
  for (std::uint64_t t = 0; t < trials; ++t) {
    ++r.trials;
    const unsigned h = static_cast<unsigned>(uniform(rng, 1, 8));
    const Natural twoH = Natural(1) << h;
    Natural a = coin(rng, 4) ? Natural(twoH + 1)
                             : Natural(twoH + 1 + random_natural(rng, static_cast<unsigned>(uniform(rng, 1, 40))));
    Natural bigM = 2 + random_natural(rng, static_cast<unsigned>(uniform(rng, 1, 80)));
    // proper subsets, biased towards the top where one removal costs most
    Natural n = coin(rng, 2) ? Natural(bigM - 1 - between(rng, Natural(0), std::min(Natural(bigM - 2), Natural(4))))
                             : between(rng, Natural(1), Natural(bigM - 1));
    ++r.checks;
    // exact: mu(n) - mu(n-1) = log_a((M-n+1)/(M-n)) < 1/h
    const Natural gap = bigM - n;
    if (!(forcelab::pow(Natural(gap + 1), h) < a * forcelab::pow(gap, h)))
      r.fail(describe({{"M", to_string(bigM)}, {"a", to_string(a)}, {"n", to_string(n)},
                       {"h", std::to_string(h)}}));
    // through the norm comparison: mu(n) >= x implies mu(n-1) > x - 1/h
    Rational x = norm_floor(bigM, a, n, 64UL * h);
    Rational target = x - Rational(1, h);
    target.canonicalize();
    if (!creature::norm_cmp(bigM, a, n - 1, target, true))
      r.fail(describe({{"M", to_string(bigM)}, {"a", to_string(a)}, {"n", to_string(n)},
                       {"h", std::to_string(h)}, {"x", to_string(x)}}));
  }
  return r;
}

BoundaryExample counting_b_boundary() {
  BoundaryExample ex;
  ex.bigM = 16;
  ex.base = 4;
  ex.h = 2;
  ex.n = 15;
  ex.normBefore = 2;                // log_4 16
  ex.normAfter = Rational(3, 2);    // log_4 8
  const Natural gap = ex.bigM - ex.n;
  ex.dropBelowOneOverH = forcelab::pow(Natural(gap + 1), ex.h) < ex.base * forcelab::pow(gap, ex.h);
  return ex;
}

SuiteResult counting_c(std::uint64_t trials, std::uint64_t seed) {
  Rng rng(seed);
  SuiteResult r;
  r.name = "counting-c";
  for (std::uint64_t t = 0; t < trials; ++t) {
    ++r.trials;
    const unsigned h = static_cast<unsigned>(uniform(rng, 1, 5));
    const unsigned j = static_cast<unsigned>(uniform(rng, 2, 5));
    const Natural jh = forcelab::pow(Natural(j), h);
    Natural a = coin(rng, 4) ? Natural(jh + 1)
                             : Natural(jh + 1 + random_natural(rng, static_cast<unsigned>(uniform(rng, 1, 24))));
    Natural bigM = 2 + random_natural(rng, static_cast<unsigned>(uniform(rng, 8, 62)));
    const ChildIndex limit = bigM.get_ui();
    Rational x(static_cast<long>(uniform(rng, 4, 16)), 8);
    x.canonicalize();
    const Natural budget = bigM - creature::least_count_with_norm(bigM, a, x, false);
    IndexSet uni;
    for (unsigned i = 0; i < j; ++i) uni += random_omission(rng, pick_count(rng, budget, limit), limit);
    ++r.checks;
    Rational target = x - Rational(1, h);
    target.canonicalize();
    const Natural kept = bigM - creature::cardinality(uni);
    if (!creature::norm_cmp(bigM, a, kept, target, true))
      r.fail(describe({{"M", to_string(bigM)}, {"a", to_string(a)}, {"h", std::to_string(h)},
                       {"j", std::to_string(j)}, {"x", to_string(x)}, {"kept", to_string(kept)}}));
  }
  return r;
}

SuiteResult counting_d(std::uint64_t trials, std::uint64_t seed) {
  Rng rng(seed);
  SuiteResult r;
  r.name = "counting-d";
  for (std::uint64_t t = 0; t < trials; ++t) {
    ++r.trials;
    const unsigned h = static_cast<unsigned>(uniform(rng, 1, 3));
    const Natural floorA = forcelab::pow(Natural(h), 2 * h);
    Natural a = coin(rng, 4) ? Natural(floorA + 1)
                             : Natural(floorA + 1 + random_natural(rng, static_cast<unsigned>(uniform(rng, 1, 20))));
    // M(h) must be wide enough that norms >= 1 leave room to omit
    Natural bigM = a * a * (1 + random_natural(rng, static_cast<unsigned>(uniform(rng, 0, 8))));
    if (bigM >= (Natural(1) << 62)) bigM = a * a;
    if (bigM >= (Natural(1) << 62)) bigM = Natural(1) << 61;
    std::vector<Natural> succ(h + 1, Natural(2)), base(h + 1, Natural(2));
    succ[h] = bigM;
    base[h] = a;
    for (unsigned lvl = 0; lvl < h; ++lvl) base[lvl] = smallest_pow2_above(forcelab::pow(Natural(lvl), 2 * lvl));
    auto space = creature::make_space(succ, base);
    const Node s(h, 0);
    const ChildIndex limit = space->index_limit(h);
    Rational x(static_cast<long>(uniform(rng, 8, 24)), 8);
    x.canonicalize();
    const Natural budget = omission_budget(*space, h, x);
    const unsigned k = static_cast<unsigned>(uniform(rng, 1, 6));
    std::vector<std::pair<creature::ChildSet, Rational>> sets;
    std::vector<unsigned long> raw;
    unsigned long total = 0;
    for (unsigned i = 0; i < k; ++i) {
      raw.push_back(uniform(rng, 1, 20));
      total += raw.back();
    }
    for (unsigned i = 0; i < k; ++i) {
      Natural cnt = pick_count(rng, budget, limit);
      if (cnt == 0) cnt = std::min(budget, Natural(1));
      Rational w(raw[i], total);
      w.canonicalize();
      sets.push_back({creature::ChildSet{random_omission(rng, cnt, limit)}, w});
    }
    auto out = creature::weighted_success_set(*space, s, sets, h);
    ++r.checks;
    Rational target = x - Rational(1, h);
    target.canonicalize();
    const Natural kept = bigM - creature::cardinality(out.omitted);
    if (!creature::norm_cmp(bigM, a, kept, target, true))
      r.fail(describe({{"M", to_string(bigM)}, {"a", to_string(a)}, {"h", std::to_string(h)},
                       {"sets", std::to_string(k)}, {"x", to_string(x)}, {"kept", to_string(kept)}}));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Random conditions on standard spaces

creature::SpacePtr standard_space(unsigned height) {
  std::vector<Natural> succ, base;
  for (unsigned h = 0; h < height; ++h) {
    Natural a = smallest_pow2_above(forcelab::pow(Natural(h), 2 * h));
    base.push_back(a);
    succ.push_back(a * a);
  }
  return creature::make_space(std::move(succ), std::move(base));
}

Condition random_condition(Rng& rng, const creature::SpacePtr& space, const Node& stem, unsigned m) {
  const auto& sp = *space;
  const Rational x = 1 + Rational(1, m);
  std::map<unsigned, IndexSet> level;
  std::vector<Natural> room;  // budget left per level after the level omission
  // keep the stem's own child range clear so the stem stays a splitting node
  for (unsigned h = static_cast<unsigned>(stem.size()); h < sp.height(); ++h) {
    const Natural budget = omission_budget(sp, h, x);
    const ChildIndex limit = sp.index_limit(h);
    Natural cnt = coin(rng, 3) ? Natural(0) : pick_count(rng, budget, limit);
    if (cnt > 0) level[h] = random_omission(rng, cnt, limit);
    room.push_back(budget - cnt);
  }
  Condition::Omissions nodes;
  const unsigned specials = static_cast<unsigned>(uniform(rng, 0, 3));
  for (unsigned i = 0; i < specials; ++i) {
    // walk up from the stem through kept children
    Node t = stem;
    const unsigned top = static_cast<unsigned>(uniform(rng, stem.size(), sp.height() - 1));
    bool ok = true;
    while (t.size() < top && ok) {
      const unsigned lvl = static_cast<unsigned>(t.size());
      IndexSet om = level.count(lvl) ? level[lvl] : IndexSet{};
      if (auto it = nodes.find(t); it != nodes.end()) om |= it->second;
      ChildIndex c = uniform(rng, 0, std::min<ChildIndex>(sp.index_limit(lvl) - 1, 1u << 20));
      if (boost::icl::contains(om, c)) c = creature::least_outside(om);
      ok = c < sp.index_limit(lvl);
      t.push_back(c);
    }
    if (!ok) continue;
    const unsigned lvl = static_cast<unsigned>(t.size());
    Natural left = room[lvl - stem.size()];
    if (auto it = nodes.find(t); it != nodes.end()) left -= creature::cardinality(it->second);
    if (left <= 0) continue;
    Natural cnt = pick_count(rng, left, sp.index_limit(lvl));
    // node omissions overlapping the level set would not use up the budget; pick fresh indices
    IndexSet extra = random_omission(rng, cnt, sp.index_limit(lvl));
    if (level.count(lvl)) extra -= level[lvl];
    if (!extra.empty()) nodes[t] |= extra;
  }
  return Condition::make(space, stem, std::move(level), std::move(nodes));
}

namespace {

/// Stem height and loss target for a random run: stems from 7 to H - 2.
struct Shape {
  unsigned hStar;
  unsigned m;
};

Shape random_shape(Rng& rng, unsigned H) {
  Shape s;
  s.hStar = static_cast<unsigned>(uniform(rng, 7, H - 2));
  s.m = static_cast<unsigned>(uniform(rng, 2, (s.hStar - 1) / 3));
  return s;
}

std::string cond_tag(std::uint64_t trial, const Condition& c) {
  return "trial=" + std::to_string(trial) + " stem-height=" + std::to_string(c.stem_height());
}

constexpr unsigned kSuiteHeight = 12;

}  // namespace

SuiteResult loss_facts(std::uint64_t trials, std::uint64_t seed) {
  Rng rng(seed);
  SuiteResult r;
  r.name = "loss";
  auto space = standard_space(kSuiteHeight);
  for (std::uint64_t t = 0; t < trials; ++t) {
    ++r.trials;
    const Shape sh = random_shape(rng, kSuiteHeight);
    Condition c = random_condition(rng, space, random_node(rng, *space, sh.hStar), sh.m);
    ++r.checks;
    if (!creature::is_condition(c)) {
      r.fail(cond_tag(t, c) + " not a condition");
      continue;
    }
    auto l = creature::loss(c);
    if (!l) {
      r.fail(cond_tag(t, c) + " loss undefined");
      continue;
    }
    if (!(*l < 1)) r.fail(cond_tag(t, c) + " loss=" + to_string(*l) + " not < 1");
    if (!(*l > Rational(3, c.stem_height())))
      r.fail(cond_tag(t, c) + " loss=" + to_string(*l) + " not > 3/h*");
    if (*l > Rational(1, sh.m)) r.fail(cond_tag(t, c) + " loss above the generated bound");
  }
  return r;
}

SuiteResult measure_bound(std::uint64_t trials, std::uint64_t seed) {
  Rng rng(seed);
  SuiteResult r;
  r.name = "measure";
  auto space = standard_space(kSuiteHeight);
  for (std::uint64_t t = 0; t < trials; ++t) {
    ++r.trials;
    const Shape sh = random_shape(rng, kSuiteHeight);
    Condition c = random_condition(rng, space, random_node(rng, *space, sh.hStar), sh.m);
    auto l = creature::loss(c);
    if (!l) {
      r.fail(cond_tag(t, c) + " loss undefined");
      continue;
    }
    const Rational bound = 1 - *l / 2;
    for (unsigned h = c.stem_height() + 1; h <= space->height(); ++h) {
      ++r.checks;
      Rational rc = creature::relative_count(c, h);
      if (rc < bound)
        r.fail(cond_tag(t, c) + " h=" + std::to_string(h) + " relative=" + to_string(rc));
    }
  }
  return r;
}

SuiteResult linkedness(std::uint64_t trials, std::uint64_t seed) {
  Rng rng(seed);
  SuiteResult r;
  r.name = "linked";
  auto space = standard_space(kSuiteHeight);
  for (std::uint64_t t = 0; t < trials; ++t) {
    ++r.trials;
    // loss is pinned by the stem height alone: m = floor((h* - 1) / 3)
    const unsigned hStar = static_cast<unsigned>(uniform(rng, 7, kSuiteHeight - 2));
    const unsigned m = (hStar - 1) / 3;
    const Node stem = random_node(rng, *space, hStar);
    std::vector<Condition> conds;
    const Rational lossStar(1, m);
    for (unsigned i = 0; i < m; ++i) {
      Condition c = random_condition(rng, space, stem, m);
      if (c.stem() != stem || creature::loss(c) != lossStar) continue;
      conds.push_back(std::move(c));
    }
    if (conds.size() < m) continue;
    ++r.checks;
    auto ref = creature::linked_refinement(conds);
    if (!ref) {
      r.fail("trial=" + std::to_string(t) + " m=" + std::to_string(m) + " no common refinement");
      continue;
    }
    for (const auto& c : conds)
      if (!ref->refines(c)) {
        r.fail("trial=" + std::to_string(t) + " refinement not below an input");
        break;
      }
  }
  return r;
}

}  // namespace forcelab::suites
