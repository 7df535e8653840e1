#include <doctest.h>

#include <random>

#include "forcelab/fam.hpp"

using namespace forcelab;
using namespace forcelab::fam;

namespace {

PointSet range(Point lo, Point hi) {
  PointSet s;
  for (Point p = lo; p < hi; ++p) s.insert(p);
  return s;
}

PointSet complement(const PointSet& s, Point window) {
  PointSet out;
  for (Point p = 0; p < window; ++p)
    if (!s.count(p)) out.insert(p);
  return out;
}

// One named set A with weight w and its complement with 1 - w.
MeasureAssignment two_atoms(Point window, const PointSet& a, const Rational& w) {
  return MeasureAssignment(window, {{"A", a}}, {{a, w}, {complement(a, window), 1 - w}});
}

// Exhaustive search over every subset of (kStar, W) by bitmask; returns the
// least size of a witness, or 0 when none exists.
std::size_t brute_average(const MeasureAssignment& m, const std::vector<PointSet>& partition,
                          const std::vector<AverageSequence>& seqs, const Rational& eps, Point kStar,
                          std::size_t sizeCap) {
  std::vector<Point> pool;
  for (Point p = kStar + 1; p < m.window(); ++p) pool.push_back(p);
  std::size_t best = 0;
  for (unsigned long mask = 1; mask < (1UL << pool.size()); ++mask) {
    PointSet u;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (mask >> i & 1) u.insert(pool[i]);
    if (u.size() > sizeCap || (best && u.size() >= best)) continue;
    bool ok = true;
    for (const auto& cell : partition) {
      const Rational d = frequency(cell, u) - m.xi(cell);
      ok = ok && abs(d) <= eps;
    }
    for (const auto& s : seqs) {
      Rational sum = 0;
      for (Point p : u) sum += s.a[p];
      ok = ok && sum / Rational(static_cast<unsigned long>(u.size())) >= s.b - eps;
    }
    if (ok) best = u.size();
  }
  return best;
}

}  // namespace

TEST_SUITE("fam") {

TEST_CASE("measure assignment validation") {
  CHECK_THROWS(MeasureAssignment(4, {{"A", {0, 1}}}, {{{0, 1}, Rational(1, 2)}}));
  CHECK_THROWS(MeasureAssignment(4, {{"A", {0, 1}}}, {{{0, 1}, Rational(1, 2)}, {{2, 3}, Rational(1, 3)}}));
  CHECK_THROWS(MeasureAssignment(4, {{"A", {0, 7}}}, {{{0, 1, 2, 3}, 1}}));
  auto m = two_atoms(8, {0, 2, 4, 6}, Rational(1, 2));
  CHECK(m.xi("A") == Rational(1, 2));
  CHECK(m.xi(range(0, 8)) == 1);
  CHECK_THROWS(m.xi(PointSet{0, 1}));
}

TEST_CASE("size_bound") {
  CHECK(size_bound(1, Rational(1, 2)) == 4);
  CHECK(size_bound(0, 1) == 1);
  CHECK(size_bound(3, Rational(1, 10)) == 80);
  CHECK(size_bound(2, Rational(2, 5)) == 12);
}

TEST_CASE("approximate_support examples") {
  auto m = two_atoms(10, {0, 2, 4, 6, 8}, Rational(1, 2));
  auto w = approximate_support(m, Rational(1, 2), 0);
  CHECK(w.u.size() <= 4);
  CHECK(frequency(m.sets().at("A"), w.u) == Rational(1, 2));
  CHECK(w.perSetError.at("A") == 0);
  CHECK(*w.u.begin() > 0);

  MeasureAssignment whole(8, {{"A", range(0, 8)}}, {{range(0, 8), 1}});
  auto v = approximate_support(whole, Rational(1, 3), 0);
  CHECK(v.perSetError.at("A") == 0);

  try {
    approximate_support(m, Rational(1, 2), 8);
    FAIL("expected infeasible_window");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::infeasible_window);
  }
  try {
    approximate_support(m, Rational(2, 5), 0);
    FAIL("expected eps_not_unit_fraction");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::eps_not_unit_fraction);
  }
}

TEST_CASE("approximate_support: strict error and size bound on random instances, finer eps still succeeds") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Point window = 2000;
    std::map<std::string, PointSet> sets;
    const unsigned n = 1 + rng() % 3;
    for (unsigned i = 0; i < n; ++i) {
      PointSet s;
      for (Point p = 0; p < window; ++p)
        if (rng() % 2) s.insert(p);
      sets["A" + std::to_string(i)] = s;
    }
    // atoms by membership signature
    std::map<std::vector<bool>, PointSet> atoms;
    for (Point p = 0; p < window; ++p) {
      std::vector<bool> sig;
      for (const auto& [name, s] : sets) sig.push_back(s.count(p));
      atoms[sig].insert(p);
    }
    std::vector<AtomWeight> aw;
    unsigned long total = 0;
    std::vector<unsigned long> raw;
    for (std::size_t i = 0; i < atoms.size(); ++i) total += raw.emplace_back(rng() % 5);
    if (total == 0) raw[0] = total = 1;
    std::size_t i = 0;
    for (const auto& [sig, atom] : atoms) aw.push_back({atom, Rational(raw[i++], total)});
    for (auto& a : aw) a.weight.canonicalize();
    MeasureAssignment m(window, sets, aw);
    for (unsigned long L : {1UL, 3UL, 7UL}) {
      const Rational eps(1, L);
      auto w = approximate_support(m, eps, 10);
      CHECK(Natural(w.u.size()) <= size_bound(n, eps));
      CHECK(*w.u.begin() > 10);
      for (const auto& [name, s] : sets) {
        CHECK(abs(frequency(s, w.u) - m.xi(s)) < eps);
        CHECK(w.perSetError.at(name) < eps);
      }
    }
  }
}

TEST_CASE("check_intersection_hypothesis") {
  auto m = two_atoms(6, {0, 1, 2}, Rational(1, 2));
  CHECK(check_intersection_hypothesis(m, {range(0, 6)}).holds);
  // candidate disjoint from the positive atom {0,1,2}
  auto r = check_intersection_hypothesis(m, {range(3, 6)});
  CHECK_FALSE(r.holds);
  CHECK(r.atom == PointSet{0, 1, 2});
  // pairwise but not triple-wise meeting {0,1,2}
  auto m1 = two_atoms(6, {0, 1, 2}, 1);
  std::vector<PointSet> cands{{0, 1, 3, 4, 5}, {1, 2, 3, 4, 5}, {0, 2, 3, 4, 5}};
  auto t = check_intersection_hypothesis(m1, {cands[0], cands[1]});
  CHECK(t.holds);
  auto f = check_intersection_hypothesis(m1, cands);
  CHECK_FALSE(f.holds);
  CHECK(f.subfamily.size() == 3);
  // the zero-weight complement imposes nothing
  CHECK(check_intersection_hypothesis(m1, {range(0, 3)}).holds);
  // monotone: adding candidates never turns false into true
  auto more = cands;
  more.push_back(range(0, 6));
  CHECK_FALSE(check_intersection_hypothesis(m1, more).holds);
}

TEST_CASE("check_average_hypothesis examples") {
  MeasureAssignment whole(5, {{"A", range(0, 5)}}, {{range(0, 5), 1}});
  auto w = check_average_hypothesis(whole, {range(0, 5)}, {}, Rational(1, 10), 1, 3);
  REQUIRE(w);
  CHECK(w->u == PointSet{2});

  // constant sequences: the partition alone decides
  auto m = two_atoms(8, {0, 2, 4, 6}, Rational(1, 2));
  std::vector<PointSet> part{m.sets().at("A"), complement(m.sets().at("A"), 8)};
  AverageSequence constant{std::vector<Rational>(8, Rational(2, 3)), Rational(2, 3)};
  auto a = check_average_hypothesis(m, part, {}, Rational(1, 10), 0, 4);
  auto b = check_average_hypothesis(m, part, {constant}, Rational(1, 10), 0, 4);
  REQUIRE(a);
  REQUIRE(b);
  CHECK(a->u == b->u);
  CHECK(a->u.size() == 2);

  // xi(A) = 1/6 and eps = 1/100: only six-point supports with one point of A
  auto six = two_atoms(10, {0, 1, 2}, Rational(1, 6));
  std::vector<PointSet> p6{six.sets().at("A"), complement(six.sets().at("A"), 10)};
  auto s = check_average_hypothesis(six, p6, {}, Rational(1, 100), 0, 8);
  REQUIRE(s);
  CHECK(s->u == PointSet{1, 3, 4, 5, 6, 7});
  CHECK(brute_average(six, p6, {}, Rational(1, 100), 0, 8) == 6);
  CHECK_FALSE(check_average_hypothesis(six, p6, {}, Rational(1, 100), 0, 5));
  CHECK(brute_average(six, p6, {}, Rational(1, 100), 0, 5) == 0);
}

TEST_CASE("check_average_hypothesis agrees with the bitmask oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const Point window = 12;
    PointSet a;
    for (Point p = 0; p < window; ++p)
      if (rng() % 2) a.insert(p);
    if (a.empty() || a.size() == window) continue;
    const Rational w(1 + rng() % 5, 6);
    auto m = two_atoms(window, a, Rational(w));
    std::vector<PointSet> part{a, complement(a, window)};
    AverageSequence seq;
    for (Point p = 0; p < window; ++p) seq.a.push_back(Rational(rng() % 4));
    seq.b = Rational(rng() % 4);
    const Rational eps(1, 2 + rng() % 8);
    const std::size_t cap = 1 + rng() % 6;
    auto found = check_average_hypothesis(m, part, {seq}, eps, 2, cap);
    const std::size_t least = brute_average(m, part, {seq}, eps, 2, cap);
    CHECK(found.has_value() == (least > 0));
    if (found) CHECK(found->u.size() == least);
  }
}

}  // TEST_SUITE
