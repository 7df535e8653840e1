#include <doctest.h>

#include "forcelab/params.hpp"

using namespace forcelab;
using namespace forcelab::params;

namespace {

Natural two_to(unsigned long e) { return forcelab::pow(Natural(2), e); }

// Independent evaluation of the defining formulas with plain big integers.
struct Plain {
  Natural levelCount, rho, b, pi, a, M;
};

Plain plain_level(const Natural& levelCount, unsigned h) {
  Plain p;
  p.levelCount = levelCount;
  p.rho = std::max(levelCount, Natural(h + 2));
  p.b = Natural((h + 1) * (h + 1)) * forcelab::pow(p.rho, h + 1);
  p.pi = forcelab::pow(p.b, forcelab::pow(p.rho, h).get_ui());
  p.a = forcelab::pow(p.pi, h + 2);
  p.M = p.a * p.a;
  return p;
}

}  // namespace

TEST_SUITE("params") {

TEST_CASE("levels 0 and 1 match a plain big-integer evaluation") {
  auto t = tower(1);
  Plain p0 = plain_level(1, 0);
  Plain p1 = plain_level(p0.M, 1);
  const Level& L0 = t.level(0);
  const Level& L1 = t.level(1);
  CHECK(*L0.rho.exact == 2);
  CHECK(*L0.pi.exact == 2);
  CHECK(*L0.a.exact == 4);
  CHECK(*L0.bigM.exact == 16);
  CHECK(*L0.b.exact == 2);
  CHECK(*L1.levelCount.exact == 16);
  CHECK(*L1.rho.exact == 16);
  CHECK(*L1.b.exact == 1024);
  CHECK(*L1.pi.exact == two_to(160));
  CHECK(*L1.a.exact == two_to(480));
  CHECK(*L1.bigM.exact == two_to(960));
  CHECK(*L1.pi.exact == p1.pi);
  CHECK(*L1.bigM.exact == p1.M);
}

TEST_CASE("level 2: rho exact, pi as a log2 range around 2^1928 (2892 + log2 9)") {
  auto t = tower(2);
  const Level& L2 = t.level(2);
  REQUIRE(L2.rho.exact);
  CHECK(*L2.rho.exact == two_to(964));
  REQUIRE_FALSE(L2.pi.exact);
  CHECK(L2.pi.depth == 1);
  // log2 9 lies in [3.169925001442312, 3.169925001442313]
  const Rational log9lo = Rational(Natural(3169925001442312UL), Natural(1000000000000000UL));
  const Rational log9hi = Rational(Natural(3169925001442313UL), Natural(1000000000000000UL));
  const Rational scale(two_to(1928));
  CHECK(L2.pi.lo <= scale * (2892 + log9hi));
  CHECK(L2.pi.hi >= scale * (2892 + log9lo));
  CHECK(L2.pi.lo <= L2.pi.hi);
  // relative width well under 1e-12
  CHECK((L2.pi.hi - L2.pi.lo) * Rational(Natural("1000000000000")) < L2.pi.lo);
}

TEST_CASE("identities hold through h = 4") {
  auto t = tower(4);
  auto checks = verify_tower_identities(t);
  CHECK(checks.size() == 5 * 4 - 1);
  for (const auto& c : checks) {
    INFO("h=" << c.h << " " << c.name);
    CHECK(c.passed);
  }
}

TEST_CASE("refined ranges are nested in the originals") {
  auto t = tower(3);
  auto f = t.refined(512);
  for (unsigned h = 0; h <= 3; ++h) {
    const ParamValue& a = t.level(h).pi;
    const ParamValue& b = f.level(h).pi;
    if (a.exact) {
      CHECK(*b.exact == *a.exact);
    } else {
      CHECK(b.depth == a.depth);
      CHECK(b.lo >= a.lo);
      CHECK(b.hi <= a.hi);
    }
  }
}

TEST_CASE("slalom_capacity") {
  auto t = tower(2);
  CHECK(*slalom_capacity(t, 0, 0).exact == 1);
  CHECK(*slalom_capacity(t, 1, 1).exact == 16);
  CHECK(*slalom_capacity(t, 2, 1).exact == two_to(964));
  CHECK_THROWS(slalom_capacity(t, 1, 2));
}

TEST_CASE("tail_product_lower") {
  CHECK(tail_product_lower(1, 2) == Rational(26, 27));
  Rational two = Rational(26, 27) * Rational(63, 64);
  CHECK(tail_product_lower(1, 3) == two);
  CHECK_THROWS(tail_product_lower(5, 5));
  for (unsigned long k = 0; k < 6; ++k)
    for (unsigned long H = k + 1; H < 12; ++H) {
      CHECK(tail_product_lower(k, H + 1) < tail_product_lower(k, H));
      if (H > k + 1) CHECK(tail_product_lower(k + 1, H) > tail_product_lower(k, H));
    }
}

}  // TEST_SUITE
