#include "forcelab/params.hpp"

#include <algorithm>

namespace forcelab::params {

namespace {

std::size_t bits(const Natural& n) { return mpz_sizeinbase(n.get_mpz_t(), 2); }

// Working value: exact when small enough, always with an enclosure.
struct Value {
  std::optional<Natural> exact;
  Magnitude mag;
};

class Calc {
 public:
  explicit Calc(const TowerConfig& c) : cfg_(c) {}

  Value of(const Natural& n) const {
    return Value{keep(n), Magnitude::from_natural(n, cfg_.precisionBits)};
  }

  Value of(const ParamValue& p) const {
    if (p.exact) return of(*p.exact);
    return Value{std::nullopt, p.magnitude(cfg_.precisionBits)};
  }

  Value mul(const Value& x, const Value& y) const {
    if (x.exact && y.exact && bits(*x.exact) + bits(*y.exact) <= cfg_.exactBitThreshold + 1) {
      Natural p = *x.exact * *y.exact;
      if (keep(p)) return of(p);
    }
    return Value{std::nullopt, forcelab::mul(x.mag, y.mag)};
  }

  Value pow(const Value& x, const Value& e) const {
    if (x.exact && e.exact && e.exact->fits_ulong_p()) {
      unsigned long k = e.exact->get_ui();
      // bits(x^k) lies in ((bits(x) - 1) * k, bits(x) * k].
      Natural lower = Natural(static_cast<unsigned long>(bits(*x.exact) - 1)) * k;
      if (lower < cfg_.exactBitThreshold) {
        Natural p = forcelab::pow(*x.exact, k);
        if (keep(p)) return of(p);
      }
    }
    return Value{std::nullopt, forcelab::pow(x.mag, e.mag)};
  }

  ParamValue out(const Value& v) const {
    if (v.exact) return ParamValue::of(*v.exact);
    unsigned d = std::max(1u, v.mag.depth());
    require(d <= cfg_.maxDepth, "iterated log depth " + std::to_string(d) + " exceeds bound",
            Errc::representation_overflow);
    Magnitude m = v.mag.lifted_to(d);
    ParamValue p;
    p.depth = d;
    p.lo = m.lo_rational();
    p.hi = m.hi_rational();
    return p;
  }

 private:
  std::optional<Natural> keep(const Natural& n) const {
    if (bits(n) < cfg_.exactBitThreshold) return n;
    return std::nullopt;
  }

  TowerConfig cfg_;
};

ParamValue intersect_ranges(const ParamValue& coarse, const ParamValue& fine) {
  if (coarse.exact || fine.exact || coarse.depth != fine.depth) return fine;
  ParamValue p = fine;
  p.lo = std::max(coarse.lo, fine.lo);
  p.hi = std::min(coarse.hi, fine.hi);
  require(p.lo <= p.hi, "refined range disjoint from original", Errc::inconclusive_interval);
  return p;
}

}  // namespace

ParamValue ParamValue::of(const Natural& n) {
  require(n >= 1, "parameter values are >= 1");
  ParamValue p;
  p.exact = n;
  p.depth = 0;
  p.lo = p.hi = 0;
  return p;
}

Magnitude ParamValue::magnitude(mpfr_prec_t prec) const {
  if (exact) return Magnitude::from_natural(*exact, prec);
  return Magnitude::from_bounds(depth, lo, hi, prec);
}

ParamTower tower(const TowerConfig& config) {
  require(config.hMax <= 8, "hMax must be at most 8");
  require(config.precisionBits >= 16, "precision must be at least 16 bits");
  Calc c(config);
  ParamTower t;
  t.config_ = config;
  Value levelCount = c.of(Natural(1));
  for (unsigned h = 0; h <= config.hMax; ++h) {
    Level lv;
    Value floor = c.of(Natural(h + 2));
    bool useCount;
    if (levelCount.exact) {
      useCount = *levelCount.exact >= h + 2;
    } else {
      Order o = compare(levelCount.mag, floor.mag);
      require(o != Order::inconclusive, "cannot order |T*| against h+2",
              Errc::inconclusive_interval);
      useCount = o != Order::less;
    }
    Value rho = useCount ? levelCount : floor;
    Value hp1sq = c.of(Natural((h + 1) * (h + 1)));
    Value b = c.mul(hp1sq, c.pow(rho, c.of(Natural(h + 1))));
    Value piExp = c.pow(rho, c.of(Natural(h)));
    Value pi = c.pow(b, piExp);
    Value a = c.pow(pi, c.of(Natural(h + 2)));
    Value bigM = c.pow(a, c.of(Natural(2)));

    lv.levelCount = c.out(levelCount);
    lv.rho = c.out(rho);
    lv.rhoIsLevelCount = useCount;
    lv.b = c.out(b);
    lv.pi = c.out(pi);
    lv.a = c.out(a);
    lv.bigM = c.out(bigM);
    t.levels_.push_back(std::move(lv));
    if (h < config.hMax) levelCount = c.mul(levelCount, bigM);
  }
  return t;
}

ParamTower tower(unsigned hMax, unsigned long exactBitThreshold) {
  TowerConfig c;
  c.hMax = hMax;
  c.exactBitThreshold = exactBitThreshold;
  return tower(c);
}

ParamTower ParamTower::refined(unsigned precisionBits) const {
  TowerConfig c = config_;
  c.precisionBits = precisionBits;
  ParamTower fine = tower(c);
  for (std::size_t h = 0; h < levels_.size(); ++h) {
    const Level& o = levels_[h];
    Level& n = fine.levels_[h];
    n.levelCount = intersect_ranges(o.levelCount, n.levelCount);
    n.rho = intersect_ranges(o.rho, n.rho);
    n.pi = intersect_ranges(o.pi, n.pi);
    n.a = intersect_ranges(o.a, n.a);
    n.bigM = intersect_ranges(o.bigM, n.bigM);
    n.b = intersect_ranges(o.b, n.b);
  }
  return fine;
}

std::string method_name(CheckMethod m) {
  switch (m) {
    case CheckMethod::exact: return "exact";
    case CheckMethod::interval: return "interval";
    case CheckMethod::refined_interval: return "refined-interval";
    case CheckMethod::symbolic: return "symbolic";
  }
  return "unknown";
}

namespace {

class Verifier {
 public:
  Verifier(const ParamTower& t, const VerifyOptions& o) : t_(t), opts_(o) {}

  std::vector<IdentityCheck> run() {
    std::vector<IdentityCheck> out;
    for (unsigned h = 0; h <= t_.maxHeight(); ++h) {
      out.push_back(structural(h));
      if (h >= 1) out.push_back(a_beats_pi_power(h));
      out.push_back(greater_than(h, "pi>h^2", &Level::pi, Natural(h * h), false));
      out.push_back(greater_than(h, "rho>=h+2", &Level::rho, Natural(h + 2), true));
    }
    return out;
  }

 private:
  const ParamTower& fine() {
    if (!fine_) fine_ = t_.refined(t_.config().precisionBits * 2);
    return *fine_;
  }

  mpfr_prec_t prec(const ParamTower& t) const { return t.config().precisionBits; }

  // pi(h) = b(h)^(rho(h)^h). Exact when all three are exact and the power is
  // small; otherwise the identity holds by construction and the enclosures
  // must at least overlap.
  IdentityCheck structural(unsigned h) {
    const Level& L = t_.level(h);
    IdentityCheck c{h, "pi=b^(rho^h)", false, CheckMethod::exact};
    if (L.pi.exact && L.b.exact && L.rho.exact) {
      Natural e = forcelab::pow(*L.rho.exact, h);
      if (e.fits_ulong_p() && bits(*L.b.exact) * e.get_ui() <= 4 * t_.config().exactBitThreshold) {
        c.passed = forcelab::pow(*L.b.exact, e.get_ui()) == *L.pi.exact;
        return c;
      }
    }
    const mpfr_prec_t p = prec(t_);
    Magnitude e = forcelab::pow(L.rho.magnitude(p), Magnitude::from_natural(Natural(h), p));
    Magnitude rebuilt = forcelab::pow(L.b.magnitude(p), e);
    Order o = compare(rebuilt, L.pi.magnitude(p));
    c.method = CheckMethod::symbolic;
    c.passed = o != Order::less && o != Order::greater;
    return c;
  }

  Order compare_a_pi(const ParamTower& t, unsigned h) {
    const Level& L = t.level(h);
    const mpfr_prec_t p = prec(t);
    Magnitude rhs = forcelab::pow(L.pi.magnitude(p), Magnitude::from_natural(Natural(h), p));
    return compare(L.a.magnitude(p), rhs);
  }

  IdentityCheck a_beats_pi_power(unsigned h) {
    const Level& L = t_.level(h);
    IdentityCheck c{h, "a>pi^h", false, CheckMethod::exact};
    if (L.a.exact && L.pi.exact) {
      c.passed = *L.a.exact > forcelab::pow(*L.pi.exact, h);
      return c;
    }
    Order o = compare_a_pi(t_, h);
    c.method = CheckMethod::interval;
    if (o == Order::inconclusive) {
      o = compare_a_pi(fine(), h);
      c.method = CheckMethod::refined_interval;
    }
    if (o == Order::inconclusive) {
      require(opts_.allowSymbolic, "a(" + std::to_string(h) + ") vs pi^h",
              Errc::inconclusive_interval);
      // a = pi^(h+2) by construction; with pi > 1 the larger exponent wins.
      c.method = CheckMethod::symbolic;
      c.passed = L.pi.magnitude(prec(t_)).certainly_above_one();
      return c;
    }
    c.passed = o == Order::greater;
    return c;
  }

  IdentityCheck greater_than(unsigned h, const std::string& name, ParamValue Level::*field,
                             const Natural& bound, bool allowEqual) {
    const ParamValue& v = t_.level(h).*field;
    IdentityCheck c{h, name, false, CheckMethod::exact};
    if (v.exact) {
      c.passed = allowEqual ? *v.exact >= bound : *v.exact > bound;
      return c;
    }
    auto decide = [&](const ParamTower& t) {
      const mpfr_prec_t p = prec(t);
      return compare((t.level(h).*field).magnitude(p), Magnitude::from_natural(bound, p));
    };
    Order o = decide(t_);
    c.method = CheckMethod::interval;
    if (o == Order::inconclusive) {
      o = decide(fine());
      c.method = CheckMethod::refined_interval;
    }
    require(o != Order::inconclusive, name + " at h=" + std::to_string(h),
            Errc::inconclusive_interval);
    c.passed = o == Order::greater || (allowEqual && o == Order::equal);
    return c;
  }

  const ParamTower& t_;
  VerifyOptions opts_;
  std::optional<ParamTower> fine_;
};

}  // namespace

std::vector<IdentityCheck> verify_tower_identities(const ParamTower& t,
                                                   const VerifyOptions& opts) {
  return Verifier(t, opts).run();
}

ParamValue slalom_capacity(const ParamTower& t, unsigned h, unsigned e) {
  require(h <= t.maxHeight(), "height beyond tower");
  require(e <= h, "slalom exponent must satisfy e <= h");
  Calc c(t.config());
  return c.out(c.pow(c.of(t.level(h).rho), c.of(Natural(e))));
}

Rational tail_product_lower(unsigned long k, unsigned long H) {
  require(H > k, "tail product needs H > k");
  Rational out(1);
  for (unsigned long h = k + 1; h <= H; ++h) {
    Natural cube = forcelab::pow(Natural(h + 1), 3);
    out *= Rational(cube - 1, cube);
  }
  out.canonicalize();
  return out;
}

}  // namespace forcelab::params
