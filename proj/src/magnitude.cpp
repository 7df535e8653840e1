#include "forcelab/magnitude.hpp"

#include <algorithm>

namespace forcelab {

void ensure_wide_exponent_range() {
  thread_local bool done = false;
  if (done) return;
  mpfr_set_emax(mpfr_get_emax_max());
  mpfr_set_emin(mpfr_get_emin_min());
  done = true;
}

Float::Float(mpfr_prec_t prec) { mpfr_init2(v_, prec); }

Float::Float(const Float& other) {
  mpfr_init2(v_, other.precision());
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

Float::Float(Float&& other) noexcept {
  mpfr_init2(v_, other.precision());
  mpfr_swap(v_, other.v_);
}

Float& Float::operator=(const Float& other) {
  if (this != &other) {
    mpfr_set_prec(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

Float& Float::operator=(Float&& other) noexcept {
  if (this != &other) {
    mpfr_set_prec(v_, other.precision());
    mpfr_swap(v_, other.v_);
  }
  return *this;
}

Float::~Float() { mpfr_clear(v_); }

namespace {

Float exp2_round(const Float& x, mpfr_rnd_t rnd) {
  Float out(x.precision());
  mpfr_exp2(out.get(), x.get(), rnd);
  return out;
}

Float log2_round(const Float& x, mpfr_rnd_t rnd) {
  Float out(x.precision());
  if (mpfr_sgn(x.get()) <= 0) {
    mpfr_set_inf(out.get(), -1);
  } else {
    mpfr_log2(out.get(), x.get(), rnd);
  }
  return out;
}

Rational to_rational(const Float& f) {
  require(mpfr_number_p(f.get()) != 0, "non-finite magnitude bound",
          Errc::representation_overflow);
  Rational q;
  mpfr_get_q(q.get_mpq_t(), f.get());
  q.canonicalize();
  return q;
}

// Lower bound of the depth-0 value, saturating at the largest finite float.
Float lower_value(const Magnitude& m) {
  Float v = m.lo();
  for (unsigned i = 0; i < m.depth(); ++i) v = exp2_round(v, MPFR_RNDD);
  return v;
}

}  // namespace

Magnitude::Magnitude(unsigned depth, Float lo, Float hi)
    : depth_(depth), lo_(std::move(lo)), hi_(std::move(hi)) {}

Magnitude Magnitude::from_natural(const Natural& n, mpfr_prec_t prec) {
  ensure_wide_exponent_range();
  Float lo(prec), hi(prec);
  mpfr_set_z(lo.get(), n.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi.get(), n.get_mpz_t(), MPFR_RNDU);
  return Magnitude(0, std::move(lo), std::move(hi));
}

Magnitude Magnitude::from_rational(const Rational& q, mpfr_prec_t prec) {
  return from_bounds(0, q, q, prec);
}

Magnitude Magnitude::from_bounds(unsigned depth, const Rational& lo, const Rational& hi,
                                 mpfr_prec_t prec) {
  ensure_wide_exponent_range();
  require(lo <= hi, "magnitude bounds out of order");
  Float l(prec), h(prec);
  mpfr_set_q(l.get(), lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(h.get(), hi.get_mpq_t(), MPFR_RNDU);
  Magnitude m(depth, std::move(l), std::move(h));
  m.normalize();
  return m;
}

Magnitude Magnitude::from_floats(unsigned depth, Float lo, Float hi) {
  ensure_wide_exponent_range();
  require(mpfr_lessequal_p(lo.get(), hi.get()) != 0, "magnitude bounds out of order");
  Magnitude m(depth, std::move(lo), std::move(hi));
  m.normalize();
  return m;
}

Rational Magnitude::lo_rational() const { return to_rational(lo_); }
Rational Magnitude::hi_rational() const { return to_rational(hi_); }

void Magnitude::normalize() {
  require(!mpfr_nan_p(lo_.get()) && !mpfr_nan_p(hi_.get()), "NaN magnitude bound",
          Errc::representation_overflow);
  while (depth_ > 0) {
    Float h = exp2_round(hi_, MPFR_RNDU);
    if (mpfr_inf_p(h.get())) break;
    lo_ = exp2_round(lo_, MPFR_RNDD);
    hi_ = std::move(h);
    --depth_;
  }
}

Magnitude Magnitude::lifted() const {
  return Magnitude(depth_ + 1, log2_round(lo_, MPFR_RNDD), log2_round(hi_, MPFR_RNDU));
}

Magnitude Magnitude::lifted_to(unsigned depth) const {
  require(depth >= depth_, "cannot lower a magnitude by lifting");
  Magnitude m = *this;
  while (m.depth_ < depth) m = m.lifted();
  return m;
}

bool Magnitude::certainly_above_one() const {
  Float v = lower_value(*this);
  return mpfr_cmp_ui(v.get(), 1) > 0;
}

Magnitude log2(const Magnitude& a) {
  if (a.depth_ > 0) {
    Magnitude m(a.depth_ - 1, a.lo_, a.hi_);
    m.normalize();
    return m;
  }
  return Magnitude(0, log2_round(a.lo_, MPFR_RNDD), log2_round(a.hi_, MPFR_RNDU));
}

Magnitude exp2(const Magnitude& a) {
  Magnitude m(a.depth_ + 1, a.lo_, a.hi_);
  m.normalize();
  return m;
}

namespace {

Magnitude hull(const Magnitude& a, const Magnitude& b) {
  unsigned d = std::max(a.depth(), b.depth());
  Magnitude x = a.lifted_to(d), y = b.lifted_to(d);
  const mpfr_prec_t prec = std::max(a.precision(), b.precision());
  Float lo(prec), hi(prec);
  mpfr_min(lo.get(), x.lo().get(), y.lo().get(), MPFR_RNDD);
  mpfr_max(hi.get(), x.hi().get(), y.hi().get(), MPFR_RNDU);
  return Magnitude::from_floats(d, std::move(lo), std::move(hi));
}

Magnitude zero_to(const Float& upper) {
  Float lo(upper.precision());
  mpfr_set_zero(lo.get(), 1);
  return Magnitude::from_floats(0, std::move(lo), upper);
}

}  // namespace

Magnitude add(const Magnitude& a, const Magnitude& b) {
  const mpfr_prec_t prec = std::max(a.precision(), b.precision());
  if (a.depth_ == 0 && b.depth_ == 0) {
    Float lo(prec), hi(prec);
    mpfr_add(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_add(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    if (!mpfr_inf_p(hi.get())) return Magnitude(0, std::move(lo), std::move(hi));
  }
  bool a_big = a.depth_ > b.depth_ ||
               (a.depth_ == b.depth_ && mpfr_cmp(a.hi_.get(), b.hi_.get()) >= 0);
  const Magnitude& big = a_big ? a : b;
  const Magnitude& small = a_big ? b : a;
  require(mpfr_sgn(small.lo_.get()) >= 0 || small.depth_ > 0, "add expects nonnegative terms");

  if (small.depth_ == 0) {
    // log2(big + small) lies in log2(big) + [0, small.hi / big * log2(e)].
    Magnitude lb = log2(big);
    Float lower = lower_value(lb);
    Float delta(prec), log2e(prec);
    mpfr_neg(delta.get(), lower.get(), MPFR_RNDU);
    mpfr_exp2(delta.get(), delta.get(), MPFR_RNDU);
    mpfr_mul(delta.get(), delta.get(), small.hi_.get(), MPFR_RNDU);
    mpfr_const_log2(log2e.get(), MPFR_RNDD);
    mpfr_ui_div(log2e.get(), 1, log2e.get(), MPFR_RNDU);
    mpfr_mul(delta.get(), delta.get(), log2e.get(), MPFR_RNDU);
    return exp2(add(lb, zero_to(delta)));
  }

  Magnitude la = log2(big), lb = log2(small);
  if (la.depth_ == 0 && lb.depth_ == 0) {
    // log2(a + b) = la + log2(1 + 2^(lb - la)), increasing in lb - la.
    Float t_lo(prec), t_hi(prec), out_lo(prec), out_hi(prec);
    mpfr_sub(t_lo.get(), lb.lo_.get(), la.hi_.get(), MPFR_RNDD);
    mpfr_sub(t_hi.get(), lb.hi_.get(), la.lo_.get(), MPFR_RNDU);
    mpfr_exp2(t_lo.get(), t_lo.get(), MPFR_RNDD);
    mpfr_exp2(t_hi.get(), t_hi.get(), MPFR_RNDU);
    mpfr_add_ui(t_lo.get(), t_lo.get(), 1, MPFR_RNDD);
    mpfr_add_ui(t_hi.get(), t_hi.get(), 1, MPFR_RNDU);
    mpfr_log2(t_lo.get(), t_lo.get(), MPFR_RNDD);
    mpfr_log2(t_hi.get(), t_hi.get(), MPFR_RNDU);
    mpfr_add(out_lo.get(), la.lo_.get(), t_lo.get(), MPFR_RNDD);
    mpfr_add(out_hi.get(), la.hi_.get(), t_hi.get(), MPFR_RNDU);
    return exp2(Magnitude(0, std::move(out_lo), std::move(out_hi)));
  }
  Float one(prec);
  mpfr_set_ui(one.get(), 1, MPFR_RNDU);
  Order o = compare(big, small);
  Magnitude base = (o == Order::greater || o == Order::equal) ? la : hull(la, lb);
  return exp2(add(base, zero_to(one)));
}

Magnitude mul(const Magnitude& a, const Magnitude& b) {
  const mpfr_prec_t prec = std::max(a.precision(), b.precision());
  if (a.depth_ == 0 && b.depth_ == 0) {
    require(mpfr_sgn(a.lo_.get()) >= 0 && mpfr_sgn(b.lo_.get()) >= 0,
            "mul expects nonnegative factors");
    Float lo(prec), hi(prec);
    mpfr_mul(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_mul(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    if (!mpfr_inf_p(hi.get())) return Magnitude(0, std::move(lo), std::move(hi));
  }
  Magnitude la = log2(a), lb = log2(b);
  require((la.depth_ > 0 || mpfr_sgn(la.lo_.get()) >= 0) &&
              (lb.depth_ > 0 || mpfr_sgn(lb.lo_.get()) >= 0),
          "large products expect factors >= 1");
  return exp2(add(la, lb));
}

Magnitude pow(const Magnitude& a, const Magnitude& e) {
  if (e.depth_ == 0 && mpfr_zero_p(e.lo_.get()) && mpfr_zero_p(e.hi_.get()))
    return Magnitude::from_natural(Natural(1), a.precision());
  Magnitude la = log2(a);
  require(la.depth_ > 0 || mpfr_sgn(la.lo_.get()) >= 0, "pow expects base >= 1");
  return exp2(mul(la, e));
}

Order compare(const Magnitude& a, const Magnitude& b) {
  unsigned d = std::max(a.depth_, b.depth_);
  Magnitude x = a.lifted_to(d), y = b.lifted_to(d);
  if (mpfr_cmp(x.lo_.get(), y.hi_.get()) > 0) return Order::greater;
  if (mpfr_cmp(x.hi_.get(), y.lo_.get()) < 0) return Order::less;
  if (mpfr_equal_p(x.lo_.get(), x.hi_.get()) && mpfr_equal_p(y.lo_.get(), y.hi_.get()) &&
      mpfr_equal_p(x.lo_.get(), y.lo_.get()))
    return Order::equal;
  return Order::inconclusive;
}

Magnitude intersect(const Magnitude& a, const Magnitude& b) {
  unsigned d = std::max(a.depth_, b.depth_);
  Magnitude x = a.lifted_to(d), y = b.lifted_to(d);
  const mpfr_prec_t prec = std::max(a.precision(), b.precision());
  Float lo(prec), hi(prec);
  mpfr_max(lo.get(), x.lo_.get(), y.lo_.get(), MPFR_RNDD);
  mpfr_min(hi.get(), x.hi_.get(), y.hi_.get(), MPFR_RNDU);
  require(mpfr_lessequal_p(lo.get(), hi.get()) != 0, "disjoint enclosures of one value",
          Errc::inconclusive_interval);
  return Magnitude::from_floats(d, std::move(lo), std::move(hi));
}

}  // namespace forcelab
