#pragma once

// Certified magnitudes for numbers too large to write down.
//
// A Magnitude stores a depth d and an MPFR interval [lo, hi] with the
// guarantee log2^(d)(v) in [lo, hi], where log2^(d) is d-fold iterated log2.
// Depth 0 is the value itself. Values are kept at the lowest depth whose
// bounds still fit MPFR's exponent range. All operations round outward.

#include <mpfr.h>

#include <optional>

#include "forcelab/common.hpp"

namespace forcelab {

class Float {
 public:
  explicit Float(mpfr_prec_t prec);
  Float(const Float& other);
  Float(Float&& other) noexcept;
  Float& operator=(const Float& other);
  Float& operator=(Float&& other) noexcept;
  ~Float();

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

 private:
  mpfr_t v_;
};

enum class Order { less, equal, greater, inconclusive };

class Magnitude {
 public:
  /// Exact natural (or rational) lifted to an outward-rounded depth-0 interval.
  static Magnitude from_natural(const Natural& n, mpfr_prec_t prec);
  static Magnitude from_rational(const Rational& q, mpfr_prec_t prec);
  /// Interval [lo, hi] at the given depth; endpoints rounded outward.
  static Magnitude from_bounds(unsigned depth, const Rational& lo, const Rational& hi,
                               mpfr_prec_t prec);

  unsigned depth() const { return depth_; }
  const Float& lo() const { return lo_; }
  const Float& hi() const { return hi_; }
  mpfr_prec_t precision() const { return lo_.precision(); }

  /// Interval from floats already rounded outward by the caller.
  static Magnitude from_floats(unsigned depth, Float lo, Float hi);

  /// Endpoints as exact rationals (binary floats convert exactly).
  Rational lo_rational() const;
  Rational hi_rational() const;

  /// Same value described one level up: log2^(d+1)(v) bounds, depth + 1.
  Magnitude lifted() const;
  /// Interval at exactly `depth` (>= current depth).
  Magnitude lifted_to(unsigned depth) const;

  friend Magnitude log2(const Magnitude& a);
  friend Magnitude exp2(const Magnitude& a);
  friend Magnitude add(const Magnitude& a, const Magnitude& b);
  friend Magnitude mul(const Magnitude& a, const Magnitude& b);
  /// a^e; requires a >= 1 and e >= 0.
  friend Magnitude pow(const Magnitude& a, const Magnitude& e);
  friend Order compare(const Magnitude& a, const Magnitude& b);
  /// Intersection of two enclosures of the same value (tightest at common depth).
  friend Magnitude intersect(const Magnitude& a, const Magnitude& b);

  /// True when the enclosed depth-0 interval lies entirely above 1.
  bool certainly_above_one() const;

 private:
  Magnitude(unsigned depth, Float lo, Float hi);
  void normalize();

  unsigned depth_ = 0;
  Float lo_;
  Float hi_;
};

Magnitude log2(const Magnitude& a);
Magnitude exp2(const Magnitude& a);
Magnitude add(const Magnitude& a, const Magnitude& b);
Magnitude mul(const Magnitude& a, const Magnitude& b);
Magnitude pow(const Magnitude& a, const Magnitude& e);
Order compare(const Magnitude& a, const Magnitude& b);
Magnitude intersect(const Magnitude& a, const Magnitude& b);

/// Widen MPFR's exponent range to its maximum in the calling thread.
void ensure_wide_exponent_range();

}  // namespace forcelab
