#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace forcelab {

using Natural = mpz_class;
using Rational = mpq_class;

enum class Errc {
  precondition,
  parse,
  representation_overflow,
  inconclusive_interval,
  witness_not_common,
  would_empty,
  enumeration_infeasible,
  weight_sum,
  empty_level,
  branch_not_in_qk,
  refinement_failure,
  infeasible_window,
  eps_not_unit_fraction,
  prefix_exhausted,
  state_space_cap,
  capacity,
  empty_intersection,
  invalid_beta,
  too_few_members,
};

std::string_view errc_name(Errc e);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline void require(bool ok, const std::string& what, Errc code = Errc::precondition) {
  if (!ok) throw Error(code, what);
}

/// Parses "p/q", "p" or a finite decimal such as "0.25" into a reduced rational.
Rational parse_rational(std::string_view text);
/// Canonical reduced form "p/q" ("p" when q = 1).
std::string to_string(const Rational& q);
std::string to_string(const Natural& n);

Natural pow(const Natural& base, unsigned long exp);
Rational pow(const Rational& base, unsigned long exp);
Rational make_rational(long p, long q = 1);

/// floor(sqrt(n)) and ceil(sqrt(n)).
Natural isqrt_floor(const Natural& n);
Natural isqrt_ceil(const Natural& n);

/// Dyadic bracket of sqrt(q): lo <= sqrt(q) <= hi with hi - lo <= 2^-bits.
/// Both ends equal sqrt(q) exactly when q is a square of a rational.
struct SqrtBracket {
  Rational lo;
  Rational hi;
};
SqrtBracket sqrt_bracket(const Rational& q, unsigned bits);

}  // namespace forcelab
