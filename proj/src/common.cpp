#include "forcelab/common.hpp"

#include <cctype>

namespace forcelab {

std::string_view errc_name(Errc e) {
  switch (e) {
    case Errc::precondition: return "precondition";
    case Errc::parse: return "parse";
    case Errc::representation_overflow: return "representation-overflow";
    case Errc::inconclusive_interval: return "inconclusive-interval";
    case Errc::witness_not_common: return "witness-not-common";
    case Errc::would_empty: return "would-empty";
    case Errc::enumeration_infeasible: return "enumeration-infeasible";
    case Errc::weight_sum: return "weight-sum";
    case Errc::empty_level: return "empty-level";
    case Errc::branch_not_in_qk: return "branch-not-in-qk";
    case Errc::refinement_failure: return "refinement-failure";
    case Errc::infeasible_window: return "infeasible-window";
    case Errc::eps_not_unit_fraction: return "eps-not-unit-fraction";
    case Errc::prefix_exhausted: return "prefix-exhausted";
    case Errc::state_space_cap: return "state-space-cap";
    case Errc::capacity: return "capacity";
    case Errc::empty_intersection: return "empty-intersection";
    case Errc::invalid_beta: return "invalid-beta";
    case Errc::too_few_members: return "too-few-members";
  }
  return "unknown";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  bool neg = false;
  std::string body = s;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    neg = body[0] == '-';
    body = body.substr(1);
  }
  Rational out;
  if (auto slash = body.find('/'); slash != std::string::npos) {
    std::string p = body.substr(0, slash), q = body.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q)) throw Error(Errc::parse, "bad rational '" + s + "'");
    Natural den(q, 10);
    if (den == 0) throw Error(Errc::parse, "zero denominator in '" + s + "'");
    out = Rational(Natural(p, 10), den);
  } else if (auto dot = body.find('.'); dot != std::string::npos) {
    std::string ip = body.substr(0, dot), fp = body.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!all_digits(ip) || (!fp.empty() && !all_digits(fp)))
      throw Error(Errc::parse, "bad decimal '" + s + "'");
    Natural den = pow(Natural(10), fp.size());
    out = Rational(Natural(ip + fp, 10), den);
  } else {
    if (!all_digits(body)) throw Error(Errc::parse, "bad rational '" + s + "'");
    out = Rational(Natural(body, 10));
  }
  out.canonicalize();
  return neg ? Rational(-out) : out;
}

std::string to_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  return c.get_str();
}

std::string to_string(const Natural& n) { return n.get_str(); }

Natural pow(const Natural& base, unsigned long exp) {
  Natural out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

Rational pow(const Rational& base, unsigned long exp) {
  Natural num = pow(Natural(base.get_num()), exp);
  Natural den = pow(Natural(base.get_den()), exp);
  Rational out(num, den);
  out.canonicalize();
  return out;
}

Rational make_rational(long p, long q) {
  Rational out(p, q);
  out.canonicalize();
  return out;
}

Natural isqrt_floor(const Natural& n) {
  Natural out;
  mpz_sqrt(out.get_mpz_t(), n.get_mpz_t());
  return out;
}

Natural isqrt_ceil(const Natural& n) {
  Natural r = isqrt_floor(n);
  if (r * r < n) ++r;
  return r;
}

SqrtBracket sqrt_bracket(const Rational& q, unsigned bits) {
  require(q >= 0, "sqrt of a negative rational");
  Rational c(q);
  c.canonicalize();
  const Natural& p = c.get_num();
  const Natural& r = c.get_den();
  if (mpz_perfect_square_p(p.get_mpz_t()) && mpz_perfect_square_p(r.get_mpz_t())) {
    Rational exact(isqrt_floor(p), isqrt_floor(r));
    exact.canonicalize();
    return {exact, exact};
  }
  // sqrt(p/r) = sqrt(p*r)/r, scaled by 2^bits.
  Natural scaled = p * r;
  scaled <<= 2 * bits;
  Natural den = r;
  den <<= bits;
  Rational lo(isqrt_floor(scaled), den), hi(isqrt_ceil(scaled), den);
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}

}  // namespace forcelab
