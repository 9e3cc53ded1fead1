#pragma once

#include <gmpxx.h>

#include <climits>
#include <cstdint>
#include <string>

#include "eisen/errors.hpp"

namespace eisen {

/// Arbitrary-precision rational, always kept in canonical (reduced) form.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) fail(ErrorCode::DomainError, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Formats as "a" or "a/b" with the sign on the numerator.
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Rational parse_rational(const std::string& text) {
  Rational r;
  if (text.empty() || r.set_str(text, 10) != 0) fail(ErrorCode::ParseError, "not a rational: '" + text + "'");
  if (r.get_den() == 0) fail(ErrorCode::ParseError, "zero denominator: '" + text + "'");
  r.canonicalize();
  return r;
}

inline Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) fail(ErrorCode::DomainError, "zero to a negative power");
    return pow(Rational(1) / base, -exponent);
  }
  Rational result(1), b = base;
  unsigned long e = static_cast<unsigned long>(exponent);
  while (e > 0) {
    if (e & 1UL) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

inline long valuation(const mpz_class& z, long p) {
  if (z == 0) return LONG_MAX;
  mpz_class v = z;
  long k = 0;
  while (mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(p)) != 0) {
    v /= p;
    ++k;
  }
  return k;
}

/// p-adic valuation; LONG_MAX for zero.
inline long valuation(const Rational& r, long p) {
  if (r == 0) return LONG_MAX;
  return valuation(r.get_num(), p) - valuation(r.get_den(), p);
}

/// True when r lies in the local ring Z_(p).
inline bool is_p_integral(const Rational& r, long p) { return r == 0 || valuation(r, p) >= 0; }

inline Rational p_adic_abs(const Rational& r, long p) {
  if (r == 0) return Rational(0);
  return pow(Rational(p), -valuation(r, p));
}

}  // namespace eisen
