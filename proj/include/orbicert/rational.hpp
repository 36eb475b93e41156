#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "orbicert/error.hpp"

namespace orbicert {

using Integer = mpz_class;

// mpq_class keeps gcd(|num|, den) = 1 and den > 0 after every arithmetic
// operation; values built from raw parts must go through canonicalize().
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q" (decimal, q != 0). Throws InputError.
Rational parse_rational(std::string_view text);

/// "p/q", with "/q" omitted when q == 1.
std::string to_string(const Rational& q);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline Rational zero_like(const Rational&) { return Rational(0); }
inline Rational one_like(const Rational&) { return Rational(1); }

inline Rational inverse(const Rational& q) {
  if (is_zero(q)) throw PreconditionError("inverse of zero rational");
  Rational r = 1 / q;
  return r;
}

}  // namespace orbicert
