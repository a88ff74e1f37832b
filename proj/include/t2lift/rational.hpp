#pragma once

#include <gmpxx.h>

#include <string>

namespace t2lift {

// Exact rational arithmetic. Zero-testing across the library relies on these
// being exact; no floating point sneaks into symbolic components.
using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// "3.14" -> 157/50, "12" -> 12. Accepts [0-9]+ optionally followed by
// '.' [0-9]+. Signs are handled by the expression grammar, not here.
Rational rational_from_decimal(const std::string& text);

std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace t2lift
