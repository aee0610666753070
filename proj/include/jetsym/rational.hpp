#pragma once

#include <gmpxx.h>

#include <string>

namespace jetsym {

/// Exact rational number; always kept in lowest terms with positive denominator.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

}  // namespace jetsym
