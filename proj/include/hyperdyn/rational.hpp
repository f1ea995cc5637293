#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace hyperdyn {

/// Exact rational number. Everything geometric in the library is computed
/// with this type; doubles only appear in display-only CSV columns.
using Rational = mpq_class;

Rational parse_rational(std::string_view text);

/// Lowest-terms "p/q" (or "p" when q == 1).
std::string to_string(const Rational& q);

double to_double(const Rational& q);

inline Rational rat(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::size_t hash_value(const Rational& q);

}  // namespace hyperdyn
