#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace bmlab {

/// Exact arbitrary-precision fraction. Always kept in canonical form.
using Rational = mpq_class;
using Integer = mpz_class;

/// Thrown when text cannot be read as a rational or exponent.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "a/b", "a" or a finite decimal literal such as "-2.75".
Rational parse_rational(std::string_view text);

/// Formats as "a" when the denominator is 1, else "a/b".
std::string to_string(const Rational& r);

Integer floor(const Rational& r);
Integer ceil(const Rational& r);

/// Exact r^k for integer k (r != 0 when k < 0).
Rational pow_int(const Rational& r, long k);

/// If r has an exact rational k-th root returns true and stores it in out.
bool exact_root(const Rational& r, unsigned long k, Rational& out);

double to_double(const Rational& r);

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace bmlab
