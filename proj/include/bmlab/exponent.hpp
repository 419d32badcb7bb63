#pragma once

#include "bmlab/rational.hpp"

#include <string>
#include <string_view>

namespace bmlab {

/// A rational exponent or one of +inf / -inf.
class Exponent {
 public:
  enum class Kind { Finite, PosInf, NegInf };

  Exponent() = default;
  Exponent(const Rational& v) : value_(v) {}  // NOLINT: rationals are exponents
  Exponent(long v) : value_(v) {}              // NOLINT

  static Exponent pos_inf() { return Exponent(Kind::PosInf); }
  static Exponent neg_inf() { return Exponent(Kind::NegInf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  bool is_zero() const { return is_finite() && value_ == 0; }

  /// Finite value; throws std::logic_error for infinities.
  const Rational& value() const;

  /// Ordering on the extended line.
  friend bool operator<(const Exponent& a, const Exponent& b);
  friend bool operator==(const Exponent& a, const Exponent& b);
  friend bool operator<=(const Exponent& a, const Exponent& b) { return !(b < a); }
  friend bool operator>(const Exponent& a, const Exponent& b) { return b < a; }
  friend bool operator>=(const Exponent& a, const Exponent& b) { return !(a < b); }

 private:
  explicit Exponent(Kind k) : kind_(k) {}

  Kind kind_ = Kind::Finite;
  Rational value_{0};
};

/// Accepts "a/b", "a", decimals, "inf", "+inf", "-inf".
Exponent parse_exponent(std::string_view text);
std::string to_string(const Exponent& e);

}  // namespace bmlab
