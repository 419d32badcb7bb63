#include "bmlab/exponent.hpp"

#include <stdexcept>

namespace bmlab {

const Rational& Exponent::value() const {
  if (!is_finite()) throw std::logic_error("Exponent::value on an infinite exponent");
  return value_;
}

bool operator<(const Exponent& a, const Exponent& b) {
  if (a.kind_ == b.kind_) return a.is_finite() && a.value_ < b.value_;
  if (a.is_neg_inf()) return true;
  if (b.is_pos_inf()) return true;
  return false;
}

bool operator==(const Exponent& a, const Exponent& b) {
  return a.kind_ == b.kind_ && (!a.is_finite() || a.value_ == b.value_);
}

Exponent parse_exponent(std::string_view text) {
  if (text == "inf" || text == "+inf" || text == "infinity") return Exponent::pos_inf();
  if (text == "-inf" || text == "-infinity") return Exponent::neg_inf();
  return Exponent(parse_rational(text));
}

std::string to_string(const Exponent& e) {
  switch (e.kind()) {
    case Exponent::Kind::PosInf: return "inf";
    case Exponent::Kind::NegInf: return "-inf";
    case Exponent::Kind::Finite: break;
  }
  return to_string(e.value());
}

}  // namespace bmlab
