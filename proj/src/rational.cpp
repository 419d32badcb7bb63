#include "bmlab/rational.hpp"

#include <cctype>

namespace bmlab {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  if (!is_integer_literal(s)) {
    throw ParseError("not an integer: '" + std::string(s) + "'");
  }
  std::string digits(s[0] == '+' ? s.substr(1) : s);
  return Integer(digits, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole = "0";
    if (frac.empty() || !is_integer_literal(frac) || frac[0] == '-' || frac[0] == '+') {
      throw ParseError("malformed decimal '" + std::string(text) + "'");
    }
    Integer w = parse_integer(whole);
    Integer f = parse_integer(frac);
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Integer magnitude = abs(w) * scale + f;
    Rational r(negative ? Integer(-magnitude) : magnitude, scale);
    r.canonicalize();
    return r;
  }

  return Rational(parse_integer(text));
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Integer floor(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Integer ceil(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Rational pow_int(const Rational& r, long k) {
  if (k == 0) return Rational(1);
  unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), r.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), r.get_den_mpz_t(), e);
  if (k < 0) {
    if (num == 0) throw std::domain_error("negative power of zero");
    std::swap(num, den);
  }
  Rational out(num, den);
  out.canonicalize();
  return out;
}

bool exact_root(const Rational& r, unsigned long k, Rational& out) {
  if (k == 1) {
    out = r;
    return true;
  }
  if (r < 0) return false;
  Integer num, den;
  if (mpz_root(num.get_mpz_t(), r.get_num_mpz_t(), k) == 0) return false;
  if (mpz_root(den.get_mpz_t(), r.get_den_mpz_t(), k) == 0) return false;
  out = Rational(num, den);
  out.canonicalize();
  return true;
}

double to_double(const Rational& r) { return r.get_d(); }

}  // namespace bmlab
