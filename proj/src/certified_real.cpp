#include "bmlab/certified_real.hpp"

#include <mpfr.h>

#include <array>
#include <cstdlib>
#include <sstream>

namespace bmlab {

namespace {

mpfr_rnd_t mode(Round r) { return r == Round::Down ? MPFR_RNDD : MPFR_RNDU; }

class Mpfr {
 public:
  explicit Mpfr(int bits) { mpfr_init2(v_, bits); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

Rational to_rational(mpfr_ptr v) {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), v);
  return q;
}


}  // namespace

Rational pow_bound(const Rational& x, const Rational& e, Round dir, int bits) {
  if (x < 0) throw std::domain_error("pow_bound: negative base");
  if (x == 0) {
    if (e > 0) return Rational(0);
    if (e == 0) return Rational(1);
    throw std::domain_error("pow_bound: zero to a negative power");
  }
  if (x == 1 || e == 0) return Rational(1);
  if (!e.get_num().fits_slong_p() || !e.get_den().fits_ulong_p()) {
    throw std::domain_error("pow_bound: exponent too large");
  }
  const long a = e.get_num().get_si();
  const unsigned long b = e.get_den().get_ui();
  if (b == 1) return pow_int(x, a);

  // Exact when both num and den of x^a are perfect b-th powers.
  Rational root;
  if (std::labs(a) <= 64 && exact_root(pow_int(x, a), b, root)) return root;

  Mpfr xm(bits), y(bits + 8), r(bits);
  const Round x_dir = a > 0 ? dir : flip(dir);
  mpfr_set_q(xm.get(), x.get_mpq_t(), mode(x_dir));
  mpfr_pow_si(y.get(), xm.get(), a, mode(dir));
  mpfr_rootn_ui(r.get(), y.get(), b, mode(dir));
  return to_rational(r.get());
}

CertifiedReal::CertifiedReal(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_ > hi_) throw std::invalid_argument("CertifiedReal: lower > upper");
}

std::optional<std::strong_ordering> CertifiedReal::compare(const CertifiedReal& other) const {
  if (hi_ < other.lo_) return std::strong_ordering::less;
  if (lo_ > other.hi_) return std::strong_ordering::greater;
  if (is_exact() && other.is_exact() && lo_ == other.lo_) return std::strong_ordering::equal;
  return std::nullopt;
}

CertifiedReal CertifiedReal::hull(const CertifiedReal& other) const {
  return {lo_ < other.lo_ ? lo_ : other.lo_, hi_ > other.hi_ ? hi_ : other.hi_};
}

CertifiedReal operator*(const CertifiedReal& a, const CertifiedReal& b) {
  std::array<Rational, 4> c{a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
  Rational lo = c[0], hi = c[0];
  for (const auto& v : c) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return {lo, hi};
}

CertifiedReal operator/(const CertifiedReal& a, const CertifiedReal& b) {
  if (b.lo_ <= 0 && b.hi_ >= 0) throw std::domain_error("CertifiedReal: division by an enclosure of zero");
  return a * CertifiedReal(1 / b.hi_, 1 / b.lo_);
}

CertifiedReal pow(const CertifiedReal& x, const Rational& e, int bits) {
  if (x.lower() < 0) throw std::domain_error("pow: enclosure reaches below zero");
  if (e >= 0) {
    return {pow_bound(x.lower(), e, Round::Down, bits), pow_bound(x.upper(), e, Round::Up, bits)};
  }
  return {pow_bound(x.upper(), e, Round::Down, bits), pow_bound(x.lower(), e, Round::Up, bits)};
}

CertifiedReal min(const CertifiedReal& a, const CertifiedReal& b) {
  return {a.lower() < b.lower() ? a.lower() : b.lower(), a.upper() < b.upper() ? a.upper() : b.upper()};
}

CertifiedReal max(const CertifiedReal& a, const CertifiedReal& b) {
  return {a.lower() > b.lower() ? a.lower() : b.lower(), a.upper() > b.upper() ? a.upper() : b.upper()};
}

std::optional<Integer> certified_floor(const CertifiedReal& x) {
  Integer lo = floor(x.lower());
  if (lo == floor(x.upper())) return lo;
  return std::nullopt;
}

std::optional<Integer> certified_ceil(const CertifiedReal& x) {
  Integer hi = ceil(x.upper());
  if (hi == ceil(x.lower())) return hi;
  return std::nullopt;
}

std::strong_ordering compare_refined(const Refinable& f, const Refinable& g) {
  for (int bits : kRefinementLadder) {
    if (auto c = f(bits).compare(g(bits))) return *c;
  }
  throw AmbiguityError("comparison could not be separated at " + std::to_string(kMaxBits) + " bits");
}

Integer floor_refined(const Refinable& f) {
  for (int bits : kRefinementLadder) {
    if (auto v = certified_floor(f(bits))) return *v;
  }
  throw AmbiguityError("floor could not be certified");
}

Integer ceil_refined(const Refinable& f) {
  for (int bits : kRefinementLadder) {
    if (auto v = certified_ceil(f(bits))) return *v;
  }
  throw AmbiguityError("ceiling could not be certified");
}

std::string to_decimal(const Rational& x, int digits) {
  Mpfr m(256);
  mpfr_set_q(m.get(), x.get_mpq_t(), MPFR_RNDN);
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, m.get());
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

std::string to_decimal(const CertifiedReal& x, int digits) {
  if (x.is_exact()) return to_decimal(x.lower(), digits);
  return "[" + to_decimal(x.lower(), digits) + ", " + to_decimal(x.upper(), digits) + "]";
}

std::ostream& operator<<(std::ostream& os, const CertifiedReal& x) { return os << to_decimal(x); }

double round_down(const Rational& r) {
  Mpfr m(53);
  mpfr_set_q(m.get(), r.get_mpq_t(), MPFR_RNDD);
  return mpfr_get_d(m.get(), MPFR_RNDD);
}

double round_up(const Rational& r) {
  Mpfr m(53);
  mpfr_set_q(m.get(), r.get_mpq_t(), MPFR_RNDU);
  return mpfr_get_d(m.get(), MPFR_RNDU);
}

Rational from_double(double d) {
  Rational q;
  mpq_set_d(q.get_mpq_t(), d);
  return q;
}

}  // namespace bmlab
