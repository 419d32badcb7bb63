#pragma once

#include "bmlab/rational.hpp"

#include <array>
#include <compare>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace bmlab {

/// Working precision in bits for MPFR-backed bounds.
constexpr int kDefaultBits = 160;
/// Largest precision tried before a comparison is declared ambiguous (~1e-300).
constexpr int kMaxBits = 1100;
/// Working precisions tried, in order, by the refining comparisons.
inline constexpr std::array<int, 4> kRefinementLadder{kDefaultBits, 320, 640, kMaxBits};

enum class Round { Down, Up };

inline Round flip(Round r) { return r == Round::Down ? Round::Up : Round::Down; }

/// Raised when two certified quantities cannot be separated at kMaxBits.
class AmbiguityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Directed-rounding bound of x^e for x >= 0 and rational e.
/// Exact whenever the result is rational (integer e, or perfect-power roots).
Rational pow_bound(const Rational& x, const Rational& e, Round dir, int bits = kDefaultBits);

/// A closed rational interval [lower, upper] known to contain a real number.
class CertifiedReal {
 public:
  CertifiedReal() = default;
  CertifiedReal(const Rational& exact) : lo_(exact), hi_(exact) {}  // NOLINT: implicit by intent
  CertifiedReal(long v) : lo_(v), hi_(v) {}                        // NOLINT
  CertifiedReal(Rational lo, Rational hi);

  const Rational& lower() const { return lo_; }
  const Rational& upper() const { return hi_; }
  bool is_exact() const { return lo_ == hi_; }
  Rational width() const { return hi_ - lo_; }
  Rational midpoint() const { return (lo_ + hi_) / 2; }
  double to_double() const { return bmlab::to_double(midpoint()); }
  bool contains(const Rational& r) const { return lo_ <= r && r <= hi_; }

  /// Certainly less / greater / equal; nullopt when the enclosures overlap
  /// without both being the same exact value.
  std::optional<std::strong_ordering> compare(const CertifiedReal& other) const;

  /// Smallest enclosure containing both.
  CertifiedReal hull(const CertifiedReal& other) const;

  CertifiedReal operator-() const { return {-hi_, -lo_}; }
  friend CertifiedReal operator+(const CertifiedReal& a, const CertifiedReal& b) {
    return {a.lo_ + b.lo_, a.hi_ + b.hi_};
  }
  friend CertifiedReal operator-(const CertifiedReal& a, const CertifiedReal& b) {
    return {a.lo_ - b.hi_, a.hi_ - b.lo_};
  }
  friend CertifiedReal operator*(const CertifiedReal& a, const CertifiedReal& b);
  friend CertifiedReal operator/(const CertifiedReal& a, const CertifiedReal& b);

  CertifiedReal& operator+=(const CertifiedReal& b) { return *this = *this + b; }

 private:
  Rational lo_{0};
  Rational hi_{0};
};

/// x^e for an enclosure of a nonnegative number (lower bound > 0 when e < 0).
CertifiedReal pow(const CertifiedReal& x, const Rational& e, int bits = kDefaultBits);
CertifiedReal min(const CertifiedReal& a, const CertifiedReal& b);
CertifiedReal max(const CertifiedReal& a, const CertifiedReal& b);

/// Certified floor; nullopt if the enclosure straddles an integer.
std::optional<Integer> certified_floor(const CertifiedReal& x);
std::optional<Integer> certified_ceil(const CertifiedReal& x);

/// Evaluates `f` at increasing precision until the comparison with `g`
/// separates, or throws AmbiguityError past kMaxBits.
using Refinable = std::function<CertifiedReal(int bits)>;
std::strong_ordering compare_refined(const Refinable& f, const Refinable& g);
Integer floor_refined(const Refinable& f);
Integer ceil_refined(const Refinable& f);

/// Decimal rendering of the enclosure "[lo, hi]" with `digits` significant digits.
std::string to_decimal(const CertifiedReal& x, int digits = 12);
std::string to_decimal(const Rational& x, int digits = 12);
std::ostream& operator<<(std::ostream& os, const CertifiedReal& x);

/// Conservative double bounds of an exact rational.
double round_down(const Rational& r);
double round_up(const Rational& r);
/// Exact rational value of a finite double.
Rational from_double(double d);

}  // namespace bmlab
