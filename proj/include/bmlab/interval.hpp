#pragma once

// Outward-rounded double intervals. Sums and products whose rounding error is
// zero (detected with error-free transforms) stay exact, so integer and dyadic
// data flow through the solvers without spurious widening.

#include "bmlab/certified_real.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bmlab {

class DoubleInterval {
 public:
  DoubleInterval() = default;
  explicit DoubleInterval(double v) : lo_(v), hi_(v) {}
  DoubleInterval(double lo, double hi) : lo_(lo), hi_(hi) {}

  static DoubleInterval from(const Rational& r) { return {round_down(r), round_up(r)}; }
  static DoubleInterval from(const CertifiedReal& x) { return {round_down(x.lower()), round_up(x.upper())}; }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mid() const { return 0.5 * (lo_ + hi_); }
  bool is_point() const { return lo_ == hi_; }

  DoubleInterval hull(const DoubleInterval& o) const {
    return {std::min(lo_, o.lo_), std::max(hi_, o.hi_)};
  }

  friend DoubleInterval operator+(const DoubleInterval& a, const DoubleInterval& b) {
    return {add_down(a.lo_, b.lo_), add_up(a.hi_, b.hi_)};
  }
  friend DoubleInterval operator-(const DoubleInterval& a) { return {-a.hi_, -a.lo_}; }
  friend DoubleInterval operator-(const DoubleInterval& a, const DoubleInterval& b) { return a + (-b); }
  friend DoubleInterval operator*(const DoubleInterval& a, const DoubleInterval& b) {
    double c[4][2] = {{mul_down(a.lo_, b.lo_), mul_up(a.lo_, b.lo_)},
                      {mul_down(a.lo_, b.hi_), mul_up(a.lo_, b.hi_)},
                      {mul_down(a.hi_, b.lo_), mul_up(a.hi_, b.lo_)},
                      {mul_down(a.hi_, b.hi_), mul_up(a.hi_, b.hi_)}};
    double lo = c[0][0], hi = c[0][1];
    for (auto& p : c) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[1]);
    }
    return {lo, hi};
  }

  /// a / b for a >= 0 and b > 0.
  friend DoubleInterval div_pos(const DoubleInterval& a, const DoubleInterval& b) {
    return {div_down(a.lo_, b.hi_), div_up(a.hi_, b.lo_)};
  }

  /// x^r for x >= 0 and r > 0 (monotone increasing). The widening covers the
  /// libm error plus the representation error of r (relative |ln x| r 2^-53).
  friend DoubleInterval pow_pos(const DoubleInterval& x, double r) {
    return {pow_down(std::max(x.lo_, 0.0), r), pow_up(std::max(x.hi_, 0.0), r)};
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  static double two_sum_err(double a, double b, double s) {
    double bb = s - a;
    return (a - (s - bb)) + (b - bb);
  }
  static double add_down(double a, double b) {
    double s = a + b;
    return two_sum_err(a, b, s) < 0 ? std::nextafter(s, -kInf) : s;
  }
  static double add_up(double a, double b) {
    double s = a + b;
    return two_sum_err(a, b, s) > 0 ? std::nextafter(s, kInf) : s;
  }
  static double mul_down(double a, double b) {
    double p = a * b;
    return std::fma(a, b, -p) < 0 ? std::nextafter(p, -kInf) : p;
  }
  static double mul_up(double a, double b) {
    double p = a * b;
    return std::fma(a, b, -p) > 0 ? std::nextafter(p, kInf) : p;
  }
  static double div_down(double a, double b) {
    if (b <= 0.0) return 0.0;
    double q = a / b;
    return std::fma(q, b, -a) > 0 ? std::nextafter(q, -kInf) : q;
  }
  static double div_up(double a, double b) {
    if (b <= 0.0) return kInf;
    double q = a / b;
    return std::fma(q, b, -a) < 0 ? std::nextafter(q, kInf) : q;
  }
  static double pow_slack(double x, double r) {
    return (std::abs(std::log(x)) * std::max(r, 1.0) + 4.0) * 0x1p-52;
  }
  static double pow_down(double x, double r) {
    if (x == 0.0 || x == 1.0) return x;
    double v = std::pow(x, r);
    return std::max(0.0, std::nextafter(v - v * pow_slack(x, r), -kInf));
  }
  static double pow_up(double x, double r) {
    if (x == 0.0 || x == 1.0) return x;
    double v = std::pow(x, r);
    return std::nextafter(v + v * pow_slack(x, r), kInf);
  }

  double lo_ = 0.0;
  double hi_ = 0.0;
};

}  // namespace bmlab
