#pragma once

// L_p combinations of sets: support-function form for convex sets containing
// the origin, and the union-of-curves form t(mu) K + s(mu) L for everything
// else, with certified membership and Chebyshev-distance queries.

#include "bmlab/arc.hpp"
#include "bmlab/certified_real.hpp"
#include "bmlab/exponent.hpp"
#include "bmlab/sets.hpp"

#include <optional>
#include <vector>

namespace bmlab {

/// h(K, u) = max over K of <x, u>. K must be a convex representation
/// containing the origin; FinitePoints are rejected.
CertifiedReal support_function(const SetRep& set, const Point& u);

/// lambda ·_p K = lambda^(1/p) K. `exact` holds the scaled set whenever the
/// factor is rational.
struct ScaledSet {
  SetRep base;
  CertifiedReal factor;
  std::optional<SetRep> exact;
};

ScaledSet p_scalar_mult(const Rational& lambda, const SetRep& set, const Exponent& p);

/// w1 ·_p K +_p w2 ·_p L.
class PCombo {
 public:
  PCombo(SetRep k, SetRep l, Rational w1, Rational w2, Rational p);
  /// (1 - lambda) ·_p K +_p lambda ·_p L.
  static PCombo lambda_combo(SetRep k, SetRep l, const Rational& lambda, const Rational& p);

  const SetRep& k() const { return k_; }
  const SetRep& l() const { return l_; }
  const Rational& w1() const { return w1_; }
  const Rational& w2() const { return w2_; }
  const Rational& p() const { return p_; }
  int dim() const { return k_.dim(); }
  const Arc& arc() const { return arc_; }

 private:
  SetRep k_, l_;
  Rational w1_, w2_, p_;
  Arc arc_;
};

/// (w1 h_K(u)^p + w2 h_L(u)^p)^(1/p) for convex K, L containing the origin.
CertifiedReal p_combo_support(const PCombo& combo, const Point& u);

struct MembershipVerdict {
  Decision kind = Decision::Outside;
  /// For Ambiguous: enclosure of the best undecided margin.
  CertifiedReal gap;
};

/// Decides z in combo (+ cube, when given). The cube may be an Interval1D,
/// AxisBox or FinitePoints set. tol is the fast-stage parameter resolution.
MembershipVerdict p_combo_membership(const Point& z, const PCombo& combo, double tol = 1e-9,
                                     const SetRep* cube = nullptr);

/// Enclosure of inf over the combination of the max-norm distance to z.
CertifiedReal chebyshev_distance(const Point& z, const PCombo& combo);

/// Arc constraint systems, one per convex piece pair (and cube point), whose
/// union describes z in combo + cube. With distance = true the cube is ignored
/// and each constraint carries the max-norm scale of its normal.
std::vector<std::vector<ArcConstraint>> arc_systems(const Point& z, const PCombo& combo, const SetRep* cube,
                                                    bool distance = false);

/// A + B for matching representations (points+points, boxes, polytopes).
SetRep minkowski_sum(const SetRep& a, const SetRep& b);

/// The 1-D combination of two intervals containing the origin:
/// [-S(|k_lo|, |l_lo|), S(k_hi, l_hi)] with S the weighted p-sum.
struct PInterval {
  CertifiedReal lo;
  CertifiedReal hi;
  bool lo_open = false;
  bool hi_open = false;
};

PInterval p_combo_interval(const PCombo& combo);

/// Refinable form of the same endpoints (for floor/ceil decisions).
Refinable p_combo_interval_end(const PCombo& combo, bool upper);

}  // namespace bmlab
