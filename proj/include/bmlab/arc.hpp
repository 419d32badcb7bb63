#pragma once

// Solvers over the Hoelder coefficient arc of w1·K +_p w2·L.
//
// For p > 1 the pairs (t, s) = (w1^(1/p)(1-mu)^(1/q), w2^(1/p) mu^(1/q)) trace
// the curve (t/c1)^q + (s/c2)^q = 1 with c_i = w_i^(1/p). The solvers walk it
// through a parameter sigma in [0, 2]: with b_mid = 2^(-1/q),
//   sigma <= 1:  s = c2 sigma b_mid,        t = c1 (1 - (s/c2)^q)^(1/q)
//   sigma >= 1:  t = c1 (2 - sigma) b_mid,  s = c2 (1 - (t/c1)^q)^(1/q)
// so both coordinates stay Lipschitz. sigma = 0 is mu = 0 and sigma = 2 is
// mu = 1. For p = 1, or when a weight vanishes, the arc is a single point.
//
// Every membership question reduces to a finite family of linear conditions
// w1 t + w2 s > b (or >=) along the arc. A linear form is unimodal on the arc,
// and its extreme value over the whole arc is (W1 |w1|^p + W2 |w2|^p)^(1/p).

#include "bmlab/certified_real.hpp"
#include "bmlab/exponent.hpp"

#include <vector>

namespace bmlab {

enum class Decision { Inside, Outside, Ambiguous };

/// The condition w1 t + w2 s > b (strict) or >= b. Strictness is tracked
/// separately for interior arc points and for the two arc endpoints, because
/// open sides of a set scaled by zero disappear. kappa scales the excess in
/// distance queries.
struct ArcConstraint {
  Rational w1;
  Rational w2;
  Rational b;
  bool strict = false;
  bool strict_s0 = false;  // at mu = 0 (s = 0)
  bool strict_t0 = false;  // at mu = 1 (t = 0)
  Rational kappa = 1;

  static ArcConstraint closed(Rational w1, Rational w2, Rational b) { return {std::move(w1), std::move(w2), std::move(b)}; }
  static ArcConstraint open(Rational w1, Rational w2, Rational b) {
    return {std::move(w1), std::move(w2), std::move(b), true, true, true};
  }
};

class Arc {
 public:
  /// Arc of w1·K +_p w2·L. Requires p >= 1 finite, w1, w2 >= 0, not both 0.
  Arc(const Rational& w1, const Rational& w2, const Rational& p);

  const Rational& w1() const { return w1_; }
  const Rational& w2() const { return w2_; }
  const Rational& p() const { return p_; }
  bool is_point() const { return point_; }

  /// (t, s) at an arc endpoint: sigma = 0 (mu = 0) or sigma = 2 (mu = 1).
  CertifiedReal t_end(bool at_mu1, int bits = kDefaultBits) const;
  CertifiedReal s_end(bool at_mu1, int bits = kDefaultBits) const;
  /// (t, s) of a point arc.
  CertifiedReal t_point(int bits = kDefaultBits) const;
  CertifiedReal s_point(int bits = kDefaultBits) const;

  /// (t, s) at a rational parameter mu (exact whenever the powers are rational).
  CertifiedReal t_at_mu(const CertifiedReal& mu, int bits = kDefaultBits) const;
  CertifiedReal s_at_mu(const CertifiedReal& mu, int bits = kDefaultBits) const;

  /// Max of w1' t + w2' s over the arc for w1', w2' >= 0.
  CertifiedReal peak(const Rational& a1, const Rational& a2, int bits = kDefaultBits) const;
  /// Arc point where that max is attained.
  CertifiedReal peak_t(const Rational& a1, const Rational& a2, int bits = kDefaultBits) const;
  CertifiedReal peak_s(const Rational& a1, const Rational& a2, int bits = kDefaultBits) const;

  /// Certified range [min, max] of a1 t + a2 s over the whole arc.
  CertifiedReal linear_range(const Rational& a1, const Rational& a2, int bits = kDefaultBits) const;

 private:
  Rational w1_, w2_, p_;
  bool point_ = false;
};

struct ArcOutcome {
  Decision verdict = Decision::Outside;
  /// For Ambiguous: enclosure of the best margin min_j (l_j - b_j)/kappa_j
  /// over the undecided part of the arc.
  CertifiedReal gap;
};

/// Is there an arc point where every constraint holds? tol is the parameter
/// resolution of the fast floating stage; undecided pieces are then refined
/// with rational enclosures down to 1e-30 before Ambiguous is reported.
ArcOutcome decide(const Arc& arc, const std::vector<ArcConstraint>& cons, double tol = 1e-9);

/// Enclosure of min over the arc of max(0, max_j (b_j - l_j)/kappa_j).
CertifiedReal min_max_excess(const Arc& arc, const std::vector<ArcConstraint>& cons, double tol = 1e-12);

/// Extremum of the objective o1 t + o2 s over the feasible part of the arc.
struct ArcExtremum {
  Decision feasible = Decision::Outside;
  /// Enclosure of the sup (maximize) or inf (minimize); meaningful when feasible != Outside.
  CertifiedReal value;
  /// The unconstrained peak of the objective is certified feasible, so value
  /// equals Arc::peak exactly (maximize with o1, o2 >= 0 only).
  bool at_peak = false;
};

ArcExtremum optimize_linear(const Arc& arc, const std::vector<ArcConstraint>& cons, const Rational& o1,
                            const Rational& o2, bool maximize, double tol = 1e-13);

}  // namespace bmlab
