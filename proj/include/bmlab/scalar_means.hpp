#pragma once

// Alpha-sums, alpha-means and the Hoelder coefficient pairs used by the L_p
// combinations. Every quantity is returned as a CertifiedReal; values that are
// rational come back exact.

#include "bmlab/certified_real.hpp"
#include "bmlab/exponent.hpp"

namespace bmlab {

/// q with 1/p + 1/q = 1; +inf for p = 1. Requires p >= 1.
Exponent conjugate_exponent(const Exponent& p);

/// 1/q = 1 - 1/p as a rational (0 for p = 1). Requires finite p >= 1.
Rational inverse_conjugate(const Rational& p);

/// S_alpha(a, b; t, s) = (t a^alpha + s b^alpha)^(1/alpha); max/min at +-inf,
/// and 0 whenever ab = 0. Requires t, s > 0 and alpha != 0.
CertifiedReal alpha_sum(const CertifiedReal& a, const CertifiedReal& b, const CertifiedReal& t,
                        const CertifiedReal& s, const Exponent& alpha, int bits = kDefaultBits);

/// Same as alpha_sum but allows a zero weight (the arc endpoints). Weights
/// must not both vanish.
CertifiedReal weighted_alpha_sum(const CertifiedReal& a, const CertifiedReal& b, const CertifiedReal& t,
                                 const CertifiedReal& s, const Exponent& alpha, int bits = kDefaultBits);

/// M_alpha(a, b; lambda); geometric mean a^(1-lambda) b^lambda at alpha = 0.
CertifiedReal alpha_mean(const CertifiedReal& a, const CertifiedReal& b, const Rational& lambda,
                         const Exponent& alpha, int bits = kDefaultBits);

/// p alpha / (n alpha + 1), with alpha = -1/n -> -inf and alpha = +inf -> p/n.
Exponent bbl_exponent(const Exponent& alpha, int n, const Exponent& p);

struct HolderPair {
  CertifiedReal t;
  CertifiedReal s;
  Rational lambda;
  CertifiedReal mu;
  Exponent p;
};

/// t = (1-lambda)^(1/p) (1-mu)^(1/q), s = lambda^(1/p) mu^(1/q).
HolderPair holder_coefficients(const Rational& lambda, const CertifiedReal& mu, const Exponent& p,
                               int bits = kDefaultBits);

/// Same pair for general weights w1, w2 >= 0: t = w1^(1/p)(1-mu)^(1/q), s = w2^(1/p) mu^(1/q).
HolderPair weighted_holder_coefficients(const Rational& w1, const Rational& w2, const CertifiedReal& mu,
                                        const Exponent& p, int bits = kDefaultBits);

/// mu0 = lambda Sg^(p beta) / ((1-lambda) Sf^(p beta) + lambda Sg^(p beta)).
CertifiedReal optimal_mu0(const Rational& lambda, const Exponent& p, const Exponent& beta,
                          const CertifiedReal& sum_f, const CertifiedReal& sum_g, int bits = kDefaultBits);

}  // namespace bmlab
