#include "bmlab/scalar_means.hpp"

#include <stdexcept>

namespace bmlab {

namespace {

const Rational& pick(const CertifiedReal& x, Round dir) { return dir == Round::Down ? x.lower() : x.upper(); }

Rational nonneg(const Rational& r) { return r < 0 ? Rational(0) : r; }

// One directed bound of S_alpha(a, b; t, s). S is nondecreasing in a and b for
// every alpha; in the weights it increases for alpha > 0 and decreases for alpha < 0.
Rational alpha_sum_bound(const CertifiedReal& a, const CertifiedReal& b, const CertifiedReal& t,
                         const CertifiedReal& s, const Exponent& alpha, Round dir, int bits) {
  const Rational& a_sel = pick(a, dir);
  const Rational& b_sel = pick(b, dir);
  if (a_sel <= 0 || b_sel <= 0) return Rational(0);
  if (alpha.is_pos_inf()) return a_sel > b_sel ? a_sel : b_sel;
  if (alpha.is_neg_inf()) return a_sel < b_sel ? a_sel : b_sel;

  const Rational& e = alpha.value();
  const Round sum_dir = e > 0 ? dir : flip(dir);
  Rational t_sel = nonneg(pick(t, sum_dir));
  Rational s_sel = nonneg(pick(s, sum_dir));
  Rational sum = t_sel * pow_bound(a_sel, e, sum_dir, bits) + s_sel * pow_bound(b_sel, e, sum_dir, bits);
  if (sum == 0) {
    if (e > 0) return Rational(0);
    throw std::domain_error("alpha_sum: weights not separated from zero");
  }
  return pow_bound(sum, Rational(1) / e, dir, bits);
}

void require_nonneg(const CertifiedReal& x, const char* what) {
  if (x.lower() < 0) throw std::invalid_argument(std::string(what) + " must be nonnegative");
}

}  // namespace

Exponent conjugate_exponent(const Exponent& p) {
  if (p.is_pos_inf()) return Exponent(1);
  if (!p.is_finite() || p.value() < 1) throw std::invalid_argument("conjugate_exponent: p must be >= 1");
  if (p.value() == 1) return Exponent::pos_inf();
  return Exponent(p.value() / (p.value() - 1));
}

Rational inverse_conjugate(const Rational& p) {
  if (p < 1) throw std::invalid_argument("inverse_conjugate: p must be >= 1");
  return (p - 1) / p;
}

CertifiedReal weighted_alpha_sum(const CertifiedReal& a, const CertifiedReal& b, const CertifiedReal& t,
                                 const CertifiedReal& s, const Exponent& alpha, int bits) {
  if (alpha.is_zero()) throw std::invalid_argument("alpha_sum: alpha = 0 is only defined for means");
  require_nonneg(a, "a");
  require_nonneg(b, "b");
  require_nonneg(t, "t");
  require_nonneg(s, "s");
  if (t.upper() == 0 && s.upper() == 0) throw std::invalid_argument("alpha_sum: both weights vanish");
  if (a.upper() == 0 || b.upper() == 0) return CertifiedReal(0);
  return {alpha_sum_bound(a, b, t, s, alpha, Round::Down, bits),
          alpha_sum_bound(a, b, t, s, alpha, Round::Up, bits)};
}

CertifiedReal alpha_sum(const CertifiedReal& a, const CertifiedReal& b, const CertifiedReal& t,
                        const CertifiedReal& s, const Exponent& alpha, int bits) {
  if (t.lower() <= 0 || s.lower() <= 0) throw std::invalid_argument("alpha_sum: weights must be positive");
  return weighted_alpha_sum(a, b, t, s, alpha, bits);
}

CertifiedReal alpha_mean(const CertifiedReal& a, const CertifiedReal& b, const Rational& lambda,
                         const Exponent& alpha, int bits) {
  if (lambda <= 0 || lambda >= 1) throw std::invalid_argument("alpha_mean: lambda must lie in (0,1)");
  if (!alpha.is_zero()) return weighted_alpha_sum(a, b, CertifiedReal(1 - lambda), CertifiedReal(lambda), alpha, bits);
  require_nonneg(a, "a");
  require_nonneg(b, "b");
  return pow(a, 1 - lambda, bits) * pow(b, lambda, bits);
}

Exponent bbl_exponent(const Exponent& alpha, int n, const Exponent& p) {
  if (n < 1) throw std::invalid_argument("bbl_exponent: n must be positive");
  if (!p.is_finite() || p.value() < 1) throw std::invalid_argument("bbl_exponent: p must be a finite value >= 1");
  const Rational floor_alpha = Rational(-1, n);
  if (alpha.is_neg_inf() || (alpha.is_finite() && alpha.value() < floor_alpha)) {
    throw std::invalid_argument("bbl_exponent: alpha must be >= -1/n");
  }
  if (alpha.is_pos_inf()) return Exponent(p.value() / n);
  if (alpha.value() == floor_alpha) return Exponent::neg_inf();
  const Rational& a = alpha.value();
  return Exponent(p.value() * a / (n * a + 1));
}

HolderPair weighted_holder_coefficients(const Rational& w1, const Rational& w2, const CertifiedReal& mu,
                                        const Exponent& p, int bits) {
  if (!p.is_finite() || p.value() < 1) throw std::invalid_argument("holder_coefficients: p must be a finite value >= 1");
  if (w1 < 0 || w2 < 0) throw std::invalid_argument("holder_coefficients: weights must be nonnegative");
  if (mu.lower() < 0 || mu.upper() > 1) throw std::invalid_argument("holder_coefficients: mu must lie in [0,1]");
  const Rational inv_p = 1 / p.value();
  const Rational inv_q = inverse_conjugate(p.value());
  CertifiedReal one_minus_mu = CertifiedReal(1) - mu;
  HolderPair out;
  out.t = pow(CertifiedReal(w1), inv_p, bits) * pow(one_minus_mu, inv_q, bits);
  out.s = pow(CertifiedReal(w2), inv_p, bits) * pow(mu, inv_q, bits);
  out.lambda = w2;
  out.mu = mu;
  out.p = p;
  return out;
}

HolderPair holder_coefficients(const Rational& lambda, const CertifiedReal& mu, const Exponent& p, int bits) {
  if (lambda <= 0 || lambda >= 1) throw std::invalid_argument("holder_coefficients: lambda must lie in (0,1)");
  return weighted_holder_coefficients(1 - lambda, lambda, mu, p, bits);
}

CertifiedReal optimal_mu0(const Rational& lambda, const Exponent& p, const Exponent& beta,
                          const CertifiedReal& sum_f, const CertifiedReal& sum_g, int bits) {
  if (lambda <= 0 || lambda >= 1) throw std::invalid_argument("optimal_mu0: lambda must lie in (0,1)");
  if (!beta.is_finite() || beta.is_zero()) throw std::invalid_argument("optimal_mu0: beta must be finite and nonzero");
  if (!p.is_finite() || p.value() < 1) throw std::invalid_argument("optimal_mu0: p must be a finite value >= 1");
  if (sum_f.lower() <= 0 || sum_g.lower() <= 0) throw std::invalid_argument("optimal_mu0: sums must be positive");
  const Rational e = p.value() * beta.value();
  CertifiedReal a = CertifiedReal(1 - lambda) * pow(sum_f, e, bits);
  CertifiedReal b = CertifiedReal(lambda) * pow(sum_g, e, bits);
  // mu0 = b / (a + b) is increasing in b and decreasing in a.
  Rational lo = b.lower() / (a.upper() + b.lower());
  Rational hi = b.upper() / (a.lower() + b.upper());
  return {lo, hi};
}

}  // namespace bmlab
