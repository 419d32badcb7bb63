#include "bmlab/scalar_means.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace bmlab;

namespace {

Rational R(long a, long b = 1) { return make_rational(a, b); }

const Rational kTiny = Rational(1) / Rational(Integer("1000000000000000000000000000000"));  // 1e-30

}  // namespace

TEST(ConjugateExponent, Values) {
  EXPECT_EQ(conjugate_exponent(Exponent(2)), Exponent(2));
  EXPECT_TRUE(conjugate_exponent(Exponent(1)).is_pos_inf());
  EXPECT_EQ(conjugate_exponent(Exponent(3)), Exponent(R(3, 2)));
  EXPECT_THROW(conjugate_exponent(Exponent(R(1, 2))), std::invalid_argument);
}

TEST(AlphaSum, KnownValues) {
  CertifiedReal v = alpha_sum(2, 3, R(1, 2), R(1, 2), Exponent(2));
  EXPECT_NEAR(v.to_double(), std::sqrt(6.5), 1e-15);
  EXPECT_LT(v.width(), kTiny);
  // v^2 = 6.5 within the enclosure
  EXPECT_LE((v * v).lower(), R(13, 2));
  EXPECT_GE((v * v).upper(), R(13, 2));
  EXPECT_EQ(alpha_sum(5, 0, 1, 1, Exponent(2)).upper(), 0);
  CertifiedReal w = alpha_sum(2, 2, 1, 1, Exponent(R(3, 2)));
  EXPECT_NEAR(w.to_double(), std::pow(2.0, 5.0 / 3.0), 1e-14);
  EXPECT_THROW(alpha_sum(1, 1, 1, 1, Exponent(0)), std::invalid_argument);
}

TEST(AlphaSum, InfiniteExponents) {
  EXPECT_EQ(alpha_sum(2, 5, 1, 1, Exponent::pos_inf()).lower(), 5);
  EXPECT_EQ(alpha_sum(2, 5, 1, 1, Exponent::neg_inf()).lower(), 2);
  EXPECT_EQ(alpha_sum(0, 5, 1, 1, Exponent::pos_inf()).upper(), 0);
}

TEST(AlphaMean, Values) {
  for (const Exponent& a : {Exponent(-2), Exponent(0), Exponent(R(1, 3)), Exponent(5), Exponent::pos_inf()}) {
    CertifiedReal m = alpha_mean(4, 4, R(1, 3), a);
    EXPECT_TRUE(m.contains(4));
    EXPECT_LT(m.width(), kTiny);
  }
  CertifiedReal r = alpha_mean(2, 3, R(1, 2), Exponent(2));
  EXPECT_NEAR(r.to_double(), std::sqrt(6.5), 1e-15);
  CertifiedReal near0 = alpha_mean(1, 2, R(1, 1000000), Exponent(2));
  EXPECT_NEAR(near0.to_double(), 1.0, 1e-5);
  EXPECT_EQ(alpha_mean(0, 3, R(1, 2), Exponent(0)).upper(), 0);
}

TEST(BblExponent, Values) {
  EXPECT_TRUE(bbl_exponent(Exponent(R(-1, 3)), 3, Exponent(2)).is_neg_inf());
  EXPECT_TRUE(bbl_exponent(Exponent(0), 2, Exponent(2)).is_zero());
  EXPECT_EQ(bbl_exponent(Exponent(1), 1, Exponent(2)), Exponent(1));
  EXPECT_EQ(bbl_exponent(Exponent::pos_inf(), 2, Exponent(3)), Exponent(R(3, 2)));
  EXPECT_THROW(bbl_exponent(Exponent(R(-1, 2)), 3, Exponent(2)), std::invalid_argument);
}

TEST(HolderCoefficients, Values) {
  HolderPair eq = holder_coefficients(R(1, 3), CertifiedReal(R(1, 3)), Exponent(R(3, 2)));
  CertifiedReal sum = eq.t + eq.s;
  EXPECT_TRUE(sum.contains(1));
  EXPECT_LT(sum.width(), kTiny);
  HolderPair end = holder_coefficients(R(1, 2), CertifiedReal(0), Exponent(2));
  EXPECT_NEAR(end.t.to_double(), std::sqrt(0.5), 1e-15);
  EXPECT_EQ(end.s.upper(), 0);
  HolderPair p1 = holder_coefficients(R(1, 4), CertifiedReal(R(2, 3)), Exponent(1));
  EXPECT_EQ(p1.t.lower(), R(3, 4));
  EXPECT_EQ(p1.s.lower(), R(1, 4));
  EXPECT_TRUE(p1.t.is_exact());
}

TEST(OptimalMu0, SymmetricAndExample) {
  CertifiedReal sym = optimal_mu0(R(2, 5), Exponent(2), Exponent(R(1, 3)), 7, 7);
  EXPECT_TRUE(sym.contains(R(2, 5)));
  CertifiedReal mu = optimal_mu0(R(1, 2), Exponent(2), Exponent(R(1, 2)), 1, 4);
  EXPECT_TRUE(mu.contains(R(4, 5)));
  HolderPair h = holder_coefficients(R(1, 2), mu, Exponent(2));
  CertifiedReal lhs = alpha_sum(1, 4, h.t, h.s, Exponent(R(1, 2)));
  EXPECT_TRUE(lhs.contains(R(5, 2)));
  EXPECT_LT(lhs.width(), kTiny);
  CertifiedReal small = optimal_mu0(R(1, 1000000), Exponent(2), Exponent(1), 1, 1);
  EXPECT_LT(small.upper(), R(1, 100000));
}

TEST(ScalarProperties, RandomizedMonotonicityAndHolder) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> num(1, 40), den(1, 12);
  const std::vector<Rational> alphas{R(-3), R(-1), R(-1, 2), R(1, 3), R(1), R(3, 2), R(2), R(4)};
  for (int k = 0; k < 300; ++k) {
    Rational a = make_rational(num(rng), den(rng)), b = make_rational(num(rng), den(rng));
    Rational lam = make_rational(1 + k % 9, 10);
    std::size_t i = k % (alphas.size() - 1);
    Exponent lo(alphas[i]), hi(alphas[i + 1]);
    CertifiedReal m_lo = alpha_mean(a, b, lam, lo), m_hi = alpha_mean(a, b, lam, hi);
    CertifiedReal s_lo = alpha_sum(a, b, 1, 1, lo), s_hi = alpha_sum(a, b, 1, 1, hi);
    if (a == b) {
      EXPECT_TRUE(m_lo.contains(a));
      continue;
    }
    EXPECT_LT(m_lo.upper(), m_hi.lower());
    if ((alphas[i] > 0) == (alphas[i + 1] > 0)) EXPECT_GT(s_lo.lower(), s_hi.upper());
    EXPECT_GE(m_lo.lower(), std::min(a, b));
    EXPECT_LE(m_hi.upper(), std::max(a, b));

    Rational mu = make_rational(k % 11, 10);
    HolderPair h = holder_coefficients(lam, CertifiedReal(mu), Exponent(R(3, 2)));
    CertifiedReal ts = h.t + h.s;
    if (mu == lam) {
      EXPECT_TRUE(ts.contains(1));
    } else {
      EXPECT_LT(ts.upper(), 1);
    }
  }
}
