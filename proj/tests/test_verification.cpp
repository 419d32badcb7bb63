#include "bmlab/scalar_means.hpp"
#include "bmlab/verification.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace bmlab;

namespace {

Rational R(long a, long b = 1) { return make_rational(a, b); }

SetRep iv(long a, long b) { return Interval1D::closed(a, b); }

std::string witness(const CheckReport& r, const std::string& key) {
  for (const auto& [k, v] : r.witness) {
    if (k == key) return v;
  }
  return "";
}

SetRep range_points(long a, long b) {
  std::vector<Point> pts;
  for (long k = a; k <= b; ++k) pts.push_back(Point{k});
  return SetRep::points(pts);
}

bool holds(const CheckReport& r) { return r.verdict == Verdict::Holds || r.verdict == Verdict::HoldsWithEquality; }

void expect_same_sides(const CheckReport& a, const CheckReport& b) {
  EXPECT_EQ(a.lhs.lower(), b.lhs.lower());
  EXPECT_EQ(a.lhs.upper(), b.lhs.upper());
  EXPECT_EQ(a.rhs.lower(), b.rhs.lower());
  EXPECT_EQ(a.rhs.upper(), b.rhs.upper());
  EXPECT_EQ(a.verdict, b.verdict);
}

}  // namespace

TEST(Report, Classification) {
  EXPECT_EQ(classify(R(3), R(3)), Verdict::HoldsWithEquality);
  EXPECT_EQ(classify(R(3), R(2)), Verdict::Holds);
  EXPECT_EQ(classify(R(2), R(3)), Verdict::Violation);
  EXPECT_EQ(classify(CertifiedReal(R(1), R(3)), R(2)), Verdict::AmbiguousWithinTolerance);
  const CertifiedReal s2 = pow(CertifiedReal(R(2)), R(1, 2), kMaxBits);
  EXPECT_EQ(classify(s2, s2), Verdict::HoldsWithEquality);
  EXPECT_EQ(parse_verdict(to_string(Verdict::Violation)), Verdict::Violation);
}

TEST(Dlpbm, SharpCubes) {
  for (long m = 1; m <= 2; ++m) {
    for (int n = 1; n <= 2; ++n) {
      for (long p = 1; p <= 3; ++p) {
        const SetRep c = SetRep::cube(n, 0, m);
        const CheckReport r = check_dlpbm(c, c, R(1, 3), p);
        EXPECT_EQ(r.verdict, Verdict::HoldsWithEquality);
        EXPECT_TRUE(r.lhs.is_exact());
        EXPECT_EQ(r.lhs.lower(), pow_int(R(m + 1), p));
        EXPECT_EQ(r.rhs.lower(), pow_int(R(m + 1), p));
      }
    }
  }
}

TEST(Dlpbm, UnitAndDoubleInterval) {
  const CheckReport r = check_dlpbm(iv(0, 1), iv(0, 2), R(1, 2), 2);
  EXPECT_EQ(r.verdict, Verdict::Holds);
  EXPECT_EQ(r.lhs.lower(), R(9));
  EXPECT_EQ(r.rhs.lower(), R(13, 2));
  EXPECT_EQ(witness(r, "G(M+cube)"), "3");
  EXPECT_THROW(check_dlpbm(SetRep::points({Point({R(1, 2)})}), iv(0, 1), R(1, 2), 2), std::invalid_argument);
  EXPECT_THROW(check_dlpbm(iv(0, 1), iv(0, 1), R(5, 4), 2), std::invalid_argument);
}

TEST(Dlpbm, RandomFinitePointsAgainstGridOracle) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> coord(-2, 2), size(1, 3);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<Point> k, l;
    for (long i = size(rng); i > 0; --i) k.push_back(Point{coord(rng), coord(rng)});
    for (long i = size(rng); i > 0; --i) l.push_back(Point{coord(rng), coord(rng)});
    const Rational p = trial % 2 ? R(2) : R(3, 2);
    const CheckReport r = check_dlpbm(SetRep::points(k), SetRep::points(l), R(1, 3), p);
    EXPECT_TRUE(holds(r));
    std::vector<std::vector<double>> xs, ys;
    for (const auto& x : k) xs.push_back(oracle::to_doubles(x));
    for (const auto& y : l) ys.push_back(oracle::to_doubles(y));
    long sure = 0, possible = 0;
    for (long a = -4; a <= 4; ++a) {
      for (long b = -4; b <= 4; ++b) {
        const double d = oracle::grid_distance({double(a), double(b)}, xs, ys, 1.0 / 3, to_double(p), 20000);
        if (d < 1 - 1e-3) ++sure;
        if (d < 1 + 1e-3) ++possible;
      }
    }
    const long count = std::stol(witness(r, "G(M+cube)"));
    EXPECT_LE(sure, count);
    EXPECT_LE(count, possible);
  }
}

TEST(DbmP1, Examples) {
  const SetRep o = SetRep::points({Point{0}});
  EXPECT_EQ(check_dbm_p1(o, o, R(1, 2)).verdict, Verdict::HoldsWithEquality);
  for (long a = 0; a <= 4; ++a) {
    for (long b = 0; b <= 4; ++b) {
      const CheckReport r = check_dbm_p1(range_points(0, a), range_points(0, b), R(1, 2));
      // (-1, (a+b)/2 + 1) holds 0, 1, ..., ceil((a+b)/2).
      const long expected = (a + b + 1) / 2 + 1;
      EXPECT_EQ(witness(r, "G(M+cube)"), std::to_string(expected));
      EXPECT_TRUE(holds(r));
    }
  }
  const CheckReport boxes = check_dbm_p1(SetRep::cube(2, 0, 1), SetRep::cube(2, 0, 2), R(1, 3));
  EXPECT_EQ(witness(boxes, "path"), "minkowski");
  EXPECT_EQ(witness(boxes, "G(M+cube)"), "9");
  EXPECT_EQ(boxes.lhs.lower(), R(3));
  EXPECT_EQ(boxes.rhs.lower(), R(7, 3));
  EXPECT_EQ(boxes.verdict, Verdict::Holds);
}

TEST(DbmP1, MatchesCombinationCheckAtPEqualOne) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> coord(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point> k{Point{coord(rng), coord(rng)}, Point{coord(rng), coord(rng)}};
    std::vector<Point> l{Point{coord(rng), coord(rng)}};
    expect_same_sides(check_dbm_p1(SetRep::points(k), SetRep::points(l), R(1, 4)),
                      check_dlpbm(SetRep::points(k), SetRep::points(l), R(1, 4), 1));
    const SetRep a = SetRep::box({Interval1D{R(coord(rng), 2) - 2, R(1, 3) + 2, true, false}, Interval1D::closed(0, 1)});
    const SetRep b = SetRep::box({Interval1D::closed(-1, 1), Interval1D{R(-1, 4), R(3, 2), false, true}});
    expect_same_sides(check_dbm_p1(a, b, R(2, 3)), check_dlpbm(a, b, R(2, 3), 1));
  }
}

TEST(BmTs, Examples) {
  const CheckReport r = check_bm_ts(iv(0, 1), iv(0, 1), 1, 1);
  EXPECT_EQ(witness(r, "G(M+cube)"), "4");
  EXPECT_EQ(r.verdict, Verdict::HoldsWithEquality);
  const CheckReport big = check_bm_ts(iv(0, 1), iv(0, 1), 2, 3);
  // [0,5] + (-1,5) = (-1,10).
  EXPECT_EQ(witness(big, "G(M+cube)"), "10");
  EXPECT_EQ(big.rhs.lower(), R(10));
  EXPECT_EQ(big.verdict, Verdict::HoldsWithEquality);
  const SetRep k = SetRep::points({Point{0, 1}, Point{2, 2}}), l = SetRep::cube(2, 0, 1);
  expect_same_sides(check_bm_ts(k, l, R(2, 3), R(1, 3)), check_dbm_p1(k, l, R(1, 3)));
}

TEST(LpbmTs, Examples) {
  const CheckReport r = check_lpbm_ts(iv(0, 1), iv(0, 1), 2, 2, 2);
  EXPECT_EQ(witness(r, "cube_end"), "2");
  EXPECT_EQ(witness(r, "G(M+cube)"), "4");
  EXPECT_EQ(r.lhs.lower(), R(16));
  EXPECT_EQ(r.verdict, Verdict::HoldsWithEquality);
  const SetRep k = SetRep::points({Point{0, 1}, Point{2, 2}}), l = SetRep::cube(2, -1, 1);
  for (const Rational& p : {R(1), R(3, 2), R(3)}) {
    const CheckReport a = check_lpbm_ts(k, l, R(3, 4), R(1, 4), p);
    const CheckReport b = check_dlpbm(k, l, R(1, 4), p);
    expect_same_sides(a, b);
    const SetRep A = SetRep::points({Point{0, 0}, Point{1, 2}}), B = SetRep::points({Point{-1, 0}});
    expect_same_sides(check_lpbm_ts(A, B, 1, 1, p), check_cardinality(A, B, p));
  }
}

TEST(Cardinality, Examples) {
  const SetRep o = SetRep::points({Point{0}});
  const CheckReport r = check_cardinality(o, o, 1);
  EXPECT_EQ(r.verdict, Verdict::HoldsWithEquality);
  EXPECT_EQ(witness(r, "|A+B+{0,1}^n|"), "2");
  for (long a = 0; a <= 3; ++a) {
    for (long b = 0; b <= 3; ++b) {
      const CheckReport c = check_cardinality(range_points(0, a), range_points(0, b), 1);
      EXPECT_EQ(witness(c, "G(A+B+cube)"), std::to_string(a + b + 2));
      EXPECT_EQ(c.verdict, Verdict::HoldsWithEquality);
    }
  }
  EXPECT_THROW(check_cardinality(iv(0, 1), o, 1), std::invalid_argument);
}

TEST(Cardinality, WeakenedCubeCounterexample) {
  const CardinalityRepro r = repro_cardinality_counterexample();
  EXPECT_EQ(r.weakened.verdict, Verdict::Violation);
  EXPECT_EQ(witness(r.weakened, "G(A+B+cube)"), "3");
  EXPECT_TRUE(holds(r.full_cube));
  // 3 < 2^(5/3) ~ 3.1748.
  EXPECT_LT(3.0, std::pow(2.0, 5.0 / 3));
  EXPECT_EQ(witness(r.weakened, "S_p(|A|,|B|)").substr(0, 8), "[3.17480");
}

TEST(Repro, CubeReduction) {
  const CheckReport r = repro_remark_cube_reduction(R(1, 2), 2, R(1, 100));
  EXPECT_EQ(witness(r, "count"), "2");
  EXPECT_EQ(r.verdict, Verdict::Violation);
  EXPECT_EQ(witness(r, "reproduced"), "true");
  const CheckReport big = repro_remark_cube_reduction(R(1, 2), 2, R(1, 2));
  EXPECT_EQ(witness(big, "premise M_p(1,2;lambda)+a<2"), "fails");
  EXPECT_EQ(witness(big, "reproduced"), "false");
  // p = 1: M_1(1,2;λ) = 1 + λ.
  const CheckReport lin = repro_remark_cube_reduction(R(1, 2), 1, R(1, 4));
  EXPECT_EQ(witness(lin, "count"), "2");
  EXPECT_EQ(lin.rhs.lower(), R(9, 4));
  EXPECT_EQ(witness(lin, "reproduced"), "true");
}

TEST(Repro, PsumCube) {
  const CheckReport r = repro_remark_psum_cube();
  EXPECT_EQ(witness(r, "count"), "2");
  EXPECT_EQ(witness(r, "G((-1,sqrt 3.5))"), "2");
  EXPECT_EQ(witness(r, "reproduced"), "true");
  EXPECT_NEAR(r.rhs.to_double(), std::sqrt(6.5), 1e-15);
  EXPECT_LT(r.rhs.width(), Rational(1, 1000000) * Rational(1, 1000000));
  EXPECT_EQ(witness(r, "combination_endpoint_squared").substr(0, 3), "[2.");
}

TEST(Repro, SharpFamily) {
  const auto reports = repro_sharp_cube_family();
  EXPECT_EQ(reports.size(), 36u);
  for (const auto& r : reports) EXPECT_EQ(r.verdict, Verdict::HoldsWithEquality);
}

TEST(Volume, ClosedForms) {
  const CheckReport r = check_volume_lpbm(iv(0, 1), iv(0, 2), R(1, 2), 2);
  EXPECT_EQ(r.verdict, Verdict::HoldsWithEquality);
  EXPECT_NEAR(r.lhs.to_double(), 2.5, 1e-15);
  const SetRep k = SetRep::cube(2, -1, 1);
  EXPECT_EQ(check_volume_lpbm(k, k, R(1, 3), 3).verdict, Verdict::HoldsWithEquality);
  const CheckReport homothetic = check_volume_lpbm(SetRep::cube(2, 0, 1), SetRep::cube(2, 0, 2), R(1, 2), 2);
  EXPECT_EQ(homothetic.verdict, Verdict::HoldsWithEquality);
  EXPECT_THROW(check_volume_lpbm(iv(1, 2), iv(0, 1), R(1, 2), 2), std::invalid_argument);
}

TEST(Volume, MonteCarloEnclosesTheValue) {
  // The squares as polytopes force the sampling path; the value is known.
  const SetRep k = VPolytope{{Point{0, 0}, Point{1, 0}, Point{1, 1}, Point{0, 1}}};
  const SetRep l = VPolytope{{Point{0, 0}, Point{2, 0}, Point{2, 2}, Point{0, 2}}};
  const CheckReport r = check_volume_lpbm(k, l, R(1, 2), 2, 20000, 3);
  EXPECT_EQ(witness(r, "method").substr(0, 5), "monte");
  EXPECT_NE(r.verdict, Verdict::Violation);
  // vol(M_2) = M_2(1,2;1/2)^2 = 2.5, and the left side is vol^(p/n) = 2.5.
  EXPECT_TRUE(r.lhs.contains(R(5, 2)));
  const CheckReport again = check_volume_lpbm(k, l, R(1, 2), 2, 20000, 3);
  EXPECT_EQ(again.lhs.lower(), r.lhs.lower());
  // A thin non-homothetic pair where the inequality is strict.
  const SetRep thin = VPolytope{{Point{0, 0}, Point{4, 0}, Point({R(4), R(1, 4)}), Point({R(0), R(1, 4)})}};
  const CheckReport s = check_volume_lpbm(thin, k, R(1, 2), 1, 20000, 3);
  EXPECT_EQ(s.verdict, Verdict::Holds);
}

TEST(Convergence, OneDimensional) {
  const auto rows = converge_experiment(iv(0, 1), iv(0, 2), R(1, 2), 2, Exponent::pos_inf(), 8);
  ASSERT_EQ(rows.size(), 9u);
  const double limit = std::sqrt(2.5);
  EXPECT_NEAR(rows.back().continuous_lhs->to_double(), limit, 1e-15);
  EXPECT_NEAR(rows.back().continuous_rhs.to_double(), limit, 1e-15);
  EXPECT_LT(rows.back().gap, 0.02);
  EXPECT_LT(std::abs(rows.back().rhs.to_double() - limit) / limit, 0.02);
  for (std::size_t m = 1; m < rows.size(); ++m) {
    EXPECT_LE(rows[m].gap, rows[m - 1].gap + std::ldexp(1.0, -static_cast<int>(m)));
    EXPECT_NE(rows[m].verdict, Verdict::Violation);
  }
  // m = 0 is the plain check over Z.
  const CheckReport plain = check_dlpbm(iv(0, 1), iv(0, 2), R(1, 2), 2);
  EXPECT_EQ(rows[0].lhs.lower(), Rational(std::stol(witness(plain, "G(M+cube)"))));
}

TEST(Convergence, TwoDimensionalBoxes) {
  const auto rows = converge_experiment(SetRep::cube(2, 0, 1), SetRep::cube(2, 0, 2), R(1, 2), 2, Exponent::pos_inf(), 5);
  EXPECT_NEAR(rows.back().continuous_lhs->to_double(), 2.5, 1e-12);
  EXPECT_LT(rows.back().gap, 0.1);
  for (const auto& row : rows) EXPECT_NE(row.verdict, Verdict::Violation);
}

TEST(Convergence, HullCountMatchesDirectEvaluation) {
  // α = +inf rows use the count over the grid hulls; compare with the full
  // minimal-h evaluation on the refined lattice.
  const SetRep K = Interval1D{R(0), R(3, 4), false, true}, L = iv(-1, 1);
  for (const Rational& p : {R(1), R(2)}) {
    const auto rows = converge_experiment(K, L, R(1, 3), p, Exponent::pos_inf(), 2);
    for (const auto& row : rows) {
      const Rational h = Rational(1) / Rational(1L << row.m);
      const AxisBox C{{Interval1D::closed(-2, 2)}};
      const GridFunction fm = cell_sup_discretize(PiecewiseConstant{{{K.as_box(), R(1)}}}, row.m, C);
      const GridFunction gm = cell_sup_discretize(PiecewiseConstant{{{L.as_box(), R(1)}}}, row.m, C);
      std::vector<Point> kp, lp;
      for (const auto& [x, v] : fm.support) kp.push_back(x);
      for (const auto& [y, v] : gm.support) lp.push_back(y);
      GridFunction f{fm.support, std::nullopt}, g{gm.support, std::nullopt};
      const BblInstance inst{1, p, R(1, 3), Exponent::pos_inf(), SetRep::points(kp), SetRep::points(lp), f, g};
      const CheckReport direct = check_lattice_variant(inst, Lattice::refined(1, row.m));
      EXPECT_EQ(direct.lhs.upper() * h, row.lhs.upper()) << row.m << " " << p;
    }
  }
}

TEST(Fuzz, DeterministicAndClean) {
  FuzzConfig cfg;
  cfg.trials = 60;
  for (const auto& target : fuzz_targets()) {
    cfg.target = target;
    const FuzzSummary a = fuzz(cfg);
    EXPECT_EQ(a.violations, 0u) << target;
    EXPECT_EQ(a.errors, 0u) << target << (a.error_instances.empty() ? "" : a.error_instances.front());
    EXPECT_EQ(a.holds + a.equalities + a.ambiguous + a.violations + a.errors, cfg.trials);
    const FuzzSummary b = fuzz(cfg);
    EXPECT_EQ(a.worst_instance, b.worst_instance);
    EXPECT_EQ(a.min_slack, b.min_slack);
    EXPECT_EQ(a.holds, b.holds);
  }
  cfg.trials = 0;
  const FuzzSummary empty = fuzz(cfg);
  EXPECT_EQ(empty.trials, 0u);
  EXPECT_FALSE(empty.min_slack.has_value());
  cfg.target = "nonsense";
  EXPECT_THROW(fuzz(cfg), std::invalid_argument);
}
