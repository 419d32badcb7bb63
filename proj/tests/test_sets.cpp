#include "bmlab/set_geometry.hpp"
#include "bmlab/sets.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace bmlab;

namespace {

Rational R(long a, long b = 1) { return make_rational(a, b); }
Point P2(const Rational& x, const Rational& y) { return Point(std::vector<Rational>{x, y}); }
Point P1(const Rational& x) { return Point(std::vector<Rational>{x}); }

SetRep triangle() { return VPolytope{{Point{0, 0}, Point{2, 0}, Point{0, 2}}}; }

}  // namespace

TEST(Sets, IntervalEnds) {
  SetRep half = Interval1D{R(-1), R(2), true, false};
  EXPECT_FALSE(half.contains(P1(R(-1))));
  EXPECT_TRUE(half.contains(P1(R(2))));
  EXPECT_TRUE(half.contains(P1(R(-99, 100))));
  EXPECT_THROW(SetRep(Interval1D{R(2), R(1)}), std::invalid_argument);
}

TEST(Sets, BoxesAndCubes) {
  SetRep c = SetRep::open_unit_cube(2);
  EXPECT_TRUE(c.contains(Point{0, 0}));
  EXPECT_FALSE(c.contains(P2(R(1), R(0))));
  EXPECT_EQ(SetRep::binary_cube(3).vertices().size(), 8u);
  EXPECT_EQ(c.kind(), "box");
  EXPECT_EQ(SetRep::binary_cube(2).kind(), "points");
}

TEST(Sets, ConvexHullMembership) {
  EXPECT_TRUE(in_convex_hull(triangle().vertices(), Point{1, 1}));
  EXPECT_FALSE(in_convex_hull(triangle().vertices(), P2(R(1), R(101, 100))));
  std::vector<Point> seg{Point{0, 0}, Point{2, 2}};
  EXPECT_TRUE(in_convex_hull(seg, Point{1, 1}));
  EXPECT_FALSE(in_convex_hull(seg, Point{1, 0}));
  std::vector<Point> tet{Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0}, Point{0, 0, 1}};
  EXPECT_TRUE(in_convex_hull(tet, Point(std::vector<Rational>{R(1, 4), R(1, 4), R(1, 2)})));
  EXPECT_FALSE(in_convex_hull(tet, Point(std::vector<Rational>{R(1, 3), R(1, 3), R(1, 2)})));
}

TEST(Sets, HullDropsInteriorAndCollinear) {
  auto h = convex_hull_2d({Point{0, 0}, Point{1, 0}, Point{2, 0}, Point{2, 2}, Point{0, 2}, Point{1, 1}});
  EXPECT_EQ(h.size(), 4u);
}

TEST(Sets, MappedBoxes) {
  SetRep b = SetRep::box({Interval1D{R(0), R(1), false, true}, Interval1D::closed(R(0), R(2))});
  SetRep flipped = b.mapped({{R(-1), R(0)}, {R(0), R(3)}});
  ASSERT_TRUE(flipped.is_box());
  EXPECT_TRUE(flipped.contains(P2(R(0), R(6))));
  EXPECT_FALSE(flipped.contains(P2(R(-1), R(6))));
  SetRep sheared = SetRep::cube(2, R(0), R(1)).mapped({{R(1), R(1)}, {R(0), R(1)}});
  EXPECT_TRUE(sheared.is_polytope());
  EXPECT_TRUE(sheared.contains(Point{2, 1}));
  EXPECT_FALSE(sheared.contains(Point{2, 0}));
}

TEST(SetGeometry, SupportFunction) {
  EXPECT_EQ(support_function(SetRep::cube(3, R(0), R(5)), Point{1, 0, 0}).lower(), R(5));
  EXPECT_EQ(support_function(Interval1D::closed(R(0), R(1)), Point{-1}).lower(), R(0));
  EXPECT_EQ(support_function(triangle(), Point{1, 1}).lower(), R(2));
  EXPECT_THROW(support_function(SetRep::points({Point{0}}), Point{1}), std::invalid_argument);
  EXPECT_THROW(support_function(Interval1D::closed(R(1), R(2)), Point{1}), std::invalid_argument);
}

TEST(SetGeometry, ScalarMultiple) {
  auto s = p_scalar_mult(R(1, 2), Interval1D::closed(R(0), R(2)), Exponent(2));
  EXPECT_FALSE(s.exact.has_value());
  CertifiedReal hi = s.factor * CertifiedReal(R(2));
  EXPECT_LE(hi.lower() * hi.lower(), R(2));
  EXPECT_GE(hi.upper() * hi.upper(), R(2));
  auto id = p_scalar_mult(R(1), triangle(), Exponent(R(7, 3)));
  ASSERT_TRUE(id.exact.has_value());
  EXPECT_TRUE(id.exact->contains(Point{2, 0}));
  auto q = p_scalar_mult(R(1, 4), SetRep::points({Point{2, 0}}), Exponent(2));
  ASSERT_TRUE(q.exact.has_value());
  EXPECT_EQ(q.exact->vertices(), std::vector<Point>{Point({1, 0})});
}

TEST(SetGeometry, ComboSupport) {
  auto c = PCombo::lambda_combo(Interval1D::closed(R(0), R(1)), Interval1D::closed(R(0), R(2)), R(1, 2), R(2));
  CertifiedReal h = p_combo_support(c, Point{1});
  EXPECT_LE(h.lower() * h.lower(), R(5, 2));
  EXPECT_GE(h.upper() * h.upper(), R(5, 2));
  EXPECT_LT(h.width(), R(1, 1000000000));

  auto same = PCombo::lambda_combo(triangle(), triangle(), R(2, 7), R(5, 2));
  for (const auto& u : {Point{1, 1}, Point{-3, 2}, Point{1, -5}}) {
    CertifiedReal v = p_combo_support(same, u);
    EXPECT_TRUE(v.is_exact());
    EXPECT_EQ(v.lower(), support_function(triangle(), u).lower());
  }

  auto lin = PCombo::lambda_combo(triangle(), SetRep::cube(2, R(-1), R(1)), R(1, 3), R(1));
  EXPECT_EQ(p_combo_support(lin, Point{1, 2}).lower(), R(2, 3) * 4 + R(1, 3) * 3);
}

TEST(SetGeometry, MembershipExamples) {
  auto pts = PCombo::lambda_combo(SetRep::points({Point{0}}), SetRep::points({Point{2}}), R(1, 2), R(2));
  EXPECT_EQ(p_combo_membership(Point{1}, pts).kind, Decision::Inside);
  EXPECT_EQ(p_combo_membership(Point{0}, pts).kind, Decision::Inside);
  EXPECT_EQ(p_combo_membership(Point{2}, pts).kind, Decision::Outside);

  auto iv = PCombo::lambda_combo(Interval1D::closed(R(0), R(1)), Interval1D::closed(R(0), R(2)), R(1, 2), R(2));
  EXPECT_EQ(p_combo_membership(P1(R(8, 5)), iv).kind, Decision::Outside);
  EXPECT_EQ(p_combo_membership(P1(R(3, 2)), iv).kind, Decision::Inside);
  EXPECT_EQ(p_combo_membership(Point{0}, iv).kind, Decision::Inside);

  auto tri = PCombo::lambda_combo(triangle(), SetRep::cube(2, R(-1), R(1)), R(1, 2), R(3));
  EXPECT_EQ(p_combo_membership(Point{0, 0}, tri).kind, Decision::Inside);
}

TEST(SetGeometry, OneDimensionalInterval) {
  auto iv = PCombo::lambda_combo(Interval1D::closed(R(0), R(1)), Interval1D{R(-1), R(2), false, true}, R(1, 2), R(2));
  PInterval m = p_combo_interval(iv);
  EXPECT_LE(m.hi.lower() * m.hi.lower(), R(5, 2));
  EXPECT_GE(m.hi.upper() * m.hi.upper(), R(5, 2));
  EXPECT_TRUE(m.hi_open);
  EXPECT_FALSE(m.lo_open);
  EXPECT_LE(m.lo.upper() * m.lo.upper(), R(1, 2));
  EXPECT_GE(m.lo.lower() * m.lo.lower(), R(1, 2));
}

TEST(SetGeometry, ChebyshevDistance) {
  auto pts = PCombo::lambda_combo(SetRep::points({Point{0}}), SetRep::points({Point{2}}), R(1, 2), R(2));
  CertifiedReal d = chebyshev_distance(Point{3}, pts);
  const double want = 3 - std::sqrt(2.0);
  EXPECT_LE(d.lower(), from_double(want + 1e-12));
  EXPECT_GE(d.upper(), from_double(want - 1e-12));
  CertifiedReal on = chebyshev_distance(Point{1}, pts);
  EXPECT_EQ(on.lower(), R(0));
  EXPECT_LT(on.upper(), R(1, 1000000000000));

  auto pair = PCombo::lambda_combo(SetRep::points({Point{1, 0}}), SetRep::points({Point{0, 1}}), R(1, 2), R(2));
  CertifiedReal d2 = chebyshev_distance(Point{2, 2}, pair);
  const double ref = oracle::grid_distance({2, 2}, {{1, 0}}, {{0, 1}}, 0.5, 2, 1000000);
  EXPECT_NEAR(d2.to_double(), ref, 1e-6);
}

TEST(SetGeometry, DistanceSymmetricUnderSwap) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coord(-4, 4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point> k, l;
    for (int i = 0; i < 2; ++i) k.push_back(Point{coord(rng), coord(rng)});
    for (int i = 0; i < 2; ++i) l.push_back(Point{coord(rng), coord(rng)});
    const Point z{coord(rng), coord(rng)};
    const Rational lambda = R(1 + trial % 4, 5);
    auto a = PCombo::lambda_combo(SetRep::points(k), SetRep::points(l), lambda, R(3, 2));
    auto b = PCombo::lambda_combo(SetRep::points(l), SetRep::points(k), 1 - lambda, R(3, 2));
    CertifiedReal da = chebyshev_distance(z, a), db = chebyshev_distance(z, b);
    EXPECT_LE(da.lower(), db.upper());
    EXPECT_LE(db.lower(), da.upper());
  }
}

TEST(SetGeometry, MinkowskiSums) {
  SetRep s = minkowski_sum(SetRep::points({Point{0}, Point{1}}), SetRep::points({Point{0}, Point{1}}));
  EXPECT_EQ(s.vertices().size(), 3u);
  SetRep iv = minkowski_sum(Interval1D::closed(R(0), R(1)), Interval1D::closed(R(0), R(2)));
  EXPECT_EQ(std::get<Interval1D>(iv.variant()), Interval1D::closed(R(0), R(3)));
  SetRep box = minkowski_sum(SetRep::cube(2, R(0), R(1)), SetRep::open_unit_cube(2));
  for (const auto& side : box.as_box().sides) EXPECT_EQ(side, Interval1D::open(R(-1), R(2)));
  SetRep poly = minkowski_sum(triangle(), triangle());
  EXPECT_EQ(poly.vertices().size(), 3u);
  EXPECT_THROW(minkowski_sum(triangle(), SetRep::points({Point{0, 0}})), std::invalid_argument);
}

TEST(SetGeometryProperty, LinearCaseMatchesMinkowski) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coord(-3, 3);
  for (int trial = 0; trial < 150; ++trial) {
    const Rational lambda = R(1 + trial % 3, 4);
    std::vector<Interval1D> ks, ls;
    for (int i = 0; i < 2; ++i) {
      int a = coord(rng), b = coord(rng);
      ks.push_back({R(std::min(a, b)), R(std::max(a, b)), trial % 2 == 0, false});
      a = coord(rng), b = coord(rng);
      ls.push_back({R(std::min(a, b)), R(std::max(a, b)), false, trial % 3 == 0});
    }
    SetRep k = SetRep::box(ks), l = SetRep::box(ls);
    if (ks[0].is_empty() || ks[1].is_empty()) continue;
    SetRep direct = minkowski_sum(k.scaled(1 - lambda), l.scaled(lambda));
    auto combo = PCombo::lambda_combo(k, l, lambda, R(1));
    const Point z(std::vector<Rational>{R(coord(rng), 2), R(coord(rng), 2)});
    const Decision d = p_combo_membership(z, combo).kind;
    ASSERT_NE(d, Decision::Ambiguous);
    EXPECT_EQ(d == Decision::Inside, direct.contains(z)) << to_string(z);
  }
}

TEST(SetGeometryProperty, ContainsMinkowskiCombination) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coord(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Point> kv, lv;
    for (int i = 0; i < 3; ++i) kv.push_back(Point{coord(rng), coord(rng)});
    for (int i = 0; i < 2; ++i) lv.push_back(Point{coord(rng), coord(rng)});
    const Rational lambda = R(1 + trial % 5, 6);
    // Random point of (1 - lambda) K + lambda L.
    Point z = (1 - lambda) * kv[trial % 3] + lambda * lv[trial % 2];
    auto combo = PCombo::lambda_combo(VPolytope{kv}, VPolytope{lv}, lambda, R(2));
    EXPECT_NE(p_combo_membership(z, combo).kind, Decision::Outside) << to_string(z);
  }
}

TEST(SetGeometryProperty, PolygonMembershipMatchesSupportForm) {
  // For convex bodies containing the origin both definitions agree.
  auto combo = PCombo::lambda_combo(triangle(), SetRep::cube(2, R(-1), R(1)), R(1, 3), R(2));
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coord(-40, 40);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Point z(std::vector<Rational>{R(coord(rng), 20), R(coord(rng), 20)});
    double margin = INFINITY;
    for (int k = 0; k < 2000; ++k) {
      const double th = 2 * M_PI * k / 2000;
      const Point u(std::vector<Rational>{from_double(std::cos(th)), from_double(std::sin(th))});
      margin = std::min(margin, p_combo_support(combo, u).to_double() - to_double(dot(z, u)));
    }
    if (std::abs(margin) < 1e-2) continue;
    ++checked;
    const Decision d = p_combo_membership(z, combo).kind;
    EXPECT_EQ(d, margin > 0 ? Decision::Inside : Decision::Outside) << to_string(z);
  }
  EXPECT_GT(checked, 150);
}

TEST(SetGeometryProperty, FinitePointsMatchGridOracle) {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> coord(-3, 3);
  const SetRep cube = SetRep::open_unit_cube(2);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Point> k{Point{coord(rng), coord(rng)}, Point{coord(rng), coord(rng)}};
    std::vector<Point> l{Point{coord(rng), coord(rng)}};
    const Point z(std::vector<Rational>{R(coord(rng), 2), R(coord(rng), 2)});
    auto combo = PCombo::lambda_combo(SetRep::points(k), SetRep::points(l), R(1, 2), R(2));
    using oracle::to_doubles;
    const double d = oracle::grid_distance(to_doubles(z), {to_doubles(k[0]), to_doubles(k[1])}, {to_doubles(l[0])},
                                           0.5, 2, 200000);
    if (std::abs(d - 1) < 1e-4) continue;
    ++checked;
    EXPECT_EQ(p_combo_membership(z, combo, 1e-9, &cube).kind, d < 1 ? Decision::Inside : Decision::Outside)
        << to_string(z);
  }
  EXPECT_GT(checked, 30);
}
