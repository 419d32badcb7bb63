#pragma once

#include "bmlab/rational.hpp"

#include <compare>
#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

namespace bmlab {

/// A point of Q^n.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<Rational> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<long> coords);

  static Point origin(int n) { return Point(std::vector<Rational>(static_cast<std::size_t>(n), Rational(0))); }

  int dim() const { return static_cast<int>(coords_.size()); }
  const Rational& operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
  Rational& operator[](int i) { return coords_[static_cast<std::size_t>(i)]; }
  const std::vector<Rational>& coords() const { return coords_; }

  friend Point operator+(const Point& a, const Point& b);
  friend Point operator-(const Point& a, const Point& b);
  friend Point operator*(const Rational& k, const Point& a);
  friend bool operator==(const Point& a, const Point& b) { return a.coords_ == b.coords_; }
  friend bool operator<(const Point& a, const Point& b) { return a.coords_ < b.coords_; }

  /// Max-norm distance.
  friend Rational chebyshev(const Point& a, const Point& b);

 private:
  std::vector<Rational> coords_;
};

Rational dot(const Point& a, const Point& b);
std::string to_string(const Point& p);

/// Interval with explicit open/closed ends.
struct Interval1D {
  Rational lo;
  Rational hi;
  bool lo_open = false;
  bool hi_open = false;

  static Interval1D closed(const Rational& lo, const Rational& hi) { return {lo, hi, false, false}; }
  static Interval1D open(const Rational& lo, const Rational& hi) { return {lo, hi, true, true}; }

  bool contains(const Rational& x) const {
    return (lo_open ? x > lo : x >= lo) && (hi_open ? x < hi : x <= hi);
  }
  bool is_empty() const { return lo > hi || (lo == hi && (lo_open || hi_open)); }
  friend bool operator==(const Interval1D&, const Interval1D&) = default;
};

struct FinitePoints {
  std::vector<Point> points;
};

struct AxisBox {
  std::vector<Interval1D> sides;
};

/// Convex hull of a vertex list.
struct VPolytope {
  std::vector<Point> vertices;
};

/// A bounded subset of R^n in one of the supported representations.
class SetRep {
 public:
  using Variant = std::variant<FinitePoints, Interval1D, AxisBox, VPolytope>;

  SetRep(FinitePoints v);  // NOLINT
  SetRep(Interval1D v);    // NOLINT
  SetRep(AxisBox v);       // NOLINT
  SetRep(VPolytope v);     // NOLINT

  static SetRep points(std::vector<Point> pts) { return FinitePoints{std::move(pts)}; }
  static SetRep box(std::vector<Interval1D> sides) { return AxisBox{std::move(sides)}; }
  /// [lo, hi]^n closed.
  static SetRep cube(int n, const Rational& lo, const Rational& hi);
  /// (-1, 1)^n.
  static SetRep open_unit_cube(int n);
  /// (-1, a)^n, open on both ends (the ceil(t+s) cubes).
  static SetRep open_cube(int n, const Rational& a);
  /// {0,1}^n as a finite set.
  static SetRep binary_cube(int n);

  int dim() const { return dim_; }
  const Variant& variant() const { return v_; }
  std::string kind() const;

  bool is_finite_points() const { return std::holds_alternative<FinitePoints>(v_); }
  bool is_polytope() const { return std::holds_alternative<VPolytope>(v_); }
  /// Interval1D or AxisBox.
  bool is_box() const { return std::holds_alternative<Interval1D>(v_) || std::holds_alternative<AxisBox>(v_); }
  /// Convex representation (not a point list, unless it has a single point).
  bool is_convex() const;

  /// Box view of an Interval1D/AxisBox (throws otherwise).
  AxisBox as_box() const;

  /// Exact membership honoring open/closed ends.
  bool contains(const Point& z) const;

  /// Closed rational bounding box.
  AxisBox bounding_box() const;

  /// Image under x -> k x (k >= 0) and under x -> x + v.
  SetRep scaled(const Rational& k) const;
  SetRep translated(const Point& v) const;

  /// Image under x -> A x for an invertible rational matrix (rows of A).
  /// Boxes stay boxes when A is diagonal with positive entries; otherwise they
  /// become closed polytopes.
  SetRep mapped(const std::vector<std::vector<Rational>>& a) const;

  /// Candidate points enumerated by this set (FinitePoints) or vertices (VPolytope).
  std::vector<Point> vertices() const;

 private:
  Variant v_;
  int dim_ = 0;
};

std::string to_string(const Interval1D& s);
std::string to_string(const SetRep& set);

/// Exact test z in conv(vertices) by a rational simplex feasibility solve.
bool in_convex_hull(const std::vector<Point>& vertices, const Point& z);

/// Vertices of the planar convex hull in counter-clockwise order (collinear
/// inputs return the two extreme points, a single point returns itself).
std::vector<Point> convex_hull_2d(std::vector<Point> pts);

}  // namespace bmlab
