#include "bmlab/sets.hpp"

#include <algorithm>
#include <stdexcept>

namespace bmlab {

Point::Point(std::initializer_list<long> coords) {
  coords_.reserve(coords.size());
  for (long c : coords) coords_.emplace_back(c);
}

Point operator+(const Point& a, const Point& b) {
  Point out = a;
  for (int i = 0; i < a.dim(); ++i) out[i] += b[i];
  return out;
}

Point operator-(const Point& a, const Point& b) {
  Point out = a;
  for (int i = 0; i < a.dim(); ++i) out[i] -= b[i];
  return out;
}

Point operator*(const Rational& k, const Point& a) {
  Point out = a;
  for (int i = 0; i < a.dim(); ++i) out[i] *= k;
  return out;
}

Rational chebyshev(const Point& a, const Point& b) {
  Rational best(0);
  for (int i = 0; i < a.dim(); ++i) {
    Rational d = abs(a[i] - b[i]);
    if (d > best) best = d;
  }
  return best;
}

Rational dot(const Point& a, const Point& b) {
  Rational s(0);
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

std::string to_string(const Point& p) {
  std::string out = "(";
  for (int i = 0; i < p.dim(); ++i) {
    if (i) out += ", ";
    out += to_string(p[i]);
  }
  return out + ")";
}

namespace {

int dim_of(const std::vector<Point>& pts, const char* what) {
  if (pts.empty()) throw std::invalid_argument(std::string(what) + " must be nonempty");
  int n = pts.front().dim();
  if (n < 1) throw std::invalid_argument(std::string(what) + ": dimension must be >= 1");
  for (const auto& p : pts) {
    if (p.dim() != n) throw std::invalid_argument(std::string(what) + ": mixed dimensions");
  }
  return n;
}

void check_interval(const Interval1D& iv) {
  if (iv.lo > iv.hi) throw std::invalid_argument("interval with lo > hi");
}

}  // namespace

SetRep::SetRep(FinitePoints v) : v_(std::move(v)) { dim_ = dim_of(std::get<FinitePoints>(v_).points, "FinitePoints"); }

SetRep::SetRep(Interval1D v) : v_(std::move(v)), dim_(1) { check_interval(std::get<Interval1D>(v_)); }

SetRep::SetRep(AxisBox v) : v_(std::move(v)) {
  const auto& sides = std::get<AxisBox>(v_).sides;
  if (sides.empty()) throw std::invalid_argument("AxisBox needs at least one side");
  for (const auto& s : sides) check_interval(s);
  dim_ = static_cast<int>(sides.size());
}

SetRep::SetRep(VPolytope v) : v_(std::move(v)) { dim_ = dim_of(std::get<VPolytope>(v_).vertices, "VPolytope"); }

SetRep SetRep::cube(int n, const Rational& lo, const Rational& hi) {
  return AxisBox{std::vector<Interval1D>(static_cast<std::size_t>(n), Interval1D::closed(lo, hi))};
}

SetRep SetRep::open_unit_cube(int n) { return open_cube(n, Rational(1)); }

SetRep SetRep::open_cube(int n, const Rational& a) {
  return AxisBox{std::vector<Interval1D>(static_cast<std::size_t>(n), Interval1D::open(Rational(-1), a))};
}

SetRep SetRep::binary_cube(int n) {
  std::vector<Point> pts;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Point p = Point::origin(n);
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) p[i] = 1;
    }
    pts.push_back(p);
  }
  return FinitePoints{std::move(pts)};
}

std::string SetRep::kind() const {
  switch (v_.index()) {
    case 0: return "points";
    case 1: return "interval";
    case 2: return "box";
    default: return "polytope";
  }
}

std::string to_string(const Interval1D& s) {
  return std::string(s.lo_open ? "(" : "[") + to_string(s.lo) + ", " + to_string(s.hi) + (s.hi_open ? ")" : "]");
}

std::string to_string(const SetRep& set) {
  std::string out;
  if (set.is_box()) {
    for (const auto& s : set.as_box().sides) out += (out.empty() ? "" : " x ") + to_string(s);
    return set.kind() + " " + out;
  }
  for (const auto& p : set.vertices()) out += (out.empty() ? "" : " ") + to_string(p);
  return set.kind() + " {" + out + "}";
}

bool SetRep::is_convex() const {
  if (const auto* fp = std::get_if<FinitePoints>(&v_)) return fp->points.size() == 1;
  return true;
}

AxisBox SetRep::as_box() const {
  if (const auto* iv = std::get_if<Interval1D>(&v_)) return AxisBox{{*iv}};
  if (const auto* b = std::get_if<AxisBox>(&v_)) return *b;
  throw std::invalid_argument("set is not a box");
}

bool SetRep::contains(const Point& z) const {
  if (z.dim() != dim_) throw std::invalid_argument("contains: dimension mismatch");
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FinitePoints>) {
          return std::find(s.points.begin(), s.points.end(), z) != s.points.end();
        } else if constexpr (std::is_same_v<T, Interval1D>) {
          return s.contains(z[0]);
        } else if constexpr (std::is_same_v<T, AxisBox>) {
          for (int i = 0; i < dim_; ++i) {
            if (!s.sides[static_cast<std::size_t>(i)].contains(z[i])) return false;
          }
          return true;
        } else {
          return in_convex_hull(s.vertices, z);
        }
      },
      v_);
}

AxisBox SetRep::bounding_box() const {
  if (is_box()) {
    AxisBox b = as_box();
    for (auto& s : b.sides) s.lo_open = s.hi_open = false;
    return b;
  }
  const auto pts = vertices();
  AxisBox b;
  for (int i = 0; i < dim_; ++i) {
    Rational lo = pts.front()[i], hi = pts.front()[i];
    for (const auto& p : pts) {
      if (p[i] < lo) lo = p[i];
      if (p[i] > hi) hi = p[i];
    }
    b.sides.push_back(Interval1D::closed(lo, hi));
  }
  return b;
}

std::vector<Point> SetRep::vertices() const {
  if (const auto* fp = std::get_if<FinitePoints>(&v_)) return fp->points;
  if (const auto* vp = std::get_if<VPolytope>(&v_)) return vp->vertices;
  AxisBox b = as_box();
  std::vector<Point> out;
  for (int mask = 0; mask < (1 << dim_); ++mask) {
    Point p = Point::origin(dim_);
    for (int i = 0; i < dim_; ++i) {
      const auto& s = b.sides[static_cast<std::size_t>(i)];
      p[i] = (mask & (1 << i)) ? s.hi : s.lo;
    }
    out.push_back(p);
  }
  return out;
}

SetRep SetRep::scaled(const Rational& k) const {
  if (k < 0) throw std::invalid_argument("scaled: factor must be nonnegative");
  if (k == 0) return FinitePoints{{Point::origin(dim_)}};
  std::vector<std::vector<Rational>> a(static_cast<std::size_t>(dim_), std::vector<Rational>(static_cast<std::size_t>(dim_), Rational(0)));
  for (int i = 0; i < dim_; ++i) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = k;
  return mapped(a);
}

SetRep SetRep::translated(const Point& v) const {
  return std::visit(
      [&](const auto& s) -> SetRep {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FinitePoints> || std::is_same_v<T, VPolytope>) {
          T out;
          const auto& src = [&]() -> const std::vector<Point>& {
            if constexpr (std::is_same_v<T, FinitePoints>) return s.points; else return s.vertices;
          }();
          auto& dst = [&]() -> std::vector<Point>& {
            if constexpr (std::is_same_v<T, FinitePoints>) return out.points; else return out.vertices;
          }();
          for (const auto& p : src) dst.push_back(p + v);
          return out;
        } else if constexpr (std::is_same_v<T, Interval1D>) {
          Interval1D out = s;
          out.lo += v[0];
          out.hi += v[0];
          return out;
        } else {
          AxisBox out = s;
          for (int i = 0; i < dim_; ++i) {
            out.sides[static_cast<std::size_t>(i)].lo += v[i];
            out.sides[static_cast<std::size_t>(i)].hi += v[i];
          }
          return out;
        }
      },
      v_);
}

namespace {

Point apply(const std::vector<std::vector<Rational>>& a, const Point& x) {
  std::vector<Rational> out(a.size(), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) out[i] += a[i][j] * x[static_cast<int>(j)];
  }
  return Point(std::move(out));
}

bool is_diagonal(const std::vector<std::vector<Rational>>& a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      if (i != j && a[i][j] != 0) return false;
    }
  }
  return true;
}

Interval1D map_side(const Interval1D& s, const Rational& k) {
  if (k > 0) return {k * s.lo, k * s.hi, s.lo_open, s.hi_open};
  return {k * s.hi, k * s.lo, s.hi_open, s.lo_open};
}

}  // namespace

SetRep SetRep::mapped(const std::vector<std::vector<Rational>>& a) const {
  if (static_cast<int>(a.size()) != dim_) throw std::invalid_argument("mapped: matrix dimension mismatch");
  if (const auto* fp = std::get_if<FinitePoints>(&v_)) {
    FinitePoints out;
    for (const auto& p : fp->points) out.points.push_back(apply(a, p));
    return out;
  }
  if (const auto* vp = std::get_if<VPolytope>(&v_)) {
    VPolytope out;
    for (const auto& p : vp->vertices) out.vertices.push_back(apply(a, p));
    return out;
  }
  AxisBox b = as_box();
  if (is_diagonal(a)) {
    bool degenerate = false;
    AxisBox out;
    for (int i = 0; i < dim_; ++i) {
      const Rational& k = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
      if (k == 0) degenerate = true;
      out.sides.push_back(map_side(b.sides[static_cast<std::size_t>(i)], k));
    }
    if (!degenerate) {
      if (std::holds_alternative<Interval1D>(v_)) return out.sides.front();
      return out;
    }
  }
  for (const auto& s : b.sides) {
    if (s.lo_open || s.hi_open) throw std::invalid_argument("mapped: open box under a non-diagonal map is unsupported");
  }
  VPolytope out;
  for (const auto& p : vertices()) out.vertices.push_back(apply(a, p));
  return out;
}

bool in_convex_hull(const std::vector<Point>& vertices, const Point& z) {
  const int n = z.dim();
  const int m = static_cast<int>(vertices.size());
  if (m == 0) return false;
  if (n == 1) {
    Rational lo = vertices[0][0], hi = vertices[0][0];
    for (const auto& v : vertices) {
      if (v[0] < lo) lo = v[0];
      if (v[0] > hi) hi = v[0];
    }
    return lo <= z[0] && z[0] <= hi;
  }
  if (n == 2) {
    auto hull = convex_hull_2d(vertices);
    if (hull.size() == 1) return hull[0] == z;
    auto cross = [](const Point& o, const Point& a, const Point& b) -> Rational {
      return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    if (hull.size() == 2) {
      if (cross(hull[0], hull[1], z) != 0) return false;
      for (int i = 0; i < 2; ++i) {
        Rational lo = std::min(hull[0][i], hull[1][i]), hi = std::max(hull[0][i], hull[1][i]);
        if (z[i] < lo || z[i] > hi) return false;
      }
      return true;
    }
    for (std::size_t i = 0; i < hull.size(); ++i) {
      if (cross(hull[i], hull[(i + 1) % hull.size()], z) < 0) return false;
    }
    return true;
  }

  // Phase-one simplex with Bland's rule on: sum_j l_j v_j = z, sum_j l_j = 1, l >= 0.
  const int rows = n + 1;
  const int cols = m + rows;  // structural + artificial
  std::vector<std::vector<Rational>> t(static_cast<std::size_t>(rows), std::vector<Rational>(static_cast<std::size_t>(cols + 1), Rational(0)));
  std::vector<int> basis(static_cast<std::size_t>(rows));
  for (int r = 0; r < rows; ++r) {
    auto& row = t[static_cast<std::size_t>(r)];
    for (int j = 0; j < m; ++j) row[static_cast<std::size_t>(j)] = r < n ? vertices[static_cast<std::size_t>(j)][r] : Rational(1);
    row[static_cast<std::size_t>(cols)] = r < n ? z[r] : Rational(1);
    if (row[static_cast<std::size_t>(cols)] < 0) {
      for (auto& v : row) v = -v;
    }
    row[static_cast<std::size_t>(m + r)] = 1;
    basis[static_cast<std::size_t>(r)] = m + r;
  }
  std::vector<Rational> obj(static_cast<std::size_t>(cols + 1), Rational(0));
  for (int c = 0; c <= cols; ++c) {
    if (c >= m && c < cols) continue;
    for (int r = 0; r < rows; ++r) obj[static_cast<std::size_t>(c)] -= t[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  for (;;) {
    int enter = -1;
    for (int c = 0; c < cols; ++c) {
      if (obj[static_cast<std::size_t>(c)] < 0) {
        enter = c;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    Rational best;
    for (int r = 0; r < rows; ++r) {
      const auto& row = t[static_cast<std::size_t>(r)];
      if (row[static_cast<std::size_t>(enter)] <= 0) continue;
      Rational ratio = row[static_cast<std::size_t>(cols)] / row[static_cast<std::size_t>(enter)];
      if (leave < 0 || ratio < best || (ratio == best && basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave < 0) break;  // unbounded cannot happen for phase one
    auto& prow = t[static_cast<std::size_t>(leave)];
    Rational piv = prow[static_cast<std::size_t>(enter)];
    for (auto& v : prow) v /= piv;
    for (int r = 0; r < rows; ++r) {
      if (r == leave) continue;
      auto& row = t[static_cast<std::size_t>(r)];
      Rational f = row[static_cast<std::size_t>(enter)];
      if (f == 0) continue;
      for (int c = 0; c <= cols; ++c) row[static_cast<std::size_t>(c)] -= f * prow[static_cast<std::size_t>(c)];
    }
    Rational f = obj[static_cast<std::size_t>(enter)];
    for (int c = 0; c <= cols; ++c) obj[static_cast<std::size_t>(c)] -= f * prow[static_cast<std::size_t>(c)];
    basis[static_cast<std::size_t>(leave)] = enter;
  }
  return obj[static_cast<std::size_t>(cols)] == 0;
}

std::vector<Point> convex_hull_2d(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 1) return pts;
  auto cross = [](const Point& o, const Point& a, const Point& b) -> Rational {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace bmlab
