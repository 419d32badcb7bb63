#include "bmlab/lattice_enum.hpp"

#include "bmlab/parallel.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace bmlab {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

// Integers k with lo <(=) k <(=) hi.
Integer count_integers(const Rational& lo, const Rational& hi, bool lo_open, bool hi_open) {
  Integer a = lo_open ? Integer(floor(lo) + 1) : ceil(lo);
  Integer b = hi_open ? Integer(ceil(hi) - 1) : floor(hi);
  return b >= a ? Integer(b - a + 1) : Integer(0);
}

// Lattice coordinates whose image may land in the closed box.
std::vector<std::pair<Integer, Integer>> coordinate_ranges(const AxisBox& box, const Lattice& lattice) {
  const int n = lattice.dim();
  std::vector<std::pair<Integer, Integer>> out;
  for (int i = 0; i < n; ++i) {
    // Linear functional x_i = sum_j inv[i][j] y_j over the box.
    Rational lo = 0, hi = 0;
    for (int j = 0; j < n; ++j) {
      const Rational& c = lattice.inverse()[idx(i)][idx(j)];
      const auto& s = box.sides[idx(j)];
      lo += std::min(c * s.lo, c * s.hi);
      hi += std::max(c * s.lo, c * s.hi);
    }
    out.emplace_back(ceil(lo), floor(hi));
  }
  return out;
}

// Ambient lattice points inside the closed box.
std::vector<Point> candidates(const AxisBox& box, const Lattice& lattice) {
  const int n = lattice.dim();
  const auto ranges = coordinate_ranges(box, lattice);
  for (const auto& [a, b] : ranges) {
    if (a > b) return {};
  }
  std::vector<Point> out;
  std::vector<Integer> x;
  for (const auto& r : ranges) x.push_back(r.first);
  const SetRep closed = box;
  for (;;) {
    std::vector<Rational> coords;
    for (const auto& v : x) coords.emplace_back(v);
    Point y = lattice.phi(Point(std::move(coords)));
    if (closed.contains(y)) out.push_back(std::move(y));
    int i = 0;
    for (; i < n; ++i) {
      if (x[idx(i)] < ranges[idx(i)].second) {
        ++x[idx(i)];
        break;
      }
      x[idx(i)] = ranges[idx(i)].first;
    }
    if (i == n) break;
  }
  return out;
}

// Sign of r - (w1 a^p + w2 b^p)^(1/p) for a, b >= 0.
int compare_to_psum(const Rational& r, const Rational& a, const Rational& b, const PCombo& combo) {
  if (r < 0) return -1;
  const Rational& p = combo.p();
  if (p.get_den() == 1 && p.get_num().fits_slong_p()) {
    const long k = p.get_num().get_si();
    const Rational lhs = pow_int(r, k);
    const Rational rhs = combo.w1() * pow_int(a, k) + combo.w2() * pow_int(b, k);
    return lhs < rhs ? -1 : (lhs == rhs ? 0 : 1);
  }
  const Arc arc = combo.arc();
  const auto ord = compare_refined([&](int) { return CertifiedReal(r); }, [&](int bits) { return arc.peak(a, b, bits); });
  return ord < 0 ? -1 : (ord == 0 ? 0 : 1);
}

std::optional<Interval1D> interval_of(const SetRep& set) {
  if (set.dim() != 1) return std::nullopt;
  if (set.is_box()) return set.as_box().sides.front();
  if (set.is_polytope() || set.is_convex()) return set.bounding_box().sides.front();
  return std::nullopt;
}

// Exact 1-D count via floor/ceil of the p-sum endpoints. nullopt when an
// endpoint comparison cannot be settled.
std::optional<CountResult> count_1d(const PCombo& combo, const SetRep& cube, const Lattice& lattice) {
  const auto k = interval_of(combo.k());
  const auto l = interval_of(combo.l());
  const auto c = interval_of(cube);
  if (!k || !l || !c || cube.is_finite_points()) return std::nullopt;
  if (!k->contains(0) || !l->contains(0)) return std::nullopt;
  const PInterval m = p_combo_interval(combo);
  const bool hi_open = m.hi_open || c->hi_open;
  const bool lo_open = m.lo_open || c->lo_open;
  const Rational v = abs(lattice.basis().front()[0]);

  auto in_upper = [&](const Integer& j) {
    const int ord = compare_to_psum(v * Rational(j) - c->hi, k->hi, l->hi, combo);
    return hi_open ? ord < 0 : ord <= 0;
  };
  auto in_lower = [&](const Integer& j) {
    const int ord = compare_to_psum(c->lo - v * Rational(j), -k->lo, -l->lo, combo);
    return lo_open ? ord < 0 : ord <= 0;
  };
  try {
    Integer top = floor((m.hi.midpoint() + c->hi) / v);
    while (!in_upper(top)) --top;
    while (in_upper(top + 1)) ++top;
    Integer bottom = ceil((m.lo.midpoint() + c->lo) / v);
    while (!in_lower(bottom)) ++bottom;
    while (in_lower(bottom - 1)) --bottom;
    CountResult out;
    if (top >= bottom) out.count = top - bottom + 1;
    return out;
  } catch (const AmbiguityError&) {
    return std::nullopt;
  }
}

AxisBox combo_bounding_box(const PCombo& combo, const SetRep& cube) {
  const AxisBox kb = combo.k().bounding_box();
  const AxisBox lb = combo.l().bounding_box();
  const AxisBox cb = cube.bounding_box();
  AxisBox out;
  for (int i = 0; i < combo.dim(); ++i) {
    const auto& ks = kb.sides[idx(i)];
    const auto& ls = lb.sides[idx(i)];
    const auto& cs = cb.sides[idx(i)];
    const Rational lo = combo.arc().linear_range(ks.lo, ls.lo).lower() + cs.lo;
    const Rational hi = combo.arc().linear_range(ks.hi, ls.hi).upper() + cs.hi;
    out.sides.push_back(Interval1D::closed(lo, hi));
  }
  return out;
}

}  // namespace

Lattice::Lattice(std::vector<Point> basis) : basis_(std::move(basis)) {
  const int n = dim();
  if (n == 0) throw std::invalid_argument("Lattice: empty basis");
  for (const auto& v : basis_) {
    if (v.dim() != n) throw std::invalid_argument("Lattice: basis must have n vectors of dimension n");
  }
  // Gauss-Jordan on [A | I] with A's columns the basis vectors.
  std::vector<std::vector<Rational>> a(idx(n), std::vector<Rational>(idx(2 * n), Rational(0)));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) a[idx(r)][idx(c)] = basis_[idx(c)][r];
    a[idx(r)][idx(n + r)] = 1;
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    while (piv < n && a[idx(piv)][idx(col)] == 0) ++piv;
    if (piv == n) throw std::invalid_argument("Lattice: basis is singular");
    std::swap(a[idx(piv)], a[idx(col)]);
    const Rational d = a[idx(col)][idx(col)];
    for (auto& x : a[idx(col)]) x /= d;
    for (int r = 0; r < n; ++r) {
      if (r == col || a[idx(r)][idx(col)] == 0) continue;
      const Rational f = a[idx(r)][idx(col)];
      for (int c = 0; c < 2 * n; ++c) a[idx(r)][idx(c)] -= f * a[idx(col)][idx(c)];
    }
  }
  inv_.assign(idx(n), std::vector<Rational>(idx(n)));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) inv_[idx(r)][idx(c)] = a[idx(r)][idx(n + c)];
  }
  diagonal_ = true;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && basis_[idx(i)][j] != 0) diagonal_ = false;
    }
  }
}

Lattice Lattice::integer(int n) { return refined(n, 0); }

Lattice Lattice::refined(int n, int m) {
  if (m < 0) throw std::invalid_argument("refinement level must be nonnegative");
  Integer scale = 1;
  scale <<= static_cast<mp_bitcnt_t>(m);
  std::vector<Point> basis;
  for (int i = 0; i < n; ++i) {
    Point e = Point::origin(n);
    e[i] = Rational(1) / Rational(scale);
    basis.push_back(e);
  }
  return Lattice(std::move(basis));
}

Point Lattice::phi(const Point& x) const {
  Point y = Point::origin(dim());
  for (int i = 0; i < dim(); ++i) y = y + x[i] * basis_[idx(i)];
  return y;
}

Point Lattice::phi_inv(const Point& y) const {
  Point x = Point::origin(dim());
  for (int i = 0; i < dim(); ++i) {
    for (int j = 0; j < dim(); ++j) x[i] += inv_[idx(i)][idx(j)] * y[j];
  }
  return x;
}

CountResult gcount(const SetRep& set, const Lattice& lattice) {
  if (set.dim() != lattice.dim()) throw std::invalid_argument("gcount: dimension mismatch");
  CountResult out;
  if (set.is_finite_points()) {
    auto pts = set.vertices();
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (const auto& p : pts) {
      const Point x = lattice.phi_inv(p);
      const auto& cs = x.coords();
      if (std::all_of(cs.begin(), cs.end(), [](const Rational& r) { return r.get_den() == 1; })) ++out.count;
    }
    return out;
  }
  if (set.is_box() && lattice.is_diagonal()) {
    const AxisBox b = set.as_box();
    out.count = 1;
    for (int i = 0; i < set.dim(); ++i) {
      const auto& s = b.sides[idx(i)];
      const Rational d = lattice.basis()[idx(i)][i];
      Rational lo = s.lo / d, hi = s.hi / d;
      bool lo_open = s.lo_open, hi_open = s.hi_open;
      if (d < 0) {
        std::swap(lo, hi);
        std::swap(lo_open, hi_open);
      }
      out.count *= count_integers(lo, hi, lo_open, hi_open);
    }
    return out;
  }
  for (const auto& y : candidates(set.bounding_box(), lattice)) {
    if (set.contains(y)) ++out.count;
  }
  return out;
}

CountResult gcount_pcombo_plus_cube(const PCombo& combo, const SetRep& cube, const Lattice& lattice, double tol) {
  if (combo.dim() != lattice.dim() || cube.dim() != lattice.dim()) {
    throw std::invalid_argument("gcount_pcombo_plus_cube: dimension mismatch");
  }
  if (!(tol > 0)) throw std::invalid_argument("gcount_pcombo_plus_cube: tol must be positive");
  if (combo.dim() == 1) {
    if (auto fast = count_1d(combo, cube, lattice)) return *fast;
  }
  const auto pts = candidates(combo_bounding_box(combo, cube), lattice);
  std::vector<Decision> verdicts(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { verdicts[i] = p_combo_membership(pts[i], combo, tol, &cube).kind; });
  CountResult out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (verdicts[i] == Decision::Inside) ++out.count;
    if (verdicts[i] == Decision::Ambiguous) out.ambiguous_points.push_back(pts[i]);
  }
  std::sort(out.ambiguous_points.begin(), out.ambiguous_points.end());
  return out;
}

CountResult gcount_refined(const SetRep& set, int m) { return gcount(set, Lattice::refined(set.dim(), m)); }

CountResult gcount_refined(const PCombo& combo, const SetRep& cube, int m, double tol) {
  return gcount_pcombo_plus_cube(combo, cube, Lattice::refined(combo.dim(), m), tol);
}

}  // namespace bmlab
