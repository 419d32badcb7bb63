#include "bmlab/set_geometry.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace bmlab {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

void require_origin(const SetRep& set, const char* what) {
  if (set.is_finite_points()) throw std::invalid_argument(std::string(what) + ": FinitePoints are not convex bodies");
  if (!set.contains(Point::origin(set.dim()))) {
    throw std::invalid_argument(std::string(what) + ": set must contain the origin");
  }
}

Rational support_exact(const SetRep& set, const Point& u) {
  if (set.is_box()) {
    const AxisBox b = set.as_box();
    Rational h = 0;
    for (int i = 0; i < set.dim(); ++i) {
      const auto& s = b.sides[idx(i)];
      h += std::max(u[i] * s.lo, u[i] * s.hi);
    }
    return h;
  }
  const auto verts = set.vertices();
  Rational h = dot(verts.front(), u);
  for (const auto& v : verts) h = std::max(h, dot(v, u));
  return h;
}

// The closed 1-D interval spanned by a one-dimensional convex set.
Interval1D as_interval(const SetRep& set) {
  if (set.dim() != 1) throw std::invalid_argument("expected a one-dimensional set");
  if (set.is_box()) return set.as_box().sides.front();
  if (set.is_finite_points() && !set.is_convex()) throw std::invalid_argument("expected a convex set");
  const AxisBox b = set.bounding_box();
  return b.sides.front();
}

// A convex piece of K or L: a box (possibly degenerate) or a closed polytope.
struct Piece {
  bool is_box = true;
  AxisBox box;
  std::vector<Point> verts;
};

Piece point_piece(const Point& p) {
  Piece pc;
  for (int i = 0; i < p.dim(); ++i) pc.box.sides.push_back(Interval1D::closed(p[i], p[i]));
  pc.verts = {p};
  return pc;
}

std::vector<Piece> pieces_of(const SetRep& set) {
  std::vector<Piece> out;
  if (set.is_finite_points()) {
    for (const auto& p : set.vertices()) out.push_back(point_piece(p));
    return out;
  }
  Piece pc;
  if (set.is_box()) {
    pc.box = set.as_box();
  } else if (set.dim() == 1) {
    pc.box = set.bounding_box();
  } else {
    pc.is_box = false;
    pc.verts = set.vertices();
  }
  out.push_back(std::move(pc));
  return out;
}

bool has_open_side(const AxisBox& b) {
  return std::any_of(b.sides.begin(), b.sides.end(), [](const Interval1D& s) { return s.lo_open || s.hi_open; });
}

std::vector<Point> piece_vertices(const Piece& pc) {
  if (!pc.is_box) return pc.verts;
  if (has_open_side(pc.box)) throw std::invalid_argument("open boxes combined with polytopes are not supported");
  return SetRep(pc.box).vertices();
}

// Per-coordinate system for box pieces P, Q and box summand C.
std::vector<ArcConstraint> box_system(const Point& z, const AxisBox& p, const AxisBox& q, const AxisBox* c,
                                      bool distance) {
  std::vector<ArcConstraint> out;
  for (int i = 0; i < z.dim(); ++i) {
    const auto& ps = p.sides[idx(i)];
    const auto& qs = q.sides[idx(i)];
    Rational clo = 0, chi = 0;
    bool clo_open = false, chi_open = false;
    if (c != nullptr) {
      const auto& cs = c->sides[idx(i)];
      clo = cs.lo;
      chi = cs.hi;
      clo_open = cs.lo_open;
      chi_open = cs.hi_open;
    }
    ArcConstraint lo{-ps.lo, -qs.lo, clo - z[i]};
    ArcConstraint hi{ps.hi, qs.hi, z[i] - chi};
    if (!distance) {
      lo.strict = ps.lo_open || qs.lo_open || clo_open;
      lo.strict_s0 = ps.lo_open || clo_open;
      lo.strict_t0 = qs.lo_open || clo_open;
      hi.strict = ps.hi_open || qs.hi_open || chi_open;
      hi.strict_s0 = ps.hi_open || chi_open;
      hi.strict_t0 = qs.hi_open || chi_open;
    }
    out.push_back(std::move(lo));
    out.push_back(std::move(hi));
  }
  return out;
}

// Unit-l1 direction of u (canonical key for deduplication).
Point normalize_l1(const Point& u) {
  Rational norm = 0;
  for (int i = 0; i < u.dim(); ++i) norm += abs(u[i]);
  return (1 / norm) * u;
}

void add_edge_normals(const std::vector<Point>& verts, std::set<Point>& normals) {
  const auto hull = convex_hull_2d(verts);
  auto add = [&](const Rational& x, const Rational& y) { normals.insert(normalize_l1(Point(std::vector<Rational>{x, y}))); };
  if (hull.size() == 2) {
    const Point d = hull[1] - hull[0];
    add(d[1], -d[0]);
    add(-d[1], d[0]);
    add(d[0], d[1]);
    add(-d[0], -d[1]);
  } else if (hull.size() >= 3) {
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const Point d = hull[(i + 1) % hull.size()] - hull[i];
      add(d[1], -d[0]);
    }
  }
}

// Planar system through facet normals of tP + sQ + C.
std::vector<ArcConstraint> polygon_system(const Point& z, const std::vector<Point>& pv, const std::vector<Point>& qv,
                                          const AxisBox* c, bool distance) {
  bool open = false;
  if (c != nullptr) {
    const bool any_open = has_open_side(*c);
    const bool all_open = std::all_of(c->sides.begin(), c->sides.end(),
                                      [](const Interval1D& s) { return s.lo_open && s.hi_open; });
    if (any_open && !all_open) throw std::invalid_argument("half-open cubes combined with polytopes are not supported");
    open = all_open;
  }
  std::set<Point> normals;
  for (int i = 0; i < 2; ++i) {
    for (long sgn : {1L, -1L}) {
      Point e = Point::origin(2);
      e[i] = sgn;
      normals.insert(e);
    }
  }
  add_edge_normals(pv, normals);
  add_edge_normals(qv, normals);
  auto h = [](const std::vector<Point>& vs, const Point& u) {
    Rational m = dot(vs.front(), u);
    for (const auto& v : vs) m = std::max(m, dot(v, u));
    return m;
  };
  std::vector<ArcConstraint> out;
  for (const auto& u : normals) {
    Rational hc = 0;
    if (c != nullptr) {
      for (int i = 0; i < 2; ++i) hc += std::max(u[i] * c->sides[idx(i)].lo, u[i] * c->sides[idx(i)].hi);
    }
    ArcConstraint con{h(pv, u), h(qv, u), dot(z, u) - hc};
    if (!distance && open) con.strict = con.strict_s0 = con.strict_t0 = true;
    out.push_back(std::move(con));
  }
  return out;
}

std::vector<ArcConstraint> pair_system(const Point& z, const Piece& p, const Piece& q, const AxisBox* c,
                                       bool distance) {
  if (p.is_box && q.is_box) return box_system(z, p.box, q.box, c, distance);
  if (z.dim() != 2) throw std::invalid_argument("polytope combinations are supported in dimensions 1 and 2");
  return polygon_system(z, piece_vertices(p), piece_vertices(q), c, distance);
}

void check_dims(const Point& z, const PCombo& combo) {
  if (z.dim() != combo.dim()) throw std::invalid_argument("point and combination dimensions differ");
}

}  // namespace

CertifiedReal support_function(const SetRep& set, const Point& u) {
  if (u.dim() != set.dim()) throw std::invalid_argument("support_function: dimension mismatch");
  require_origin(set, "support_function");
  return support_exact(set, u);
}

ScaledSet p_scalar_mult(const Rational& lambda, const SetRep& set, const Exponent& p) {
  if (lambda < 0) throw std::invalid_argument("p_scalar_mult: lambda must be nonnegative");
  ScaledSet out{set, CertifiedReal(1), std::nullopt};
  if (p.is_finite()) {
    if (p.value() <= 0) throw std::invalid_argument("p_scalar_mult: p must be positive");
    out.factor = pow(CertifiedReal(lambda), 1 / p.value());
  } else if (p.is_pos_inf()) {
    out.factor = lambda > 0 ? CertifiedReal(1) : CertifiedReal(0);
  } else {
    throw std::invalid_argument("p_scalar_mult: p must be positive");
  }
  if (out.factor.is_exact()) out.exact = set.scaled(out.factor.lower());
  return out;
}

PCombo::PCombo(SetRep k, SetRep l, Rational w1, Rational w2, Rational p)
    : k_(std::move(k)), l_(std::move(l)), w1_(std::move(w1)), w2_(std::move(w2)), p_(std::move(p)), arc_(w1_, w2_, p_) {
  if (k_.dim() != l_.dim()) throw std::invalid_argument("PCombo: sets of different dimension");
}

PCombo PCombo::lambda_combo(SetRep k, SetRep l, const Rational& lambda, const Rational& p) {
  if (lambda < 0 || lambda > 1) throw std::invalid_argument("lambda must lie in [0, 1]");
  return PCombo(std::move(k), std::move(l), 1 - lambda, lambda, p);
}

CertifiedReal p_combo_support(const PCombo& combo, const Point& u) {
  const CertifiedReal hk = support_function(combo.k(), u);
  const CertifiedReal hl = support_function(combo.l(), u);
  return combo.arc().peak(hk.lower(), hl.lower());
}

std::vector<std::vector<ArcConstraint>> arc_systems(const Point& z, const PCombo& combo, const SetRep* cube,
                                                    bool distance) {
  check_dims(z, combo);
  const auto kp = pieces_of(combo.k());
  const auto lp = pieces_of(combo.l());
  std::vector<Point> shifts{Point::origin(z.dim())};
  std::optional<AxisBox> cbox;
  if (cube != nullptr && !distance) {
    if (cube->dim() != z.dim()) throw std::invalid_argument("cube dimension mismatch");
    if (cube->is_finite_points()) {
      shifts = cube->vertices();
    } else if (cube->is_box()) {
      cbox = cube->as_box();
    } else {
      throw std::invalid_argument("cube must be a box or a finite point set");
    }
  }
  std::vector<std::vector<ArcConstraint>> out;
  for (const auto& shift : shifts) {
    const Point zz = z - shift;
    for (const auto& p : kp) {
      for (const auto& q : lp) out.push_back(pair_system(zz, p, q, cbox ? &*cbox : nullptr, distance));
    }
  }
  return out;
}

MembershipVerdict p_combo_membership(const Point& z, const PCombo& combo, double tol, const SetRep* cube) {
  if (!(tol > 0)) throw std::invalid_argument("p_combo_membership: tol must be positive");
  MembershipVerdict out;
  bool ambiguous = false;
  for (const auto& sys : arc_systems(z, combo, cube)) {
    const ArcOutcome r = decide(combo.arc(), sys, tol);
    if (r.verdict == Decision::Inside) return {Decision::Inside, CertifiedReal(0)};
    if (r.verdict == Decision::Ambiguous) {
      out.gap = ambiguous ? out.gap.hull(r.gap) : r.gap;
      ambiguous = true;
    }
  }
  if (ambiguous) out.kind = Decision::Ambiguous;
  return out;
}

CertifiedReal chebyshev_distance(const Point& z, const PCombo& combo) {
  std::optional<CertifiedReal> best;
  for (const auto& sys : arc_systems(z, combo, nullptr, true)) {
    const CertifiedReal d = min_max_excess(combo.arc(), sys);
    best = best ? min(*best, d) : d;
  }
  return *best;
}

SetRep minkowski_sum(const SetRep& a, const SetRep& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("minkowski_sum: dimension mismatch");
  if (a.is_finite_points() && b.is_finite_points()) {
    std::set<Point> sums;
    for (const auto& x : a.vertices()) {
      for (const auto& y : b.vertices()) sums.insert(x + y);
    }
    return FinitePoints{{sums.begin(), sums.end()}};
  }
  if (a.is_box() && b.is_box()) {
    const AxisBox ab = a.as_box(), bb = b.as_box();
    std::vector<Interval1D> sides;
    for (int i = 0; i < a.dim(); ++i) {
      const auto& x = ab.sides[idx(i)];
      const auto& y = bb.sides[idx(i)];
      sides.push_back({x.lo + y.lo, x.hi + y.hi, x.lo_open || y.lo_open, x.hi_open || y.hi_open});
    }
    if (a.dim() == 1 && std::holds_alternative<Interval1D>(a.variant()) &&
        std::holds_alternative<Interval1D>(b.variant())) {
      return sides.front();
    }
    return AxisBox{std::move(sides)};
  }
  if (a.is_polytope() && b.is_polytope()) {
    std::set<Point> sums;
    for (const auto& x : a.vertices()) {
      for (const auto& y : b.vertices()) sums.insert(x + y);
    }
    std::vector<Point> v(sums.begin(), sums.end());
    if (a.dim() == 2) v = convex_hull_2d(std::move(v));
    return VPolytope{std::move(v)};
  }
  throw std::invalid_argument("minkowski_sum: unsupported pair " + a.kind() + " + " + b.kind());
}

Refinable p_combo_interval_end(const PCombo& combo, bool upper) {
  const Interval1D k = as_interval(combo.k());
  const Interval1D l = as_interval(combo.l());
  if (!k.contains(0) || !l.contains(0)) throw std::invalid_argument("p_combo_interval: sets must contain the origin");
  const Arc arc = combo.arc();
  if (upper) return [arc, a = k.hi, b = l.hi](int bits) { return arc.peak(a, b, bits); };
  return [arc, a = Rational(-k.lo), b = Rational(-l.lo)](int bits) { return -arc.peak(a, b, bits); };
}

PInterval p_combo_interval(const PCombo& combo) {
  const Interval1D k = as_interval(combo.k());
  const Interval1D l = as_interval(combo.l());
  PInterval out;
  out.lo = p_combo_interval_end(combo, false)(kDefaultBits);
  out.hi = p_combo_interval_end(combo, true)(kDefaultBits);
  const bool kw = combo.w1() > 0, lw = combo.w2() > 0;
  out.hi_open = (kw && k.hi > 0 && k.hi_open) || (lw && l.hi > 0 && l.hi_open);
  out.lo_open = (kw && k.lo < 0 && k.lo_open) || (lw && l.lo < 0 && l.lo_open);
  return out;
}

}  // namespace bmlab
