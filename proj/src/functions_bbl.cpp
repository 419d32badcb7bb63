#include "bmlab/functions_bbl.hpp"

#include "bmlab/arc.hpp"
#include "bmlab/parallel.hpp"
#include "bmlab/scalar_means.hpp"
#include "bmlab/set_geometry.hpp"

#include <algorithm>
#include <chrono>
#include <set>

namespace bmlab {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

bool is_integer_point(const Point& x) {
  const auto& cs = x.coords();
  return std::all_of(cs.begin(), cs.end(), [](const Rational& r) { return r.get_den() == 1; });
}

// Integer points z with lo_i - 1 < z_i < hi_i + 1, appended to out.
void integer_points_near(const std::vector<Rational>& lo, const std::vector<Rational>& hi, std::set<Point>& out) {
  const std::size_t n = lo.size();
  std::vector<Integer> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = floor(lo[i] - 1) + 1;
    b[i] = ceil(hi[i] + 1) - 1;
    if (a[i] > b[i]) return;
  }
  std::vector<Integer> x = a;
  for (;;) {
    std::vector<Rational> cs;
    for (const auto& v : x) cs.emplace_back(v);
    out.insert(Point(std::move(cs)));
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (x[i] < b[i]) {
        ++x[i];
        break;
      }
      x[i] = a[i];
    }
    if (i == n) return;
  }
}

// One support pair (x, y) with a = f(x) > 0, b = g(y) > 0.
struct Pair {
  Point x, y;
  Rational a, b;
  CertifiedReal pa, pb;  // a^alpha, b^alpha
  std::vector<Rational> lo, hi;  // bounding box of the curve t x + s y
};

// Evaluates the pair sup of M(mu) = (t a^alpha + s b^alpha)^(1/alpha) under
// target constraints on t x + s y.
class PairSolver {
 public:
  PairSolver(const BblInstance& inst, BblForm form) : inst_(inst), arc_(make_arc(inst, form)) {
    const auto& alpha = inst.alpha;
    geometric_ = alpha.is_zero();
    for (const auto& [x, a] : inst.f.support) {
      if (a <= 0) continue;
      for (const auto& [y, b] : inst.g.support) {
        if (b <= 0) continue;
        Pair pr{x, y, a, b, CertifiedReal(a), CertifiedReal(b), {}, {}};
        if (alpha.is_finite() && !geometric_) {
          pr.pa = pow(CertifiedReal(a), alpha.value());
          pr.pb = pow(CertifiedReal(b), alpha.value());
        }
        for (int i = 0; i < inst.n; ++i) {
          if (geometric_) {
            const Rational w = (1 - inst.lambda) * x[i] + inst.lambda * y[i];
            pr.lo.push_back(w);
            pr.hi.push_back(w);
          } else {
            const CertifiedReal r = arc_.linear_range(x[i], y[i]);
            pr.lo.push_back(r.lower());
            pr.hi.push_back(r.upper());
          }
        }
        pairs_.push_back(std::move(pr));
      }
    }
    if (alpha.is_pos_inf()) {
      for (const auto& pr : pairs_) {
        const Rational m = std::max(pr.a, pr.b);
        if (!cap_ || m > *cap_) cap_ = m;
      }
    }
  }

  const std::vector<Pair>& pairs() const { return pairs_; }
  /// For alpha = +inf no pair can exceed max(a, b) over all pairs.
  const std::optional<Rational>& value_cap() const { return cap_; }
  const Arc& arc() const { return arc_; }

  // Sup of M over the part of the pair's curve selected by cons; an empty
  // cons list means the whole curve.
  CertifiedReal value(const Pair& pr, const std::vector<ArcConstraint>& cons, double tol) const {
    if (geometric_) return pow(pr.pa, 1 - inst_.lambda) * pow(pr.pb, inst_.lambda);
    const auto& alpha = inst_.alpha;
    if (alpha.is_pos_inf()) return value_max_form(pr, cons, tol);
    const bool maximize = alpha.value() > 0;
    const Rational inv = 1 / alpha.value();
    ArcExtremum lo = optimize_linear(arc_, cons, pr.pa.lower(), pr.pb.lower(), maximize, tol_opt(tol));
    if (lo.feasible == Decision::Outside) return CertifiedReal(0);
    CertifiedReal ell = lo.value;
    if (!pr.pa.is_exact() || !pr.pb.is_exact()) {
      ArcExtremum hi = optimize_linear(arc_, cons, pr.pa.upper(), pr.pb.upper(), maximize, tol_opt(tol));
      ell = CertifiedReal(lo.value.lower(), hi.value.upper());
    }
    if (ell.lower() <= 0) ell = CertifiedReal(endpoint_floor(pr), ell.upper());
    const CertifiedReal m = pow(ell, inv);
    if (lo.feasible == Decision::Ambiguous) return CertifiedReal(0, m.upper());
    return m;
  }

  // Feasibility of the alpha = 0 point (1-λ)x + λy.
  Decision geometric_feasible(const Pair& pr, const Point& z, bool relax) const {
    Point w = Point::origin(inst_.n);
    for (int i = 0; i < inst_.n; ++i) w[i] = pr.lo[idx(i)];
    if (relax) return chebyshev(w, z) < 1 ? Decision::Inside : Decision::Outside;
    return w == z ? Decision::Inside : Decision::Outside;
  }

  bool geometric() const { return geometric_; }

 private:
  static Arc make_arc(const BblInstance& inst, BblForm form) {
    if (form == BblForm::TS) return Arc(inst.t, inst.s, 1);
    return Arc(1 - inst.lambda, inst.lambda, inst.p);
  }

  static double tol_opt(double tol) { return std::min(tol, 1e-13); }

  // min(c1 a^alpha, c2 b^alpha): the arc bulges away from its chord, so a
  // positive linear form is never below its smaller endpoint value.
  Rational endpoint_floor(const Pair& pr) const {
    if (arc_.is_point()) return arc_.t_point().lower() * pr.pa.lower() + arc_.s_point().lower() * pr.pb.lower();
    return std::min(arc_.t_end(false).lower() * pr.pa.lower(), arc_.s_end(true).lower() * pr.pb.lower());
  }

  // alpha = +inf: max(a, b) where both weights are positive, a alone at
  // mu = 0 and b alone at mu = 1.
  CertifiedReal value_max_form(const Pair& pr, const std::vector<ArcConstraint>& cons, double tol) const {
    const ArcOutcome any = decide(arc_, cons, tol);
    if (any.verdict == Decision::Outside) return CertifiedReal(0);
    const Rational hi = std::max(pr.a, pr.b);
    const Rational lo = std::min(pr.a, pr.b);
    CertifiedReal out(hi);
    if (pr.a != pr.b) {
      // The larger value is reached unless the only feasible point has a
      // zero weight in front of it.
      const bool a_big = pr.a > pr.b;
      const ArcExtremum e = optimize_linear(arc_, cons, a_big ? 1 : 0, a_big ? 0 : 1, true, tol_opt(tol));
      if (e.value.upper() <= 0) {
        out = CertifiedReal(lo);
      } else if (!(e.value.lower() > 0)) {
        out = CertifiedReal(lo, hi);
      }
    }
    if (any.verdict == Decision::Ambiguous) return CertifiedReal(0, out.upper());
    return out;
  }

  const BblInstance& inst_;
  Arc arc_;
  bool geometric_ = false;
  std::vector<Pair> pairs_;
  std::optional<Rational> cap_;
};

// t x_i + s y_i = z_i, or |t x_i + s y_i - z_i| < 1 when relaxed.
std::vector<ArcConstraint> target_constraints(const Pair& pr, const Point& z, bool relax) {
  std::vector<ArcConstraint> cons;
  for (int i = 0; i < z.dim(); ++i) {
    if (relax) {
      cons.push_back(ArcConstraint::open(pr.x[i], pr.y[i], z[i] - 1));
      cons.push_back(ArcConstraint::open(-pr.x[i], -pr.y[i], -z[i] - 1));
    } else {
      cons.push_back(ArcConstraint::closed(pr.x[i], pr.y[i], z[i]));
      cons.push_back(ArcConstraint::closed(-pr.x[i], -pr.y[i], -z[i]));
    }
  }
  return cons;
}

bool pair_reaches(const Pair& pr, const Point& z, bool relax) {
  for (int i = 0; i < z.dim(); ++i) {
    if (relax) {
      if (pr.hi[idx(i)] <= z[i] - 1 || pr.lo[idx(i)] >= z[i] + 1) return false;
    } else if (pr.hi[idx(i)] < z[i] || pr.lo[idx(i)] > z[i]) {
      return false;
    }
  }
  return true;
}

CertifiedReal minimal_h(const PairSolver& solver, const Point& z, bool relax, double tol) {
  CertifiedReal best(0);
  const auto& cap = solver.value_cap();
  for (const auto& pr : solver.pairs()) {
    if (cap && best.is_exact() && best.lower() == *cap) break;
    if (!pair_reaches(pr, z, relax)) continue;
    CertifiedReal v;
    if (solver.geometric()) {
      if (solver.geometric_feasible(pr, z, relax) == Decision::Outside) continue;
      v = solver.value(pr, {}, tol);
    } else {
      v = solver.value(pr, target_constraints(pr, z, relax), tol);
    }
    best = max(best, v);
  }
  return best;
}

PCombo combo_of(const BblInstance& inst, BblForm form) {
  if (form == BblForm::TS) return PCombo(inst.K, inst.L, inst.t, inst.s, 1);
  return PCombo::lambda_combo(inst.K, inst.L, inst.lambda, inst.p);
}

SetRep cube_of(const BblInstance& inst, BblForm form) {
  if (form == BblForm::TS) return SetRep::open_cube(inst.n, Rational(ceil(inst.t + inst.s)));
  return SetRep::open_unit_cube(inst.n);
}

GridFunction conjugate(const GridFunction& fn, const Lattice& lattice) {
  GridFunction out;
  for (const auto& [x, v] : fn.support) out.support.emplace_back(lattice.phi_inv(x), v);
  if (fn.domain) out.domain = fn.domain->mapped(lattice.inverse());
  return out;
}

// sup of f over the cell [x, x + h)^n for one box piece.
bool cell_meets(const Point& x, const Rational& h, const AxisBox& box) {
  for (int i = 0; i < x.dim(); ++i) {
    const auto& s = box.sides[idx(i)];
    Rational lo = x[i];
    bool lo_open = false;
    if (s.lo > lo || (s.lo == lo && s.lo_open)) {
      lo = s.lo;
      lo_open = s.lo_open;
    }
    Rational hi = x[i] + h;
    bool hi_open = true;
    if (s.hi < hi) {
      hi = s.hi;
      hi_open = s.hi_open;
    }
    if (lo > hi || (lo == hi && (lo_open || hi_open))) return false;
  }
  return true;
}

template <class CellSup>
GridFunction discretize(int m, const AxisBox& C, CellSup&& sup) {
  if (m < 0) throw std::invalid_argument("cell_sup_discretize: m must be nonnegative");
  Integer scale = 1;
  scale <<= static_cast<mp_bitcnt_t>(m);
  const Rational h = Rational(1) / Rational(scale);
  const std::size_t n = C.sides.size();
  std::vector<Integer> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = ceil(C.sides[i].lo * Rational(scale));
    b[i] = ceil(C.sides[i].hi * Rational(scale)) - 1;
  }
  GridFunction out;
  out.domain = SetRep(C);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] > b[i]) return out;
  }
  std::vector<Integer> k = a;
  for (;;) {
    std::vector<Rational> cs;
    for (const auto& v : k) cs.push_back(Rational(v) * h);
    Point x(std::move(cs));
    const Rational v = sup(x, h);
    if (v > 0) out.support.emplace_back(std::move(x), v);
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (k[i] < b[i]) {
        ++k[i];
        break;
      }
      k[i] = a[i];
    }
    if (i == n) break;
  }
  std::sort(out.support.begin(), out.support.end());
  return out;
}

}  // namespace

Rational GridFunction::at(const Point& x) const {
  for (const auto& [p, v] : support) {
    if (p == x) return v;
  }
  return 0;
}

void GridFunction::validate() const {
  std::set<Point> seen;
  const int n = support.empty() ? (domain ? domain->dim() : 0) : support.front().first.dim();
  for (const auto& [p, v] : support) {
    if (p.dim() != n) throw std::invalid_argument("grid function: mixed dimensions");
    if (v < 0) throw std::invalid_argument("grid function: negative value at " + to_string(p));
    if (!seen.insert(p).second) throw std::invalid_argument("grid function: repeated point " + to_string(p));
    if (domain && v > 0 && !domain->contains(p)) {
      throw std::invalid_argument("grid function: support point " + to_string(p) + " outside its domain");
    }
  }
}

Rational GridFunction::lattice_sum(const SetRep& set) const {
  Rational total = 0;
  for (const auto& [p, v] : support) {
    if (is_integer_point(p) && set.contains(p)) total += v;
  }
  return total;
}

Rational sup_convolution(const GridFunction& phi, const Point& z) {
  Rational best = 0;
  for (const auto& [x, v] : phi.support) {
    if (v > best && chebyshev(x, z) < 1) best = v;
  }
  return best;
}

Rational sup_convolution(const GridFunction& phi, const Point& z, const Lattice& lattice) {
  Rational best = 0;
  for (const auto& [x, v] : phi.support) {
    if (v > best && chebyshev(lattice.phi_inv(x - z), Point::origin(z.dim())) < 1) best = v;
  }
  return best;
}

void BblInstance::validate(BblForm form) const {
  if (n < 1) throw std::invalid_argument("instance: n must be positive");
  if (K.dim() != n || L.dim() != n) throw std::invalid_argument("instance: K and L must have dimension n");
  if (form == BblForm::Lambda) {
    if (p < 1) throw std::invalid_argument("instance: p must be >= 1");
    if (lambda <= 0 || lambda >= 1) throw std::invalid_argument("instance: lambda must lie in (0,1)");
  } else {
    if (t <= 0 || s <= 0) throw std::invalid_argument("instance: t and s must be positive");
    if (alpha.is_zero()) throw std::invalid_argument("instance: the (t,s) form needs alpha != 0");
  }
  if (alpha.is_neg_inf() || (alpha.is_finite() && alpha.value() < Rational(-1, n))) {
    throw std::invalid_argument("instance: alpha must be >= -1/n");
  }
  for (const GridFunction* fn : {&f, &g}) {
    fn->validate();
    for (const auto& [x, v] : fn->support) {
      if (x.dim() != n) throw std::invalid_argument("instance: support point of wrong dimension");
    }
  }
  for (const auto& [x, v] : f.support) {
    if (v > 0 && !K.contains(x)) throw std::invalid_argument("instance: f is not supported in K");
  }
  for (const auto& [y, v] : g.support) {
    if (v > 0 && !L.contains(y)) throw std::invalid_argument("instance: g is not supported in L");
  }
  if (h) {
    h->validate();
    for (const auto& [x, v] : h->support) {
      if (x.dim() != n) throw std::invalid_argument("instance: h support point of wrong dimension");
    }
  }
}

CertifiedReal minimal_admissible_h(const BblInstance& instance, const Point& z, bool relax_cube, BblForm form,
                                   double tol) {
  instance.validate(form);
  if (z.dim() != instance.n) throw std::invalid_argument("minimal_admissible_h: dimension mismatch");
  const PairSolver solver(instance, form);
  return minimal_h(solver, z, relax_cube, tol);
}

void validate_explicit_h(const BblInstance& instance, BblForm form) {
  if (!instance.h) return;
  const PairSolver solver(instance, form);
  const bool single = solver.geometric() || solver.arc().is_point();
  for (const auto& pr : solver.pairs()) {
    const bool origin = pr.x == Point::origin(instance.n) && pr.y == Point::origin(instance.n);
    if (!single && !origin) {
      throw NotAdmissibleError("explicit h: the pair " + to_string(pr.x) + ", " + to_string(pr.y) +
                               " needs h > 0 along a whole curve, which a finite table cannot give");
    }
    Point w = Point::origin(instance.n);
    for (int i = 0; i < instance.n; ++i) w[i] = pr.lo[idx(i)];
    if (!single) w = Point::origin(instance.n);
    const CertifiedReal need = solver.value(pr, {}, 1e-9);
    if (!(instance.h->at(w) >= need.upper())) {
      throw NotAdmissibleError("explicit h: value at " + to_string(w) + " is below the required " +
                               to_decimal(need));
    }
  }
}

CheckReport check_discrete_bbl(const BblInstance& instance, BblForm form, double tol) {
  const auto start = std::chrono::steady_clock::now();
  instance.validate(form);
  const int n = instance.n;
  CheckReport report;
  report.inequality_id = form == BblForm::Lambda ? "discrete_lp_bbl" : "discrete_bbl_ts";

  const Rational F = instance.f.lattice_sum(instance.K);
  const Rational G = instance.g.lattice_sum(instance.L);
  if (form == BblForm::Lambda) {
    const Exponent e = bbl_exponent(instance.alpha, n, instance.p);
    report.rhs = alpha_mean(F, G, instance.lambda, e);
    report.witness.emplace_back("rhs_exponent", to_string(e));
  } else {
    const Exponent e = bbl_exponent(instance.alpha, n, Exponent(1));
    report.rhs = weighted_alpha_sum(F, G, instance.t, instance.s, e);
    report.witness.emplace_back("rhs_exponent", to_string(e));
  }

  std::set<Point> zs;
  std::vector<Point> points;
  std::vector<CertifiedReal> values;
  if (!instance.h) {
    const PairSolver solver(instance, form);
    for (const auto& pr : solver.pairs()) integer_points_near(pr.lo, pr.hi, zs);
    points.assign(zs.begin(), zs.end());
    values.resize(points.size());
    parallel_for(points.size(), [&](std::size_t i) { values[i] = minimal_h(solver, points[i], true, tol); });
    report.witness.emplace_back("h", "minimal");
  } else {
    validate_explicit_h(instance, form);
    for (const auto& [x, v] : instance.h->support) {
      if (v > 0) integer_points_near(x.coords(), x.coords(), zs);
    }
    const PCombo combo = combo_of(instance, form);
    const SetRep cube = cube_of(instance, form);
    points.assign(zs.begin(), zs.end());
    values.resize(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
      const Rational v = sup_convolution(*instance.h, points[i]);
      if (v == 0) return;
      const Decision d = p_combo_membership(points[i], combo, tol, &cube).kind;
      if (d == Decision::Inside) values[i] = v;
      if (d == Decision::Ambiguous) values[i] = CertifiedReal(0, v);
    });
    report.witness.emplace_back("h", "explicit");
  }
  CertifiedReal lhs(0);
  std::size_t positive = 0;
  for (const auto& v : values) {
    lhs += v;
    if (v.upper() > 0) ++positive;
  }
  report.lhs = lhs;
  finish_report(report);
  report.witness.emplace_back("sum_f", to_string(F));
  report.witness.emplace_back("sum_g", to_string(G));
  report.witness.emplace_back("lattice_points_with_positive_h", std::to_string(positive));
  report.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

CheckReport check_lattice_variant(const BblInstance& instance, const Lattice& lattice, double tol) {
  if (lattice.dim() != instance.n) throw std::invalid_argument("check_lattice_variant: dimension mismatch");
  BblInstance conj{instance.n,
                   instance.p,
                   instance.lambda,
                   instance.alpha,
                   instance.K.mapped(lattice.inverse()),
                   instance.L.mapped(lattice.inverse()),
                   conjugate(instance.f, lattice),
                   conjugate(instance.g, lattice),
                   std::nullopt,
                   instance.t,
                   instance.s};
  if (instance.h) conj.h = conjugate(*instance.h, lattice);
  CheckReport report = check_discrete_bbl(conj, BblForm::Lambda, tol);
  report.inequality_id = "discrete_lp_bbl_lattice";
  std::string basis;
  for (const auto& v : lattice.basis()) basis += (basis.empty() ? "" : " ") + to_string(v);
  report.witness.emplace_back("basis", basis);
  return report;
}

GridFunction cell_sup_discretize(const PiecewiseConstant& f, int m, const AxisBox& C) {
  for (const auto& [box, v] : f.pieces) {
    if (box.sides.size() != C.sides.size()) throw std::invalid_argument("cell_sup_discretize: dimension mismatch");
    if (v < 0) throw std::invalid_argument("cell_sup_discretize: negative piece value");
  }
  return discretize(m, C, [&](const Point& x, const Rational& h) {
    Rational best = 0;
    for (const auto& [box, v] : f.pieces) {
      if (v > best && cell_meets(x, h, box)) best = v;
    }
    return best;
  });
}

GridFunction cell_sup_discretize(const GridFunction& f, int m, const AxisBox& C) {
  f.validate();
  return discretize(m, C, [&](const Point& x, const Rational& h) {
    Rational best = 0;
    for (const auto& [p, v] : f.support) {
      if (p.dim() != x.dim()) throw std::invalid_argument("cell_sup_discretize: dimension mismatch");
      bool in = v > best;
      for (int i = 0; in && i < x.dim(); ++i) in = p[i] >= x[i] && p[i] < x[i] + h;
      if (in) best = v;
    }
    return best;
  });
}

Rational upper_riemann_sum(const GridFunction& fm, int m) {
  if (m < 0) throw std::invalid_argument("upper_riemann_sum: m must be nonnegative");
  Rational total = 0;
  for (const auto& [x, v] : fm.support) total += v;
  if (fm.support.empty()) return total;
  const int n = fm.support.front().first.dim();
  Integer scale = 1;
  scale <<= static_cast<mp_bitcnt_t>(m * n);
  return total / Rational(scale);
}

}  // namespace bmlab
