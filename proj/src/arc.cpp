#include "bmlab/arc.hpp"

#include "bmlab/interval.hpp"
#include "bmlab/scalar_means.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>

namespace bmlab {

// ---------------------------------------------------------------------------
// Arc

Arc::Arc(const Rational& w1, const Rational& w2, const Rational& p) : w1_(w1), w2_(w2), p_(p) {
  if (p < 1) throw std::invalid_argument("arc: p must be >= 1");
  if (w1 < 0 || w2 < 0) throw std::invalid_argument("arc: weights must be nonnegative");
  if (w1 == 0 && w2 == 0) throw std::invalid_argument("arc: weights must not both vanish");
  point_ = p == 1 || w1 == 0 || w2 == 0;
}

CertifiedReal Arc::t_end(bool at_mu1, int bits) const {
  if (at_mu1) return CertifiedReal(0);
  return pow(CertifiedReal(w1_), 1 / p_, bits);
}

CertifiedReal Arc::s_end(bool at_mu1, int bits) const {
  if (!at_mu1) return CertifiedReal(0);
  return pow(CertifiedReal(w2_), 1 / p_, bits);
}

CertifiedReal Arc::t_point(int bits) const {
  if (p_ == 1) return CertifiedReal(w1_);
  return w2_ == 0 ? t_end(false, bits) : CertifiedReal(0);
}

CertifiedReal Arc::s_point(int bits) const {
  if (p_ == 1) return CertifiedReal(w2_);
  return w2_ == 0 ? CertifiedReal(0) : s_end(true, bits);
}

CertifiedReal Arc::t_at_mu(const CertifiedReal& mu, int bits) const {
  if (point_) return t_point(bits);
  return weighted_holder_coefficients(w1_, w2_, mu, Exponent(p_), bits).t;
}

CertifiedReal Arc::s_at_mu(const CertifiedReal& mu, int bits) const {
  if (point_) return s_point(bits);
  return weighted_holder_coefficients(w1_, w2_, mu, Exponent(p_), bits).s;
}

CertifiedReal Arc::peak(const Rational& a1, const Rational& a2, int bits) const {
  if (a1 < 0 || a2 < 0) throw std::invalid_argument("arc peak: coefficients must be nonnegative");
  if (point_) return CertifiedReal(a1) * t_point(bits) + CertifiedReal(a2) * s_point(bits);
  // Equal coefficients factor out exactly: a (w1 + w2)^(1/p).
  if (a1 == a2) return CertifiedReal(a1) * pow(CertifiedReal(w1_ + w2_), 1 / p_, bits);
  CertifiedReal sum = CertifiedReal(w1_) * pow(CertifiedReal(a1), p_, bits) + CertifiedReal(w2_) * pow(CertifiedReal(a2), p_, bits);
  return pow(sum, 1 / p_, bits);
}

CertifiedReal Arc::peak_t(const Rational& a1, const Rational& a2, int bits) const {
  if (point_) return t_point(bits);
  if (a1 == 0) return CertifiedReal(0);
  if (a2 == 0) return t_end(false, bits);
  if (a1 == a2) return CertifiedReal(w1_) * pow(CertifiedReal(w1_ + w2_), (1 - p_) / p_, bits);
  CertifiedReal h = peak(a1, a2, bits);
  return CertifiedReal(w1_) * pow(CertifiedReal(a1), p_ - 1, bits) / pow(h, p_ - 1, bits);
}

CertifiedReal Arc::peak_s(const Rational& a1, const Rational& a2, int bits) const {
  if (point_) return s_point(bits);
  if (a2 == 0) return CertifiedReal(0);
  if (a1 == 0) return s_end(true, bits);
  if (a1 == a2) return CertifiedReal(w2_) * pow(CertifiedReal(w1_ + w2_), (1 - p_) / p_, bits);
  CertifiedReal h = peak(a1, a2, bits);
  return CertifiedReal(w2_) * pow(CertifiedReal(a2), p_ - 1, bits) / pow(h, p_ - 1, bits);
}

CertifiedReal Arc::linear_range(const Rational& a1, const Rational& a2, int bits) const {
  if (point_) return CertifiedReal(a1) * t_point(bits) + CertifiedReal(a2) * s_point(bits);
  CertifiedReal v0 = CertifiedReal(a1) * t_end(false, bits);
  CertifiedReal v2 = CertifiedReal(a2) * s_end(true, bits);
  if (a1 >= 0 && a2 >= 0) {
    if (a1 == 0 && a2 == 0) return CertifiedReal(0);
    return {min(v0, v2).lower(), peak(a1, a2, bits).upper()};
  }
  if (a1 <= 0 && a2 <= 0) return {-peak(-a1, -a2, bits).upper(), max(v0, v2).upper()};
  return v0.hull(v2);
}

namespace {

// ---------------------------------------------------------------------------
// Number back ends for the branch-and-bound engine.

CertifiedReal clamp0(const CertifiedReal& x) {
  Rational lo = x.lower() < 0 ? Rational(0) : x.lower();
  Rational hi = x.upper() < 0 ? Rational(0) : x.upper();
  return {lo, hi};
}

struct DoubleBackend {
  using Num = DoubleInterval;
  using Scalar = double;
  using Sigma = double;

  explicit DoubleBackend(const Arc& arc) {
    const Rational& p = arc.p();
    pd = to_double(p);
    q = to_double(p / (p - 1));
    inv_q = to_double((p - 1) / p);
    w1 = Num::from(arc.w1());
    w2 = Num::from(arc.w2());
    c1 = pow_pos(w1, 1 / pd);
    c2 = pow_pos(w2, 1 / pd);
    bm = Num(0x1p-1);
    if (inv_q != 0) bm = Num(std::min(1.0, pow_down(0.5, inv_q)), std::min(1.0, pow_up(0.5, inv_q)));
  }

  static Num pow_down_up(double x, double r) { return pow_pos(Num(x), r); }
  static double pow_down(double x, double r) { return pow_down_up(x, r).lo(); }
  static double pow_up(double x, double r) { return pow_down_up(x, r).hi(); }

  Num from(const Rational& r) const { return Num::from(r); }
  Num sigma(double sg) const { return Num(sg); }
  static double lo(const Num& x) { return x.lo(); }
  static double hi(const Num& x) { return x.hi(); }
  Num pow_q(const Num& x) const { return pow_pos(x, q); }
  Num pow_inv_q(const Num& x) const { return pow_pos(x, inv_q); }
  // Splits avoid dyadic parameters so symmetric rational arc points (sigma = 1
  // for equal weights) never become nodes with inexact coordinates.
  static double mid(double a, double b) { return a + (b - a) * 0.4142135623730951; }
  static double width(double a, double b) { return b - a; }
  static bool is_zero(const Num& x) { return x.lo() == 0.0 && x.hi() == 0.0; }
  static bool is_exact(const Num& x) { return x.is_point(); }

  // (W1 |a1|^p + W2 |a2|^p)^(1/p) and the t coordinate where it is attained.
  Num peak(const Rational& a1, const Rational& a2) const {
    Num s = w1 * pow_pos(Num::from(abs(a1)), pd) + w2 * pow_pos(Num::from(abs(a2)), pd);
    return pow_pos(s, 1 / pd);
  }
  Num peak_t(const Rational& a1, const Rational& a2, const Num& h) const {
    if (a1 == 0) return Num(0.0);
    if (a2 == 0) return c1;
    if (h.lo() <= 0) return Num(0.0, c1.hi());
    Num num = w1 * pow_pos(Num::from(abs(a1)), pd - 1);
    return div_pos(num, pow_pos(h, pd - 1));
  }
  Num div_kappa(const Num& x, const Rational& kappa) const {
    if (kappa == 1) return x;
    Num k = Num::from(kappa);
    // x may be negative; divide the magnitude of each end separately.
    double lo = x.lo() >= 0 ? div_pos(Num(x.lo()), k).lo() : -div_pos(Num(-x.lo()), k).hi();
    double hi = x.hi() >= 0 ? div_pos(Num(x.hi()), k).hi() : -div_pos(Num(-x.hi()), k).lo();
    return {lo, hi};
  }

  double pd = 1, q = 1, inv_q = 0;
  Num w1, w2, c1, c2, bm;
};

struct RationalBackend {
  using Num = CertifiedReal;
  using Scalar = Rational;
  using Sigma = Rational;

  RationalBackend(const Arc& arc, int bits) : arc_(&arc), bits(bits) {
    const Rational& p = arc.p();
    q = p / (p - 1);
    inv_q = (p - 1) / p;
    w1 = Num(arc.w1());
    w2 = Num(arc.w2());
    c1 = arc.t_end(false, bits);
    c2 = arc.s_end(true, bits);
    bm = pow(CertifiedReal(Rational(1, 2)), inv_q, bits);
  }

  Num from(const Rational& r) const { return Num(r); }
  Num sigma(const Rational& sg) const { return Num(sg); }
  static const Rational& lo(const Num& x) { return x.lower(); }
  static const Rational& hi(const Num& x) { return x.upper(); }
  Num pow_q(const Num& x) const { return pow(clamp0(x), q, bits); }
  Num pow_inv_q(const Num& x) const { return pow(clamp0(x), inv_q, bits); }
  static Rational mid(const Rational& a, const Rational& b) { return a + (b - a) * Rational(29, 70); }
  static Rational width(const Rational& a, const Rational& b) { return b - a; }
  static bool is_zero(const Num& x) { return x.is_exact() && x.lower() == 0; }
  static bool is_exact(const Num& x) { return x.is_exact(); }

  Num peak(const Rational& a1, const Rational& a2) const { return arc_->peak(abs(a1), abs(a2), bits); }
  Num peak_t(const Rational& a1, const Rational& a2, const Num&) const { return arc_->peak_t(abs(a1), abs(a2), bits); }
  Num div_kappa(const Num& x, const Rational& kappa) const { return kappa == 1 ? x : x / Num(kappa); }

  const Arc* arc_;
  int bits;
  Rational q, inv_q;
  Num w1, w2, c1, c2, bm;
};

enum class Kind { Zero, Pos, Neg, Mixed };

Kind kind_of(const Rational& a1, const Rational& a2) {
  if (a1 == 0 && a2 == 0) return Kind::Zero;
  if (a1 >= 0 && a2 >= 0) return Kind::Pos;
  if (a1 <= 0 && a2 <= 0) return Kind::Neg;
  return Kind::Mixed;
}

enum class Status { Violated, Satisfied, Unknown };

// ---------------------------------------------------------------------------
// Engine: arc nodes, per-constraint ranges over sub-arcs, box classification.

template <class B>
struct Engine {
  using Num = typename B::Num;
  using Scalar = typename B::Scalar;
  using Sigma = typename B::Sigma;

  struct Prep {
    const ArcConstraint* src = nullptr;
    Kind kind = Kind::Zero;
    Num a1, a2, b, h, tstar;
  };

  struct Node {
    Sigma sigma;
    Num t, s;
    std::vector<Num> ell;  // per constraint, then objective (if any)
    bool excluded = false;  // point already checked exactly and found infeasible
  };

  struct Box {
    Node a, b;
  };

  const B& be;
  std::vector<Prep> preps;
  std::size_t checked = 0;  // preps[checked..] are objectives, not constraints

  Engine(const B& backend, const std::vector<const ArcConstraint*>& cons) : be(backend) {
    for (const auto* c : cons) preps.push_back(prep(*c));
    checked = preps.size();
  }

  Prep prep(const ArcConstraint& c) const {
    Prep p;
    p.src = &c;
    p.kind = kind_of(c.w1, c.w2);
    p.a1 = be.from(c.w1);
    p.a2 = be.from(c.w2);
    p.b = be.from(c.b);
    if (p.kind == Kind::Pos || p.kind == Kind::Neg) {
      p.h = be.peak(c.w1, c.w2);
      p.tstar = be.peak_t(c.w1, c.w2, p.h);
    }
    return p;
  }

  Node eval(const Sigma& sg) const {
    Node n;
    n.sigma = sg;
    if (sg == 0) {
      n.t = be.c1;
      n.s = be.from(Rational(0));
    } else if (sg == 2) {
      n.t = be.from(Rational(0));
      n.s = be.c2;
    } else if (sg <= 1) {
      Num bb = be.sigma(sg) * be.bm;
      Num aa = be.pow_inv_q(be.from(Rational(1)) - be.pow_q(bb));
      n.t = be.c1 * aa;
      n.s = be.c2 * bb;
    } else {
      Num aa = be.sigma(2 - sg) * be.bm;
      Num bb = be.pow_inv_q(be.from(Rational(1)) - be.pow_q(aa));
      n.t = be.c1 * aa;
      n.s = be.c2 * bb;
    }
    fill(n);
    return n;
  }

  void fill(Node& n) const {
    n.ell.clear();
    for (const auto& p : preps) n.ell.push_back(p.a1 * n.t + p.a2 * n.s);
  }

  bool maybe_peak(const Prep& p, const Box& bx) const {
    return !(B::hi(bx.a.t) < B::lo(p.tstar)) && !(B::hi(p.tstar) < B::lo(bx.b.t));
  }
  bool surely_peak(const Prep& p, const Box& bx) const {
    return B::hi(p.tstar) < B::lo(bx.a.t) && B::hi(bx.b.t) < B::lo(p.tstar);
  }

  std::pair<Scalar, Scalar> range(std::size_t j, const Box& bx) const {
    const Prep& p = preps[j];
    const Num& la = bx.a.ell[j];
    const Num& lb = bx.b.ell[j];
    Scalar lo = std::min(B::lo(la), B::lo(lb));
    Scalar hi = std::max(B::hi(la), B::hi(lb));
    if (p.kind == Kind::Pos) {
      if (maybe_peak(p, bx)) hi = B::hi(p.h);
      hi = std::min(hi, Scalar(B::hi(p.h)));
    } else if (p.kind == Kind::Neg) {
      if (maybe_peak(p, bx)) lo = -B::hi(p.h);
      lo = std::max(lo, Scalar(-B::hi(p.h)));
    }
    return {lo, hi};
  }

  Status status(std::size_t j, const Box& bx) const {
    auto [lo, hi] = range(j, bx);
    const Prep& p = preps[j];
    const bool strict = p.src->strict;
    if (strict ? hi <= B::lo(p.b) : hi < B::lo(p.b)) return Status::Violated;
    if (strict ? lo > B::hi(p.b) : lo >= B::hi(p.b)) return Status::Satisfied;
    // A bound touched exactly at an excluded end node only: the rest of the
    // sub-arc lies strictly on one side.
    if (B::lo(p.b) == B::hi(p.b) && !(p.kind == Kind::Pos || p.kind == Kind::Neg ? maybe_peak(p, bx) : false)) {
      const Num& la = bx.a.ell[j];
      const Num& lb = bx.b.ell[j];
      auto touches = [&](const Node& n, const Num& v) { return n.excluded && B::is_exact(v) && B::lo(v) == B::lo(p.b); };
      if (!strict && hi == B::lo(p.b)) {
        if ((touches(bx.a, la) && B::hi(lb) < B::lo(p.b)) || (touches(bx.b, lb) && B::hi(la) < B::lo(p.b))) return Status::Violated;
      }
      if (strict && lo == B::lo(p.b)) {
        if ((touches(bx.a, la) && B::lo(lb) > B::lo(p.b)) || (touches(bx.b, lb) && B::lo(la) > B::lo(p.b))) return Status::Satisfied;
      }
    }
    return Status::Unknown;
  }

  Box split_left(const Box& bx, const Node& m) const { return {bx.a, m}; }
  Node midpoint(const Box& bx) const { return eval(B::mid(bx.a.sigma, bx.b.sigma)); }

  // min_j (l_j - b_j) / kappa_j over the box, as an enclosure.
  std::pair<Scalar, Scalar> margin(const Box& bx) const {
    std::optional<Scalar> lo, hi;
    for (std::size_t j = 0; j < checked; ++j) {
      auto [rlo, rhi] = range(j, bx);
      Num r = be.div_kappa(Num(rlo, rhi) - preps[j].b, preps[j].src->kappa);
      if (!lo || B::lo(r) < *lo) lo = B::lo(r);
      if (!hi || B::hi(r) < *hi) hi = B::hi(r);
    }
    return {lo.value_or(Scalar(0)), hi.value_or(Scalar(0))};
  }
};

// One equality l = b (kept apart from the inequality list) turns box
// certification into a sign-change test.
struct EqualityLine {
  Rational w1, w2, b;
};

template <class B>
struct EqTerm {
  using Num = typename B::Num;
  Num a1, a2, b;
  EqTerm(const B& be, const EqualityLine& e) : a1(be.from(e.w1)), a2(be.from(e.w2)), b(be.from(e.b)) {}
  Num at(const Num& t, const Num& s) const { return a1 * t + a2 * s - b; }
};

template <class B>
struct SearchResult {
  Decision verdict = Decision::Outside;
  std::vector<std::pair<typename B::Sigma, typename B::Sigma>> undecided;
  std::optional<std::pair<typename B::Scalar, typename B::Scalar>> gap;
};

template <class B>
SearchResult<B> search(const Engine<B>& eng, const std::optional<EqualityLine>& eq,
                       std::vector<typename Engine<B>::Box> work, const typename B::Scalar& min_width,
                       std::size_t max_boxes) {
  using Box = typename Engine<B>::Box;
  SearchResult<B> out;
  std::optional<EqTerm<B>> et;
  if (eq) et.emplace(eng.be, *eq);
  std::vector<Box> stuck;
  std::size_t processed = 0;
  while (!work.empty()) {
    Box bx = std::move(work.back());
    work.pop_back();
    ++processed;
    bool dead = false, all_ok = true;
    for (std::size_t j = 0; j < eng.checked && !dead; ++j) {
      Status st = eng.status(j, bx);
      if (st == Status::Violated) dead = true;
      if (st != Status::Satisfied) all_ok = false;
    }
    if (!dead && et) {
      auto ga = et->at(bx.a.t, bx.a.s);
      auto gb = et->at(bx.b.t, bx.b.s);
      // Range of l - b over the sub-arc: endpoints plus interior extremum
      // (covered conservatively by the coordinate hull).
      auto tl = std::min(B::lo(bx.a.t), B::lo(bx.b.t)), th = std::max(B::hi(bx.a.t), B::hi(bx.b.t));
      auto sl = std::min(B::lo(bx.a.s), B::lo(bx.b.s)), sh = std::max(B::hi(bx.a.s), B::hi(bx.b.s));
      auto span = et->a1 * typename B::Num(tl, th) + et->a2 * typename B::Num(sl, sh) - et->b;
      if (B::hi(span) < 0 || B::lo(span) > 0) dead = true;
      bool root = B::is_zero(ga) || B::is_zero(gb) || (B::hi(ga) < 0 && B::lo(gb) > 0) || (B::lo(ga) > 0 && B::hi(gb) < 0);
      if (!root) all_ok = false;
    }
    if (dead) continue;
    if (all_ok) {
      out.verdict = Decision::Inside;
      return out;
    }
    if (B::width(bx.a.sigma, bx.b.sigma) <= min_width || processed > max_boxes) {
      stuck.push_back(std::move(bx));
      continue;
    }
    auto m = eng.midpoint(bx);
    work.push_back(Box{m, bx.b});
    work.push_back(Box{bx.a, std::move(m)});
  }
  if (stuck.empty()) return out;
  out.verdict = Decision::Ambiguous;
  for (const auto& bx : stuck) {
    out.undecided.emplace_back(bx.a.sigma, bx.b.sigma);
    auto [lo, hi] = eng.margin(bx);
    if (!out.gap) {
      out.gap = std::make_pair(lo, hi);
    } else {
      out.gap->first = std::max(out.gap->first, lo);
      out.gap->second = std::max(out.gap->second, hi);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact checks at single arc points.

enum class Where { Interior, MuZero, MuOne };

bool strict_at(const ArcConstraint& c, Where w) {
  switch (w) {
    case Where::MuZero: return c.strict_s0;
    case Where::MuOne: return c.strict_t0;
    default: return c.strict;
  }
}

Decision point_check(const std::vector<ArcConstraint>& cons, const Refinable& t, const Refinable& s, Where where) {
  std::vector<std::pair<CertifiedReal, CertifiedReal>> cache;
  auto at = [&](std::size_t level) -> const std::pair<CertifiedReal, CertifiedReal>& {
    while (cache.size() <= level) {
      int bits = kRefinementLadder[cache.size()];
      cache.emplace_back(t(bits), s(bits));
    }
    return cache[level];
  };
  bool ambiguous = false;
  for (const auto& c : cons) {
    const bool strict = strict_at(c, where);
    bool settled = false;
    for (std::size_t level = 0; level < kRefinementLadder.size() && !settled; ++level) {
      const auto& [tv, sv] = at(level);
      CertifiedReal v = CertifiedReal(c.w1) * tv + CertifiedReal(c.w2) * sv;
      if (v.lower() > c.b) {
        settled = true;
      } else if (v.upper() < c.b) {
        return Decision::Outside;
      } else if (v.is_exact()) {
        if (strict) return Decision::Outside;
        settled = true;
      } else if (c.w1 == 0 && c.w2 == 0) {
        settled = true;
      }
    }
    if (!settled) ambiguous = true;
  }
  return ambiguous ? Decision::Ambiguous : Decision::Inside;
}

// Double pre-screen of a single node; Unknown falls through to point_check.
template <class E>
Status node_status(const E& eng, const typename E::Node& n, Where where) {
  bool all = true;
  for (std::size_t j = 0; j < eng.checked; ++j) {
    const auto& p = eng.preps[j];
    const bool strict = strict_at(*p.src, where);
    const auto& v = n.ell[j];
    if (strict ? v.hi() <= p.b.lo() : v.hi() < p.b.lo()) return Status::Violated;
    if (!(strict ? v.lo() > p.b.hi() : v.lo() >= p.b.hi())) all = false;
  }
  return all ? Status::Satisfied : Status::Unknown;
}

Decision endpoint_decision(const Arc& arc, const std::vector<ArcConstraint>& cons, const Engine<DoubleBackend>& eng,
                           bool at_mu1) {
  auto node = eng.eval(at_mu1 ? 2.0 : 0.0);
  Where where = at_mu1 ? Where::MuOne : Where::MuZero;
  Status st = node_status(eng, node, where);
  if (st == Status::Violated) return Decision::Outside;
  if (st == Status::Satisfied) return Decision::Inside;
  return point_check(
      cons, [&](int bits) { return arc.t_end(at_mu1, bits); }, [&](int bits) { return arc.s_end(at_mu1, bits); }, where);
}

// sign(x - y) for certified reals given as refinable functions; nullopt when the
// ladder cannot separate them.
std::optional<std::strong_ordering> refined_compare(const Refinable& f, const Refinable& g) {
  try {
    return compare_refined(f, g);
  } catch (const AmbiguityError&) {
    return std::nullopt;
  }
}

// Rational (t, s) on the arc where two constraint lines cross, if any.
std::optional<std::pair<Rational, Rational>> crossing(const Rational& a1, const Rational& a2, const Rational& b,
                                                      const Rational& c1, const Rational& c2, const Rational& d) {
  Rational det = a1 * c2 - a2 * c1;
  if (det == 0) return std::nullopt;
  Rational t = (b * c2 - a2 * d) / det;
  Rational s = (a1 * d - b * c1) / det;
  return std::make_pair(t, s);
}

// Is the rational point (t, s) with t, s > 0 on the arc? nullopt if undecidable.
std::optional<bool> on_arc(const Arc& arc, const Rational& t, const Rational& s) {
  if (t <= 0 || s <= 0) return false;
  const Rational& p = arc.p();
  const Rational q = p / (p - 1);
  const Rational e = -1 / (p - 1);  // (t/c)^q = t^q w^(-q/p), q/p = 1/(p-1)
  auto lhs = [&](int bits) {
    return pow(CertifiedReal(t), q, bits) * pow(CertifiedReal(arc.w1()), e, bits) +
           pow(CertifiedReal(s), q, bits) * pow(CertifiedReal(arc.w2()), e, bits);
  };
  auto one = [](int) { return CertifiedReal(1); };
  auto c = refined_compare(lhs, one);
  if (!c) return std::nullopt;
  return *c == std::strong_ordering::equal;
}

// sigma of a rational arc point (enclosure midpoint is precise to the working bits).
Rational sigma_of(const Arc& arc, const Rational& t, const Rational& s, int bits) {
  const Rational inv_q = (arc.p() - 1) / arc.p();
  CertifiedReal bm = pow(CertifiedReal(Rational(1, 2)), inv_q, bits);
  CertifiedReal bb = CertifiedReal(s) / arc.s_end(true, bits);
  if (bb.upper() <= bm.lower()) return (bb / bm).midpoint();
  CertifiedReal aa = CertifiedReal(t) / arc.t_end(false, bits);
  return (CertifiedReal(2) - aa / bm).midpoint();
}

struct Interior {
  std::vector<const ArcConstraint*> ineq;
  std::optional<EqualityLine> eq;
  std::optional<std::pair<Rational, Rational>> vertex;  // forced by two equalities
  bool infeasible = false;
};

// Scale a line by a positive factor so its first nonzero coefficient is +-1.
EqualityLine normalized(const Rational& w1, const Rational& w2, const Rational& b) {
  Rational k = w1 != 0 ? abs(w1) : abs(w2);
  return {w1 / k, w2 / k, b / k};
}

Interior split_interior(const std::vector<ArcConstraint>& cons) {
  Interior out;
  std::vector<bool> used(cons.size(), false);
  std::vector<EqualityLine> norm(cons.size());
  std::vector<EqualityLine> lines;
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const auto& c = cons[i];
    if (c.w1 == 0 && c.w2 == 0) {
      if (c.strict ? !(0 > c.b) : !(0 >= c.b)) out.infeasible = true;
      used[i] = true;
    } else {
      norm[i] = normalized(c.w1, c.w2, c.b);
    }
  }
  // Opposite constraints on one line: l >= b_i and l <= -b_j.
  for (std::size_t i = 0; i < cons.size(); ++i) {
    if (used[i]) continue;
    for (std::size_t j = i + 1; j < cons.size(); ++j) {
      if (used[j] || norm[j].w1 != -norm[i].w1 || norm[j].w2 != -norm[i].w2) continue;
      const Rational lo = norm[i].b, hi = -norm[j].b;
      const bool any_strict = cons[i].strict || cons[j].strict;
      if (lo > hi || (lo == hi && any_strict)) out.infeasible = true;
      if (lo == hi && !any_strict) {
        EqualityLine e = norm[i];
        if (e.w1 < 0 || (e.w1 == 0 && e.w2 < 0)) e = {-e.w1, -e.w2, -e.b};
        lines.push_back(e);
        used[i] = used[j] = true;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < cons.size(); ++i) {
    if (!used[i]) out.ineq.push_back(&cons[i]);
  }
  for (const auto& l : lines) {
    if (!out.eq) {
      out.eq = l;
      continue;
    }
    if (l.w1 == out.eq->w1 && l.w2 == out.eq->w2) {
      if (l.b != out.eq->b) out.infeasible = true;
      continue;
    }
    if (!out.vertex) out.vertex = crossing(out.eq->w1, out.eq->w2, out.eq->b, l.w1, l.w2, l.b);
  }
  return out;
}

Decision combine(Decision interior, bool endpoint_ambiguous) {
  if (interior == Decision::Outside && endpoint_ambiguous) return Decision::Ambiguous;
  return interior;
}

constexpr double kStage1MinWidth = 0x1p-44;
const Rational& stage2_min_width() {
  static const Rational w = Rational(1) / Rational(Integer("1000000000000000000000000000000"));
  return w;
}
constexpr std::size_t kStage1MaxBoxes = 200000;
constexpr std::size_t kStage2MaxBoxes = 4000;

// Tangency of an inequality with the arc peak: returns a decision when the
// constraint alone settles the interior (or pins it to the peak point).
std::optional<Decision> peak_precheck(const Arc& arc, const std::vector<ArcConstraint>& all,
                                      const Engine<DoubleBackend>& eng, std::vector<const ArcConstraint*>& ineq) {
  std::vector<const ArcConstraint*> kept;
  for (std::size_t j = 0; j < eng.preps.size(); ++j) {
    const auto& p = eng.preps[j];
    const ArcConstraint& c = *p.src;
    if (p.kind == Kind::Pos) {
      if (c.b < 0 || p.b.hi() < p.h.lo()) {
        kept.push_back(&c);
        continue;
      }
      if (p.b.lo() > p.h.hi()) return Decision::Outside;
      auto cmp = refined_compare([&](int) { return CertifiedReal(c.b); },
                                 [&](int bits) { return arc.peak(c.w1, c.w2, bits); });
      if (!cmp) return Decision::Ambiguous;
      if (*cmp == std::strong_ordering::greater) return Decision::Outside;
      if (*cmp == std::strong_ordering::equal) {
        if (c.strict) return Decision::Outside;
        // Only the peak point can satisfy it.
        auto tt = [&](int bits) { return arc.peak_t(c.w1, c.w2, bits); };
        auto ss = [&](int bits) { return arc.peak_s(c.w1, c.w2, bits); };
        if (c.w1 == 0 || c.w2 == 0) return Decision::Outside;  // peak at an endpoint, already checked
        return point_check(all, tt, ss, Where::Interior);
      }
      kept.push_back(&c);
    } else if (p.kind == Kind::Neg) {
      // l >= -H always; drop when b <= -H certainly, or equality with a closed constraint.
      if (c.b > 0 || p.b.lo() > -p.h.lo()) {
        kept.push_back(&c);
        continue;
      }
      if (p.b.hi() < -p.h.hi()) continue;
      auto cmp = refined_compare([&](int) { return CertifiedReal(c.b); },
                                 [&](int bits) { return -arc.peak(-c.w1, -c.w2, bits); });
      if (cmp && (*cmp == std::strong_ordering::less || (*cmp == std::strong_ordering::equal && !c.strict))) continue;
      kept.push_back(&c);
    } else {
      kept.push_back(&c);
    }
  }
  ineq = std::move(kept);
  return std::nullopt;
}

template <class E>
std::vector<typename E::Box> initial_boxes(const E& eng, bool ex0 = false, bool ex2 = false) {
  auto n0 = eng.eval(typename E::Sigma(0));
  auto n2 = eng.eval(typename E::Sigma(2));
  n0.excluded = ex0;
  n2.excluded = ex2;
  return {typename E::Box{std::move(n0), std::move(n2)}};
}

ArcOutcome interior_decision(const Arc& arc, const std::vector<ArcConstraint>& cons, double tol, bool ex0, bool ex2) {
  Interior in = split_interior(cons);
  if (in.infeasible) return {Decision::Outside, {}};
  if (in.vertex) {
    const auto& [t, s] = *in.vertex;
    auto on = on_arc(arc, t, s);
    if (!on) return {Decision::Ambiguous, CertifiedReal(0)};
    if (!*on) return {Decision::Outside, {}};
    return {point_check(cons, [&](int) { return CertifiedReal(t); }, [&](int) { return CertifiedReal(s); }, Where::Interior),
            CertifiedReal(0)};
  }

  DoubleBackend dbe(arc);
  std::vector<const ArcConstraint*> ineq = in.ineq;
  {
    Engine<DoubleBackend> pre(dbe, ineq);
    if (auto d = peak_precheck(arc, cons, pre, ineq)) return {*d, CertifiedReal(0)};
  }
  std::vector<ArcConstraint> eq_cons;
  if (in.eq) {
    // A tangent equality pins the point to the peak of its line.
    EqualityLine e = *in.eq;
    if (e.w2 >= 0 && e.b >= 0) {
      auto cmp = refined_compare([&](int) { return CertifiedReal(e.b); },
                                 [&](int bits) { return arc.peak(e.w1, e.w2, bits); });
      if (!cmp) return {Decision::Ambiguous, CertifiedReal(0)};
      if (*cmp == std::strong_ordering::greater) return {Decision::Outside, {}};
      if (*cmp == std::strong_ordering::equal) {
        if (e.w1 == 0 || e.w2 == 0) return {Decision::Outside, {}};
        return {point_check(
                    cons, [&](int bits) { return arc.peak_t(e.w1, e.w2, bits); },
                    [&](int bits) { return arc.peak_s(e.w1, e.w2, bits); }, Where::Interior),
                CertifiedReal(0)};
      }
    }
  }

  Engine<DoubleBackend> eng(dbe, ineq);
  double w1 = std::min(std::max(tol, kStage1MinWidth), 1e-3);
  auto r1 = search(eng, in.eq, initial_boxes(eng, ex0, ex2), w1, kStage1MaxBoxes);
  if (r1.verdict != Decision::Ambiguous) return {r1.verdict, {}};

  // Stage 2: rational enclosures on the undecided pieces, with exact nodes at
  // rational arc points where two constraint lines cross.
  RationalBackend rbe(arc, kDefaultBits);
  Engine<RationalBackend> reng(rbe, ineq);
  std::vector<Engine<RationalBackend>::Box> work;
  auto rnode = [&](double sg) {
    auto n = reng.eval(from_double(sg));
    n.excluded = (sg == 0.0 && ex0) || (sg == 2.0 && ex2);
    return n;
  };
  for (const auto& [a, b] : r1.undecided) work.push_back({rnode(a), rnode(b)});
  std::vector<std::pair<Rational, Rational>> vertices;
  for (std::size_t i = 0; i < ineq.size(); ++i) {
    for (std::size_t j = i + 1; j < ineq.size(); ++j) {
      if (auto v = crossing(ineq[i]->w1, ineq[i]->w2, ineq[i]->b, ineq[j]->w1, ineq[j]->w2, ineq[j]->b)) vertices.push_back(*v);
    }
    if (in.eq) {
      if (auto v = crossing(ineq[i]->w1, ineq[i]->w2, ineq[i]->b, in.eq->w1, in.eq->w2, in.eq->b)) vertices.push_back(*v);
    }
  }
  for (const auto& [t, s] : vertices) {
    auto on = on_arc(arc, t, s);
    if (!on || !*on) continue;
    Decision at_v = point_check(cons, [&](int) { return CertifiedReal(t); }, [&](int) { return CertifiedReal(s); }, Where::Interior);
    if (at_v == Decision::Inside) return {Decision::Inside, {}};
    Rational sg = sigma_of(arc, t, s, kDefaultBits);
    for (std::size_t k = 0; k < work.size(); ++k) {
      if (work[k].a.sigma == sg || work[k].b.sigma == sg) {
        auto& node = work[k].a.sigma == sg ? work[k].a : work[k].b;
        node.t = CertifiedReal(t);
        node.s = CertifiedReal(s);
        node.excluded = at_v == Decision::Outside;
        reng.fill(node);
      } else if (work[k].a.sigma < sg && sg < work[k].b.sigma) {
        Engine<RationalBackend>::Node v{sg, CertifiedReal(t), CertifiedReal(s), {}, at_v == Decision::Outside};
        reng.fill(v);
        auto right = Engine<RationalBackend>::Box{v, work[k].b};
        work[k].b = v;
        work.push_back(right);
        break;
      }
    }
  }
  auto r2 = search(reng, in.eq, std::move(work), stage2_min_width(), kStage2MaxBoxes);
  if (r2.verdict != Decision::Ambiguous) return {r2.verdict, {}};
  CertifiedReal gap(0);
  if (r2.gap) gap = CertifiedReal(std::min(r2.gap->first, r2.gap->second), std::max(r2.gap->first, r2.gap->second));
  return {Decision::Ambiguous, gap};
}

}  // namespace

ArcOutcome decide(const Arc& arc, const std::vector<ArcConstraint>& cons, double tol) {
  if (arc.is_point()) {
    Where where = Where::Interior;
    if (arc.w2() == 0) where = Where::MuZero;
    if (arc.w1() == 0) where = Where::MuOne;
    Decision d = point_check(
        cons, [&](int bits) { return arc.t_point(bits); }, [&](int bits) { return arc.s_point(bits); }, where);
    return {d, CertifiedReal(0)};
  }
  std::vector<const ArcConstraint*> all;
  for (const auto& c : cons) all.push_back(&c);
  DoubleBackend dbe(arc);
  Engine<DoubleBackend> eng(dbe, all);
  Decision e0 = endpoint_decision(arc, cons, eng, false);
  if (e0 == Decision::Inside) return {Decision::Inside, {}};
  Decision e2 = endpoint_decision(arc, cons, eng, true);
  if (e2 == Decision::Inside) return {Decision::Inside, {}};
  const bool end_amb = e0 == Decision::Ambiguous || e2 == Decision::Ambiguous;
  ArcOutcome in = interior_decision(arc, cons, tol, e0 == Decision::Outside, e2 == Decision::Outside);
  in.verdict = combine(in.verdict, end_amb);
  return in;
}

namespace {

CertifiedReal excess_at(const std::vector<ArcConstraint>& cons, const CertifiedReal& t, const CertifiedReal& s) {
  CertifiedReal best(0);
  for (const auto& c : cons) {
    CertifiedReal e = (CertifiedReal(c.b) - CertifiedReal(c.w1) * t - CertifiedReal(c.w2) * s) / CertifiedReal(c.kappa);
    best = max(best, e);
  }
  return best;
}

}  // namespace

CertifiedReal min_max_excess(const Arc& arc, const std::vector<ArcConstraint>& cons, double tol) {
  for (const auto& c : cons) {
    if (c.kappa <= 0) throw std::invalid_argument("min_max_excess: kappa must be positive");
  }
  if (arc.is_point()) return excess_at(cons, arc.t_point(), arc.s_point());
  std::vector<const ArcConstraint*> all;
  for (const auto& c : cons) all.push_back(&c);
  DoubleBackend dbe(arc);
  using E = Engine<DoubleBackend>;
  E eng(dbe, all);

  auto node_ub = [&](const E::Node& n) {
    double ub = 0.0;
    for (std::size_t j = 0; j < eng.checked; ++j) {
      DoubleInterval e = dbe.div_kappa(eng.preps[j].b - n.ell[j], eng.preps[j].src->kappa);
      ub = std::max(ub, e.hi());
    }
    return ub;
  };
  auto box_lb = [&](const E::Box& bx) {
    double lb = 0.0;
    for (std::size_t j = 0; j < eng.checked; ++j) {
      auto [lo, hi] = eng.range(j, bx);
      DoubleInterval e = dbe.div_kappa(eng.preps[j].b - DoubleInterval(lo, hi), eng.preps[j].src->kappa);
      lb = std::max(lb, e.lo());
    }
    return lb;
  };

  struct Item {
    double lb;
    E::Box box;
    bool operator<(const Item& o) const { return lb > o.lb; }  // min-heap
  };
  std::priority_queue<Item> heap;
  auto boxes = initial_boxes(eng);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& bx : boxes) {
    best = std::min({best, node_ub(bx.a), node_ub(bx.b)});
    heap.push({box_lb(bx), bx});
  }
  double lower = best;
  std::size_t steps = 0;
  while (!heap.empty()) {
    Item it = heap.top();
    if (it.lb >= best - tol || it.box.b.sigma - it.box.a.sigma <= kStage1MinWidth || ++steps > kStage1MaxBoxes) {
      lower = std::min(it.lb, best);
      break;
    }
    heap.pop();
    auto m = eng.midpoint(it.box);
    best = std::min(best, node_ub(m));
    for (E::Box child : {E::Box{it.box.a, m}, E::Box{m, it.box.b}}) {
      double lb = box_lb(child);
      if (lb < best) heap.push({lb, std::move(child)});
    }
  }
  if (heap.empty()) lower = best;
  return {from_double(std::max(0.0, lower)), from_double(best)};
}

ArcExtremum optimize_linear(const Arc& arc, const std::vector<ArcConstraint>& cons, const Rational& o1,
                            const Rational& o2, bool maximize, double tol) {
  if (!maximize) {
    ArcExtremum r = optimize_linear(arc, cons, -o1, -o2, true, tol);
    r.value = -r.value;
    r.at_peak = false;
    return r;
  }
  ArcExtremum out;
  auto objective = [&](const CertifiedReal& t, const CertifiedReal& s) {
    return CertifiedReal(o1) * t + CertifiedReal(o2) * s;
  };
  ArcOutcome feas = decide(arc, cons, std::min(tol * 1e4, 1e-9));
  out.feasible = feas.verdict;
  if (feas.verdict == Decision::Outside) return out;
  if (arc.is_point()) {
    out.value = objective(arc.t_point(), arc.s_point());
    return out;
  }

  // Certified lower bound from feasible points found so far, upper bound from
  // everything not excluded.
  std::optional<Rational> best_lo;
  std::optional<Rational> best_hi;
  auto raise_lo = [&](const Rational& v) {
    if (!best_lo || v > *best_lo) best_lo = v;
  };
  auto raise_hi = [&](const Rational& v) {
    if (!best_hi || v > *best_hi) best_hi = v;
  };

  std::vector<const ArcConstraint*> all;
  for (const auto& c : cons) all.push_back(&c);
  DoubleBackend dbe(arc);
  {
    Engine<DoubleBackend> eng(dbe, all);
    for (bool at_mu1 : {false, true}) {
      Decision d = endpoint_decision(arc, cons, eng, at_mu1);
      if (d == Decision::Outside) continue;
      CertifiedReal v = objective(arc.t_end(at_mu1), arc.s_end(at_mu1));
      if (d == Decision::Inside) raise_lo(v.lower());
      raise_hi(v.upper());
    }
  }

  Interior in = split_interior(cons);
  std::vector<const ArcConstraint*> ineq = in.ineq;
  bool interior_open = !in.infeasible;
  if (interior_open && in.vertex) {
    const auto& [t, s] = *in.vertex;
    interior_open = false;
    auto on = on_arc(arc, t, s);
    if (on && *on) {
      Decision d = point_check(cons, [&](int) { return CertifiedReal(t); }, [&](int) { return CertifiedReal(s); }, Where::Interior);
      CertifiedReal v = objective(CertifiedReal(t), CertifiedReal(s));
      if (d == Decision::Inside) raise_lo(v.lower());
      if (d != Decision::Outside) raise_hi(v.upper());
    } else if (!on) {
      raise_hi(objective(CertifiedReal(t), CertifiedReal(s)).upper());
    }
  }
  if (interior_open) {
    Engine<DoubleBackend> pre(dbe, ineq);
    if (auto d = peak_precheck(arc, cons, pre, ineq)) {
      interior_open = false;
      if (*d != Decision::Outside) {
        // Pinned to the peak of a tangent constraint.
        for (const auto* c : in.ineq) {
          auto cmp = c->w1 >= 0 && c->w2 >= 0 && !c->strict
                         ? refined_compare([&](int) { return CertifiedReal(c->b); },
                                           [&](int bits) { return arc.peak(c->w1, c->w2, bits); })
                         : std::nullopt;
          if (cmp && *cmp == std::strong_ordering::equal) {
            CertifiedReal v = objective(arc.peak_t(c->w1, c->w2), arc.peak_s(c->w1, c->w2));
            if (*d == Decision::Inside) raise_lo(v.lower());
            raise_hi(v.upper());
            break;
          }
        }
        if (*d == Decision::Ambiguous) raise_hi(arc.linear_range(o1, o2).upper());
      }
    }
  }

  if (interior_open) {
    using E = Engine<DoubleBackend>;
    ArcConstraint obj_con = ArcConstraint::closed(o1, o2, Rational(0));
    std::vector<const ArcConstraint*> with_obj = ineq;
    with_obj.push_back(&obj_con);
    E eng(dbe, with_obj);
    eng.checked = ineq.size();
    const std::size_t jo = ineq.size();
    const auto& op = eng.preps[jo];
    std::optional<EqTerm<DoubleBackend>> et;
    if (in.eq) et.emplace(dbe, *in.eq);

    enum class Cls { Out, In, Unknown };
    auto classify = [&](const E::Box& bx) {
      bool ok = true;
      for (std::size_t j = 0; j < eng.checked; ++j) {
        Status st = eng.status(j, bx);
        if (st == Status::Violated) return Cls::Out;
        if (st != Status::Satisfied) ok = false;
      }
      if (et) {
        auto ga = et->at(bx.a.t, bx.a.s);
        auto gb = et->at(bx.b.t, bx.b.s);
        double tl = std::min(bx.a.t.lo(), bx.b.t.lo()), th = std::max(bx.a.t.hi(), bx.b.t.hi());
        double sl = std::min(bx.a.s.lo(), bx.b.s.lo()), sh = std::max(bx.a.s.hi(), bx.b.s.hi());
        auto span = et->a1 * DoubleInterval(tl, th) + et->a2 * DoubleInterval(sl, sh) - et->b;
        if (span.hi() < 0 || span.lo() > 0) return Cls::Out;
        bool root = (ga.hi() < 0 && gb.lo() > 0) || (ga.lo() > 0 && gb.hi() < 0);
        if (!root) ok = false;
      }
      return ok ? Cls::In : Cls::Unknown;
    };

    struct Item {
      double ub;
      E::Box box;
      bool operator<(const Item& o) const { return ub < o.ub; }  // max-heap
    };
    std::priority_queue<Item> heap;
    for (auto& bx : initial_boxes(eng)) heap.push({eng.range(jo, bx).second, std::move(bx)});
    std::size_t steps = 0;
    double lo_d = best_lo ? round_down(*best_lo) : -std::numeric_limits<double>::infinity();
    while (!heap.empty()) {
      Item it = heap.top();
      const double slack = tol * std::max(1.0, std::abs(it.ub));
      if (it.ub <= lo_d + slack) break;
      heap.pop();
      Cls cls = classify(it.box);
      if (cls == Cls::Out) continue;
      if (cls == Cls::In) {
        if (op.kind == Kind::Pos && !et && eng.surely_peak(op, it.box)) {
          out.at_peak = true;
          out.value = arc.peak(o1, o2);
          out.feasible = Decision::Inside;
          return out;
        }
        double cand = et ? eng.range(jo, it.box).first : std::max(it.box.a.ell[jo].lo(), it.box.b.ell[jo].lo());
        if (cand > lo_d) {
          lo_d = cand;
          raise_lo(from_double(cand));
        }
      }
      if (it.box.b.sigma - it.box.a.sigma <= kStage1MinWidth || ++steps > kStage1MaxBoxes) {
        raise_hi(from_double(it.ub));
        if (cls == Cls::In) continue;
        continue;
      }
      auto m = eng.midpoint(it.box);
      for (E::Box child : {E::Box{it.box.a, m}, E::Box{m, it.box.b}}) {
        double ub = eng.range(jo, child).second;
        heap.push({ub, std::move(child)});
      }
    }
    if (!heap.empty()) raise_hi(from_double(heap.top().ub));
  }

  if (best_lo) {
    out.feasible = Decision::Inside;
    Rational hi = best_hi && *best_hi > *best_lo ? *best_hi : *best_lo;
    out.value = CertifiedReal(*best_lo, hi);
  } else if (best_hi) {
    out.feasible = Decision::Ambiguous;
    out.value = CertifiedReal(arc.linear_range(o1, o2).lower() < *best_hi ? arc.linear_range(o1, o2).lower() : *best_hi, *best_hi);
  } else {
    out.feasible = feas.verdict == Decision::Inside ? Decision::Ambiguous : feas.verdict;
    out.value = arc.linear_range(o1, o2);
  }
  return out;
}

}  // namespace bmlab
