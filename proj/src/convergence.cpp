#include "bmlab/parallel.hpp"
#include "bmlab/scalar_means.hpp"
#include "bmlab/set_geometry.hpp"
#include "bmlab/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

namespace bmlab {

namespace {

using Clock = std::chrono::steady_clock;

bool contains_origin(const SetRep& set) { return set.contains(Point::origin(set.dim())); }

Rational box_volume(const AxisBox& b) {
  Rational v = 1;
  for (const auto& s : b.sides) v *= std::max(Rational(0), Rational(s.hi - s.lo));
  return v;
}

Rational set_volume(const SetRep& set) {
  if (set.is_box()) return box_volume(set.as_box());
  if (set.is_polytope() && set.dim() == 2) {
    const auto hull = convex_hull_2d(set.vertices());
    Rational twice = 0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const Point& a = hull[i];
      const Point& b = hull[(i + 1) % hull.size()];
      twice += a[0] * b[1] - a[1] * b[0];
    }
    return abs(twice) / 2;
  }
  if (set.is_polytope() && set.dim() == 1) return set.bounding_box().sides.front().hi - set.bounding_box().sides.front().lo;
  throw std::invalid_argument("volume needs boxes or planar polytopes");
}

// c with L = c K when K, L are boxes containing the origin.
std::optional<Rational> homothety(const SetRep& K, const SetRep& L) {
  if (!K.is_box() || !L.is_box() || !contains_origin(K) || !contains_origin(L)) return std::nullopt;
  const AxisBox kb = K.as_box(), lb = L.as_box();
  std::optional<Rational> c;
  for (std::size_t i = 0; i < kb.sides.size(); ++i) {
    for (const auto& [a, b] : {std::pair{kb.sides[i].lo, lb.sides[i].lo}, std::pair{kb.sides[i].hi, lb.sides[i].hi}}) {
      if (a == 0) {
        if (b != 0) return std::nullopt;
        continue;
      }
      const Rational r = b / a;
      if (c && *c != r) return std::nullopt;
      c = r;
    }
  }
  if (!c || *c <= 0) return std::nullopt;
  return c;
}

// vol(M_p) in closed form: 1-D intervals through the origin, or homothetic
// boxes through the origin (M_p = M_p(1, c; λ) K).
std::optional<Refinable> exact_combo_volume(const SetRep& K, const SetRep& L, const Rational& lambda,
                                            const Rational& p) {
  if (K.dim() == 1 && contains_origin(K) && contains_origin(L) && (K.is_box() || K.is_polytope()) &&
      (L.is_box() || L.is_polytope())) {
    const SetRep k = K.is_box() ? K : SetRep(Interval1D::closed(K.bounding_box().sides[0].lo, K.bounding_box().sides[0].hi));
    const SetRep l = L.is_box() ? L : SetRep(Interval1D::closed(L.bounding_box().sides[0].lo, L.bounding_box().sides[0].hi));
    const PCombo combo = PCombo::lambda_combo(k, l, lambda, p);
    const Refinable hi = p_combo_interval_end(combo, true), lo = p_combo_interval_end(combo, false);
    return Refinable([hi, lo](int bits) { return hi(bits) - lo(bits); });
  }
  if (auto c = homothety(K, L)) {
    const Rational vk = box_volume(K.as_box());
    const int n = K.dim();
    const Rational cc = *c;
    return Refinable([=](int bits) {
      const CertifiedReal scale = alpha_mean(Rational(1), cc, lambda, Exponent(p), bits);
      CertifiedReal v(vk);
      for (int i = 0; i < n; ++i) v = v * scale;
      return v;
    });
  }
  return std::nullopt;
}

struct McResult {
  CertifiedReal volume;
  std::uint64_t inside = 0, ambiguous = 0;
};

// Uniform points of the bounding box of M_p from per-chunk generators, so the
// estimate does not depend on the schedule.
McResult monte_carlo_volume(const PCombo& combo, std::uint64_t samples, std::uint64_t seed, double tol) {
  const int n = combo.dim();
  const AxisBox kb = combo.k().bounding_box(), lb = combo.l().bounding_box();
  std::vector<Rational> lo, width;
  Rational box_vol = 1;
  for (int i = 0; i < n; ++i) {
    const auto& ks = kb.sides[static_cast<std::size_t>(i)];
    const auto& ls = lb.sides[static_cast<std::size_t>(i)];
    const Rational a = combo.arc().linear_range(ks.lo, ls.lo).lower();
    const Rational b = combo.arc().linear_range(ks.hi, ls.hi).upper();
    lo.push_back(a);
    width.push_back(b - a);
    box_vol *= b - a;
  }
  constexpr std::uint64_t kChunk = 4096;
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> in(chunks), amb(chunks);
  const Rational unit = Rational(1) / Rational(Integer(1) << 53);
  parallel_for(chunks, [&](std::size_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 rng(seq);
    const std::uint64_t end = std::min<std::uint64_t>(samples, (c + 1) * kChunk);
    for (std::uint64_t k = c * kChunk; k < end; ++k) {
      std::vector<Rational> coords;
      for (int i = 0; i < n; ++i) {
        const Rational u = Rational(Integer(static_cast<unsigned long>(rng() >> 11))) * unit;
        coords.push_back(lo[static_cast<std::size_t>(i)] + u * width[static_cast<std::size_t>(i)]);
      }
      const Decision d = p_combo_membership(Point(std::move(coords)), combo, tol).kind;
      if (d == Decision::Inside) ++in[c];
      if (d == Decision::Ambiguous) ++amb[c];
    }
  });
  McResult out;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    out.inside += in[c];
    out.ambiguous += amb[c];
  }
  // Wilson score bounds at 99%.
  const double z = 2.5758293035489004;
  auto wilson = [&](double k, bool upper) {
    const double nn = static_cast<double>(samples);
    const double ph = k / nn;
    const double centre = ph + z * z / (2 * nn);
    const double half = z * std::sqrt(ph * (1 - ph) / nn + z * z / (4 * nn * nn));
    const double v = (upper ? centre + half : centre - half) / (1 + z * z / nn);
    return std::clamp(upper ? v + 1e-12 : v - 1e-12, 0.0, 1.0);
  };
  const Rational f_lo = from_double(wilson(static_cast<double>(out.inside), false));
  const Rational f_hi = from_double(wilson(static_cast<double>(out.inside + out.ambiguous), true));
  out.volume = CertifiedReal(box_vol * f_lo, box_vol * f_hi);
  return out;
}

}  // namespace

CheckReport check_volume_lpbm(const SetRep& K, const SetRep& L, const Rational& lambda, const Rational& p,
                              std::uint64_t mc_samples, std::uint64_t seed, double tol) {
  const auto start = Clock::now();
  if (K.dim() != L.dim()) throw std::invalid_argument("K and L must have the same dimension");
  if (lambda <= 0 || lambda >= 1) throw std::invalid_argument("lambda must lie in (0,1)");
  if (p < 1) throw std::invalid_argument("p must be >= 1");
  if (!contains_origin(K) || !contains_origin(L)) throw std::invalid_argument("K and L must contain the origin");
  const int n = K.dim();
  const Rational e = p / n;
  const Rational vk = set_volume(K), vl = set_volume(L);
  const Refinable rhs = [=](int bits) {
    return CertifiedReal(1 - lambda) * pow(CertifiedReal(vk), e, bits) + CertifiedReal(lambda) * pow(CertifiedReal(vl), e, bits);
  };
  CheckReport r;
  r.inequality_id = "volume_lpbm";
  if (auto vol = exact_combo_volume(K, L, lambda, p)) {
    const Refinable v = *vol;
    r.verdict = classify_refined([&](int bits) { return pow(v(bits), e, bits); }, rhs, &r.lhs, &r.rhs);
    r.witness.emplace_back("method", "closed form");
  } else {
    if (mc_samples == 0) throw std::invalid_argument("Monte Carlo needs at least one sample");
    const McResult mc = monte_carlo_volume(PCombo::lambda_combo(K, L, lambda, p), mc_samples, seed, tol);
    r.lhs = pow(mc.volume, e);
    r.rhs = rhs(kDefaultBits);
    r.verdict = classify(r.lhs, r.rhs);
    r.witness.emplace_back("method", "monte carlo, 99% Wilson interval");
    r.witness.emplace_back("samples", std::to_string(mc_samples));
    r.witness.emplace_back("seed", std::to_string(seed));
    r.witness.emplace_back("inside", std::to_string(mc.inside));
    r.witness.emplace_back("ambiguous", std::to_string(mc.ambiguous));
    r.witness.emplace_back("volume", "[" + to_decimal(mc.volume.lower(), 10) + ", " + to_decimal(mc.volume.upper(), 10) + "]");
  }
  r.slack = r.lhs - r.rhs;
  r.witness.emplace_back("vol(K)", to_string(vk));
  r.witness.emplace_back("vol(L)", to_string(vl));
  r.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return r;
}

namespace {

AxisBox support_hull(const GridFunction& fn) {
  AxisBox out;
  const int n = fn.support.front().first.dim();
  for (int i = 0; i < n; ++i) {
    Rational lo = fn.support.front().first[i], hi = lo;
    for (const auto& [x, v] : fn.support) {
      lo = std::min(lo, x[i]);
      hi = std::max(hi, x[i]);
    }
    out.sides.push_back(Interval1D::closed(lo, hi));
  }
  return out;
}

double relative_gap(const CertifiedReal& a, const CertifiedReal& b) {
  const double ref = b.to_double();
  return std::abs(a.to_double() - ref) / (ref == 0 ? 1 : ref);
}

}  // namespace

std::vector<ConvergenceRow> converge_experiment(const SetRep& K, const SetRep& L, const Rational& lambda,
                                                const Rational& p, const Exponent& alpha, int m_max, double tol) {
  if (!K.is_box() || !L.is_box()) throw std::invalid_argument("convergence needs box sets K and L");
  if (K.dim() != L.dim()) throw std::invalid_argument("K and L must have the same dimension");
  if (m_max < 0) throw std::invalid_argument("m_max must be nonnegative");
  const int n = K.dim();
  Rational k = 1;
  for (const SetRep* set : {&K, &L}) {
    for (const auto& s : set->as_box().sides) k = std::max({k, Rational(abs(s.lo)), Rational(abs(s.hi))});
  }
  const Rational half = Rational(ceil(k)) + 1;
  const AxisBox C{std::vector<Interval1D>(static_cast<std::size_t>(n), Interval1D::closed(-half, half))};
  const Exponent beta = bbl_exponent(alpha, n, p);
  const Rational vk = box_volume(K.as_box()), vl = box_volume(L.as_box());

  std::optional<CertifiedReal> cont_lhs;
  if (alpha.is_pos_inf()) {
    if (auto v = exact_combo_volume(K, L, lambda, p)) {
      cont_lhs = (*v)(kDefaultBits);
    } else {
      cont_lhs = monte_carlo_volume(PCombo::lambda_combo(K, L, lambda, p), 200000, 1, tol).volume;
    }
  }
  const CertifiedReal cont_rhs = alpha_mean(vk, vl, lambda, beta);

  std::vector<ConvergenceRow> rows;
  for (int m = 0; m <= m_max; ++m) {
    const GridFunction fm = cell_sup_discretize(PiecewiseConstant{{{K.as_box(), Rational(1)}}}, m, C);
    const GridFunction gm = cell_sup_discretize(PiecewiseConstant{{{L.as_box(), Rational(1)}}}, m, C);
    Integer scale = 1;
    scale <<= static_cast<mp_bitcnt_t>(m * n);
    const Rational inv = Rational(1) / Rational(scale);
    ConvergenceRow row;
    row.m = m;
    CertifiedReal lhs, rhs;
    if (fm.support.empty() || gm.support.empty()) throw std::invalid_argument("K and L must have nonempty interior cells");
    if (alpha.is_pos_inf()) {
      // χ of a full grid box: the curves of M_p over the grid points come
      // within open unit distance (in lattice coordinates) of exactly the
      // same lattice points as M_p over the hulls, since t, s <= 1.
      Integer cell = 1;
      cell <<= static_cast<mp_bitcnt_t>(m);
      const Rational h = Rational(1) / Rational(cell);
      const PCombo combo = PCombo::lambda_combo(support_hull(fm), support_hull(gm), lambda, p);
      const SetRep cube = AxisBox{std::vector<Interval1D>(static_cast<std::size_t>(n), Interval1D::open(-h, h))};
      const CountResult c = gcount_pcombo_plus_cube(combo, cube, Lattice::refined(n, m), tol);
      lhs = CertifiedReal(Rational(c.count), Rational(c.count + static_cast<long>(c.ambiguous_points.size())));
      rhs = alpha_mean(Rational(static_cast<long>(fm.support.size())), Rational(static_cast<long>(gm.support.size())),
                       lambda, beta);
    } else {
      std::vector<Point> kp, lp;
      for (const auto& [x, v] : fm.support) kp.push_back(x);
      for (const auto& [y, v] : gm.support) lp.push_back(y);
      BblInstance inst{n, p, lambda, alpha, SetRep::points(kp), SetRep::points(lp), fm, gm, std::nullopt};
      inst.f.domain.reset();
      inst.g.domain.reset();
      const CheckReport r = check_lattice_variant(inst, Lattice::refined(n, m), tol);
      lhs = r.lhs;
      rhs = r.rhs;
    }
    row.verdict = classify(lhs, rhs);
    row.lhs = lhs * CertifiedReal(inv);
    row.rhs = rhs * CertifiedReal(inv);
    row.continuous_lhs = cont_lhs;
    row.continuous_rhs = cont_rhs;
    row.gap = cont_lhs ? relative_gap(row.lhs, *cont_lhs) : relative_gap(row.rhs, cont_rhs);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace bmlab
