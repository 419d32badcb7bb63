#include "bmlab/parallel.hpp"
#include "bmlab/verification.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>

namespace bmlab {

namespace {

using Rng = std::mt19937_64;

Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return Rng(seq);
}

long pick(Rng& rng, long k) { return static_cast<long>(rng() % static_cast<std::uint64_t>(k)); }

long uniform(Rng& rng, long lo, long hi) { return lo + pick(rng, hi - lo + 1); }

template <class T>
const T& choose(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(pick(rng, static_cast<long>(v.size())))];
}

SetRep random_points(Rng& rng, int n, int bound, int max_points = 4) {
  std::set<Point> pts;
  const long count = uniform(rng, 1, max_points);
  while (static_cast<long>(pts.size()) < count) {
    std::vector<Rational> cs;
    for (int i = 0; i < n; ++i) cs.emplace_back(uniform(rng, -bound, bound));
    pts.insert(Point(std::move(cs)));
  }
  return SetRep::points({pts.begin(), pts.end()});
}

// Box with endpoints of denominator <= 4 around an integer point.
SetRep random_box(Rng& rng, int n, int bound) {
  std::vector<Interval1D> sides;
  for (int i = 0; i < n; ++i) {
    const Rational c = uniform(rng, -bound, bound);
    const long d1 = uniform(rng, 1, 4), d2 = uniform(rng, 1, 4);
    const Rational r1(pick(rng, 2 * d1 + 1), d1), r2(pick(rng, 2 * d2 + 1), d2);
    Interval1D side{c - r1, c + r2, r1 > 0 && pick(rng, 2) == 1, r2 > 0 && pick(rng, 2) == 1};
    side.lo.canonicalize();
    side.hi.canonicalize();
    sides.push_back(side);
  }
  return SetRep::box(std::move(sides));
}

SetRep random_set(Rng& rng, int n, int bound) {
  return pick(rng, 2) == 0 ? random_points(rng, n, bound) : random_box(rng, n, bound);
}

Rational random_weight(Rng& rng) {
  Rational w(uniform(rng, 1, 12), 4);
  w.canonicalize();
  return w;
}

GridFunction random_function(Rng& rng, int n, int bound) {
  GridFunction f;
  for (const auto& x : random_points(rng, n, bound, 3).vertices()) {
    Rational v(uniform(rng, 1, 5), uniform(rng, 1, 2));
    v.canonicalize();
    f.support.emplace_back(x, v);
  }
  return f;
}

std::vector<Exponent> default_alphas(int n) {
  return {Exponent(Rational(-1, 2 * n)), Exponent(0), Exponent(1), Exponent::pos_inf()};
}

struct Trial {
  std::string description;
  std::function<CheckReport(double)> run;
};

Trial make_trial(const FuzzConfig& cfg, std::uint64_t index) {
  Rng rng = trial_rng(cfg.seed, index);
  const int n = static_cast<int>(uniform(rng, 1, cfg.n));
  const int b = cfg.coordinate_bound;
  const std::string& target = cfg.target;
  const std::string head = target + " trial " + std::to_string(index) + " n=" + std::to_string(n);
  if (target == "dlpbm" || target == "dbm_p1") {
    SetRep K = random_set(rng, n, b), L = random_set(rng, n, b);
    const Rational lambda = choose(rng, cfg.lambda_choices);
    const Rational p = target == "dbm_p1" ? Rational(1) : choose(rng, cfg.p_choices);
    std::string d = head + " lambda=" + to_string(lambda) + " p=" + to_string(p) + " K=" + to_string(K) +
                    " L=" + to_string(L);
    if (target == "dbm_p1") return {d, [=](double tol) { return check_dbm_p1(K, L, lambda, tol); }};
    return {d, [=](double tol) { return check_dlpbm(K, L, lambda, p, tol); }};
  }
  if (target == "bm_ts" || target == "lpbm_ts") {
    SetRep K = random_set(rng, n, b), L = random_set(rng, n, b);
    const Rational t = random_weight(rng), s = random_weight(rng);
    const Rational p = target == "bm_ts" ? Rational(1) : choose(rng, cfg.p_choices);
    std::string d = head + " t=" + to_string(t) + " s=" + to_string(s) + " p=" + to_string(p) + " K=" +
                    to_string(K) + " L=" + to_string(L);
    if (target == "bm_ts") return {d, [=](double tol) { return check_bm_ts(K, L, t, s, tol); }};
    return {d, [=](double tol) { return check_lpbm_ts(K, L, t, s, p, tol); }};
  }
  if (target == "cardinality") {
    SetRep A = random_points(rng, n, b), B = random_points(rng, n, b);
    const Rational p = choose(rng, cfg.p_choices);
    std::string d = head + " p=" + to_string(p) + " A=" + to_string(A) + " B=" + to_string(B);
    return {d, [=](double tol) { return check_cardinality(A, B, p, tol); }};
  }
  if (target == "discrete_bbl") {
    GridFunction f = random_function(rng, n, b), g = random_function(rng, n, b);
    const Rational lambda = choose(rng, cfg.lambda_choices);
    const Rational p = choose(rng, cfg.p_choices);
    const Exponent alpha = choose(rng, cfg.alpha_choices.empty() ? default_alphas(n) : cfg.alpha_choices);
    std::vector<Point> kp, lp;
    std::string fs, gs;
    for (const auto& [x, v] : f.support) {
      kp.push_back(x);
      fs += " " + to_string(x) + ":" + to_string(v);
    }
    for (const auto& [y, v] : g.support) {
      lp.push_back(y);
      gs += " " + to_string(y) + ":" + to_string(v);
    }
    BblInstance inst{n, p, lambda, alpha, SetRep::points(kp), SetRep::points(lp), f, g, std::nullopt};
    std::string d = head + " lambda=" + to_string(lambda) + " p=" + to_string(p) + " alpha=" + to_string(alpha) +
                    " f={" + fs + " } g={" + gs + " }";
    return {d, [inst](double tol) { return check_discrete_bbl(inst, BblForm::Lambda, tol); }};
  }
  throw std::invalid_argument("unknown fuzz target: " + target);
}

struct Outcome {
  Verdict verdict = Verdict::AmbiguousWithinTolerance;
  Rational slack;
  bool error = false;
  std::string message;
};

}  // namespace

const std::vector<std::string>& fuzz_targets() {
  static const std::vector<std::string> names{"dlpbm", "dbm_p1", "bm_ts", "lpbm_ts", "cardinality", "discrete_bbl"};
  return names;
}

FuzzSummary fuzz(const FuzzConfig& config) {
  const auto& names = fuzz_targets();
  if (std::find(names.begin(), names.end(), config.target) == names.end()) {
    throw std::invalid_argument("unknown fuzz target: " + config.target);
  }
  if (config.n < 1 || config.n > 3) throw std::invalid_argument("fuzz: n must lie in 1..3");
  if (config.coordinate_bound < 0) throw std::invalid_argument("fuzz: coordinate bound must be nonnegative");
  if (config.p_choices.empty() || config.lambda_choices.empty()) throw std::invalid_argument("fuzz: empty choice list");
  FuzzSummary out;
  out.target = config.target;
  out.trials = config.trials;
  std::vector<Outcome> outcomes(config.trials);
  std::vector<std::string> descriptions(config.trials);
  parallel_for(config.trials, [&](std::size_t i) {
    const Trial trial = make_trial(config, i);
    descriptions[i] = trial.description;
    Outcome& o = outcomes[i];
    try {
      CheckReport r = trial.run(config.tol);
      if (r.verdict == Verdict::Violation) r = trial.run(config.tol / 1000);
      o.verdict = r.verdict;
      o.slack = r.slack.lower();
    } catch (const std::exception& e) {
      o.error = true;
      o.message = e.what();
    }
  });
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const Outcome& o = outcomes[i];
    if (o.error) {
      ++out.errors;
      out.error_instances.push_back(descriptions[i] + " : " + o.message);
      continue;
    }
    switch (o.verdict) {
      case Verdict::Holds: ++out.holds; break;
      case Verdict::HoldsWithEquality: ++out.equalities; break;
      case Verdict::AmbiguousWithinTolerance:
        ++out.ambiguous;
        out.ambiguous_instances.push_back(descriptions[i]);
        break;
      case Verdict::Violation:
        ++out.violations;
        out.violation_instances.push_back(descriptions[i]);
        break;
    }
    if (!out.min_slack || o.slack < *out.min_slack) {
      out.min_slack = o.slack;
      out.worst_instance = descriptions[i];
    }
  }
  return out;
}

}  // namespace bmlab
