#pragma once

// Floating-point reference computations used as independent test oracles.

#include "bmlab/sets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

namespace oracle {

// Max-norm distance from z to t(sigma) x + s(sigma) y, minimized over a dense
// sigma grid of the arc (Lipschitz in sigma, unlike mu).
inline double grid_distance(const std::vector<double>& z, const std::vector<std::vector<double>>& xs,
                            const std::vector<std::vector<double>>& ys, double lambda, double p, int samples) {
  const double q = p / (p - 1);
  const double c1 = std::pow(1 - lambda, 1 / p), c2 = std::pow(lambda, 1 / p);
  const double bm = std::pow(2.0, -1 / q);
  double best = INFINITY;
  for (int k = 0; k <= samples; ++k) {
    const double sigma = 2.0 * k / samples;
    double t, s;
    if (sigma <= 1) {
      s = c2 * sigma * bm;
      t = c1 * std::pow(std::max(0.0, 1 - std::pow(s / c2, q)), 1 / q);
    } else {
      t = c1 * (2 - sigma) * bm;
      s = c2 * std::pow(std::max(0.0, 1 - std::pow(t / c1, q)), 1 / q);
    }
    for (const auto& x : xs) {
      for (const auto& y : ys) {
        double d = 0;
        for (std::size_t i = 0; i < z.size(); ++i) d = std::max(d, std::abs(z[i] - t * x[i] - s * y[i]));
        best = std::min(best, d);
      }
    }
  }
  return best;
}

inline std::vector<double> to_doubles(const bmlab::Point& p) {
  std::vector<double> out;
  for (const auto& c : p.coords()) out.push_back(bmlab::to_double(c));
  return out;
}

// (t, s) on the arc of w1 K +_p w2 L at sigma in [0, 2].
inline std::pair<double, double> arc_point(double w1, double w2, double p, double sigma) {
  const double c1 = std::pow(w1, 1 / p), c2 = std::pow(w2, 1 / p);
  if (p == 1) return {c1, c2};
  const double q = p / (p - 1);
  const double bm = std::pow(2.0, -1 / q);
  if (sigma <= 1) {
    const double s = c2 * sigma * bm;
    return {c1 * std::pow(std::max(0.0, 1 - std::pow(s / c2, q)), 1 / q), s};
  }
  const double t = c1 * (2 - sigma) * bm;
  return {t, c2 * std::pow(std::max(0.0, 1 - std::pow(t / c1, q)), 1 / q)};
}

// Sampled lower bound of sum_z h^(z) for the minimal h of a 1-D instance with
// finite alpha != 0. Points whose distance to z is within margin of 1 are
// skipped, so every recorded value is certainly attained.
inline double sampled_bbl_lhs(const std::vector<std::pair<double, double>>& f,
                              const std::vector<std::pair<double, double>>& g, double lambda, double p,
                              double alpha, int samples, double margin = 1e-9) {
  std::map<long, double> best;
  for (int k = 0; k <= samples; ++k) {
    const auto [t, s] = arc_point(1 - lambda, lambda, p, 2.0 * k / samples);
    for (const auto& [x, a] : f) {
      for (const auto& [y, b] : g) {
        const double w = t * x + s * y;
        const double m = std::pow(t * std::pow(a, alpha) + s * std::pow(b, alpha), 1 / alpha);
        for (long z = static_cast<long>(std::floor(w)) - 1; z <= static_cast<long>(std::ceil(w)) + 1; ++z) {
          if (std::abs(w - static_cast<double>(z)) < 1 - margin) best[z] = std::max(best[z], m);
        }
      }
    }
  }
  double total = 0;
  for (const auto& [z, v] : best) total += v;
  return total;
}

}  // namespace oracle
