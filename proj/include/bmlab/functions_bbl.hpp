#pragma once

// Grid functions, the cube sup-convolution h^◇ and the discrete BBL
// evaluators.

#include "bmlab/certified_real.hpp"
#include "bmlab/exponent.hpp"
#include "bmlab/lattice_enum.hpp"
#include "bmlab/report.hpp"
#include "bmlab/sets.hpp"

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bmlab {

/// Finitely supported nonnegative function; zero off the listed points.
struct GridFunction {
  std::vector<std::pair<Point, Rational>> support;
  std::optional<SetRep> domain;

  Rational at(const Point& x) const;
  /// Throws std::invalid_argument on negative values, mixed dimensions,
  /// repeated points or points outside the domain.
  void validate() const;
  /// Sum of the values at integer points of the set.
  Rational lattice_sum(const SetRep& set) const;
};

/// sup over u in (-1,1)^n of phi(z + u).
Rational sup_convolution(const GridFunction& phi, const Point& z);
/// sup over u in φ((-1,1)^n) of phi(z + u).
Rational sup_convolution(const GridFunction& phi, const Point& z, const Lattice& lattice);

/// Lambda: weights (1-λ)^(1/p)(1-μ)^(1/q), λ^(1/p)μ^(1/q), cube (-1,1)^n.
/// TS: fixed weights t, s and cube (-1, ceil(t+s))^n.
enum class BblForm { Lambda, TS };

struct BblInstance {
  int n = 1;
  Rational p = 1;
  Rational lambda = Rational(1, 2);
  Exponent alpha = 1;
  SetRep K;
  SetRep L;
  GridFunction f;
  GridFunction g;
  /// nullopt selects the minimal admissible h.
  std::optional<GridFunction> h;
  /// Weights of the TS form.
  Rational t = 1;
  Rational s = 1;

  void validate(BblForm form = BblForm::Lambda) const;
};

/// Raised when an explicit h violates the hypothesis.
class NotAdmissibleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Smallest value of h at z allowed by the hypothesis (relax_cube = false),
/// or h^◇(z) for that minimal h (relax_cube = true).
CertifiedReal minimal_admissible_h(const BblInstance& instance, const Point& z, bool relax_cube,
                                   BblForm form = BblForm::Lambda, double tol = 1e-9);

/// Throws NotAdmissibleError when the explicit h of the instance fails the
/// hypothesis on some support pair.
void validate_explicit_h(const BblInstance& instance, BblForm form = BblForm::Lambda);

CheckReport check_discrete_bbl(const BblInstance& instance, BblForm form = BblForm::Lambda, double tol = 1e-9);

/// The same inequality over φ(Z^n), evaluated after conjugating by φ^-1.
CheckReport check_lattice_variant(const BblInstance& instance, const Lattice& lattice, double tol = 1e-9);

/// f(x) = max of the values of the pieces containing x, 0 elsewhere.
struct PiecewiseConstant {
  std::vector<std::pair<AxisBox, Rational>> pieces;
};

/// f_m(x) = sup of f over x + [0, 2^-m)^n for x in C0 ∩ 2^-m Z^n, where C0
/// is C with every side made half-open [lo, hi). Zero values are dropped.
GridFunction cell_sup_discretize(const PiecewiseConstant& f, int m, const AxisBox& C);
/// Same for a finite sample table (f zero off its points).
GridFunction cell_sup_discretize(const GridFunction& f, int m, const AxisBox& C);

/// 2^-mn times the sum of the values.
Rational upper_riemann_sum(const GridFunction& fm, int m);

}  // namespace bmlab
