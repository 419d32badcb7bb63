#pragma once

// Lattice point enumerator G(M) = |M ∩ Λ|.

#include "bmlab/set_geometry.hpp"
#include "bmlab/sets.hpp"

#include <vector>

namespace bmlab {

/// Λ = φ(Z^n) with φ(x) = sum_i x_i v_i.
class Lattice {
 public:
  /// Throws std::invalid_argument when the basis is singular.
  explicit Lattice(std::vector<Point> basis);

  static Lattice integer(int n);
  /// 2^-m Z^n.
  static Lattice refined(int n, int m);

  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Point>& basis() const { return basis_; }
  bool is_diagonal() const { return diagonal_; }

  Point phi(const Point& x) const;
  Point phi_inv(const Point& y) const;
  /// Rows of the matrix of φ^-1.
  const std::vector<std::vector<Rational>>& inverse() const { return inv_; }

 private:
  std::vector<Point> basis_;
  std::vector<std::vector<Rational>> inv_;
  bool diagonal_ = false;
};

struct CountResult {
  Integer count = 0;
  /// Lattice points (in ambient coordinates) whose membership stayed undecided.
  std::vector<Point> ambiguous_points;

  bool exact() const { return ambiguous_points.empty(); }
};

/// Exact count of set ∩ lattice.
CountResult gcount(const SetRep& set, const Lattice& lattice);

/// Count of (combo + cube) ∩ lattice. cube may be an interval/box with any
/// open ends or a FinitePoints set such as {0,1}^n.
CountResult gcount_pcombo_plus_cube(const PCombo& combo, const SetRep& cube, const Lattice& lattice,
                                    double tol = 1e-9);

/// Counts over 2^-m Z^n.
CountResult gcount_refined(const SetRep& set, int m);
CountResult gcount_refined(const PCombo& combo, const SetRep& cube, int m, double tol = 1e-9);

}  // namespace bmlab
