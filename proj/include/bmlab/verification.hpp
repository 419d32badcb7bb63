#pragma once

// Checkers for the lattice Brunn-Minkowski family, reproductions of the
// counterexamples, the volume check, the discretization experiment and the
// fuzzer.

#include "bmlab/functions_bbl.hpp"
#include "bmlab/lattice_enum.hpp"
#include "bmlab/report.hpp"
#include "bmlab/sets.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bmlab {

/// G(M_p + (-1,1)^n)^(p/n) >= (1-λ) G(K)^(p/n) + λ G(L)^(p/n).
CheckReport check_dlpbm(const SetRep& K, const SetRep& L, const Rational& lambda, const Rational& p,
                        double tol = 1e-9);
/// p = 1 through exact Minkowski sums where the representations allow it.
CheckReport check_dbm_p1(const SetRep& K, const SetRep& L, const Rational& lambda, double tol = 1e-9);
/// G(tK + sL + (-1, ceil(t+s))^n)^(1/n) >= t G(K)^(1/n) + s G(L)^(1/n).
CheckReport check_bm_ts(const SetRep& K, const SetRep& L, const Rational& t, const Rational& s, double tol = 1e-9);
/// G(t·K +_p s·L + (-1, ceil((t+s)^(1/p)))^n)^(p/n) >= t G(K)^(p/n) + s G(L)^(p/n).
CheckReport check_lpbm_ts(const SetRep& K, const SetRep& L, const Rational& t, const Rational& s, const Rational& p,
                          double tol = 1e-9);
/// G(A +_p B + (-1,2)^n)^(p/n) >= |A|^(p/n) + |B|^(p/n) for finite A, B in Z^n.
CheckReport check_cardinality(const SetRep& A, const SetRep& B, const Rational& p, double tol = 1e-9);
/// The same inequality with another cube, e.g. [0,1]^n, where it may fail.
CheckReport check_cardinality_with_cube(const SetRep& A, const SetRep& B, const Rational& p, const SetRep& cube,
                                        double tol = 1e-9);

/// K = [0,1], L = [0,2], n = 1: G((1-λ)·K +_p λ·L + (-1,a]) against
/// M_p(2, 3; λ). The witness records whether M_p(1,2;λ) + a < 2 and whether
/// the weakened inequality fails as expected.
CheckReport repro_remark_cube_reduction(const Rational& a, const Rational& p, const Rational& lambda);
/// G(1/2·[0,1] +_2 1/2·[0,2] +_2 (-1,1)) = 2 against M_2(2, 3; 1/2) = sqrt 6.5.
CheckReport repro_remark_psum_cube();
/// a = b = 1, p = 3/2: the [0,1]-cube form fails, the (-1,2) form holds.
struct CardinalityRepro {
  CheckReport weakened;
  CheckReport full_cube;
};
CardinalityRepro repro_cardinality_counterexample();
/// check_dlpbm on K = L = [0,m]^n for m = 1..3, n = 1..2, p = 1..3, λ in {1/3, 1/2}.
std::vector<CheckReport> repro_sharp_cube_family();

/// vol(M_p)^(p/n) >= (1-λ) vol(K)^(p/n) + λ vol(L)^(p/n). Exact in 1-D and for
/// K = L; Monte Carlo with a 99% confidence enclosure otherwise.
CheckReport check_volume_lpbm(const SetRep& K, const SetRep& L, const Rational& lambda, const Rational& p,
                              std::uint64_t mc_samples = 100000, std::uint64_t seed = 1, double tol = 1e-9);

struct ConvergenceRow {
  int m = 0;
  CertifiedReal lhs;  // 2^-mn times the discrete left side
  CertifiedReal rhs;  // 2^-mn times the discrete right side
  std::optional<CertifiedReal> continuous_lhs;
  CertifiedReal continuous_rhs;
  /// Relative gap |lhs - continuous_lhs| / continuous_lhs when available,
  /// otherwise |rhs - continuous_rhs| / continuous_rhs.
  double gap = 0;
  Verdict verdict = Verdict::AmbiguousWithinTolerance;
};

/// Discretizes f = χ_K, g = χ_L on 2^-m Z^n for m = 0..m_max and evaluates
/// the discrete inequality there. K, L are boxes.
std::vector<ConvergenceRow> converge_experiment(const SetRep& K, const SetRep& L, const Rational& lambda,
                                                const Rational& p, const Exponent& alpha, int m_max,
                                                double tol = 1e-9);

struct FuzzConfig {
  std::uint64_t seed = 42;
  std::uint64_t trials = 1000;
  int n = 2;  // dimensions 1..n are drawn
  int coordinate_bound = 5;
  std::vector<Rational> p_choices{Rational(1), Rational(3, 2), Rational(2), Rational(3)};
  std::vector<Rational> lambda_choices{Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3)};
  /// Empty selects {-1/(2n), 0, 1, +inf} per drawn n.
  std::vector<Exponent> alpha_choices;
  /// dlpbm, dbm_p1, bm_ts, lpbm_ts, cardinality or discrete_bbl.
  std::string target = "dlpbm";
  double tol = 1e-9;
};

struct FuzzSummary {
  std::string target;
  std::uint64_t trials = 0, holds = 0, equalities = 0, ambiguous = 0, violations = 0, errors = 0;
  std::optional<Rational> min_slack;  // lower end of the smallest slack enclosure
  std::string worst_instance;
  /// Re-verified violations and ambiguous instances.
  std::vector<std::string> violation_instances;
  std::vector<std::string> ambiguous_instances;
  /// Instances whose evaluation threw, with the message.
  std::vector<std::string> error_instances;
};

FuzzSummary fuzz(const FuzzConfig& config);

/// Names accepted by FuzzConfig::target.
const std::vector<std::string>& fuzz_targets();

}  // namespace bmlab
