#pragma once

// Certified verdicts shared by every checker.

#include "bmlab/certified_real.hpp"

#include <string>
#include <utility>
#include <vector>

namespace bmlab {

enum class Verdict { Holds, HoldsWithEquality, AmbiguousWithinTolerance, Violation };

std::string to_string(Verdict v);
Verdict parse_verdict(const std::string& text);

struct CheckReport {
  std::string inequality_id;
  Verdict verdict = Verdict::AmbiguousWithinTolerance;
  CertifiedReal lhs;
  CertifiedReal rhs;
  CertifiedReal slack;
  /// Ordered key/value trail describing the instance and the deciding data.
  std::vector<std::pair<std::string, std::string>> witness;
  double runtime_ms = 0;
};

/// Verdict for lhs >= rhs from two enclosures. Equality needs exact equal
/// values or both widths and the midpoint gap below 1e-20.
Verdict classify(const CertifiedReal& lhs, const CertifiedReal& rhs);

/// Same, re-evaluating both sides along the precision ladder until the
/// comparison settles.
Verdict classify_refined(const Refinable& lhs, const Refinable& rhs, CertifiedReal* lhs_out = nullptr,
                         CertifiedReal* rhs_out = nullptr);

/// Fills verdict and slack from lhs/rhs.
void finish_report(CheckReport& report);

}  // namespace bmlab
