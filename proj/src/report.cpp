#include "bmlab/report.hpp"

#include <stdexcept>

namespace bmlab {

namespace {

const Rational& equality_eps() {
  static const Rational eps(1, mpz_class("100000000000000000000"));
  return eps;
}

bool numerically_equal(const CertifiedReal& a, const CertifiedReal& b) {
  const Rational& eps = equality_eps();
  return a.width() < eps && b.width() < eps && abs(a.midpoint() - b.midpoint()) < eps;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "Holds";
    case Verdict::HoldsWithEquality: return "HoldsWithEquality";
    case Verdict::AmbiguousWithinTolerance: return "AmbiguousWithinTolerance";
    case Verdict::Violation: return "Violation";
  }
  return "AmbiguousWithinTolerance";
}

Verdict parse_verdict(const std::string& text) {
  for (Verdict v : {Verdict::Holds, Verdict::HoldsWithEquality, Verdict::AmbiguousWithinTolerance, Verdict::Violation}) {
    if (to_string(v) == text) return v;
  }
  throw std::invalid_argument("unknown verdict: " + text);
}

Verdict classify(const CertifiedReal& lhs, const CertifiedReal& rhs) {
  if (lhs.is_exact() && rhs.is_exact() && lhs.lower() == rhs.lower()) return Verdict::HoldsWithEquality;
  if (lhs.lower() > rhs.upper()) return Verdict::Holds;
  if (lhs.upper() < rhs.lower()) return Verdict::Violation;
  if (numerically_equal(lhs, rhs)) return Verdict::HoldsWithEquality;
  return Verdict::AmbiguousWithinTolerance;
}

Verdict classify_refined(const Refinable& lhs, const Refinable& rhs, CertifiedReal* lhs_out, CertifiedReal* rhs_out) {
  CertifiedReal a, b;
  for (int bits : kRefinementLadder) {
    a = lhs(bits);
    b = rhs(bits);
    const bool equal_exact = a.is_exact() && b.is_exact() && a.lower() == b.lower();
    if (equal_exact || a.lower() > b.upper() || a.upper() < b.lower()) break;
  }
  if (lhs_out) *lhs_out = a;
  if (rhs_out) *rhs_out = b;
  return classify(a, b);
}

void finish_report(CheckReport& report) {
  report.slack = report.lhs - report.rhs;
  report.verdict = classify(report.lhs, report.rhs);
}

}  // namespace bmlab
