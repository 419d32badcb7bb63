#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bmlab/exponent.hpp"
#include "bmlab/functions_bbl.hpp"
#include "bmlab/lattice_enum.hpp"
#include "bmlab/rational.hpp"
#include "bmlab/report.hpp"
#include "bmlab/sets.hpp"

namespace bmlab {

/// Parse failure; field() is a JSON path such as "K.box[1]", or empty for
/// syntax errors, whose message carries the byte offset.
class InstanceError : public ParseError {
 public:
  InstanceError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Contents of an instance file. Numbers are rational text ("3/2", "-1",
/// "0.25") or JSON integers; floating literals are rejected.
///
///   {"n": 1, "p": "2", "lambda": "1/2",
///    "K": {"box": ["[0, 1]"]}, "L": {"points": [["0"], ["2"]]},
///    "f": [[["0"], "1"]], "cube": {"box": ["(-1, 1)"]}}
///
/// Sets are {"box": [interval text, ...]}, {"points": [[coord, ...], ...]}
/// or {"polytope": [[coord, ...], ...]}.
struct Instance {
  std::optional<int> n;
  std::optional<Rational> p, lambda, t, s;
  std::optional<Exponent> alpha;
  std::optional<SetRep> K, L, set, cube;
  std::optional<GridFunction> f, g, h;
  std::optional<std::vector<Point>> basis;

  /// Throws InstanceError naming the field when it is absent.
  int dim() const;
  const Rational& need(const std::optional<Rational>& v, const char* field) const;
  const SetRep& need(const std::optional<SetRep>& v, const char* field) const;
  const GridFunction& need(const std::optional<GridFunction>& v, const char* field) const;
  Lattice lattice() const;
  BblInstance bbl() const;
};

Instance parse_instance(std::string_view json_text);
Instance load_instance(const std::string& path);
std::string dump_instance(const Instance& instance);

/// "[0, 1)", "(-1, 5/2]" and the like.
Interval1D parse_interval(std::string_view text);

/// One output row. Enclosures keep their exact rational endpoints so a CSV
/// round trip is lossless.
struct ReportRow {
  std::string inequality_id;
  Verdict verdict = Verdict::AmbiguousWithinTolerance;
  CertifiedReal lhs, rhs, slack;
  double runtime_ms = 0;

  static ReportRow from(const CheckReport& r);
  bool operator==(const ReportRow& other) const;
};

std::string csv_header();
std::string to_csv(const ReportRow& row);
/// Parses the rows of a CSV document; '#' lines and the header are skipped.
std::vector<ReportRow> parse_csv(std::string_view text);

/// "[lo, hi]" in decimals; exact values print as "d = a/b" or as the integer.
std::string describe(const CertifiedReal& x, int digits = 12);

}  // namespace bmlab
