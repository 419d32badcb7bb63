// bmlab: command-line front end for the discrete Brunn-Minkowski checks.
//
// Exit codes: 0 holds, 1 ambiguous, 2 violation or mismatch, 3 usage or
// parse error.

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "bmlab/instance_io.hpp"
#include "bmlab/scalar_means.hpp"
#include "bmlab/verification.hpp"

using namespace bmlab;

namespace {

constexpr int kHolds = 0, kAmbiguous = 1, kViolation = 2, kUsage = 3;
const Rational kTwentyDigits = pow_int(Rational(1, 10), 20);

struct Output {
  std::string format = "table";
  bool no_timestamp = false;

  void stamp() const {
    if (no_timestamp) return;
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::cout << "# bmlab " << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ") << "\n";
  }
  bool csv() const { return format == "csv"; }
};

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Holds:
    case Verdict::HoldsWithEquality: return kHolds;
    case Verdict::AmbiguousWithinTolerance: return kAmbiguous;
    case Verdict::Violation: return kViolation;
  }
  return kUsage;
}

int worst(int a, int b) { return std::max(a, b); }

std::string normalize(std::string id) {
  for (char& c : id) {
    if (c == '-') c = '_';
  }
  return id;
}

void print_reports(const std::vector<CheckReport>& reports, const Output& out) {
  if (out.csv()) {
    std::cout << csv_header() << "\n";
    for (const auto& r : reports) {
      ReportRow row = ReportRow::from(r);
      if (out.no_timestamp) row.runtime_ms = 0;
      std::cout << to_csv(row) << "\n";
    }
    return;
  }
  bool first = true;
  for (const auto& r : reports) {
    if (!first) std::cout << "\n";
    first = false;
    std::cout << "inequality  " << r.inequality_id << "\n"
              << "verdict     " << to_string(r.verdict) << "\n"
              << "lhs         " << describe(r.lhs) << "\n"
              << "rhs         " << describe(r.rhs) << "\n"
              << "slack       " << describe(r.slack) << "\n";
    if (!out.no_timestamp) std::cout << "runtime_ms  " << std::fixed << std::setprecision(3) << r.runtime_ms << std::defaultfloat << "\n";
    for (const auto& [k, v] : r.witness) std::cout << "  " << k << " = " << v << "\n";
  }
}

CheckReport run_check(const std::string& raw_id, const Instance& in, double tol, long samples, std::uint64_t seed) {
  const std::string id = normalize(raw_id);
  auto K = [&]() -> const SetRep& { return in.need(in.K, "K"); };
  auto L = [&]() -> const SetRep& { return in.need(in.L, "L"); };
  auto p = [&]() -> const Rational& { return in.need(in.p, "p"); };
  auto lambda = [&]() -> const Rational& { return in.need(in.lambda, "lambda"); };
  auto t = [&]() -> const Rational& { return in.need(in.t, "t"); };
  auto s = [&]() -> const Rational& { return in.need(in.s, "s"); };
  if (id == "dlpbm") return check_dlpbm(K(), L(), lambda(), p(), tol);
  if (id == "dbm_p1") return check_dbm_p1(K(), L(), lambda(), tol);
  if (id == "bm_ts") return check_bm_ts(K(), L(), t(), s(), tol);
  if (id == "lpbm_ts") return check_lpbm_ts(K(), L(), t(), s(), p(), tol);
  if (id == "cardinality") return check_cardinality(K(), L(), p(), tol);
  if (id == "cardinality_modified_cube") {
    const SetRep cube = in.cube ? *in.cube : SetRep::cube(in.dim(), 0, 1);
    return check_cardinality_with_cube(K(), L(), p(), cube, tol);
  }
  if (id == "discrete_bbl" || id == "discrete_lp_bbl") return check_discrete_bbl(in.bbl(), BblForm::Lambda, tol);
  if (id == "discrete_bbl_ts") return check_discrete_bbl(in.bbl(), BblForm::TS, tol);
  if (id == "lattice" || id == "discrete_lp_bbl_lattice") return check_lattice_variant(in.bbl(), in.lattice(), tol);
  if (id == "volume") return check_volume_lpbm(K(), L(), lambda(), p(), samples, seed, tol);
  throw CLI::ValidationError("inequality", "unknown inequality id '" + raw_id + "'");
}

const std::vector<std::string> kCheckIds{"dlpbm",        "dbm_p1",          "bm_ts",   "lpbm_ts",
                                         "cardinality",  "cardinality-modified-cube",
                                         "discrete_bbl", "discrete_bbl_ts", "lattice", "volume"};

const std::vector<std::string> kReproIds{"remark-cube-reduction", "remark-psum-cube", "cardinality-counterexample",
                                         "sharp-cube-family"};

std::string witness(const CheckReport& r, const std::string& key) {
  for (const auto& [k, v] : r.witness) {
    if (k == key) return v;
  }
  return "";
}

// Prints quoted quantities next to computed ones; returns 0 on a match.
int run_repro(const std::string& id, const Output& out) {
  std::vector<CheckReport> reports;
  std::vector<std::pair<std::string, std::pair<std::string, std::string>>> quoted;
  bool match = true;
  auto expect = [&](const std::string& what, const std::string& quoted_value, const std::string& computed, bool ok) {
    quoted.push_back({what, {quoted_value, computed}});
    match = match && ok;
  };
  if (id == "remark-cube-reduction") {
    const CheckReport r = repro_remark_cube_reduction(Rational(1, 2), 2, Rational(1, 100));
    expect("G(combo + (-1,1/2])", "2", witness(r, "count"), witness(r, "count") == "2");
    expect("count < M_2(2,3;1/100)", "true", witness(r, "reproduced"), witness(r, "reproduced") == "true");
    reports.push_back(r);
  } else if (id == "remark-psum-cube") {
    const CheckReport r = repro_remark_psum_cube();
    const CertifiedReal target = pow(CertifiedReal(Rational(13, 2)), Rational(1, 2), kMaxBits);
    expect("combo endpoint^2", "2.5", witness(r, "combination_endpoint_squared"), witness(r, "reproduced") == "true");
    expect("count", "2", witness(r, "count"), witness(r, "count") == "2");
    expect("rhs", "sqrt(6.5)", describe(r.rhs, 22),
           r.rhs.width() <= kTwentyDigits && r.rhs.hull(target).width() <= kTwentyDigits);
    expect("2 < sqrt(6.5)", "true", witness(r, "reproduced"), r.verdict == Verdict::Violation);
    reports.push_back(r);
  } else if (id == "cardinality-counterexample") {
    const CardinalityRepro r = repro_cardinality_counterexample();
    expect("|A+B+[0,1]|", "<= 3", witness(r.weakened, "G(A+B+cube)"), witness(r.weakened, "G(A+B+cube)") == "3");
    expect("weakened verdict", "Violation", to_string(r.weakened.verdict), r.weakened.verdict == Verdict::Violation);
    expect("(-1,2) cube verdict", "Holds", to_string(r.full_cube.verdict),
           r.full_cube.verdict == Verdict::Holds || r.full_cube.verdict == Verdict::HoldsWithEquality);
    reports.push_back(r.weakened);
    reports.push_back(r.full_cube);
  } else if (id == "sharp-cube-family") {
    reports = repro_sharp_cube_family();
    std::size_t eq = 0;
    for (const auto& r : reports) eq += r.verdict == Verdict::HoldsWithEquality;
    expect("HoldsWithEquality", std::to_string(reports.size()), std::to_string(eq), eq == reports.size());
  } else {
    throw CLI::ValidationError("case", "unknown repro case '" + id + "'");
  }
  if (out.csv()) {
    print_reports(reports, out);
  } else {
    std::cout << "case " << id << "\n";
    for (const auto& [what, vals] : quoted) {
      std::cout << "  " << std::left << std::setw(26) << what << " quoted: " << std::setw(12) << vals.first
                << " computed: " << vals.second << "\n";
    }
    std::cout << (match ? "match" : "MISMATCH") << "\n\n";
    print_reports(reports, out);
  }
  return match ? kHolds : kViolation;
}

int run_fuzz(const FuzzConfig& cfg, const Output& out) {
  const FuzzSummary s = fuzz(cfg);
  if (out.csv()) {
    std::cout << "target,seed,trials,holds,equalities,ambiguous,violations,errors,min_slack\n"
              << s.target << ',' << cfg.seed << ',' << s.trials << ',' << s.holds << ',' << s.equalities << ','
              << s.ambiguous << ',' << s.violations << ',' << s.errors << ','
              << (s.min_slack ? to_string(*s.min_slack) : "") << "\n";
  } else {
    std::cout << "target      " << s.target << "\n"
              << "seed        " << cfg.seed << "\n"
              << "trials      " << s.trials << "\n"
              << "holds       " << s.holds << "\n"
              << "equalities  " << s.equalities << "\n"
              << "ambiguous   " << s.ambiguous << "\n"
              << "violations  " << s.violations << "\n"
              << "errors      " << s.errors << "\n";
    if (s.min_slack) std::cout << "min_slack   " << to_decimal(*s.min_slack) << "\n  at " << s.worst_instance << "\n";
    for (const auto& v : s.violation_instances) std::cout << "violation   " << v << "\n";
    for (const auto& v : s.ambiguous_instances) std::cout << "ambiguous   " << v << "\n";
    for (const auto& v : s.error_instances) std::cout << "error       " << v << "\n";
  }
  if (s.violations) return kViolation;
  if (s.ambiguous || s.errors) return kAmbiguous;
  return kHolds;
}

int run_converge(const Instance& in, int m_max, double tol) {
  const Exponent alpha = in.alpha ? *in.alpha : Exponent::pos_inf();
  const auto rows = converge_experiment(in.need(in.K, "K"), in.need(in.L, "L"), in.need(in.lambda, "lambda"),
                                        in.need(in.p, "p"), alpha, m_max, tol);
  std::cout << "m,lhs,rhs,continuous_lhs,continuous_rhs,gap,verdict\n";
  int code = kHolds;
  for (const auto& r : rows) {
    std::cout << r.m << ',' << to_decimal(r.lhs.midpoint(), 17) << ',' << to_decimal(r.rhs.midpoint(), 17) << ','
              << (r.continuous_lhs ? to_decimal(r.continuous_lhs->midpoint(), 17) : "") << ','
              << to_decimal(r.continuous_rhs.midpoint(), 17) << ',' << std::setprecision(17) << r.gap
              << std::defaultfloat << ',' << to_string(r.verdict) << "\n";
    code = worst(code, exit_code(r.verdict));
  }
  return code;
}

int run_gcount(const Instance& in, double tol, const Output& out) {
  CountResult c;
  std::string what;
  if (in.set) {
    c = gcount(*in.set, in.lattice());
    what = to_string(*in.set);
  } else {
    const int n = in.dim();
    const PCombo combo = in.lambda
        ? PCombo::lambda_combo(in.need(in.K, "K"), in.need(in.L, "L"), *in.lambda, in.need(in.p, "p"))
        : PCombo(in.need(in.K, "K"), in.need(in.L, "L"), in.need(in.t, "t"), in.need(in.s, "s"),
                 in.p ? *in.p : Rational(1));
    const SetRep cube = in.cube ? *in.cube : SetRep::open_unit_cube(n);
    c = gcount_pcombo_plus_cube(combo, cube, in.lattice(), tol);
    what = "combination + " + to_string(cube);
  }
  if (out.csv()) {
    std::cout << "count,ambiguous\n" << c.count.get_str() << ',' << c.ambiguous_points.size() << "\n";
  } else {
    std::cout << "set         " << what << "\n"
              << "count       " << c.count.get_str() << "\n"
              << "ambiguous   " << c.ambiguous_points.size() << "\n";
  }
  for (const auto& z : c.ambiguous_points) std::cout << "  undecided " << to_string(z) << "\n";
  return c.exact() ? kHolds : kAmbiguous;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bmlab: discrete L_p Brunn-Minkowski and Borell-Brascamp-Lieb checks"};
  app.require_subcommand(1);
  app.fallthrough();

  Output out;
  double tol = 1e-9;
  app.add_option("--tol", tol, "ambiguity threshold for certified comparisons")->check(CLI::PositiveNumber);
  app.add_option("--format", out.format, "table or csv")->check(CLI::IsMember({"table", "csv"}));
  app.add_flag("--no-timestamp", out.no_timestamp, "omit the timestamp line and runtimes");

  std::string check_id, instance_path;
  long samples = 100000;
  std::uint64_t vol_seed = 1;
  auto* check = app.add_subcommand("check", "run one checker on an instance file");
  check->add_option("inequality", check_id, "inequality id")->required()->check(CLI::IsMember(kCheckIds, normalize));
  check->add_option("instance", instance_path, "JSON instance file")->required();
  check->add_option("--samples", samples, "Monte Carlo samples for the volume check")->check(CLI::PositiveNumber);
  check->add_option("--seed", vol_seed, "Monte Carlo seed for the volume check");

  std::string repro_id;
  auto* repro = app.add_subcommand("repro", "reproduce a built-in case");
  repro->add_option("case", repro_id, "case id")->required()->check(CLI::IsMember(kReproIds));

  FuzzConfig fcfg;
  auto* fz = app.add_subcommand("fuzz", "seeded random trials of one checker");
  fz->add_option("inequality", fcfg.target, "inequality id")->required()->check(CLI::IsMember(fuzz_targets(), normalize));
  fz->add_option("--seed", fcfg.seed, "seed")->capture_default_str();
  fz->add_option("--trials", fcfg.trials, "number of trials")->capture_default_str();
  fz->add_option("--n", fcfg.n, "largest dimension drawn")->check(CLI::Range(1, 3))->capture_default_str();
  fz->add_option("--bound", fcfg.coordinate_bound, "coordinate bound")->check(CLI::Range(1, 50))->capture_default_str();

  int m_max = 8;
  auto* cv = app.add_subcommand("converge", "refined-lattice convergence table");
  cv->add_option("instance", instance_path, "JSON instance file")->required();
  cv->add_option("--m-max", m_max, "finest level")->check(CLI::Range(0, 12))->capture_default_str();

  auto* gc = app.add_subcommand("gcount", "count lattice points of a set or of a combination plus cube");
  gc->add_option("instance", instance_path, "JSON instance file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*repro) {
      out.stamp();
      return run_repro(repro_id, out);
    }
    if (*fz) {
      fcfg.tol = tol;
      out.stamp();
      return run_fuzz(fcfg, out);
    }
    const Instance in = load_instance(instance_path);
    if (*check) {
      const CheckReport r = run_check(check_id, in, tol, samples, vol_seed);
      out.stamp();
      print_reports({r}, out);
      return exit_code(r.verdict);
    }
    out.stamp();
    if (*cv) return run_converge(in, m_max, tol);
    return run_gcount(in, tol, out);
  } catch (const InstanceError& e) {
    std::cerr << "bmlab: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bmlab: invalid instance: " << e.what() << "\n";
    return kUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "bmlab: " << e.what() << "\n";
    return kUsage;
  } catch (const AmbiguityError& e) {
    std::cerr << "bmlab: " << e.what() << "\n";
    return kAmbiguous;
  }
}
