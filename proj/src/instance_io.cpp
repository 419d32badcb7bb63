#include "bmlab/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bmlab/certified_real.hpp"

namespace bmlab {

using json = nlohmann::ordered_json;

InstanceError::InstanceError(std::string field, const std::string& message)
    : ParseError(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

Rational read_rational(const json& j, const std::string& field) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) throw InstanceError(field, "floating literal; write the value as rational text such as \"3/2\"");
  if (!j.is_string()) throw InstanceError(field, "expected rational text");
  try {
    return parse_rational(trim(j.get<std::string>()));
  } catch (const ParseError& e) {
    throw InstanceError(field, e.what());
  }
}

Point read_point(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw InstanceError(field, "expected a nonempty coordinate list");
  std::vector<Rational> c;
  for (std::size_t i = 0; i < j.size(); ++i) c.push_back(read_rational(j[i], field + "[" + std::to_string(i) + "]"));
  return Point(std::move(c));
}

std::vector<Point> read_points(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw InstanceError(field, "expected a nonempty list of points");
  std::vector<Point> pts;
  for (std::size_t i = 0; i < j.size(); ++i) {
    pts.push_back(read_point(j[i], field + "[" + std::to_string(i) + "]"));
    if (pts.back().dim() != pts.front().dim()) throw InstanceError(field, "points of different dimensions");
  }
  return pts;
}

SetRep read_set(const json& j, const std::string& field) {
  if (!j.is_object() || j.size() != 1) {
    throw InstanceError(field, "expected one of {\"box\": ...}, {\"points\": ...}, {\"polytope\": ...}");
  }
  const auto& [kind, body] = *j.items().begin();
  const std::string sub = field + "." + kind;
  if (kind == "points") return SetRep::points(read_points(body, sub));
  if (kind == "polytope") return VPolytope{read_points(body, sub)};
  if (kind != "box") throw InstanceError(field, "unknown set kind '" + kind + "'");
  if (!body.is_array() || body.empty()) throw InstanceError(sub, "expected a nonempty list of intervals");
  std::vector<Interval1D> sides;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const std::string f = sub + "[" + std::to_string(i) + "]";
    if (!body[i].is_string()) throw InstanceError(f, "expected interval text such as \"[0, 1)\"");
    try {
      sides.push_back(parse_interval(body[i].get<std::string>()));
    } catch (const ParseError& e) {
      throw InstanceError(f, e.what());
    }
    if (sides.back().is_empty()) throw InstanceError(f, "empty interval");
  }
  if (sides.size() == 1) return sides.front();
  return SetRep::box(std::move(sides));
}

GridFunction read_function(const json& j, const std::string& field) {
  GridFunction fn;
  const json* list = &j;
  if (j.is_object()) {
    if (!j.contains("support")) throw InstanceError(field + ".support", "missing");
    list = &j.at("support");
    if (j.contains("domain")) fn.domain = read_set(j.at("domain"), field + ".domain");
  }
  if (!list->is_array()) throw InstanceError(field, "expected a list of [point, value] pairs");
  for (std::size_t i = 0; i < list->size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    const json& e = (*list)[i];
    if (!e.is_array() || e.size() != 2) throw InstanceError(f, "expected [point, value]");
    fn.support.emplace_back(read_point(e[0], f + "[0]"), read_rational(e[1], f + "[1]"));
  }
  try {
    fn.validate();
  } catch (const std::exception& e) {
    throw InstanceError(field, e.what());
  }
  return fn;
}

json write_point(const Point& x) {
  json a = json::array();
  for (const auto& c : x.coords()) a.push_back(to_string(c));
  return a;
}

json write_set(const SetRep& s) {
  json out = json::object();
  if (s.is_box()) {
    json sides = json::array();
    for (const auto& side : s.as_box().sides) sides.push_back(to_string(side));
    out["box"] = sides;
  } else {
    json pts = json::array();
    for (const auto& v : s.vertices()) pts.push_back(write_point(v));
    out[s.is_polytope() ? "polytope" : "points"] = pts;
  }
  return out;
}

json write_function(const GridFunction& fn) {
  json list = json::array();
  for (const auto& [x, v] : fn.support) list.push_back(json::array({write_point(x), to_string(v)}));
  if (!fn.domain) return list;
  json out = json::object();
  out["support"] = list;
  out["domain"] = write_set(*fn.domain);
  return out;
}

}  // namespace

Interval1D parse_interval(std::string_view text) {
  const std::string s = trim(text);
  const auto comma = s.find(',');
  if (s.size() < 5 || comma == std::string::npos || (s.front() != '[' && s.front() != '(') ||
      (s.back() != ']' && s.back() != ')')) {
    throw ParseError("bad interval '" + s + "'; expected text like \"[0, 1)\"");
  }
  Interval1D out;
  out.lo_open = s.front() == '(';
  out.hi_open = s.back() == ')';
  out.lo = parse_rational(trim(std::string_view(s).substr(1, comma - 1)));
  out.hi = parse_rational(trim(std::string_view(s).substr(comma + 1, s.size() - comma - 2)));
  return out;
}

int Instance::dim() const {
  if (n) return *n;
  if (K) return K->dim();
  if (set) return set->dim();
  throw InstanceError("n", "missing");
}

const Rational& Instance::need(const std::optional<Rational>& v, const char* field) const {
  if (!v) throw InstanceError(field, "missing");
  return *v;
}

const SetRep& Instance::need(const std::optional<SetRep>& v, const char* field) const {
  if (!v) throw InstanceError(field, "missing");
  return *v;
}

const GridFunction& Instance::need(const std::optional<GridFunction>& v, const char* field) const {
  if (!v) throw InstanceError(field, "missing");
  return *v;
}

Lattice Instance::lattice() const {
  if (!basis) return Lattice::integer(dim());
  try {
    return Lattice(*basis);
  } catch (const std::invalid_argument& e) {
    throw InstanceError("basis", e.what());
  }
}

BblInstance Instance::bbl() const {
  const GridFunction& fn = need(f, "f");
  const GridFunction& gn = need(g, "g");
  auto support_set = [](const GridFunction& fn, const char* field) -> SetRep {
    std::vector<Point> pts;
    for (const auto& [x, v] : fn.support) pts.push_back(x);
    if (pts.empty()) throw InstanceError(field, "empty support; give the set explicitly");
    return SetRep::points(pts);
  };
  if (!alpha) throw InstanceError("alpha", "missing");
  BblInstance out{dim(),
                  p.value_or(Rational(1)),
                  lambda.value_or(Rational(1, 2)),
                  *alpha,
                  K ? *K : support_set(fn, "f"),
                  L ? *L : support_set(gn, "g"),
                  fn,
                  gn,
                  h,
                  t.value_or(Rational(1)),
                  s.value_or(Rational(1))};
  return out;
}

Instance parse_instance(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InstanceError("", "JSON syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw InstanceError("", "top level must be an object");
  Instance in;
  for (const auto& [key, v] : j.items()) {
    if (key == "n") {
      if (!v.is_number_integer() || v.get<long>() < 1 || v.get<long>() > 16) {
        throw InstanceError("n", "expected an integer dimension in 1..16");
      }
      in.n = v.get<int>();
    } else if (key == "p") {
      in.p = read_rational(v, key);
      if (*in.p < 1) throw InstanceError(key, "p must be at least 1");
    } else if (key == "lambda") {
      in.lambda = read_rational(v, key);
      if (*in.lambda <= 0 || *in.lambda >= 1) throw InstanceError(key, "lambda must lie in (0,1)");
    } else if (key == "t" || key == "s") {
      const Rational w = read_rational(v, key);
      if (w <= 0) throw InstanceError(key, "weight must be positive");
      (key == "t" ? in.t : in.s) = w;
    } else if (key == "alpha") {
      if (!v.is_string() && !v.is_number_integer()) throw InstanceError(key, "expected rational text, \"inf\" or \"-inf\"");
      try {
        in.alpha = v.is_string() ? parse_exponent(trim(v.get<std::string>())) : Exponent(v.get<long>());
      } catch (const ParseError& e) {
        throw InstanceError(key, e.what());
      }
    } else if (key == "K") {
      in.K = read_set(v, key);
    } else if (key == "L") {
      in.L = read_set(v, key);
    } else if (key == "set") {
      in.set = read_set(v, key);
    } else if (key == "cube") {
      in.cube = read_set(v, key);
    } else if (key == "f") {
      in.f = read_function(v, key);
    } else if (key == "g") {
      in.g = read_function(v, key);
    } else if (key == "h") {
      in.h = read_function(v, key);
    } else if (key == "basis") {
      in.basis = read_points(v, key);
    } else if (key == "comment") {
      // free text
    } else {
      throw InstanceError(key, "unknown field");
    }
  }
  const int n = in.n ? *in.n : (in.K ? in.K->dim() : (in.set ? in.set->dim() : 0));
  auto check_dim = [n](const std::optional<SetRep>& s, const char* field) {
    if (s && n && s->dim() != n) throw InstanceError(field, "dimension " + std::to_string(s->dim()) + " differs from n=" + std::to_string(n));
  };
  check_dim(in.K, "K");
  check_dim(in.L, "L");
  check_dim(in.set, "set");
  check_dim(in.cube, "cube");
  if (in.basis && n && (static_cast<int>(in.basis->size()) != n || in.basis->front().dim() != n)) {
    throw InstanceError("basis", "expected n vectors of dimension n");
  }
  return in;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError("", "cannot open instance file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string dump_instance(const Instance& in) {
  json j = json::object();
  if (in.n) j["n"] = *in.n;
  if (in.p) j["p"] = to_string(*in.p);
  if (in.lambda) j["lambda"] = to_string(*in.lambda);
  if (in.alpha) j["alpha"] = to_string(*in.alpha);
  if (in.t) j["t"] = to_string(*in.t);
  if (in.s) j["s"] = to_string(*in.s);
  if (in.K) j["K"] = write_set(*in.K);
  if (in.L) j["L"] = write_set(*in.L);
  if (in.set) j["set"] = write_set(*in.set);
  if (in.cube) j["cube"] = write_set(*in.cube);
  if (in.f) j["f"] = write_function(*in.f);
  if (in.g) j["g"] = write_function(*in.g);
  if (in.h) j["h"] = write_function(*in.h);
  if (in.basis) {
    json b = json::array();
    for (const auto& v : *in.basis) b.push_back(write_point(v));
    j["basis"] = b;
  }
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Report rows

ReportRow ReportRow::from(const CheckReport& r) { return {r.inequality_id, r.verdict, r.lhs, r.rhs, r.slack, r.runtime_ms}; }

bool ReportRow::operator==(const ReportRow& o) const {
  auto same = [](const CertifiedReal& a, const CertifiedReal& b) {
    return a.lower() == b.lower() && a.upper() == b.upper();
  };
  return inequality_id == o.inequality_id && verdict == o.verdict && same(lhs, o.lhs) && same(rhs, o.rhs) &&
         same(slack, o.slack) && runtime_ms == o.runtime_ms;
}

std::string csv_header() {
  return "inequality_id,verdict,lhs_lo,lhs_hi,rhs_lo,rhs_hi,slack_lo,slack_hi,lhs_approx,rhs_approx,runtime_ms";
}

std::string to_csv(const ReportRow& row) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, row.runtime_ms);
  std::ostringstream os;
  os << row.inequality_id << ',' << to_string(row.verdict) << ',' << to_string(row.lhs.lower()) << ','
     << to_string(row.lhs.upper()) << ',' << to_string(row.rhs.lower()) << ',' << to_string(row.rhs.upper()) << ','
     << to_string(row.slack.lower()) << ',' << to_string(row.slack.upper()) << ','
     << to_decimal(row.lhs.midpoint(), 17) << ',' << to_decimal(row.rhs.midpoint(), 17) << ','
     << std::string(buf, res.ptr);
  return os.str();
}

std::vector<ReportRow> parse_csv(std::string_view text) {
  std::vector<ReportRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#' || line == csv_header()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    const std::string where = "csv line " + std::to_string(line_no);
    if (cells.size() != 11) throw InstanceError(where, "expected 11 columns, got " + std::to_string(cells.size()));
    ReportRow r;
    r.inequality_id = cells[0];
    try {
      r.verdict = parse_verdict(cells[1]);
      r.lhs = CertifiedReal(parse_rational(cells[2]), parse_rational(cells[3]));
      r.rhs = CertifiedReal(parse_rational(cells[4]), parse_rational(cells[5]));
      r.slack = CertifiedReal(parse_rational(cells[6]), parse_rational(cells[7]));
    } catch (const std::exception& e) {
      throw InstanceError(where, e.what());
    }
    const auto res = std::from_chars(cells[10].data(), cells[10].data() + cells[10].size(), r.runtime_ms);
    if (res.ec != std::errc()) throw InstanceError(where, "bad runtime_ms '" + cells[10] + "'");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string describe(const CertifiedReal& x, int digits) {
  if (x.is_exact() && x.lower().get_den() == 1) return to_string(x.lower());
  if (x.is_exact()) return to_decimal(x.lower(), digits) + " = " + to_string(x.lower());
  return "[" + to_decimal(x.lower(), digits) + ", " + to_decimal(x.upper(), digits) + "]";
}

}  // namespace bmlab
