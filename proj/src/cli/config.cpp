#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "rcs/cli.hpp"
#include "rcs/errors.hpp"

namespace rcs::cli {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

double extended_number(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw SchemaError(path + ": expected a number or \"-inf\"/\"inf\"");
}

double plain_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path + ": expected a number");
  return v.get<double>();
}

json extended_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

const json& field(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key + ": missing");
  return *it;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += parts[i];
  }
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& key) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw SchemaError(key + ": cannot parse '" + s + "'");
  return v;
}

}  // namespace

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

SystemConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("$: not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("$: expected an object");
  SystemConfig c;
  const json& bands = field(doc, "bands", "$");
  if (!bands.is_array() || bands.empty()) throw SchemaError("$.bands: expected a non-empty list");
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const std::string p = "$.bands[" + std::to_string(i) + "]";
    if (!bands[i].is_array() || bands[i].size() != 2) throw SchemaError(p + ": expected [lo, hi]");
    c.bands.push_back({extended_number(bands[i][0], p + "[0]"), extended_number(bands[i][1], p + "[1]")});
  }

  const json& div = field(doc, "divisor", "$");
  if (!div.is_array()) throw SchemaError("$.divisor: expected a list");
  std::map<long, GapPoint> points;
  for (std::size_t i = 0; i < div.size(); ++i) {
    const std::string p = "$.divisor[" + std::to_string(i) + "]";
    if (!div[i].is_object()) throw SchemaError(p + ": expected an object");
    const json& gi = field(div[i], "gap_index", p);
    if (!gi.is_number_integer() || gi.get<long>() < 0) throw SchemaError(p + ".gap_index: expected an index >= 0");
    GapPoint gp;
    gp.mu = extended_number(field(div[i], "mu", p), p + ".mu");
    const json& s = field(div[i], "s", p);
    if (!s.is_number_integer() || (s.get<int>() != 0 && s.get<int>() != 1)) throw SchemaError(p + ".s: expected 0 or 1");
    gp.s = s.get<int>();
    if (!points.emplace(gi.get<long>(), gp).second) throw SchemaError(p + ".gap_index: duplicate");
  }
  long expect = 0;
  for (const auto& [idx, gp] : points) {
    if (idx != expect) throw SchemaError("$.divisor: no entry for gap_index " + std::to_string(expect));
    c.divisor.points.push_back(gp);
    ++expect;
  }

  if (auto it = doc.find("g"); it != doc.end() && !it->is_null()) c.divisor.g = plain_number(*it, "$.g");
  c.norm.A_plus = plain_number(field(doc, "A_plus", "$"), "$.A_plus");
  c.norm.D = plain_number(field(doc, "D", "$"), "$.D");
  return c;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const SystemConfig& c) {
  json doc;
  doc["bands"] = json::array();
  for (const Band& b : c.bands) doc["bands"].push_back({extended_json(b.lo), extended_json(b.hi)});
  doc["divisor"] = json::array();
  for (std::size_t j = 0; j < c.divisor.points.size(); ++j) {
    doc["divisor"].push_back(
        {{"gap_index", j}, {"mu", extended_json(c.divisor.points[j].mu)}, {"s", c.divisor.points[j].s}});
  }
  if (c.divisor.g) doc["g"] = *c.divisor.g;
  doc["A_plus"] = c.norm.A_plus;
  doc["D"] = c.norm.D;
  return doc.dump(2);
}

ReflectionlessSystem to_system(const SystemConfig& c) {
  const FiniteGapSet set = classify_set(c.bands);
  if (c.divisor.points.size() != set.gaps().size()) {
    throw ValidationError("divisor: " + std::to_string(c.divisor.points.size()) + " points for " +
                          std::to_string(set.gaps().size()) + " gaps");
  }
  return build_system(set, c.divisor, c.norm);
}

SystemConfig config_of(const ReflectionlessSystem& sys) {
  return {sys.set().bands(), sys.divisor(), sys.norm()};
}

std::string summary_line(const ReflectionlessSystem& sys) {
  std::vector<std::string> bands, mus, ss, ws;
  for (const Band& b : sys.set().bands()) bands.push_back(fmt(b.lo) + ":" + fmt(b.hi));
  for (const GapPoint& p : sys.divisor().points) {
    mus.push_back(fmt(p.mu));
    ss.push_back(std::to_string(p.s));
  }
  for (double w : sys.rep().w) ws.push_back(fmt(w));
  const cplx mi = sys.m_plus(cplx(0.0, 1.0));
  std::string line = "case=" + to_string(sys.set().set_case());
  line += " N=" + std::to_string(sys.set().bounded_gap_count());
  line += " bands=" + join(bands, ',');
  line += " mu=" + join(mus, ',');
  line += " s=" + join(ss, ',');
  line += " g=" + (sys.divisor().g ? fmt(*sys.divisor().g) : std::string("none"));
  line += " A_plus=" + fmt(sys.norm().A_plus);
  line += " D=" + fmt(sys.norm().D);
  line += " A=" + fmt(sys.rep().A);
  line += " nu_total=" + fmt(sys.rep().nu_total);
  line += " w=" + join(ws, ',');
  line += " nu_inf=" + fmt(sys.rep().nu_infinity);
  line += " m_plus_i=" + fmt(mi.real()) + (mi.imag() < 0 ? "" : "+") + fmt(mi.imag()) + "i";
  return line;
}

SystemConfig config_from_summary(const std::string& line) {
  std::map<std::string, std::string> kv;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw SchemaError("summary: token without '=': " + tok);
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  auto get = [&kv](const char* k) -> const std::string& {
    auto it = kv.find(k);
    if (it == kv.end()) throw SchemaError(std::string("summary.") + k + ": missing");
    return it->second;
  };
  SystemConfig c;
  for (const std::string& b : split(get("bands"), ',')) {
    const auto parts = split(b, ':');
    if (parts.size() != 2) throw SchemaError("summary.bands: expected lo:hi, got " + b);
    c.bands.push_back({parse_double(parts[0], "summary.bands"), parse_double(parts[1], "summary.bands")});
  }
  const std::string& mu_s = get("mu");
  const std::string& s_s = get("s");
  const auto mus = mu_s.empty() ? std::vector<std::string>{} : split(mu_s, ',');
  const auto ss = s_s.empty() ? std::vector<std::string>{} : split(s_s, ',');
  if (mus.size() != ss.size()) throw SchemaError("summary.s: length differs from summary.mu");
  for (std::size_t j = 0; j < mus.size(); ++j) {
    c.divisor.points.push_back({parse_double(mus[j], "summary.mu"), static_cast<int>(parse_double(ss[j], "summary.s"))});
  }
  if (get("g") != "none") c.divisor.g = parse_double(get("g"), "summary.g");
  c.norm.A_plus = parse_double(get("A_plus"), "summary.A_plus");
  c.norm.D = parse_double(get("D"), "summary.D");
  return c;
}

AnySystem load_system_or_constant(const std::string& source) {
  if (source.rfind("const:", 0) == 0) {
    const std::string v = source.substr(6);
    const double a = parse_double(v, "const");
    if (std::isnan(a)) throw SchemaError("const: expected a real number or +-inf");
    return singular_system(std::isinf(a) ? SpherePoint::infinity() : SpherePoint(a));
  }
  return to_system(load_config(source));
}

}  // namespace rcs::cli
