#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "rcs/acceptance.hpp"
#include "rcs/cli.hpp"
#include "rcs/errors.hpp"
#include "rcs/jacobi.hpp"
#include "rcs/orbits.hpp"

namespace rcs::cli {

namespace {

std::vector<double> parse_list(const std::string& s, std::size_t n, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw SchemaError(std::string(flag) + ": cannot parse '" + item + "'");
    out.push_back(v);
  }
  if (out.size() != n) throw SchemaError(std::string(flag) + ": expected " + std::to_string(n) + " values");
  return out;
}

int parse_count(double v, const char* flag) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e6) throw SchemaError(std::string(flag) + ": n must be a positive integer");
  return static_cast<int>(v);
}

double linspace(double lo, double hi, int n, int k) { return n == 1 ? lo : lo + (hi - lo) * k / (n - 1); }

std::string csv_row(double a, double b, cplx m) {
  return fmt(a) + "," + fmt(b) + "," + fmt(m.real()) + "," + fmt(m.imag()) + "\n";
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << text;
  if (!f) throw IoError("write failed: " + path);
}

std::string matrix_text(const MoebiusElement& a) {
  return fmt(a.m11()) + "," + fmt(a.m12()) + "," + fmt(a.m21()) + "," + fmt(a.m22());
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

// Band points for the reflectionless check.
std::vector<double> sample_band_points(const FiniteGapSet& set) {
  std::vector<double> ts;
  for (const Band& b : set.bands()) {
    if (std::isfinite(b.lo) && std::isfinite(b.hi)) {
      for (int k = 1; k <= 3; ++k) ts.push_back(b.lo + 0.25 * k * (b.hi - b.lo));
    } else if (std::isfinite(b.lo)) {
      for (double d : {0.5, 2.0, 10.0}) ts.push_back(b.lo + d);
    } else if (std::isfinite(b.hi)) {
      for (double d : {0.5, 2.0, 10.0}) ts.push_back(b.hi - d);
    } else {
      for (double t : {-1.0, 0.0, 1.0}) ts.push_back(t);
    }
  }
  return ts;
}

struct Check {
  std::string name;
  double threshold;
  bool upper;  // value < threshold passes (else value > threshold)
  std::function<double(const ReflectionlessSystem&)> measure;
};

std::vector<Check> config_checks(const std::optional<double>& t) {
  std::vector<Check> out;
  out.push_back({"herglotz", 0.0, false, [](const ReflectionlessSystem& s) {
                   double m = INFINITY;
                   for (cplx z : metric_grid(kDefaultMetricGrid)) {
                     m = std::min({m, s.m_plus(z).imag(), s.m_minus(z).imag()});
                   }
                   return m;
                 }});
  out.push_back({"reflectionless", 1e-6, true, [t](const ReflectionlessSystem& s) {
                   const std::vector<double> ts = t ? std::vector<double>{*t} : sample_band_points(s.set());
                   double d = 0.0;
                   for (double x : ts) d = std::max(d, reflectionless_defect(s, x));
                   return d;
                 }});
  out.push_back({"oracle", 1e-8, true, [](const ReflectionlessSystem& s) {
                   double d = 0.0;
                   for (cplx z : metric_grid(8)) {
                     const cplx h = h0_eval(s.set(), s.divisor(), z);
                     d = std::max(d, std::abs(h - h0_log_oracle(s.set(), s.divisor(), z)) / std::abs(h));
                   }
                   return d;
                 }});
  out.push_back({"mass", 1e-6, true, [](const ReflectionlessSystem& s) {
                   double total = ac_mass(s.set(), s.divisor()) + s.rep().nu_infinity;
                   for (double w : s.rep().w) total += w;
                   return std::abs(total - s.rep().nu_total) / std::max(1.0, s.rep().nu_total);
                 }});
  out.push_back({"roundtrip", 1e-8, true, [](const ReflectionlessSystem& s) {
                   const Extraction e = extract_parameters(s.m_plus_map(), s.set());
                   if (const auto* p = std::get_if<ExtractedParameters>(&e)) {
                     return system_distance(build_system(s.set(), p->div, p->norm), s);
                   }
                   return static_cast<double>(INFINITY);
                 }});
  out.push_back({"summary", 1e-10, true, [](const ReflectionlessSystem& s) {
                   return system_distance(to_system(config_from_summary(summary_line(s))), s);
                 }});
  return out;
}

int cmd_build(const std::string& config, std::ostream& out) {
  const ReflectionlessSystem sys = to_system(load_config(config));
  out << summary_line(sys) << "\n";
  return kOk;
}

int cmd_eval(const std::string& config, const std::string& grid, const std::string& boundary, const std::string& side,
             const std::string& out_path, std::ostream& out) {
  if (grid.empty() == boundary.empty()) throw SchemaError("eval: give exactly one of --grid and --boundary");
  if (side != "plus" && side != "minus") throw SchemaError("--side: expected plus or minus");
  const ReflectionlessSystem sys = to_system(load_config(config));
  const Side sd = side == "plus" ? Side::Plus : Side::Minus;
  std::string text;
  if (!grid.empty()) {
    const auto g = parse_list(grid, 5, "--grid");
    const int n = parse_count(g[4], "--grid");
    if (!(g[2] > 0.0)) throw SchemaError("--grid: im_lo must be positive");
    text = "re_z,im_z,re_m,im_m\n";
    for (int j = 0; j < n; ++j) {
      const double y = linspace(g[2], g[3], n, j);
      for (int k = 0; k < n; ++k) {
        const double x = linspace(g[0], g[1], n, k);
        text += csv_row(x, y, eval_m(sys, sd, cplx(x, y)));
      }
    }
  } else {
    const auto b = parse_list(boundary, 4, "--boundary");
    const int n = parse_count(b[3], "--boundary");
    if (!(b[2] > 0.0)) throw SchemaError("--boundary: epsilon must be positive");
    text = "t,epsilon,re_m,im_m\n";
    for (int k = 0; k < n; ++k) {
      const double t = linspace(b[0], b[1], n, k);
      text += csv_row(t, b[2], eval_m(sys, sd, cplx(t, b[2])));
    }
  }
  write_output(text, out_path, out);
  return kOk;
}

int cmd_orbit(const std::string& config, const std::string& kind, std::ostream& out) {
  const ReflectionlessSystem sys = to_system(load_config(config));
  try {
    if (kind == "jacobi-data") {
      const JacobiOrbitData d = jacobi_orbit_data(sys);
      out << "transform=" << matrix_text(d.transform) << "\n";
      out << "t=" << fmt(d.t) << " a=" << join(d.coefficients.a) << " b=" << join(d.coefficients.b)
          << " a0=" << fmt(d.a0) << " slope=" << fmt(d.b) << "\n";
      return kOk;
    }
    std::function<OrbitRepresentative(const ReflectionlessSystem&)> rep;
    if (kind == "dirac") {
      rep = dirac_representative;
    } else if (kind == "schroedinger" || kind == "schrodinger") {
      rep = schroedinger_representative;
    } else if (kind == "jacobi") {
      rep = jacobi_representative;
    } else {
      throw SchemaError("--kind: expected dirac, schroedinger, jacobi or jacobi-data");
    }
    const OrbitRepresentative r = rep(sys);
    out << "transform=" << matrix_text(r.transform) << "\n";
    out << summary_line(r.system) << "\n";
    return kOk;
  } catch (const InconsistencyError& e) {
    throw NormalFormError(e.what());
  } catch (const JacobiBreakdownError& e) {
    throw NormalFormError(e.what());
  }
}

int cmd_check(const std::string& config, bool suite, const std::string& only, const std::optional<double>& t,
              const std::vector<std::string>& tols, std::ostream& out) {
  if (suite) {
    bool ok = true;
    for (const CriterionResult& r : run_acceptance()) {
      out << format_result(r) << "\n";
      ok = ok && r.pass;
    }
    return ok ? kOk : kCheckFailed;
  }
  if (config.empty()) throw SchemaError("check: give --config or --suite");
  std::map<std::string, double> overrides;
  for (const std::string& s : tols) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw SchemaError("--tol: expected NAME=VALUE, got " + s);
    overrides[s.substr(0, eq)] = parse_list(s.substr(eq + 1), 1, "--tol")[0];
  }
  const ReflectionlessSystem sys = to_system(load_config(config));
  if (t && sys.set().band_containing(*t) < 0) throw DomainError("--t: not inside a band");
  std::vector<Check> checks = config_checks(t);
  for (const auto& [name, v] : overrides) {
    bool found = false;
    for (Check& c : checks) {
      if (c.name == name) {
        c.threshold = v;
        found = true;
      }
    }
    if (!found) throw SchemaError("--tol: unknown check " + name);
  }
  bool ok = true;
  bool any = false;
  for (const Check& c : checks) {
    if (!only.empty() && c.name != only) continue;
    any = true;
    double v;
    try {
      v = c.measure(sys);
    } catch (const std::exception&) {
      v = NAN;
    }
    const bool pass = c.upper ? v < c.threshold : v > c.threshold;
    ok = ok && pass;
    out << c.name << " value=" << fmt(v) << " threshold=" << (c.upper ? "<" : ">") << fmt(c.threshold) << " "
        << (pass ? "PASS" : "FAIL") << "\n";
  }
  if (!any) throw SchemaError("--check: unknown check " + only);
  return ok ? kOk : kCheckFailed;
}

int cmd_distance(const std::string& a, const std::string& b, std::ostream& out) {
  out << fmt(system_distance(load_system_or_constant(a), load_system_or_constant(b))) << "\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"rcs_cli: build, evaluate, normalize and check finite-gap m-function systems."};
  app.require_subcommand(1);

  std::string config, out_path, grid, boundary, side = "plus", kind, only, dist_a, dist_b;
  bool suite = false;
  std::optional<double> t;
  std::vector<std::string> tols;

  auto* build = app.add_subcommand("build", "validate a config and print its summary record");
  build->add_option("--config", config, "config path")->required();

  auto* eval = app.add_subcommand("eval", "evaluate m on a grid and write CSV");
  eval->add_option("--config", config, "config path")->required();
  eval->add_option("--grid", grid, "re_lo,re_hi,im_lo,im_hi,n");
  eval->add_option("--boundary", boundary, "t_lo,t_hi,eps,n");
  eval->add_option("--side", side, "plus|minus");
  eval->add_option("--out", out_path, "output path (stdout if omitted)");

  auto* orbit = app.add_subcommand("orbit", "normalizing transform and normal form");
  orbit->add_option("--config", config, "config path")->required();
  orbit->add_option("--kind", kind, "dirac|schroedinger|jacobi|jacobi-data")->required();

  auto* check = app.add_subcommand("check", "run checks on a config, or the acceptance suite");
  check->add_option("--config", config, "config path");
  check->add_flag("--suite", suite, "run the acceptance battery");
  check->add_option("--check", only, "run a single check");
  check->add_option("--t", t, "band point for the reflectionless check");
  check->add_option("--tol", tols, "NAME=VALUE threshold override");

  auto* distance = app.add_subcommand("distance", "metric distance between two m_+ maps");
  distance->add_option("a", dist_a, "config path or const:a")->required();
  distance->add_option("b", dist_b, "config path or const:a")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kSchema;
  }

  try {
    if (build->parsed()) return cmd_build(config, out);
    if (eval->parsed()) return cmd_eval(config, grid, boundary, side, out_path, out);
    if (orbit->parsed()) return cmd_orbit(config, kind, out);
    if (check->parsed()) return cmd_check(config, suite, only, t, tols, out);
    if (distance->parsed()) return cmd_distance(dist_a, dist_b, out);
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kSchema;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const CaseMismatchError& e) {
    err << "case mismatch: " << e.what() << "\n";
    return kCaseMismatch;
  } catch (const NormalFormError& e) {
    err << "normal form failure: " << e.what() << "\n";
    return kNormalForm;
  } catch (const ValidationError& e) {
    err << "invalid: " << e.what() << "\n";
    return kMath;
  } catch (const DomainError& e) {
    err << "invalid: " << e.what() << "\n";
    return kMath;
  } catch (const InconsistencyError& e) {
    err << "invalid: " << e.what() << "\n";
    return kMath;
  } catch (const std::exception& e) {
    err << "invalid: " << e.what() << "\n";
    return kMath;
  }
  return kSchema;
}

}  // namespace rcs::cli
