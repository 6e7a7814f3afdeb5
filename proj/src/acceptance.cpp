#include "rcs/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "rcs/jacobi.hpp"
#include "rcs/orbits.hpp"
#include "rcs/sampling.hpp"

namespace rcs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const SetCase kCases[] = {SetCase::TwoUnbounded, SetCase::OneUnbounded, SetCase::Compact};

// Running maximum of a measured quantity against an upper (or lower) threshold.
struct Bound {
  Bound(std::string l, double t, bool b = true) : label(std::move(l)), threshold(t), below(b) {}

  std::string label;
  double threshold;
  bool below;  // pass iff value < threshold (else value > threshold)
  double worst = std::numeric_limits<double>::quiet_NaN();
  int errors = 0;
  std::string first_error;

  void add(double v) {
    if (std::isnan(v)) {
      ++errors;
      return;
    }
    if (std::isnan(worst)) {
      worst = v;
    } else {
      worst = below ? std::max(worst, v) : std::min(worst, v);
    }
  }
  bool ok() const { return errors == 0 && !std::isnan(worst) && (below ? worst < threshold : worst > threshold); }
  std::string text() const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s=%.3g(%s%.0e)", label.c_str(), worst, below ? "<" : ">", threshold);
    std::string s = buf;
    if (errors) s += "[" + std::to_string(errors) + " errors" + (first_error.empty() ? "" : ": " + first_error) + "]";
    return s;
  }
};

CriterionResult finish(int id, std::string name, const std::vector<Bound>& bounds, const std::string& extra = {}) {
  CriterionResult r{id, std::move(name), true, {}};
  for (const Bound& b : bounds) {
    r.pass = r.pass && b.ok();
    if (!r.detail.empty()) r.detail += " ";
    r.detail += b.text();
  }
  if (!extra.empty()) r.detail += " " + extra;
  return r;
}

// Records exceptions as errors on `b` instead of aborting the battery.
template <class F>
void guarded(Bound& b, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    if (b.first_error.empty()) b.first_error = e.what();
    ++b.errors;
  }
}

ReflectionlessSystem free_jacobi_system() {
  const FiniteGapSet set = classify_set({{-2.0, 2.0}});
  return build_system(set, Divisor{{{-kInf, 0}, {kInf, 0}}, -0.5}, {0.0, 1.0});
}

CriterionResult c1_free_jacobi() {
  Bound a{"max|a_n-1|", 1e-6}, b{"max|b_n|", 1e-6}, t{"|t|", 1e-8};
  const ReflectionlessSystem fj = free_jacobi_system();
  guarded(a, [&] {
    const JacobiWindow w = strip_coefficients(fj.m_plus_map(), 5, 2.6).window;
    for (int n = 0; n < 5; ++n) {
      a.add(std::abs(w.a[n] - 1.0));
      b.add(std::abs(w.b[n]));
    }
  });
  guarded(t, [&] { t.add(std::abs(jacobi_orbit_data(fj).t)); });
  return finish(1, "free-jacobi-anchor", {a, b, t});
}

CriterionResult c2_oracle(Rng& rng) {
  std::vector<Bound> bs;
  for (SetCase c : kCases) {
    Bound b{"rel[" + to_string(c) + "]", 1e-8};
    for (int k = 0; k < 1000; ++k) {
      guarded(b, [&] {
        const FiniteGapSet set = random_set(rng, c);
        const Divisor div = random_divisor(rng, set);
        const cplx z = random_upper(rng, 1e-3, 10.0, 5.0);
        const cplx h = h0_eval(set, div, z);
        b.add(std::abs(h - h0_log_oracle(set, div, z)) / std::abs(h));
      });
    }
    bs.push_back(b);
  }
  return finish(2, "oracle-equivalence", bs);
}

CriterionResult c3_representation(Rng& rng) {
  Bound ident{"|h0(i)-(A+i nu)|", 1e-10}, mass{"mass-assembly", 1e-6};
  for (SetCase c : kCases) {
    for (int k = 0; k < 100; ++k) {
      guarded(mass, [&] {
        const FiniteGapSet set = random_set(rng, c);
        const Divisor div = random_divisor(rng, set);
        const RepresentationData r = representation_data(set, div);
        const cplx h = h0_eval(set, div, cplx(0.0, 1.0));
        ident.add(std::abs(h - cplx(r.A, r.nu_total)));
        double total = ac_mass(set, div) + r.nu_infinity;
        for (double w : r.w) total += w;
        mass.add(std::abs(total - h.imag()) / std::max(1.0, h.imag()));
      });
    }
  }
  return finish(3, "representation-identities", {ident, mass});
}

CriterionResult c4_point_masses(Rng& rng) {
  Bound rel{"residue-vs-limit", 1e-6}, edge{"max w near endpoint", 1e-4};
  for (SetCase c : kCases) {
    for (int k = 0; k < 100; ++k) {
      guarded(rel, [&] {
        const FiniteGapSet set = random_set(rng, c);
        Divisor div = random_divisor(rng, set, MuMode::Interior);
        const RepresentationData r = representation_data(set, div);
        const H0 h0(set, div);
        for (std::size_t j = 0; j < div.points.size(); ++j) {
          const double mu = div.points[j].mu;
          const std::vector<double> ys{1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
          std::vector<double> v;
          for (double y : ys) v.push_back((cplx(0.0, -y) * h0(cplx(mu, y))).real() / (1.0 + mu * mu));
          const double lim = (10.0 * v[4] - v[3]) / 9.0;
          rel.add(std::abs(lim - r.w[j]) / r.w[j]);
        }
        // Move each point to within 1e-8 of a finite gap edge.
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (std::size_t j = 0; j < div.points.size(); ++j) {
          const Gap& g = set.gaps()[j];
          Divisor d = div;
          const double delta = 1e-8 * (1.0 - u(rng));
          const bool use_lo = std::isfinite(g.lo) && (std::isinf(g.hi) || u(rng) < 0.5);
          d.points[j].mu = use_lo ? g.lo + delta : g.hi - delta;
          d = normalize_divisor(set, d);
          edge.add(representation_data(set, d).w[j]);
        }
      });
    }
  }
  return finish(4, "point-masses", {rel, edge});
}

CriterionResult c5_positivity(Rng& rng) {
  Bound pos{"min Im m+-", 0.0, false}, defect{"reflectionless-defect", 1e-6};
  for (SetCase c : kCases) {
    for (int k = 0; k < 100; ++k) {
      guarded(defect, [&] {
        const ReflectionlessSystem s = random_system(rng, c);
        for (int q = 0; q < 10; ++q) {
          const cplx z = random_upper(rng);
          pos.add(std::min(s.m_plus(z).imag(), s.m_minus(z).imag()));
        }
        for (int q = 0; q < 10; ++q) defect.add(reflectionless_defect(s, random_band_point(rng, s.set())));
      });
    }
  }
  return finish(5, "herglotz-positivity-and-defect", {pos, defect});
}

// Largest violation ratio of the round trip tolerances (pass iff < 1).
double round_trip_ratio(const ReflectionlessSystem& s, const Extraction& e) {
  const auto* p = std::get_if<ExtractedParameters>(&e);
  if (!p) return kInf;
  double r = 0.0;
  for (std::size_t j = 0; j < s.divisor().points.size(); ++j) {
    const GapPoint& want = s.divisor().points[j];
    const GapPoint& got = p->div.points[j];
    if (want.s != got.s) return kInf;
    if (std::isinf(want.mu) || std::isinf(got.mu)) {
      if (want.mu != got.mu) return kInf;
      continue;
    }
    const double tol = std::abs(want.mu) > 1e3 ? 1e-6 : 1e-7;
    r = std::max(r, std::abs(want.mu - got.mu) / tol);
  }
  r = std::max(r, std::abs(s.norm().A_plus - p->norm.A_plus) / 1e-8);
  r = std::max(r, std::abs(s.norm().D - p->norm.D) / 1e-8);
  if (s.divisor().g.has_value() != p->div.g.has_value()) return kInf;
  if (s.divisor().g) r = std::max(r, std::abs(*s.divisor().g - *p->div.g) / 1e-6);
  return r;
}

Bound round_trip_bound(Rng& rng) {
  Bound b{"worst-tolerance-ratio", 1.0};
  for (SetCase c : kCases) {
    for (int k = 0; k < 100; ++k) {
      guarded(b, [&] {
        const ReflectionlessSystem s = random_system(rng, c);
        b.add(round_trip_ratio(s, extract_parameters(s.m_plus_map(), s.set())));
      });
    }
  }
  return b;
}

CriterionResult c6_round_trip(Rng& rng) { return finish(6, "round-trip", {round_trip_bound(rng)}); }

std::function<OrbitRepresentative(const ReflectionlessSystem&)> representative_for(SetCase c) {
  switch (c) {
    case SetCase::TwoUnbounded: return dirac_representative;
    case SetCase::OneUnbounded: return schroedinger_representative;
    case SetCase::Compact: return jacobi_representative;
  }
  return dirac_representative;
}

CriterionResult c7_group_action(Rng& rng) {
  Bound comp{"composition", 1e-9}, inv{"representative-invariance", 1e-7}, dirac{"|m+-(inf)-i|", 1e-7},
      schr{"schroedinger(A+,D-1)", 1e-8}, jac{"jacobi-pattern", 1e-7};
  int schr_mu_fail = 0;
  for (SetCase c : kCases) {
    const auto rep = representative_for(c);
    for (int k = 0; k < 5; ++k) {
      guarded(comp, [&] {
        const ReflectionlessSystem s = random_system(rng, c);
        const MoebiusElement a = random_moebius(rng);
        const MoebiusElement b = random_moebius(rng);
        comp.add(system_distance(act(a, act(b, AnySystem(s))), act(a * b, s)));
      });
    }
    for (int k = 0; k < 2; ++k) {
      guarded(inv, [&] {
        const ReflectionlessSystem s = random_system(rng, c);
        const OrbitRepresentative base = rep(s);
        for (int q = 0; q < 25; ++q) {
          // Dirac orbits are G orbits; the other normal forms are PSL(2,R) invariants.
          const MoebiusElement a = c == SetCase::TwoUnbounded ? random_g_element(rng) : random_moebius(rng);
          const auto moved = act(a, s);
          const OrbitRepresentative r = rep(std::get<ReflectionlessSystem>(moved));
          inv.add(system_distance(r.system, base.system));
          const ReflectionlessSystem& n = r.system;
          if (c == SetCase::TwoUnbounded) {
            const cplx i(0.0, 1.0);
            dirac.add(std::abs(system_laurent(n, Side::Plus, 1).coeff(0) - i));
            dirac.add(std::abs(system_laurent(n, Side::Minus, 1).coeff(0) - i));
          } else if (c == SetCase::OneUnbounded) {
            if (!(n.divisor().points.front().mu == -kInf)) ++schr_mu_fail;
            schr.add(std::max(std::abs(n.norm().A_plus), std::abs(n.norm().D - 1.0)));
          } else {
            const LaurentExpansion e = system_laurent(n, Side::Plus, 2);
            jac.add(std::max({std::abs(e.coeff(1)), std::abs(e.coeff(0)), std::abs(e.coeff(-1) + 1.0),
                              std::abs(e.coeff(-2))}));
          }
        }
      });
    }
  }
  schr.errors += schr_mu_fail;
  return finish(7, "group-action", {comp, inv, dirac, schr, jac},
                "mu0=-inf failures=" + std::to_string(schr_mu_fail));
}

ReflectionlessSystem reference_system(SetCase c, Normalization norm) {
  switch (c) {
    case SetCase::TwoUnbounded:
      return build_system(classify_set({{-kInf, -1.0}, {1.0, kInf}}), Divisor{{{0.0, 1}}, {}}, norm);
    case SetCase::OneUnbounded:
      return build_system(classify_set({{0.0, kInf}}), Divisor{{{-1.0, 1}}, {}}, norm);
    case SetCase::Compact:
      return build_system(classify_set({{-2.0, 2.0}}), Divisor{{{-3.0, 1}, {kInf, 0}}, {}}, norm);
  }
  throw std::logic_error("reference_system");
}

Bound singular_limit_bound() {
  Bound b{"convergence-violations", 0.5};
  b.add(0.0);
  const double a = 0.5;
  for (SetCase c : kCases) {
    guarded(b, [&] {
      double prev_a = kInf, prev_inf = kInf;
      for (int n = 10; n <= 200; n += 10) {
        const double da = system_distance(reference_system(c, {a, 1.0 / n}), singular_system(SpherePoint(a)));
        const double di = system_distance(reference_system(c, {static_cast<double>(n), 1.0}),
                                          singular_system(SpherePoint::infinity()));
        if (!(da < prev_a) || !(di < prev_inf)) b.add(1.0);
        prev_a = da;
        prev_inf = di;
      }
      if (!(prev_a < 0.05) || !(prev_inf < 0.05)) b.add(1.0);
    });
  }
  return b;
}

CriterionResult c8_singular_limit() { return finish(8, "singular-limit", {singular_limit_bound()}); }

CriterionResult c9_twisted_shift() {
  Bound e{"free-identity", 1e-10}, p{"perturbed-a0", 1e-3, false};
  guarded(e, [&] { e.add(twisted_shift_check(free_jacobi_map(), 1.0, 0.0, 1.0)); });
  guarded(p, [&] { p.add(twisted_shift_check(free_jacobi_map(), 1.1, 0.0, 1.0)); });
  return finish(9, "twisted-shift", {e, p});
}

CriterionResult c10_topology(bool c6, bool c7, bool c8) {
  // The point mu = d, where s is irrelevant, glues the two copies of the gap.
  Bound glue{"gluing-violations", 0.5};
  glue.add(0.0);
  double last = kInf;
  guarded(glue, [&] {
    const FiniteGapSet set = classify_set({{-kInf, -1.0}, {1.0, kInf}});
    double prev = kInf;
    for (double delta = 1e-1; delta >= 1e-8; delta /= 10.0) {
      const auto s0 = build_system(set, Divisor{{{1.0 - delta, 0}}, {}}, {0.0, 1.0});
      const auto s1 = build_system(set, Divisor{{{1.0 - delta, 1}}, {}}, {0.0, 1.0});
      const double d = system_distance(s0, s1);
      if (!(d < prev)) glue.add(1.0);
      prev = d;
    }
    last = prev;
    if (!(last < 1e-3)) glue.add(1.0);
  });
  char buf[96];
  std::snprintf(buf, sizeof buf, "d(s=0,s=1)@1e-8=%.3g criteria6-8=%s", last, (c6 && c7 && c8) ? "pass" : "fail");
  CriterionResult r = finish(10, "topology-via-charts", {glue}, buf);
  r.pass = r.pass && c6 && c7 && c8;
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CriterionResult> out;
  out.push_back(c1_free_jacobi());
  out.push_back(c2_oracle(rng));
  out.push_back(c3_representation(rng));
  out.push_back(c4_point_masses(rng));
  out.push_back(c5_positivity(rng));
  out.push_back(c6_round_trip(rng));
  out.push_back(c7_group_action(rng));
  out.push_back(c8_singular_limit());
  out.push_back(c9_twisted_shift());
  out.push_back(c10_topology(out[5].pass, out[6].pass, out[7].pass));
  return out;
}

std::string format_result(const CriterionResult& r) {
  return std::string(r.pass ? "PASS" : "FAIL") + " " + std::to_string(r.id) + " " + r.name + ": " + r.detail;
}

}  // namespace rcs
