#include "rcs/orbits.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <vector>

#include "rcs/errors.hpp"

namespace rcs {

namespace {

SpherePoint negate(const SpherePoint& p) { return p.is_infinite() ? p : SpherePoint(-p.value()); }

const ReflectionlessSystem& as_reflectionless(const AnySystem& s, const char* who) {
  if (const auto* r = std::get_if<ReflectionlessSystem>(&s)) return *r;
  throw InconsistencyError(std::string(who) + ": action produced a singular system");
}

void require_case(const ReflectionlessSystem& sys, SetCase c, const char* who) {
  if (sys.set().set_case() != c) {
    throw CaseMismatchError(std::string(who) + ": needs a " + to_string(c) + " set, got " +
                            to_string(sys.set().set_case()));
  }
}

LaurentExpansion plus_expansion(const ReflectionlessSystem& sys, int n_neg) {
  return system_laurent(sys, Side::Plus, n_neg);
}

LaurentExpansion minus_expansion(const ReflectionlessSystem& sys, int n_neg) {
  return system_laurent(sys, Side::Minus, n_neg);
}

constexpr double kTinySlope = 1e-9;

// Real parts of the Laurent coefficients (z^1, z^0, z^-1, ...).
std::vector<double> real_series(const LaurentExpansion& e) {
  std::vector<double> out;
  for (const cplx& c : e.coeffs) out.push_back(c.real());
  return out;
}

// Series of -1/(F - F_0) when F has no linear term; two orders of depth are lost.
std::vector<double> invert_after_translation(const std::vector<double>& f) {
  const double lead = f[2];
  if (lead == 0.0) throw NormalFormError("normal form: 1/z coefficient vanishes");
  // 1/(1 + q_1/z + q_2/z^2 + ...) = sum r_n z^-n
  const std::size_t n = f.size() - 2;
  std::vector<double> r(n, 0.0);
  r[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t j = 1; j <= k; ++j) r[k] -= f[2 + j] / lead * r[k - j];
  }
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = -r[k] / lead;
  return out;
}

}  // namespace

MoebiusElement GElement::matrix() const {
  if (!(c > 0.0)) throw ValidationError("GElement: c must be positive");
  return {c, a / c, 0.0, 1.0 / c};
}

GElement g_element_for(double scale, double shift) {
  if (!(scale > 0.0)) throw ValidationError("g_element_for: scale must be positive");
  return {std::sqrt(scale), shift};
}

SingularSystem act(const MoebiusElement& a, const SingularSystem& sys) { return SingularSystem{a.apply(sys.a)}; }

AnySystem act(const MoebiusElement& a, const ReflectionlessSystem& sys) {
  if (a == MoebiusElement::identity()) return sys;
  const HerglotzMap mp = sys.m_plus_map().transformed(a);
  const HerglotzMap base = sys.m_minus_map();
  const HerglotzMap mm([base, a](cplx z) { return negate(a.apply(negate(base(z)))); },
                       [base, a](cplx z) { return negate(a.apply(negate(base.continued(z)))); });
  return system_from_maps(mp, mm, sys.set());
}

AnySystem act(const MoebiusElement& a, const AnySystem& sys) {
  return std::visit([&a](const auto& s) -> AnySystem { return act(a, s); }, sys);
}

OrbitRepresentative dirac_representative(const ReflectionlessSystem& sys) {
  require_case(sys, SetCase::TwoUnbounded, "dirac_representative");
  const cplx w = plus_expansion(sys, 1).coeff(0);
  if (!(w.imag() > 0.0)) throw InconsistencyError("dirac_representative: m_+(inf) not in C^+");
  const double k = 1.0 / w.imag();
  const MoebiusElement t = g_element_for(k, -k * w.real()).matrix();
  const ReflectionlessSystem out = as_reflectionless(act(t, sys), "dirac_representative");
  const cplx wp = plus_expansion(out, 1).coeff(0);
  const cplx wm = minus_expansion(out, 1).coeff(0);
  const cplx i(0.0, 1.0);
  if (std::abs(wp - i) > 1e-7 || std::abs(wm - i) > 1e-7) {
    throw NormalFormError("dirac_representative: m_+-(inf) = i not reached");
  }
  return {t, out, RepresentativeKind::Dirac};
}

double schroedinger_m_at_minus_infinity(const ReflectionlessSystem& sys) {
  require_case(sys, SetCase::OneUnbounded, "schroedinger_m_at_minus_infinity");
  if (std::isinf(sys.divisor().points.front().mu)) return std::numeric_limits<double>::infinity();
  // h0 -> 0 along the unbounded gap and (1+mu z)/(mu-z) -> -mu.
  double b = -0.5 * sys.rep().A;
  for (std::size_t j = 0; j < sys.divisor().points.size(); ++j) {
    const double w = sys.rep().w[j];
    if (w != 0.0) b -= (sys.divisor().points[j].s - 0.5) * w * sys.divisor().points[j].mu;
  }
  return sys.norm().A_plus + sys.norm().D * b;
}

OrbitRepresentative schroedinger_representative(const ReflectionlessSystem& sys) {
  require_case(sys, SetCase::OneUnbounded, "schroedinger_representative");
  MoebiusElement b1;
  ReflectionlessSystem mid = sys;
  if (std::isfinite(sys.divisor().points.front().mu)) {
    const double w = schroedinger_m_at_minus_infinity(sys);
    b1 = MoebiusElement(0.0, -1.0, 1.0, -w);
    mid = as_reflectionless(act(b1, sys), "schroedinger_representative");
  }
  const double k = 1.0 / mid.norm().D;
  const MoebiusElement t = g_element_for(k, -k * mid.norm().A_plus).matrix() * b1;
  const ReflectionlessSystem out = as_reflectionless(act(t, sys), "schroedinger_representative");
  if (!std::isinf(out.divisor().points.front().mu) || std::abs(out.norm().A_plus) > 1e-8 ||
      std::abs(out.norm().D - 1.0) > 1e-8) {
    throw NormalFormError("schroedinger_representative: (mu_0, A_+, D) = (-inf, 0, 1) not reached");
  }
  return {t, out, RepresentativeKind::Schroedinger};
}

OrbitRepresentative jacobi_representative(const ReflectionlessSystem& sys) {
  require_case(sys, SetCase::Compact, "jacobi_representative");
  // The intermediate steps work on the series itself, so only the final
  // system is re-extracted.
  MoebiusElement t;
  std::vector<double> f = real_series(system_laurent(sys, Side::Plus, 6));
  if (f[0] < kTinySlope) {
    t = MoebiusElement::inversion() * MoebiusElement::translation(-f[1]);
    f = invert_after_translation(f);
  }
  const double b = f[0];
  if (!(b > 0.0)) throw NormalFormError("jacobi_representative: no linear term after inversion");
  t = MoebiusElement::dilation(std::sqrt(b)) * MoebiusElement::inversion() * MoebiusElement::translation(-f[1]) * t;
  const ReflectionlessSystem out = as_reflectionless(act(t, sys), "jacobi_representative");
  const LaurentExpansion e = plus_expansion(out, 2);
  if (std::abs(e.coeff(1)) > 1e-7 || std::abs(e.coeff(0)) > 1e-7 || std::abs(e.coeff(-1) + 1.0) > 1e-7 ||
      std::abs(e.coeff(-2)) > 1e-7) {
    throw NormalFormError("jacobi_representative: -1/z + O(1/z^3) pattern not reached");
  }
  return {t, out, RepresentativeKind::Jacobi};
}

JacobiOrbitData jacobi_orbit_data(const ReflectionlessSystem& sys, int k) {
  require_case(sys, SetCase::Compact, "jacobi_orbit_data");
  MoebiusElement t;
  std::vector<double> f = real_series(system_laurent(sys, Side::Plus, 5));
  if (f[0] < kTinySlope) {
    t = MoebiusElement::inversion() * MoebiusElement::translation(-f[1]);
    f = invert_after_translation(f);
  }
  const double c1 = f[2];
  if (!(c1 < 0.0)) throw NormalFormError("jacobi_orbit_data: 1/z coefficient is not negative");
  const double scale = -1.0 / c1;
  t = g_element_for(scale, -scale * f[1]).matrix() * t;
  ReflectionlessSystem h1 = as_reflectionless(act(t, sys), "jacobi_orbit_data");
  const double b = plus_expansion(h1, 1).coeff(1).real();
  const LaurentExpansion em = minus_expansion(h1, 1);
  const double slope_minus = em.coeff(1).real();
  const double len = b + slope_minus;
  if (!(len > 0.0)) throw NormalFormError("jacobi_orbit_data: non-positive total slope");

  JacobiOrbitData out;
  out.a0 = 1.0 / std::sqrt(len);
  out.b = b;
  out.t = b / len;
  HerglotzMap m0;
  if (std::abs(1.0 - out.t) < 1e-9) {
    // t = 1 is orbit-equivalent to t = 0: move the initial interval to the other side.
    const double kk = 1.0 / std::sqrt(b);
    const MoebiusElement a1(0.0, -1.0 / kk, kk, kk * em.coeff(0).real());
    t = a1 * t;
    h1 = as_reflectionless(act(t, sys), "jacobi_orbit_data");
    out.t = 0.0;
    out.b = 0.0;
    m0 = h1.m_plus_map();
  } else {
    if (out.t < 1e-9) out.t = 0.0;
    const auto self = std::make_shared<const ReflectionlessSystem>(h1);
    m0 = HerglotzMap([self, b](cplx z) { return SpherePoint(self->m_plus(z) - b * z); },
                     [self, b](cplx z) { return SpherePoint(self->m_plus_continued(z) - b * z); });
  }
  if (!(out.t >= 0.0 && out.t < 1.0)) throw NormalFormError("jacobi_orbit_data: t outside [0,1)");
  double r = h1.set().max_abs_endpoint();
  for (const GapPoint& p : h1.divisor().points) {
    if (std::isfinite(p.mu)) r = std::max(r, std::abs(p.mu));
  }
  out.coefficients = strip_coefficients(m0, k, 1.25 * r + 0.1).window;
  out.transform = t;
  return out;
}

MoebiusElement twisted_shift_matrix(double a0, double b0) {
  if (!(a0 > 0.0)) throw ValidationError("twisted_shift_matrix: a0 must be positive");
  return {0.0, -1.0 / a0, a0, -b0 / a0};
}

MoebiusElement a_t_family(double t, double a, double c) {
  const double s = 1.0 + t * (c - 1.0);
  if (!(s > 0.0)) throw ValidationError("a_t_family: 1 + t(c-1) must be positive");
  return MoebiusElement(s, 0.0, 0.0, 1.0 / s) * MoebiusElement(1.0, 0.0, t * a, 1.0) *
         MoebiusElement::rotation(std::numbers::pi * t / 2.0);
}

double twisted_shift_check(const HerglotzMap& m, double a0, double b0, double length, double radius) {
  const MoebiusElement a = twisted_shift_matrix(a0, b0);
  const HerglotzMap w([m, a, length](cplx z) {
    const SpherePoint p = m(z);
    if (p.is_infinite()) return a.apply(p);
    return a.apply(SpherePoint(length * z + p.value()));
  });
  const MomentSequence mom = laurent_moments(w, radius, 1);
  const double m0 = mom.m[0];
  const double b1 = mom.m[1] / m0;
  const double a1sq = mom.m[2] / m0 - b1 * b1;
  double dev = std::abs(m0 - 1.0);
  if (!(a1sq > 0.0)) return std::max(dev, 2.0);
  for (cplx z : metric_grid(kDefaultMetricGrid)) {
    const SpherePoint wz = w(z);
    const SpherePoint w1 = wz.is_infinite() ? SpherePoint((b1 - z) / a1sq)
                                            : SpherePoint((b1 - z - 1.0 / wz.value()) / a1sq);
    dev = std::max(dev, chordal_distance(w1, m(z)));
  }
  return dev;
}

}  // namespace rcs
