#include "rcs/systems.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include "rcs/errors.hpp"

namespace rcs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const cplx kI(0.0, 1.0);

cplx finite(const SpherePoint& p, const char* who) {
  if (p.is_infinite()) throw InconsistencyError(std::string(who) + ": unexpected infinite value");
  return p.value();
}

}  // namespace

ReflectionlessSystem::ReflectionlessSystem(FiniteGapSet set, Divisor div, Normalization norm)
    : set_(std::move(set)), div_(std::move(div)), norm_(norm), rep_(representation_data(set_, div_)), h0_(set_, div_) {}

ReflectionlessSystem build_system(const FiniteGapSet& set, const Divisor& div, const Normalization& norm) {
  if (!(norm.D > 0.0) || !std::isfinite(norm.D)) throw ValidationError("normalization: D must be positive");
  if (!std::isfinite(norm.A_plus)) throw ValidationError("normalization: A_plus must be finite");
  return ReflectionlessSystem(set, normalize_divisor(set, div), norm);
}

cplx ReflectionlessSystem::bracket(cplx z, cplx h0z) const {
  cplx b = 0.5 * (h0z - rep_.A);
  if (div_.g) b += *div_.g * z;
  for (std::size_t j = 0; j < div_.points.size(); ++j) {
    const double w = rep_.w[j];
    if (w == 0.0) continue;
    const double mu = div_.points[j].mu;
    b += (div_.points[j].s - 0.5) * w * (1.0 + mu * z) / (mu - z);
  }
  return b;
}

cplx ReflectionlessSystem::m_plus(cplx z) const { return norm_.A_plus + norm_.D * bracket(z, h0_(z)); }

cplx ReflectionlessSystem::m_minus(cplx z) const { return norm_.D * h0_(z) - m_plus(z); }

cplx ReflectionlessSystem::m_plus_continued(cplx z) const {
  if (!(z.imag() < 0.0)) throw DomainError("m_plus_continued: requires Im z < 0");
  // h0 is purely imaginary on the bands, so -conj h0(conj z) continues it across them.
  const cplx h = -std::conj(h0_(std::conj(z)));
  return norm_.A_plus + norm_.D * bracket(z, h);
}

cplx ReflectionlessSystem::m_minus_continued(cplx z) const {
  if (!(z.imag() < 0.0)) throw DomainError("m_minus_continued: requires Im z < 0");
  return -std::conj(m_plus(std::conj(z)));
}

HerglotzMap ReflectionlessSystem::m_plus_map() const {
  auto self = std::make_shared<const ReflectionlessSystem>(*this);
  return HerglotzMap([self](cplx z) { return SpherePoint(self->m_plus(z)); },
                     [self](cplx z) { return SpherePoint(self->m_plus_continued(z)); });
}

HerglotzMap ReflectionlessSystem::m_minus_map() const {
  auto self = std::make_shared<const ReflectionlessSystem>(*this);
  return HerglotzMap([self](cplx z) { return SpherePoint(self->m_minus(z)); },
                     [self](cplx z) { return SpherePoint(self->m_minus_continued(z)); });
}

double ReflectionlessSystem::nu_plus_total() const {
  double nu = 0.5 * ac_mass(set_, div_);
  for (std::size_t j = 0; j < div_.points.size(); ++j) {
    if (div_.points[j].s == 1) nu += rep_.w[j];
  }
  if (div_.g) nu += (0.5 + *div_.g) * rep_.nu_infinity;
  return nu;
}

cplx eval_m(const ReflectionlessSystem& sys, Side side, cplx z) {
  if (!(z.imag() > 0.0)) throw DomainError("eval_m: requires Im z > 0");
  return side == Side::Plus ? sys.m_plus(z) : sys.m_minus(z);
}

SingularSystem singular_system(const SpherePoint& a) {
  if (!a.is_infinite() && a.value().imag() != 0.0) throw ValidationError("singular_system: value must be real or infinite");
  return SingularSystem{a};
}

HerglotzMap SingularSystem::m_plus_map() const { return HerglotzMap::constant(a); }

HerglotzMap SingularSystem::m_minus_map() const {
  if (a.is_infinite()) return HerglotzMap::constant(a);
  return HerglotzMap::constant(SpherePoint(-a.value()));
}

HerglotzMap m_plus_map(const AnySystem& s) {
  return std::visit([](const auto& x) { return x.m_plus_map(); }, s);
}

HerglotzMap m_minus_map(const AnySystem& s) {
  return std::visit([](const auto& x) { return x.m_minus_map(); }, s);
}

double laurent_radius(const FiniteGapSet& set, const Divisor* div) {
  double r = 3.0 * (1.0 + set.max_abs_endpoint());
  if (div) {
    for (const GapPoint& p : div->points) {
      if (std::isfinite(p.mu)) r = std::max(r, 2.0 * (1.0 + std::abs(p.mu)));
    }
  }
  return r;
}

double laurent_radius(const ReflectionlessSystem& sys, Side side) {
  double r = 3.0 * (1.0 + sys.set().max_abs_endpoint());
  const int pole_s = side == Side::Plus ? 1 : 0;
  for (std::size_t j = 0; j < sys.divisor().points.size(); ++j) {
    const GapPoint& p = sys.divisor().points[j];
    if (std::isfinite(p.mu) && p.s == pole_s && sys.rep().w[j] != 0.0) r = std::max(r, 2.0 * (1.0 + std::abs(p.mu)));
  }
  return r;
}

LaurentExpansion laurent_expansion(const HerglotzMap& f, const FiniteGapSet& set, double radius, int n_neg) {
  switch (set.set_case()) {
    case SetCase::TwoUnbounded:
      return laurent_at_infinity(f, LowerHalf::Continuation, radius, n_neg);
    case SetCase::Compact:
      return laurent_at_infinity(f, LowerHalf::Reflection, radius, n_neg);
    case SetCase::OneUnbounded:
      break;
  }
  throw DomainError("laurent_expansion: infinity is a branch point for sets with one unbounded band");
}

namespace {

AsymptoticData to_asymptotic(const LaurentExpansion& e) {
  return {e.coeff(1).real(), e.coeff(0).real(), e.coeff(-1).real()};
}

}  // namespace

AsymptoticData asymptotics(const HerglotzMap& f, const FiniteGapSet& set, std::optional<double> radius) {
  if (f.is_constant()) {
    const SpherePoint& v = *f.constant_value();
    if (v.is_infinite()) throw DomainError("asymptotics: constant infinity");
    return {0.0, v.value().real(), 0.0};
  }
  if (radius) return to_asymptotic(laurent_expansion(f, set, *radius, 2));
  double r = laurent_radius(set);
  for (int k = 0;; ++k) {
    try {
      return to_asymptotic(laurent_expansion(f, set, r, 2));
    } catch (const InconsistencyError&) {
      if (k >= 6) throw;
      r *= 2.0;
    }
  }
}

AsymptoticData asymptotics(const ReflectionlessSystem& sys, Side side) {
  const HerglotzMap f = side == Side::Plus ? sys.m_plus_map() : sys.m_minus_map();
  return asymptotics(f, sys.set(), laurent_radius(sys, side));
}

LaurentExpansion system_laurent(const ReflectionlessSystem& sys, Side side, int n_neg) {
  const FiniteGapSet& set = sys.set();
  if (set.set_case() != SetCase::Compact) {
    const HerglotzMap f = side == Side::Plus ? sys.m_plus_map() : sys.m_minus_map();
    return laurent_expansion(f, set, laurent_radius(sys, side), n_neg);
  }
  // Poles of m_+ sit at the s_j = 1 points, those of m_- at s_j = 0, each with
  // singular part D w_j (1 + mu_j z)/(mu_j - z). The rest is sampled.
  const Divisor& div = sys.divisor();
  const double d = sys.norm().D;
  const int pole_s = side == Side::Plus ? 1 : 0;
  std::vector<std::pair<double, double>> poles;  // (mu_j, D w_j)
  for (std::size_t j = 0; j < div.points.size(); ++j) {
    const GapPoint& p = div.points[j];
    if (std::isfinite(p.mu) && p.s == pole_s && sys.rep().w[j] != 0.0) poles.emplace_back(p.mu, d * sys.rep().w[j]);
  }
  const auto self = std::make_shared<const ReflectionlessSystem>(sys);
  const HerglotzMap rest([self, side, poles](cplx z) {
    cplx v = side == Side::Plus ? self->m_plus(z) : self->m_minus(z);
    for (const auto& [mu, c] : poles) v -= c * (1.0 + mu * z) / (mu - z);
    return SpherePoint(v);
  });
  const double radius = 3.0 * (1.0 + set.max_abs_endpoint());
  LaurentExpansion out = laurent_at_infinity(rest, LowerHalf::Reflection, radius, n_neg);
  for (const auto& [mu, c] : poles) {
    // (1 + mu z)/(mu - z) = -mu - (1 + mu^2) sum_{m>=1} mu^{m-1} z^{-m}
    out.coeffs[1] -= c * mu;
    double term = 1.0 + mu * mu;
    for (std::size_t m = 1; m + 1 < out.coeffs.size(); ++m, term *= mu) out.coeffs[m + 1] -= c * term;
  }
  out.radius = std::max(radius, laurent_radius(sys, side));
  return out;
}

namespace {

constexpr double kFarOut = 1e6;

const cplx kProbe[] = {{0.0, 1.0}, {0.0, 2.0}, {1.0, 1.0}, {-1.0, 0.5}, {3.0, 3.0}};

// Sign-change search for the zero of Re(-1/h) on a closed gap.
double locate_mu(const Gap& gap, const std::function<cplx(cplx)>& h) {
  const bool left_inf = std::isinf(gap.lo);
  const bool right_inf = std::isinf(gap.hi);
  auto to_u = [](double t) { return t / (1.0 + std::abs(t)); };
  auto to_t = [](double u) { return u / (1.0 - std::abs(u)); };
  const bool compact_coord = left_inf || right_inf;
  double lo = compact_coord ? (left_inf ? -1.0 : to_u(gap.lo)) : gap.lo;
  double hi = compact_coord ? (right_inf ? 1.0 : to_u(gap.hi)) : gap.hi;
  // Near a finite edge h behaves like a square root, so the offset stays well
  // below the distance to it.
  auto edge_dist = [&](double t) {
    double d = kInf;
    if (!left_inf) d = std::min(d, std::abs(t - gap.lo));
    if (!right_inf) d = std::min(d, std::abs(gap.hi - t));
    return d;
  };
  auto g = [&](double t) {
    const double eps = std::max(std::min(1e-10 * (1.0 + std::abs(t)), 1e-3 * edge_dist(t)),
                                std::numeric_limits<double>::min());
    try {
      return (-1.0 / h(cplx(t, eps))).real();
    } catch (const InconsistencyError&) {
      return 0.0;  // h hit infinity
    }
  };
  bool lo_moved = false;
  bool hi_moved = false;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double t = compact_coord ? to_t(mid) : mid;
    if (g(t) > 0.0) {
      hi = mid;
      hi_moved = true;
    } else {
      lo = mid;
      lo_moved = true;
    }
  }
  if (!lo_moved) return gap.lo;
  if (!hi_moved) return gap.hi;
  const double um = 0.5 * (lo + hi);
  double mu = compact_coord ? to_t(um) : um;
  if (std::isfinite(gap.lo) && std::abs(mu - gap.lo) <= 1e-14 * (1.0 + std::abs(gap.lo))) mu = gap.lo;
  if (std::isfinite(gap.hi) && std::abs(mu - gap.hi) <= 1e-14 * (1.0 + std::abs(gap.hi))) mu = gap.hi;
  return mu;
}

struct Fit {
  ExtractedParameters params;
  double miss;  // worst relative probe error of the rebuilt m_+
};

Fit fit_parameters(const FiniteGapSet& set, const std::vector<double>& mus, const std::function<cplx(cplx)>& fv,
                   const std::function<cplx(cplx)>& h) {
  Divisor div;
  for (double mu : mus) div.points.push_back({mu, 0});
  const H0 h0(set, div);
  const cplx h0i = h0(kI);
  const cplx dq = h(kI) / h0i;
  if (!(dq.real() > 0.0) || std::abs(dq.imag()) > 1e-6 * std::abs(dq)) {
    throw InconsistencyError("extract_parameters: h(i)/h0(i) is not a positive real");
  }
  Normalization norm;
  norm.D = dq.real();
  const RepresentationData rep = representation_data(set, div);
  // Very close to an edge the residue test can be inconclusive; both choices
  // of s are then fitted.
  std::vector<std::size_t> unsure;
  for (std::size_t j = 0; j < div.points.size(); ++j) {
    const double mu = div.points[j].mu;
    const double w = rep.w[j];
    if (!std::isfinite(mu) || w == 0.0) continue;
    const Gap& gap = set.gaps()[j];
    const double total = norm.D * w * (1.0 + mu * mu);
    if (!(total > 1e-300)) continue;
    const double dist = std::min(mu - gap.lo, gap.hi - mu);
    const double eps = 1e-6 * std::min(1.0 + std::abs(mu), dist);
    const double rho = (cplx(0.0, -eps) * fv(cplx(mu, eps))).real();
    if (rho > 0.5 * total) {
      div.points[j].s = 1;
    } else if (rho >= 1e-3 * total) {
      if (dist > 1e-8 * (1.0 + std::abs(mu)) || unsure.size() >= 4) {
        throw InconsistencyError("extract_parameters: point mass at gap " + std::to_string(j) + " is split");
      }
      div.points[j].s = rho > 0.25 * total ? 1 : 0;
      unsure.push_back(j);
    }
  }
  const cplx fi = fv(kI);
  norm.A_plus = fi.real();
  auto finish = [&](Divisor d) -> Fit {
    if (requires_g(set, d)) {
      cplx b = 0.5 * (h0i - rep.A);
      for (std::size_t j = 0; j < d.points.size(); ++j) b += (d.points[j].s - 0.5) * rep.w[j] * kI;
      double g = (fi - norm.A_plus - norm.D * b).imag() / norm.D;
      if (g < -0.5 && g > -0.5 - 1e-6) g = -0.5;
      if (g > 0.5 && g < 0.5 + 1e-6) g = 0.5;
      d.g = g;
    }
    double miss = 0.0;
    try {
      const ReflectionlessSystem rebuilt = build_system(set, d, norm);
      for (cplx z : kProbe) {
        const cplx v = fv(z);
        miss = std::max(miss, std::abs(v - rebuilt.m_plus(z)) / std::max(1.0, std::abs(v)));
      }
    } catch (const ValidationError& e) {
      throw InconsistencyError(std::string("extract_parameters: recovered parameters invalid: ") + e.what());
    }
    return {ExtractedParameters{d, norm}, miss};
  };
  std::optional<Fit> best;
  for (unsigned mask = 0; mask < (1u << unsure.size()); ++mask) {
    Divisor d = div;
    for (std::size_t k = 0; k < unsure.size(); ++k) {
      if (mask & (1u << k)) d.points[unsure[k]].s = 1 - d.points[unsure[k]].s;
    }
    Fit f = finish(std::move(d));
    if (!best || f.miss < best->miss) best = std::move(f);
  }
  return *best;
}

Extraction extract_impl(const HerglotzMap& f, const std::function<cplx(cplx)>& m_minus, const FiniteGapSet& set) {
  if (f.is_constant()) {
    const SpherePoint v = *f.constant_value();
    return singular_system(v.is_infinite() ? v : SpherePoint(v.value().real()));
  }
  {
    const SpherePoint p0 = f(kProbe[0]);
    bool constant = true;
    for (cplx z : kProbe) constant = constant && chordal_distance(f(z), p0) < 1e-13;
    // A constant in C^+ (the whole line with no gaps) is not singular.
    const bool real_value = p0.is_infinite() || std::abs(p0.value().imag()) <= 1e-12 * (1.0 + std::abs(p0.value()));
    if (constant && real_value) return singular_system(p0.is_infinite() ? p0 : SpherePoint(p0.value().real()));
  }
  auto fv = [&f](cplx z) { return finite(f(z), "extract_parameters"); };
  auto h = [&](cplx z) { return fv(z) + m_minus(z); };

  std::vector<double> raw;
  for (const Gap& gap : set.gaps()) raw.push_back(locate_mu(gap, h));
  // Far out in an unbounded gap the sign test can be fooled by cancellation
  // in m_+, so both readings (finite and infinite) are fitted there.
  std::vector<std::size_t> far;
  for (std::size_t j = 0; j < raw.size(); ++j) {
    if (std::abs(raw[j]) > kFarOut && set.gaps()[j].unbounded()) far.push_back(j);
  }
  std::vector<Fit> fits;
  std::vector<int> n_inf;
  std::string first_error;
  for (unsigned mask = 0; mask < (1u << far.size()); ++mask) {
    std::vector<double> mus = raw;
    for (std::size_t k = 0; k < far.size(); ++k) {
      if (mask & (1u << k)) mus[far[k]] = raw[far[k]] < 0.0 ? -kInf : kInf;
    }
    try {
      fits.push_back(fit_parameters(set, mus, fv, h));
      n_inf.push_back(std::popcount(mask));
    } catch (const InconsistencyError& e) {
      if (first_error.empty()) first_error = e.what();
    }
  }
  // Poles that far out barely move the probes: prefer the infinite reading
  // unless a finite one fits clearly better.
  std::optional<Fit> best;
  if (!fits.empty()) {
    double min_miss = kInf;
    for (const Fit& f : fits) min_miss = std::min(min_miss, f.miss);
    const double accept = std::max(1e-9, 10.0 * min_miss);
    int most_inf = -1;
    for (std::size_t k = 0; k < fits.size(); ++k) {
      if (fits[k].miss <= accept && n_inf[k] > most_inf) {
        most_inf = n_inf[k];
        best = fits[k];
      }
    }
  }
  if (!best) throw InconsistencyError(first_error);
  if (best->miss > 1e-6) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "extract_parameters: rebuilt m_+ misses the input by %.3g (relative)", best->miss);
    throw InconsistencyError(buf);
  }
  return best->params;
}

}  // namespace

Extraction extract_parameters(const HerglotzMap& f, const FiniteGapSet& set) {
  if (f.is_constant()) return extract_impl(f, {}, set);
  if (!f.has_continuation()) throw DomainError("extract_parameters: map carries no band continuation");
  auto m_minus = [&f](cplx z) { return -std::conj(finite(f.continued(std::conj(z)), "extract_parameters")); };
  return extract_impl(f, m_minus, set);
}

Extraction extract_parameters(const HerglotzMap& f, const HerglotzMap& m_minus, const FiniteGapSet& set) {
  auto mm = [&m_minus](cplx z) { return finite(m_minus(z), "extract_parameters"); };
  return extract_impl(f, mm, set);
}

AnySystem system_from_maps(const HerglotzMap& f, const HerglotzMap& m_minus, const FiniteGapSet& set) {
  const Extraction e = extract_parameters(f, m_minus, set);
  if (const auto* s = std::get_if<SingularSystem>(&e)) return *s;
  const auto& p = std::get<ExtractedParameters>(e);
  return build_system(set, p.div, p.norm);
}

double reflectionless_defect(const ReflectionlessSystem& sys, double t, const std::vector<double>& eps_ladder) {
  if (sys.set().band_containing(t) < 0) throw DomainError("reflectionless_defect: t not inside a band");
  if (eps_ladder.empty()) throw DomainError("reflectionless_defect: empty ladder");
  std::vector<double> v;
  for (double e : eps_ladder) {
    const cplx z(t, e);
    v.push_back((sys.m_plus(z) + sys.m_minus(z)).real());
  }
  if (v.size() == 1) return std::abs(v[0]);
  const std::size_t n = v.size();
  const double r = eps_ladder[n - 2] / eps_ladder[n - 1];
  return std::abs((r * v[n - 1] - v[n - 2]) / (r - 1.0));
}

double system_distance(const AnySystem& a, const AnySystem& b, int grid_n) {
  return herglotz_metric(m_plus_map(a), m_plus_map(b), grid_n);
}

}  // namespace rcs
