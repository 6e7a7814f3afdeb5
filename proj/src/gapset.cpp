#include "rcs/gapset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rcs/errors.hpp"

namespace rcs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

// 0.5*log(1+x^2) without overflow for large |x|.
double half_log1p_sq(double x) {
  const double ax = std::abs(x);
  if (ax > 1e8) return std::log(ax) + 0.5 / (ax * ax);
  return 0.5 * std::log1p(ax * ax);
}

void require_upper(cplx z, const char* who) {
  if (!(z.imag() > 0.0)) throw DomainError(std::string(who) + ": Im z must be positive");
}

}  // namespace

std::string to_string(SetCase c) {
  switch (c) {
    case SetCase::TwoUnbounded: return "TwoUnbounded";
    case SetCase::OneUnbounded: return "OneUnbounded";
    case SetCase::Compact: return "Compact";
  }
  return "?";
}

bool Gap::unbounded() const { return std::isinf(lo) || std::isinf(hi); }

bool Gap::contains_closed(double mu) const { return mu >= lo && mu <= hi; }

bool Gap::is_endpoint(double mu) const { return mu == lo || mu == hi; }

int FiniteGapSet::bounded_gap_count() const {
  return static_cast<int>(std::count_if(gaps_.begin(), gaps_.end(), [](const Gap& g) { return !g.unbounded(); }));
}

double FiniteGapSet::max_abs_endpoint() const {
  double m = 0.0;
  for (const Band& b : bands_) {
    if (std::isfinite(b.lo)) m = std::max(m, std::abs(b.lo));
    if (std::isfinite(b.hi)) m = std::max(m, std::abs(b.hi));
  }
  return m;
}

int FiniteGapSet::band_containing(double t) const {
  for (std::size_t k = 0; k < bands_.size(); ++k) {
    if (t > bands_[k].lo && t < bands_[k].hi) return static_cast<int>(k);
  }
  return -1;
}

FiniteGapSet classify_set(std::vector<Band> bands) {
  if (bands.empty()) throw ValidationError("classify_set: no bands");
  for (const Band& b : bands) {
    if (std::isnan(b.lo) || std::isnan(b.hi)) throw ValidationError("classify_set: NaN endpoint");
    if (!(b.lo < b.hi)) throw ValidationError("classify_set: band with lo >= hi");
    if (b.lo == kInf || b.hi == -kInf) throw ValidationError("classify_set: band at infinity");
  }
  std::sort(bands.begin(), bands.end(), [](const Band& x, const Band& y) { return x.lo < y.lo; });
  for (std::size_t k = 1; k < bands.size(); ++k) {
    if (!(bands[k - 1].hi < bands[k].lo)) throw ValidationError("classify_set: overlapping or touching bands");
  }
  FiniteGapSet s;
  s.bands_ = bands;
  const bool left_inf = std::isinf(bands.front().lo);
  const bool right_inf = std::isinf(bands.back().hi);
  if (left_inf && right_inf) {
    s.case_ = SetCase::TwoUnbounded;
  } else if (right_inf) {
    s.case_ = SetCase::OneUnbounded;
  } else if (left_inf) {
    throw ValidationError("classify_set: sets bounded only on the right are not supported; reflect t -> -t");
  } else {
    s.case_ = SetCase::Compact;
  }
  if (!left_inf) s.gaps_.push_back({-kInf, bands.front().lo});
  for (std::size_t k = 1; k < bands.size(); ++k) s.gaps_.push_back({bands[k - 1].hi, bands[k].lo});
  if (!right_inf) s.gaps_.push_back({bands.back().hi, kInf});
  return s;
}

bool requires_g(const FiniteGapSet& set, const Divisor& div) {
  if (set.set_case() != SetCase::Compact || div.points.size() != set.gaps().size()) return false;
  return div.points.front().mu == -kInf && div.points.back().mu == kInf;
}

Divisor normalize_divisor(const FiniteGapSet& set, const Divisor& div) {
  const auto& gaps = set.gaps();
  if (div.points.size() != gaps.size()) {
    throw ValidationError("divisor: expected " + std::to_string(gaps.size()) + " gap points, got " +
                          std::to_string(div.points.size()));
  }
  Divisor out = div;
  for (std::size_t j = 0; j < gaps.size(); ++j) {
    GapPoint& p = out.points[j];
    if (std::isnan(p.mu)) throw ValidationError("divisor: mu is NaN at gap " + std::to_string(j));
    if (!gaps[j].contains_closed(p.mu)) {
      throw ValidationError("divisor: mu outside gap " + std::to_string(j));
    }
    if (p.s != 0 && p.s != 1) throw ValidationError("divisor: s must be 0 or 1 at gap " + std::to_string(j));
    if (gaps[j].is_endpoint(p.mu)) p.s = 0;
  }
  if (requires_g(set, out)) {
    if (!out.g) throw ValidationError("divisor: g is required when mu_- = -inf and mu_+ = +inf");
    if (!(*out.g >= -0.5 && *out.g <= 0.5)) throw ValidationError("divisor: g must lie in [-1/2, 1/2]");
  } else if (out.g) {
    throw ValidationError("divisor: g given but not allowed for this set/divisor");
  }
  return out;
}

std::vector<KreinPiece> krein_pieces(const FiniteGapSet& set, const Divisor& div) {
  const auto& gaps = set.gaps();
  if (div.points.size() != gaps.size()) throw ValidationError("krein_pieces: divisor/set mismatch");
  std::vector<KreinPiece> out;
  auto push = [&out](double lo, double hi, double xi) {
    if (lo < hi) out.push_back({lo, hi, xi});
  };
  std::size_t gi = 0;
  double cursor = -kInf;
  // Walk bands and gaps in order.
  for (std::size_t b = 0; b <= set.bands().size(); ++b) {
    if (gi < gaps.size() && gaps[gi].lo == cursor) {
      const Gap& g = gaps[gi];
      const double mu = div.points[gi].mu;
      push(g.lo, mu, 0.0);
      push(mu, g.hi, 1.0);
      cursor = g.hi;
      ++gi;
    }
    if (b < set.bands().size()) {
      const Band& band = set.bands()[b];
      push(band.lo, band.hi, 0.5);
      cursor = band.hi;
    }
  }
  return out;
}

double krein_xi(const FiniteGapSet& set, const Divisor& div, double t) {
  for (const KreinPiece& p : krein_pieces(set, div)) {
    if (t > p.lo && t < p.hi) return p.xi;
  }
  throw DomainError("krein_xi: t is a band endpoint or divisor point");
}

double h0_constant(const FiniteGapSet& set, const Divisor& div) {
  const auto& gaps = set.gaps();
  switch (set.set_case()) {
    case SetCase::TwoUnbounded:
      return 2.0;
    case SetCase::OneUnbounded: {
      const double mu0 = div.points.front().mu;
      return std::isinf(mu0) ? 1.0 : 1.0 + gaps.front().hi - mu0;
    }
    case SetCase::Compact: {
      const double mum = div.points.front().mu;
      const double mup = div.points.back().mu;
      const double left = std::isinf(mum) ? 1.0 : 1.0 + gaps.front().hi - mum;
      const double right = std::isinf(mup) ? 1.0 : 1.0 + mup - gaps.back().lo;
      return left * right;
    }
  }
  return 1.0;
}

H0::H0(const FiniteGapSet& set, const Divisor& div) {
  k_ = h0_constant(set, div);
  const auto pieces = krein_pieces(set, div);
  xi_last_ = pieces.back().xi;
  for (std::size_t k = 1; k < pieces.size(); ++k) {
    const double d = pieces[k].xi - pieces[k - 1].xi;
    if (d != 0.0) jumps_.push_back({pieces[k].lo, d});
  }
}

cplx H0::expression(cplx z) const {
  cplx log_sum(0.0, kPi * xi_last_);
  for (const Jump& j : jumps_) log_sum -= j.delta * std::log(z - j.x);
  return k_ * std::exp(log_sum);
}

cplx H0::operator()(cplx z) const {
  require_upper(z, "h0");
  return expression(z);
}

double H0::band_value(double t) const {
  double log_mod = std::log(k_);
  for (const Jump& j : jumps_) log_mod -= j.delta * std::log(std::abs(t - j.x));
  return std::exp(log_mod);
}

double H0::residue(double mu) const {
  // Pole of weight +1 at mu: h0 = K e^{i pi xi_last} (z-mu)^{-1} P(z) near mu,
  // so -i y h0(mu+iy) -> -K e^{i pi xi_last} P(mu+i0).
  cplx log_sum(0.0, kPi * xi_last_);
  bool found = false;
  for (const Jump& j : jumps_) {
    if (j.x == mu && j.delta == 1.0) {
      found = true;
      continue;
    }
    const double d = mu - j.x;
    const cplx lg(std::log(std::abs(d)), d < 0.0 ? kPi : 0.0);
    log_sum -= j.delta * lg;
  }
  if (!found) return 0.0;
  return (-k_ * std::exp(log_sum)).real();
}

cplx h0_eval(const FiniteGapSet& set, const Divisor& div, cplx z) {
  require_upper(z, "h0_eval");
  return H0(set, div)(z);
}

namespace {

// psi(x) = Log(x - z) - 0.5 log(1+x^2), with the limits at +-inf.
cplx psi(double x, cplx z) {
  if (x == kInf) return {0.0, 0.0};
  if (x == -kInf) return {0.0, -kPi};
  return std::log(x - z) - half_log1p_sq(x);
}

cplx log_sum(const std::vector<KreinPiece>& pieces, cplx z) {
  cplx s(0.0, 0.0);
  for (const KreinPiece& p : pieces) {
    if (p.xi != 0.0) s += p.xi * (psi(p.hi, z) - psi(p.lo, z));
  }
  return s;
}

// Modulus of the product formula at z = i, written factor by factor.
double literal_modulus_at_i(const FiniteGapSet& set, const Divisor& div) {
  const cplx z(0.0, 1.0);
  double m = h0_constant(set, div);
  const auto& gaps = set.gaps();
  for (std::size_t j = 0; j < gaps.size(); ++j) {
    const Gap& g = gaps[j];
    const double mu = div.points[j].mu;
    if (std::isfinite(g.lo)) m *= std::sqrt(std::abs(g.lo - z));
    if (std::isfinite(g.hi)) m *= std::sqrt(std::abs(g.hi - z));
    if (std::isfinite(mu)) m /= std::abs(mu - z);
  }
  return m;
}

}  // namespace

cplx h0_log_oracle(const FiniteGapSet& set, const Divisor& div, cplx z) {
  require_upper(z, "h0_log_oracle");
  const auto pieces = krein_pieces(set, div);
  const double c = literal_modulus_at_i(set, div) / std::abs(std::exp(log_sum(pieces, cplx(0.0, 1.0))));
  return c * std::exp(log_sum(pieces, z));
}

RepresentationData representation_data(const FiniteGapSet& set, const Divisor& div) {
  if (div.points.size() != set.gaps().size()) throw ValidationError("representation_data: divisor/set mismatch");
  const H0 h0(set, div);
  const cplx hi = h0(cplx(0.0, 1.0));
  RepresentationData r;
  r.A = hi.real();
  r.nu_total = hi.imag();
  const auto& gaps = set.gaps();
  for (std::size_t j = 0; j < gaps.size(); ++j) {
    const double mu = div.points[j].mu;
    if (!std::isfinite(mu) || gaps[j].is_endpoint(mu)) {
      r.w.push_back(0.0);
    } else {
      r.w.push_back(std::max(0.0, h0.residue(mu)) / (1.0 + mu * mu));
    }
  }
  r.nu_infinity = requires_g(set, div) ? 1.0 : 0.0;
  return r;
}

double boundary_density(const FiniteGapSet& set, const Divisor& div, double t) {
  if (set.band_containing(t) < 0) throw DomainError("boundary_density: t not inside a band");
  return H0(set, div).band_value(t);
}

double ac_mass(const FiniteGapSet& set, const Divisor& div) {
  using boost::math::quadrature::gauss_kronrod;
  const H0 h0(set, div);
  auto dens = [&h0](double t) { return h0.band_value(t) / (kPi * (1.0 + t * t)); };
  constexpr unsigned kDepth = 20;
  constexpr double kTol = 1e-12;
  double total = 0.0;
  auto right_ray = [&](double a) {
    // t = a + (s/(1-s))^2, dt = 2 s/(1-s)^3 ds
    auto f = [&](double s) {
      if (s >= 1.0) return 0.0;
      const double u = s / (1.0 - s);
      const double t = a + u * u;
      if (t <= a) return 0.0;
      return dens(t) * 2.0 * s / ((1.0 - s) * (1.0 - s) * (1.0 - s));
    };
    return gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, kDepth, kTol);
  };
  auto left_ray = [&](double b) {
    auto f = [&](double s) {
      if (s >= 1.0) return 0.0;
      const double u = s / (1.0 - s);
      const double t = b - u * u;
      if (t >= b) return 0.0;
      return dens(t) * 2.0 * s / ((1.0 - s) * (1.0 - s) * (1.0 - s));
    };
    return gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, kDepth, kTol);
  };
  for (const Band& b : set.bands()) {
    if (std::isfinite(b.lo) && std::isfinite(b.hi)) {
      const double mid = 0.5 * (b.lo + b.hi);
      const double half = 0.5 * (b.hi - b.lo);
      auto f = [&](double th) {
        const double t = mid - half * std::cos(th);
        if (t <= b.lo || t >= b.hi) return 0.0;
        return dens(t) * half * std::sin(th);
      };
      total += gauss_kronrod<double, 61>::integrate(f, 0.0, kPi, kDepth, kTol);
    } else if (std::isfinite(b.lo)) {
      total += right_ray(b.lo);
    } else if (std::isfinite(b.hi)) {
      total += left_ray(b.hi);
    } else {
      total += right_ray(0.0) + left_ray(0.0);
    }
  }
  return total;
}

}  // namespace rcs
