#include "rcs/sampling.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace rcs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

double log_uniform(Rng& rng, double a, double b) { return std::exp(uniform(rng, std::log(a), std::log(b))); }

}  // namespace

FiniteGapSet random_set(Rng& rng, SetCase c, int bounded_gaps) {
  int count = 2 * bounded_gaps;
  if (c == SetCase::OneUnbounded) count += 1;
  if (c == SetCase::Compact) count += 2;
  std::vector<double> e;
  double x = uniform(rng, -3.0, -1.0);
  for (int k = 0; k < count; ++k) {
    e.push_back(x);
    x += uniform(rng, 0.3, 2.0);
  }
  std::vector<Band> bands;
  std::size_t k = 0;
  double lo = -kInf;
  if (c != SetCase::TwoUnbounded) lo = e[k++];
  while (k < e.size()) {
    bands.push_back({lo, e[k++]});
    lo = k < e.size() ? e[k++] : kInf;
  }
  if (c != SetCase::Compact) bands.push_back({lo, kInf});
  return classify_set(bands);
}

FiniteGapSet random_set(Rng& rng, SetCase c) {
  const int lo = c == SetCase::TwoUnbounded ? 1 : 0;
  const int hi = c == SetCase::TwoUnbounded ? 3 : 2;
  return random_set(rng, c, std::uniform_int_distribution<int>(lo, hi)(rng));
}

Divisor random_divisor(Rng& rng, const FiniteGapSet& set, MuMode mode) {
  Divisor div;
  for (const Gap& g : set.gaps()) {
    GapPoint p;
    p.s = std::uniform_int_distribution<int>(0, 1)(rng);
    const double kind = uniform(rng, 0.0, 1.0);
    const bool interior = mode == MuMode::Interior || kind < 0.7;
    if (interior) {
      if (!g.unbounded()) {
        p.mu = g.lo + (0.02 + 0.96 * uniform(rng, 0.0, 1.0)) * (g.hi - g.lo);
      } else if (std::isinf(g.lo)) {
        p.mu = g.hi - log_uniform(rng, 0.02, 1e4);
      } else {
        p.mu = g.lo + log_uniform(rng, 0.02, 1e4);
      }
    } else {
      p.mu = kind < 0.85 ? g.lo : g.hi;
    }
    div.points.push_back(p);
  }
  if (requires_g(set, div)) div.g = uniform(rng, -0.5, 0.5);
  return normalize_divisor(set, div);
}

Normalization random_normalization(Rng& rng) { return {uniform(rng, -2.0, 2.0), log_uniform(rng, 0.2, 5.0)}; }

ReflectionlessSystem random_system(Rng& rng, SetCase c, MuMode mode) {
  const FiniteGapSet set = random_set(rng, c);
  const Divisor div = random_divisor(rng, set, mode);
  return build_system(set, div, random_normalization(rng));
}

cplx random_upper(Rng& rng, double ymin, double ymax, double xmax) {
  return {uniform(rng, -xmax, xmax), log_uniform(rng, ymin, ymax)};
}

double random_band_point(Rng& rng, const FiniteGapSet& set) {
  const auto& bands = set.bands();
  const Band& b = bands[std::uniform_int_distribution<std::size_t>(0, bands.size() - 1)(rng)];
  if (std::isfinite(b.lo) && std::isfinite(b.hi)) return b.lo + (0.01 + 0.98 * uniform(rng, 0.0, 1.0)) * (b.hi - b.lo);
  if (std::isfinite(b.lo)) return b.lo + log_uniform(rng, 0.01, 50.0);
  if (std::isfinite(b.hi)) return b.hi - log_uniform(rng, 0.01, 50.0);
  return uniform(rng, -50.0, 50.0);
}

MoebiusElement random_moebius(Rng& rng) {
  const double a = uniform(rng, -1.5, 1.5);
  const double c2 = std::exp(uniform(rng, -0.7, 0.7));
  const double alpha = uniform(rng, 0.0, std::numbers::pi);
  return kan_compose({cplx(a, c2), std::polar(1.0, 2.0 * alpha)});
}

MoebiusElement random_g_element(Rng& rng) {
  const double c = std::exp(0.5 * uniform(rng, -1.0, 1.0));
  const double a = uniform(rng, -2.0, 2.0);
  return {c, a / c, 0.0, 1.0 / c};
}

}  // namespace rcs
