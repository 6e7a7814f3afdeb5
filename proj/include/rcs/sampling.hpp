// sampling.hpp: seeded random sets, divisors, systems and group elements for
// property tests and the acceptance battery.
#pragma once

#include <random>

#include "rcs/systems.hpp"

namespace rcs {

using Rng = std::mt19937_64;

enum class MuMode {
  Mixed,     // mostly interior, sometimes gap endpoints or +-inf
  Interior,  // strictly interior with a margin of 2% of the gap width
};

// Endpoints start in U(-3,-1) with increments U(0.3, 2).
FiniteGapSet random_set(Rng& rng, SetCase c, int bounded_gaps);
FiniteGapSet random_set(Rng& rng, SetCase c);  // 1..3 gaps (Dirac), 0..2 otherwise

Divisor random_divisor(Rng& rng, const FiniteGapSet& set, MuMode mode = MuMode::Mixed);
Normalization random_normalization(Rng& rng);
ReflectionlessSystem random_system(Rng& rng, SetCase c, MuMode mode = MuMode::Mixed);

// Random z in C^+ with Im z in [ymin, ymax] (log-uniform) and |Re z| <= xmax.
cplx random_upper(Rng& rng, double ymin = 1e-2, double ymax = 10.0, double xmax = 5.0);

// Point strictly inside a band, kept at least 1% of the band width (or 0.01 for
// unbounded bands) away from the endpoints.
double random_band_point(Rng& rng, const FiniteGapSet& set);

// kan_compose of a + i c^2, e^{2 i alpha} with |a| <= 1.5, c^2 in [e^-0.7, e^0.7].
MoebiusElement random_moebius(Rng& rng);
MoebiusElement random_g_element(Rng& rng);

}  // namespace rcs
