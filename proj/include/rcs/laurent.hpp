// laurent.hpp: Laurent coefficients at infinity by trapezoidal sampling on a
// circle |z| = R.
#pragma once

#include <vector>

#include "rcs/sphere.hpp"

namespace rcs {

// How values on the lower half of the circle are produced.
enum class LowerHalf {
  Continuation,  // analytic continuation across the bands (HerglotzMap::continued)
  Reflection     // Schwarz reflection conj(F(conj z))
};

struct LaurentExpansion {
  double radius = 0.0;
  // coeffs[k] multiplies z^{1-k}: z, 1, 1/z, 1/z^2, ...
  std::vector<cplx> coeffs;
  // max_{2<=n<=8} |c_n| R^n relative to max |F| on the circle.
  double growth_diagnostic = 0.0;

  cplx coeff(int power) const;  // power in {1, 0, -1, ...}
};

inline constexpr int kLaurentSamples = 512;
inline constexpr double kLaurentGrowthTol = 1e-7;

// Coefficients of z^1, z^0, ..., z^{-n_neg}. Throws InconsistencyError if the
// growth diagnostic exceeds kLaurentGrowthTol (a singularity outside the
// circle) and DomainError if F hits infinity on the circle.
LaurentExpansion laurent_at_infinity(const HerglotzMap& f, LowerHalf mode, double radius, int n_neg,
                                     int samples = kLaurentSamples);

}  // namespace rcs
