#include "rcs/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rcs/errors.hpp"

namespace rcs {

cplx LaurentExpansion::coeff(int power) const {
  const int k = 1 - power;
  if (k < 0 || k >= static_cast<int>(coeffs.size())) throw DomainError("LaurentExpansion: power not computed");
  return coeffs[static_cast<std::size_t>(k)];
}

LaurentExpansion laurent_at_infinity(const HerglotzMap& f, LowerHalf mode, double radius, int n_neg, int samples) {
  if (!(radius > 0.0)) throw DomainError("laurent_at_infinity: radius must be positive");
  if (samples < 64) throw DomainError("laurent_at_infinity: too few samples");
  const int m = samples;
  std::vector<cplx> vals(static_cast<std::size_t>(m));
  std::vector<double> theta(static_cast<std::size_t>(m));
  double scale = 0.0;
  for (int k = 0; k < m; ++k) {
    const double th = 2.0 * std::numbers::pi * (k + 0.5) / m;
    const cplx u = std::polar(1.0, th);
    const cplx z = radius * u;
    SpherePoint p;
    if (z.imag() > 0.0) {
      p = f(z);
    } else if (mode == LowerHalf::Reflection) {
      p = f.schwarz_reflected(z);
    } else {
      p = f.continued(z);
    }
    if (p.is_infinite()) throw DomainError("laurent_at_infinity: infinite sample on the circle");
    vals[static_cast<std::size_t>(k)] = p.value();
    theta[static_cast<std::size_t>(k)] = th;
    scale = std::max(scale, std::abs(p.value()));
  }
  // r_n = (1/M) sum F(R u_k) u_k^{-n} = c_n R^n
  auto moment = [&](int n) {
    cplx s(0.0, 0.0);
    for (int k = 0; k < m; ++k) {
      s += vals[static_cast<std::size_t>(k)] * std::polar(1.0, -n * theta[static_cast<std::size_t>(k)]);
    }
    return s / static_cast<double>(m);
  };
  LaurentExpansion out;
  out.radius = radius;
  double growth = 0.0;
  for (int n = 2; n <= 8; ++n) growth = std::max(growth, std::abs(moment(n)));
  out.growth_diagnostic = scale > 0.0 ? growth / scale : growth;
  if (out.growth_diagnostic > kLaurentGrowthTol) {
    throw InconsistencyError("laurent_at_infinity: coefficient growth diagnostic failed (radius too small?)");
  }
  for (int n = 1; n >= -n_neg; --n) out.coeffs.push_back(moment(n) / std::pow(radius, n));
  return out;
}

}  // namespace rcs
