#include "rcs/jacobi.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include <Eigen/Dense>

#include "rcs/laurent.hpp"

namespace rcs {

MomentSequence laurent_moments(const HerglotzMap& f, double radius, int k) {
  if (k < 0 || k > kMaxJacobiK) throw DomainError("laurent_moments: K must lie in [0, 8]");
  const LaurentExpansion e = laurent_at_infinity(f, LowerHalf::Reflection, radius, 2 * k + 1);
  MomentSequence mom;
  for (int j = 0; j <= 2 * k; ++j) mom.m.push_back(-e.coeff(-(j + 1)).real());
  return mom;
}

JacobiWindow moments_to_jacobi(const MomentSequence& mom, int k) {
  if (k < 1 || k > kMaxJacobiK) throw DomainError("moments_to_jacobi: K must lie in [1, 8]");
  if (static_cast<int>(mom.m.size()) < 2 * k + 1) throw DomainError("moments_to_jacobi: need moments m_0..m_2K");
  if (!(mom.m[0] > 0.0)) throw JacobiBreakdownError("moments_to_jacobi: m_0 must be positive", 0, {});
  const int n = k + 1;
  // Upper triangular R with H = R^T R.
  std::vector<std::vector<double>> r(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  auto H = [&mom](int i, int j) { return mom.m[static_cast<std::size_t>(i + j)]; };
  JacobiWindow w;
  for (int i = 0; i < n; ++i) {
    double piv = H(i, i);
    for (int l = 0; l < i; ++l) piv -= r[l][i] * r[l][i];
    if (!(piv > 1e-10 * H(i, i))) {
      // b_i (1-based) is still readable from the previous row, a_i is not.
      JacobiWindow partial = w;
      if (i >= 1 && static_cast<int>(partial.b.size()) < i) {
        const double prev = i >= 2 ? r[i - 2][i - 1] / r[i - 2][i - 2] : 0.0;
        partial.b.push_back(r[i - 1][i] / r[i - 1][i - 1] - prev);
      }
      throw JacobiBreakdownError("moments_to_jacobi: Hankel breakdown at order " + std::to_string(i) +
                                     "; largest safe K = " + std::to_string(std::max(0, i - 1)),
                                 std::max(0, i - 1), partial);
    }
    r[i][i] = std::sqrt(piv);
    for (int j = i + 1; j < n; ++j) {
      double s = H(i, j);
      for (int l = 0; l < i; ++l) s -= r[l][i] * r[l][j];
      r[i][j] = s / r[i][i];
    }
    if (i >= 1) {
      const double prev = i >= 2 ? r[i - 2][i - 1] / r[i - 2][i - 2] : 0.0;
      w.b.push_back(r[i - 1][i] / r[i - 1][i - 1] - prev);
      w.a.push_back(r[i][i] / r[i - 1][i - 1]);
    }
  }
  return w;
}

double hankel_condition(const MomentSequence& mom, int k) {
  if (static_cast<int>(mom.m.size()) < 2 * k + 1) throw DomainError("hankel_condition: not enough moments");
  Eigen::MatrixXd h(k + 1, k + 1);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j) h(i, j) = mom.m[static_cast<std::size_t>(i + j)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double lo = ev.cwiseAbs().minCoeff();
  const double hi = ev.cwiseAbs().maxCoeff();
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

StripResult strip_coefficients(const HerglotzMap& f, int k, double radius) {
  StripResult out{moments_to_jacobi(laurent_moments(f, radius, k), k), {}};
  const double b1 = out.window.b.front();
  const double a1sq = out.window.a.front() * out.window.a.front();
  auto strip = [b1, a1sq](const SpherePoint& p, cplx z) {
    if (p.is_infinite()) return SpherePoint((b1 - z) / a1sq);
    if (p.value() == cplx(0.0, 0.0)) return SpherePoint::infinity();
    return SpherePoint((b1 - z - 1.0 / p.value()) / a1sq);
  };
  HerglotzMap::Eval cont;
  if (f.has_continuation()) cont = [f, strip](cplx z) { return strip(f.continued(z), z); };
  out.stripped = HerglotzMap([f, strip](cplx z) { return strip(f(z), z); }, cont);
  return out;
}

cplx free_jacobi_m(cplx z) { return 0.5 * (std::sqrt(z - 2.0) * std::sqrt(z + 2.0) - z); }

HerglotzMap free_jacobi_map() {
  return HerglotzMap([](cplx z) { return SpherePoint(free_jacobi_m(z)); },
                     [](cplx z) { return SpherePoint(0.5 * (-std::sqrt(z - 2.0) * std::sqrt(z + 2.0) - z)); });
}

cplx window_resolvent(const JacobiWindow& w, cplx z, cplx tail) {
  cplx m = tail;
  for (std::size_t n = w.b.size(); n-- > 0;) m = -1.0 / (z - w.b[n] + w.a[n] * w.a[n] * m);
  return m;
}

cplx window_resolvent(const JacobiWindow& w, cplx z) { return window_resolvent(w, z, free_jacobi_m(z)); }

}  // namespace rcs
