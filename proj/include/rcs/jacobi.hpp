// jacobi.hpp: half line Jacobi coefficients from m functions.
//
//   (Jy)_n = a_n y_{n+1} + a_{n-1} y_{n-1} + b_n y_n,   n >= 1
//   m(z) = -1/(z - b_1 + a_1^2 m_1(z)),   -m(z) = sum_k m_k z^{-k-1}
#pragma once

#include <vector>

#include "rcs/errors.hpp"
#include "rcs/sphere.hpp"

namespace rcs {

struct JacobiWindow {
  std::vector<double> a;  // a_1..a_K, all > 0
  std::vector<double> b;  // b_1..b_K
};

struct MomentSequence {
  std::vector<double> m;  // m_0..m_{2K}
};

inline constexpr int kMaxJacobiK = 8;

// Hankel breakdown. `safe_k` complete (a_n, b_n) pairs are reliable; `partial`
// holds them plus any further b_n that could still be read off.
class JacobiBreakdownError : public DomainError {
 public:
  JacobiBreakdownError(const std::string& what, int safe_k, JacobiWindow partial)
      : DomainError(what), safe_k_(safe_k), partial_(std::move(partial)) {}
  int safe_k() const { return safe_k_; }
  const JacobiWindow& partial() const { return partial_; }

 private:
  int safe_k_;
  JacobiWindow partial_;
};

// Moments from the Laurent data of F on |z| = R (Schwarz reflection below the
// axis). Needs all singularities inside |z| < R; K <= kMaxJacobiK.
MomentSequence laurent_moments(const HerglotzMap& f, double radius, int k);

// Cholesky of the (K+1)x(K+1) Hankel matrix. Throws JacobiBreakdownError.
JacobiWindow moments_to_jacobi(const MomentSequence& mom, int k);

// 2-norm condition number of (m_{i+j})_{0<=i,j<=k}.
double hankel_condition(const MomentSequence& mom, int k);

struct StripResult {
  JacobiWindow window;
  HerglotzMap stripped;  // (b_1 - z - 1/F(z)) / a_1^2
};

StripResult strip_coefficients(const HerglotzMap& f, int k, double radius);

// m of a_n = 1, b_n = 0: (sqrt(z-2) sqrt(z+2) - z)/2.
cplx free_jacobi_m(cplx z);
HerglotzMap free_jacobi_map();

// Continued fraction through the window, closed by `tail` (free tail by default).
cplx window_resolvent(const JacobiWindow& w, cplx z);
cplx window_resolvent(const JacobiWindow& w, cplx z, cplx tail);

}  // namespace rcs
