// sphere.hpp: Riemann sphere points, PSL(2,R) elements and the metric on
// (generalized) Herglotz functions.
//
// Points of C^inf are stored either as a finite complex number or as an
// explicit point at infinity. A real 2x2 matrix [[m11,m12],[m21,m22]] acts by
//
//     p  ->  (m11 p + m12) / (m21 p + m22)
//
// and the chordal metric is
//
//     delta(p,q)   = 2|p-q| / sqrt((1+|p|^2)(1+|q|^2)),
//     delta(p,inf) = 2 / sqrt(1+|p|^2).

#pragma once

#include <array>
#include <complex>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace rcs {

using cplx = std::complex<double>;

class SpherePoint {
 public:
  SpherePoint() = default;
  SpherePoint(cplx v);  // NOLINT(google-explicit-constructor): finite points are plain values
  SpherePoint(double v) : SpherePoint(cplx(v, 0.0)) {}

  static SpherePoint infinity() {
    SpherePoint p;
    p.inf_ = true;
    return p;
  }

  bool is_infinite() const { return inf_; }
  // Throws DomainError at infinity.
  cplx value() const;

  friend bool operator==(const SpherePoint& a, const SpherePoint& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
  }

 private:
  cplx v_{0.0, 0.0};
  bool inf_ = false;
};

std::ostream& operator<<(std::ostream& os, const SpherePoint& p);

double chordal_distance(const SpherePoint& p, const SpherePoint& q);

/// Element of PSL(2,R).
///
/// Construction rescales the matrix to determinant one and fixes the sign so
/// that the first nonzero entry in row-major order is positive; two matrices
/// that differ by a global sign therefore compare equal.
class MoebiusElement {
 public:
  MoebiusElement() : m_{1.0, 0.0, 0.0, 1.0} {}
  // Requires a positive determinant; throws ValidationError otherwise.
  MoebiusElement(double m11, double m12, double m21, double m22);

  static MoebiusElement identity() { return {}; }
  static MoebiusElement rotation(double alpha);
  static MoebiusElement translation(double a);
  // [[0,-1],[1,0]] : w -> -1/w
  static MoebiusElement inversion();
  // diag(c, 1/c) : w -> c^2 w
  static MoebiusElement dilation(double c);

  double m11() const { return m_[0]; }
  double m12() const { return m_[1]; }
  double m21() const { return m_[2]; }
  double m22() const { return m_[3]; }
  const std::array<double, 4>& entries() const { return m_; }

  double determinant() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

  SpherePoint apply(const SpherePoint& p) const;
  SpherePoint operator()(const SpherePoint& p) const { return apply(p); }

  MoebiusElement inverse() const;

  friend MoebiusElement operator*(const MoebiusElement& a, const MoebiusElement& b);
  friend bool operator==(const MoebiusElement& a, const MoebiusElement& b) { return a.m_ == b.m_; }

 private:
  std::array<double, 4> m_;
};

inline MoebiusElement mobius_compose(const MoebiusElement& a, const MoebiusElement& b) { return a * b; }
inline MoebiusElement mobius_invert(const MoebiusElement& a) { return a.inverse(); }
inline SpherePoint mobius_apply(const MoebiusElement& a, const SpherePoint& p) { return a.apply(p); }

// Entrywise comparison modulo sign.
bool approx_equal(const MoebiusElement& a, const MoebiusElement& b, double tol);

std::ostream& operator<<(std::ostream& os, const MoebiusElement& a);

// KAN coordinates of a group element: `point` = A·i = a + i c^2 in C^+ and
// `angle` = e^{2 i alpha}, where A = [[c, a/c],[0,1/c]] · rotation(alpha).
struct KanCoordinates {
  cplx point{0.0, 1.0};
  cplx angle{1.0, 0.0};
};

KanCoordinates kan_decompose(const MoebiusElement& a);
MoebiusElement kan_compose(const KanCoordinates& k);

/// A map C^+ -> closure of C^+ on the Riemann sphere.
///
/// Besides its values on the upper half plane a map may carry a
/// `continuation` into the lower half plane: the analytic continuation across
/// the band interiors of the spectrum. Maps built from reflectionless systems
/// always carry one; it is what lets m_- be reconstructed from m_+ and the
/// Laurent expansion at infinity be sampled in the Dirac case.
class HerglotzMap {
 public:
  using Eval = std::function<SpherePoint(cplx)>;

  HerglotzMap() = default;
  explicit HerglotzMap(Eval upper, Eval continuation = {});

  static HerglotzMap constant(const SpherePoint& value);

  // Im z > 0 required (DomainError otherwise).
  SpherePoint operator()(cplx z) const;
  // Im z < 0 required; throws DomainError if no continuation is attached.
  SpherePoint continued(cplx z) const;
  // F(z) for Im z > 0, conj(F(conj z)) for Im z < 0.
  SpherePoint schwarz_reflected(cplx z) const;

  bool has_continuation() const { return static_cast<bool>(cont_); }
  const std::optional<SpherePoint>& constant_value() const { return constant_; }
  bool is_constant() const { return constant_.has_value(); }

  // z -> A(F(z)), continuation transformed alongside.
  HerglotzMap transformed(const MoebiusElement& a) const;

 private:
  Eval upper_;
  Eval cont_;
  std::optional<SpherePoint> constant_;
};

inline constexpr int kDefaultMetricGrid = 24;

// Polar sample points of the closed disk |z - 2i| <= 1: the centre plus
// grid_n radii k/grid_n (k = 1..grid_n) times grid_n equally spaced angles.
// The grid for n is contained in the grid for any multiple of n.
std::vector<cplx> metric_grid(int grid_n);

// max over metric_grid(grid_n) of delta(F(z), G(z)); grid_n >= 8.
double herglotz_metric(const HerglotzMap& f, const HerglotzMap& g, int grid_n = kDefaultMetricGrid);

}  // namespace rcs
