#include "rcs/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "rcs/errors.hpp"

namespace rcs {

SpherePoint::SpherePoint(cplx v) : v_(v) {
  if (std::isnan(v.real()) || std::isnan(v.imag())) {
    throw DomainError("SpherePoint: NaN component");
  }
  if (std::isinf(v.real()) || std::isinf(v.imag())) {
    inf_ = true;
    v_ = {0.0, 0.0};
  }
}

cplx SpherePoint::value() const {
  if (inf_) throw DomainError("SpherePoint: value() at infinity");
  return v_;
}

std::ostream& operator<<(std::ostream& os, const SpherePoint& p) {
  if (p.is_infinite()) return os << "inf";
  return os << p.value();
}

double chordal_distance(const SpherePoint& p, const SpherePoint& q) {
  if (p.is_infinite() && q.is_infinite()) return 0.0;
  if (p.is_infinite()) return 2.0 / std::hypot(1.0, std::abs(q.value()));
  if (q.is_infinite()) return 2.0 / std::hypot(1.0, std::abs(p.value()));
  const cplx a = p.value();
  const cplx b = q.value();
  const double d = 2.0 * std::abs(a - b) / (std::hypot(1.0, std::abs(a)) * std::hypot(1.0, std::abs(b)));
  return std::min(d, 2.0);
}

MoebiusElement::MoebiusElement(double m11, double m12, double m21, double m22) {
  const double det = m11 * m22 - m12 * m21;
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw ValidationError("MoebiusElement: determinant must be positive and finite");
  }
  const double s = 1.0 / std::sqrt(det);
  m_ = {m11 * s, m12 * s, m21 * s, m22 * s};
  for (double e : m_) {
    if (e != 0.0) {
      if (e < 0.0) {
        for (double& x : m_) x = -x;
      }
      break;
    }
  }
  for (double& x : m_) {
    if (x == 0.0) x = 0.0;  // drop negative zeros
  }
}

MoebiusElement MoebiusElement::rotation(double alpha) {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  return {c, -s, s, c};
}

MoebiusElement MoebiusElement::translation(double a) { return {1.0, a, 0.0, 1.0}; }

MoebiusElement MoebiusElement::inversion() { return {0.0, -1.0, 1.0, 0.0}; }

MoebiusElement MoebiusElement::dilation(double c) {
  if (!(c > 0.0)) throw ValidationError("MoebiusElement::dilation: c must be positive");
  return {c, 0.0, 0.0, 1.0 / c};
}

SpherePoint MoebiusElement::apply(const SpherePoint& p) const {
  if (p.is_infinite()) {
    if (m_[2] == 0.0) return SpherePoint::infinity();
    return SpherePoint(cplx(m_[0] / m_[2], 0.0));
  }
  const cplx z = p.value();
  const cplx num = m_[0] * z + m_[1];
  const cplx den = m_[2] * z + m_[3];
  if (den == cplx(0.0, 0.0)) return SpherePoint::infinity();
  const cplx w = num / den;
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return SpherePoint::infinity();
  return SpherePoint(w);
}

MoebiusElement MoebiusElement::inverse() const { return {m_[3], -m_[1], -m_[2], m_[0]}; }

MoebiusElement operator*(const MoebiusElement& a, const MoebiusElement& b) {
  const auto& x = a.m_;
  const auto& y = b.m_;
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
          x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

bool approx_equal(const MoebiusElement& a, const MoebiusElement& b, double tol) {
  double plus = 0.0;
  double minus = 0.0;
  for (int k = 0; k < 4; ++k) {
    plus = std::max(plus, std::abs(a.entries()[k] - b.entries()[k]));
    minus = std::max(minus, std::abs(a.entries()[k] + b.entries()[k]));
  }
  return std::min(plus, minus) <= tol;
}

std::ostream& operator<<(std::ostream& os, const MoebiusElement& a) {
  return os << "[[" << a.m11() << ", " << a.m12() << "], [" << a.m21() << ", " << a.m22() << "]]";
}

KanCoordinates kan_decompose(const MoebiusElement& a) {
  // A·i lies in C^+ for every real matrix of positive determinant.
  const cplx w = a.apply(SpherePoint(cplx(0.0, 1.0))).value();
  const double x = w.real();
  const double c = std::sqrt(w.imag());
  // rotation part N^{-1} A with N = [[c, x/c],[0, 1/c]]
  const double cos_a = (a.m11() - x * a.m21()) / c;
  const double sin_a = c * a.m21();
  cplx angle = cplx(cos_a, sin_a) * cplx(cos_a, sin_a);
  angle /= std::abs(angle);
  return {w, angle};
}

MoebiusElement kan_compose(const KanCoordinates& k) {
  if (!(k.point.imag() > 0.0)) throw ValidationError("kan_compose: point must lie in C^+");
  const double c = std::sqrt(k.point.imag());
  const double a = k.point.real();
  const double alpha = 0.5 * std::arg(k.angle);
  return MoebiusElement(c, a / c, 0.0, 1.0 / c) * MoebiusElement::rotation(alpha);
}

HerglotzMap::HerglotzMap(Eval upper, Eval continuation)
    : upper_(std::move(upper)), cont_(std::move(continuation)) {}

HerglotzMap HerglotzMap::constant(const SpherePoint& value) {
  HerglotzMap f([value](cplx) { return value; }, [value](cplx) { return value; });
  f.constant_ = value;
  return f;
}

SpherePoint HerglotzMap::operator()(cplx z) const {
  if (!(z.imag() > 0.0)) throw DomainError("HerglotzMap: evaluation requires Im z > 0");
  return upper_(z);
}

SpherePoint HerglotzMap::continued(cplx z) const {
  if (!(z.imag() < 0.0)) throw DomainError("HerglotzMap::continued: requires Im z < 0");
  if (!cont_) throw DomainError("HerglotzMap::continued: no continuation attached");
  return cont_(z);
}

SpherePoint HerglotzMap::schwarz_reflected(cplx z) const {
  if (z.imag() > 0.0) return (*this)(z);
  if (z.imag() < 0.0) {
    const SpherePoint p = (*this)(std::conj(z));
    if (p.is_infinite()) return p;
    return SpherePoint(std::conj(p.value()));
  }
  throw DomainError("HerglotzMap::schwarz_reflected: z on the real axis");
}

HerglotzMap HerglotzMap::transformed(const MoebiusElement& a) const {
  if (constant_) return constant(a.apply(*constant_));
  Eval up = [f = upper_, a](cplx z) { return a.apply(f(z)); };
  Eval cont;
  if (cont_) cont = [g = cont_, a](cplx z) { return a.apply(g(z)); };
  return HerglotzMap(std::move(up), std::move(cont));
}

std::vector<cplx> metric_grid(int grid_n) {
  std::vector<cplx> pts;
  pts.reserve(static_cast<std::size_t>(grid_n) * grid_n + 1);
  const cplx centre(0.0, 2.0);
  pts.push_back(centre);
  for (int k = 1; k <= grid_n; ++k) {
    const double r = static_cast<double>(k) / grid_n;
    for (int j = 0; j < grid_n; ++j) {
      const double th = 2.0 * std::numbers::pi * j / grid_n;
      pts.push_back(centre + std::polar(r, th));
    }
  }
  return pts;
}

double herglotz_metric(const HerglotzMap& f, const HerglotzMap& g, int grid_n) {
  if (grid_n < 8) throw ValidationError("herglotz_metric: grid_n must be at least 8");
  if (f.is_constant() && g.is_constant()) return chordal_distance(*f.constant_value(), *g.constant_value());
  double d = 0.0;
  for (cplx z : metric_grid(grid_n)) d = std::max(d, chordal_distance(f(z), g(z)));
  return d;
}

}  // namespace rcs
