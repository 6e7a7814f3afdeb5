// orbits.hpp: the PSL(2,R) action on systems and orbit representatives.
#pragma once

#include "rcs/jacobi.hpp"
#include "rcs/sphere.hpp"
#include "rcs/systems.hpp"

namespace rcs {

// [[c, a/c],[0, 1/c]] : w -> c^2 w + a
struct GElement {
  double c = 1.0;
  double a = 0.0;
  MoebiusElement matrix() const;
};

// Element of G with c^2 = scale.
GElement g_element_for(double scale, double shift);

// +-m_+-(z; A·H) = A(+-m_+-(z; H)); reflectionless systems are re-parametrized.
AnySystem act(const MoebiusElement& a, const AnySystem& sys);
AnySystem act(const MoebiusElement& a, const ReflectionlessSystem& sys);
SingularSystem act(const MoebiusElement& a, const SingularSystem& sys);

enum class RepresentativeKind { Dirac, Schroedinger, Jacobi };

struct OrbitRepresentative {
  MoebiusElement transform;
  ReflectionlessSystem system;
  RepresentativeKind kind;
};

// m_+(inf) = m_-(inf) = i. CaseMismatchError unless the set is TwoUnbounded.
OrbitRepresentative dirac_representative(const ReflectionlessSystem& sys);

// mu_0 = -inf, A_+ = 0, D = 1. CaseMismatchError unless OneUnbounded.
OrbitRepresentative schroedinger_representative(const ReflectionlessSystem& sys);

// m_+(z) = -1/z + O(1/z^3). CaseMismatchError unless Compact.
OrbitRepresentative jacobi_representative(const ReflectionlessSystem& sys);

// m_+(-inf) of a system over a set with one unbounded band.
double schroedinger_m_at_minus_infinity(const ReflectionlessSystem& sys);

struct JacobiOrbitData {
  double t = 0.0;
  JacobiWindow coefficients;
  MoebiusElement transform;
  double a0 = 1.0;  // from the left slope: L = 1/a0^2
  double b = 0.0;   // coefficient of z in m_+ after normalization
};

JacobiOrbitData jacobi_orbit_data(const ReflectionlessSystem& sys, int k = 5);

// [[0, -1/a0],[a0, -b0/a0]]
MoebiusElement twisted_shift_matrix(double a0, double b0);

// diag(s, 1/s)·[[1,0],[t a,1]]·rotation(pi t/2), s = 1 + t(c-1).
MoebiusElement a_t_family(double t, double a, double c);

// W = A(length·z + m(z)) with A the twisted shift matrix. Returns
// max(|mu_0(W) - 1|, max over the metric grid of delta(W1, m)), where W1 is W
// stripped once with its own first coefficients.
double twisted_shift_check(const HerglotzMap& m, double a0, double b0, double length, double radius = 3.0);

}  // namespace rcs
