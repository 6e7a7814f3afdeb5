// gapset.hpp: finite gap sets, divisors, the Krein function and the
// normalized Herglotz function h0.
//
// Infinite gap points are stored as IEEE +-infinity.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rcs/sphere.hpp"

namespace rcs {

enum class SetCase { TwoUnbounded, OneUnbounded, Compact };

std::string to_string(SetCase c);

struct Band {
  double lo;
  double hi;
};

// Open component of the complement. lo = -inf / hi = +inf for unbounded gaps.
struct Gap {
  double lo;
  double hi;
  bool unbounded() const;
  bool contains_closed(double mu) const;  // mu in [lo, hi] (extended)
  bool is_endpoint(double mu) const;
};

class FiniteGapSet {
 public:
  const std::vector<Band>& bands() const { return bands_; }
  const std::vector<Gap>& gaps() const { return gaps_; }
  SetCase set_case() const { return case_; }
  // Number of bounded gaps (the N of the three set forms).
  int bounded_gap_count() const;
  // Largest |finite band endpoint|, 0 for the whole line.
  double max_abs_endpoint() const;
  // Index of the band whose open interior contains t, or -1.
  int band_containing(double t) const;

  friend FiniteGapSet classify_set(std::vector<Band> bands);

 private:
  std::vector<Band> bands_;
  std::vector<Gap> gaps_;
  SetCase case_ = SetCase::TwoUnbounded;
};

// Validates, sorts and classifies. Bands may use +-infinity endpoints; a set
// that is unbounded only to the left is rejected (reflect t -> -t first).
// Throws ValidationError.
FiniteGapSet classify_set(std::vector<Band> bands);

struct GapPoint {
  double mu = 0.0;
  int s = 0;
};

struct Divisor {
  std::vector<GapPoint> points;  // one per gap, in gap order
  std::optional<double> g;       // only for compact sets with mu_- = -inf, mu_+ = +inf
};

// Checks one point per gap inside its closed gap, s in {0,1}, and the g rule;
// returns a copy with s reset to 0 at gap endpoints and at +-inf.
// Throws ValidationError.
Divisor normalize_divisor(const FiniteGapSet& set, const Divisor& div);

// True iff the divisor must carry g (compact set, both outer points infinite).
bool requires_g(const FiniteGapSet& set, const Divisor& div);

// Piece of the real line on which the Krein function is constant.
struct KreinPiece {
  double lo;
  double hi;
  double xi;
};

// Left-to-right partition of R into constancy intervals of xi.
std::vector<KreinPiece> krein_pieces(const FiniteGapSet& set, const Divisor& div);

// xi(t) in {0, 1/2, 1}; DomainError at band endpoints and divisor points.
double krein_xi(const FiniteGapSet& set, const Divisor& div, double t);

// Positive constant in front of the product formula for h0:
// 2 (two unbounded bands), 1 + d0 - mu0 (one), (1+d0-mu_-)(1+mu_+-c_{N+1})
// (compact); factors with an infinite point are replaced by 1.
double h0_constant(const FiniteGapSet& set, const Divisor& div);

/// Evaluator for h0 and its pole data.
///
/// h0(z) = K e^{i pi xi_last} prod_x (z - x)^{-jump(x)} with principal powers,
/// where x runs over the finite jump points of xi. For z in C^+ every factor has
/// argument in (0, pi), which realizes the Herglotz branch without any sign
/// bookkeeping. The same expression also continues h0 analytically across
/// every band on which it has no cut.
class H0 {
 public:
  H0(const FiniteGapSet& set, const Divisor& div);

  // Im z > 0 required.
  cplx operator()(cplx z) const;
  // The product expression at any non-real z.
  cplx expression(cplx z) const;

  // Im h0(t + i0) = |h0(t)| for t inside a band.
  double band_value(double t) const;

  // Residue factor at a finite jump point mu of weight +1:
  // lim_{y->0} -i y h0(mu + iy).
  double residue(double mu) const;

  double constant() const { return k_; }
  double xi_last() const { return xi_last_; }

  struct Jump {
    double x;
    double delta;
  };
  const std::vector<Jump>& jumps() const { return jumps_; }

 private:
  double k_ = 1.0;
  double xi_last_ = 0.5;
  std::vector<Jump> jumps_;
};

cplx h0_eval(const FiniteGapSet& set, const Divisor& div, cplx z);

// Closed-form exponential representation: exp of the sum of per-interval
// integrals of (1/(t-z) - t/(t^2+1)) xi(t), scaled by the positive constant
// that matches the literal product formula at z = i.
cplx h0_log_oracle(const FiniteGapSet& set, const Divisor& div, cplx z);

struct RepresentationData {
  double A = 0.0;
  double nu_total = 0.0;
  std::vector<double> w;  // one per gap
  double nu_infinity = 0.0;
};

RepresentationData representation_data(const FiniteGapSet& set, const Divisor& div);

// Im h0(t + i0) for t strictly inside a band; DomainError elsewhere.
double boundary_density(const FiniteGapSet& set, const Divisor& div, double t);

// Absolutely continuous mass of nu: integral over C of Im h0(t)/(pi(1+t^2)).
double ac_mass(const FiniteGapSet& set, const Divisor& div);

}  // namespace rcs
