// systems.hpp: reflectionless systems at the level of their half line
// m functions, singular systems, asymptotics and the inverse map.
#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "rcs/gapset.hpp"
#include "rcs/laurent.hpp"
#include "rcs/sphere.hpp"

namespace rcs {

struct Normalization {
  double A_plus = 0.0;
  double D = 1.0;
};

enum class Side { Plus, Minus };

/// m_+(z) = A_+ + D( (h0(z)-A)/2 + g z + sum_j (s_j - 1/2) w_j (1+mu_j z)/(mu_j - z) ),
/// m_-(z) = D h0(z) - m_+(z).
class ReflectionlessSystem {
 public:
  const FiniteGapSet& set() const { return set_; }
  const Divisor& divisor() const { return div_; }
  const Normalization& norm() const { return norm_; }
  const RepresentationData& rep() const { return rep_; }
  const H0& h0() const { return h0_; }

  cplx m_plus(cplx z) const;
  cplx m_minus(cplx z) const;
  // Continuation of m_+ across the band interiors into C^-.
  cplx m_plus_continued(cplx z) const;
  // Continuation of m_- across the band interiors into C^-.
  cplx m_minus_continued(cplx z) const;

  HerglotzMap m_plus_map() const;
  HerglotzMap m_minus_map() const;

  // nu_+(R^inf) = ac/2 + sum_{s_j=1} w_j + (1/2+g) nu({inf}); needs quadrature.
  double nu_plus_total() const;

  friend ReflectionlessSystem build_system(const FiniteGapSet& set, const Divisor& div, const Normalization& norm);

 private:
  ReflectionlessSystem(FiniteGapSet set, Divisor div, Normalization norm);
  cplx bracket(cplx z, cplx h0z) const;

  FiniteGapSet set_;
  Divisor div_;
  Normalization norm_;
  RepresentationData rep_;
  H0 h0_;
};

// Throws ValidationError on inconsistent input (g rule, divisor, D <= 0).
ReflectionlessSystem build_system(const FiniteGapSet& set, const Divisor& div, const Normalization& norm);

cplx eval_m(const ReflectionlessSystem& sys, Side side, cplx z);

// K_a: m_+ == a, m_- == -a, a in R or infinity.
struct SingularSystem {
  SpherePoint a;
  HerglotzMap m_plus_map() const;
  HerglotzMap m_minus_map() const;
};

SingularSystem singular_system(const SpherePoint& a);

using AnySystem = std::variant<ReflectionlessSystem, SingularSystem>;

HerglotzMap m_plus_map(const AnySystem& s);
HerglotzMap m_minus_map(const AnySystem& s);

// Radius for Laurent sampling: 3(1+max|endpoint|), or 2(1+|mu_j|) when larger.
double laurent_radius(const FiniteGapSet& set, const Divisor* div = nullptr);
// Same, counting only the poles of m_+ (s_j = 1) or of m_- (s_j = 0).
double laurent_radius(const ReflectionlessSystem& sys, Side side);

// Laurent data of F at infinity for maps over `set`: lower half circle from the
// band continuation (TwoUnbounded) or by reflection (Compact). OneUnbounded
// sets have a branch point at infinity: DomainError.
LaurentExpansion laurent_expansion(const HerglotzMap& f, const FiniteGapSet& set, double radius, int n_neg = 4);

// Laurent data of m_+ or m_- at infinity. Over compact sets the poles are
// expanded in closed form and only the remainder is sampled, on a circle of
// radius 3(1+max|endpoint|).
LaurentExpansion system_laurent(const ReflectionlessSystem& sys, Side side, int n_neg = 4);

struct AsymptoticData {
  double b0 = 0.0;
  double a = 0.0;
  double c = 0.0;
};

// F(z) = b0 z + a + c/z + O(1/z^2). Without a radius the default is tried and
// doubled up to six times while the growth diagnostic fails.
AsymptoticData asymptotics(const HerglotzMap& f, const FiniteGapSet& set, std::optional<double> radius = {});
AsymptoticData asymptotics(const ReflectionlessSystem& sys, Side side = Side::Plus);

struct ExtractedParameters {
  Divisor div;
  Normalization norm;
};

using Extraction = std::variant<ExtractedParameters, SingularSystem>;

// Recovers (divisor, normalization) from m_+. m_- is rebuilt from the band
// continuation of F. Constant F gives a SingularSystem.
// Throws InconsistencyError if the rebuilt system does not reproduce F.
Extraction extract_parameters(const HerglotzMap& f, const FiniteGapSet& set);
Extraction extract_parameters(const HerglotzMap& f, const HerglotzMap& m_minus, const FiniteGapSet& set);

// Convenience: extract and rebuild.
AnySystem system_from_maps(const HerglotzMap& f, const HerglotzMap& m_minus, const FiniteGapSet& set);

inline const std::vector<double>& default_eps_ladder() {
  static const std::vector<double> ladder{1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  return ladder;
}

// Richardson-extrapolated |Re h(t + i0)| along the ladder; t must lie inside a band.
double reflectionless_defect(const ReflectionlessSystem& sys, double t,
                             const std::vector<double>& eps_ladder = default_eps_ladder());

double system_distance(const AnySystem& a, const AnySystem& b, int grid_n = kDefaultMetricGrid);

}  // namespace rcs
