#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rcs/errors.hpp"
#include "rcs/sampling.hpp"
#include "rcs/sphere.hpp"

using namespace rcs;

namespace {

const cplx I(0.0, 1.0);

double chordal(cplx a, cplx b) { return chordal_distance(SpherePoint(a), SpherePoint(b)); }

// Plain 2x2 product, no normalization.
std::array<double, 4> raw_product(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

}  // namespace

TEST_CASE("chordal distance values") {
  CHECK(chordal_distance(SpherePoint(0.0), SpherePoint::infinity()) == doctest::Approx(2.0));
  CHECK(chordal(I, I) == 0.0);
  CHECK(chordal(0.0, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(chordal_distance(SpherePoint::infinity(), SpherePoint::infinity()) == 0.0);
}

TEST_CASE("chordal distance is symmetric and bounded") {
  Rng rng(11);
  for (int n = 0; n < 500; ++n) {
    const cplx p = random_upper(rng, 1e-3, 1e3, 1e3);
    const cplx q = -random_upper(rng, 1e-3, 1e3, 1e3);
    const double d = chordal(p, q);
    CHECK(d == doctest::Approx(chordal(q, p)).epsilon(1e-15));
    CHECK(d <= 2.0 + 1e-15);
    CHECK(d > 0.0);
  }
}

TEST_CASE("moebius apply examples") {
  const MoebiusElement inv(0, -1, 1, 0);
  CHECK(chordal_distance(inv(SpherePoint(I)), SpherePoint(I)) < 1e-15);
  CHECK(chordal_distance(MoebiusElement(1, 3, 0, 1)(SpherePoint(2.0 * I)), SpherePoint(cplx(3, 2))) < 1e-15);
  CHECK(chordal_distance(MoebiusElement(2, 0, 0, 0.5)(SpherePoint(cplx(1, 1))), SpherePoint(cplx(4, 4))) < 1e-15);
  // poles and infinity
  CHECK(inv(SpherePoint(0.0)).is_infinite());
  CHECK(inv(SpherePoint::infinity()) == SpherePoint(0.0));
  CHECK(MoebiusElement(1, 3, 0, 1)(SpherePoint::infinity()).is_infinite());
}

TEST_CASE("constructor normalizes determinant and sign") {
  const MoebiusElement a(4, 2, 0, 1);
  CHECK(a.determinant() == doctest::Approx(1.0));
  CHECK(MoebiusElement(-1, 0, 0, -1) == MoebiusElement::identity());
  CHECK_THROWS_AS(MoebiusElement(1, 0, 0, -1), ValidationError);
  CHECK_THROWS_AS(MoebiusElement(1, 1, 1, 1), ValidationError);
}

TEST_CASE("composition and inverse examples") {
  const MoebiusElement a(1, 1, 0, 1), b(2, 0, 0, 0.5);
  CHECK(approx_equal(a * b, MoebiusElement(2, 0.5, 0, 0.5), 1e-15));
  CHECK(approx_equal(MoebiusElement::rotation(0.3) * MoebiusElement::rotation(0.5), MoebiusElement::rotation(0.8),
                     1e-15));
  CHECK(approx_equal(MoebiusElement::identity().inverse(), MoebiusElement::identity(), 0.0));
  CHECK(approx_equal(MoebiusElement::inversion().inverse(), MoebiusElement(0, 1, -1, 0), 1e-15));
  CHECK(approx_equal(MoebiusElement::inversion().inverse(), MoebiusElement::inversion(), 1e-15));
  CHECK(approx_equal(MoebiusElement(2, 1, 0, 0.5).inverse(), MoebiusElement(0.5, -1, 0, 2), 1e-15));
  CHECK(approx_equal(a * a.inverse(), MoebiusElement::identity(), 1e-15));
}

TEST_CASE("composition matches the raw matrix product") {
  Rng rng(3);
  for (int n = 0; n < 200; ++n) {
    const MoebiusElement a = random_moebius(rng), b = random_moebius(rng);
    const auto p = raw_product(a.entries(), b.entries());
    CHECK(approx_equal(a * b, MoebiusElement(p[0], p[1], p[2], p[3]), 1e-12));
  }
}

TEST_CASE("group axioms on random triples") {
  Rng rng(5);
  for (int n = 0; n < 1000; ++n) {
    const MoebiusElement a = random_moebius(rng), b = random_moebius(rng), c = random_moebius(rng);
    CHECK(approx_equal((a * b) * c, a * (b * c), 1e-12));
    CHECK(approx_equal(a * MoebiusElement::identity(), a, 1e-12));
    CHECK(approx_equal(MoebiusElement::identity() * a, a, 1e-12));
    CHECK(approx_equal(a * a.inverse(), MoebiusElement::identity(), 1e-12));
    CHECK(approx_equal(a.inverse() * a, MoebiusElement::identity(), 1e-12));
  }
}

TEST_CASE("apply respects composition") {
  Rng rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const MoebiusElement a = random_moebius(rng), b = random_moebius(rng);
    const SpherePoint p(cplx(u(rng), u(rng)));
    worst = std::max(worst, chordal_distance((a * b)(p), a(b(p))));
  }
  CHECK(worst < 1e-10);
  const MoebiusElement a(1, 2, 3, 7);
  CHECK(((a * MoebiusElement::inversion())(SpherePoint::infinity()) == a(SpherePoint(0.0))));
}

TEST_CASE("kan coordinates") {
  const KanCoordinates id = kan_decompose(MoebiusElement::identity());
  CHECK(std::abs(id.point - I) < 1e-15);
  CHECK(std::abs(id.angle - 1.0) < 1e-15);

  const double alpha = 0.4;
  const KanCoordinates rot = kan_decompose(MoebiusElement::rotation(alpha));
  CHECK(std::abs(rot.point - I) < 1e-14);
  CHECK(std::abs(rot.angle - std::exp(2.0 * alpha * I)) < 1e-14);

  const KanCoordinates g = kan_decompose(MoebiusElement(2, 1.5, 0, 0.5));
  CHECK(std::abs(g.point - cplx(3, 4)) < 1e-14);
  CHECK(std::abs(g.angle - 1.0) < 1e-14);
  CHECK(approx_equal(kan_compose(g), MoebiusElement(2, 1.5, 0, 0.5), 1e-14));
}

TEST_CASE("kan round trip on random elements") {
  Rng rng(13);
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const MoebiusElement a = random_moebius(rng);
    const MoebiusElement b = kan_compose(kan_decompose(a));
    for (cplx z0 : {I, cplx(1, 2)}) worst = std::max(worst, chordal_distance(a(SpherePoint(z0)), b(SpherePoint(z0))));
    // the point coordinate is A·i
    CHECK(std::abs(kan_decompose(a).point - a(SpherePoint(I)).value()) < 1e-12);
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("herglotz maps") {
  const HerglotzMap id([](cplx z) { return SpherePoint(z); });
  CHECK(std::abs(id(I).value() - I) < 1e-15);
  CHECK_THROWS_AS(id(1.0), DomainError);
  CHECK_THROWS_AS(id.continued(-I), DomainError);
  CHECK(std::abs(id.schwarz_reflected(-I).value() + I) < 1e-15);

  const HerglotzMap c = HerglotzMap::constant(SpherePoint(3.0));
  REQUIRE(c.is_constant());
  CHECK(c(cplx(0.3, 7)) == SpherePoint(3.0));
  CHECK(c(cplx(-9, 1e-9)) == SpherePoint(3.0));

  const HerglotzMap t = id.transformed(MoebiusElement::inversion());
  CHECK(std::abs(t(2.0 * I).value() - cplx(0, 0.5)) < 1e-15);
  CHECK(t.constant_value() == std::nullopt);
  CHECK(HerglotzMap::constant(SpherePoint(0.0)).transformed(MoebiusElement::inversion()).constant_value()->is_infinite());
}

TEST_CASE("herglotz metric examples") {
  const HerglotzMap f([](cplx z) { return SpherePoint(std::sqrt(z)); });
  CHECK(herglotz_metric(f, f) == 0.0);
  CHECK(herglotz_metric(HerglotzMap::constant(0.0), HerglotzMap::constant(SpherePoint::infinity())) ==
        doctest::Approx(2.0));
  CHECK(herglotz_metric(HerglotzMap::constant(0.0), HerglotzMap::constant(1.0)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("metric grid nesting and monotonicity") {
  const auto g8 = metric_grid(8), g16 = metric_grid(16);
  for (cplx z : g8) {
    double best = 1e9;
    for (cplx w : g16) best = std::min(best, std::abs(z - w));
    CHECK(best < 1e-14);
  }
  for (cplx z : g16) CHECK(std::abs(z - 2.0 * I) <= 1.0 + 1e-15);
  const HerglotzMap f([](cplx z) { return SpherePoint(z); });
  const HerglotzMap g([](cplx z) { return SpherePoint(z + 0.1 * z * z); });
  CHECK(herglotz_metric(f, g, 8) <= herglotz_metric(f, g, 16) + 1e-15);
  CHECK_THROWS(herglotz_metric(f, g, 4));
}
