#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rcs/errors.hpp"
#include "rcs/gapset.hpp"
#include "rcs/sampling.hpp"

using namespace rcs;
using oracle::kInf;

namespace {

const cplx I(0.0, 1.0);

FiniteGapSet dirac_set() { return classify_set({{-kInf, -1.0}, {1.0, kInf}}); }
FiniteGapSet free_set() { return classify_set({{-2.0, 2.0}}); }
Divisor one(double mu, int s = 0) { return Divisor{{{mu, s}}, std::nullopt}; }
Divisor free_div(double g = -0.5) { return Divisor{{{-kInf, 0}, {kInf, 0}}, g}; }

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("classify_set cases") {
  const FiniteGapSet d = dirac_set();
  CHECK(d.set_case() == SetCase::TwoUnbounded);
  REQUIRE(d.gaps().size() == 1);
  CHECK(d.gaps()[0].lo == -1.0);
  CHECK(d.gaps()[0].hi == 1.0);
  CHECK(d.bounded_gap_count() == 1);

  const FiniteGapSet s = classify_set({{0.0, kInf}});
  CHECK(s.set_case() == SetCase::OneUnbounded);
  REQUIRE(s.gaps().size() == 1);
  CHECK(s.gaps()[0].lo == -kInf);
  CHECK(s.gaps()[0].hi == 0.0);

  const FiniteGapSet c = free_set();
  CHECK(c.set_case() == SetCase::Compact);
  REQUIRE(c.gaps().size() == 2);
  CHECK(c.gaps()[0].hi == -2.0);
  CHECK(c.gaps()[1].lo == 2.0);
  CHECK(c.bounded_gap_count() == 0);
  CHECK(c.max_abs_endpoint() == 2.0);

  // unsorted input is sorted
  const FiniteGapSet u = classify_set({{3.0, 4.0}, {-2.0, 2.0}});
  CHECK(u.bands()[0].lo == -2.0);
  CHECK(u.bounded_gap_count() == 1);
  CHECK(u.band_containing(3.5) == 1);
  CHECK(u.band_containing(2.5) == -1);
  CHECK(u.band_containing(2.0) == -1);
}

TEST_CASE("classify_set rejects bad input") {
  CHECK_THROWS_AS(classify_set({}), ValidationError);
  CHECK_THROWS_AS(classify_set({{0.0, 2.0}, {1.0, 3.0}}), ValidationError);
  CHECK_THROWS_AS(classify_set({{0.0, 1.0}, {1.0, 3.0}}), ValidationError);
  CHECK_THROWS_AS(classify_set({{1.0, 0.0}}), ValidationError);
  CHECK_THROWS_AS(classify_set({{1.0, 1.0}}), ValidationError);
  CHECK_THROWS_AS(classify_set({{-kInf, 0.0}}), ValidationError);
  CHECK_THROWS_AS(classify_set({{std::nan(""), 0.0}}), ValidationError);
  // the whole line has no gaps
  CHECK(classify_set({{-kInf, kInf}}).gaps().empty());
}

TEST_CASE("normalize_divisor") {
  const FiniteGapSet d = dirac_set();
  CHECK(normalize_divisor(d, one(1.0, 1)).points[0].s == 0);
  CHECK(normalize_divisor(d, one(0.5, 1)).points[0].s == 1);
  CHECK_THROWS_AS(normalize_divisor(d, one(3.0)), ValidationError);
  CHECK_THROWS_AS(normalize_divisor(d, one(0.0, 2)), ValidationError);
  CHECK_THROWS_AS(normalize_divisor(d, Divisor{{}, std::nullopt}), ValidationError);
  CHECK_THROWS_AS(normalize_divisor(d, one(kInf)), ValidationError);

  const FiniteGapSet c = free_set();
  CHECK(requires_g(c, free_div()));
  CHECK_NOTHROW(normalize_divisor(c, free_div(0.5)));
  CHECK_THROWS_AS(normalize_divisor(c, free_div(0.9)), ValidationError);
  CHECK_THROWS_AS(normalize_divisor(c, Divisor{{{-kInf, 0}, {kInf, 0}}, std::nullopt}), ValidationError);
  CHECK_THROWS_AS(normalize_divisor(c, Divisor{{{-3.0, 0}, {kInf, 0}}, 0.0}), ValidationError);
  CHECK(!requires_g(c, Divisor{{{-3.0, 0}, {kInf, 0}}, std::nullopt}));
  CHECK(normalize_divisor(c, Divisor{{{-kInf, 1}, {3.0, 1}}, std::nullopt}).points[0].s == 0);

  const FiniteGapSet s = classify_set({{0.0, kInf}});
  CHECK_THROWS_AS(normalize_divisor(s, one(kInf)), ValidationError);
  CHECK_NOTHROW(normalize_divisor(s, one(-kInf)));
}

TEST_CASE("krein function values") {
  const FiniteGapSet d = dirac_set();
  CHECK(krein_xi(d, one(0.0), 2.0) == 0.5);
  CHECK(krein_xi(d, one(0.0), -3.0) == 0.5);
  CHECK(krein_xi(d, one(0.0), 0.5) == 1.0);
  CHECK(krein_xi(d, one(0.0), -0.5) == 0.0);
  CHECK_THROWS_AS(krein_xi(d, one(0.0), 0.0), DomainError);
  CHECK_THROWS_AS(krein_xi(d, one(0.0), 1.0), DomainError);

  const auto pieces = krein_pieces(d, one(0.0));
  CHECK(pieces.front().lo == -kInf);
  CHECK(pieces.back().hi == kInf);
  for (std::size_t k = 1; k < pieces.size(); ++k) CHECK(pieces[k].lo == pieces[k - 1].hi);
}

TEST_CASE("h0 examples") {
  const FiniteGapSet d = dirac_set();
  CHECK(rel(h0_eval(d, one(0.0), I), cplx(0, 2 * std::sqrt(2.0))) < 1e-14);
  CHECK(rel(h0_eval(d, one(1.0), I), cplx(std::sqrt(2.0), std::sqrt(2.0))) < 1e-14);
  CHECK(rel(h0_eval(free_set(), free_div(), I), cplx(0, std::sqrt(5.0))) < 1e-14);
  const cplx far(0.0, 1e5);
  CHECK(std::abs(h0_eval(free_set(), free_div(), far) - far) < 1e-4);
  const FiniteGapSet s = classify_set({{0.0, kInf}});
  CHECK(rel(h0_eval(s, one(-kInf), I), std::exp(0.75 * std::numbers::pi * I)) < 1e-14);
  CHECK_THROWS_AS(h0_eval(d, one(0.0), 1.0), DomainError);
  CHECK_THROWS_AS(h0_eval(d, one(0.0), -I), DomainError);
}

TEST_CASE("h0 against the literal product and the log oracle") {
  const FiniteGapSet d = dirac_set();
  CHECK(rel(h0_log_oracle(d, one(0.0), I), cplx(0, 2 * std::sqrt(2.0))) < 1e-12);
  const FiniteGapSet s = classify_set({{0.0, kInf}});
  CHECK(rel(h0_log_oracle(s, one(-kInf), I), cplx(-1, 1) / std::sqrt(2.0)) < 1e-12);
  CHECK_THROWS_AS(h0_log_oracle(d, one(0.0), -I), DomainError);

  Rng rng(21);
  for (SetCase c : {SetCase::TwoUnbounded, SetCase::OneUnbounded, SetCase::Compact}) {
    double worst_lit = 0.0, worst_log = 0.0;
    for (int n = 0; n < 1000; ++n) {
      const FiniteGapSet set = random_set(rng, c);
      const Divisor div = random_divisor(rng, set);
      const cplx z = n % 10 == 0 ? cplx(0, 2) : random_upper(rng);
      const cplx h = h0_eval(set, div, z);
      worst_lit = std::max(worst_lit, rel(oracle::literal_h0(set, div, z), h));
      worst_log = std::max(worst_log, rel(h0_log_oracle(set, div, z), h));
    }
    CAPTURE(to_string(c));
    CHECK(worst_lit < 1e-10);
    CHECK(worst_log < 1e-8);
  }
}

TEST_CASE("exponent by quadrature") {
  // h0 = K exp(exponent) with K > 0, so the quadrature fixes h0 up to that constant.
  const FiniteGapSet d = dirac_set();
  const cplx e = oracle::krein_exponent_quadrature(d, one(0.0), I);
  CHECK(std::abs(std::arg(std::exp(e)) - std::numbers::pi / 2) < 1e-10);

  Rng rng(8);
  for (SetCase c : {SetCase::TwoUnbounded, SetCase::OneUnbounded, SetCase::Compact}) {
    for (int n = 0; n < 20; ++n) {
      const FiniteGapSet set = random_set(rng, c);
      const Divisor div = random_divisor(rng, set, MuMode::Interior);
      const cplx z = random_upper(rng, 0.3, 3.0, 3.0);
      const cplx ratio = std::exp(oracle::krein_exponent_quadrature(set, div, z) -
                                  oracle::krein_exponent_quadrature(set, div, I));
      CHECK(rel(h0_eval(set, div, z) / h0_eval(set, div, I), ratio) < 1e-9);
    }
  }
}

TEST_CASE("herglotz branch on random samples") {
  Rng rng(1);
  int bad = 0;
  for (int n = 0; n < 10000; ++n) {
    const SetCase c = static_cast<SetCase>(n % 3);
    const FiniteGapSet set = random_set(rng, c);
    const Divisor div = random_divisor(rng, set);
    if (!(h0_eval(set, div, random_upper(rng, 1e-4, 1e3, 10.0)).imag() > 0)) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("representation data examples") {
  const FiniteGapSet d = dirac_set();
  const RepresentationData r = representation_data(d, one(0.0));
  CHECK(std::abs(r.A) < 1e-15);
  CHECK(r.nu_total == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-14));
  REQUIRE(r.w.size() == 1);
  CHECK(r.w[0] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(r.nu_infinity == 0.0);

  CHECK(representation_data(d, one(1.0)).w[0] == 0.0);
  CHECK(representation_data(d, one(-1.0)).w[0] == 0.0);

  const RepresentationData f = representation_data(free_set(), free_div());
  CHECK(f.nu_infinity == 1.0);
  CHECK(std::abs(f.A) < 1e-15);
  CHECK(f.nu_total == doctest::Approx(std::sqrt(5.0)));
  CHECK(f.nu_total > f.nu_infinity);
  CHECK(representation_data(free_set(), Divisor{{{-3.0, 0}, {kInf, 0}}, std::nullopt}).nu_infinity == 0.0);
}

TEST_CASE("residues against the numerical limit") {
  // w = -i lim y h0(mu + iy) / (1 + mu^2), read off with a Richardson step in y.
  Rng rng(4);
  for (SetCase c : {SetCase::TwoUnbounded, SetCase::OneUnbounded, SetCase::Compact}) {
    for (int n = 0; n < 30; ++n) {
      const FiniteGapSet set = random_set(rng, c);
      const Divisor div = random_divisor(rng, set, MuMode::Interior);
      const RepresentationData r = representation_data(set, div);
      for (std::size_t j = 0; j < div.points.size(); ++j) {
        const double mu = div.points[j].mu;
        if (!std::isfinite(mu)) {
          CHECK(r.w[j] == 0.0);
          continue;
        }
        auto limit = [&](double y) { return (-I * y * oracle::literal_h0(set, div, cplx(mu, y))).real(); };
        const double y = 1e-5 * (1.0 + std::abs(mu));
        const double est = (2.0 * limit(y / 2) - limit(y)) / (1.0 + mu * mu);
        CHECK(r.w[j] > 0.0);
        CHECK(r.w[j] == doctest::Approx(est).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("total mass bookkeeping") {
  Rng rng(17);
  for (SetCase c : {SetCase::TwoUnbounded, SetCase::OneUnbounded, SetCase::Compact}) {
    double worst = 0.0;
    for (int n = 0; n < 40; ++n) {
      const FiniteGapSet set = random_set(rng, c);
      const Divisor div = random_divisor(rng, set);
      const RepresentationData r = representation_data(set, div);
      const cplx hi = h0_eval(set, div, I);
      CHECK(std::abs(r.A - hi.real()) < 1e-10);
      CHECK(std::abs(r.nu_total - hi.imag()) < 1e-10);
      double total = ac_mass(set, div) + r.nu_infinity;
      for (double w : r.w) total += w;
      worst = std::max(worst, std::abs(total - r.nu_total) / r.nu_total);
    }
    CAPTURE(to_string(c));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("boundary density") {
  const FiniteGapSet d = dirac_set();
  CHECK(boundary_density(d, one(0.0), 2.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(boundary_density(d, one(0.0), -2.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(h0_eval(d, one(0.0), cplx(2.0, 1e-9)).imag() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-8));
  CHECK_THROWS_AS(boundary_density(d, one(0.0), 0.5), DomainError);
  CHECK_THROWS_AS(boundary_density(d, one(0.0), 1.0), DomainError);

  Rng rng(30);
  for (int n = 0; n < 200; ++n) {
    const FiniteGapSet set = random_set(rng, static_cast<SetCase>(n % 3));
    const Divisor div = random_divisor(rng, set);
    const double t = random_band_point(rng, set);
    const double v = boundary_density(set, div, t);
    CHECK(v > 0.0);
    CHECK(v == doctest::Approx(std::abs(oracle::literal_h0(set, div, cplx(t, 1e-10)))).epsilon(1e-6));
  }
}
