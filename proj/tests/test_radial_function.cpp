#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "tvl/radial_function.hpp"
#include "tvl/spectral.hpp"
#include "tvl/verify.hpp"

using namespace tvl;
using RF = RadialFunction;
using std::numbers::sqrt2;

namespace {

bool same(const RF& a, const RF& b, double tol = 1e-12) { return relative_residual(a, b) < tol; }

}  // namespace

TEST_SUITE("radialfn") {
  TEST_CASE("canonical form merges and drops") {
    const RF f = RF::monomial(1) - RF::monomial(1);
    CHECK(f.is_zero());
    CHECK(evaluate(f, 5.0) == cplx(0.0));
    const RF g = RF::term(2.0, 3, -1.0) + RF::term(3.0, 3, -1.0);
    REQUIRE(g.size() == 1);
    CHECK(g.terms()[0].coeff == cplx(5.0));
    const RF h = RF::exponential(-1.0) + RF::exponential(-1.0 + 1e-16);
    CHECK(h.size() == 1);
  }

  TEST_CASE("differentiate examples") {
    CHECK(same(differentiate(RF::exponential(-1.0)), -RF::exponential(-1.0)));
    CHECK(same(differentiate(RF::term(1.0, 1, -1.0)), RF::exponential(-1.0) - RF::term(1.0, 1, -1.0)));
    CHECK(same(differentiate(RF::monomial(2), 2), RF::constant(2.0)));
  }

  TEST_CASE("apply_D examples") {
    CHECK(apply_D(1, RF::monomial(1)).is_zero());
    const cplx a(-0.7, 1.3);
    CHECK(same(apply_D(1, RF::exponential(a)), RF::exponential(a, a) - RF::term(1.0, -1, a)));
    CHECK(same(apply_D(2, RF::exponential(a)),
               RF::exponential(a, a * a) + RF::term(-3.0 * a, -1, a) + RF::term(3.0, -2, a)));
    CHECK_THROWS_AS(apply_D(3, RF::exponential(a)), DomainViolation);
  }

  TEST_CASE("apply_T examples and indicial solutions") {
    CHECK(apply_T(1, RF::monomial(2)).is_zero());
    CHECK(same(apply_T(0, RF::exponential(-1.0)), -RF::exponential(-1.0)));
    const RF d = apply_D(1, RF::exponential(-1.0));
    CHECK(same(apply_T(1, d), -d));
    for (int l = 1; l <= 2; ++l) {
      CHECK(apply_T(l, RF::monomial(l + 1)).is_zero());
      CHECK(apply_T(l, RF::monomial(-l)).is_zero());
    }
  }

  TEST_CASE("apply_E examples") {
    CHECK(same(apply_E(1, RF::monomial(1), false), RF::constant(2.0)));
    const RF f = RF::term(1.0, 1, -1.0);
    CHECK(same(apply_E(1, apply_E(1, f, false), true), apply_T(1, f)));
    const RF g = RF::exponential(-1.0);
    CHECK(same(apply_E(1, apply_E(1, g, true), false), apply_T(0, g)));
  }

  TEST_CASE("evaluate examples") {
    CHECK(evaluate(RF::exponential(-1.0), 1.0).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(evaluate(apply_D(1, RF::exponential(-1.0)), 1.0).real() == doctest::Approx(-2.0 / std::exp(1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(evaluate(RF::monomial(-1), 0.0), DomainViolation);
    CHECK(evaluate(RF::monomial(2), 0.0) == cplx(0.0));
  }

  TEST_CASE("evaluate near zero is smooth across the series switch") {
    // 3(e^{-r} - 1 + r)/r^2: the poles cancel, values must stay finite and
    // continuous for small r.
    const RF f = RF::term(3.0, -2, -1.0) - RF::term(3.0, -2, 0.0) + RF::term(3.0, -1, 0.0);
    const double h = 1e-6;
    for (double r : {0.05, 0.0999, 0.1, 0.1001, 0.2}) {
      const cplx jump = evaluate(f, r + h) - evaluate(f, r);
      CHECK(std::abs(jump) < 1e-5);
    }
  }

  TEST_CASE("series_at_zero examples") {
    const auto s = series_at_zero(RF::term(1.0, -1, -1.0), -1, 1);
    CHECK(std::abs(s.coefficient(-1) - 1.0) < 1e-15);
    CHECK(std::abs(s.coefficient(0) + 1.0) < 1e-15);
    CHECK(std::abs(s.coefficient(1) - 0.5) < 1e-15);

    const auto v1 = series_at_zero(discrete_eigenfunction(1, 1.0, false), 0, 2);
    CHECK(std::abs(v1.coefficient(0)) < 1e-14);
    CHECK(std::abs(v1.coefficient(1) + 1.0) < 1e-13);
    CHECK(std::abs(v1.coefficient(2) - sqrt2 / 3) < 1e-13);

    const auto v2 = series_at_zero(discrete_eigenfunction(2, 1.0, false), 0, 3);
    CHECK(std::abs(v2.coefficient(0) - 1.0) < 1e-13);
    CHECK(v2.vanishes(1));
    CHECK(v2.vanishes(2));
    CHECK(std::abs(v2.coefficient(3) + sqrt2 / 15) < 1e-13);
  }

  TEST_CASE("boundary values") {
    const auto b = boundary_values(RF::exponential(-2.0), 3);
    CHECK(std::abs(b[0] - 1.0) < 1e-15);
    CHECK(std::abs(b[1] + 2.0) < 1e-15);
    CHECK(std::abs(b[3] + 8.0) < 1e-14);
    CHECK_THROWS_AS(boundary_values(RF::term(1.0, -1, -1.0), 1), PoleAtZero);
  }

  TEST_CASE("integrate_halfline examples") {
    CHECK(std::abs(integrate_halfline(RF::exponential(-1.0)) - 1.0) < 1e-15);
    CHECK(std::abs(integrate_halfline(RF::term(1.0, 2, -2.0)) - 0.25) < 1e-15);
    const RF v = discrete_eigenfunction(1, 1.0, false);
    CHECK(std::abs(inner_product(v, v) - 1.0 / sqrt2) < 1e-14);
    CHECK_THROWS_AS(integrate_halfline(RF::exponential(cplx(0.0, 1.0))), NonDecaying);
    CHECK_THROWS_AS(integrate_halfline(RF::term(1.0, -1, -1.0)), DivergentAtZero);
    // Poles that cancel in combination: (e^{-r} - e^{-2r})/r integrates to log 2.
    const RF q = RF::term(1.0, -1, -1.0) - RF::term(1.0, -1, -2.0);
    CHECK(std::abs(integrate_halfline(q) - std::log(2.0)) < 1e-14);
  }

  TEST_CASE("integrate_halfline with complex rate") {
    // int r e^{-r} sin r dr = 1/2
    const cplx i(0.0, 1.0);
    const RF f = (RF::term(1.0, 1, -1.0 + i) - RF::term(1.0, 1, -1.0 - i)) * (1.0 / (2.0 * i));
    CHECK(std::abs(integrate_halfline(f) - 0.5) < 1e-15);
  }

  TEST_CASE("tail and interval integrals agree with the half-line") {
    const RF f = RF::term(1.0, 3, -1.5) + RF::term(cplx(0.5, 0.2), 1, cplx(-0.8, 0.6));
    const cplx total = integrate_halfline(f);
    CHECK(std::abs(integrate_interval(f, 0.0, 1.7) + integrate_tail(f, 1.7) - total) < 1e-14);
    CHECK(std::abs(integrate_interval(f, 0.3, 0.9) + integrate_interval(f, 0.9, 4.0) - integrate_interval(f, 0.3, 4.0)) < 1e-14);
  }

  TEST_CASE("inner_product examples") {
    CHECK(std::abs(inner_product(RF::exponential(-1.0), RF::exponential(-1.0)) - 0.5) < 1e-15);
    CHECK(std::abs(inner_product(RF::exponential(-1.0), RF::term(1.0, 1, -2.0)) - 1.0 / 9.0) < 1e-15);
  }

  TEST_CASE("intertwining and factorization on random core functions") {
    std::mt19937_64 gen(11);
    for (int i = 0; i < 25; ++i) {
      const RF w = verify::random_core_function(gen);
      for (int l = 1; l <= 2; ++l) {
        CHECK(relative_residual(apply_T(l, apply_D(l, w)), -apply_D(l, differentiate(w, 2))) < 1e-12);
        CHECK(relative_residual(apply_E(l, apply_E(l, w, false), true), apply_T(l, w)) < 1e-12);
        CHECK(relative_residual(apply_E(l, apply_E(l, w, true), false), apply_T(l - 1, w)) < 1e-12);
      }
    }
  }

  TEST_CASE("integration by parts identities for D_l") {
    // w vanishing like r (l = 1) and like r^2 (l = 2): boundary terms vanish.
    const RF w1 = RF::term(1.0, 1, -1.0) + RF::term(0.3, 2, -2.0);
    const RF w1t = RF::term(1.0, 1, cplx(-0.5, 0.4));
    CHECK(std::abs(inner_product(apply_D(1, w1t), apply_D(1, w1)) - inner_product(differentiate(w1t), differentiate(w1))) <
          1e-12 * std::abs(inner_product(apply_D(1, w1t), apply_D(1, w1))));
    const RF w2 = RF::term(1.0, 2, -1.0);
    const RF w2t = RF::term(1.0, 3, cplx(-0.5, 0.4));
    const cplx lhs = inner_product(apply_D(2, w2t), apply_D(2, w2));
    CHECK(std::abs(lhs - inner_product(differentiate(w2t, 2), differentiate(w2, 2))) < 1e-12 * std::abs(lhs));
  }

  TEST_CASE("linearity and conjugation symmetry") {
    const RF f = RF::term(cplx(1.0, 2.0), 2, cplx(-1.0, 0.5));
    const RF g = RF::term(cplx(-0.5, 1.0), 1, -0.7) + RF::exponential(-2.0);
    CHECK(std::abs(inner_product(f, g) - std::conj(inner_product(g, f))) < 1e-14);
    const cplx s(0.3, -1.1);
    CHECK(same(apply_T2(2, f * s + g), apply_T2(2, f) * s + apply_T2(2, g)));
    CHECK(is_real_valued(f + conj(f)));
    CHECK_FALSE(is_real_valued(f));
  }

  TEST_CASE("json round trip") {
    const RF f = apply_D(2, RF::term(cplx(1.0, -2.0), 1, cplx(-0.3, 1.7)));
    const RF g = radial_from_json(to_json(f));
    CHECK(relative_residual(f, g) == 0.0);
  }
}
