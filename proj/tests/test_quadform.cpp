#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tvl/quadform.hpp"
#include "tvl/spectral.hpp"

using namespace tvl;
using namespace tvl::quadform;
using RF = RadialFunction;
using std::numbers::sqrt2;

namespace {

vsh::TransverseField single(int l, int m, const RF& u) { return vsh::TransverseField{{{l, m, u}}}; }

}  // namespace

TEST_SUITE("quadform") {
  TEST_CASE("angular product") {
    const RF u = RF::term(1.0, 1, -1.0);
    const cplx direct = angular_product(1, u, u);
    CHECK(std::abs(direct - inner_product(apply_E(1, u, false), apply_E(1, u, false))) < 1e-12);
    // int (1 - r)^2 e^{-2r} + 2 e^{-2r} dr = 1/4 + 1
    CHECK(std::abs(direct - 1.25) < 1e-14);
    const RF w = RF::term(cplx(0.3, -1.0), 2, cplx(-0.5, 0.7)) + RF::term(1.0, 3, -2.0);
    for (int l = 1; l <= 2; ++l) {
      CHECK(angular_product(l, w, w).real() >= 0.0);
      CHECK(std::abs(angular_product(l, w, w).imag()) < 1e-14);
    }
    CHECK(angular_product(1, RF(), u) == cplx(0.0));
  }

  TEST_CASE("form identity chain") {
    const RF a = RF::term(1.0, 3, -1.0), b = RF::term(1.0, 4, -2.0);
    CHECK(form_chain_check(1, a, a).relative < 1e-12);
    CHECK(form_chain_check(2, b, a).relative < 1e-12);
    CHECK(form_chain_check(2, RF::term(1.0, 5, -1.0), RF::term(cplx(0.0, 1.0), 6, -0.5)).relative < 1e-12);
    const RF bad = RF::term(1.0, 1, -1.0);
    CHECK(form_chain_check(1, bad, bad).discrepancy > 1e-3);
  }

  TEST_CASE("psi map") {
    const RF a = RF::term(1.0, 3, -1.0);
    for (int l = 1; l <= 2; ++l) CHECK(psi_map_check(l, a).relative < 1e-11);
    const auto z = psi_map_check(1, RF());
    CHECK(z.angular == cplx(0.0));
    CHECK(z.reduced == cplx(0.0));
  }

  TEST_CASE("boundary density") {
    const RF v1 = discrete_eigenfunction(1, 1.5, false);
    CHECK(boundary_density(1, v1, 1e-6) == doctest::Approx(3.0 * std::pow(1.5, 4)).epsilon(1e-5));
    const RF v2 = discrete_eigenfunction(2, 1.5, false);
    const double r = 1e-4;
    CHECK(boundary_density(2, v2, r) * r * r == doctest::Approx(6.0 * std::pow(1.5, 4)).epsilon(1e-4));
    CHECK(boundary_density(1, RF(), 0.3) == 0.0);
  }

  TEST_CASE("counterterm coefficients") {
    const auto lit = CountertermCoefficients::literal();
    CHECK(lit.kappa_coeff[0] == doctest::Approx(22.0 * sqrt2 / 9.0));
    CHECK(lit.kappa_coeff[1] == doctest::Approx(80.0 * sqrt2 / 750.0));
    CHECK(lit.inverse_r_coeff[0] == doctest::Approx(5.0 / 3.0));
    CHECK(lit.inverse_r_coeff[1] == doctest::Approx(4.0));
    const auto cal = CountertermCoefficients::calibrated();
    CHECK(cal.kappa_coeff[0] == doctest::Approx(22.0 * sqrt2 / 27.0));
    CHECK(cal.kappa_coeff[1] == doctest::Approx(sqrt2 / 3.0));
    CHECK(cal.kappa_r_power[1] == 2);
    CHECK(cal.at(1, -std::numeric_limits<double>::infinity(), 0.5) == doctest::Approx(5.0 / 3.0 / 0.5));
  }

  TEST_CASE("calibration recovers the coefficients") {
    for (double k : {0.5, 1.0, 2.0}) {
      CHECK(calibrate_counterterm(1, k).value == doctest::Approx(22.0 * sqrt2 / 27.0).epsilon(1e-6));
      CHECK(calibrate_counterterm(2, k).value == doctest::Approx(sqrt2 / 3.0).epsilon(1e-6));
    }
  }

  TEST_CASE("extended form on eigenfunctions") {
    for (int l = 1; l <= 2; ++l)
      for (double k : {0.5, 1.0, 2.0}) {
        const auto F = single(l, 0, discrete_eigenfunction(l, k, true));
        const auto v = extended_form(F, uniform_kappa(k));
        CHECK(std::abs(v.value + std::pow(k, 4)) < 1e-6 * std::pow(k, 4));
        CHECK(v.per_component.size() == 1);
        CHECK(v.sequence.size() == v.cutoffs.size());
      }
    // The uncalibrated l = 2 coefficient does not give a convergent limit.
    const auto F2 = single(2, 1, discrete_eigenfunction(2, 1.0, true));
    CHECK_THROWS_AS(extended_form(F2, uniform_kappa(1.0), {}, CountertermCoefficients::literal()), ConvergenceFailure);
  }

  TEST_CASE("extended form on regular fields is kappa independent") {
    const vsh::TransverseField F{{{1, 0, RF::term(1.0, 4, -1.0)}, {2, -1, RF::term(cplx(0.5, 1.0), 5, -2.0)}}};
    double plain = 0.0;
    for (const auto& c : F.components) plain += inner_product(apply_T(c.l, c.u), apply_T(c.l, c.u)).real();
    for (double k : {-2.0, -1.0, 0.0, 0.5, 1.0, 3.0}) {
      const auto v = extended_form(F, uniform_kappa(k));
      CHECK(std::abs(v.value - plain) < 1e-10 * std::abs(plain));
    }
    const auto fried = extended_form(F, uniform_kappa(-std::numeric_limits<double>::infinity()));
    CHECK(std::abs(fried.value - plain) < 1e-10 * std::abs(plain));
    CHECK(extended_form(vsh::TransverseField{}, uniform_kappa(1.0)).value == 0.0);
  }

  TEST_CASE("domain violations") {
    CHECK_THROWS_AS(extended_form(single(1, 0, RF::term(1.0, 3, -1.0)), uniform_kappa(1.0)), DomainViolation);
    CHECK_THROWS_AS(extended_form(single(1, 0, discrete_eigenfunction(1, 1.0, true)), uniform_kappa(2.0)), DomainViolation);
  }

  TEST_CASE("json report") {
    const auto v = extended_form(single(1, 0, discrete_eigenfunction(1, 1.0, true)), uniform_kappa(1.0));
    const auto j = to_json(v);
    CHECK(j.contains("value"));
    CHECK(j.at("per_component").size() == 1);
    CHECK(j.at("per_component")[0].contains("counterterm"));
    CHECK(j.at("cutoffs").size() == v.cutoffs.size());
  }
}
