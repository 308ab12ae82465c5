#include "tvl/scalar_extension.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace tvl {

using std::numbers::pi;

ScalarExtension::ScalarExtension(double a_, double rho_) : a(a_), rho(rho_) {
  if (!(a >= 0.0 && a < pi)) throw DomainViolation("scalar extension: a must lie in [0, pi)");
  if (!(rho > 0.0)) throw DomainViolation("scalar extension: rho must be positive");
}

RadialFunction scalar_deficiency(int sign, const ScalarExtension& ext) {
  const double angle = sign > 0 ? -3.0 * pi / 4.0 : 3.0 * pi / 4.0;
  return RadialFunction::exponential(std::polar(ext.rho, angle));
}

RadialFunction scalar_extension_element(const ScalarExtension& ext) {
  const cplx denom = cplx(0.0, 2.0) * ext.rho * ext.rho;
  return scalar_deficiency(+1, ext) * (std::polar(1.0, ext.a) / denom) -
         scalar_deficiency(-1, ext) * (std::polar(1.0, -ext.a) / denom);
}

double scalar_kappa(const ScalarExtension& ext) {
  if (ext.a == 0.0) return -std::numeric_limits<double>::infinity();
  return ext.rho * std::sin(ext.a - pi / 4.0) / std::sin(ext.a);
}

double scalar_boundary_residual(const RadialFunction& u, const ScalarExtension& ext) {
  const auto bv = boundary_values(u, 1);
  const cplx p = ext.rho * std::sin(ext.a - pi / 4.0) * bv[0];
  const cplx q = std::sin(ext.a) * bv[1];
  const double scale = std::abs(p) + std::abs(q);
  return scale == 0.0 ? 0.0 : std::abs(p + q) / scale;
}

double scalar_form(const RadialFunction& u, const ScalarExtension& ext) {
  const RadialFunction du = differentiate(u);
  const double bulk = inner_product(du, du).real();
  const double u0 = std::abs(boundary_values(u, 0)[0]);
  const double kappa = scalar_kappa(ext);
  if (std::isinf(kappa)) {
    // The Friedrichs form domain requires u(0) = 0.
    if (u0 > 1e-12 * std::max(1.0, u.max_abs_coeff())) return std::numeric_limits<double>::infinity();
    return bulk;
  }
  return -kappa * u0 * u0 + bulk;
}

}  // namespace tvl
