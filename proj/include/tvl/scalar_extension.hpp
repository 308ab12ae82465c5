#pragma once

// Self-adjoint extensions of T = -d^2/dr^2 on the half-line.

#include "tvl/radial_function.hpp"

namespace tvl {

struct ScalarExtension {
  double a = 0.0;    // unitary parameter, e^{2ia}; 0 <= a < pi
  double rho = 1.0;  // scale, 1/length

  ScalarExtension() = default;
  ScalarExtension(double a_, double rho_);
};

/// g_+ = exp(e^{-i3pi/4} rho r) for sign > 0, g_- = exp(e^{i3pi/4} rho r) otherwise.
/// With these rates T g_+ = -i rho^2 g_+ and T g_- = +i rho^2 g_-.
RadialFunction scalar_deficiency(int sign, const ScalarExtension& ext);

/// h^a = (e^{ia} g_+ - e^{-ia} g_-) / (2i rho^2).
RadialFunction scalar_extension_element(const ScalarExtension& ext);

/// kappa = rho sin(a - pi/4) / sin a; -infinity at a = 0.
double scalar_kappa(const ScalarExtension& ext);

/// |rho sin(a - pi/4) u(0) + sin a u'(0)| over the sum of the two magnitudes.
double scalar_boundary_residual(const RadialFunction& u, const ScalarExtension& ext);

/// Q_a(u) = -kappa |u(0)|^2 + int |u'|^2. For kappa = -infinity the form is
/// finite only when u(0) = 0, otherwise +infinity.
double scalar_form(const RadialFunction& u, const ScalarExtension& ext);

}  // namespace tvl
