#pragma once

// Resolvent and inverse kernels of the extended T_l^2 as piecewise-separable
// two-point functions.

#include <functional>
#include <iosfwd>
#include <limits>
#include <utility>
#include <vector>

#include "tvl/numerics.hpp"
#include "tvl/radial_function.hpp"

namespace tvl {

/// A radial function restricted to [0, support].
struct SupportedFunction {
  RadialFunction f;
  double support = std::numeric_limits<double>::infinity();
};

/// The bump r^2 (R - r)^2, unit L^2 norm, as an exact supported function.
SupportedFunction bump_function(const numerics::BumpTestFunction& bump);

/// c A(min(r, s)) B(max(r, s)).
struct KernelBlock {
  cplx coeff;
  RadialFunction lesser;
  RadialFunction greater;
};

/// c A(r) B(s) with no ordering; callers keep the sum symmetric.
struct SmoothTerm {
  cplx coeff;
  RadialFunction left;
  RadialFunction right;
};

class SeparableKernel {
 public:
  SeparableKernel() = default;
  SeparableKernel(std::vector<KernelBlock> blocks, std::vector<SmoothTerm> smooth = {})
      : blocks_(std::move(blocks)), smooth_(std::move(smooth)) {}

  const std::vector<KernelBlock>& blocks() const { return blocks_; }
  const std::vector<SmoothTerm>& smooth() const { return smooth_; }
  bool empty() const { return blocks_.empty() && smooth_.empty(); }

  cplx operator()(double r, double s) const;

  /// (K f)(r) by exact piecewise integration split at s = r.
  cplx apply(const SupportedFunction& f, double r) const;
  /// (K f)(r) for a sampled f by adaptive quadrature on [0, r] and [r, support].
  cplx apply(const std::function<cplx(double)>& f, double support, double r,
             const numerics::QuadratureSpec& spec = {}) const;

  SeparableKernel operator+(const SeparableKernel& o) const;

 private:
  std::vector<KernelBlock> blocks_;
  std::vector<SmoothTerm> smooth_;
};

/// Closed-form coefficients of the resolvent.
struct ResolventCoefficients {
  cplx z;
  cplx alpha_plus, alpha_minus, beta_plus, beta_minus;
  cplx W_plus, W_minus;
};

/// Throws DomainViolation outside 0 < arg z < pi/2 and DegenerateZ when the
/// common denominator vanishes (z^4 = -kappa^4 resonance).
ResolventCoefficients resolvent_coefficients(int l, cplx z, double kappa);

/// The four radial components of the resolvent.
struct ResolventComponents {
  RadialFunction h_minus, h_plus;  // regular at 0, satisfy the boundary conditions
  RadialFunction g_minus, g_plus;  // decaying at infinity
  RadialFunction h_minus_reduced, h_plus_reduced;  // h without the beta terms
};
ResolventComponents resolvent_components(int l, cplx z, double kappa);

/// Second-order Wronskians W[g, h~] = g h~' - g' h~ of the component pairs at
/// r, as (W_-, W_+); constant in r and equal to the closed forms.
std::pair<cplx, cplx> component_wronskians(int l, cplx z, double kappa, double r);

/// R(r, s; z) = h_-(min) g_-(max)/(2 z^2 W_-) - h_+(min) g_+(max)/(2 z^2 W_+).
SeparableKernel build_resolvent(int l, cplx z, double kappa);

/// The same kernel split into reduced blocks plus the symmetric part
/// R_g = (beta_-/(2 z^2 W_-)) (g_+(r) g_-(s) + g_+(s) g_-(r)).
SeparableKernel build_resolvent_split(int l, cplx z, double kappa);

/// Theta_l = T_l^{-2} plus the extension's rank-one correction.
SeparableKernel inverse_kernel(int l, double kappa);
/// Green kernel of T_l alone: (1/3) r^2/s (l=1), (1/5) r^3/s^2 (l=2) for r < s.
SeparableKernel inverse_T_kernel(int l);

/// max over the (r, s) grid of |R(r, s; z) - Theta_l(r, s)| for each z.
std::vector<double> resolvent_zero_limit_check(int l, double kappa, const std::vector<cplx>& zs,
                                               const std::vector<double>& grid);

/// Weak identity <phi, (T_l^2 - shift) K psi> = <phi, psi> tested with bumps.
numerics::SmearResult kernel_smear_check(const SeparableKernel& K, int l, cplx shift,
                                         const numerics::BumpTestFunction& phi,
                                         const numerics::BumpTestFunction& psi);

/// CSV rows r,s,re,im over the product grid.
void write_kernel_csv(std::ostream& os, const SeparableKernel& K, const std::vector<double>& rs,
                      const std::vector<double>& ss);

}  // namespace tvl
