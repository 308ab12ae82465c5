#pragma once

// Self-adjoint extensions of T_l^2, l in {1, 2}: deficiency elements,
// boundary conditions, discrete and continuous eigenfunctions, and
// spectral synthesis through wave packets.

#include <functional>
#include <optional>
#include <vector>

#include "tvl/radial_function.hpp"

namespace tvl {

/// (l, kappa) identifying an extension. kappa = -infinity is the Friedrichs case.
struct ExtensionParams {
  int l = 1;
  double kappa = 0.0;

  ExtensionParams() = default;
  ExtensionParams(int l_, double kappa_);
  static ExtensionParams from_cayley(int l, double a, double rho);

  bool has_discrete() const { return kappa > 0.0; }
  double discrete_eigenvalue() const;  // -kappa^4
};

/// g_{l+} = D_l(exp(e^{i5pi/8} rho r) - exp(e^{i9pi/8} rho r)),
/// g_{l-} = D_l(exp(e^{i7pi/8} rho r) - exp(e^{i11pi/8} rho r)).
RadialFunction deficiency_element(int l, int sign, double rho);

/// The real element of span{g_{l+}, g_{l-}} with leading expansion
/// l=1: sin a rho r + (sqrt2/3) cos(a + pi/8) rho^2 r^2 + O(r^4),
/// l=2: sin a rho^2 + (sqrt2/15) cos(a - pi/8) rho^5 r^3 + O(r^4).
RadialFunction extension_element(int l, double a, double rho);

/// Mixing coefficients (lambda_+, lambda_-) of extension_element.
std::pair<cplx, cplx> extension_mixing(int l, double a, double rho);

/// kappa(a): -rho cos(a + pi/8)/sin a for l = 1, the real cube root of
/// -rho^3 cos(a - pi/8)/sin a for l = 2; -infinity at a = 0.
double kappa_from_a(int l, double a, double rho);

/// Largest normalized residual of the boundary conditions at zero.
///   l=1: u(0) = u'''(0) = 0, u''(0) = -(2 sqrt2/3) kappa u'(0)
///   l=2: u'(0) = u''(0) = 0, u'''(0) = -(2 sqrt2/5) kappa^3 u(0)
/// Vanishing conditions are measured against the cancellation scale of the
/// series coefficient; the ratio condition as |p + q| / (|p| + |q|).
double boundary_residual(int l, const RadialFunction& u, double kappa);

/// <v, T_l^2 u> - <T_l^2 v, u>.
cplx symmetry_check(int l, const RadialFunction& u, const RadialFunction& v);

/// v~ = i D_l(exp(e^{-i3pi/4} kappa r) - exp(e^{i3pi/4} kappa r)), scaled to
/// unit norm when `normalized`.
RadialFunction discrete_eigenfunction(int l, double kappa, bool normalized);

/// Squared norm of the unnormalized discrete eigenfunction:
/// kappa/sqrt2 (l=1), 3 kappa^3/sqrt2 (l=2).
double discrete_norm_squared(int l, double kappa);

/// sigma_1 = lambda/(lambda - sqrt2 kappa), sigma_2 = -lambda^3/(lambda^3 + sqrt2 kappa^3).
/// Returns +-infinity at the pole.
double sigma(int l, double lambda, double kappa);

/// u^lambda = sqrt(2/pi) lambda^{-l} D_l(cos t sin(lambda r) + sin t (cos(lambda r) - e^{-lambda r}))
/// with (cos t, sin t) proportional to (1, sigma), the sign fixed so the
/// family is continuous through the pole of sigma. Delta-normalized in lambda.
/// Unnormalized: D_l(sin(lambda r) + sigma (cos(lambda r) - e^{-lambda r})).
RadialFunction continuous_eigenfunction(int l, double lambda, double kappa, bool normalized = true);

struct GaussianEnvelope {
  double center = 1.0;
  double width = 0.2;

  double operator()(double lambda) const;
  double lower() const;  // support truncated at 6 widths, clipped at 0
  double upper() const;
  double squared_integral() const;  // int env^2 over the truncated support
};

struct WavePacketSpec {
  double r_max = 0.0;       // 0: chosen from the narrowest envelope
  int lambda_order = 16;    // Gauss-Legendre order per lambda panel
  int max_lambda_panels = 64;
  double self_consistency = 1e-6;
};

struct WavePacketReport {
  std::vector<std::vector<double>> overlaps;  // int P_i P_j dr
  std::vector<double> envelope_norms;         // int env_i^2 dlambda
  std::vector<double> discrete_overlaps;      // <P_i, v> (empty if kappa <= 0)
  double r_max = 0.0;
  int lambda_panels = 0;
  std::vector<std::function<double(double)>> packets;
};

/// Packets P_i(r) = int env_i(lambda) u^lambda(r) dlambda and their mutual
/// L^2 overlaps on [0, r_max].
WavePacketReport overlap_wavepacket(int l, double kappa, const std::vector<GaussianEnvelope>& envelopes,
                                    const WavePacketSpec& spec = {});

/// Spectral synthesis v<v, g> + int_0^lambda_max u^lambda <u^lambda, g> dlambda.
class Reconstruction {
 public:
  Reconstruction(int l, double kappa, const RadialFunction& g, double lambda_max,
                 double panel_width = 0.5, int order = 16);

  double operator()(double r) const;
  double discrete_coefficient() const { return discrete_coeff_; }
  double lambda_max() const { return lambda_max_; }

 private:
  std::optional<RadialFunction> discrete_;
  double discrete_coeff_ = 0.0;
  double lambda_max_ = 0.0;
  std::vector<RadialFunction> modes_;
  std::vector<double> weights_;  // quadrature weight times <u^lambda, g>
};

}  // namespace tvl
