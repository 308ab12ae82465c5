#pragma once

// Scalar products and quadratic forms on radial profiles and transverse
// fields: the angular product <v, u>_l, the form identity chain, and the
// extended form Q_kappa with cutoff counterterms.

#include <array>
#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "tvl/numerics.hpp"
#include "tvl/radial_function.hpp"
#include "tvl/vsh.hpp"

namespace tvl::quadform {

/// int (conj(v)' u' + l(l+1)/r^2 conj(v) u) dr, exact.
cplx angular_product(int l, const RadialFunction& v, const RadialFunction& u);

struct ChainCheck {
  cplx angular;  // <v, T_l u>_l
  cplx product;  // (T_l v, T_l u)
  cplx direct;   // (v, T_l^2 u)
  double discrepancy;
  double relative;
};

/// Evaluates the three members of the form identity chain; non-core input
/// shows up as a nonzero (possibly infinite) discrepancy, not an error.
ChainCheck form_chain_check(int l, const RadialFunction& v, const RadialFunction& u);

struct PsiMapCheck {
  cplx angular;  // <u, T_l u>_l
  cplx reduced;  // (E_l u, T_{l-1} E_l u)
  double discrepancy;
  double relative;
};
PsiMapCheck psi_map_check(int l, const RadialFunction& u);

/// |u'(r)|^2 + l(l+1)/r^2 |u(r)|^2.
double boundary_density(int l, const RadialFunction& u, double r);

/// Counterterm (k_l kappa^(2l-1) r^p_l + c_l / r) f_lm^2(r) subtracted at the cutoff.
struct CountertermCoefficients {
  std::array<double, 2> kappa_coeff;
  std::array<int, 2> kappa_r_power;
  std::array<double, 2> inverse_r_coeff;

  /// Uncalibrated values 22 sqrt2/9 and 80 sqrt2/750 with no r power.
  static CountertermCoefficients literal();
  /// Values fixed by convergence on the exact eigenfunctions:
  /// 22 sqrt2/27 (l=1) and sqrt2/3 with r^2 (l=2).
  static CountertermCoefficients calibrated();

  double at(int l, double kappa, double r) const;
};

using KappaMap = std::function<double(int l, int m)>;
KappaMap uniform_kappa(double kappa);

/// Halving sequence r0, r0/2, ... (count values).
std::vector<double> default_cutoffs(double r0 = 0.5, int count = 7);

struct ComponentValue {
  int l;
  int m;
  double kappa;
  double bulk;         // regularized bulk at the smallest cutoff
  double counterterm;  // subtracted boundary term at the smallest cutoff
};

struct FormValue {
  double value = 0.0;
  double error = 0.0;
  std::vector<ComponentValue> per_component;
  std::vector<double> cutoffs;
  std::vector<double> sequence;  // regularized totals at each cutoff
};

/// Dirichlet integral of one component outside the ball B_r:
/// int_r^inf conj(u) T^2 u - conj(u) (T u)'(r) - r^2 (conj(y) y' + conj(psi) psi')(r).
double bulk_outside(int l, const RadialFunction& u, double r);

/// lim_{r -> 0} (bulk outside B_r - counterterms), extrapolated over
/// `cutoffs`. An empty list selects default_cutoffs(0.5 / kappa_ref) with
/// kappa_ref the largest finite nonzero |kappa| of the components (else 1),
/// which keeps kappa r in the same range for every kappa. Fields whose
/// boundary density vanishes faster than r use default_cutoffs(0.01)
/// since nothing cancels there. Throws DomainViolation when a component fails its boundary
/// conditions by more than domain_tol and ConvergenceFailure when the
/// extrapolation error exceeds convergence_tol (1 + |value|).
FormValue extended_form(const vsh::TransverseField& F, const KappaMap& kappa,
                        std::vector<double> cutoffs = {},
                        const CountertermCoefficients& coeffs = CountertermCoefficients::calibrated(),
                        double domain_tol = 1e-8, double convergence_tol = 1e-6);

/// The kappa counterterm coefficient that makes extended_form return -kappa^4
/// on the normalized eigenfunction v_l, by extrapolation over `cutoffs`
/// (empty: default_cutoffs(0.5 / kappa)).
numerics::Extrapolation calibrate_counterterm(int l, double kappa, std::vector<double> cutoffs = {});

nlohmann::json to_json(const FormValue& v);

}  // namespace tvl::quadform
