#include "tvl/quadform.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "tvl/errors.hpp"
#include "tvl/spectral.hpp"

namespace tvl::quadform {

using std::numbers::sqrt2;

namespace {

double relative_to(double diff, std::initializer_list<cplx> values) {
  double scale = 0.0;
  for (cplx v : values) scale = std::max(scale, std::abs(v));
  return scale > 0.0 ? diff / scale : diff;
}

double max_pairwise(std::initializer_list<cplx> values) {
  double worst = 0.0;
  for (auto a = values.begin(); a != values.end(); ++a)
    for (auto b = a + 1; b != values.end(); ++b) worst = std::max(worst, std::abs(*a - *b));
  return worst;
}

// A member that diverges at zero (non-core input) is reported as infinite.
template <class F>
cplx or_infinite(const F& f) {
  try {
    return f();
  } catch (const DivergentAtZero&) {
    return {std::numeric_limits<double>::infinity(), 0.0};
  }
}

// f^2 / r -> 0: u'(0) = 0 (l = 1) or u(0) = 0 (l = 2) on top of the boundary conditions.
bool regular_at_zero(int l, const RadialFunction& u) {
  if (u.min_power() < 0) return false;
  return series_at_zero(u, 0, 1).vanishes(l == 1 ? 1 : 0);
}

void require_l(int l) {
  if (l != 1 && l != 2) throw DomainViolation("quadform: l must be 1 or 2");
}

}  // namespace

cplx angular_product(int l, const RadialFunction& v, const RadialFunction& u) {
  const RadialFunction cv = conj(v);
  const RadialFunction integrand =
      differentiate(cv) * differentiate(u) + times_power(cv * u, -2) * (l * (l + 1.0));
  return integrate_halfline(integrand);
}

ChainCheck form_chain_check(int l, const RadialFunction& v, const RadialFunction& u) {
  ChainCheck c;
  c.angular = or_infinite([&] { return angular_product(l, v, apply_T(l, u)); });
  c.product = or_infinite([&] { return inner_product(apply_T(l, v), apply_T(l, u)); });
  c.direct = or_infinite([&] { return inner_product(v, apply_T2(l, u)); });
  const bool finite = std::isfinite(c.angular.real()) && std::isfinite(c.product.real()) &&
                      std::isfinite(c.direct.real());
  c.discrepancy = finite ? max_pairwise({c.angular, c.product, c.direct}) : std::numeric_limits<double>::infinity();
  c.relative = finite ? relative_to(c.discrepancy, {c.angular, c.product, c.direct}) : c.discrepancy;
  return c;
}

PsiMapCheck psi_map_check(int l, const RadialFunction& u) {
  if (l < 1) throw DomainViolation("psi_map_check: l >= 1");
  PsiMapCheck c;
  c.angular = angular_product(l, u, apply_T(l, u));
  const RadialFunction psi = apply_E(l, u, false);
  c.reduced = inner_product(psi, apply_T(l - 1, psi));
  c.discrepancy = std::abs(c.angular - c.reduced);
  c.relative = relative_to(c.discrepancy, {c.angular, c.reduced});
  return c;
}

double boundary_density(int l, const RadialFunction& u, double r) {
  if (!(r > 0.0)) throw DomainViolation("boundary_density: r must be positive");
  return std::norm(evaluate_derivative(u, r, 1)) + l * (l + 1.0) / (r * r) * std::norm(evaluate(u, r));
}

CountertermCoefficients CountertermCoefficients::literal() {
  return {{22 * sqrt2 / 9, 80 * sqrt2 / 750}, {0, 0}, {5.0 / 3.0, 4.0}};
}

CountertermCoefficients CountertermCoefficients::calibrated() {
  return {{22 * sqrt2 / 27, sqrt2 / 3}, {0, 2}, {5.0 / 3.0, 4.0}};
}

double CountertermCoefficients::at(int l, double kappa, double r) const {
  require_l(l);
  const int i = l - 1;
  double c = inverse_r_coeff[i] / r;
  if (std::isfinite(kappa)) c += kappa_coeff[i] * std::pow(kappa, 2 * l - 1) * std::pow(r, kappa_r_power[i]);
  return c;
}

KappaMap uniform_kappa(double kappa) {
  return [kappa](int, int) { return kappa; };
}

std::vector<double> default_cutoffs(double r0, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(r0 / std::pow(2.0, i));
  return out;
}

double bulk_outside(int l, const RadialFunction& u, double r) {
  if (!(r > 0.0)) throw DomainViolation("bulk_outside: r must be positive");
  const RadialFunction cu = conj(u);
  const cplx volume = integrate_tail(cu * apply_T2(l, u), r);
  const cplx ub = std::conj(evaluate(u, r));
  const cplx flux = ub * evaluate_derivative(apply_T(l, u), r, 1);
  const double L = std::sqrt(l * (l + 1.0));
  const cplx u0 = evaluate(u, r), u1 = evaluate_derivative(u, r, 1), u2 = evaluate_derivative(u, r, 2);
  const cplx y = L * u0 / (r * r), dy = L * (u1 / (r * r) - 2.0 * u0 / (r * r * r));
  const cplx psi = u1 / r, dpsi = u2 / r - u1 / (r * r);
  const cplx surface = r * r * (std::conj(y) * dy + std::conj(psi) * dpsi);
  return (volume - flux - surface).real();
}

FormValue extended_form(const vsh::TransverseField& F, const KappaMap& kappa, std::vector<double> cutoffs,
                        const CountertermCoefficients& coeffs, double domain_tol, double convergence_tol) {
  if (cutoffs.empty()) {
    double ref = 0.0;
    bool singular = false;
    for (const auto& c : F.components) {
      const double k = kappa(c.l, c.m);
      if (std::isfinite(k)) ref = std::max(ref, std::abs(k));
      singular = singular || !regular_at_zero(c.l, c.u);
    }
    cutoffs = default_cutoffs(singular ? 0.5 / (ref > 0.0 ? ref : 1.0) : 0.01);
  }
  if (cutoffs.size() < 2) throw DomainViolation("extended_form: need at least two cutoffs");
  for (const auto& c : F.components) {
    require_l(c.l);
    const double res = boundary_residual(c.l, c.u, kappa(c.l, c.m));
    if (!(res <= domain_tol))
      throw DomainViolation("extended_form: component (" + std::to_string(c.l) + ", " + std::to_string(c.m) +
                            ") violates its boundary conditions, residual " + std::to_string(res));
  }
  FormValue out;
  out.cutoffs = cutoffs;
  std::vector<ComponentValue> latest;
  for (double r : cutoffs) {
    double total = 0.0;
    latest.clear();
    for (const auto& c : F.components) {
      const double k = kappa(c.l, c.m);
      const double bulk = bulk_outside(c.l, c.u, r);
      const double counter = coeffs.at(c.l, k, r) * boundary_density(c.l, c.u, r);
      total += bulk - counter;
      latest.push_back({c.l, c.m, k, bulk, counter});
    }
    out.sequence.push_back(total);
  }
  out.per_component = latest;
  const auto ex = numerics::extrapolate_to_zero(out.cutoffs, out.sequence);
  out.value = ex.value;
  out.error = ex.error;
  if (!(out.error <= convergence_tol * (1.0 + std::abs(out.value))))
    throw ConvergenceFailure("extended_form: cutoff sequence does not converge, error " +
                             std::to_string(out.error));
  return out;
}

numerics::Extrapolation calibrate_counterterm(int l, double kappa, std::vector<double> cutoffs) {
  require_l(l);
  if (!(kappa > 0.0)) throw DomainViolation("calibrate_counterterm: kappa must be positive");
  if (cutoffs.empty()) cutoffs = default_cutoffs(0.5 / kappa);
  const RadialFunction u = discrete_eigenfunction(l, kappa, true);
  const CountertermCoefficients base = CountertermCoefficients::calibrated();
  const double k4 = std::pow(kappa, 4);
  std::vector<double> ys;
  for (double r : cutoffs) {
    const double f2 = boundary_density(l, u, r);
    const double residual = bulk_outside(l, u, r) - base.inverse_r_coeff[l - 1] / r * f2 + k4;
    ys.push_back(residual / (std::pow(kappa, 2 * l - 1) * std::pow(r, base.kappa_r_power[l - 1]) * f2));
  }
  return numerics::extrapolate_to_zero(cutoffs, ys);
}

nlohmann::json to_json(const FormValue& v) {
  auto number = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    return x > 0 ? "inf" : "-inf";
  };
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : v.per_component)
    comps.push_back({{"l", c.l}, {"m", c.m}, {"bulk", c.bulk}, {"counterterm", c.counterterm},
                     {"kappa", number(c.kappa)}});
  return {{"value", v.value}, {"error", v.error}, {"per_component", comps}, {"cutoffs", v.cutoffs},
          {"sequence", v.sequence}};
}

}  // namespace tvl::quadform
