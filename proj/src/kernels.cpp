#include "tvl/kernels.hpp"

#include <cmath>
#include <numbers>
#include <cstdio>
#include <ostream>

namespace tvl {

using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

void require_l(int l) {
  if (l != 1 && l != 2) throw DomainViolation("l must be 1 or 2");
}

// int_0^min(x, support) of g f.
cplx lower_integral(const RadialFunction& g, const SupportedFunction& f, double x) {
  const double top = std::min(x, f.support);
  if (top <= 0.0) return 0.0;
  return integrate_interval(g * f.f, 0.0, top);
}

// int_x^support of g f.
cplx upper_integral(const RadialFunction& g, const SupportedFunction& f, double x) {
  if (x >= f.support) return 0.0;
  const RadialFunction prod = g * f.f;
  if (std::isinf(f.support)) return x == 0.0 ? integrate_halfline(prod) : integrate_tail(prod, x);
  return integrate_interval(prod, x, f.support);
}

}  // namespace

SupportedFunction bump_function(const numerics::BumpTestFunction& bump) {
  const double R = bump.support;
  const double n = bump.norm_factor();
  RadialFunction f = RadialFunction::monomial(2, n * R * R) + RadialFunction::monomial(3, -2.0 * n * R) +
                     RadialFunction::monomial(4, n);
  return {f, R};
}

cplx SeparableKernel::operator()(double r, double s) const {
  const double lo = std::min(r, s), hi = std::max(r, s);
  cplx sum = 0.0;
  for (const auto& b : blocks_) sum += b.coeff * evaluate(b.lesser, lo) * evaluate(b.greater, hi);
  for (const auto& t : smooth_) sum += t.coeff * evaluate(t.left, r) * evaluate(t.right, s);
  return sum;
}

cplx SeparableKernel::apply(const SupportedFunction& f, double r) const {
  if (!(r > 0.0)) throw DomainViolation("apply: r must be positive");
  cplx sum = 0.0;
  for (const auto& b : blocks_) {
    sum += b.coeff * (evaluate(b.greater, r) * lower_integral(b.lesser, f, r) +
                      evaluate(b.lesser, r) * upper_integral(b.greater, f, r));
  }
  for (const auto& t : smooth_) sum += t.coeff * evaluate(t.left, r) * upper_integral(t.right, f, 0.0);
  return sum;
}

cplx SeparableKernel::apply(const std::function<cplx(double)>& f, double support, double r,
                            const numerics::QuadratureSpec& spec) const {
  if (!(r > 0.0)) throw DomainViolation("apply: r must be positive");
  auto piece = [&](const std::function<cplx(double)>& g, double a, double b) -> cplx {
    if (b <= a) return 0.0;
    if (std::isinf(b)) {
      auto mapped = [&](double t) {
        const double om = 1.0 - t;
        return g(a + t / om) / (om * om);
      };
      return numerics::quad_interval(mapped, 0.0, 1.0, spec).value;
    }
    return numerics::quad_interval(g, a, b, spec).value;
  };
  cplx sum = 0.0;
  for (const auto& b : blocks_) {
    auto low = [&](double s) { return evaluate(b.lesser, s) * f(s); };
    auto high = [&](double s) { return evaluate(b.greater, s) * f(s); };
    sum += b.coeff * (evaluate(b.greater, r) * piece(low, 0.0, std::min(r, support)) +
                      evaluate(b.lesser, r) * piece(high, r, support));
  }
  for (const auto& t : smooth_) {
    auto right = [&](double s) { return evaluate(t.right, s) * f(s); };
    sum += t.coeff * evaluate(t.left, r) * piece(right, 0.0, support);
  }
  return sum;
}

SeparableKernel SeparableKernel::operator+(const SeparableKernel& o) const {
  auto blocks = blocks_;
  blocks.insert(blocks.end(), o.blocks_.begin(), o.blocks_.end());
  auto smooth = smooth_;
  smooth.insert(smooth.end(), o.smooth_.begin(), o.smooth_.end());
  return SeparableKernel(std::move(blocks), std::move(smooth));
}

ResolventCoefficients resolvent_coefficients(int l, cplx z, double kappa) {
  require_l(l);
  const double arg = std::arg(z);
  if (!(arg > 0.0 && arg < pi / 2) || !std::isfinite(kappa))
    throw DomainViolation("resolvent: need 0 < arg z < pi/2 and finite kappa");
  const cplx i(0.0, 1.0);
  ResolventCoefficients c;
  c.z = z;
  if (l == 1) {
    const cplx den = (i - 1.0) * z + sqrt2 * kappa;
    if (std::abs(den) <= 1e-10 * (std::abs(z) + std::abs(kappa)))
      throw DegenerateZ("resolvent: z^4 = -kappa^4 is the discrete eigenvalue");
    c.alpha_plus = -((i + 1.0) * z + sqrt2 * kappa) / den;
    c.beta_plus = 2.0 * z / den;
    c.alpha_minus = ((i + 1.0) * z - sqrt2 * kappa) / den;
    c.beta_minus = -2.0 * i * z / den;
    const cplx z3 = z * z * z;
    c.W_minus = -2.0 * i * z3;
    c.W_plus = -2.0 * z3;
  } else {
    const cplx z3 = z * z * z;
    const double k3 = kappa * kappa * kappa;
    const cplx den = (i + 1.0) * z3 + sqrt2 * k3;
    if (std::abs(den) <= 1e-10 * (std::abs(z3) + std::abs(k3)))
      throw DegenerateZ("resolvent: z^4 = -kappa^4 is the discrete eigenvalue");
    c.alpha_plus = -((i - 1.0) * z3 + sqrt2 * k3) / den;
    c.beta_plus = -2.0 * z3 / den;
    c.alpha_minus = -((1.0 - i) * z3 + sqrt2 * k3) / den;
    c.beta_minus = -2.0 * i * z3 / den;
    const cplx z5 = z3 * z * z;
    c.W_minus = -2.0 * i * z5;
    c.W_plus = 2.0 * z5;
  }
  return c;
}

ResolventComponents resolvent_components(int l, cplx z, double kappa) {
  const ResolventCoefficients c = resolvent_coefficients(l, z, kappa);
  const cplx i(0.0, 1.0);
  using RF = RadialFunction;
  ResolventComponents out;
  out.g_plus = apply_D(l, RF::exponential(-z));
  out.g_minus = apply_D(l, RF::exponential(i * z));
  out.h_minus_reduced = apply_D(l, RF::exponential(-i * z) + RF::exponential(i * z, c.alpha_minus));
  out.h_plus_reduced = apply_D(l, RF::exponential(z) + RF::exponential(-z, c.alpha_plus));
  out.h_minus = out.h_minus_reduced + out.g_plus * c.beta_minus;
  out.h_plus = out.h_plus_reduced + out.g_minus * c.beta_plus;
  return out;
}

std::pair<cplx, cplx> component_wronskians(int l, cplx z, double kappa, double r) {
  const ResolventComponents p = resolvent_components(l, z, kappa);
  auto W = [r](const RadialFunction& g, const RadialFunction& h) {
    return evaluate(g, r) * evaluate_derivative(h, r, 1) - evaluate_derivative(g, r, 1) * evaluate(h, r);
  };
  return {W(p.g_minus, p.h_minus_reduced), W(p.g_plus, p.h_plus_reduced)};
}

SeparableKernel build_resolvent(int l, cplx z, double kappa) {
  const ResolventCoefficients c = resolvent_coefficients(l, z, kappa);
  const ResolventComponents p = resolvent_components(l, z, kappa);
  const cplx z2 = z * z;
  return SeparableKernel({{1.0 / (2.0 * z2 * c.W_minus), p.h_minus, p.g_minus},
                          {-1.0 / (2.0 * z2 * c.W_plus), p.h_plus, p.g_plus}});
}

SeparableKernel build_resolvent_split(int l, cplx z, double kappa) {
  const ResolventCoefficients c = resolvent_coefficients(l, z, kappa);
  const ResolventComponents p = resolvent_components(l, z, kappa);
  const cplx z2 = z * z;
  const cplx q = c.beta_minus / (2.0 * z2 * c.W_minus);
  return SeparableKernel({{1.0 / (2.0 * z2 * c.W_minus), p.h_minus_reduced, p.g_minus},
                          {-1.0 / (2.0 * z2 * c.W_plus), p.h_plus_reduced, p.g_plus}},
                         {{q, p.g_plus, p.g_minus}, {q, p.g_minus, p.g_plus}});
}

SeparableKernel inverse_kernel(int l, double kappa) {
  require_l(l);
  if (kappa == 0.0 || !std::isfinite(kappa)) throw DomainViolation("inverse kernel needs finite nonzero kappa");
  using RF = RadialFunction;
  if (l == 1) {
    return SeparableKernel({{1.0 / 6.0, RF::monomial(2), RF::monomial(1)}, {-1.0 / 30.0, RF::monomial(4), RF::monomial(-1)}},
                           {{-1.0 / (2.0 * sqrt2 * kappa), RF::monomial(1), RF::monomial(1)}});
  }
  return SeparableKernel({{1.0 / 30.0, RF::monomial(3), RF::constant(1.0)}, {-1.0 / 70.0, RF::monomial(5), RF::monomial(-2)}},
                         {{-1.0 / (2.0 * sqrt2 * kappa * kappa * kappa), RF::constant(1.0), RF::constant(1.0)}});
}

SeparableKernel inverse_T_kernel(int l) {
  require_l(l);
  using RF = RadialFunction;
  if (l == 1) return SeparableKernel({{1.0 / 3.0, RF::monomial(2), RF::monomial(-1)}});
  return SeparableKernel({{1.0 / 5.0, RF::monomial(3), RF::monomial(-2)}});
}

std::vector<double> resolvent_zero_limit_check(int l, double kappa, const std::vector<cplx>& zs,
                                               const std::vector<double>& grid) {
  const SeparableKernel theta = inverse_kernel(l, kappa);
  std::vector<double> out;
  for (cplx z : zs) {
    const SeparableKernel R = build_resolvent(l, z, kappa);
    double worst = 0.0;
    for (double r : grid)
      for (double s : grid) worst = std::max(worst, std::abs(R(r, s) - theta(r, s)));
    out.push_back(worst);
  }
  return out;
}

numerics::SmearResult kernel_smear_check(const SeparableKernel& K, int l, cplx shift,
                                         const numerics::BumpTestFunction& phi,
                                         const numerics::BumpTestFunction& psi) {
  const SupportedFunction f = bump_function(psi);
  return numerics::smear_check([&](double r) { return K.apply(f, r); }, l, shift, phi, psi);
}

void write_kernel_csv(std::ostream& os, const SeparableKernel& K, const std::vector<double>& rs,
                      const std::vector<double>& ss) {
  os << "r,s,re,im\n";
  char buf[128];
  for (double r : rs)
    for (double s : ss) {
      const cplx v = K(r, s);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", r, s, v.real(), v.imag());
      os << buf;
    }
}

}  // namespace tvl
