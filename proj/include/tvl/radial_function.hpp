#pragma once

// Exact term algebra for radial functions f(r) = sum_i c_i r^{k_i} e^{a_i r}.

#include <complex>
#include <map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tvl/errors.hpp"

namespace tvl {

using cplx = std::complex<double>;

struct Term {
  cplx coeff;
  int power = 0;
  cplx rate;
};

/// A finite sum of terms c r^k e^{a r}, always held in canonical form: terms
/// sharing (power, rate) are merged, near-zero coefficients are dropped and
/// the remaining list is sorted by (power, rate).
class RadialFunction {
 public:
  static constexpr double kDropTolerance = 1e-13;

  RadialFunction() = default;
  explicit RadialFunction(std::vector<Term> terms);

  static RadialFunction term(cplx coeff, int power, cplx rate);
  static RadialFunction exponential(cplx rate, cplx coeff = 1.0) { return term(coeff, 0, rate); }
  static RadialFunction monomial(int power, cplx coeff = 1.0) { return term(coeff, power, 0.0); }
  static RadialFunction constant(cplx c) { return term(c, 0, 0.0); }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  double max_abs_coeff() const;
  int min_power() const;
  int max_power() const;

  RadialFunction operator-() const;
  RadialFunction& operator+=(const RadialFunction& o);
  RadialFunction& operator-=(const RadialFunction& o);
  RadialFunction& operator*=(cplx s);

  friend RadialFunction operator+(RadialFunction a, const RadialFunction& b) { return a += b; }
  friend RadialFunction operator-(RadialFunction a, const RadialFunction& b) { return a -= b; }
  friend RadialFunction operator*(RadialFunction a, cplx s) { return a *= s; }
  friend RadialFunction operator*(cplx s, RadialFunction a) { return a *= s; }
  friend RadialFunction operator*(const RadialFunction& a, const RadialFunction& b);

 private:
  std::vector<Term> terms_;
};

/// Complex conjugate for real r.
RadialFunction conj(const RadialFunction& f);
/// Multiplies by r^k.
RadialFunction times_power(const RadialFunction& f, int k);

RadialFunction differentiate(const RadialFunction& f, int n = 1);

/// D_l w = r^{l+1} (r^{-1} d/dr)^l (w / r), l in {1, 2}.
RadialFunction apply_D(int l, const RadialFunction& w);
/// T_l = -d^2/dr^2 + l(l+1)/r^2.
RadialFunction apply_T(int l, const RadialFunction& f);
/// T_l^2.
RadialFunction apply_T2(int l, const RadialFunction& f);
/// E_l u = r^{-l} (r^l u)'; with adjoint, E_l^* u = -r^l (r^{-l} u)'.
RadialFunction apply_E(int l, const RadialFunction& f, bool adjoint);

cplx evaluate(const RadialFunction& f, double r);
/// n-th derivative value at r without building the derivative symbolically.
cplx evaluate_derivative(const RadialFunction& f, double r, int n);

struct SeriesAtZero {
  int n_min = 0;
  int n_max = 0;
  std::map<int, cplx> coefficients;
  // Sum of |contributions| per power, used as the cancellation scale.
  std::map<int, double> magnitude;

  cplx coefficient(int n) const;
  /// Coefficient n counts as zero when |c_n| <= tol * magnitude_n.
  bool vanishes(int n, double tol = 1e-10) const;
  /// n-th derivative at zero, n! c_n.
  cplx derivative(int n) const;
};

SeriesAtZero series_at_zero(const RadialFunction& f, int n_min, int n_max);

/// u(0), u'(0), ..., u^{(order)}(0). Throws PoleAtZero if f is singular at 0.
std::vector<cplx> boundary_values(const RadialFunction& f, int order);

/// int_0^inf f dr in closed form. Negative powers are allowed when their
/// series contributions cancel (the integral is then the sum of
/// finite parts).
cplx integrate_halfline(const RadialFunction& f);
/// int_x^inf f dr, x > 0.
cplx integrate_tail(const RadialFunction& f, double x);
/// int_x^y f dr, 0 < x <= y.
cplx integrate_interval(const RadialFunction& f, double x, double y);
/// int_0^inf conj(f) g dr.
cplx inner_product(const RadialFunction& f, const RadialFunction& g);
double norm(const RadialFunction& f);

/// Largest |coefficient| of (f - g) relative to the largest coefficient of
/// f and g combined. Zero for identical canonical forms.
double relative_residual(const RadialFunction& f, const RadialFunction& g);

/// True if f equals its conjugate up to the canonicalization tolerance.
bool is_real_valued(const RadialFunction& f, double tol = 1e-12);

nlohmann::json to_json(const RadialFunction& f);
RadialFunction radial_from_json(const nlohmann::json& j);

}  // namespace tvl
