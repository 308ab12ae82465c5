#pragma once

// Shared numerical services: Gauss-Legendre / Gauss-Kronrod quadrature,
// central finite differences with one Richardson level, polynomial
// extrapolation to zero, compactly supported bump test functions and the
// smeared-delta check used to verify inverse-kernel identities weakly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "tvl/errors.hpp"

namespace tvl::numerics {

using cplx = std::complex<double>;

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_panels = 4000;
  std::vector<double> split_points;
};

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  int panels = 0;
};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

/// Rule mapped to [a, b] and split into `panels` equal pieces.
GaussRule composite_gauss_legendre(double a, double b, int panels, int order);

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule.
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
auto gk15(const F& f, double a, double b) {
  using T = decltype(f(a));
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T center = f(c);
  T kronrod = center * kKronrodWeights[7];
  T gauss = center * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kKronrodNodes[j];
    T pair = f(c - dx) + f(c + dx);
    kronrod += pair * kKronrodWeights[j];
    if (j % 2 == 1) gauss += pair * kGaussWeights[j / 2];
  }
  return std::pair<T, double>{kronrod * h, std::abs((kronrod - gauss) * h)};
}

template <class T>
bool finite_value(const T& v) {
  if constexpr (std::is_same_v<T, cplx>) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  } else {
    return std::isfinite(v);
  }
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration on a finite interval.
template <class F>
auto quad_interval(const F& f, double a, double b, const QuadratureSpec& spec = {})
    -> QuadResult<decltype(f(a))> {
  using T = decltype(f(a));
  struct Panel {
    double a, b;
    T value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  std::vector<double> cuts{a};
  for (double s : spec.split_points)
    if (s > a && s < b) cuts.push_back(s);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  std::priority_queue<Panel> queue;
  T total{};
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto [v, e] = detail::gk15(f, cuts[i], cuts[i + 1]);
    queue.push({cuts[i], cuts[i + 1], v, e});
    total += v;
    total_err += e;
  }
  int panels = static_cast<int>(queue.size());
  while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (!detail::finite_value(total)) throw NonDecaying("quadrature: non-finite integrand");
    if (panels >= spec.max_panels)
      throw MaxPanelsExceeded("quadrature: panel budget exhausted, error " +
                              std::to_string(total_err));
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto [v1, e1] = detail::gk15(f, worst.a, mid);
    auto [v2, e2] = detail::gk15(f, mid, worst.b);
    total += v1 + v2 - worst.value;
    total_err += e1 + e2 - worst.error;
    queue.push({worst.a, mid, v1, e1});
    queue.push({mid, worst.b, v2, e2});
    ++panels;
  }
  if (!detail::finite_value(total)) throw NonDecaying("quadrature: non-finite integrand");
  // Re-sum to shed accumulated rounding from the running updates.
  T resum{};
  double err = 0.0;
  while (!queue.empty()) {
    resum += queue.top().value;
    err += queue.top().error;
    queue.pop();
  }
  return {resum, err, panels};
}

/// Integral over [0, inf). The tail beyond the last split point (or 1) is
/// mapped to a finite interval by s = A + t/(1 - t).
template <class F>
auto quad_halfline(const F& f, const QuadratureSpec& spec = {})
    -> QuadResult<decltype(f(0.0))> {
  double anchor = 1.0;
  for (double s : spec.split_points) anchor = std::max(anchor, s);
  auto head = quad_interval(f, 0.0, anchor, spec);
  auto mapped = [&](double t) {
    const double one_minus = 1.0 - t;
    const double s = anchor + t / one_minus;
    auto v = f(s);
    return v * (1.0 / (one_minus * one_minus));
  };
  QuadratureSpec tail_spec = spec;
  tail_spec.split_points.clear();
  // Probe far out: an integrand that has not decayed is a contract violation.
  {
    auto far = std::abs(f(anchor + 1e3)) * 1e6;
    if (!std::isfinite(far) || far > std::abs(f(anchor)) + 1.0)
      throw NonDecaying("quad_halfline: integrand does not decay");
  }
  auto tail = quad_interval(mapped, 0.0, 1.0, tail_spec);
  return {head.value + tail.value, head.error + tail.error, head.panels + tail.panels};
}

/// Central finite-difference derivative of order 1..4 with one Richardson
/// level (steps h and h/2).
template <class F>
auto finite_diff(const F& f, double r, int order, double h) -> decltype(f(r)) {
  using T = decltype(f(r));
  auto stencil = [&](double s) -> T {
    switch (order) {
      case 1:
        return (f(r + s) - f(r - s)) / (2.0 * s);
      case 2:
        return (f(r + s) - 2.0 * f(r) + f(r - s)) / (s * s);
      case 3:
        return (f(r + 2 * s) - 2.0 * f(r + s) + 2.0 * f(r - s) - f(r - 2 * s)) /
               (2.0 * s * s * s);
      case 4:
        return (f(r + 2 * s) - 4.0 * f(r + s) + 6.0 * f(r) - 4.0 * f(r - s) +
                f(r - 2 * s)) /
               (s * s * s * s);
      default:
        throw std::invalid_argument("finite_diff: order must be 1..4");
    }
  };
  const T coarse = stencil(h);
  const T fine = stencil(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

struct Extrapolation {
  double value = 0.0;
  double error = 0.0;
};

/// Neville extrapolation of samples y(x_i) to x = 0, with the last
/// diagonal difference as error estimate.
Extrapolation extrapolate_to_zero(std::span<const double> xs, std::span<const double> ys);

/// r^2 (R - r)^2 on [0, R], zero beyond, scaled to unit L2 norm.
struct BumpTestFunction {
  double support = 1.0;

  double norm_factor() const;
  double operator()(double r) const;
  double second_derivative(double r) const;
};

struct SmearResult {
  cplx paired{};     // <phi, L(K psi)>
  double reference;  // <phi, psi>
  double discrepancy;
  double relative;
};

/// |<phi, L(K psi)> - <phi, psi>| with L = T_l^2 - shift applied to the
/// sampled kernel action by finite differences. `kernel_action(r)` returns
/// (K psi)(r). The fourth-derivative part is taken in the weak form
/// <phi'', (K psi)''>.
SmearResult smear_check(const std::function<cplx(double)>& kernel_action, int l, cplx shift,
                        const BumpTestFunction& phi, const BumpTestFunction& psi);

/// Hardware concurrency, capped by SPECTRAL_THREADS when it holds a positive integer.
unsigned thread_budget();

/// Runs body(i) for i in [0, n), split across thread_budget() threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tvl::numerics
