#include "tvl/numerics.hpp"

#include <cstdlib>
#include <numbers>
#include <exception>
#include <mutex>
#include <thread>

namespace tvl::numerics {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

GaussRule composite_gauss_legendre(double a, double b, int panels, int order) {
  const GaussRule base = gauss_legendre(order);
  GaussRule out;
  out.nodes.reserve(static_cast<std::size_t>(panels) * order);
  out.weights.reserve(out.nodes.capacity());
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    for (int i = 0; i < order; ++i) {
      out.nodes.push_back(lo + 0.5 * width * (base.nodes[i] + 1.0));
      out.weights.push_back(0.5 * width * base.weights[i]);
    }
  }
  return out;
}

Extrapolation extrapolate_to_zero(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.empty())
    throw std::invalid_argument("extrapolate_to_zero: mismatched samples");
  const std::size_t n = xs.size();
  std::vector<double> p(ys.begin(), ys.end());
  double last_diff = 0.0;
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      const double next = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i]);
      if (i + m == n - 1) last_diff = next - p[i + 1];
      p[i] = next;
    }
  }
  return {p[0], std::abs(last_diff)};
}

double BumpTestFunction::norm_factor() const {
  // int_0^R r^4 (R - r)^4 dr = R^9 / 630
  return 1.0 / std::sqrt(std::pow(support, 9) / 630.0);
}

double BumpTestFunction::operator()(double r) const {
  if (r <= 0.0 || r >= support) return 0.0;
  const double q = r * (support - r);
  return norm_factor() * q * q;
}

double BumpTestFunction::second_derivative(double r) const {
  if (r <= 0.0 || r >= support) return 0.0;
  const double s = support - r;
  return norm_factor() * (2.0 * s * s - 8.0 * r * s + 2.0 * r * r);
}

SmearResult smear_check(const std::function<cplx(double)>& kernel_action, int l, cplx shift,
                        const BumpTestFunction& phi, const BumpTestFunction& psi) {
  const double R = phi.support;
  const double c = l * (l + 1.0);
  const GaussRule rule = composite_gauss_legendre(0.0, R, 16, 12);
  // The f'''' part is paired as <phi'', f''>: phi and phi' vanish at 0 and R,
  // so no boundary terms appear and only second differences are needed.
  std::vector<cplx> values(rule.nodes.size());
  parallel_for(rule.nodes.size(), [&](std::size_t i) {
    const double r = rule.nodes[i];
    const double h = std::min(0.01 * R, r / 2.0);
    const cplx f = kernel_action(r);
    const cplx f1 = finite_diff(kernel_action, r, 1, h);
    const cplx f2 = finite_diff(kernel_action, r, 2, h);
    const double r2 = r * r;
    const cplx lower =
        -2.0 * c * f2 / r2 + 4.0 * c * f1 / (r2 * r) + (c * c - 6.0 * c) * f / (r2 * r2) - shift * f;
    values[i] = phi.second_derivative(r) * f2 + phi(r) * lower;
  });
  cplx paired = 0.0;
  double reference = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double r = rule.nodes[i];
    paired += rule.weights[i] * values[i];
    reference += rule.weights[i] * phi(r) * psi(r);
  }
  const double disc = std::abs(paired - reference);
  return {paired, reference, disc, disc / std::max(std::abs(reference), 1e-300)};
}

unsigned thread_budget() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SPECTRAL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(std::min<long>(v, hw));
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(thread_budget(), n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex guard;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) body(i);
      } catch (...) {
        std::lock_guard lock(guard);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace tvl::numerics
