#include "tvl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tvl/numerics.hpp"

namespace tvl {

using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

void require_l(int l) {
  if (l != 1 && l != 2) throw DomainViolation("l must be 1 or 2");
}

constexpr double kInf = std::numeric_limits<double>::infinity();

RadialFunction exp_difference(cplx first, cplx second) {
  return RadialFunction::exponential(first) - RadialFunction::exponential(second);
}

// sin(lambda r), cos(lambda r) as exponential pairs.
RadialFunction sin_wave(double lambda) {
  const cplx half_i(0.0, 0.5);
  return RadialFunction::exponential(cplx(0, lambda), -half_i) +
         RadialFunction::exponential(cplx(0, -lambda), half_i);
}

RadialFunction cos_wave(double lambda) {
  return RadialFunction::exponential(cplx(0, lambda), 0.5) +
         RadialFunction::exponential(cplx(0, -lambda), 0.5);
}

// (N, D) with sigma = N / D.
std::pair<double, double> sigma_parts(int l, double lambda, double kappa) {
  if (l == 1) return {lambda, lambda - sqrt2 * kappa};
  const double l3 = lambda * lambda * lambda;
  return {-l3, l3 + sqrt2 * kappa * kappa * kappa};
}

double vanishing_residual(const SeriesAtZero& s, int n) {
  const double mag = s.magnitude.count(n) ? s.magnitude.at(n) : 0.0;
  if (mag == 0.0) return 0.0;
  return std::abs(s.coefficient(n)) / mag;
}

// u^{(np)}(0) + k u^{(nq)}(0) measured against the summed magnitudes of the
// series contributions, so cancellation residue reads as zero.
double ratio_residual(const SeriesAtZero& s, int np, int nq, double k) {
  auto mag = [&](int n) { return s.magnitude.count(n) ? s.magnitude.at(n) : 0.0; };
  const double fp = std::tgamma(np + 1.0), fq = std::tgamma(nq + 1.0);
  const double scale = fp * mag(np) + std::abs(k) * fq * mag(nq);
  if (scale == 0.0) return 0.0;
  return std::abs(s.derivative(np) + k * s.derivative(nq)) / scale;
}

}  // namespace

ExtensionParams::ExtensionParams(int l_, double kappa_) : l(l_), kappa(kappa_) {
  require_l(l);
  if (std::isnan(kappa) || kappa == kInf) throw DomainViolation("kappa must be real or -infinity");
}

ExtensionParams ExtensionParams::from_cayley(int l, double a, double rho) {
  return ExtensionParams(l, kappa_from_a(l, a, rho));
}

double ExtensionParams::discrete_eigenvalue() const {
  if (!has_discrete()) throw DomainViolation("no discrete eigenvalue for kappa <= 0");
  return -std::pow(kappa, 4);
}

RadialFunction deficiency_element(int l, int sign, double rho) {
  require_l(l);
  if (!(rho > 0.0)) throw DomainViolation("rho must be positive");
  const RadialFunction w = sign > 0 ? exp_difference(std::polar(rho, 5 * pi / 8), std::polar(rho, 9 * pi / 8))
                                    : exp_difference(std::polar(rho, 7 * pi / 8), std::polar(rho, 11 * pi / 8));
  return apply_D(l, w);
}

std::pair<cplx, cplx> extension_mixing(int l, double a, double rho) {
  require_l(l);
  const RadialFunction gp = deficiency_element(l, +1, rho);
  const RadialFunction gm = deficiency_element(l, -1, rho);
  const int n0 = l == 1 ? 1 : 0;
  const int n1 = l == 1 ? 2 : 3;
  double c0, c1;
  if (l == 1) {
    c0 = std::sin(a) * rho;
    c1 = sqrt2 / 3.0 * std::cos(a + pi / 8) * rho * rho;
  } else {
    c0 = std::sin(a) * rho * rho;
    c1 = sqrt2 / 15.0 * std::cos(a - pi / 8) * std::pow(rho, 5);
  }
  const SeriesAtZero sp = series_at_zero(gp, n0, n1);
  const SeriesAtZero sm = series_at_zero(gm, n0, n1);
  const cplx m00 = sp.coefficient(n0), m01 = sm.coefficient(n0);
  const cplx m10 = sp.coefficient(n1), m11 = sm.coefficient(n1);
  const cplx det = m00 * m11 - m01 * m10;
  return {(c0 * m11 - m01 * c1) / det, (m00 * c1 - m10 * c0) / det};
}

RadialFunction extension_element(int l, double a, double rho) {
  const auto [lp, lm] = extension_mixing(l, a, rho);
  return deficiency_element(l, +1, rho) * lp + deficiency_element(l, -1, rho) * lm;
}

double kappa_from_a(int l, double a, double rho) {
  require_l(l);
  if (!(a >= 0.0 && a < pi)) throw DomainViolation("a must lie in [0, pi)");
  if (a == 0.0) return -kInf;
  if (l == 1) return -rho * std::cos(a + pi / 8) / std::sin(a);
  return std::cbrt(-rho * rho * rho * std::cos(a - pi / 8) / std::sin(a));
}

double boundary_residual(int l, const RadialFunction& u, double kappa) {
  require_l(l);
  boundary_values(u, 3);  // PoleAtZero if singular
  const SeriesAtZero s = series_at_zero(u, 0, 3);
  const bool friedrichs = std::isinf(kappa) && kappa < 0;
  double worst;
  if (l == 1) {
    worst = std::max(vanishing_residual(s, 0), vanishing_residual(s, 3));
    const double ratio = friedrichs ? vanishing_residual(s, 1)
                                    : ratio_residual(s, 2, 1, 2 * sqrt2 / 3 * kappa);
    worst = std::max(worst, ratio);
  } else {
    worst = std::max(vanishing_residual(s, 1), vanishing_residual(s, 2));
    const double ratio = friedrichs ? vanishing_residual(s, 0)
                                    : ratio_residual(s, 3, 0, 2 * sqrt2 / 5 * kappa * kappa * kappa);
    worst = std::max(worst, ratio);
  }
  return worst;
}

cplx symmetry_check(int l, const RadialFunction& u, const RadialFunction& v) {
  return inner_product(v, apply_T2(l, u)) - inner_product(apply_T2(l, v), u);
}

double discrete_norm_squared(int l, double kappa) {
  require_l(l);
  return l == 1 ? kappa / sqrt2 : 3.0 * kappa * kappa * kappa / sqrt2;
}

RadialFunction discrete_eigenfunction(int l, double kappa, bool normalized) {
  require_l(l);
  if (!(kappa > 0.0)) throw DomainViolation("discrete eigenfunction needs kappa > 0");
  RadialFunction v = apply_D(l, exp_difference(std::polar(kappa, -3 * pi / 4), std::polar(kappa, 3 * pi / 4))) *
                     cplx(0.0, 1.0);
  if (normalized) v *= 1.0 / std::sqrt(discrete_norm_squared(l, kappa));
  return v;
}

double sigma(int l, double lambda, double kappa) {
  require_l(l);
  if (!(lambda > 0.0)) throw DomainViolation("lambda must be positive");
  const auto [num, den] = sigma_parts(l, lambda, kappa);
  if (den == 0.0) return std::copysign(kInf, num);
  return num / den;
}

RadialFunction continuous_eigenfunction(int l, double lambda, double kappa, bool normalized) {
  require_l(l);
  if (!(lambda > 0.0)) throw DomainViolation("lambda must be positive");
  const RadialFunction s = sin_wave(lambda);
  const RadialFunction c = cos_wave(lambda) - RadialFunction::exponential(-lambda);
  if (!normalized) return apply_D(l, s + c * sigma(l, lambda, kappa));
  double ct, st;
  if (std::isinf(kappa)) {
    // Friedrichs limit sigma -> 0, with the atan2 branch of kappa -> -inf.
    ct = l == 1 ? 1.0 : -1.0;
    st = 0.0;
  } else {
    const auto [num, den] = sigma_parts(l, lambda, kappa);
    const double t = std::atan2(num, den);
    ct = std::cos(t);
    st = std::sin(t);
  }
  return apply_D(l, s * ct + c * st) * (std::sqrt(2.0 / pi) * std::pow(lambda, -l));
}

// ---------------------------------------------------------------------------

double GaussianEnvelope::operator()(double lambda) const {
  if (lambda < lower() || lambda > upper()) return 0.0;
  const double x = (lambda - center) / width;
  return std::exp(-0.5 * x * x);
}

double GaussianEnvelope::lower() const { return std::max(0.0, center - 6.0 * width); }
double GaussianEnvelope::upper() const { return center + 6.0 * width; }

double GaussianEnvelope::squared_integral() const {
  auto f = [this](double x) {
    const double e = (*this)(x);
    return e * e;
  };
  return numerics::quad_interval(f, lower(), upper()).value;
}

namespace {

// Packet values on the r grid using `panels` Gauss-Legendre panels in lambda.
std::vector<double> sample_packet(int l, double kappa, const GaussianEnvelope& env, int panels, int order,
                                  const std::vector<double>& r_nodes) {
  const auto rule = numerics::composite_gauss_legendre(env.lower(), env.upper(), panels, order);
  std::vector<std::vector<double>> per_lambda(rule.nodes.size());
  numerics::parallel_for(rule.nodes.size(), [&](std::size_t i) {
    const double lam = rule.nodes[i];
    const RadialFunction u = continuous_eigenfunction(l, lam, kappa);
    const double w = rule.weights[i] * env(lam);
    std::vector<double> col(r_nodes.size());
    for (std::size_t j = 0; j < r_nodes.size(); ++j) col[j] = w * evaluate(u, r_nodes[j]).real();
    per_lambda[i] = std::move(col);
  });
  std::vector<double> out(r_nodes.size(), 0.0);
  for (const auto& col : per_lambda)
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += col[j];
  return out;
}

}  // namespace

WavePacketReport overlap_wavepacket(int l, double kappa, const std::vector<GaussianEnvelope>& envelopes,
                                    const WavePacketSpec& spec) {
  require_l(l);
  WavePacketReport rep;
  if (envelopes.empty()) return rep;
  double narrowest = envelopes.front().width, top = 0.0;
  for (const auto& e : envelopes) {
    narrowest = std::min(narrowest, e.width);
    top = std::max(top, e.upper());
  }
  // Packets decay like exp(-(width r)^2/2); 9/width leaves ~e^{-40}.
  rep.r_max = spec.r_max > 0.0 ? spec.r_max : 9.0 / narrowest;
  const double panel = std::min(1.0, 4.0 / std::max(top, 1e-3));
  const int r_panels = static_cast<int>(std::ceil(rep.r_max / panel));
  const auto r_rule = numerics::composite_gauss_legendre(0.0, rep.r_max, r_panels, 16);

  std::vector<std::vector<double>> samples;
  int panels_used = 0;
  for (const auto& env : envelopes) {
    int panels = 4;
    std::vector<double> prev = sample_packet(l, kappa, env, panels, spec.lambda_order, r_rule.nodes);
    while (panels < spec.max_lambda_panels) {
      panels *= 2;
      std::vector<double> next = sample_packet(l, kappa, env, panels, spec.lambda_order, r_rule.nodes);
      double diff = 0.0, scale = 0.0;
      for (std::size_t j = 0; j < next.size(); ++j) {
        diff = std::max(diff, std::abs(next[j] - prev[j]));
        scale = std::max(scale, std::abs(next[j]));
      }
      prev = std::move(next);
      if (diff <= spec.self_consistency * scale) break;
    }
    panels_used = std::max(panels_used, panels);
    samples.push_back(std::move(prev));
    rep.envelope_norms.push_back(env.squared_integral());
  }
  rep.lambda_panels = panels_used;

  const std::size_t n = envelopes.size();
  rep.overlaps.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < r_rule.nodes.size(); ++k) s += r_rule.weights[k] * samples[i][k] * samples[j][k];
      rep.overlaps[i][j] = rep.overlaps[j][i] = s;
    }

  if (kappa > 0.0) {
    const RadialFunction v = discrete_eigenfunction(l, kappa, true);
    for (const auto& env : envelopes) {
      const auto rule = numerics::composite_gauss_legendre(env.lower(), env.upper(), rep.lambda_panels,
                                                           spec.lambda_order);
      double s = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        s += rule.weights[i] * env(rule.nodes[i]) *
             inner_product(continuous_eigenfunction(l, rule.nodes[i], kappa), v).real();
      rep.discrete_overlaps.push_back(s);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    auto env = envelopes[i];
    const int panels = rep.lambda_panels;
    const int order = spec.lambda_order;
    rep.packets.emplace_back([l, kappa, env, panels, order](double r) {
      return sample_packet(l, kappa, env, panels, order, {r}).front();
    });
  }
  return rep;
}

Reconstruction::Reconstruction(int l, double kappa, const RadialFunction& g, double lambda_max,
                               double panel_width, int order)
    : lambda_max_(lambda_max) {
  require_l(l);
  if (!(lambda_max > 0.0)) throw DomainViolation("lambda_max must be positive");
  if (kappa > 0.0) {
    discrete_ = discrete_eigenfunction(l, kappa, true);
    discrete_coeff_ = inner_product(*discrete_, g).real();
  }
  const int panels = std::max(1, static_cast<int>(std::ceil(lambda_max / panel_width)));
  const auto rule = numerics::composite_gauss_legendre(0.0, lambda_max, panels, order);
  modes_.resize(rule.nodes.size());
  weights_.resize(rule.nodes.size());
  numerics::parallel_for(rule.nodes.size(), [&](std::size_t i) {
    modes_[i] = continuous_eigenfunction(l, rule.nodes[i], kappa);
    weights_[i] = rule.weights[i] * inner_product(modes_[i], g).real();
  });
}

double Reconstruction::operator()(double r) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < modes_.size(); ++i) sum += weights_[i] * evaluate(modes_[i], r).real();
  if (discrete_) sum += discrete_coeff_ * evaluate(*discrete_, r).real();
  return sum;
}

}  // namespace tvl
