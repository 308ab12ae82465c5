#include "tvl/vsh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

#include "tvl/errors.hpp"
#include "tvl/numerics.hpp"

namespace tvl::vsh {

using std::numbers::pi;

namespace {

constexpr cplx I(0.0, 1.0);

void require_index(int l, int m, int l_min) {
  if (l < l_min || l > 2 || std::abs(m) > l)
    throw DomainViolation("vsh: invalid (l, m) = (" + std::to_string(l) + ", " + std::to_string(m) + ")");
}

// Harmonic homogeneous polynomial P of degree l with Y_lm = P(x/|x|), and its gradient.
struct Harmonic {
  cplx value;
  CVec3 grad;
};

Harmonic complex_harmonic(int l, int m, const Vec3& x) {
  const double X = x[0], Y = x[1], Z = x[2];
  const double s = m >= 0 ? 1.0 : -1.0;
  const cplx w(X, s * Y);  // x +- i y
  switch (l) {
    case 0:
      return {1.0 / std::sqrt(4 * pi), {0.0, 0.0, 0.0}};
    case 1:
      if (m == 0) {
        const double c = std::sqrt(3 / (4 * pi));
        return {c * Z, {0.0, 0.0, c}};
      } else {
        const double c = -s * std::sqrt(3 / (8 * pi));
        return {c * w, {c, c * s * I, 0.0}};
      }
    default:
      if (m == 0) {
        const double c = std::sqrt(5 / (16 * pi));
        return {c * (2 * Z * Z - X * X - Y * Y), {-2 * c * X, -2 * c * Y, 4 * c * Z}};
      } else if (std::abs(m) == 1) {
        const double c = -s * std::sqrt(15 / (8 * pi));
        return {c * Z * w, {c * Z, c * s * I * Z, c * w}};
      } else {
        const double c = std::sqrt(15 / (32 * pi));
        return {c * w * w, {2.0 * c * w, 2.0 * c * s * I * w, 0.0}};
      }
  }
}

Harmonic harmonic(int l, int m, const Vec3& x, Convention c) {
  if (c == Convention::Complex || m == 0) return complex_harmonic(l, m, x);
  const Harmonic h = complex_harmonic(l, std::abs(m), x);
  const double sign = (std::abs(m) % 2 == 0 ? 1.0 : -1.0) * std::sqrt(2.0);
  auto part = [&](cplx v) { return m > 0 ? sign * v.real() : sign * v.imag(); };
  return {part(h.value), {part(h.grad[0]), part(h.grad[1]), part(h.grad[2])}};
}

double length(const Vec3& x) { return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); }

Eigen::Vector3cd to_eigen(const CVec3& v) { return {v[0], v[1], v[2]}; }

cplx dot_conj(const CVec3& a, const CVec3& b) {
  return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1] + std::conj(a[2]) * b[2];
}

}  // namespace

AngularPoint AngularPoint::from_vector(const Vec3& x) {
  const double r = length(x);
  if (!(r > 0.0)) throw DomainViolation("AngularPoint: zero vector");
  double phi = std::atan2(x[1], x[0]);
  if (phi < 0.0) phi += 2 * pi;
  return {std::acos(std::clamp(x[2] / r, -1.0, 1.0)), phi};
}

Vec3 AngularPoint::unit() const {
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

cplx eval_Y(int l, int m, const AngularPoint& p, Convention c) {
  require_index(l, m, 0);
  return harmonic(l, m, p.unit(), c).value;
}

CVec3 eval_vsh(Family f, int l, int m, const Vec3& x, Convention c) {
  require_index(l, m, f == Family::Upsilon ? 0 : 1);
  const double r = length(x);
  if (!(r > 0.0)) throw DomainViolation("eval_vsh: origin");
  const Harmonic h = harmonic(l, m, x, c);
  const double rl = std::pow(r, l);
  switch (f) {
    case Family::Upsilon: {
      const cplx y = h.value / rl;
      return {x[0] / r * y, x[1] / r * y, x[2] / r * y};
    }
    case Family::Psi: {
      // r grad(P / r^l) = grad P / r^(l-1) - l P x / r^(l+1)
      const double norm = 1.0 / std::sqrt(l * (l + 1.0));
      CVec3 out;
      for (int i = 0; i < 3; ++i)
        out[i] = norm * (h.grad[i] * r / rl - double(l) * h.value * x[i] / (rl * r));
      return out;
    }
    default: {
      const double norm = 1.0 / (std::sqrt(l * (l + 1.0)) * rl);
      const CVec3& g = h.grad;
      return {norm * (x[1] * g[2] - x[2] * g[1]), norm * (x[2] * g[0] - x[0] * g[2]),
              norm * (x[0] * g[1] - x[1] * g[0])};
    }
  }
}

CVec3 eval_vsh(Family f, int l, int m, const AngularPoint& p, Convention c) {
  return eval_vsh(f, l, m, p.unit(), c);
}

std::vector<VshIndex> all_indices() {
  std::vector<VshIndex> out;
  for (Family f : {Family::Upsilon, Family::Psi, Family::Phi})
    for (int l = f == Family::Upsilon ? 0 : 1; l <= 2; ++l)
      for (int m = -l; m <= l; ++m) out.push_back({f, l, m});
  return out;
}

SphereRule sphere_rule(int n_theta, int n_phi) {
  const numerics::GaussRule g = numerics::gauss_legendre(n_theta);
  SphereRule rule;
  for (int i = 0; i < n_theta; ++i)
    for (int j = 0; j < n_phi; ++j) {
      rule.points.push_back({std::acos(g.nodes[i]), 2 * pi * j / n_phi});
      rule.weights.push_back(g.weights[i] * 2 * pi / n_phi);
    }
  return rule;
}

Eigen::MatrixXcd gram_matrix(Convention c) {
  const auto idx = all_indices();
  const SphereRule rule = sphere_rule();
  const auto n = static_cast<Eigen::Index>(idx.size());
  std::vector<std::vector<CVec3>> values(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (const auto& p : rule.points) values[a].push_back(eval_vsh(idx[a].family, idx[a].l, idx[a].m, p, c));
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      for (std::size_t q = 0; q < rule.points.size(); ++q)
        G(a, b) += rule.weights[q] * dot_conj(values[a][q], values[b][q]);
  return G;
}

Eigen::Matrix3d angular_laplacian_matrix(int l) {
  require_index(l, 0, 1);
  const double L = l * (l + 1.0);
  Eigen::Matrix3d M;
  M << 2 + L, -2 * std::sqrt(L), 0, -2 * std::sqrt(L), L, 0, 0, 0, L;
  return M;
}

Eigen::Matrix3cd angular_laplacian_numeric(int l, int m, double step) {
  require_index(l, m, 1);
  const Family fam[3] = {Family::Upsilon, Family::Psi, Family::Phi};
  const SphereRule rule = sphere_rule();
  Eigen::Matrix3cd M = Eigen::Matrix3cd::Zero();
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const AngularPoint p = rule.points[q];
    const double st = std::sin(p.theta), ct = std::cos(p.theta);
    for (int b = 0; b < 3; ++b) {
      auto along_theta = [&](double t) { return to_eigen(eval_vsh(fam[b], l, m, AngularPoint{t, p.phi})); };
      auto along_phi = [&](double ph) { return to_eigen(eval_vsh(fam[b], l, m, AngularPoint{p.theta, ph})); };
      const Eigen::Vector3cd d1 = numerics::finite_diff(along_theta, p.theta, 1, step);
      const Eigen::Vector3cd d2 = numerics::finite_diff(along_theta, p.theta, 2, step);
      const Eigen::Vector3cd dp = numerics::finite_diff(along_phi, p.phi, 2, step);
      const Eigen::Vector3cd lap = -(d2 + (ct / st) * d1 + dp / (st * st));
      for (int a = 0; a < 3; ++a) {
        const Eigen::Vector3cd va = to_eigen(eval_vsh(fam[a], l, m, p));
        M(a, b) += rule.weights[q] * va.dot(lap);  // dot conjugates the first argument
      }
    }
  }
  return M;
}

Eigen::Matrix2d basis_change(int l) {
  if (l < 1) throw DomainViolation("basis_change: l >= 1");
  const double n = 1.0 / std::sqrt(2 * l + 1.0);
  Eigen::Matrix2d M;
  M << n * std::sqrt(double(l)), n * std::sqrt(l + 1.0), -n * std::sqrt(l + 1.0), n * std::sqrt(double(l));
  return M;
}

CVec3 eval_field(const TransverseField& F, const Vec3& x) {
  const double r = length(x);
  if (!(r > 0.0)) throw DomainViolation("eval_field: origin");
  CVec3 out{0.0, 0.0, 0.0};
  for (const auto& c : F.components) {
    require_index(c.l, c.m, 1);
    const cplx y = std::sqrt(c.l * (c.l + 1.0)) * evaluate(c.u, r) / (r * r);
    const cplx psi = evaluate_derivative(c.u, r, 1) / r;
    const CVec3 U = eval_vsh(Family::Upsilon, c.l, c.m, x);
    const CVec3 P = eval_vsh(Family::Psi, c.l, c.m, x);
    for (int i = 0; i < 3; ++i) out[i] += y * U[i] + psi * P[i];
  }
  return out;
}

namespace {

// Jacobian J(i, j) = d f_i / d x_j by central differences.
template <class Field>
Eigen::Matrix3cd jacobian(const Field& field, const Vec3& x, double h) {
  Eigen::Matrix3cd J;
  for (int j = 0; j < 3; ++j) {
    auto along = [&](double t) {
      Vec3 y = x;
      y[j] = t;
      return to_eigen(field(y));
    };
    J.col(j) = numerics::finite_diff(along, x[j], 1, h);
  }
  return J;
}

}  // namespace

DivergenceSample divergence_check(const TransverseField& F, const Vec3& x, double h) {
  const Eigen::Matrix3cd J = jacobian([&](const Vec3& y) { return eval_field(F, y); }, x, h * length(x));
  DivergenceSample s;
  s.x = x;
  s.divergence = std::abs(J.trace());
  s.gradient_norm = J.norm();
  s.relative = s.gradient_norm > 0.0 ? s.divergence / s.gradient_norm : s.divergence;
  return s;
}

double curl_form_check(const TransverseField& F, const std::vector<Vec3>& points, double h) {
  auto potential = [&](const Vec3& y) {
    const double r = length(y);
    CVec3 out{0.0, 0.0, 0.0};
    for (const auto& c : F.components) {
      const cplx a = -evaluate(c.u, r) / r;
      const CVec3 P = eval_vsh(Family::Phi, c.l, c.m, y);
      for (int i = 0; i < 3; ++i) out[i] += a * P[i];
    }
    return out;
  };
  double worst = 0.0;
  for (const Vec3& x : points) {
    const Eigen::Matrix3cd J = jacobian(potential, x, h * length(x));
    const Eigen::Vector3cd curl(J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1));
    const Eigen::Vector3cd f = to_eigen(eval_field(F, x));
    const double scale = f.norm();
    worst = std::max(worst, scale > 0.0 ? (curl - f).norm() / scale : curl.norm());
  }
  return worst;
}

std::vector<Vec3> sample_points(int n, double r_min, double r_max, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> radius(r_min, r_max);
  std::vector<Vec3> out;
  while (static_cast<int>(out.size()) < n) {
    Vec3 d{normal(gen), normal(gen), normal(gen)};
    const double len = length(d);
    if (len < 1e-8) continue;
    const double r = radius(gen);
    out.push_back({r * d[0] / len, r * d[1] / len, r * d[2] / len});
  }
  return out;
}

void write_field_csv(std::ostream& os, const TransverseField& F, const std::vector<Vec3>& points) {
  os << "x,y,z,re_fx,im_fx,re_fy,im_fy,re_fz,im_fz\n";
  char buf[512];
  for (const Vec3& x : points) {
    const CVec3 f = eval_field(F, x);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", x[0], x[1],
                  x[2], f[0].real(), f[0].imag(), f[1].real(), f[1].imag(), f[2].real(), f[2].imag());
    os << buf;
  }
}

}  // namespace tvl::vsh
