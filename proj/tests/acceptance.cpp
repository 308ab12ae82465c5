// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "tvl/kernels.hpp"
#include "tvl/quadform.hpp"
#include "tvl/scalar_extension.hpp"
#include "tvl/spectral.hpp"
#include "tvl/verify.hpp"
#include "tvl/vsh.hpp"

using namespace tvl;
using RF = RadialFunction;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const cplx I(0.0, 1.0);

struct Outcome {
  bool pass;
  std::string detail;
};

// Tracks the check closest to (or furthest past) its bound; exceptions fail.
struct Worst {
  double ratio = 0.0;
  double value = 0.0;
  double bound = 0.0;
  std::string where;
  bool failed = false;
  int checks = 0;
  int exceeded = 0;

  void take(double v, double b, const std::string& at) {
    const double q = std::isnan(v) ? kInf : v / b;
    ++checks;
    if (!(q < 1.0)) ++exceeded;
    if (where.empty() || q > ratio) {
      ratio = q;
      value = std::isnan(v) ? kInf : v;
      bound = b;
      where = at;
    }
  }
  template <class F>
  void guard(const std::string& at, double b, F&& f) {
    try {
      take(f(), b, at);
    } catch (const std::exception& e) {
      failed = true;
      take(kInf, b, at + " (" + e.what() + ")");
    }
  }
  Outcome result() const {
    char buf[512];
    std::snprintf(buf, sizeof buf, "worst %.3e (bound %.0e) at %s; %d of %d over bound", value, bound,
                  where.c_str(), exceeded, checks);
    return {!failed && ratio < 1.0, buf};
  }
};

std::string tag(int l, double k) { return "l=" + std::to_string(l) + " kappa=" + std::to_string(k); }

Outcome eigen_residuals() {
  Worst w;
  for (int l = 1; l <= 2; ++l)
    for (double k : {0.5, 1.0, 2.0})
      w.guard(tag(l, k), 1e-12, [&] {
        const RF v = discrete_eigenfunction(l, k, false);
        return relative_residual(apply_T2(l, v), v * -std::pow(k, 4));
      });
  return w.result();
}

Outcome norm_reproduction() {
  Worst w;
  for (double k : {0.5, 1.0, 2.0})
    for (int l = 1; l <= 2; ++l)
      w.guard(tag(l, k), 1e-12, [&] {
        const RF v = discrete_eigenfunction(l, k, false);
        const double expected = std::pow(k, 2 * l - 1) / sqrt2;
        return std::abs(inner_product(v, v).real() - expected) / expected;
      });
  return w.result();
}

Outcome boundary_conditions() {
  Worst w;
  for (int l = 1; l <= 2; ++l) {
    for (double k : {0.5, 1.0, 2.0})
      w.guard("discrete " + tag(l, k), 1e-12, [&] { return boundary_residual(l, discrete_eigenfunction(l, k, true), k); });
    for (double k : {-1.0, 0.0, 1.0})
      for (double lam : {0.3, 1.0, 3.0})
        w.guard("continuous " + tag(l, k) + " lambda=" + std::to_string(lam), 1e-12,
                [&] { return boundary_residual(l, continuous_eigenfunction(l, lam, k, true), k); });
    for (double a : {0.4, 1.3, 2.9})
      for (double rho : {1.0, 0.6})
        w.guard("h l=" + std::to_string(l) + " a=" + std::to_string(a), 1e-12, [&] {
          const auto s = series_at_zero(extension_element(l, a, rho), 0, 3);
          if (l == 1)
            return std::max(std::abs(s.coefficient(1) - std::sin(a) * rho),
                            std::abs(s.coefficient(2) - sqrt2 / 3 * std::cos(a + pi / 8) * rho * rho));
          return std::max(std::abs(s.coefficient(0) - std::sin(a) * rho * rho),
                          std::abs(s.coefficient(3) - sqrt2 / 15 * std::cos(a - pi / 8) * std::pow(rho, 5)));
        });
  }
  return w.result();
}

Outcome identities() {
  Worst w;
  std::mt19937_64 gen(2024);
  for (int i = 0; i < 50; ++i) {
    const RF u = verify::random_core_function(gen);
    for (int l = 1; l <= 2; ++l)
      w.guard("sample " + std::to_string(i) + " l=" + std::to_string(l), 1e-11, [&] {
        const double qd = relative_residual(apply_T(l, apply_D(l, u)), -apply_D(l, differentiate(u, 2)));
        const double e1 = relative_residual(apply_E(l, apply_E(l, u, false), true), apply_T(l, u));
        const double e2 = relative_residual(apply_E(l, apply_E(l, u, true), false), apply_T(l - 1, u));
        return std::max({qd, e1, e2});
      });
  }
  return w.result();
}

Outcome wronskians() {
  Worst w;
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> mod(0.5, 1.5), arg(0.05, pi / 2 - 0.05);
  for (int i = 0; i < 20; ++i) {
    const cplx z = std::polar(mod(gen), arg(gen));
    for (int l = 1; l <= 2; ++l)
      for (double k : {-1.0, 1.0})
        w.guard("z=" + std::to_string(z.real()) + "+" + std::to_string(z.imag()) + "i " + tag(l, k), 1e-12, [&] {
          const auto c = resolvent_coefficients(l, z, k);
          const cplx zp = std::pow(z, 2 * l + 1);
          const cplx wm = -2.0 * I * zp;
          const cplx wp = l == 1 ? -2.0 * zp : 2.0 * zp;
          const auto [nm, np] = component_wronskians(l, z, k, 1.0 / std::abs(z));
          return std::max({std::abs(c.W_minus - wm), std::abs(c.W_plus - wp), std::abs(nm - wm),
                           std::abs(np - wp), std::abs(c.beta_minus / c.W_minus + c.beta_plus / c.W_plus)});
        });
  }
  return w.result();
}

Outcome weak_resolvent() {
  Worst w;
  const numerics::BumpTestFunction phi{2.0}, psi{3.0};
  for (cplx z : {std::polar(1.0, pi / 4), std::polar(0.5, pi / 3)})
    for (int l = 1; l <= 2; ++l)
      for (double k : {-1.0, 0.0, 1.0})
        w.guard("|z|=" + std::to_string(std::abs(z)) + " " + tag(l, k), 1e-6, [&] {
          return kernel_smear_check(build_resolvent(l, z, k), l, std::pow(z, 4), phi, psi).discrepancy;
        });
  return w.result();
}

Outcome inverse_kernels() {
  Worst w;
  const numerics::BumpTestFunction phi{2.0}, psi{3.0};
  const cplx e = std::polar(1.0, pi / 4);
  const std::vector<double> grid{0.5, 1.0, 1.5, 2.0, 2.5};
  bool monotone = true;
  for (int l = 1; l <= 2; ++l)
    for (double k : {-1.0, 1.0}) {
      w.guard("smear " + tag(l, k), 1e-6, [&] { return kernel_smear_check(inverse_kernel(l, k), l, 0.0, phi, psi).discrepancy; });
      try {
        const auto dev = resolvent_zero_limit_check(l, k, {0.3 * e, 0.2 * e, 0.1 * e, 0.05 * e}, grid);
        for (std::size_t j = 1; j < dev.size(); ++j)
          if (!(dev[j] < dev[j - 1])) monotone = false;
      } catch (const std::exception& ex) {
        w.guard("zero limit " + tag(l, k) + " (" + ex.what() + ")", 1.0, [] { return kInf; });
      }
    }
  Outcome o = w.result();
  if (!monotone) o = {false, o.detail + "; zero-limit deviation not monotone"};
  return o;
}

Outcome completeness() {
  Worst w;
  w.guard("reconstruction", 1e-3, [&] {
    const RF g = RF::term(1.0, 3, -1.0);
    const Reconstruction rec(1, 1.0, g, 40.0);
    double worst = 0.0;
    for (int j = 0; j <= 99; ++j) {
      const double r = 0.1 + (10.0 - 0.1) * j / 99.0;
      worst = std::max(worst, std::abs(rec(r) - evaluate(g, r).real()));
    }
    return worst;
  });
  w.guard("wave packets", 1e-4, [&] {
    const auto rep = overlap_wavepacket(1, 1.0, {{1.0, 0.15}, {3.0, 0.15}, {5.0, 0.15}});
    double worst = 0.0;
    for (std::size_t i = 0; i < rep.overlaps.size(); ++i) {
      for (std::size_t j = 0; j < rep.overlaps.size(); ++j)
        if (i != j) worst = std::max(worst, std::abs(rep.overlaps[i][j]));
      worst = std::max(worst, std::abs(rep.overlaps[i][i] - rep.envelope_norms[i]) / rep.envelope_norms[i]);
      worst = std::max(worst, std::abs(rep.discrete_overlaps[i]));
    }
    return worst;
  });
  return w.result();
}

Outcome vsh_structure() {
  Worst w;
  w.guard("gram", 1e-10, [] {
    const Eigen::MatrixXcd G = vsh::gram_matrix();
    return (G - Eigen::MatrixXcd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
  });
  for (int l = 1; l <= 2; ++l) {
    for (int m = -l; m <= l; ++m)
      w.guard("laplacian l=" + std::to_string(l) + " m=" + std::to_string(m), 1e-6, [&] {
        const Eigen::Matrix3cd N = vsh::angular_laplacian_numeric(l, m);
        return (N - vsh::angular_laplacian_matrix(l).cast<cplx>()).cwiseAbs().maxCoeff();
      });
    w.guard("basis change l=" + std::to_string(l), 1e-12, [&] {
      const Eigen::Matrix2d M = vsh::basis_change(l);
      const Eigen::Matrix2d D = M * vsh::angular_laplacian_matrix(l).topLeftCorner<2, 2>() * M.transpose();
      const double off = std::max(std::abs(D(0, 1)), std::abs(D(1, 0)));
      return std::max({off, std::abs(D(0, 0) - (l - 1) * l), std::abs(D(1, 1) - (l + 1) * (l + 2))});
    });
  }
  return w.result();
}

Outcome transversality() {
  Worst w;
  unsigned seed = 5;
  for (int l = 1; l <= 2; ++l)
    for (int m = -l; m <= l; ++m)
      for (const RF& u : {RF::term(1.0, 3, -1.0), discrete_eigenfunction(l, 1.0, true)}) {
        const vsh::TransverseField F{{{l, m, u}}};
        for (const auto& x : vsh::sample_points(20, 0.3, 4.0, seed++))
          w.guard("l=" + std::to_string(l) + " m=" + std::to_string(m), 1e-6, [&] { return vsh::divergence_check(F, x).relative; });
      }
  return w.result();
}

Outcome extended_form() {
  Worst eig, reg;
  for (int l = 1; l <= 2; ++l)
    for (double k : {0.5, 1.0, 2.0})
      eig.guard("eigen " + tag(l, k), 1e-6, [&] {
        const vsh::TransverseField F{{{l, 0, discrete_eigenfunction(l, k, true)}}};
        const double q = quadform::extended_form(F, quadform::uniform_kappa(k)).value;
        return std::abs(q + std::pow(k, 4)) / std::pow(k, 4);
      });
  const vsh::TransverseField R{{{1, 0, RF::term(1.0, 4, -1.0)}, {2, 1, RF::term(cplx(0.5, 1.0), 5, -2.0)}}};
  double plain = 0.0;
  for (const auto& c : R.components) plain += quadform::form_chain_check(c.l, c.u, c.u).product.real();
  for (double k : {-kInf, -2.0, -1.0, 0.0, 0.5, 1.0, 3.0})
    reg.guard("regular kappa=" + std::to_string(k), 1e-10, [&] {
      return std::abs(quadform::extended_form(R, quadform::uniform_kappa(k)).value - plain) / std::abs(plain);
    });
  const Outcome a = eig.result(), b = reg.result();
  return {a.pass && b.pass, "eigen: " + a.detail + "; regular: " + b.detail};
}

Outcome scalar_module() {
  Worst w;
  int wrong = 0;
  for (int i = 0; i < 100; ++i) {
    const double a = pi * (i + 0.5) / 100.0;
    if ((scalar_kappa(ScalarExtension(a, 1.0)) > 0.0) != (a > pi / 4)) ++wrong;
  }
  for (double a : {1.0, pi / 2, 2.0, 3.0})
    for (double rho : {0.5, 1.0, 2.0})
      w.guard("a=" + std::to_string(a) + " rho=" + std::to_string(rho), 1e-12, [&] {
        const ScalarExtension e(a, rho);
        const double k = scalar_kappa(e);
        const RF u = RF::exponential(-k);
        const double n = norm(u);
        return std::abs(scalar_form(u, e) / (n * n) + k * k) / (k * k);
      });
  Outcome o = w.result();
  if (wrong) o = {false, o.detail + "; window mismatches " + std::to_string(wrong)};
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double budget_s;
  };
  const std::vector<Criterion> criteria{
      {"eigen residuals", eigen_residuals, 1.0},
      {"norm reproduction", norm_reproduction, 1.0},
      {"boundary conditions", boundary_conditions, kInf},
      {"intertwining and factorization", identities, kInf},
      {"wronskians and coefficient identities", wronskians, kInf},
      {"weak resolvent identity", weak_resolvent, 30.0},
      {"inverse kernels", inverse_kernels, kInf},
      {"completeness", completeness, 120.0},
      {"vsh gram, laplacian, basis change", vsh_structure, kInf},
      {"transversality", transversality, kInf},
      {"extended form", extended_form, kInf},
      {"scalar module", scalar_module, kInf},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > criteria[i].budget_s) {
      o.pass = false;
      o.detail += "; over time budget";
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %zu (%s): %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                o.detail.c_str(), secs);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures ? 1 : 0;
}
