#include "tvl/verify.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "tvl/errors.hpp"
#include "tvl/kernels.hpp"
#include "tvl/numerics.hpp"
#include "tvl/scalar_extension.hpp"
#include "tvl/spectral.hpp"
#include "tvl/vsh.hpp"

namespace tvl::verify {

using std::numbers::pi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using RF = RadialFunction;

// A named residual; a failure to produce one (any library error) is an infinite residual.
struct Check {
  std::string name;
  double tolerance;
  std::function<double()> residual;
};

double jump_third_derivative(const SeparableKernel& K, double s) {
  cplx jump = 0.0;
  for (const auto& b : K.blocks())
    jump += b.coeff * (evaluate(b.lesser, s) * evaluate_derivative(b.greater, s, 3) -
                       evaluate_derivative(b.lesser, s, 3) * evaluate(b.greater, s));
  return std::abs(jump - 1.0);
}

double factorization_residual(int l, const RF& u) {
  const double a = relative_residual(apply_E(l, apply_E(l, u, false), true), apply_T(l, u));
  const double b = relative_residual(apply_E(l, apply_E(l, u, true), false), apply_T(l - 1, u));
  return std::max(a, b);
}

double intertwining_residual(int l, const RF& w) {
  return relative_residual(apply_T(l, apply_D(l, w)), -apply_D(l, differentiate(w, 2)));
}

cplx random_sector_z(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> mod(0.3, 2.0), arg(0.05, pi / 2 - 0.05);
  return std::polar(mod(gen), arg(gen));
}

std::vector<Check> build_checks(const SuiteConfig& cfg) {
  const int l = cfg.l;
  const double k = cfg.kappa;
  const bool discrete = k > 0.0 && std::isfinite(k);
  const bool finite_nonzero = std::isfinite(k) && k != 0.0;
  std::vector<Check> checks;
  auto add = [&](std::string name, double tol, std::function<double()> f) {
    checks.push_back({std::move(name), tol * cfg.tol_scale, std::move(f)});
  };

  if (discrete) {
    add("discrete_eigen_residual", 1e-12, [=] {
      const RF v = discrete_eigenfunction(l, k, false);
      return relative_residual(apply_T2(l, v), v * -std::pow(k, 4));
    });
    add("discrete_norm", 1e-12, [=] {
      const RF v = discrete_eigenfunction(l, k, false);
      const double n2 = discrete_norm_squared(l, k);
      return std::abs(inner_product(v, v) - n2) / n2;
    });
    add("discrete_boundary", 1e-12, [=] { return boundary_residual(l, discrete_eigenfunction(l, k, true), k); });
  }
  add("continuous_eigen_residual", 1e-12, [=] {
    double worst = 0.0;
    for (double lam : {0.3, 1.0, 2.5}) {
      const RF u = continuous_eigenfunction(l, lam, k);
      worst = std::max(worst, relative_residual(apply_T2(l, u), u * std::pow(lam, 4)));
    }
    return worst;
  });
  add("continuous_boundary", 1e-12, [=] {
    double worst = 0.0;
    for (double lam : {0.3, 1.0, 2.5}) worst = std::max(worst, boundary_residual(l, continuous_eigenfunction(l, lam, k), k));
    return worst;
  });
  add("extension_element_boundary", 1e-12, [=] {
    double worst = 0.0;
    for (double a : {0.5, 1.5, 2.5}) worst = std::max(worst, boundary_residual(l, extension_element(l, a, 1.0), kappa_from_a(l, a, 1.0)));
    return worst;
  });
  add("extension_symmetry", 1e-12, [=] {
    const double a = 2.5;
    const double ka = kappa_from_a(l, a, 1.0);
    const RF h = extension_element(l, a, 1.0);
    const RF v = discrete_eigenfunction(l, ka, true);
    return std::abs(symmetry_check(l, h, v)) / (norm(h) * norm(apply_T2(l, v)) + norm(apply_T2(l, h)) * norm(v));
  });
  add("intertwining", 1e-11, [=] {
    std::mt19937_64 gen(cfg.seed);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) worst = std::max(worst, intertwining_residual(l, random_core_function(gen)));
    return worst;
  });
  add("factorization", 1e-11, [=] {
    std::mt19937_64 gen(cfg.seed + 1);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) worst = std::max(worst, factorization_residual(l, random_core_function(gen)));
    return worst;
  });
  if (std::isfinite(k)) {
    add("wronskians", 1e-12, [=] {
      std::mt19937_64 gen(cfg.seed + 2);
      double worst = 0.0;
      for (int i = 0; i < 10; ++i) {
        const cplx z = random_sector_z(gen);
        const auto c = resolvent_coefficients(l, z, k);
        const auto [wm, wp] = component_wronskians(l, z, k, 1.0 / std::abs(z));
        worst = std::max({worst, std::abs(wm - c.W_minus) / std::abs(c.W_minus), std::abs(wp - c.W_plus) / std::abs(c.W_plus)});
      }
      return worst;
    });
    add("beta_identity", 1e-12, [=] {
      std::mt19937_64 gen(cfg.seed + 3);
      double worst = 0.0;
      for (int i = 0; i < 10; ++i) {
        const auto c = resolvent_coefficients(l, random_sector_z(gen), k);
        const cplx q = c.beta_minus / c.W_minus;
        worst = std::max(worst, std::abs(q + c.beta_plus / c.W_plus) / std::abs(q));
      }
      return worst;
    });
    add("resolvent_symmetry", 1e-12, [=] {
      const SeparableKernel R = build_resolvent(l, cfg.z, k);
      return std::abs(R(1.0, 2.0) - R(2.0, 1.0)) / std::abs(R(1.0, 2.0));
    });
    add("resolvent_third_derivative_jump", 1e-10, [=] { return jump_third_derivative(build_resolvent(l, cfg.z, k), 1.3); });
    add("resolvent_smear", 1e-6, [=] {
      const SeparableKernel R = build_resolvent(l, cfg.z, k);
      const cplx z2 = cfg.z * cfg.z;
      const numerics::BumpTestFunction phi{2.0}, psi{3.0};
      return kernel_smear_check(R, l, z2 * z2, phi, psi).discrepancy;
    });
  }
  if (finite_nonzero) {
    add("inverse_smear", 1e-6, [=] {
      const numerics::BumpTestFunction phi{2.0}, psi{3.0};
      return kernel_smear_check(inverse_kernel(l, k), l, 0.0, phi, psi).discrepancy;
    });
    add("inverse_third_derivative_jump", 1e-10, [=] { return jump_third_derivative(inverse_kernel(l, k), 1.3); });
    add("zero_limit_monotone", 1.0, [=] {
      const cplx e = std::polar(1.0, pi / 4);
      const auto dev = resolvent_zero_limit_check(l, k, {0.3 * e, 0.2 * e, 0.1 * e, 0.05 * e}, {0.5, 1.0, 1.5, 2.0, 2.5});
      double worst = 0.0;
      for (std::size_t i = 1; i < dev.size(); ++i) worst = std::max(worst, dev[i] / dev[i - 1]);
      return worst;
    });
  }
  if (cfg.completeness && std::isfinite(k)) {
    add("reconstruction", 1e-3, [=] {
      const RF g = RF::term(1.0, 3, -1.0);
      const Reconstruction rec(l, k, g, 40.0);
      double worst = 0.0;
      for (int i = 0; i <= 99; ++i) {
        const double r = 0.1 + (10.0 - 0.1) * i / 99.0;
        worst = std::max(worst, std::abs(rec(r) - evaluate(g, r).real()));
      }
      return worst;
    });
    add("wavepacket_orthogonality", 1e-4, [=] {
      // Truncated supports are disjoint, so distinct packets are exactly orthogonal.
      const std::vector<GaussianEnvelope> env{{1.0, 0.15}, {3.0, 0.15}, {5.0, 0.15}};
      const WavePacketReport rep = overlap_wavepacket(l, k, env);
      double worst = 0.0;
      for (std::size_t i = 0; i < env.size(); ++i)
        for (std::size_t j = 0; j < env.size(); ++j) {
          const double target = i == j ? rep.envelope_norms[i] : 0.0;
          const double scale = std::sqrt(rep.envelope_norms[i] * rep.envelope_norms[j]);
          worst = std::max(worst, std::abs(rep.overlaps[i][j] - target) / scale);
        }
      for (std::size_t i = 0; i < rep.discrete_overlaps.size(); ++i)
        worst = std::max(worst, std::abs(rep.discrete_overlaps[i]) / std::sqrt(rep.envelope_norms[i]));
      return worst;
    });
  }

  add("vsh_gram", 1e-10, [] {
    const Eigen::MatrixXcd G = vsh::gram_matrix();
    return (G - Eigen::MatrixXcd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
  });
  add("vsh_angular_laplacian", 1e-6, [=] {
    double worst = 0.0;
    const Eigen::Matrix3cd exact = vsh::angular_laplacian_matrix(l).cast<cplx>();
    for (int m = -l; m <= l; ++m) worst = std::max(worst, (vsh::angular_laplacian_numeric(l, m) - exact).cwiseAbs().maxCoeff());
    return worst;
  });
  add("vsh_basis_change", 1e-12, [=] {
    const Eigen::Matrix2d M = vsh::basis_change(l);
    const Eigen::Matrix2d B = vsh::angular_laplacian_matrix(l).topLeftCorner<2, 2>();
    Eigen::Matrix2d target = Eigen::Matrix2d::Zero();
    target(0, 0) = (l - 1.0) * l;
    target(1, 1) = (l + 1.0) * (l + 2.0);
    return std::max((M * B * M.transpose() - target).cwiseAbs().maxCoeff(),
                    (M.transpose() * M - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff());
  });
  add("transversality", 1e-6, [=] {
    std::mt19937_64 gen(cfg.seed + 4);
    double worst = 0.0;
    const auto pts = vsh::sample_points(20, 0.3, 4.0, cfg.seed + 5);
    for (int m = -l; m <= l; ++m) {
      const vsh::TransverseField F{{{l, m, random_core_function(gen)}}};
      for (const auto& x : pts) worst = std::max(worst, vsh::divergence_check(F, x).relative);
    }
    if (discrete) {
      const vsh::TransverseField F{{{l, 0, discrete_eigenfunction(l, k, true)}}};
      for (const auto& x : pts) worst = std::max(worst, vsh::divergence_check(F, x).relative);
    }
    return worst;
  });
  add("curl_form", 1e-6, [=] {
    const vsh::TransverseField F{{{l, 0, RF::term(1.0, 3, -1.0)}, {l, l, RF::term(cplx(1.0, 0.5), 4, -2.0)}}};
    return vsh::curl_form_check(F, vsh::sample_points(20, 0.3, 4.0, cfg.seed + 6));
  });

  add("form_chain", 1e-11, [=] {
    return quadform::form_chain_check(l, RF::term(1.0, 4, -2.0), RF::term(1.0, 3, -1.0)).relative;
  });
  add("psi_map", 1e-11, [=] { return quadform::psi_map_check(l, RF::term(1.0, 3, -1.0)).relative; });
  if (discrete) {
    add("counterterm_calibration", 1e-6, [=] {
      const double fitted = quadform::calibrate_counterterm(l, k).value;
      const double used = cfg.counterterms.kappa_coeff[l - 1];
      const int power = quadform::CountertermCoefficients::calibrated().kappa_r_power[l - 1];
      if (cfg.counterterms.kappa_r_power[l - 1] != power) return kInf;
      return std::abs(fitted - used) / std::abs(fitted);
    });
    add("extended_form_eigen", 1e-6, [=] {
      const vsh::TransverseField F{{{l, 0, discrete_eigenfunction(l, k, true)}}};
      const double k4 = std::pow(k, 4);
      return std::abs(quadform::extended_form(F, quadform::uniform_kappa(k), {}, cfg.counterterms).value + k4) / k4;
    });
  }
  add("extended_form_regular", 1e-10, [=] {
    const RF u = RF::term(1.0, 4, -1.0), v = RF::term(1.0, 5, -2.0);
    const vsh::TransverseField F{{{l, 0, u}, {l, -1, v}}};
    const double plain = (inner_product(u, apply_T2(l, u)) + inner_product(v, apply_T2(l, v))).real();
    double worst = 0.0;
    std::vector<double> kappas{-1.0, 0.0, 1.0, -kInf};
    if (std::isfinite(k)) kappas.push_back(k);
    for (double kk : kappas) {
      const double q = quadform::extended_form(F, quadform::uniform_kappa(kk), {}, cfg.counterterms).value;
      worst = std::max(worst, std::abs(q - plain) / std::abs(plain));
    }
    return worst;
  });

  add("scalar_kappa_window", 0.0, [] {
    int mismatches = 0;
    for (int i = 0; i < 100; ++i) {
      const double a = pi * (i + 0.5) / 100.0;
      const bool positive = scalar_kappa(ScalarExtension(a, 1.0)) > 0.0;
      if (positive != (a > pi / 4 && a < pi)) ++mismatches;
    }
    return double(mismatches);
  });
  add("scalar_form_identity", 1e-12, [] {
    const ScalarExtension ext(pi / 2, 1.0);
    const double k0 = scalar_kappa(ext);
    const RF u = RF::exponential(-k0);
    const double n2 = norm(u) * norm(u);
    return std::abs(scalar_form(u, ext) / n2 + k0 * k0) / (k0 * k0);
  });
  return checks;
}

}  // namespace

bool Suite::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

RadialFunction random_core_function(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> count(1, 3), power(4, 7);
  std::uniform_real_distribution<double> rate(0.5, 2.0), coeff(-1.0, 1.0);
  RF f;
  const int n = count(gen);
  for (int i = 0; i < n; ++i) f += RF::term(cplx(coeff(gen), coeff(gen)), power(gen), -rate(gen));
  return f;
}

Suite run_suite(const SuiteConfig& config) {
  if (config.l != 1 && config.l != 2) throw DomainViolation("verify: l must be 1 or 2");
  const std::vector<Check> checks = build_checks(config);
  Suite suite{config.l, config.kappa, std::vector<CheckResult>(checks.size())};
  numerics::parallel_for(checks.size(), [&](std::size_t i) {
    double res;
    try {
      res = checks[i].residual();
    } catch (const std::exception&) {
      res = kInf;
    }
    if (std::isnan(res)) res = kInf;
    suite.checks[i] = {checks[i].name, res, checks[i].tolerance, res <= checks[i].tolerance};
  });
  return suite;
}

nlohmann::json to_json(const std::vector<Suite>& suites) {
  auto number = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    return x > 0 ? "inf" : "-inf";
  };
  nlohmann::json arr = nlohmann::json::array();
  bool all = true;
  for (const auto& s : suites) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : s.checks)
      checks.push_back({{"check", c.check}, {"residual", number(c.residual)}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    arr.push_back({{"l", s.l}, {"kappa", number(s.kappa)}, {"pass", s.pass()}, {"checks", checks}});
    all = all && s.pass();
  }
  return {{"schema", "1"}, {"pass", all}, {"suites", arr}};
}

}  // namespace tvl::verify
