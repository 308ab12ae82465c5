#pragma once

// The verification suite behind `tvl verify`: each check reports a residual
// against a tolerance.

#include <complex>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tvl/quadform.hpp"
#include "tvl/radial_function.hpp"

namespace tvl::verify {

struct CheckResult {
  std::string check;
  double residual;
  double tolerance;
  bool pass;
};

struct SuiteConfig {
  int l = 1;
  double kappa = 1.0;
  cplx z = std::polar(0.5, 1.0471975511965976);  // 0.5 e^{i pi/3}
  double tol_scale = 1.0;                        // multiplies every tolerance
  quadform::CountertermCoefficients counterterms = quadform::CountertermCoefficients::calibrated();
  unsigned seed = 1;
  bool completeness = true;  // spectral reconstruction and wave packets (slowest checks)
};

struct Suite {
  int l;
  double kappa;
  std::vector<CheckResult> checks;

  bool pass() const;
};

Suite run_suite(const SuiteConfig& config);

/// Random sum of r^k e^{-b r} with 4 <= k <= 7, b in [0.5, 2]: vanishes to
/// fourth order at zero, so it lies in every core considered here.
RadialFunction random_core_function(std::mt19937_64& gen);

/// {"schema": "1", "pass": bool, "suites": [{"l", "kappa", "checks": [...]}]}.
nlohmann::json to_json(const std::vector<Suite>& suites);

}  // namespace tvl::verify
