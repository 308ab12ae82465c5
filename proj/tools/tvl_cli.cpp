// Command-line front end: spectrum, tabulate, verify, quadform, resolvent.
// Exit codes: 0 success / all checks pass, 1 a check or computation failed,
// 2 configuration error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tvl/errors.hpp"
#include "tvl/kernels.hpp"
#include "tvl/numerics.hpp"
#include "tvl/quadform.hpp"
#include "tvl/spectral.hpp"
#include "tvl/verify.hpp"

namespace {

using tvl::cplx;
using nlohmann::json;
using std::numbers::pi;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kConfig = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::optional<int> l;
  std::optional<double> kappa, a, rho;
  double z_mod = 1.0;
  double z_arg = pi / 4;
  bool z_given = false;
  std::optional<double> grid_min, grid_max;
  int grid_n = 0;
  std::optional<double> tol;
  std::string out;
  std::string format = "json";
  // subcommand specifics
  std::string table = "eigenfunction";
  double lambda = 1.0;
  std::string field = "auto";
  bool literal_counterterms = false;
  std::optional<double> counterterm_l1, counterterm_l2;
  bool skip_completeness = false;
};

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json jnum(double x) {
  if (std::isfinite(x)) return x;
  return fmt(x);
}

json jcplx(cplx z) { return json::array({jnum(z.real()), jnum(z.imag())}); }

int l_of(const RunConfig& c) {
  if (!c.l) throw ConfigError("--l is required");
  return *c.l;
}

// Exactly one of --kappa or the pair --a/--rho; kappa is derived from the pair.
double resolve_kappa(const RunConfig& c, int l, std::optional<double> fallback = std::nullopt) {
  const bool has_pair = c.a.has_value() || c.rho.has_value();
  if (c.kappa && has_pair) throw ConfigError("give either --kappa or --a with --rho, not both");
  if (c.kappa) return *c.kappa;
  if (has_pair) {
    if (!c.a || !c.rho) throw ConfigError("--a and --rho must be given together");
    if (!(*c.a >= 0.0 && *c.a < pi)) throw ConfigError("--a must lie in [0, pi)");
    if (!(*c.rho > 0.0)) throw ConfigError("--rho must be positive");
    return tvl::kappa_from_a(l, *c.a, *c.rho);
  }
  if (fallback) return *fallback;
  throw ConfigError("one of --kappa or --a/--rho is required");
}

cplx resolve_z(const RunConfig& c) {
  if (!(c.z_mod > 0.0)) throw ConfigError("--z-mod must be positive");
  if (!(c.z_arg > 0.0 && c.z_arg < pi / 2)) throw ConfigError("--z-arg must lie in (0, pi/2)");
  return std::polar(c.z_mod, c.z_arg);
}

std::vector<double> resolve_grid(const RunConfig& c, double lo, double hi, int n) {
  const double a = c.grid_min.value_or(lo), b = c.grid_max.value_or(hi);
  const int count = c.grid_n > 0 ? c.grid_n : n;
  if (!(a > 0.0) || !std::isfinite(b) || !(b >= a)) throw ConfigError("grid needs 0 < grid-min <= grid-max");
  if (count < 1 || (count == 1 && b != a)) throw ConfigError("grid-n must be >= 2 for a nonempty range");
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = count == 1 ? a : a + (b - a) * i / (count - 1);
  return g;
}

void validate_common(const RunConfig& c) {
  if (c.format != "json" && c.format != "csv") throw ConfigError("--format must be csv or json");
  if (c.tol && !(*c.tol > 0.0)) throw ConfigError("--tol must be positive");
  if (const char* env = std::getenv("SPECTRAL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v <= 0) throw ConfigError("SPECTRAL_THREADS must be a positive integer");
  }
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit_json(const RunConfig& c, const json& j) {
  Output out(c.out);
  out.stream() << j.dump(2) << '\n';
}

// --- spectrum ---------------------------------------------------------------

int cmd_spectrum(const RunConfig& c) {
  const int l = l_of(c);
  const double kappa = resolve_kappa(c, l);
  const double rho = c.rho.value_or(1.0);
  const std::vector<double> lambdas = resolve_grid(c, 0.1, 10.0, 100);
  std::vector<std::pair<double, double>> kmap;
  for (int i = 0; i < 16; ++i) {
    const double a = pi * i / 16.0;
    kmap.emplace_back(a, tvl::kappa_from_a(l, a, rho));
  }
  std::vector<double> sig(lambdas.size());
  tvl::numerics::parallel_for(lambdas.size(), [&](std::size_t i) { sig[i] = tvl::sigma(l, lambdas[i], kappa); });
  const bool discrete = kappa > 0.0 && std::isfinite(kappa);
  const double eig = discrete ? -std::pow(kappa, 4) : 0.0;

  if (c.format == "json") {
    json km = json::array(), sg = json::array();
    for (auto [a, k] : kmap) km.push_back({{"a", a}, {"kappa", jnum(k)}});
    for (std::size_t i = 0; i < lambdas.size(); ++i) sg.push_back({{"lambda", lambdas[i]}, {"sigma", jnum(sig[i])}});
    emit_json(c, {{"schema", "1"},
                  {"command", "spectrum"},
                  {"l", l},
                  {"kappa", jnum(kappa)},
                  {"discrete", discrete ? json{{"eigenvalue", eig}, {"multiplicity", 1}} : json(nullptr)},
                  {"continuous", {{"from", 0.0}, {"to", "inf"}}},
                  {"kappa_map", km},
                  {"sigma", sg}});
  } else {
    Output out(c.out);
    auto& os = out.stream();
    os << "table,x,value\n";
    if (discrete) os << "discrete,1," << fmt(eig) << '\n';
    for (auto [a, k] : kmap) os << "kappa_map," << fmt(a) << ',' << fmt(k) << '\n';
    for (std::size_t i = 0; i < lambdas.size(); ++i) os << "sigma," << fmt(lambdas[i]) << ',' << fmt(sig[i]) << '\n';
  }
  return kOk;
}

// --- tabulate ---------------------------------------------------------------

void write_rows(const RunConfig& c, const std::string& table, const std::vector<std::string>& columns,
                const std::vector<std::vector<double>>& rows) {
  if (c.format == "json") {
    json r = json::array();
    for (const auto& row : rows) {
      json jr = json::array();
      for (double v : row) jr.push_back(jnum(v));
      r.push_back(jr);
    }
    emit_json(c, {{"schema", "1"}, {"command", "tabulate"}, {"table", table}, {"columns", columns}, {"rows", r}});
    return;
  }
  Output out(c.out);
  auto& os = out.stream();
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt(row[i]);
    os << '\n';
  }
}

int cmd_tabulate(const RunConfig& c) {
  const int l = l_of(c);
  const double kappa = resolve_kappa(c, l);
  std::vector<std::vector<double>> rows;
  if (c.table == "eigenfunction" || c.table == "continuous") {
    const std::vector<double> rs = resolve_grid(c, 0.01, 10.0, 1000);
    tvl::RadialFunction f;
    if (c.table == "eigenfunction") {
      if (!(kappa > 0.0 && std::isfinite(kappa))) throw ConfigError("eigenfunction table needs kappa > 0");
      f = tvl::discrete_eigenfunction(l, kappa, true);
    } else {
      if (!(c.lambda > 0.0)) throw ConfigError("--lambda must be positive");
      f = tvl::continuous_eigenfunction(l, c.lambda, kappa);
    }
    rows.resize(rs.size());
    tvl::numerics::parallel_for(rs.size(), [&](std::size_t i) {
      const cplx v = tvl::evaluate(f, rs[i]);
      rows[i] = {rs[i], v.real(), v.imag()};
    });
    write_rows(c, c.table, {"r", "re", "im"}, rows);
    return kOk;
  }
  if (c.table == "resolvent" || c.table == "inverse") {
    const std::vector<double> rs = resolve_grid(c, 0.1, 5.0, 50);
    tvl::SeparableKernel K;
    if (c.table == "resolvent") {
      K = tvl::build_resolvent(l, resolve_z(c), kappa);
    } else {
      if (!(std::isfinite(kappa) && kappa != 0.0)) throw ConfigError("inverse kernel needs finite nonzero kappa");
      K = tvl::inverse_kernel(l, kappa);
    }
    rows.resize(rs.size() * rs.size());
    tvl::numerics::parallel_for(rows.size(), [&](std::size_t i) {
      const double r = rs[i / rs.size()], s = rs[i % rs.size()];
      const cplx v = K(r, s);
      rows[i] = {r, s, v.real(), v.imag()};
    });
    write_rows(c, c.table, {"r", "s", "re", "im"}, rows);
    return kOk;
  }
  throw ConfigError("--table must be eigenfunction, continuous, resolvent or inverse");
}

// --- verify -----------------------------------------------------------------

tvl::quadform::CountertermCoefficients resolve_counterterms(const RunConfig& c) {
  auto coeffs = c.literal_counterterms ? tvl::quadform::CountertermCoefficients::literal()
                                       : tvl::quadform::CountertermCoefficients::calibrated();
  if (c.counterterm_l1) coeffs.kappa_coeff[0] = *c.counterterm_l1;
  if (c.counterterm_l2) coeffs.kappa_coeff[1] = *c.counterterm_l2;
  return coeffs;
}

int cmd_verify(const RunConfig& c) {
  std::vector<int> ls = c.l ? std::vector<int>{*c.l} : std::vector<int>{1, 2};
  std::vector<tvl::verify::Suite> suites;
  for (int l : ls) {
    tvl::verify::SuiteConfig sc;
    sc.l = l;
    sc.kappa = resolve_kappa(c, l, 1.0);
    if (c.z_given) sc.z = resolve_z(c);
    sc.tol_scale = c.tol.value_or(1.0);
    sc.counterterms = resolve_counterterms(c);
    sc.completeness = !c.skip_completeness;
    suites.push_back(tvl::verify::run_suite(sc));
  }
  const json report = tvl::verify::to_json(suites);
  if (c.format == "json") {
    emit_json(c, report);
  } else {
    Output out(c.out);
    auto& os = out.stream();
    os << "l,kappa,check,residual,tolerance,pass\n";
    for (const auto& s : suites)
      for (const auto& chk : s.checks)
        os << s.l << ',' << fmt(s.kappa) << ',' << chk.check << ',' << fmt(chk.residual) << ','
           << fmt(chk.tolerance) << ',' << (chk.pass ? "true" : "false") << '\n';
  }
  return report["pass"].get<bool>() ? kOk : kFailed;
}

// --- quadform ---------------------------------------------------------------

int cmd_quadform(const RunConfig& c) {
  const int l = l_of(c);
  const double kappa = resolve_kappa(c, l);
  std::string field = c.field;
  if (field == "auto") field = kappa > 0.0 && std::isfinite(kappa) ? "eigen" : "regular";
  tvl::vsh::TransverseField F;
  if (field == "eigen") {
    if (!(kappa > 0.0 && std::isfinite(kappa))) throw ConfigError("eigen field needs kappa > 0");
    F.components.push_back({l, 0, tvl::discrete_eigenfunction(l, kappa, true)});
  } else if (field == "regular") {
    F.components.push_back({l, 0, tvl::RadialFunction::term(1.0, 4, -1.0)});
    F.components.push_back({l, -1, tvl::RadialFunction::term(1.0, 5, -2.0)});
  } else {
    throw ConfigError("--field must be auto, eigen or regular");
  }
  const auto fv = tvl::quadform::extended_form(F, tvl::quadform::uniform_kappa(kappa), {}, resolve_counterterms(c),
                                               1e-8, c.tol.value_or(1e-6));
  json j = tvl::quadform::to_json(fv);
  j["schema"] = "1";
  j["command"] = "quadform";
  j["l"] = l;
  j["kappa"] = jnum(kappa);
  j["field"] = field;
  if (field == "eigen") j["expected"] = -std::pow(kappa, 4);
  if (c.format == "json") {
    emit_json(c, j);
  } else {
    Output out(c.out);
    auto& os = out.stream();
    os << "cutoff,regularized\n";
    for (std::size_t i = 0; i < fv.cutoffs.size(); ++i) os << fmt(fv.cutoffs[i]) << ',' << fmt(fv.sequence[i]) << '\n';
    os << "0," << fmt(fv.value) << '\n';
  }
  return kOk;
}

// --- resolvent --------------------------------------------------------------

int cmd_resolvent(const RunConfig& c) {
  const int l = l_of(c);
  const double kappa = resolve_kappa(c, l);
  const cplx z = resolve_z(c);
  const auto coeffs = tvl::resolvent_coefficients(l, z, kappa);
  const tvl::SeparableKernel R = tvl::build_resolvent(l, z, kappa);
  const std::vector<double> rs = resolve_grid(c, 0.1, 5.0, 50);
  std::vector<cplx> values(rs.size() * rs.size());
  tvl::numerics::parallel_for(values.size(), [&](std::size_t i) { values[i] = R(rs[i / rs.size()], rs[i % rs.size()]); });
  if (c.format == "json") {
    json grid = json::array();
    for (std::size_t i = 0; i < values.size(); ++i)
      grid.push_back({rs[i / rs.size()], rs[i % rs.size()], jnum(values[i].real()), jnum(values[i].imag())});
    emit_json(c, {{"schema", "1"},
                  {"command", "resolvent"},
                  {"l", l},
                  {"kappa", jnum(kappa)},
                  {"z", jcplx(z)},
                  {"coefficients",
                   {{"alpha_plus", jcplx(coeffs.alpha_plus)},
                    {"alpha_minus", jcplx(coeffs.alpha_minus)},
                    {"beta_plus", jcplx(coeffs.beta_plus)},
                    {"beta_minus", jcplx(coeffs.beta_minus)},
                    {"W_plus", jcplx(coeffs.W_plus)},
                    {"W_minus", jcplx(coeffs.W_minus)}}},
                  {"columns", {"r", "s", "re", "im"}},
                  {"grid", grid}});
  } else {
    Output out(c.out);
    auto& os = out.stream();
    os << "r,s,re,im\n";
    for (std::size_t i = 0; i < values.size(); ++i)
      os << fmt(rs[i / rs.size()]) << ',' << fmt(rs[i % rs.size()]) << ',' << fmt(values[i].real()) << ','
         << fmt(values[i].imag()) << '\n';
  }
  return kOk;
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option_function<int>("--l", [&c](int v) { c.l = v; }, "angular momentum (1 or 2)")
      ->check(CLI::IsMember({1, 2}));
  sub->add_option_function<double>("--kappa", [&c](double v) { c.kappa = v; }, "extension parameter kappa");
  sub->add_option_function<double>("--a", [&c](double v) { c.a = v; }, "Cayley angle a in [0, pi)");
  sub->add_option_function<double>("--rho", [&c](double v) { c.rho = v; }, "scale rho > 0");
  sub->add_option_function<double>("--z-mod", [&c](double v) { c.z_mod = v; c.z_given = true; }, "|z|");
  sub->add_option_function<double>("--z-arg", [&c](double v) { c.z_arg = v; c.z_given = true; }, "arg z in (0, pi/2)");
  sub->add_option_function<double>("--grid-min", [&c](double v) { c.grid_min = v; }, "grid start");
  sub->add_option_function<double>("--grid-max", [&c](double v) { c.grid_max = v; }, "grid end");
  sub->add_option("--grid-n", c.grid_n, "grid points");
  sub->add_option_function<double>("--tol", [&c](double v) { c.tol = v; },
                                   "verify: tolerance multiplier; quadform: convergence tolerance");
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

int run(int argc, char** argv) {
  CLI::App app{"Self-adjoint extensions of the radial operators T_l^2"};
  app.require_subcommand(1);
  RunConfig c;
  auto* spectrum = app.add_subcommand("spectrum", "discrete eigenvalue, kappa(a) map and sigma_l(lambda) table");
  auto* tabulate = app.add_subcommand("tabulate", "tabulate eigenfunctions or kernels on a grid");
  auto* verify = app.add_subcommand("verify", "run the verification suites");
  auto* quadform = app.add_subcommand("quadform", "extended quadratic form of a transverse field");
  auto* resolvent = app.add_subcommand("resolvent", "resolvent coefficients and kernel grid");
  for (auto* s : {spectrum, tabulate, verify, quadform, resolvent}) add_common(s, c);
  tabulate->add_option("--table", c.table, "eigenfunction, continuous, resolvent or inverse");
  tabulate->add_option("--lambda", c.lambda, "spectral parameter for --table continuous");
  quadform->add_option("--field", c.field, "auto, eigen or regular");
  for (auto* s : {verify, quadform}) {
    s->add_flag("--literal-counterterms", c.literal_counterterms, "use the uncalibrated counterterm values 22sqrt2/9, 80sqrt2/750");
    s->add_option_function<double>("--counterterm-l1", [&c](double v) { c.counterterm_l1 = v; },
                                   "override the l=1 kappa counterterm coefficient");
    s->add_option_function<double>("--counterterm-l2", [&c](double v) { c.counterterm_l2 = v; },
                                   "override the l=2 kappa counterterm coefficient");
  }
  verify->add_flag("--skip-completeness", c.skip_completeness, "omit reconstruction and wave-packet checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    validate_common(c);
    if (*spectrum) return cmd_spectrum(c);
    if (*tabulate) return cmd_tabulate(c);
    if (*verify) return cmd_verify(c);
    if (*quadform) return cmd_quadform(c);
    return cmd_resolvent(c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const tvl::DegenerateZ& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const tvl::DomainViolation& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
