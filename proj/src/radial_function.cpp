#include "tvl/radial_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include <nlohmann/json.hpp>

#include "tvl/numerics.hpp"

namespace tvl {

namespace {

constexpr double kRateTolerance = 1e-13;
constexpr double kPoleTolerance = 1e-10;
constexpr double kResidueTolerance = 1e-14;

bool same_rate(cplx a, cplx b) {
  if (a == b) return true;
  return std::abs(a - b) <= kRateTolerance * std::max(std::abs(a), std::abs(b));
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Complex power with an exact integer exponent; std::pow(cplx, int) goes
// through exp/log on some standard libraries and loses the sign of zero.
cplx ipow(cplx a, int n) {
  cplx r = 1.0;
  cplx b = n < 0 ? 1.0 / a : a;
  for (int e = std::abs(n); e > 0; e >>= 1) {
    if (e & 1) r *= b;
    b *= b;
  }
  return r;
}

double ipow(double a, int n) {
  double r = 1.0;
  double b = n < 0 ? 1.0 / a : a;
  for (int e = std::abs(n); e > 0; e >>= 1) {
    if (e & 1) r *= b;
    b *= b;
  }
  return r;
}

// Finite part of int_0^t s^k e^{a s} ds via the exponential series,
// sum_j a^j/j! t^{j+k+1}/(j+k+1), with log t for the j+k = -1 term.
cplx prim_series(int k, cplx a, double t) {
  cplx sum = 0.0;
  cplx aj = 1.0;
  double jf = 1.0;
  const double logt = std::log(t);
  for (int j = 0; j < 200; ++j) {
    if (j > 0) {
      aj *= a;
      jf *= j;
    }
    const int p = j + k + 1;
    const cplx contrib = aj / jf * (p == 0 ? logt : ipow(t, p) / p);
    sum += contrib;
    if (j > 4 && j + k > 0 && std::abs(contrib) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Antiderivative of s^k e^{a s} for k >= 0, a != 0.
cplx antiderivative(int k, cplx a, double s) {
  cplx poly = 0.0;
  double falling = 1.0;  // k!/(k-j)!
  for (int j = 0; j <= k; ++j) {
    if (j > 0) falling *= (k - j + 1);
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    poly += sign * falling * ipow(s, k - j) / ipow(a, j + 1);
  }
  return std::exp(a * s) * poly;
}

// Finite part of int_0^inf s^k e^{a s} ds, Re a < 0.
cplx halfline_term(const Term& t) {
  const cplx a = t.rate;
  if (t.power >= 0) return t.coeff * factorial(t.power) / ipow(-a, t.power + 1);
  const int n = -t.power - 1;
  double harmonic = 0.0;
  for (int i = 1; i <= n; ++i) harmonic += 1.0 / i;
  const cplx digamma = -std::numbers::egamma + harmonic;
  return t.coeff * ipow(a, n) / factorial(n) * (digamma - std::log(-a));
}

numerics::QuadratureSpec tight_spec(double scale) {
  numerics::QuadratureSpec spec;
  spec.abs_tol = 1e-16 * scale;
  spec.rel_tol = 1e-14;
  spec.max_panels = 20000;
  return spec;
}

// Finite part of int_0^t s^k e^{a s} ds.
cplx prim_term(int k, cplx a, double t) {
  if (t == 0.0) return 0.0;
  if (a == cplx(0.0)) {
    if (k == -1) return std::log(t);
    return ipow(t, k + 1) / (k + 1);
  }
  const double at = std::abs(a) * t;
  if (at <= 2.0) return prim_series(k, a, t);
  if (k >= 0) return antiderivative(k, a, t) - antiderivative(k, a, 0.0);
  const double t0 = 2.0 / std::abs(a);
  const cplx head = prim_series(k, a, t0);
  auto f = [k, a](double s) { return ipow(s, k) * std::exp(a * s); };
  const double scale = std::abs(f(t0)) + std::abs(f(t));
  auto body = numerics::quad_interval(f, t0, t, tight_spec(scale * (t - t0)));
  return head + body.value;
}

// int_x^inf s^k e^{a s} ds, x > 0, Re a < 0.
cplx tail_term(int k, cplx a, double x) {
  if (k >= 0) return -antiderivative(k, a, x);
  if (std::abs(a) * x <= 2.0) {
    Term t{1.0, k, a};
    return halfline_term(t) - prim_series(k, a, x);
  }
  auto f = [k, a, x](double u) {
    const double om = 1.0 - u;
    const double s = x + u / om;
    return ipow(s, k) * std::exp(a * s) / (om * om);
  };
  auto body = numerics::quad_interval(f, 0.0, 1.0, tight_spec(std::abs(f(0.0))));
  return body.value;
}

// Series coefficients c_n and contribution magnitudes for n in [lo, hi].
void series_window(const RadialFunction& f, int lo, int hi, std::vector<cplx>& coeff,
                   std::vector<double>& mag) {
  coeff.assign(hi - lo + 1, 0.0);
  mag.assign(hi - lo + 1, 0.0);
  for (const Term& t : f.terms()) {
    int j = lo - t.power;
    if (j > hi - t.power) continue;
    cplx term = t.coeff;  // c a^j / j!
    int start = std::max(j, 0);
    for (int i = 1; i <= start; ++i) term *= t.rate / double(i);
    for (int jj = start; jj + t.power <= hi; ++jj) {
      if (jj > start) term *= t.rate / double(jj);
      const std::size_t idx = jj + t.power - lo;
      coeff[idx] += term;
      mag[idx] += std::abs(term);
    }
  }
}

// Coefficient with rounding residue of exact cancellation removed.
cplx cleaned(cplx c, double mag) { return std::abs(c) <= kResidueTolerance * mag ? cplx(0.0) : c; }

double max_rate(const RadialFunction& f) {
  double amax = 0.0;
  for (const Term& t : f.terms()) amax = std::max(amax, std::abs(t.rate));
  return amax;
}

void require_decay(const RadialFunction& f) {
  for (const Term& t : f.terms())
    if (t.rate.real() >= 0.0)
      throw NonDecaying("term with Re(rate) >= 0 in half-line integral");
}

void require_regular(const RadialFunction& f, const char* what) {
  const int lo = f.min_power();
  if (lo >= 0) return;
  const SeriesAtZero s = series_at_zero(f, lo, -1);
  for (int n = lo; n < 0; ++n)
    if (!s.vanishes(n, kPoleTolerance))
      throw DivergentAtZero(std::string(what) + ": r^" + std::to_string(n) +
                            " coefficient does not cancel");
}

}  // namespace

// ---------------------------------------------------------------------------

RadialFunction::RadialFunction(std::vector<Term> raw) {
  double scale = 0.0;
  for (const Term& t : raw) scale = std::max(scale, std::abs(t.coeff));
  std::stable_sort(raw.begin(), raw.end(),
                   [](const Term& a, const Term& b) { return a.power < b.power; });

  std::vector<Term> merged;
  std::size_t begin = 0;
  while (begin < raw.size()) {
    std::size_t end = begin;
    while (end < raw.size() && raw[end].power == raw[begin].power) ++end;
    const std::size_t group_start = merged.size();
    for (std::size_t i = begin; i < end; ++i) {
      auto hit = std::find_if(merged.begin() + group_start, merged.end(),
                              [&](const Term& m) { return same_rate(m.rate, raw[i].rate); });
      if (hit == merged.end())
        merged.push_back(raw[i]);
      else
        hit->coeff += raw[i].coeff;
    }
    begin = end;
  }
  const double cut = kDropTolerance * scale;
  for (const Term& t : merged)
    if (std::abs(t.coeff) > cut && t.coeff != cplx(0.0)) terms_.push_back(t);
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
    return std::tuple(a.power, a.rate.real(), a.rate.imag()) <
           std::tuple(b.power, b.rate.real(), b.rate.imag());
  });
}

RadialFunction RadialFunction::term(cplx coeff, int power, cplx rate) {
  return RadialFunction(std::vector<Term>{{coeff, power, rate}});
}

double RadialFunction::max_abs_coeff() const {
  double m = 0.0;
  for (const Term& t : terms_) m = std::max(m, std::abs(t.coeff));
  return m;
}

int RadialFunction::min_power() const {
  int m = 0;
  bool first = true;
  for (const Term& t : terms_) {
    m = first ? t.power : std::min(m, t.power);
    first = false;
  }
  return m;
}

int RadialFunction::max_power() const {
  int m = 0;
  bool first = true;
  for (const Term& t : terms_) {
    m = first ? t.power : std::max(m, t.power);
    first = false;
  }
  return m;
}

RadialFunction RadialFunction::operator-() const {
  RadialFunction out = *this;
  for (Term& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

RadialFunction& RadialFunction::operator+=(const RadialFunction& o) {
  std::vector<Term> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  *this = RadialFunction(std::move(all));
  return *this;
}

RadialFunction& RadialFunction::operator-=(const RadialFunction& o) { return *this += -o; }

RadialFunction& RadialFunction::operator*=(cplx s) {
  if (s == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (Term& t : terms_) t.coeff *= s;
  return *this;
}

RadialFunction operator*(const RadialFunction& a, const RadialFunction& b) {
  std::vector<Term> out;
  out.reserve(a.size() * b.size());
  for (const Term& x : a.terms())
    for (const Term& y : b.terms())
      out.push_back({x.coeff * y.coeff, x.power + y.power, x.rate + y.rate});
  return RadialFunction(std::move(out));
}

RadialFunction conj(const RadialFunction& f) {
  std::vector<Term> out;
  for (const Term& t : f.terms()) out.push_back({std::conj(t.coeff), t.power, std::conj(t.rate)});
  return RadialFunction(std::move(out));
}

RadialFunction times_power(const RadialFunction& f, int k) {
  std::vector<Term> out = f.terms();
  for (Term& t : out) t.power += k;
  return RadialFunction(std::move(out));
}

RadialFunction differentiate(const RadialFunction& f, int n) {
  if (n < 0) throw std::invalid_argument("differentiate: negative order");
  std::vector<Term> cur = f.terms();
  for (int i = 0; i < n; ++i) {
    std::vector<Term> next;
    next.reserve(2 * cur.size());
    for (const Term& t : cur) {
      if (t.power != 0) next.push_back({t.coeff * double(t.power), t.power - 1, t.rate});
      if (t.rate != cplx(0.0)) next.push_back({t.coeff * t.rate, t.power, t.rate});
    }
    cur = RadialFunction(std::move(next)).terms();
  }
  return RadialFunction(std::move(cur));
}

RadialFunction apply_D(int l, const RadialFunction& w) {
  if (l != 1 && l != 2) throw DomainViolation("apply_D: l must be 1 or 2");
  RadialFunction g = times_power(w, -1);
  for (int i = 0; i < l; ++i) g = times_power(differentiate(g), -1);
  return times_power(g, l + 1);
}

RadialFunction apply_T(int l, const RadialFunction& f) {
  if (l < 0) throw DomainViolation("apply_T: l must be nonnegative");
  const double c = l * (l + 1.0);
  RadialFunction out = -differentiate(f, 2);
  if (c != 0.0) out += times_power(f, -2) * c;
  return out;
}

RadialFunction apply_T2(int l, const RadialFunction& f) { return apply_T(l, apply_T(l, f)); }

RadialFunction apply_E(int l, const RadialFunction& f, bool adjoint) {
  const RadialFunction lower = times_power(f, -1) * double(l);
  return adjoint ? lower - differentiate(f) : differentiate(f) + lower;
}

cplx evaluate(const RadialFunction& f, double r) {
  const bool singular = f.min_power() < 0;
  if (r < 0.0 || (r == 0.0 && singular))
    throw DomainViolation("evaluate: r must be positive for functions with negative powers");
  if (singular && r * max_rate(f) < 0.1) {
    // Near zero the individual pole terms cancel; the combined series is
    // both accurate and smooth in r.
    const int lo = f.min_power();
    std::vector<cplx> c;
    std::vector<double> m;
    series_window(f, lo, lo + 40, c, m);
    cplx sum = 0.0;
    for (int n = lo + 40; n >= lo; --n) {
      const std::size_t i = n - lo;
      if (n < 0 && std::abs(c[i]) <= kPoleTolerance * m[i]) continue;
      sum += cleaned(c[i], m[i]) * ipow(r, n);
    }
    return sum;
  }
  cplx sum = 0.0;
  for (const Term& t : f.terms()) sum += t.coeff * ipow(r, t.power) * std::exp(t.rate * r);
  return sum;
}

cplx evaluate_derivative(const RadialFunction& f, double r, int n) {
  return evaluate(differentiate(f, n), r);
}

cplx SeriesAtZero::coefficient(int n) const {
  auto it = coefficients.find(n);
  return it == coefficients.end() ? cplx(0.0) : it->second;
}

bool SeriesAtZero::vanishes(int n, double tol) const {
  auto it = magnitude.find(n);
  const double mag = it == magnitude.end() ? 0.0 : it->second;
  return std::abs(coefficient(n)) <= tol * mag;
}

cplx SeriesAtZero::derivative(int n) const { return factorial(n) * coefficient(n); }

SeriesAtZero series_at_zero(const RadialFunction& f, int n_min, int n_max) {
  if (n_min > n_max) throw std::invalid_argument("series_at_zero: n_min > n_max");
  SeriesAtZero s;
  s.n_min = n_min;
  s.n_max = n_max;
  std::vector<cplx> c;
  std::vector<double> m;
  series_window(f, n_min, n_max, c, m);
  for (int n = n_min; n <= n_max; ++n) {
    s.coefficients[n] = c[n - n_min];
    s.magnitude[n] = m[n - n_min];
  }
  return s;
}

std::vector<cplx> boundary_values(const RadialFunction& f, int order) {
  const int lo = std::min(0, f.min_power());
  const SeriesAtZero s = series_at_zero(f, lo, order);
  for (int n = lo; n < 0; ++n)
    if (!s.vanishes(n, kPoleTolerance))
      throw PoleAtZero("boundary_values: r^" + std::to_string(n) + " term survives");
  std::vector<cplx> out;
  for (int n = 0; n <= order; ++n) out.push_back(s.derivative(n));
  return out;
}

cplx integrate_halfline(const RadialFunction& f) {
  if (f.is_zero()) return 0.0;
  require_decay(f);
  require_regular(f, "integrate_halfline");
  cplx sum = 0.0;
  for (const Term& t : f.terms()) sum += halfline_term(t);
  return sum;
}

cplx integrate_tail(const RadialFunction& f, double x) {
  if (!(x > 0.0)) throw DomainViolation("integrate_tail: x must be positive");
  require_decay(f);
  cplx sum = 0.0;
  for (const Term& t : f.terms()) sum += t.coeff * tail_term(t.power, t.rate, x);
  return sum;
}

cplx integrate_interval(const RadialFunction& f, double x, double y) {
  if (x < 0.0 || y < x) throw DomainViolation("integrate_interval: need 0 <= x <= y");
  if (x == y) return 0.0;
  if (x == 0.0) {
    require_regular(f, "integrate_interval");
    if (y * max_rate(f) <= 1.0) {
      // Termwise primitives would cancel pole contributions; integrate the
      // combined series instead.
      const int lo = std::min(0, f.min_power());
      const int hi = lo + 60;
      std::vector<cplx> c;
      std::vector<double> m;
      series_window(f, lo, hi, c, m);
      cplx sum = 0.0;
      for (int n = hi; n >= 0; --n) sum += cleaned(c[n - lo], m[n - lo]) * ipow(y, n + 1) / double(n + 1);
      return sum;
    }
  }
  cplx sum = 0.0;
  for (const Term& t : f.terms())
    sum += t.coeff * (prim_term(t.power, t.rate, y) - prim_term(t.power, t.rate, x));
  return sum;
}

cplx inner_product(const RadialFunction& f, const RadialFunction& g) {
  return integrate_halfline(conj(f) * g);
}

double norm(const RadialFunction& f) { return std::sqrt(std::max(0.0, inner_product(f, f).real())); }

double relative_residual(const RadialFunction& f, const RadialFunction& g) {
  const double scale = std::max(f.max_abs_coeff(), g.max_abs_coeff());
  if (scale == 0.0) return 0.0;
  return (f - g).max_abs_coeff() / scale;
}

bool is_real_valued(const RadialFunction& f, double tol) {
  return relative_residual(f, conj(f)) <= tol;
}

nlohmann::json to_json(const RadialFunction& f) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Term& t : f.terms())
    arr.push_back({{"re_coeff", t.coeff.real()},
                   {"im_coeff", t.coeff.imag()},
                   {"power", t.power},
                   {"re_rate", t.rate.real()},
                   {"im_rate", t.rate.imag()}});
  return arr;
}

RadialFunction radial_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("radial function JSON must be an array");
  std::vector<Term> terms;
  for (const auto& e : j)
    terms.push_back({{e.at("re_coeff").get<double>(), e.at("im_coeff").get<double>()},
                     e.at("power").get<int>(),
                     {e.at("re_rate").get<double>(), e.at("im_rate").get<double>()}});
  return RadialFunction(std::move(terms));
}

}  // namespace tvl
