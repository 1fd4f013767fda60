#include "zm/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "zm/error.hpp"
#include "zm/measures/operations.hpp"

namespace zm {

namespace {

constexpr double kMassTol = 1e-12;
constexpr int kBaseGrid = 2048;

void require_zero_mass(const SignedMeasure& m, const char* what) {
  if (std::fabs(m.mass()) > kMassTol)
    throw PreconditionError(std::string(what) + ": mass-nonzero (M(R) = " + std::to_string(m.mass()) + ")");
}

GridFunction distribution_grid(const SignedMeasure& m) {
  std::vector<double> jumps;
  for (const auto& a : m.atoms()) jumps.push_back(a.x);
  return GridFunction(
      metric_grid(m), [m](double x) { return m.distribution(x); }, std::move(jumps),
      [m](double x) { return m.distribution_left(x); });
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

double binom(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::closed_form:
      return "closed_form";
    case Method::cut_criterion:
      return "cut_criterion";
    case Method::quadrature:
      return "quadrature";
  }
  return "?";
}

std::string to_string(InitialSign s) {
  switch (s) {
    case InitialSign::positive:
      return "positive";
    case InitialSign::negative:
      return "negative";
    case InitialSign::indeterminate:
      return "indeterminate";
  }
  return "?";
}

std::vector<double> metric_grid(const SignedMeasure& m) {
  if (m.is_zero()) return {-1.0, 0.0, 1.0};
  auto [lo, hi] = m.effective_support(1e-18);
  lo = std::min(lo, 0.0) - 1.0;
  hi = std::max(hi, 0.0) + 1.0;
  struct Point {
    double x;
    bool fixed;
  };
  std::vector<Point> pts;
  pts.reserve(kBaseGrid + m.atoms().size() + 64);
  for (int i = 0; i <= kBaseGrid; ++i) pts.push_back({lo + (hi - lo) * i / kBaseGrid, false});
  pts.push_back({0.0, false});
  for (double s = 0.125; s < std::max(-lo, hi); s *= 2.0) {
    if (-s > lo) pts.push_back({-s, false});
    if (s < hi) pts.push_back({s, false});
  }
  for (double k : m.kinks())
    if (k > lo && k < hi) pts.push_back({k, true});
  for (const auto& a : m.atoms()) pts.push_back({a.x, true});
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
  std::vector<Point> kept;
  for (const auto& p : pts) {
    if (!kept.empty() && p.x - kept.back().x <= 1e-11 * std::max(1.0, std::fabs(p.x))) {
      if (p.fixed && !kept.back().fixed) kept.back() = p;
      continue;
    }
    kept.push_back(p);
  }
  std::vector<double> out;
  out.reserve(kept.size());
  for (const auto& p : kept) out.push_back(p.x);
  return out;
}

MetricValue kolmogorov(const SignedMeasure& m, const Tolerance& tol) {
  require_zero_mass(m, "kolmogorov");
  if (m.is_zero()) return {0.0, 0.0, Method::closed_form, std::nullopt};
  const auto s = sup_abs(distribution_grid(m), tol);
  return {s.value, tol.abs_tol, Method::quadrature, std::nullopt};
}

MetricValue kappa_r(const SignedMeasure& m, double r, const Tolerance& tol) {
  require_zero_mass(m, "kappa_r");
  if (!(r > 0.0)) throw DomainError("kappa_r: r must be > 0");
  if (m.is_zero()) return {0.0, 0.0, Method::closed_form, std::nullopt};
  RealFunction w;
  if (r != 1.0) w = [r](double x) { return r * std::pow(std::fabs(x), r - 1.0); };
  const auto q = integrate_abs(distribution_grid(m), tol, w);
  return {q.value, q.err_est, Method::quadrature, std::nullopt};
}

QuadResult lambda_1(const SignedMeasure& m, const Tolerance& tol) {
  require_zero_mass(m, "lambda_1");
  if (m.is_zero()) return {0.0, 0.0};
  const auto q = integrate_grid(distribution_grid(m), tol);
  return {-q.value, q.err_est};
}

double integrated_distribution(const SignedMeasure& m, int k, double x) {
  if (k < 1 || k > 5) throw DomainError("integrated_distribution: k must be in 1..5");
  const bool left = x <= 0.0;
  double s = 0.0;
  for (int i = 0; i < k; ++i) {
    const double mom = left ? m.lower_moment(i, x) : m.upper_moment(i, x);
    s += binom(k - 1, i) * mom * std::pow(-x, k - 1 - i);
  }
  s /= factorial(k - 1);
  return left ? s : -s;
}

ZetaStack build_zeta_stack(const SignedMeasure& m, int r, const Tolerance& tol) {
  if (r < 1 || r > 4) throw DomainError("build_zeta_stack: r must be in 1..4");
  require_zero_mass(m, "build_zeta_stack");
  ZetaStack st;
  st.r = r;
  // Scale for the vanishing checks: sum of |c_i| nu_j(P_i) bounds nu_j(M).
  for (int j = 0; j <= r; ++j) {
    double scale = 0.0;
    for (const auto& t : m.terms()) {
      const double nu = absolute_moment(SignedMeasure::of(t.law), j).value;
      if (!std::isfinite(nu))
        throw PreconditionError("build_zeta_stack: nu_" + std::to_string(j) + " of a component is infinite");
      scale += std::fabs(t.coefficient) * nu;
    }
    if (j == r) break;
    const double mu = j == 0 ? m.mass() : m.moment(j);
    if (std::fabs(mu) > 1e-8 * std::max(1.0, scale)) throw MomentConditionError(j, mu);
    st.moment_vanishes[j] = true;
  }

  if (m.is_zero()) {
    for (int k = 1; k <= r; ++k) st.F.emplace_back(std::vector<double>{-1.0, 1.0}, [](double) { return 0.0; });
    st.endpoint_residual.assign(r, 0.0);
    return st;
  }
  st.F.push_back(distribution_grid(m));
  const double lo = st.F.front().lo(), hi = st.F.front().hi();
  st.endpoint_residual.push_back(std::fabs(m.distribution(hi)));
  for (int k = 1; k < r; ++k) {
    const double next_at_lo = integrated_distribution(m, k + 1, lo);
    const auto tail = TailDeclaration{-next_at_lo, 1e-3 * tol.abs_tol};
    st.F.push_back(cumulative_integral(st.F.back().with_left_tail(tail), -1, tol));
    st.endpoint_residual.push_back(std::fabs(st.F.back()(hi)));
  }
  return st;
}

MetricValue zeta_r(const SignedMeasure& m, int r, const Tolerance& tol) {
  if (r == 1) {
    require_zero_mass(m, "zeta_r");
    return kappa_r(m, 1.0, tol);
  }
  const auto st = build_zeta_stack(m, r, tol);
  if (m.is_zero()) return {0.0, 0.0, Method::closed_form, std::nullopt};
  const auto q = integrate_abs(st.F.back(), tol);
  return {q.value, q.err_est + st.endpoint_residual.back(), Method::quadrature, std::nullopt};
}

std::optional<MetricValue> zeta3_cut_criterion(const LawSpec& law) {
  const auto t = moments(law);
  if (!t.finite_nu(3) || !(t.sd > 0.0)) return std::nullopt;
  const auto m = signed_diff(standardise(law), LawSpec::normal());
  if (m.is_zero()) return MetricValue{0.0, 0.0, Method::cut_criterion, SignChangeResult{0, InitialSign::indeterminate}};
  const auto g = distribution_grid(m);
  const auto coarse = sign_changes(g, std::nullopt, 4);
  const auto fine = sign_changes(g, std::nullopt, 32);
  if (coarse.count != fine.count || coarse.initial != fine.initial || fine.count > 2) return std::nullopt;
  return MetricValue{std::fabs(t.skewness) / 6.0, 1e-12, Method::cut_criterion, fine};
}

MetricValue nu_r_signed(const SignedMeasure& m, int r, const Tolerance& tol) {
  if (r < 0 || r > 4) throw DomainError("nu_r_signed: r must be in 0..4");
  const auto q = absolute_moment(m, r, tol);
  return {q.value, q.err_est, q.err_est == 0.0 ? Method::closed_form : Method::quadrature, std::nullopt};
}

}  // namespace zm
