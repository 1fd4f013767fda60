#include "zm/bounds/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zm/error.hpp"
#include "zm/measures/operations.hpp"
#include "zm/measures/signed_measure.hpp"
#include "zm/numerics/minimize.hpp"
#include "zm/numerics/special_functions.hpp"

namespace zm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Constants make_constants() {
  Constants c{};
  const double s = std::sqrt(2.0 * kPi);
  c.c_sh = 0.469;
  c.c_e = (3.0 + std::sqrt(10.0)) / (6.0 * s);
  c.alpha_z = 4.0 * std::exp(-0.5) / s;
  c.beta_z = 4.0 / s;
  c.gamma_z = (2.0 + 8.0 * std::exp(-1.5)) / s;
  c.zeta_3_2 = g_eta(0.0);
  c.lambda_z = c.gamma_z * c.zeta_3_2;
  c.c_main = 9.0;
  c.c_zeta3 = 34.0;
  c.c_gt = 1.0;
  c.c_hoeglund = 82.4;
  // phi''' = -(x^3 - 3x) phi; phi'''' = (x^4 - 6x^2 + 3) phi vanishes at x^2 = 3 -+ sqrt 6.
  auto d3 = [](double x) { return -(x * x * x - 3.0 * x) * std_normal_pdf(x); };
  const double r1 = std::sqrt(3.0 - std::sqrt(6.0)), r2 = std::sqrt(3.0 + std::sqrt(6.0));
  c.phi_deriv_l1 = {1.0, 2.0 / s, c.alpha_z, c.gamma_z, 4.0 * (d3(r1) - d3(r2))};
  c.c1 = std::sqrt(3.0) * std::pow(std::pow(2.0, -0.25) + 1.0, 2) / s;
  return c;
}

double lift(double v) { return std::isfinite(v) ? v : kInf; }

BoundReport make(const std::string& id, int n, int n_min) {
  BoundReport r;
  r.id = id;
  if (n < n_min) {
    r.applicable = false;
    r.reason = "requires n >= " + std::to_string(n_min);
  }
  return r;
}

void finish(BoundReport& r, double rhs) {
  r.rhs = rhs;
  if (r.applicable && !std::isfinite(rhs)) {
    r.applicable = false;
    r.reason = "required distance is infinite or unavailable";
  }
  if (!r.applicable && r.rhs != r.rhs) r.rhs = kInf;
}

}  // namespace

const Constants& constants() {
  static const Constants c = make_constants();
  return c;
}

double g_eta(double eta) {
  if (!(eta >= 0.0)) throw DomainError("g_eta: eta must be >= 0");
  const double c = eta * eta;
  constexpr int J = 64;
  double s = 0.0;
  for (int j = J; j >= 1; --j) s += std::pow(j + c, -1.5);
  // Euler-Maclaurin tail for sum_{j > J} of f(x) = (x + c)^{-3/2}.
  const double u = J + c;
  const double f = std::pow(u, -1.5);
  const double f1 = -1.5 * std::pow(u, -2.5);
  const double f3 = -1.5 * 2.5 * 3.5 * std::pow(u, -4.5);
  const double f5 = -1.5 * 2.5 * 3.5 * 4.5 * 5.5 * std::pow(u, -6.5);
  s += 2.0 / std::sqrt(u) - 0.5 * f - f1 / 12.0 + f3 / 720.0 - f5 / 30240.0;
  return s;
}

double xi(double kappa, double zeta) {
  if (!(kappa >= 0.0) || !(zeta >= 0.0)) throw DomainError("xi: arguments must be >= 0");
  if (zeta == 0.0) return kappa;
  const auto& k = constants();
  auto obj = [&](double eta) {
    const double den = 1.0 - k.gamma_z * g_eta(eta) * zeta;
    if (!(den > 0.0)) return kInf;
    return (kappa + k.alpha_z * zeta + k.beta_z * eta) / den;
  };
  const double hi = 10.0 * (1.0 + kappa + zeta);
  std::vector<double> scan;
  scan.push_back(0.0);
  constexpr int kScan = 1023;
  for (int i = 0; i < kScan; ++i) scan.push_back(hi * std::pow(10.0, -6.0 + 6.0 * i / (kScan - 1)));
  Tolerance tol;
  tol.abs_tol = 1e-14;
  tol.rel_tol = 1e-12;
  double best = minimize_1d(obj, scan, tol).min;
  if (zeta < 1.0 / k.lambda_z) best = std::min(best, (kappa + k.alpha_z * zeta) / (1.0 - k.lambda_z * zeta));
  return best;
}

double proof_constant(double left, double right) {
  const auto& k = constants();
  auto h1 = [&](double z) { return left * (1.0 + k.alpha_z) / (1.0 - k.lambda_z * z); };
  auto h2 = [&](double z) { return right * (6.0 + k.beta_z / z); };
  double a = 0.0, b = 1.0 / k.lambda_z;
  for (int i = 0; i < 200 && b - a > 1e-16; ++i) {
    const double m = 0.5 * (a + b);
    (h1(m) < h2(m) ? a : b) = m;
  }
  const double z = 0.5 * (a + b);
  return std::min(h1(z), h2(z));
}

double kolmogorov_normal_pair(double sigma, double tau) {
  if (!(sigma > 0.0) || !(tau > 0.0)) throw DomainError("kolmogorov_normal_pair: sigma, tau must be > 0");
  const double w = std::max(sigma, tau) / std::min(sigma, tau);
  if (w == 1.0) return 0.0;
  const double x = std::sqrt(2.0 * std::log(w) / (w * w - 1.0));
  return std_normal_cdf(w * x) - std_normal_cdf(x);
}

DistanceProfile distance_profile(const LawSpec& law, const Tolerance& tol) {
  DistanceProfile p{law};
  const auto t = moments(law);
  if (!(t.sd > 0.0) || !std::isfinite(t.sd)) throw DegenerateLawError("distance_profile: law has no finite spread");
  p.sigma = t.sd;
  const auto pt = standardise(law);
  const auto mt = SignedMeasure::of(pt);
  const auto m = signed_diff(pt, LawSpec::normal());
  p.nu3 = lift(absolute_moment(mt, 3.0, tol).value);
  p.mu3 = mt.moment(3);
  p.span = lattice_span(mt);
  if (std::isinf(p.span)) p.span = 0.0;
  auto note = [&p](const char* what, const std::exception& e) {
    if (!p.problem.empty()) p.problem += "; ";
    p.problem += std::string(what) + ": " + e.what();
  };
  try {
    p.kappa1 = p.zeta1 = lift(kappa_r(m, 1.0, tol).value);
  } catch (const Error& e) {
    p.kappa1 = p.zeta1 = kInf;
    note("zeta_1", e);
  }
  try {
    p.kappa3 = lift(kappa_r(m, 3.0, tol).value);
  } catch (const Error& e) {
    p.kappa3 = kInf;
    note("kappa_3", e);
  }
  try {
    if (auto c = zeta3_cut_criterion(pt); c && c->value > 0.0) {
      p.zeta3 = c->value;
      p.zeta3_method = Method::cut_criterion;
    } else {
      const auto z = zeta_r(m, 3, tol);
      p.zeta3 = lift(z.value);
      p.zeta3_method = z.method;
    }
  } catch (const Error& e) {
    p.zeta3 = kInf;
    note("zeta_3", e);
  }
  for (int r = 0; r < 4; ++r) {
    try {
      p.nu_diff[r] = lift(nu_r_signed(m, r, tol).value);
    } catch (const Error& e) {
      p.nu_diff[r] = kInf;
      note("nu_r", e);
    }
  }
  return p;
}

BoundReport be_classical(const DistanceProfile& p, int n, double c, const std::string& id) {
  auto r = make(id, n, 1);
  r.inputs = {{"c", c}, {"nu3", p.nu3}};
  finish(r, c * p.nu3 / std::sqrt(n));
  return r;
}

BoundReport be_main(const DistanceProfile& p, int n) {
  auto r = make("main", n, 2);
  r.inputs = {{"zeta1", p.zeta1}, {"zeta3", p.zeta3}};
  finish(r, constants().c_main * std::max(p.zeta1, p.zeta3) / std::sqrt(n));
  return r;
}

BoundReport be_main_all_n(const DistanceProfile& p, int n) {
  auto r = make("main_all_n", n, 1);
  r.inputs = {{"zeta1", p.zeta1}, {"zeta3", p.zeta3}};
  const double e = std::min(1.0, n / 2.0);
  finish(r, constants().c_main * std::max(std::pow(p.zeta1, e), p.zeta3) / std::sqrt(n));
  return r;
}

BoundReport be_kappa(const DistanceProfile& p, int n) {
  auto r = make("kappa", n, 2);
  r.inputs = {{"kappa1", p.kappa1}, {"kappa3", p.kappa3}};
  finish(r, std::max(9.0 * p.kappa1, 1.5 * p.kappa3) / std::sqrt(n));
  return r;
}

BoundReport be_zeta3_only(const DistanceProfile& p, int n) {
  auto r = make("zeta3_only", n, 2);
  r.inputs = {{"zeta3", p.zeta3}};
  finish(r, constants().c_zeta3 * std::max(std::cbrt(p.zeta3), p.zeta3) / std::sqrt(n));
  return r;
}

BoundReport shiganov_family(const DistanceProfile& p, int n, int r_index) {
  static const double c[4] = {1.8, 4.2, 13.5, 35.0};
  if (r_index < 0 || r_index > 3) throw DomainError("shiganov_family: r must be in 0..3");
  auto r = make("shiganov_" + std::to_string(r_index), n, 1);
  const double e = std::min(1.0, static_cast<double>(n) / (r_index + 1));
  r.inputs = {{"nu_r", p.nu_diff[r_index]}, {"nu3", p.nu_diff[3]}};
  finish(r, c[r_index] * std::max(std::pow(p.nu_diff[r_index], e), p.nu_diff[3]) / std::sqrt(n));
  return r;
}

BoundReport shiganov_combined(const DistanceProfile& p, int n) {
  auto r = make("shiganov_combined", n, 1);
  double best = kInf;
  int arg = -1;
  for (int k = 0; k < 4; ++k) {
    const auto b = shiganov_family(p, n, k);
    if (b.applicable && b.rhs < best) {
      best = b.rhs;
      arg = k;
    }
  }
  r.inputs = {{"r", arg}};
  finish(r, best);
  return r;
}

BoundReport zolotarev_zeta1_bound(const DistanceProfile& p, int n) {
  auto r = make("zolotarev_zeta1", n, 1);
  const double x = (std::isfinite(p.zeta1) && std::isfinite(p.zeta3)) ? xi(p.zeta1, p.zeta3) : kInf;
  const double coarse = 14.0 * std::max(p.zeta1, p.zeta3) / std::sqrt(n);
  r.inputs = {{"zeta1", p.zeta1}, {"zeta3", p.zeta3}, {"xi", x}, {"coarse_rhs", coarse}};
  finish(r, x / std::sqrt(n));
  return r;
}

BoundReport goldstein_tyurin(const DistanceProfile& p, int n) {
  auto r = make("goldstein_tyurin", n, 1);
  r.inputs = {{"nu3", p.nu3}};
  finish(r, constants().c_gt * p.nu3 / std::sqrt(n));
  return r;
}

double esseen_asymptotic(const DistanceProfile& p) {
  return (p.span / 2.0 + std::fabs(p.mu3) / 6.0) * kInvSqrt2Pi;
}

std::vector<BoundReport> kolmogorov_bounds(const DistanceProfile& p, int n) {
  const auto& k = constants();
  return {be_main(p, n),          be_main_all_n(p, n),       be_kappa(p, n),
          be_zeta3_only(p, n),    be_classical(p, n, k.c_sh, "classical_c_sh"),
          shiganov_combined(p, n)};
}

SamplingReport sampling_bound(const LawSpec& population, int n, long n_pop, int diversity, const Tolerance& tol) {
  if (n > n_pop) throw DomainError("sampling_bound: sample size exceeds population size");
  const auto m = SignedMeasure::of(population);
  if (m.has_continuous_part()) throw DomainError("sampling_bound: population law must be atomic");
  const int d = diversity > 0 ? diversity : static_cast<int>(m.atoms().size());
  SamplingReport out;
  out.bound = make("sampling", n, 2);
  out.hoeglund = make("hoeglund", n, 1);
  if (d < 2) {
    for (auto* r : {&out.bound, &out.hoeglund}) {
      r->applicable = false;
      r->reason = "degenerate population (sigma = 0)";
      r->rhs = kInf;
    }
    return out;
  }
  const auto p = distance_profile(population, tol);
  const double extra = std::min((n - 1) / 2.0, static_cast<double>(d)) * n / static_cast<double>(n_pop);
  out.bound.inputs = {{"zeta1", p.zeta1}, {"zeta3", p.zeta3}, {"diversity", d}, {"finite_population_term", extra}};
  finish(out.bound, constants().c_main * std::max(p.zeta1, p.zeta3) / std::sqrt(n) + extra);
  out.hoeglund.inputs = {{"nu3", p.nu3}};
  if (n > n_pop - 1) {
    out.hoeglund.applicable = false;
    out.hoeglund.reason = "requires n <= N - 1";
    out.hoeglund.rhs = kInf;
  } else {
    const double eff = n * static_cast<double>(n_pop - n) / static_cast<double>(n_pop - 1);
    finish(out.hoeglund, constants().c_hoeglund * p.nu3 / std::sqrt(eff));
  }
  return out;
}

}  // namespace zm
