#include "zm/discretise/discretise.hpp"

#include <cmath>
#include <vector>

#include "zm/error.hpp"
#include "zm/measures/operations.hpp"
#include "zm/measures/signed_measure.hpp"
#include "zm/metrics/metrics.hpp"
#include "zm/numerics/special_functions.hpp"

namespace zm {

namespace {

void check_eta(double eta, double alpha) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw DomainError("rounding: eta must be positive and finite");
  if (!std::isfinite(alpha)) throw DomainError("rounding: alpha must be finite");
}

}  // namespace

LawSpec round_law(const LawSpec& p, double eta, double alpha) {
  check_eta(eta, alpha);
  const auto atoms = SignedMeasure::of(LawSpec::rounded(eta, alpha, p)).atoms();
  if (atoms.empty()) throw DomainError("rounding: law has no mass");
  const long first = std::lround(atoms.front().x / eta - alpha);
  const long last = std::lround(atoms.back().x / eta - alpha);
  std::vector<double> w(static_cast<std::size_t>(last - first + 1), 0.0);
  for (const auto& a : atoms) w[static_cast<std::size_t>(std::lround(a.x / eta - alpha) - first)] += a.w;
  return LawSpec::lattice(eta, alpha, first, std::move(w));
}

LawSpec histogram_law(const LawSpec& p, double eta, double alpha) {
  check_eta(eta, alpha);
  return LawSpec::histogram(eta, alpha, p);
}

double rounded_minus_histogram_moment(const LawSpec& p, double eta, double alpha, int k) {
  if (k < 0 || k > 4) throw DomainError("rounded_minus_histogram_moment: k must be in 0..4");
  const auto rd = SignedMeasure::of(round_law(p, eta, alpha));
  // -(1/(k+1)) sum_l C(k+1, 2l+1) (eta/2)^(2l) mu_{k-2l}(P_rd)
  static const double binom[6][6] = {{1}, {1, 1}, {1, 2, 1}, {1, 3, 3, 1}, {1, 4, 6, 4, 1}, {1, 5, 10, 10, 5, 1}};
  double s = 0.0;
  for (int l = 1; 2 * l <= k; ++l) s += binom[k + 1][2 * l + 1] * std::pow(eta / 2, 2 * l) * rd.moment(k - 2 * l);
  return -s / (k + 1);
}

RoundingGaps rounding_gaps(const LawSpec& p, double eta, double alpha, const Tolerance& tol) {
  check_eta(eta, alpha);
  RoundingGaps g;
  g.eta = eta;
  g.alpha = alpha;
  const auto rd = round_law(p, eta, alpha);
  const auto hist = histogram_law(p, eta, alpha);
  g.zeta1_rd_hist = eta / 4;
  g.zeta1_rd_hist_quadrature = kappa_r(signed_diff(rd, hist), 1.0, tol).value;
  g.zeta1_rd_orig = kappa_r(signed_diff(rd, p), 1.0, tol).value;
  const auto mp = SignedMeasure::of(p);
  g.zeta3_rd_hist_bound = eta * eta / 8 * (absolute_moment(mp, 1.0, tol).value + eta);
  const auto tp = moments(p), trd = moments(rd);
  if (!(tp.sd > 0.0) || !(trd.sd > 0.0)) throw DegenerateLawError("rounding_gaps: degenerate standard deviation");
  g.sigma = tp.sd;
  g.sigma_rd = trd.sd;
  g.zeta1_standardised = kappa_r(signed_diff(standardise(rd), standardise(p)), 1.0, tol).value;
  g.zeta1_standardised_reference = eta / (4 * tp.sd);
  return g;
}

LawSpec tail_discretised_normal(double t, double eta) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("tail_discretised_normal: t must be positive");
  check_eta(eta, 0.0);
  const double inner = 1.0 - 2.0 * std_normal_cdf(-t);
  std::vector<std::pair<double, LawSpec>> parts;
  parts.emplace_back(inner, LawSpec::conditional(-t, t, LawSpec::normal()));
  // Cells ](j - 1/2) eta, (j + 1/2) eta] cut down to |x| >= t; by symmetry the
  // left tail mirrors the right one.
  std::vector<std::pair<double, double>> atoms;
  const long j0 = static_cast<long>(std::floor(t / eta + 0.5));
  double outside = 0.0;
  for (long j = j0;; ++j) {
    const double a = std::max(t, (static_cast<double>(j) - 0.5) * eta), b = (static_cast<double>(j) + 0.5) * eta;
    if (b <= a) continue;
    const double m = std_normal_cdf(-a) - std_normal_cdf(-b);
    if (m > 0.0) {
      atoms.emplace_back(static_cast<double>(j) * eta, j == 0 ? 2 * m : m);
      if (j != 0) atoms.emplace_back(-static_cast<double>(j) * eta, m);
      outside += 2 * m;
    }
    if (std_normal_cdf(-b) < 1e-17) break;
  }
  for (auto& a : atoms) a.second /= outside;
  if (outside > 0.0) parts.emplace_back(1.0 - inner, LawSpec::atoms(atoms));
  return LawSpec::mixture(parts);
}

}  // namespace zm
