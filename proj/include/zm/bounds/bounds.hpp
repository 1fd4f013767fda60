#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "zm/measures/law_spec.hpp"
#include "zm/metrics/metrics.hpp"
#include "zm/numerics/quadrature.hpp"

namespace zm {

struct Constants {
  double c_sh;       // Shiganov's classical Berry-Esseen constant
  double c_e;        // Esseen's lower constant
  double alpha_z;    // 4 e^{-1/2} / sqrt(2 pi)
  double beta_z;     // 4 / sqrt(2 pi)
  double gamma_z;    // (2 + 8 e^{-3/2}) / sqrt(2 pi)
  double zeta_3_2;   // Riemann zeta(3/2)
  double lambda_z;   // gamma_z * zeta(3/2)
  double c_main;
  double c_zeta3;
  double c_gt;
  double c_hoeglund;
  /// ||phi^(k)||_1 for k = 0..4.
  std::array<double, 5> phi_deriv_l1;
  /// sqrt(3) (2^{-1/4} + 1)^2 / sqrt(2 pi)
  double c1;
};

const Constants& constants();

/// sup over 0 < z < 1/lambda of min(left (1 + alpha) / (1 - lambda z), right (6 + beta / z)).
/// left = right = 1 gives the zeta_1 constant 13.38..., left = c1, right = c_sh the main one.
double proof_constant(double left, double right);

/// sum_{j >= 1} (j + eta^2)^{-3/2}.
double g_eta(double eta);

/// inf over eta of (kappa + alpha zeta + beta eta) / (1 - gamma g(eta) zeta); +inf if infeasible.
double xi(double kappa, double zeta);

/// Kolmogorov distance between N(0, sigma^2) and N(0, tau^2).
double kolmogorov_normal_pair(double sigma, double tau);

/// Distances of a standardised law to N, computed once and shared by all bounds.
struct DistanceProfile {
  LawSpec law;
  double sigma = 0.0;
  double zeta1 = 0.0, zeta3 = 0.0;
  double kappa1 = 0.0, kappa3 = 0.0;
  std::array<double, 4> nu_diff{};  // nu_r(P~ - N), r = 0..3
  double nu3 = 0.0;                 // nu_3(P~)
  double mu3 = 0.0;                 // mu_3(P~)
  double span = 0.0;                // lattice span of P~, 0 if non-lattice
  Method zeta3_method = Method::quadrature;
  /// Non-empty when some distance could not be computed; the affected fields are +inf.
  std::string problem = {};
};

/// Throws DegenerateLawError for a law without spread.
DistanceProfile distance_profile(const LawSpec& law, const Tolerance& tol = {});

struct BoundReport {
  std::string id;
  double rhs = 0.0;
  bool applicable = true;
  std::string reason;
  std::vector<std::pair<std::string, double>> inputs;
};

BoundReport be_classical(const DistanceProfile& p, int n, double c, const std::string& id = "classical");
BoundReport be_main(const DistanceProfile& p, int n);
BoundReport be_main_all_n(const DistanceProfile& p, int n);
BoundReport be_kappa(const DistanceProfile& p, int n);
BoundReport be_zeta3_only(const DistanceProfile& p, int n);
/// r in 0..3.
BoundReport shiganov_family(const DistanceProfile& p, int n, int r);
BoundReport shiganov_combined(const DistanceProfile& p, int n);
/// Bounds zeta_1 of the standardised n-fold power; the coarse 14 (zeta_1 v zeta_3) form is in inputs.
BoundReport zolotarev_zeta1_bound(const DistanceProfile& p, int n);
/// Bounds zeta_1 of the standardised n-fold power by nu_3(P~) / sqrt(n).
BoundReport goldstein_tyurin(const DistanceProfile& p, int n);

/// lim sqrt(n) ||P~^{*n} - N||_K = (h(P~)/2 + |mu_3(P~)|/6) / sqrt(2 pi).
double esseen_asymptotic(const DistanceProfile& p);

/// All Kolmogorov-distance bounds for the n-fold power, in a fixed order.
std::vector<BoundReport> kolmogorov_bounds(const DistanceProfile& p, int n);

struct SamplingReport {
  BoundReport bound;
  BoundReport hoeglund;
};

/// Sampling n of n_pop units without replacement from the population law `population`
/// (atoms with weights count / n_pop). diversity <= 0 means the number of distinct values.
SamplingReport sampling_bound(const LawSpec& population, int n, long n_pop, int diversity = 0,
                              const Tolerance& tol = {});

}  // namespace zm
