#pragma once

#include "zm/measures/law_spec.hpp"
#include "zm/numerics/quadrature.hpp"

namespace zm {

/// Lattice law on (alpha + j) eta with p_j the mass of the cell
/// ](alpha + j - 1/2) eta, (alpha + j + 1/2) eta], boundary atoms split half/half.
LawSpec round_law(const LawSpec& p, double eta, double alpha = 0.0);

/// Mixture of uniforms on the rounding cells carrying the same p_j.
LawSpec histogram_law(const LawSpec& p, double eta, double alpha = 0.0);

/// mu_k(P_rd - P_hist) from the moments of P_rd, k in 0..4.
double rounded_minus_histogram_moment(const LawSpec& p, double eta, double alpha, int k);

struct RoundingGaps {
  double eta = 0.0;
  double alpha = 0.0;
  /// zeta_1(P_rd - P_hist): the exact value eta/4 and its quadrature recomputation.
  double zeta1_rd_hist = 0.0;
  double zeta1_rd_hist_quadrature = 0.0;
  /// zeta_1(P_rd - P).
  double zeta1_rd_orig = 0.0;
  /// Upper bound eta^2/8 (nu_1(P) + eta) on the regularised zeta_3(P_rd - P_hist).
  double zeta3_rd_hist_bound = 0.0;
  double sigma = 0.0;
  double sigma_rd = 0.0;
  /// zeta_1(P~_rd - P~) and its first-order reference eta / (4 sigma).
  double zeta1_standardised = 0.0;
  double zeta1_standardised_reference = 0.0;
};

/// Throws DegenerateLawError when P or P_rd has zero spread.
RoundingGaps rounding_gaps(const LawSpec& p, double eta, double alpha = 0.0, const Tolerance& tol = {});

/// N restricted to ]-t, t[ plus the rounding to eta Z of its mass outside.
LawSpec tail_discretised_normal(double t, double eta);

}  // namespace zm
