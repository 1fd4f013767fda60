#pragma once

#include <vector>

#include "zm/measures/law_spec.hpp"
#include "zm/measures/signed_measure.hpp"
#include "zm/metrics/metrics.hpp"

namespace zm {

/// Weights on shift + span * i, i = 0, 1, ...; `mass_tail` is the mass
/// trimmed from the ends.
struct LatticeWeights {
  double shift = 0.0;
  double span = 1.0;
  std::vector<double> weights;
  double mass_tail = 0.0;

  /// Throws DomainError unless `law` is purely atomic with a finite positive lattice span.
  static LatticeWeights from_law(const LawSpec& law);
  /// Lattice law with the same atoms; the trimmed mass is restored on the end atoms.
  LawSpec to_law() const;
  double location(std::size_t i) const { return shift + span * static_cast<double>(i); }
};

/// Exact discrete convolution; throws DomainError on a span mismatch.
LatticeWeights convolve_atomic(const LatticeWeights& p, const LatticeWeights& q);

/// n-fold convolution power by repeated squaring; throws DomainError if a
/// result would exceed 1e8 weights.
LatticeWeights power_lattice(const LatticeWeights& p, int n);

/// (F_P * F_Q)(x) = integral of F_P(x - y) dQ(y).
double cdf_convolution_2(const LawSpec& p, const LawSpec& q, double x);
/// Left limit of the same function at x.
double cdf_convolution_2_left(const LawSpec& p, const LawSpec& q, double x);

/// ||M1 * M2||_K; requires mass(M1) mass(M2) = 0.
MetricValue kolmogorov_convolution(const SignedMeasure& m1, const SignedMeasure& m2);

/// Law of (X_1 + ... + X_n) / sqrt(n) for X_i i.i.d. standardised P; P must be a lattice law.
LawSpec standardised_power(const LawSpec& law, int n);

enum class CltMode { exact_lattice, quadrature_n2, lattice_approx };

/// ||P~^{*n} - N||_K. exact_lattice needs a lattice law, quadrature_n2 needs
/// n = 2, lattice_approx rounds P with span eta first and adds a heuristic
/// discretisation error to err_est. Throws PreconditionError if the mode does
/// not apply.
MetricValue clt_lhs(const LawSpec& law, int n, CltMode mode, double eta = 0.0);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs = sup |F1*F2 - H1*H2|, rhs = (sqrt(L2 ||F1-H1||_1) + sqrt(L1 ||F2-H2||_1))^2
/// with L_i the sup of the density of H_i. Throws DomainError if a density of
/// H_i is unbounded.
InequalityCheck convolution_inequality_check(const LawSpec& f1, const LawSpec& f2, const LawSpec& h1,
                                             const LawSpec& h2);

}  // namespace zm
