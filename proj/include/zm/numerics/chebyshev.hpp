#pragma once

#include <span>
#include <vector>

#include "zm/numerics/quadrature.hpp"

namespace zm::detail {

/// Piecewise Chebyshev interpolant on a partition of [edges.front(), edges.back()].
/// Cells are fitted from interior (first-kind) nodes only, so the source may
/// jump at the partition points. Cells are bisected until the trailing
/// coefficients fall below the requested tolerance.
class PiecewiseChebyshev {
 public:
  PiecewiseChebyshev() = default;

  static PiecewiseChebyshev fit(const RealFunction& f, std::span<const double> breakpoints,
                                double coeff_tol, int max_depth);

  double operator()(double x) const;
  std::span<const double> edges() const { return edges_; }
  std::size_t cells() const { return coeffs_.size(); }
  /// Sum of the dropped coefficient magnitudes times cell widths.
  double fit_error() const { return fit_error_; }

  /// Continuous antiderivative equal to `start` at the left edge.
  PiecewiseChebyshev antiderivative(double start) const;
  PiecewiseChebyshev scaled(double factor) const;

  /// Value of the interpolant's right-end limit within its last cell.
  double right_end_value() const;

  /// Integral of |p| over the whole partition; roots inside cells are
  /// located by sampling plus bisection.
  double integral_abs() const;
  /// Signed integral.
  double integral() const;

 private:
  std::size_t locate(double x) const;
  static double clenshaw(std::span<const double> c, double t);

  std::vector<double> edges_;
  std::vector<std::vector<double>> coeffs_;
  double fit_error_ = 0.0;
};

}  // namespace zm::detail
