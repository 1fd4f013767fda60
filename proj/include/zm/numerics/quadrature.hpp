#pragma once

#include <functional>
#include <span>

namespace zm {

/// Accuracy request shared by the adaptive algorithms.
struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_refinements = 60;

  /// Throws DomainError unless abs_tol > 0, rel_tol >= 0, max_refinements >= 1.
  void validate() const;
};

using RealFunction = std::function<double(double)>;

/// Declared decay of an integrand beyond its body; required when an
/// integration endpoint is infinite.
enum class TailDecay { compact, gaussian, exponential, polynomial };

struct TailModel {
  TailDecay kind = TailDecay::gaussian;
  /// gaussian: standard deviation; exponential: 1/rate; polynomial: unused.
  double scale = 1.0;
  /// polynomial: |f(x)| <~ |x|^-exponent, exponent > 1.
  double exponent = 2.0;
  /// Magnitude of the integrand near the start of the tail.
  double amplitude = 1.0;

  /// Radius beyond which the declared tail integral is below `budget`.
  double radius(double budget) const;
};

struct QuadResult {
  double value = 0.0;
  double err_est = 0.0;  // heuristic, not a rigorous bound
};

/// Adaptive Simpson quadrature with interval bisection and Richardson
/// correction. `breakpoints` inside (a, b) are used as forced subdivision
/// points, so integrands may jump there. Infinite endpoints require a tail
/// model: the body is integrated up to the tail radius and the remainder by
/// the substitution x = R + t / (1 - t).
///
/// Throws ConvergenceError (carrying the best estimate) if some subinterval
/// still misses its share of the tolerance after `max_refinements` bisections.
QuadResult integrate(const RealFunction& f, double a, double b, const Tolerance& tol = {},
                     std::span<const double> breakpoints = {}, const TailModel* tail = nullptr);

}  // namespace zm
