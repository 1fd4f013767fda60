#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "zm/numerics/quadrature.hpp"

namespace zm {

/// Integral of a function over (-inf, lo] together with an error bound.
struct TailDeclaration {
  double integral = 0.0;
  double bound = 0.0;
};

/// Piecewise-defined function on a breakpoint grid. The evaluator may jump
/// at the declared jump points; `left_limit` gives g(x-) there.
class GridFunction {
 public:
  /// Throws DomainError if breakpoints are not strictly increasing with at
  /// least two entries, if a jump point is not a breakpoint, or if the
  /// evaluator is not finite at a breakpoint.
  GridFunction(std::vector<double> breakpoints, RealFunction value, std::vector<double> jump_points = {},
               RealFunction left_limit = {});

  double operator()(double x) const { return value_(x); }
  /// g(x-); equals g(x) away from the jump points.
  double left_limit(double x) const;

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> jump_points() const { return jump_points_; }
  bool is_jump(double x) const;
  double lo() const { return breakpoints_.front(); }
  double hi() const { return breakpoints_.back(); }

  const std::optional<TailDeclaration>& left_tail() const { return left_tail_; }
  GridFunction with_left_tail(TailDeclaration tail) const;

  /// Accumulated numerical error carried from the construction of g.
  double err_est() const { return err_est_; }
  GridFunction with_err_est(double err) const;

 private:
  std::vector<double> breakpoints_;
  RealFunction value_;
  std::vector<double> jump_points_;
  RealFunction left_limit_;
  std::optional<TailDeclaration> left_tail_;
  double err_est_ = 0.0;
};

/// h(x) = sign * integral of g over (-inf, x], using the declared left tail
/// for (-inf, lo]. The result is continuous and carries no jump points.
/// Throws DomainError if `sign` is not +-1 or no left tail was declared.
GridFunction cumulative_integral(const GridFunction& g, int sign, const Tolerance& tol = {});

struct SupResult {
  double value = 0.0;
  double argmax = 0.0;
};

/// sup |g| over the grid hull, left limits at jump points included.
SupResult sup_abs(const GridFunction& g, const Tolerance& refine = {});

enum class InitialSign { positive, negative, indeterminate };

struct SignChangeResult {
  int count = 0;
  InitialSign initial = InitialSign::indeterminate;
};

/// Number of sign alternations among samples with |g| > zero_band. Every
/// cell is sampled at `resolution` interior points, left limits are sampled
/// at jump points, and intervals around candidate alternations are refined.
/// The count is a lower bound of the true number of sign changes.
/// Without an explicit band, 1e-9 times the sampled sup of |g| is used.
SignChangeResult sign_changes(const GridFunction& g, std::optional<double> zero_band = std::nullopt,
                              int resolution = 4);

/// Integral of weight(x) * |g(x)| over the grid hull.
QuadResult integrate_abs(const GridFunction& g, const Tolerance& tol = {}, const RealFunction& weight = {});

/// Integral of g over the grid hull.
QuadResult integrate_grid(const GridFunction& g, const Tolerance& tol = {});

}  // namespace zm
