#pragma once

#include <span>

#include "zm/numerics/quadrature.hpp"

namespace zm {

struct MinResult {
  double argmin = 0.0;
  double min = 0.0;
};

/// Scans `scan_points` equispaced points of [lo, hi] (at least 256), then
/// refines the best bracket by golden section. Non-finite values count as +inf.
MinResult minimize_1d(const RealFunction& f, double lo, double hi, const Tolerance& tol = {},
                      int scan_points = 256);

/// Same, with a caller-supplied increasing scan grid.
MinResult minimize_1d(const RealFunction& f, std::span<const double> scan, const Tolerance& tol = {});

}  // namespace zm
