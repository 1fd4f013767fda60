#include "zm/numerics/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "zm/error.hpp"

namespace zm {

namespace {

double finite_or_inf(double v) { return std::isfinite(v) ? v : std::numeric_limits<double>::infinity(); }

}  // namespace

MinResult minimize_1d(const RealFunction& f, double lo, double hi, const Tolerance& tol, int scan_points) {
  if (!(lo <= hi)) throw DomainError("minimize_1d: lo > hi");
  scan_points = std::max(scan_points, 256);
  std::vector<double> grid(scan_points + 1);
  for (int i = 0; i <= scan_points; ++i) grid[i] = lo + (hi - lo) * i / scan_points;
  grid.back() = hi;
  return minimize_1d(f, grid, tol);
}

MinResult minimize_1d(const RealFunction& f, std::span<const double> scan, const Tolerance& tol) {
  tol.validate();
  if (scan.empty()) throw DomainError("minimize_1d: empty scan grid");
  std::size_t ib = 0;
  double fb = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scan.size(); ++i) {
    const double v = finite_or_inf(f(scan[i]));
    if (v < fb) {
      fb = v;
      ib = i;
    }
  }
  MinResult best{scan[ib], fb};
  if (!std::isfinite(fb) || scan.size() < 2) return best;
  double a = scan[ib == 0 ? 0 : ib - 1];
  double b = scan[std::min(ib + 1, scan.size() - 1)];
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
  double f1 = finite_or_inf(f(x1)), f2 = finite_or_inf(f(x2));
  const double xtol = std::max(1e-14, 1e-3 * std::sqrt(tol.abs_tol));
  for (int it = 0; it < 300 && b - a > xtol * std::max(1.0, std::fabs(a) + std::fabs(b)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = finite_or_inf(f(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = finite_or_inf(f(x2));
    }
  }
  if (f1 < best.min) best = {x1, f1};
  if (f2 < best.min) best = {x2, f2};
  return best;
}

}  // namespace zm
