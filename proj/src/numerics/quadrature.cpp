#include "zm/numerics/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "zm/error.hpp"

namespace zm {

void Tolerance::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("tolerance: abs_tol must be > 0");
  if (!(rel_tol >= 0.0)) throw DomainError("tolerance: rel_tol must be >= 0");
  if (max_refinements < 1) throw DomainError("tolerance: max_refinements must be >= 1");
}

double TailModel::radius(double budget) const {
  const double ratio = std::max(amplitude / budget, 2.0);
  switch (kind) {
    case TailDecay::compact:
      return 0.0;
    case TailDecay::gaussian:
      return scale * std::sqrt(2.0 * std::log(ratio));
    case TailDecay::exponential:
      return scale * std::log(ratio);
    case TailDecay::polynomial:
      return std::pow(ratio, 1.0 / (exponent - 1.0));
  }
  return 0.0;
}

namespace {

struct Panel {
  double a, b;
  double fa, fm, fb;
  double whole;
  double eps;
  int depth;
};

struct Accumulator {
  double value = 0.0;
  double err = 0.0;
  bool converged = true;
  long evals = 0;
};

constexpr long kMaxEvals = 20'000'000;

void simpson_segment(const RealFunction& f, double a, double b, double eps, int max_depth,
                     Accumulator& acc) {
  if (!(b > a)) return;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  acc.evals += 3;
  std::vector<Panel> stack;
  stack.push_back({a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), eps, 0});
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m), rm = 0.5 * (m + p.b);
    const double flm = f(lm), frm = f(rm);
    acc.evals += 2;
    const double left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    const double right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    const double diff = left + right - p.whole;
    const bool width_exhausted = !(lm > p.a && rm < p.b && m > p.a && m < p.b);
    if (std::fabs(diff) <= 15.0 * p.eps || width_exhausted || p.depth >= max_depth ||
        acc.evals > kMaxEvals) {
      if (std::fabs(diff) > 15.0 * p.eps) acc.converged = false;
      acc.value += left + right + diff / 15.0;
      acc.err += std::fabs(diff) / 15.0;
      continue;
    }
    stack.push_back({p.a, m, p.fa, flm, p.fm, left, 0.5 * p.eps, p.depth + 1});
    stack.push_back({m, p.b, p.fm, frm, p.fb, right, 0.5 * p.eps, p.depth + 1});
  }
}

// Integrates over a finite interval split at the breakpoints. Each piece
// starts from several equal panels so narrow features are not stepped over.
void integrate_finite(const RealFunction& f, double a, double b, std::span<const double> breakpoints,
                      double eps, int max_depth, Accumulator& acc) {
  std::vector<double> cuts{a};
  for (double x : breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const double total = b - a;
  constexpr int kInitialPanels = 8;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    const double piece_eps = eps * (hi - lo) / total;
    const double h = (hi - lo) / kInitialPanels;
    for (int k = 0; k < kInitialPanels; ++k) {
      const double pa = lo + k * h;
      const double pb = (k + 1 == kInitialPanels) ? hi : lo + (k + 1) * h;
      // Values at the ends of a piece are taken as one-sided limits.
      const double ia = (k == 0) ? std::nextafter(pa, hi) : pa;
      const double ib = (k + 1 == kInitialPanels) ? std::nextafter(pb, lo) : pb;
      simpson_segment(f, ia, ib, piece_eps / kInitialPanels, max_depth, acc);
    }
  }
}

}  // namespace

QuadResult integrate(const RealFunction& f, double a, double b, const Tolerance& tol,
                     std::span<const double> breakpoints, const TailModel* tail) {
  tol.validate();
  if (std::isnan(a) || std::isnan(b)) throw DomainError("integrate: NaN endpoint");
  if (a > b) {
    QuadResult r = integrate(f, b, a, tol, breakpoints, tail);
    r.value = -r.value;
    return r;
  }
  if (a == b) return {};
  const bool left_inf = std::isinf(a), right_inf = std::isinf(b);
  if ((left_inf || right_inf) && tail == nullptr)
    throw DomainError("integrate: infinite endpoint requires a declared tail model");

  Accumulator acc;
  double body_lo = a, body_hi = b;
  double eps = tol.abs_tol;
  const int depth = tol.max_refinements;
  if (left_inf || right_inf) {
    const double radius = std::max(tail->radius(tol.abs_tol / 10.0), 1.0);
    double lo_bp = 0.0, hi_bp = 0.0;
    for (double x : breakpoints) {
      lo_bp = std::min(lo_bp, x);
      hi_bp = std::max(hi_bp, x);
    }
    if (left_inf) body_lo = std::min(-radius, lo_bp - 1.0);
    if (right_inf) body_hi = std::max(radius, hi_bp + 1.0);
    if (!left_inf) body_lo = a;
    if (!right_inf) body_hi = b;
    if (body_hi < body_lo) body_hi = body_lo;
    eps /= 3.0;
    if (left_inf) {
      const double r = body_lo;
      auto g = [&](double t) {
        if (t >= 1.0) return 0.0;
        const double s = 1.0 - t;
        const double v = f(r - t / s);
        return std::isfinite(v) ? v / (s * s) : 0.0;
      };
      simpson_segment(g, 0.0, 1.0, eps, depth, acc);
    }
    if (right_inf) {
      const double r = body_hi;
      auto g = [&](double t) {
        if (t >= 1.0) return 0.0;
        const double s = 1.0 - t;
        const double v = f(r + t / s);
        return std::isfinite(v) ? v / (s * s) : 0.0;
      };
      simpson_segment(g, 0.0, 1.0, eps, depth, acc);
    }
  }
  integrate_finite(f, body_lo, body_hi, breakpoints, eps, depth, acc);

  const double target = std::max(tol.abs_tol, tol.rel_tol * std::fabs(acc.value));
  if (!acc.converged && acc.err > target)
    throw ConvergenceError("integrate: no convergence within max_refinements", acc.value, acc.err);
  return {acc.value, acc.err};
}

}  // namespace zm
