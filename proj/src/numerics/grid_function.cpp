#include "zm/numerics/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "zm/error.hpp"
#include "zm/numerics/chebyshev.hpp"

namespace zm {

namespace {

constexpr int kMaxDepth = 40;

double coeff_tol(const Tolerance& tol) { return std::max(1e-3 * tol.abs_tol, 1e-17); }

}  // namespace

GridFunction::GridFunction(std::vector<double> breakpoints, RealFunction value, std::vector<double> jump_points,
                           RealFunction left_limit)
    : breakpoints_(std::move(breakpoints)),
      value_(std::move(value)),
      jump_points_(std::move(jump_points)),
      left_limit_(std::move(left_limit)) {
  if (breakpoints_.size() < 2) throw DomainError("GridFunction needs at least two breakpoints");
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
    if (!(breakpoints_[i] < breakpoints_[i + 1]) || !std::isfinite(breakpoints_[i + 1]) ||
        !std::isfinite(breakpoints_[i]))
      throw DomainError("GridFunction breakpoints must be finite and strictly increasing");
  if (!value_) throw DomainError("GridFunction needs an evaluator");
  std::sort(jump_points_.begin(), jump_points_.end());
  for (double j : jump_points_)
    if (!std::binary_search(breakpoints_.begin(), breakpoints_.end(), j))
      throw DomainError("GridFunction jump point is not a breakpoint");
  for (double b : breakpoints_)
    if (!std::isfinite(value_(b))) throw DomainError("GridFunction evaluator not finite at a breakpoint");
  if (left_limit_)
    for (double j : jump_points_)
      if (!std::isfinite(left_limit_(j))) throw DomainError("GridFunction left limit not finite at a jump point");
}

bool GridFunction::is_jump(double x) const { return std::binary_search(jump_points_.begin(), jump_points_.end(), x); }

double GridFunction::left_limit(double x) const {
  if (left_limit_ && is_jump(x)) return left_limit_(x);
  return value_(x);
}

GridFunction GridFunction::with_left_tail(TailDeclaration tail) const {
  GridFunction out = *this;
  out.left_tail_ = tail;
  return out;
}

GridFunction GridFunction::with_err_est(double err) const {
  GridFunction out = *this;
  out.err_est_ = err;
  return out;
}

GridFunction cumulative_integral(const GridFunction& g, int sign, const Tolerance& tol) {
  tol.validate();
  if (sign != 1 && sign != -1) throw DomainError("cumulative_integral: sign must be +1 or -1");
  if (!g.left_tail()) throw DomainError("cumulative_integral: tail-bound-missing");
  const TailDeclaration tail = *g.left_tail();
  auto fit = detail::PiecewiseChebyshev::fit([&g](double x) { return g(x); }, g.breakpoints(), coeff_tol(tol),
                                             kMaxDepth);
  auto anti = std::make_shared<const detail::PiecewiseChebyshev>(
      fit.antiderivative(tail.integral).scaled(static_cast<double>(sign)));
  const double lo = g.lo(), hi = g.hi();
  const double start = sign * tail.integral;
  const double end = anti->right_end_value();
  RealFunction value = [anti, lo, hi, start, end](double x) {
    if (x < lo) return start;
    if (x >= hi) return end;
    return (*anti)(x);
  };
  std::vector<double> edges(anti->edges().begin(), anti->edges().end());
  const double err = tail.bound + anti->fit_error() + g.err_est() * (hi - lo);
  return GridFunction(std::move(edges), std::move(value)).with_err_est(err);
}

SupResult sup_abs(const GridFunction& g, const Tolerance& refine) {
  refine.validate();
  SupResult best{std::fabs(g(g.lo())), g.lo()};
  auto consider = [&best](double v, double x) {
    if (std::fabs(v) > best.value) best = {std::fabs(v), x};
  };
  const auto bp = g.breakpoints();
  constexpr int kSamples = 8;
  constexpr double kInvPhi = 0.6180339887498949;
  for (std::size_t i = 0; i < bp.size(); ++i) {
    consider(g(bp[i]), bp[i]);
    if (g.is_jump(bp[i])) consider(g.left_limit(bp[i]), bp[i]);
    if (i + 1 == bp.size()) break;
    const double a = bp[i], b = bp[i + 1], h = (b - a) / (kSamples + 1);
    int k_best = 1;
    double v_best = -1.0;
    for (int k = 1; k <= kSamples; ++k) {
      const double v = std::fabs(g(a + k * h));
      if (v > v_best) {
        v_best = v;
        k_best = k;
      }
    }
    consider(v_best, a + k_best * h);
    // Golden-section search for the maximum of |g| around the best sample.
    double lo = a + (k_best - 1) * h, hi = a + (k_best + 1) * h;
    double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
    double f1 = std::fabs(g(x1)), f2 = std::fabs(g(x2));
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::fabs(lo)); ++it) {
      if (f1 >= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kInvPhi * (hi - lo);
        f1 = std::fabs(g(x1));
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kInvPhi * (hi - lo);
        f2 = std::fabs(g(x2));
      }
      if (std::fabs(f1 - f2) < 1e-3 * refine.abs_tol && it > 40) break;
    }
    consider(f1, x1);
    consider(f2, x2);
  }
  return best;
}

namespace {

struct Sample {
  double x;
  int side;  // 0: left limit, 1: value
  double v;
  bool operator<(const Sample& o) const { return std::tie(x, side) < std::tie(o.x, o.side); }
};

int sign_of(double v, double band) { return v > band ? 1 : (v < -band ? -1 : 0); }

}  // namespace

SignChangeResult sign_changes(const GridFunction& g, std::optional<double> zero_band, int resolution) {
  if (resolution < 1) throw DomainError("sign_changes: resolution must be >= 1");
  const auto bp = g.breakpoints();
  std::vector<Sample> s;
  s.reserve(bp.size() * (resolution + 2));
  for (std::size_t i = 0; i < bp.size(); ++i) {
    if (g.is_jump(bp[i])) s.push_back({bp[i], 0, g.left_limit(bp[i])});
    s.push_back({bp[i], 1, g(bp[i])});
    if (i + 1 == bp.size()) break;
    const double h = (bp[i + 1] - bp[i]) / (resolution + 1);
    for (int k = 1; k <= resolution; ++k) s.push_back({bp[i] + k * h, 1, g(bp[i] + k * h)});
  }
  double band = 0.0;
  if (zero_band) {
    if (*zero_band < 0.0) throw DomainError("sign_changes: zero_band must be >= 0");
    band = *zero_band;
  } else {
    double m = 0.0;
    for (const auto& p : s) m = std::max(m, std::fabs(p.v));
    band = 1e-9 * m;
  }

  constexpr int kRounds = 3, kSplit = 8;
  for (int round = 0; round < kRounds; ++round) {
    std::vector<Sample> extra;
    std::size_t prev = s.size();  // index of the previous off-band sample
    bool gap = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const int si = sign_of(s[i].v, band);
      if (si == 0) {
        gap = true;
        continue;
      }
      if (prev < s.size()) {
        const int sp = sign_of(s[prev].v, band);
        const bool candidate = sp != si || gap || i - prev > 1;
        const double a = s[prev].x, b = s[i].x;
        if (candidate && b > a) {
          const double h = (b - a) / (kSplit + 1);
          for (int k = 1; k <= kSplit; ++k) {
            const double x = a + k * h;
            if (x > a && x < b) extra.push_back({x, 1, g(x)});
          }
        }
      }
      prev = i;
      gap = false;
    }
    if (extra.empty()) break;
    std::sort(extra.begin(), extra.end());
    std::vector<Sample> merged(s.size() + extra.size());
    std::merge(s.begin(), s.end(), extra.begin(), extra.end(), merged.begin());
    s = std::move(merged);
  }

  SignChangeResult out;
  int last = 0;
  for (const auto& p : s) {
    const int si = sign_of(p.v, band);
    if (si == 0) continue;
    if (last == 0) {
      out.initial = si > 0 ? InitialSign::positive : InitialSign::negative;
    } else if (si != last) {
      ++out.count;
    }
    last = si;
  }
  return out;
}

QuadResult integrate_abs(const GridFunction& g, const Tolerance& tol, const RealFunction& weight) {
  tol.validate();
  std::vector<double> bp(g.breakpoints().begin(), g.breakpoints().end());
  RealFunction f;
  double wmax = 1.0;
  if (weight) {
    if (g.lo() < 0.0 && g.hi() > 0.0 && !std::binary_search(bp.begin(), bp.end(), 0.0))
      bp.insert(std::upper_bound(bp.begin(), bp.end(), 0.0), 0.0);
    f = [&g, &weight](double x) { return weight(x) * g(x); };
    wmax = std::max(std::fabs(weight(g.lo())), std::fabs(weight(g.hi())));
  } else {
    f = [&g](double x) { return g(x); };
  }
  auto fit = detail::PiecewiseChebyshev::fit(f, bp, coeff_tol(tol), kMaxDepth);
  return {fit.integral_abs(), fit.fit_error() + g.err_est() * wmax * (g.hi() - g.lo())};
}

QuadResult integrate_grid(const GridFunction& g, const Tolerance& tol) {
  tol.validate();
  auto fit = detail::PiecewiseChebyshev::fit([&g](double x) { return g(x); }, g.breakpoints(), coeff_tol(tol),
                                             kMaxDepth);
  return {fit.integral(), fit.fit_error() + g.err_est() * (g.hi() - g.lo())};
}

}  // namespace zm
