#include "zm/numerics/chebyshev.hpp"

#include <algorithm>
#include <cmath>

#include "zm/error.hpp"
#include "zm/numerics/special_functions.hpp"

namespace zm::detail {

namespace {

constexpr int kNodes = 17;

struct NodeTable {
  double t[kNodes];
  double cosines[kNodes][kNodes];
  NodeTable() {
    for (int k = 0; k < kNodes; ++k) t[k] = std::cos(kPi * (k + 0.5) / kNodes);
    for (int j = 0; j < kNodes; ++j)
      for (int k = 0; k < kNodes; ++k) cosines[j][k] = std::cos(kPi * j * (k + 0.5) / kNodes);
  }
};

const NodeTable& nodes() {
  static const NodeTable table;
  return table;
}

std::vector<double> chebyshev_coefficients(const RealFunction& f, double a, double b) {
  const auto& tab = nodes();
  const double m = 0.5 * (a + b), h = 0.5 * (b - a);
  double values[kNodes];
  for (int k = 0; k < kNodes; ++k) values[k] = f(m + h * tab.t[k]);
  std::vector<double> c(kNodes);
  for (int j = 0; j < kNodes; ++j) {
    double s = 0.0;
    for (int k = 0; k < kNodes; ++k) s += values[k] * tab.cosines[j][k];
    c[j] = 2.0 * s / kNodes;
  }
  c[0] *= 0.5;
  return c;
}

}  // namespace

double PiecewiseChebyshev::clenshaw(std::span<const double> c, double t) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) {
    const double b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

PiecewiseChebyshev PiecewiseChebyshev::fit(const RealFunction& f, std::span<const double> breakpoints,
                                           double coeff_tol, int max_depth) {
  if (breakpoints.size() < 2) throw DomainError("chebyshev fit needs at least two breakpoints");
  PiecewiseChebyshev out;
  struct Job {
    double a, b;
    int depth;
  };
  out.edges_.push_back(breakpoints.front());
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    std::vector<Job> stack{{breakpoints[i], breakpoints[i + 1], 0}};
    while (!stack.empty()) {
      Job job = stack.back();
      stack.pop_back();
      if (!(job.b > job.a)) continue;
      auto c = chebyshev_coefficients(f, job.a, job.b);
      const double tail = std::fabs(c[kNodes - 1]) + std::fabs(c[kNodes - 2]);
      const double mid = 0.5 * (job.a + job.b);
      const bool splittable = job.depth < max_depth && mid > job.a && mid < job.b;
      if (tail > coeff_tol && splittable) {
        // Right half pushed first so cells come out left to right.
        stack.push_back({mid, job.b, job.depth + 1});
        stack.push_back({job.a, mid, job.depth + 1});
        continue;
      }
      // Chop negligible trailing coefficients.
      std::size_t n = c.size();
      double dropped = 0.0;
      while (n > 1 && std::fabs(c[n - 1]) + dropped <= 0.1 * coeff_tol) {
        dropped += std::fabs(c[n - 1]);
        --n;
      }
      c.resize(n);
      out.fit_error_ += (tail + dropped) * (job.b - job.a);
      out.coeffs_.push_back(std::move(c));
      out.edges_.push_back(job.b);
    }
  }
  return out;
}

std::size_t PiecewiseChebyshev::locate(double x) const {
  auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  std::size_t i = (it == edges_.begin()) ? 0 : static_cast<std::size_t>(it - edges_.begin()) - 1;
  return std::min(i, coeffs_.size() - 1);
}

double PiecewiseChebyshev::operator()(double x) const {
  if (coeffs_.empty()) return 0.0;
  const std::size_t i = locate(x);
  const double a = edges_[i], b = edges_[i + 1];
  double t = (2.0 * x - a - b) / (b - a);
  t = std::clamp(t, -1.0, 1.0);
  return clenshaw(coeffs_[i], t);
}

double PiecewiseChebyshev::right_end_value() const {
  if (coeffs_.empty()) return 0.0;
  return clenshaw(coeffs_.back(), 1.0);
}

PiecewiseChebyshev PiecewiseChebyshev::antiderivative(double start) const {
  PiecewiseChebyshev out;
  out.edges_ = edges_;
  out.fit_error_ = fit_error_;
  out.coeffs_.reserve(coeffs_.size());
  double value = start;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const auto& c = coeffs_[i];
    const double h = 0.5 * (edges_[i + 1] - edges_[i]);
    const std::size_t n = c.size();
    std::vector<double> C(n + 1, 0.0);
    auto coef = [&](std::size_t k) { return k < n ? c[k] : 0.0; };
    C[1] = h * (2.0 * coef(0) - coef(2)) / 2.0;
    for (std::size_t k = 2; k <= n; ++k) C[k] = h * (coef(k - 1) - coef(k + 1)) / (2.0 * k);
    double at_left = 0.0;
    for (std::size_t k = 1; k <= n; ++k) at_left += (k % 2 ? -C[k] : C[k]);
    C[0] = value - at_left;
    double at_right = 0.0;
    for (double v : C) at_right += v;
    value = at_right;
    out.coeffs_.push_back(std::move(C));
  }
  return out;
}

PiecewiseChebyshev PiecewiseChebyshev::scaled(double factor) const {
  PiecewiseChebyshev out = *this;
  for (auto& c : out.coeffs_)
    for (double& v : c) v *= factor;
  out.fit_error_ *= std::fabs(factor);
  return out;
}

double PiecewiseChebyshev::integral() const {
  const auto anti = antiderivative(0.0);
  return anti.right_end_value();
}

double PiecewiseChebyshev::integral_abs() const {
  double total = 0.0;
  constexpr int kScan = 48;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const auto& c = coeffs_[i];
    const double h = 0.5 * (edges_[i + 1] - edges_[i]);
    // Antiderivative of the cell polynomial in t, scaled to x.
    const std::size_t n = c.size();
    std::vector<double> C(n + 1, 0.0);
    auto coef = [&](std::size_t k) { return k < n ? c[k] : 0.0; };
    C[1] = h * (2.0 * coef(0) - coef(2)) / 2.0;
    for (std::size_t k = 2; k <= n; ++k) C[k] = h * (coef(k - 1) - coef(k + 1)) / (2.0 * k);
    auto P = [&](double t) { return clenshaw(C, t); };
    auto p = [&](double t) { return clenshaw(c, t); };
    if (n == 1) {
      total += std::fabs(c[0]) * 2.0 * h;
      continue;
    }
    std::vector<double> cuts{-1.0};
    double t_prev = -1.0, v_prev = p(-1.0);
    for (int k = 1; k <= kScan; ++k) {
      const double t = -1.0 + 2.0 * k / kScan;
      const double v = p(t);
      if ((v_prev < 0.0 && v > 0.0) || (v_prev > 0.0 && v < 0.0)) {
        double lo = t_prev, hi = t, flo = v_prev;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = p(mid);
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        cuts.push_back(0.5 * (lo + hi));
      }
      t_prev = t;
      v_prev = v;
    }
    cuts.push_back(1.0);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) total += std::fabs(P(cuts[k + 1]) - P(cuts[k]));
  }
  return total;
}

}  // namespace zm::detail
