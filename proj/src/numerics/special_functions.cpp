#include "zm/numerics/special_functions.hpp"

#include <cmath>
#include <limits>

#include "zm/error.hpp"

namespace zm {

namespace {

constexpr int kMaxIter = 10000;
constexpr double kEps = 1e-16;

// gamma(a, x) / Gamma(a) by the power series; valid for x < a + 1.
double gamma_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Gamma(a, x) / Gamma(a) by the modified Lentz continued fraction; x >= a + 1.
double gamma_continued_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check_gamma_args(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw DomainError("incomplete gamma requires a > 0 and x >= 0");
}

}  // namespace

double std_normal_pdf(double x) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) noexcept {
  if (x > 40.0) return 1.0;
  if (x < -40.0) return 0.0;
  return 0.5 * std::erfc(-x / kSqrt2);
}

double reg_incomplete_gamma(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_continued_fraction(a, x);
}

double reg_incomplete_gamma_upper(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_series(a, x);
  return gamma_continued_fraction(a, x);
}

double gamma_ratio(double a, double x) {
  if (!(x > 0.0) || !(x + a > 0.0)) throw DomainError("gamma_ratio requires x > 0 and x + a > 0");
  return std::exp(std::lgamma(x + a) - std::lgamma(x));
}

}  // namespace zm
