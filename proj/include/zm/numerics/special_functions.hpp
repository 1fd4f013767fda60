#pragma once

namespace zm {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
/// 1/sqrt(2 pi)
inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934381868;

/// Standard normal density phi(x).
double std_normal_pdf(double x) noexcept;

/// Standard normal distribution function Phi(x), absolute error below 1e-14.
/// Saturates to exactly 0 or 1 for |x| > 40.
double std_normal_cdf(double x) noexcept;

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
/// Series below x = a + 1, Lentz continued fraction above.
/// Throws DomainError for a <= 0 or x < 0.
double reg_incomplete_gamma(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// without cancellation on the continued-fraction branch.
double reg_incomplete_gamma_upper(double a, double x);

/// Gamma(x + a) / Gamma(x) for x > 0 and x + a > 0.
double gamma_ratio(double a, double x);

}  // namespace zm
