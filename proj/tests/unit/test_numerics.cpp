#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "zm/error.hpp"
#include "zm/numerics/grid_function.hpp"
#include "zm/numerics/minimize.hpp"
#include "zm/numerics/quadrature.hpp"
#include "zm/numerics/special_functions.hpp"

using namespace zm;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace

TEST(NormalCdf, KnownValues) {
  EXPECT_DOUBLE_EQ(std_normal_cdf(0.0), 0.5);
  EXPECT_NEAR(std_normal_cdf(1.0), 0.8413447460685429, 1e-15);
  EXPECT_NEAR(std_normal_cdf(-1.96), 0.024997895148220435, 1e-15);
  EXPECT_EQ(std_normal_cdf(-41.0), 0.0);
  EXPECT_EQ(std_normal_cdf(41.0), 1.0);
}

TEST(NormalCdf, MillsRatioBand) {
  const double t = 3.0, phi = std_normal_pdf(t);
  const double v = std_normal_cdf(-t);
  // Alternating asymptotic series brackets the tail.
  EXPECT_LT(v, phi / t);
  EXPECT_GT(v, phi * (1.0 / t - 1.0 / (t * t * t)));
}

TEST(NormalCdf, SymmetryProperty) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    EXPECT_NEAR(std_normal_cdf(x) + std_normal_cdf(-x), 1.0, 1e-13);
  }
}

TEST(IncompleteGamma, ClosedForms) {
  EXPECT_EQ(reg_incomplete_gamma(1.0, 0.0), 0.0);
  EXPECT_NEAR(reg_incomplete_gamma(1.0, 1.0), 1.0 - std::exp(-1.0), 1e-14);
  for (double x : {0.01, 0.3, 1.0, 1.7, 4.0, 12.0, 30.0})
    EXPECT_NEAR(reg_incomplete_gamma(0.5, x), std::erf(std::sqrt(x)), 1e-13) << x;
  // P(n, x) = 1 - e^{-x} sum_{k<n} x^k/k!
  for (double x : {0.5, 3.0, 9.0, 25.0}) {
    double s = 0.0, term = 1.0;
    for (int k = 0; k < 5; ++k) {
      s += term;
      term *= x / (k + 1);
    }
    EXPECT_NEAR(reg_incomplete_gamma(5.0, x), 1.0 - std::exp(-x) * s, 1e-13) << x;
    EXPECT_NEAR(reg_incomplete_gamma_upper(5.0, x), std::exp(-x) * s, 1e-13) << x;
  }
}

TEST(IncompleteGamma, MonotoneAndBounded) {
  double prev = 0.0;
  for (double x = 0.0; x < 40.0; x += 0.05) {
    const double v = reg_incomplete_gamma(3.3, x);
    EXPECT_GE(v, prev - 1e-15);
    EXPECT_LE(v, 1.0);
    prev = v;
  }
}

TEST(IncompleteGamma, DomainErrors) {
  EXPECT_THROW(reg_incomplete_gamma(0.0, 1.0), DomainError);
  EXPECT_THROW(reg_incomplete_gamma(1.0, -1.0), DomainError);
}

TEST(Integrate, Constant) {
  auto r = integrate([](double) { return 1.0; }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 1.0, 1e-14);
}

TEST(Integrate, NormalDensityOverLine) {
  TailModel tail{TailDecay::gaussian, 1.0};
  auto r = integrate(std_normal_pdf, -INFINITY, INFINITY, {}, {}, &tail);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_LE(r.err_est, 1e-10);
}

TEST(Integrate, ThirdAbsoluteMomentOfNormal) {
  TailModel tail{TailDecay::gaussian, 1.0, 2.0, 10.0};
  auto r = integrate([](double x) { return std::pow(std::fabs(x), 3) * std_normal_pdf(x); }, -INFINITY, INFINITY,
                     {}, std::vector<double>{0.0}, &tail);
  EXPECT_NEAR(r.value, 4.0 / std::sqrt(2.0 * kPi), 1e-10);
}

TEST(Integrate, JumpAtBreakpoint) {
  std::vector<double> bp{0.3};
  auto r = integrate([](double x) { return x < 0.3 ? 1.0 : 5.0; }, 0.0, 1.0, {}, bp);
  EXPECT_NEAR(r.value, 0.3 + 5.0 * 0.7, 1e-12);
}

TEST(Integrate, AdditiveOverSplits) {
  auto f = [](double x) { return std::sin(3.0 * x) * std::exp(-x); };
  auto whole = integrate(f, 0.0, 4.0);
  auto left = integrate(f, 0.0, 1.3);
  auto right = integrate(f, 1.3, 4.0);
  EXPECT_NEAR(whole.value, left.value + right.value, whole.err_est + left.err_est + right.err_est + 1e-13);
}

TEST(Integrate, NonConvergenceCarriesEstimate) {
  Tolerance tol;
  tol.max_refinements = 2;
  try {
    integrate([](double x) { return std::sin(200.0 * x); }, 0.0, 10.0, tol);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_TRUE(std::isfinite(e.best()));
  }
}

TEST(Tolerance, Validation) {
  Tolerance t;
  t.abs_tol = 0.0;
  EXPECT_THROW(t.validate(), DomainError);
}

TEST(GridFunction, Invariants) {
  EXPECT_THROW(GridFunction({0.0}, [](double) { return 0.0; }), DomainError);
  EXPECT_THROW(GridFunction({0.0, 0.0}, [](double) { return 0.0; }), DomainError);
  EXPECT_THROW(GridFunction({0.0, 1.0}, [](double) { return NAN; }), DomainError);
  EXPECT_THROW(GridFunction({0.0, 1.0}, [](double) { return 0.0; }, {0.5}), DomainError);
}

TEST(CumulativeIntegral, ZeroStaysZero) {
  GridFunction g(linspace(-3, 3, 7), [](double) { return 0.0; });
  auto h = cumulative_integral(g.with_left_tail({0.0, 0.0}), -1);
  for (double x : linspace(-3, 3, 31)) EXPECT_EQ(h(x), 0.0);
}

TEST(CumulativeIntegral, RequiresTail) {
  GridFunction g(linspace(-3, 3, 7), [](double) { return 0.0; });
  EXPECT_THROW(cumulative_integral(g, 1), DomainError);
  EXPECT_THROW(cumulative_integral(g.with_left_tail({}), 2), DomainError);
}

TEST(CumulativeIntegral, DensityToCdf) {
  GridFunction g(linspace(-12, 12, 97), std_normal_pdf);
  auto h = cumulative_integral(g.with_left_tail({std_normal_cdf(-12.0), 1e-30}), 1);
  double worst = 0.0;
  for (double x : linspace(-12, 12, 2001)) worst = std::max(worst, std::fabs(h(x) - std_normal_cdf(x)));
  EXPECT_LE(worst, 1e-9);
}

TEST(CumulativeIntegral, DerivativeRecoversIntegrand) {
  auto f = [](double x) { return std::cos(x) * std::exp(-0.1 * x * x); };
  GridFunction g(linspace(-10, 10, 41), f);
  auto h = cumulative_integral(g.with_left_tail({0.0, 0.0}), 1);
  const double d = 1e-4;
  for (double x : linspace(-9.5, 9.5, 20)) EXPECT_NEAR((h(x + d) - h(x - d)) / (2 * d), f(x), 1e-6) << x;
}

TEST(CumulativeIntegral, JumpIntegrandAndDecay) {
  // F of B~_{1/2} - N: atoms 1/2 at -1 and +1 minus Phi. Its integral
  // vanishes at +infinity since the first moments cancel.
  auto F = [](double x) { return (x >= -1.0 ? 0.5 : 0.0) + (x >= 1.0 ? 0.5 : 0.0) - std_normal_cdf(x); };
  auto Fl = [](double x) { return (x > -1.0 ? 0.5 : 0.0) + (x > 1.0 ? 0.5 : 0.0) - std_normal_cdf(x); };
  std::vector<double> bp = linspace(-12, 12, 97);
  GridFunction g(bp, F, {-1.0, 1.0}, Fl);
  // -int_{-inf}^{-12} F = int Phi = Phi(-12)*(-12) + phi(12), negligible.
  auto h = cumulative_integral(g.with_left_tail({0.0, 1e-30}), -1);
  EXPECT_NEAR(h(12.0), 0.0, 1e-12);
  EXPECT_NEAR(h(-12.0), 0.0, 1e-12);
  // Closed form at 0: -int_{-inf}^0 F = int_{-inf}^0 Phi - 1/2 = phi(0) - 1/2.
  EXPECT_NEAR(h(0.0), std_normal_pdf(0.0) - 0.5, 1e-12);
}

TEST(SupAbs, Constant) {
  GridFunction g(linspace(0, 1, 5), [](double) { return 0.25; });
  EXPECT_DOUBLE_EQ(sup_abs(g).value, 0.25);
}

TEST(SupAbs, NormalPairDifference) {
  GridFunction g(linspace(-20, 20, 81), [](double x) { return std_normal_cdf(x) - std_normal_cdf(x / 2.0); });
  auto s = sup_abs(g);
  // Dense-grid oracle.
  double oracle = 0.0;
  for (double x = -3.0; x <= 3.0; x += 1e-5)
    oracle = std::max(oracle, std::fabs(std_normal_cdf(x) - std_normal_cdf(x / 2.0)));
  EXPECT_NEAR(s.value, oracle, 1e-10);
  EXPECT_NEAR(s.value, 0.1613372844, 1e-10);
  const double x_star = std::sqrt(2.0 * std::log(2.0) / 3.0);
  EXPECT_NEAR(std::fabs(s.argmax), 2.0 * x_star, 1e-5);
}

TEST(SupAbs, AttainedAtLeftLimit) {
  auto F = [](double x) { return (x >= -1.0 ? 0.5 : 0.0) + (x >= 1.0 ? 0.5 : 0.0) - std_normal_cdf(x); };
  auto Fl = [](double x) { return (x > -1.0 ? 0.5 : 0.0) + (x > 1.0 ? 0.5 : 0.0) - std_normal_cdf(x); };
  GridFunction g(linspace(-12, 12, 25), F, {-1.0, 1.0}, Fl);
  auto s = sup_abs(g);
  // Candidates at the two atoms: |F(-1)|, |F(-1-)|, |F(1)|, |F(1-)|.
  double oracle = 0.0;
  for (double v : {F(-1.0), Fl(-1.0), F(1.0), Fl(1.0)}) oracle = std::max(oracle, std::fabs(v));
  EXPECT_NEAR(s.value, oracle, 1e-14);
  EXPECT_NEAR(s.value, std_normal_cdf(1.0) - 0.5, 1e-14);
}

TEST(SupAbs, DominatesSamples) {
  auto f = [](double x) { return std::sin(5 * x) * std::exp(-x * x / 8); };
  GridFunction g(linspace(-6, 6, 13), f);
  auto s = sup_abs(g);
  for (double x : linspace(-6, 6, 1201)) EXPECT_GE(s.value, std::fabs(f(x)) - 1e-15);
}

TEST(Minimize, Quadratic) {
  auto r = minimize_1d([](double x) { return (x - 1) * (x - 1); }, 0.0, 2.0);
  EXPECT_NEAR(r.argmin, 1.0, 1e-6);
  EXPECT_NEAR(r.min, 0.0, 1e-10);
}

TEST(Minimize, MonotoneHitsBoundary) {
  auto r = minimize_1d([](double x) { return 1.5957691216057307 * x; }, 0.0, 10.0);
  EXPECT_EQ(r.argmin, 0.0);
  EXPECT_EQ(r.min, 0.0);
}

TEST(SignChanges, Trivial) {
  GridFunction one(linspace(-1, 1, 5), [](double) { return 1.0; });
  auto r = sign_changes(one);
  EXPECT_EQ(r.count, 0);
  EXPECT_EQ(r.initial, InitialSign::positive);
  GridFunction id(linspace(-1, 1, 5), [](double x) { return x; });
  r = sign_changes(id);
  EXPECT_EQ(r.count, 1);
  EXPECT_EQ(r.initial, InitialSign::negative);
  GridFunction zero(linspace(-1, 1, 5), [](double) { return 0.0; });
  EXPECT_EQ(sign_changes(zero).initial, InitialSign::indeterminate);
}

TEST(SignChanges, FindsAlternationsInsideOneCell) {
  GridFunction g({0.0, 1.0}, [](double x) { return std::sin(12.0 * x); });
  // Roots at k*pi/12 for k = 1, 2, 3 lie inside (0, 1).
  EXPECT_EQ(sign_changes(g, 0.0, 8).count, 3);
  // Coarse sampling may miss alternations but never invents them.
  EXPECT_LE(sign_changes(g, 0.0, 2).count, 3);
}

TEST(SignChanges, NegationFlipsInitial) {
  auto f = [](double x) { return std::sin(3 * x) + 0.2; };
  GridFunction g(linspace(-4, 4, 9), f);
  GridFunction m(linspace(-4, 4, 9), [f](double x) { return -f(x); });
  auto a = sign_changes(g), b = sign_changes(m);
  EXPECT_EQ(a.count, b.count);
  EXPECT_EQ(a.initial, InitialSign::positive);
  EXPECT_EQ(b.initial, InitialSign::negative);
}

TEST(SignChanges, JumpCountsAsAlternation) {
  GridFunction g({-1.0, 0.0, 1.0}, [](double x) { return x >= 0.0 ? 1.0 : -1.0; }, {0.0},
                 [](double x) { return x > 0.0 ? 1.0 : -1.0; });
  auto r = sign_changes(g);
  EXPECT_EQ(r.count, 1);
  EXPECT_EQ(r.initial, InitialSign::negative);
}

TEST(IntegrateAbs, MatchesClosedForms) {
  GridFunction g(linspace(-1, 1, 3), [](double x) { return x; });
  EXPECT_NEAR(integrate_abs(g).value, 1.0, 1e-14);
  GridFunction s({0.0, 10.0}, [](double x) { return std::sin(x); });
  EXPECT_NEAR(integrate_abs(s).value, 6.0 + (1.0 - std::cos(10.0 - 3 * kPi)), 1e-11);
  // int 3 x^2 |x| over [-1, 2] = 3/4 + 12.
  GridFunction id(linspace(-1, 2, 4), [](double x) { return x; });
  auto r = integrate_abs(id, {}, [](double x) { return 3.0 * x * x; });
  EXPECT_NEAR(r.value, 0.75 + 12.0, 1e-12);
}
