#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "zm/convolve/convolve.hpp"
#include "zm/error.hpp"
#include "zm/measures/operations.hpp"
#include "zm/measures/signed_measure.hpp"
#include "zm/metrics/metrics.hpp"
#include "zm/numerics/special_functions.hpp"

using namespace zm;

namespace {

LatticeWeights weights_of(const LawSpec& l) { return LatticeWeights::from_law(l); }

LawSpec random_lattice(std::mt19937& rng, int k) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(k);
  double s = 0;
  for (auto& x : w) s += (x = u(rng));
  for (auto& x : w) x /= s;
  return LawSpec::lattice(1.0, 0.0, -k / 2, w);
}

LawSpec p_eps(double eps) {
  return LawSpec::mixture({{0.5, LawSpec::conditional(-INFINITY, 0.0, LawSpec::normal())},
                           {1.0 - std_normal_cdf(eps), LawSpec::conditional(eps, INFINITY, LawSpec::normal())},
                           {std_normal_cdf(eps) - 0.5, LawSpec::dirac(0.0)}});
}

}  // namespace

TEST(Convolve, DiracsAdd) {
  auto w = convolve_atomic(weights_of(LawSpec::dirac(1.5)), weights_of(LawSpec::dirac(-0.25)));
  ASSERT_EQ(w.weights.size(), 1u);
  EXPECT_DOUBLE_EQ(w.shift, 1.25);
  EXPECT_DOUBLE_EQ(w.weights[0], 1.0);
}

TEST(Convolve, BernoulliSquare) {
  auto b = weights_of(LawSpec::bernoulli(0.5));
  auto w = convolve_atomic(b, b);
  ASSERT_EQ(w.weights.size(), 3u);
  EXPECT_DOUBLE_EQ(w.weights[0], 0.25);
  EXPECT_DOUBLE_EQ(w.weights[1], 0.5);
  EXPECT_DOUBLE_EQ(w.weights[2], 0.25);
  EXPECT_DOUBLE_EQ(w.shift, 0.0);
}

TEST(Convolve, BinomialPower) {
  auto w = power_lattice(weights_of(LawSpec::bernoulli(0.5)), 20);
  ASSERT_EQ(w.weights.size(), 21u);
  double c = 1.0, dev = 0.0;
  for (int k = 0; k <= 20; ++k) {
    dev = std::max(dev, std::fabs(w.weights[k] - c / 1048576.0));
    c = c * (20 - k) / (k + 1);
  }
  EXPECT_LE(dev, 1e-15);
}

TEST(Convolve, SpanMismatch) {
  auto a = weights_of(LawSpec::lattice(0.5, 0, 0, {0.5, 0.5}));
  auto b = weights_of(LawSpec::bernoulli(0.5));
  EXPECT_THROW(convolve_atomic(a, b), DomainError);
}

TEST(Convolve, PowerGuards) {
  auto b = weights_of(LawSpec::bernoulli(0.5));
  EXPECT_THROW(power_lattice(b, 0), DomainError);
  EXPECT_THROW(power_lattice(b, 200000000), DomainError);
  auto one = power_lattice(b, 1);
  EXPECT_EQ(one.weights, b.weights);
}

TEST(Convolve, StandardisedBernoulliPowerSymmetric) {
  auto l = standardised_power(LawSpec::bernoulli(0.5), 4);
  auto atoms = SignedMeasure::of(l).atoms();
  ASSERT_EQ(atoms.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(atoms[i].x, -atoms[4 - i].x, 1e-14);
    EXPECT_NEAR(atoms[i].w, atoms[4 - i].w, 1e-15);
  }
  auto t = moments(l);
  EXPECT_NEAR(t.mean, 0.0, 1e-14);
  EXPECT_NEAR(t.sd, 1.0, 1e-14);
}

TEST(Convolve, RoundedNormalSquareMatchesDoubleSum) {
  const auto law = LawSpec::rounded(1.0, 0.0, LawSpec::normal());
  const auto w = weights_of(law);
  const auto sq = power_lattice(w, 2);
  const auto atoms = SignedMeasure::of(law).atoms();
  for (int z = -5; z < 5; ++z) {
    double s = 0.0;
    for (const auto& a : atoms)
      for (const auto& b : atoms)
        if (std::lround(a.x + b.x) == z) s += a.w * b.w;
    const long idx = std::lround((z - sq.shift) / sq.span);
    ASSERT_GE(idx, 0);
    EXPECT_NEAR(sq.weights[static_cast<std::size_t>(idx)], s, 1e-15);
  }
  double total = sq.mass_tail;
  for (double x : sq.weights) total += x;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_LE(sq.mass_tail, 1e-14);
}

TEST(Convolve, LatticeRoundTrip) {
  const auto l = LawSpec::lattice(0.5, 0.25, -2, {0.1, 0.2, 0.3, 0.4});
  const auto back = weights_of(l).to_law();
  const auto a = SignedMeasure::of(l).atoms(), b = SignedMeasure::of(back).atoms();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i].x, b[i].x, 1e-14);
    EXPECT_NEAR(a[i].w, b[i].w, 1e-15);
  }
  EXPECT_THROW(weights_of(LawSpec::normal()), DomainError);
  EXPECT_THROW(weights_of(LawSpec::atoms({{0.0, 0.5}, {1.0, 0.25}, {std::sqrt(2.0), 0.25}})), DomainError);
}

TEST(Convolve, NormalSquare) {
  const auto n = LawSpec::normal();
  for (double x : {-3.0, -0.7, 0.0, 1.2, 4.0}) EXPECT_NEAR(cdf_convolution_2(n, n, x), std_normal_cdf(x / std::sqrt(2.0)), 1e-15);
  // Same law routed through the general quadrature path.
  const auto m = LawSpec::mixture({{0.5, n}, {0.5, n}});
  for (double x : {-3.0, -0.7, 0.0, 1.2, 4.0}) EXPECT_NEAR(cdf_convolution_2(m, m, x), std_normal_cdf(x / std::sqrt(2.0)), 1e-9);
}

TEST(Convolve, DiracShiftsCdf) {
  const auto q = LawSpec::gamma_power(2.0, 1.0, 1.0);
  const auto fq = SignedMeasure::of(q);
  for (double x : {-1.0, 0.5, 1.7, 3.0, 8.0}) {
    EXPECT_NEAR(cdf_convolution_2(LawSpec::dirac(0.7), q, x), fq.cdf(x - 0.7), 1e-15);
    EXPECT_NEAR(cdf_convolution_2(q, LawSpec::dirac(0.7), x), fq.cdf(x - 0.7), 1e-15);
  }
}

TEST(Convolve, AtomicCdfLeftLimits) {
  const auto b = LawSpec::bernoulli(0.5);
  EXPECT_DOUBLE_EQ(cdf_convolution_2(b, b, 1.0), 0.75);
  EXPECT_DOUBLE_EQ(cdf_convolution_2_left(b, b, 1.0), 0.25);
}

TEST(Convolve, WinsorisedTailAsymptotics) {
  const double t = 3.0;
  const auto p = LawSpec::winsorised_normal_left(t);
  const double phi = std::exp(-0.5 * t * t) / std::sqrt(2.0 * kPi);
  const double approx = std_normal_cdf(-t / std::sqrt(2.0)) - 2.0 / std::sqrt(2.0 * kPi) * phi / (t * t);
  const double v = cdf_convolution_2(p, p, -t);
  EXPECT_NEAR(v, approx, 2.0 * phi / (t * t * t));
}

TEST(Convolve, CltNormalIsZero) {
  EXPECT_NEAR(clt_lhs(LawSpec::normal(2.0, 3.0), 2, CltMode::quadrature_n2).value, 0.0, 1e-10);
}

TEST(Convolve, CltBernoulliAsymptotics) {
  const int n = 400;
  const double v = clt_lhs(LawSpec::bernoulli(0.5), n, CltMode::exact_lattice).value;
  EXPECT_NEAR(std::sqrt(n) * v / (1.0 / std::sqrt(2.0 * kPi)), 1.0, 0.05);
}

TEST(Convolve, CltEsseenExtremal) {
  const double p = (4.0 - std::sqrt(10.0)) / 2.0;
  const auto law = LawSpec::bernoulli(p);
  const double nu3 = absolute_moment(SignedMeasure::of(standardise(law)), 3.0).value;
  const double ce = (3.0 + std::sqrt(10.0)) / (6.0 * std::sqrt(2.0 * kPi));
  const int n = 2000;
  const double v = clt_lhs(law, n, CltMode::exact_lattice).value;
  EXPECT_NEAR(std::sqrt(n) * v / (ce * nu3), 1.0, 0.05);
}

TEST(Convolve, CltExactMatchesQuadratureAtN2) {
  const auto law = LawSpec::atoms({{-1.0, 0.3}, {0.0, 0.3}, {2.0, 0.4}});
  const double a = clt_lhs(law, 2, CltMode::exact_lattice).value;
  const double b = clt_lhs(law, 2, CltMode::quadrature_n2).value;
  EXPECT_NEAR(a, b, 1e-9);
}

TEST(Convolve, CltModeChecks) {
  EXPECT_THROW(clt_lhs(LawSpec::normal(), 3, CltMode::quadrature_n2), PreconditionError);
  EXPECT_THROW(clt_lhs(LawSpec::normal(), 3, CltMode::exact_lattice), PreconditionError);
  EXPECT_THROW(clt_lhs(LawSpec::bernoulli(0.5), 3, CltMode::lattice_approx, 0.1), PreconditionError);
  EXPECT_THROW(clt_lhs(LawSpec::dirac(1.0), 3, CltMode::exact_lattice), DegenerateLawError);
}

TEST(Convolve, CltLatticeApproxIsFlagged) {
  const auto v = clt_lhs(LawSpec::uniform(0, 1), 4, CltMode::lattice_approx, 0.01);
  EXPECT_EQ(v.note, "heuristic, not a certified bound");
  EXPECT_GT(v.err_est, 0.0);
  // The uniform law is close enough to normal at n = 4 for a small distance.
  EXPECT_LT(v.value, 0.02);
}

TEST(Convolve, InequalityTrivialCase) {
  const auto n = LawSpec::normal();
  const auto r = convolution_inequality_check(n, n, n, n);
  EXPECT_NEAR(r.lhs, 0.0, 1e-12);
  EXPECT_NEAR(r.rhs, 0.0, 1e-12);
  EXPECT_THROW(convolution_inequality_check(n, n, LawSpec::bernoulli(0.5), n), DomainError);
}

TEST(Convolve, InequalityNearlySharp) {
  const auto p = p_eps(0.2);
  const auto n = LawSpec::normal();
  const auto r = convolution_inequality_check(p, p, n, n);
  EXPECT_LE(r.lhs, r.rhs + 1e-9);
  EXPECT_GT(r.lhs / r.rhs, 0.8);
  // Direct lower bound at 0 from the ring identity.
  EXPECT_GE(r.lhs, std::fabs(cdf_convolution_2(p, p, 0.0) - 0.5) - 1e-12);
}

TEST(Convolve, InequalityBernoulliSlack) {
  const auto b = standardise(LawSpec::bernoulli(0.5));
  const auto n = LawSpec::normal();
  const auto r = convolution_inequality_check(b, n, n, n);
  // F1 * N has cdf (Phi(x-1)+Phi(x+1))/2.
  double direct = 0.0;
  for (double x = -6; x <= 6; x += 1e-3)
    direct = std::max(direct, std::fabs(0.5 * (std_normal_cdf(x - 1) + std_normal_cdf(x + 1)) -
                                        std_normal_cdf(x / std::sqrt(2.0))));
  EXPECT_NEAR(r.lhs, direct, 1e-6);
  EXPECT_LT(r.lhs, r.rhs * 0.99);
}

TEST(ConvolveProperty, Semiadditivity) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = random_lattice(rng, 4), q = random_lattice(rng, 5);
    const double base = kappa_r(signed_diff(p, q), 1.0).value;
    for (int n = 1; n <= 8; ++n) {
      const auto pn = power_lattice(weights_of(p), n).to_law();
      const auto qn = power_lattice(weights_of(q), n).to_law();
      EXPECT_LE(kappa_r(signed_diff(pn, qn), 1.0).value, n * base * (1 + 1e-9) + 1e-12);
    }
  }
}

TEST(ConvolveProperty, Regularity) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_lattice(rng, 4), q = random_lattice(rng, 4), r = random_lattice(rng, 3);
    const auto pr = convolve_atomic(weights_of(p), weights_of(r)).to_law();
    const auto qr = convolve_atomic(weights_of(q), weights_of(r)).to_law();
    EXPECT_LE(kolmogorov(signed_diff(pr, qr)).value, kolmogorov(signed_diff(p, q)).value + 1e-14);
  }
}

TEST(ConvolveProperty, Smoothing) {
  std::mt19937 rng(3);
  for (double eps : {0.05, 0.2}) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto p = random_lattice(rng, 3), q = random_lattice(rng, 4);
      auto smooth = [eps](const LawSpec& l) {
        std::vector<std::pair<double, LawSpec>> c;
        for (const auto& a : SignedMeasure::of(l).atoms()) c.emplace_back(a.w, LawSpec::normal(a.x, eps));
        return LawSpec::mixture(c);
      };
      const double lhs = kappa_r(signed_diff(p, q), 1.0).value;
      const double rhs = kappa_r(signed_diff(smooth(p), smooth(q)), 1.0).value + 4 * eps / std::sqrt(2 * kPi);
      EXPECT_LE(lhs, rhs + 1e-9);
    }
  }
}

TEST(ConvolveProperty, Zeta3DecaysLikeRootN) {
  for (const auto& p : {LawSpec::bernoulli(0.5), LawSpec::atoms({{0.0, 0.2}, {1.0, 0.5}, {3.0, 0.3}})}) {
    const auto pt = standardise(p);
    const double z = zeta_r(signed_diff(pt, LawSpec::normal()), 3).value;
    for (int n : {2, 4, 9}) {
      const auto pn = standardised_power(p, n);
      EXPECT_LE(zeta_r(signed_diff(pn, LawSpec::normal()), 3).value, z / std::sqrt(n) * (1 + 1e-8));
    }
  }
}

TEST(ConvolveProperty, SquareAgainstZeta1) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_lattice(rng, 2 + trial % 5);
    const double lhs = clt_lhs(p, 2, CltMode::exact_lattice).value;
    const double z1 = kappa_r(signed_diff(standardise(p), LawSpec::normal()), 1.0).value;
    EXPECT_LE(lhs, 4.0 / std::sqrt(2 * kPi) * z1 + 1e-12);
  }
}

TEST(Convolve, SignedSquareKolmogorov) {
  const double s3 = std::sqrt(3.0);
  const auto m = signed_diff(LawSpec::atoms({{-1.0, 0.5}, {1.0, 0.5}}), LawSpec::uniform(-s3, s3));
  EXPECT_NEAR(kolmogorov_convolution(m, m).value, 0.25, 1e-9);
  // (B~ - N) * N has cdf (Phi(x-1) + Phi(x+1))/2 - Phi(x/sqrt 2).
  const auto b = signed_diff(standardise(LawSpec::bernoulli(0.5)), LawSpec::normal());
  double direct = 0.0;
  for (double x = 0; x <= 6; x += 1e-4)
    direct = std::max(direct, std::fabs(0.5 * (std_normal_cdf(x - 1) + std_normal_cdf(x + 1)) - std_normal_cdf(x / std::sqrt(2.0))));
  EXPECT_NEAR(kolmogorov_convolution(b, SignedMeasure::of(LawSpec::normal())).value, direct, 1e-8);
  EXPECT_THROW(kolmogorov_convolution(SignedMeasure::of(LawSpec::normal()), SignedMeasure::of(LawSpec::normal())),
               PreconditionError);
}
