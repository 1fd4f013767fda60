#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "zm/measures/law_spec.hpp"
#include "zm/measures/signed_measure.hpp"
#include "zm/numerics/grid_function.hpp"
#include "zm/numerics/quadrature.hpp"

namespace zm {

enum class Method { closed_form, cut_criterion, quadrature };

std::string to_string(Method m);
std::string to_string(InitialSign s);

struct MetricValue {
  double value = 0.0;
  double err_est = 0.0;
  Method method = Method::quadrature;
  /// Sign-change count and initial sign backing a cut-criterion value.
  std::optional<SignChangeResult> certificate;
  /// Free-text qualifier, e.g. for heuristic error estimates.
  std::string note = {};
};

/// Integrated distribution functions F_{M,1..r} on a shared grid.
struct ZetaStack {
  int r = 0;
  std::vector<GridFunction> F;  // F[k-1] = F_{M,k}
  /// moment_vanishes[j] is true when mu_j(M) passed the vanishing check.
  std::array<bool, 5> moment_vanishes{};
  /// |F_{M,k}| at the right grid end, which should vanish.
  std::vector<double> endpoint_residual;
};

/// Breakpoints used by the metrics: atoms, density kinks, 0, a uniform base
/// grid of at least 2048 points over the effective support, and a geometric
/// grid for wide supports.
std::vector<double> metric_grid(const SignedMeasure& m);

/// sup_x |F_M(x)|, left limits included. Throws PreconditionError unless mass(M) = 0.
MetricValue kolmogorov(const SignedMeasure& m, const Tolerance& tol = {});

/// Integral of r |x|^(r-1) |F_M(x)|. Throws PreconditionError unless mass(M) = 0.
MetricValue kappa_r(const SignedMeasure& m, double r, const Tolerance& tol = {});

/// -integral of F_M, for mass(M) = 0; equals mu_1(M) when nu_1(M) is finite.
QuadResult lambda_1(const SignedMeasure& m, const Tolerance& tol = {});

/// F_{M,k}(x) in closed form from partial moments: the integral over ]-inf,x]
/// for x <= 0, and minus the integral over ]x,inf[ for x > 0 (the two agree
/// when mu_0..mu_{k-1} vanish). k in 1..5.
double integrated_distribution(const SignedMeasure& m, int k, double x);

/// Throws MomentConditionError naming the first j < r with mu_j(M) != 0,
/// DomainError unless 1 <= r <= 4, PreconditionError if nu_r(M) is infinite.
ZetaStack build_zeta_stack(const SignedMeasure& m, int r, const Tolerance& tol = {});

/// Integral of |F_{M,r}|; r = 1 delegates to kappa_r.
MetricValue zeta_r(const SignedMeasure& m, int r, const Tolerance& tol = {});

/// |mu_3(P~)| / 6 when S^-(F~ - Phi) <= 2 is certified; absent otherwise.
std::optional<MetricValue> zeta3_cut_criterion(const LawSpec& law);

/// nu_r(M) for r in 0..4.
MetricValue nu_r_signed(const SignedMeasure& m, int r, const Tolerance& tol = {});

}  // namespace zm
