#include "zm/measures/operations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zm/error.hpp"
#include "zm/numerics/grid_function.hpp"

namespace zm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

bool MomentTable::finite_mu(int k) const { return std::isfinite(mu.at(k)); }
bool MomentTable::finite_nu(int r) const { return std::isfinite(nu.at(r)); }

QuadResult absolute_moment(const SignedMeasure& m, double r, const Tolerance& tol) {
  if (!(r >= 0.0)) throw DomainError("absolute_moment: r must be >= 0");
  double atoms = 0.0;
  for (const auto& a : m.atoms()) atoms += std::fabs(a.w) * (r == 0.0 ? 1.0 : std::pow(std::fabs(a.x), r));
  if (!m.has_continuous_part()) return {atoms, 0.0};

  const int k = static_cast<int>(r);
  const bool integer = r == k && k <= 4;
  // Closed form if the density is a positive or negative combination of parts,
  // detected through the sign of the summed density agreeing with every term.
  bool same_sign = true;
  double sign = 0.0;
  for (const auto& t : m.terms()) {
    const double s = t.coefficient > 0 ? 1.0 : (t.coefficient < 0 ? -1.0 : 0.0);
    if (s == 0.0) continue;
    if (sign == 0.0) sign = s;
    if (s != sign) same_sign = false;
  }
  if (integer && same_sign) {
    // Atoms were removed from the total above; subtract them from the moments.
    auto cont = [&m](int kk, bool upper_side) {
      double atom_part = 0.0;
      for (const auto& a : m.atoms())
        if (upper_side ? a.x > 0.0 : a.x <= 0.0) atom_part += a.w * std::pow(a.x, kk);
      return upper_side ? m.upper_moment(kk, 0.0) - atom_part : m.lower_moment(kk, 0.0) - atom_part;
    };
    double v = cont(k, true) + (k % 2 ? -1.0 : 1.0) * cont(k, false);
    if (std::isnan(v)) v = kInf;
    return {atoms + std::fabs(v), 0.0};
  }

  auto [lo, hi] = m.effective_support(1e-18);
  std::vector<double> bp = m.kinks();
  constexpr int kBase = 1024;
  for (int i = 0; i <= kBase; ++i) bp.push_back(lo + (hi - lo) * i / kBase);
  bp.push_back(0.0);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  bp.erase(std::remove_if(bp.begin(), bp.end(), [lo = bp.front(), hi = bp.back()](double x) {
             return !std::isfinite(x) || x < lo || x > hi;
           }),
           bp.end());
  GridFunction g(bp, [&m](double x) { return m.density(x); });
  RealFunction w;
  if (r != 0.0) w = [r](double x) { return std::pow(std::fabs(x), r); };
  auto q = integrate_abs(g, tol, w);
  return {atoms + q.value, q.err_est};
}

MomentTable moments(const LawSpec& law) {
  const auto m = SignedMeasure::of(law);
  MomentTable t;
  for (int r = 0; r <= 4; ++r) t.nu[r] = absolute_moment(m, r).value;
  for (int k = 0; k <= 4; ++k) t.mu[k] = t.finite_nu(k) ? m.moment(k) : std::numeric_limits<double>::quiet_NaN();
  t.mean = t.mu[1];
  if (t.finite_nu(2)) {
    t.sd = std::sqrt(std::max(0.0, m.moment(2, t.mean)));
  } else {
    t.sd = kInf;
  }
  if (t.finite_nu(3) && t.sd > 0.0)
    t.skewness = m.moment(3, t.mean) / (t.sd * t.sd * t.sd);
  else
    t.skewness = std::numeric_limits<double>::quiet_NaN();
  return t;
}

LawSpec affine_law(double c, double d, const LawSpec& law) {
  if (c == 0.0) return LawSpec::dirac(d);
  if (c == 1.0 && d == 0.0) return law;
  auto sorted_atoms = [](std::vector<std::pair<double, double>> pts) {
    std::sort(pts.begin(), pts.end());
    return LawSpec::atoms(std::move(pts));
  };
  return std::visit(
      [&](const auto& n) -> LawSpec {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, law::Normal>) {
          return LawSpec::normal(c * n.mu + d, std::fabs(c) * n.sigma);
        } else if constexpr (std::is_same_v<T, law::Dirac>) {
          return LawSpec::dirac(c * n.a + d);
        } else if constexpr (std::is_same_v<T, law::Atoms>) {
          std::vector<std::pair<double, double>> pts;
          for (const auto& [x, w] : n.points) pts.emplace_back(c * x + d, w);
          return sorted_atoms(std::move(pts));
        } else if constexpr (std::is_same_v<T, law::Bernoulli>) {
          std::vector<std::pair<double, double>> pts;
          if (n.p < 1.0) pts.emplace_back(d, 1.0 - n.p);
          if (n.p > 0.0) pts.emplace_back(c + d, n.p);
          return sorted_atoms(std::move(pts));
        } else if constexpr (std::is_same_v<T, law::Uniform>) {
          const double u = c * n.a + d, v = c * n.b + d;
          return LawSpec::uniform(std::min(u, v), std::max(u, v));
        } else if constexpr (std::is_same_v<T, law::Affine>) {
          return affine_law(c * n.c, c * n.d + d, *n.base);
        } else {
          return LawSpec::affine(c, d, law);
        }
      },
      law.node());
}

LawSpec standardise(const LawSpec& law) {
  if (std::holds_alternative<law::Normal>(law.node())) return LawSpec::normal(0.0, 1.0);
  const auto t = moments(law);
  if (!(t.sd > 0.0) || !std::isfinite(t.sd))
    throw DegenerateLawError("standardise: degenerate law (standard deviation " + std::to_string(t.sd) + ")");
  return affine_law(1.0 / t.sd, -t.mean / t.sd, law);
}

LawSpec centre(const LawSpec& law) {
  const double mean = SignedMeasure::of(law).moment(1);
  if (!std::isfinite(mean)) throw DomainError("centre: mean is not finite");
  return affine_law(1.0, -mean, law);
}

LawSpec reflect(const LawSpec& law) { return affine_law(-1.0, 0.0, law); }

SignedMeasure signed_diff(const LawSpec& p, const LawSpec& q) { return SignedMeasure({Term{1.0, p}, Term{-1.0, q}}); }

Variation variation_density_and_atoms(const SignedMeasure& m) {
  return {m.atoms(), [m](double x) { return m.density(x); }};
}

double lattice_span(const SignedMeasure& m) {
  if (m.has_continuous_part()) return 0.0;
  const auto& atoms = m.atoms();
  if (atoms.empty()) return 0.0;
  if (atoms.size() == 1) return kInf;
  double scale = 1.0;
  for (const auto& a : atoms) scale = std::max(scale, std::fabs(a.x));
  const double tol = 1e-12 * scale;
  double h = 0.0;
  for (std::size_t i = 1; i < atoms.size(); ++i) {
    double a = atoms[i].x - atoms[0].x, b = h;
    // Euclid on reals: remainders within tol of 0 or of the divisor count as zero.
    if (b == 0.0) {
      h = a;
      continue;
    }
    if (a < b) std::swap(a, b);
    while (b > tol) {
      double r = std::fmod(a, b);
      if (b - r <= tol) r = 0.0;
      a = b;
      b = r;
    }
    h = a;
    if (h <= tol) return 0.0;
  }
  // A span finer than 1e-9 of the support width is treated as incommensurable.
  if (h < 1e-9 * (atoms.back().x - atoms.front().x)) return 0.0;
  return h;
}

double lattice_span(const LawSpec& law) { return lattice_span(SignedMeasure::of(law)); }

}  // namespace zm
