#include "zm/convolve/convolve.hpp"

#include <algorithm>
#include <cmath>

#include "zm/error.hpp"
#include "zm/measures/operations.hpp"
#include "zm/measures/signed_measure.hpp"
#include "zm/numerics/grid_function.hpp"
#include "zm/numerics/special_functions.hpp"

namespace zm {

namespace {

constexpr double kTrim = 2e-16;
constexpr std::size_t kMaxWeights = 100000000;

void trim(LatticeWeights& w) {
  auto& v = w.weights;
  std::size_t first = 0;
  double cut = 0.0;
  while (first + 1 < v.size() && cut + v[first] <= kTrim) cut += v[first++];
  std::size_t last = v.size();
  double cut_right = 0.0;
  while (last > first + 1 && cut_right + v[last - 1] <= kTrim) cut_right += v[--last];
  if (first > 0 || last < v.size()) {
    v = std::vector<double>(v.begin() + static_cast<long>(first), v.begin() + static_cast<long>(last));
    w.shift += w.span * static_cast<double>(first);
    w.mass_tail += cut + cut_right;
  }
}

/// F_{P*Q}(x) or its left limit.
double convolved_cdf(const SignedMeasure& p, const SignedMeasure& q, double x, bool left) {
  const SignedMeasure* a = &p;
  const SignedMeasure* b = &q;
  if (b->has_continuous_part() && !a->has_continuous_part()) std::swap(a, b);
  // Now either b is purely atomic or both have continuous parts.
  auto fa = [a, left](double u) { return left ? a->cdf_left(u) : a->cdf(u); };
  double s = 0.0;
  for (const auto& at : b->atoms()) s += at.w * fa(x - at.x);
  if (!b->has_continuous_part()) return s;
  auto [lo, hi] = b->effective_support(1e-17);
  std::vector<double> bp = b->kinks();
  for (const auto& at : a->atoms()) bp.push_back(x - at.x);
  for (double k : a->kinks()) bp.push_back(x - k);
  std::vector<double> inside;
  for (double v : bp)
    if (v > lo && v < hi) inside.push_back(v);
  std::sort(inside.begin(), inside.end());
  inside.erase(std::unique(inside.begin(), inside.end()), inside.end());
  Tolerance tol;
  tol.abs_tol = 1e-12;
  tol.rel_tol = 0.0;
  // The density part is continuous in x, so the plain cdf suffices here.
  s += integrate([a, b, x](double y) { return a->cdf(x - y) * b->density(y); }, lo, hi, tol, inside).value;
  return s;
}

bool is_normal(const LawSpec& l) { return std::holds_alternative<law::Normal>(l.node()); }

double cdf_conv(const LawSpec& p, const LawSpec& q, double x, bool left) {
  if (is_normal(p) && is_normal(q)) {
    const auto& a = std::get<law::Normal>(p.node());
    const auto& b = std::get<law::Normal>(q.node());
    return std_normal_cdf((x - a.mu - b.mu) / std::hypot(a.sigma, b.sigma));
  }
  return convolved_cdf(SignedMeasure::of(p), SignedMeasure::of(q), x, left);
}

/// sup |F| over [lo, hi] on a uniform grid refined at the jump points.
double grid_sup(double lo, double hi, std::vector<double> jumps, const RealFunction& f, const RealFunction& f_left,
                int cells) {
  std::sort(jumps.begin(), jumps.end());
  jumps.erase(std::unique(jumps.begin(), jumps.end()), jumps.end());
  std::vector<double> bp;
  for (int i = 0; i <= cells; ++i) bp.push_back(lo + (hi - lo) * i / cells);
  for (double j : jumps)
    if (j > lo && j < hi) bp.push_back(j);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  std::vector<double> inside;
  for (double j : jumps)
    if (j > lo && j < hi) inside.push_back(j);
  GridFunction g(bp, f, inside, f_left);
  Tolerance tol;
  tol.abs_tol = 1e-10;
  return sup_abs(g, tol).value;
}

std::vector<double> sums(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() * b.size());
  for (double x : a)
    for (double y : b) out.push_back(x + y);
  return out;
}

std::vector<double> atom_positions(const SignedMeasure& m) {
  std::vector<double> out;
  for (const auto& a : m.atoms()) out.push_back(a.x);
  return out;
}

}  // namespace

LatticeWeights LatticeWeights::from_law(const LawSpec& law) {
  const auto m = SignedMeasure::of(law);
  if (m.has_continuous_part() || m.atoms().empty()) throw DomainError("lattice weights need a purely atomic law");
  const auto& atoms = m.atoms();
  double span = lattice_span(m);
  if (std::isinf(span)) span = 1.0;
  if (!(span > 0.0)) throw DomainError("lattice weights: atoms are not commensurable");
  LatticeWeights out;
  out.shift = atoms.front().x;
  out.span = span;
  const double last = std::round((atoms.back().x - out.shift) / span);
  if (last + 1 > static_cast<double>(kMaxWeights)) throw DomainError("lattice weights: too many lattice points");
  out.weights.assign(static_cast<std::size_t>(last) + 1, 0.0);
  for (const auto& a : atoms) {
    const double i = std::round((a.x - out.shift) / span);
    if (std::fabs(a.x - (out.shift + i * span)) > 1e-9 * std::max(1.0, std::fabs(a.x)))
      throw DomainError("lattice weights: atom off the lattice");
    out.weights[static_cast<std::size_t>(i)] += a.w;
  }
  return out;
}

LawSpec LatticeWeights::to_law() const {
  auto w = weights;
  w.front() += 0.5 * mass_tail;
  w.back() += 0.5 * mass_tail;
  return LawSpec::lattice(span, shift / span, 0, std::move(w));
}

LatticeWeights convolve_atomic(const LatticeWeights& p, const LatticeWeights& q) {
  if (std::fabs(p.span - q.span) > 1e-12 * std::max(p.span, q.span))
    throw DomainError("convolve_atomic: span mismatch");
  if (p.weights.empty() || q.weights.empty()) throw DomainError("convolve_atomic: empty weights");
  const std::size_t n = p.weights.size() + q.weights.size() - 1;
  if (n > kMaxWeights) throw DomainError("convolve_atomic: result exceeds 1e8 weights");
  LatticeWeights out;
  out.shift = p.shift + q.shift;
  out.span = p.span;
  out.mass_tail = p.mass_tail + q.mass_tail;
  out.weights.assign(n, 0.0);
  const auto& a = p.weights.size() >= q.weights.size() ? p.weights : q.weights;
  const auto& b = p.weights.size() >= q.weights.size() ? q.weights : p.weights;
  // Blocks of the shorter operand keep the working set in cache.
  constexpr std::size_t kBlock = 4096;
  for (std::size_t j0 = 0; j0 < b.size(); j0 += kBlock) {
    const std::size_t j1 = std::min(b.size(), j0 + kBlock);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double ai = a[i];
      if (ai == 0.0) continue;
      double* dst = out.weights.data() + i;
      for (std::size_t j = j0; j < j1; ++j) dst[j] += ai * b[j];
    }
  }
  trim(out);
  return out;
}

LatticeWeights power_lattice(const LatticeWeights& p, int n) {
  if (n < 1) throw DomainError("power_lattice: n must be >= 1");
  if (static_cast<double>(p.weights.size() - 1) * n + 1 > static_cast<double>(kMaxWeights))
    throw DomainError("power_lattice: result exceeds 1e8 weights");
  LatticeWeights result;
  bool have = false;
  LatticeWeights base = p;
  while (true) {
    if (n & 1) {
      result = have ? convolve_atomic(result, base) : base;
      have = true;
    }
    n >>= 1;
    if (!n) break;
    base = convolve_atomic(base, base);
  }
  return result;
}

double cdf_convolution_2(const LawSpec& p, const LawSpec& q, double x) { return cdf_conv(p, q, x, false); }

double cdf_convolution_2_left(const LawSpec& p, const LawSpec& q, double x) { return cdf_conv(p, q, x, true); }

MetricValue kolmogorov_convolution(const SignedMeasure& m1, const SignedMeasure& m2) {
  if (std::fabs(m1.mass() * m2.mass()) > 1e-12) throw PreconditionError("kolmogorov_convolution: mass-nonzero");
  if (m1.is_zero() || m2.is_zero()) return {0.0, 0.0, Method::closed_form, std::nullopt};
  auto f = [&](double x, bool left) {
    double s = 0.0;
    for (const auto& a : m1.terms())
      for (const auto& b : m2.terms()) s += a.coefficient * b.coefficient * cdf_conv(a.law, b.law, x, left);
    return s;
  };
  auto [a1, b1] = m1.effective_support(1e-17);
  auto [a2, b2] = m2.effective_support(1e-17);
  std::vector<double> p1 = atom_positions(m1), p2 = atom_positions(m2);
  std::vector<double> k1 = m1.kinks(), k2 = m2.kinks();
  auto jumps = sums(p1, p2);
  std::vector<double> kinks = sums(k1, p2);
  for (double v : sums(p1, k2)) kinks.push_back(v);
  for (double v : sums(k1, k2)) kinks.push_back(v);
  // Kinks only need to be grid points; passing them as jumps is harmless since
  // the left limit agrees there.
  for (double v : kinks) jumps.push_back(v);
  const double v = grid_sup(a1 + a2 - 1.0, b1 + b2 + 1.0, jumps, [&](double x) { return f(x, false); },
                            [&](double x) { return f(x, true); }, 512);
  return {v, 1e-9, Method::quadrature, std::nullopt};
}

LawSpec standardised_power(const LawSpec& law, int n) {
  const auto w = power_lattice(LatticeWeights::from_law(standardise(law)), n);
  const double rn = std::sqrt(static_cast<double>(n));
  LatticeWeights scaled = w;
  scaled.shift = w.shift / rn;
  scaled.span = w.span / rn;
  return scaled.to_law();
}

namespace {

MetricValue clt_exact(const LawSpec& law, int n) {
  LatticeWeights w;
  try {
    w = power_lattice(LatticeWeights::from_law(standardise(law)), n);
  } catch (const DegenerateLawError&) {
    throw;
  } catch (const DomainError& e) {
    throw PreconditionError(std::string("clt_lhs exact_lattice: ") + e.what());
  }
  const double rn = std::sqrt(static_cast<double>(n));
  const std::size_t k = w.weights.size();
  std::vector<double> suffix(k + 1, 0.0);
  for (std::size_t i = k; i-- > 0;) suffix[i] = suffix[i + 1] + w.weights[i];
  double prefix = 0.0, sup = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double x = (w.shift + w.span * static_cast<double>(i)) / rn;
    const double phi = std_normal_cdf(x);
    const double before = x <= 0.0 ? prefix : 1.0 - suffix[i];
    prefix += w.weights[i];
    const double after = x <= 0.0 ? prefix : 1.0 - suffix[i + 1];
    sup = std::max({sup, std::fabs(before - phi), std::fabs(after - phi)});
  }
  return {sup, w.mass_tail + 1e-15 * std::sqrt(static_cast<double>(k)), Method::closed_form, std::nullopt};
}

MetricValue clt_n2(const LawSpec& law) {
  const auto pt = standardise(law);
  const auto m = SignedMeasure::of(pt);
  const double r2 = std::sqrt(2.0);
  auto [lo, hi] = m.effective_support(1e-17);
  lo = std::min(2.0 * lo / r2, -9.0);
  hi = std::max(2.0 * hi / r2, 9.0);
  std::vector<double> bp;
  constexpr int kCells = 512;
  for (int i = 0; i <= kCells; ++i) bp.push_back(lo + (hi - lo) * i / kCells);
  std::vector<double> jumps;
  for (const auto& a : m.atoms())
    for (const auto& b : m.atoms()) jumps.push_back((a.x + b.x) / r2);
  std::sort(jumps.begin(), jumps.end());
  jumps.erase(std::unique(jumps.begin(), jumps.end()), jumps.end());
  bp.insert(bp.end(), jumps.begin(), jumps.end());
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  GridFunction g(
      bp, [&](double x) { return cdf_convolution_2(pt, pt, r2 * x) - std_normal_cdf(x); }, jumps,
      [&](double x) { return cdf_convolution_2_left(pt, pt, r2 * x) - std_normal_cdf(x); });
  Tolerance tol;
  tol.abs_tol = 1e-10;
  const auto s = sup_abs(g, tol);
  return {s.value, 1e-9, Method::quadrature, std::nullopt};
}

}  // namespace

MetricValue clt_lhs(const LawSpec& law, int n, CltMode mode, double eta) {
  if (n < 1) throw DomainError("clt_lhs: n must be >= 1");
  switch (mode) {
    case CltMode::exact_lattice:
      return clt_exact(law, n);
    case CltMode::quadrature_n2:
      if (n != 2) throw PreconditionError("clt_lhs quadrature_n2: mode-inapplicable for n != 2");
      return clt_n2(law);
    case CltMode::lattice_approx: {
      if (!(eta > 0.0)) throw PreconditionError("clt_lhs lattice_approx: eta must be > 0");
      if (!SignedMeasure::of(law).has_continuous_part())
        throw PreconditionError("clt_lhs lattice_approx: mode-inapplicable for a purely atomic law");
      const auto t = moments(law);
      auto v = clt_exact(LawSpec::rounded(eta, 0.0, law), n);
      // Heuristic: zeta_1 rounding gap eta/(4 sigma) per summand, semiadditive over
      // n summands and rescaled by sqrt(n), turned into a Kolmogorov distance by
      // ||.||_K <= (2 pi)^(-1/4) sqrt(kappa_1).
      const double z1 = std::sqrt(static_cast<double>(n)) * eta / (4.0 * t.sd);
      v.err_est += std::pow(2.0 * kPi, -0.25) * std::sqrt(z1);
      v.method = Method::quadrature;
      v.note = "heuristic, not a certified bound";
      return v;
    }
  }
  throw DomainError("clt_lhs: unknown mode");
}

InequalityCheck convolution_inequality_check(const LawSpec& f1, const LawSpec& f2, const LawSpec& h1,
                                             const LawSpec& h2) {
  const auto mh1 = SignedMeasure::of(h1), mh2 = SignedMeasure::of(h2);
  const double l1 = mh1.density_sup(), l2 = mh2.density_sup();
  if (!std::isfinite(l1) || !std::isfinite(l2) || !mh1.has_continuous_part() || !mh2.has_continuous_part() ||
      !mh1.atoms().empty() || !mh2.atoms().empty())
    throw DomainError("convolution_inequality_check: unbounded-density (H1, H2 need bounded densities)");
  const double d1 = kappa_r(signed_diff(f1, h1), 1.0).value;
  const double d2 = kappa_r(signed_diff(f2, h2), 1.0).value;
  InequalityCheck out;
  out.rhs = std::pow(std::sqrt(l2 * d1) + std::sqrt(l1 * d2), 2);

  const auto m1 = SignedMeasure::of(f1), m2 = SignedMeasure::of(f2);
  auto [a1, b1] = m1.effective_support(1e-17);
  auto [a2, b2] = m2.effective_support(1e-17);
  auto [c1, e1] = mh1.effective_support(1e-17);
  auto [c2, e2] = mh2.effective_support(1e-17);
  const double lo = std::min(a1 + a2, c1 + c2) - 1.0, hi = std::max(b1 + b2, e1 + e2) + 1.0;
  std::vector<double> bp;
  constexpr int kCells = 256;
  for (int i = 0; i <= kCells; ++i) bp.push_back(lo + (hi - lo) * i / kCells);
  std::vector<double> jumps;
  for (const auto& a : m1.atoms())
    for (const auto& b : m2.atoms()) jumps.push_back(a.x + b.x);
  std::sort(jumps.begin(), jumps.end());
  jumps.erase(std::unique(jumps.begin(), jumps.end()), jumps.end());
  bp.insert(bp.end(), jumps.begin(), jumps.end());
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  GridFunction g(
      bp, [&](double x) { return cdf_convolution_2(f1, f2, x) - cdf_convolution_2(h1, h2, x); }, jumps,
      [&](double x) { return cdf_convolution_2_left(f1, f2, x) - cdf_convolution_2(h1, h2, x); });
  Tolerance tol;
  tol.abs_tol = 1e-10;
  out.lhs = sup_abs(g, tol).value;
  return out;
}

}  // namespace zm
