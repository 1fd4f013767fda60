#include "zm/measures/signed_measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "zm/error.hpp"
#include "zm/numerics/quadrature.hpp"
#include "zm/numerics/special_functions.hpp"

namespace zm {

namespace detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxMoment = 4;

double binom(int n, int k) {
  static const double table[5][5] = {
      {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
  return table[n][k];
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

enum class BaseKind { normal, uniform01, gamma_power, subbotin, histogram };

/// Piecewise-constant density on [edges.front(), edges.back()].
struct Cells {
  std::vector<double> edges;
  std::vector<double> mass;
  std::array<std::vector<double>, kMaxMoment + 1> prefix;

  void build() {
    for (int k = 0; k <= kMaxMoment; ++k) {
      auto& p = prefix[k];
      p.assign(mass.size() + 1, 0.0);
      for (std::size_t j = 0; j < mass.size(); ++j) p[j + 1] = p[j] + cell_moment(k, j, edges[j + 1]);
    }
  }
  /// Integral of t^k over [edges[j], y] within cell j.
  double cell_moment(int k, std::size_t j, double y) const {
    const double a = edges[j], b = edges[j + 1];
    const double h = mass[j] / (b - a);
    return h * (ipow(y, k + 1) - ipow(a, k + 1)) / (k + 1);
  }
  double lower(int k, double y) const {
    if (y <= edges.front()) return 0.0;
    if (y >= edges.back()) return prefix[k].back();
    const std::size_t j = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), y) - edges.begin()) - 1;
    return prefix[k][j] + cell_moment(k, j, y);
  }
  double pdf(double y) const {
    if (y < edges.front() || y >= edges.back()) return 0.0;
    const std::size_t j = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), y) - edges.begin()) - 1;
    return mass[j] / (edges[j + 1] - edges[j]);
  }
};

struct Part {
  BaseKind kind = BaseKind::normal;
  double a = 0.0;  // gamma_power: shape alpha; subbotin: beta
  double b = 0.0;  // gamma_power: beta
  std::shared_ptr<const Cells> cells;
  double c = 1.0, d = 0.0;  // x = c y + d
  double ylo = -kInf, yhi = kInf;
  double weight = 1.0;

  // ----- base law in y coordinates, unrestricted, unit mass -----

  double pdf_y(double y) const {
    switch (kind) {
      case BaseKind::normal:
        return std_normal_pdf(y);
      case BaseKind::uniform01:
        return (y >= 0.0 && y <= 1.0) ? 1.0 : 0.0;
      case BaseKind::gamma_power: {
        if (y <= 0.0) return 0.0;
        const double al = a, be = b;
        return std::exp(std::log(std::fabs(be)) - std::lgamma(al) + (al * be - 1.0) * std::log(y) - std::pow(y, be));
      }
      case BaseKind::subbotin:
        return a / (2.0 * std::tgamma(1.0 / a)) * std::exp(-std::pow(std::fabs(y), a));
      case BaseKind::histogram:
        return cells->pdf(y);
    }
    return 0.0;
  }

  /// Point separating the lower-tail and upper-tail evaluation regimes.
  double split() const {
    switch (kind) {
      case BaseKind::normal:
      case BaseKind::subbotin:
        return 0.0;
      case BaseKind::uniform01:
        return 0.5;
      case BaseKind::gamma_power:
        return std::pow(a, 1.0 / b);
      case BaseKind::histogram:
        return kInf;
    }
    return 0.0;
  }

  double gamma_factor(int k) const {
    const double s = a + k / b;
    if (s <= 0.0) return kInf;
    return std::exp(std::lgamma(s) - std::lgamma(a));
  }

  double subbotin_factor(int k) const { return std::exp(std::lgamma((k + 1) / a) - std::lgamma(1.0 / a)) / 2.0; }

  double full(int k) const {
    switch (kind) {
      case BaseKind::normal:
        return k % 2 ? 0.0 : (k == 0 ? 1.0 : (k == 2 ? 1.0 : 3.0));
      case BaseKind::uniform01:
        return 1.0 / (k + 1);
      case BaseKind::gamma_power:
        return gamma_factor(k);
      case BaseKind::subbotin:
        return k % 2 ? 0.0 : 2.0 * subbotin_factor(k);
      case BaseKind::histogram:
        return cells->prefix[k].back();
    }
    return 0.0;
  }

  /// Integral of t^k over ]-inf, y].
  double lower_y(int k, double y) const {
    if (y == -kInf) return 0.0;
    switch (kind) {
      case BaseKind::normal: {
        if (y == kInf) return full(k);
        const double phi = std_normal_pdf(y);
        double l0 = std_normal_cdf(y), l1 = -phi;
        if (k == 0) return l0;
        if (k == 1) return l1;
        double prev2 = l0, prev1 = l1;
        for (int m = 2; m <= k; ++m) {
          const double cur = -ipow(y, m - 1) * phi + (m - 1) * prev2;
          prev2 = prev1;
          prev1 = cur;
        }
        return prev1;
      }
      case BaseKind::uniform01: {
        const double t = std::clamp(y, 0.0, 1.0);
        return ipow(t, k + 1) / (k + 1);
      }
      case BaseKind::gamma_power: {
        if (y <= 0.0) return 0.0;
        if (y == kInf) return full(k);
        const double s = a + k / b;
        const double z = std::pow(y, b);
        if (s > 0.0) {
          const double g = gamma_factor(k);
          return g * (b > 0.0 ? reg_incomplete_gamma(s, z) : reg_incomplete_gamma_upper(s, z));
        }
        // Only reachable for beta < 0: finite partial moment of a divergent full moment.
        Tolerance tol;
        tol.abs_tol = 1e-14;
        return integrate([this, k](double t) { return ipow(t, k) * pdf_y(t); }, 0.0, y, tol).value;
      }
      case BaseKind::subbotin: {
        if (y == kInf) return full(k);
        if (y >= 0.0) return full(k) - upper_y(k, y);
        const double v = subbotin_factor(k) * reg_incomplete_gamma_upper((k + 1) / a, std::pow(-y, a));
        return k % 2 ? -v : v;
      }
      case BaseKind::histogram:
        return cells->lower(k, y);
    }
    return 0.0;
  }

  /// Integral of t^k over ]y, inf[.
  double upper_y(int k, double y) const {
    if (y == kInf) return 0.0;
    switch (kind) {
      case BaseKind::normal: {
        const double v = lower_y(k, -y);
        return k % 2 ? -v : v;
      }
      case BaseKind::uniform01: {
        const double t = std::clamp(y, 0.0, 1.0);
        return (1.0 - ipow(t, k + 1)) / (k + 1);
      }
      case BaseKind::gamma_power: {
        if (y <= 0.0) return full(k);
        const double s = a + k / b;
        if (s <= 0.0) return kInf;
        const double z = std::pow(y, b);
        const double g = gamma_factor(k);
        return g * (b > 0.0 ? reg_incomplete_gamma_upper(s, z) : reg_incomplete_gamma(s, z));
      }
      case BaseKind::subbotin: {
        if (y < 0.0) return full(k) - lower_y(k, y);
        return subbotin_factor(k) * reg_incomplete_gamma_upper((k + 1) / a, std::pow(y, a));
      }
      case BaseKind::histogram:
        return full(k) - cells->lower(k, y);
    }
    return 0.0;
  }

  /// Integral of t^k over ]lo, hi] intersected with the restriction.
  double interval_y(int k, double lo, double hi) const {
    lo = std::max(lo, ylo);
    hi = std::min(hi, yhi);
    if (!(lo < hi)) return 0.0;
    const double m = split();
    if (hi <= m) return lower_y(k, hi) - lower_y(k, lo);
    if (lo >= m) return upper_y(k, lo) - upper_y(k, hi);
    return (lower_y(k, m) - lower_y(k, lo)) + (upper_y(k, m) - upper_y(k, hi));
  }

  // ----- x coordinates, weighted -----

  /// Integral of (x - shift)^k over the x-interval ]xa, xb].
  double interval_x(int k, double xa, double xb, double shift = 0.0) const {
    double ya, yb;
    if (c > 0.0) {
      ya = (xa - d) / c;
      yb = (xb - d) / c;
    } else {
      ya = (xb - d) / c;
      yb = (xa - d) / c;
    }
    const double dd = d - shift;
    double s = 0.0;
    for (int i = 0; i <= k; ++i) {
      const double coef = binom(k, i) * ipow(c, i) * ipow(dd, k - i);
      if (coef == 0.0) continue;
      s += coef * interval_y(i, ya, yb);
    }
    return weight * s;
  }

  double pdf_x(double x) const {
    const double y = (x - d) / c;
    if (!(y > ylo && y < yhi)) return 0.0;
    return weight * pdf_y(y) / std::fabs(c);
  }

  double sup_pdf_y() const {
    switch (kind) {
      case BaseKind::normal:
        return std_normal_pdf(0.0);
      case BaseKind::uniform01:
        return 1.0;
      case BaseKind::subbotin:
        return a / (2.0 * std::tgamma(1.0 / a));
      case BaseKind::gamma_power: {
        // Mode where y^b = (a b - 1) / b; the density is unbounded at 0 if a b < 1 and b > 0.
        if (b > 0.0 && a * b < 1.0) return kInf;
        if (b > 0.0 && a * b == 1.0) return b / std::tgamma(a);
        return pdf_y(std::pow((a * b - 1.0) / b, 1.0 / b));
      }
      case BaseKind::histogram: {
        double m = 0.0;
        for (std::size_t j = 0; j < cells->mass.size(); ++j)
          m = std::max(m, std::fabs(cells->mass[j]) / (cells->edges[j + 1] - cells->edges[j]));
        return m;
      }
    }
    return kInf;
  }

  /// Natural support endpoints and interior non-smooth points in y.
  std::vector<double> kinks_y() const {
    std::vector<double> v;
    switch (kind) {
      case BaseKind::normal:
        break;
      case BaseKind::uniform01:
        v = {0.0, 1.0};
        break;
      case BaseKind::gamma_power:
      case BaseKind::subbotin:
        v = {0.0};
        break;
      case BaseKind::histogram:
        v = cells->edges;
        break;
    }
    if (std::isfinite(ylo)) v.push_back(ylo);
    if (std::isfinite(yhi)) v.push_back(yhi);
    std::vector<double> out;
    for (double y : v)
      if (y >= ylo && y <= yhi) out.push_back(y);
    return out;
  }

  /// y-interval outside of which the restricted base carries mass <= eps.
  std::pair<double, double> support_y(double eps) const {
    auto lower_mass = [this](double y) { return interval_y(0, -kInf, y); };
    auto upper_mass = [this](double y) { return interval_y(0, y, kInf); };
    double lo = ylo, hi = yhi;
    if (kind == BaseKind::uniform01) {
      lo = std::max(lo, 0.0);
      hi = std::min(hi, 1.0);
    } else if (kind == BaseKind::histogram) {
      lo = std::max(lo, cells->edges.front());
      hi = std::min(hi, cells->edges.back());
    } else if (kind == BaseKind::gamma_power) {
      lo = std::max(lo, 0.0);
    }
    if (!std::isfinite(lo)) {
      double t = std::min(-1.0, std::isfinite(hi) ? hi - 1.0 : -1.0);
      while (lower_mass(t) > eps && t > -1e300) t *= 2.0;
      double a = t, b = std::isfinite(hi) ? std::min(hi, t / 2.0) : t / 2.0;
      if (b > a && lower_mass(b) <= eps) a = b;
      for (int it = 0; it < 60 && b > a; ++it) {
        const double m = 0.5 * (a + b);
        (lower_mass(m) > eps ? b : a) = m;
      }
      lo = a;
    }
    if (!std::isfinite(hi)) {
      double t = std::max(1.0, lo + 1.0);
      while (upper_mass(t) > eps && t < 1e300) t *= 2.0;
      double a = std::max(lo, t / 2.0), b = t;
      for (int it = 0; it < 60 && b > a; ++it) {
        const double m = 0.5 * (a + b);
        (upper_mass(m) > eps ? a : b) = m;
      }
      hi = b;
    }
    return {lo, hi};
  }

  bool same_shape(const Part& o) const {
    auto close = [](double u, double v) {
      if (u == v) return true;
      if (!std::isfinite(u) || !std::isfinite(v)) return false;
      return std::fabs(u - v) <= 1e-12 * std::max(std::fabs(u), std::fabs(v));
    };
    if (kind != o.kind || cells != o.cells) return false;
    return close(a, o.a) && close(b, o.b) && close(c, o.c) && close(d, o.d) && close(ylo, o.ylo) &&
           close(yhi, o.yhi);
  }
};

struct Compiled {
  std::vector<Atom> atoms;
  std::array<std::vector<double>, kMaxMoment + 1> prefix;
  std::array<std::vector<double>, kMaxMoment + 1> suffix;
  std::vector<Part> parts;

  void scale(double f) {
    for (auto& a : atoms) a.w *= f;
    for (auto& p : parts) p.weight *= f;
  }

  void append(const Compiled& o, double f) {
    for (const auto& a : o.atoms) atoms.push_back({a.x, a.w * f});
    for (auto p : o.parts) {
      p.weight *= f;
      parts.push_back(std::move(p));
    }
  }

  /// Sorts and merges atoms, merges identical parts, drops cancellations,
  /// and builds the prefix sums.
  void finalize() {
    std::sort(atoms.begin(), atoms.end(), [](const Atom& u, const Atom& v) { return u.x < v.x; });
    std::vector<Atom> merged;
    double scale = 0.0;
    auto flush = [&]() {
      if (!merged.empty() && (merged.back().w == 0.0 || std::fabs(merged.back().w) <= 1e-14 * scale)) merged.pop_back();
    };
    for (const auto& a : atoms) {
      if (!merged.empty() && std::fabs(a.x - merged.back().x) <= 1e-12 * std::max(1.0, std::fabs(a.x))) {
        merged.back().w += a.w;
        scale = std::max(scale, std::fabs(a.w));
        continue;
      }
      flush();
      merged.push_back(a);
      scale = std::fabs(a.w);
    }
    flush();
    atoms = std::move(merged);

    std::vector<Part> kept;
    std::vector<double> scales;
    for (const auto& p : parts) {
      bool done = false;
      for (std::size_t i = 0; i < kept.size(); ++i) {
        if (kept[i].same_shape(p)) {
          kept[i].weight += p.weight;
          scales[i] = std::max(scales[i], std::fabs(p.weight));
          done = true;
          break;
        }
      }
      if (!done) {
        kept.push_back(p);
        scales.push_back(std::fabs(p.weight));
      }
    }
    parts.clear();
    for (std::size_t i = 0; i < kept.size(); ++i)
      if (kept[i].weight != 0.0 && std::fabs(kept[i].weight) > 1e-14 * scales[i]) parts.push_back(kept[i]);

    const std::size_t n = atoms.size();
    for (int k = 0; k <= kMaxMoment; ++k) {
      prefix[k].assign(n + 1, 0.0);
      suffix[k].assign(n + 1, 0.0);
      for (std::size_t j = 0; j < n; ++j) prefix[k][j + 1] = prefix[k][j] + atoms[j].w * ipow(atoms[j].x, k);
      for (std::size_t j = n; j-- > 0;) suffix[k][j] = suffix[k][j + 1] + atoms[j].w * ipow(atoms[j].x, k);
    }
  }

  double atoms_lower(int k, double x, bool closed) const {
    auto it = closed ? std::upper_bound(atoms.begin(), atoms.end(), x, [](double v, const Atom& a) { return v < a.x; })
                     : std::lower_bound(atoms.begin(), atoms.end(), x, [](const Atom& a, double v) { return a.x < v; });
    return prefix[k][static_cast<std::size_t>(it - atoms.begin())];
  }

  double atoms_upper(int k, double x, bool closed) const {
    auto it = closed ? std::upper_bound(atoms.begin(), atoms.end(), x, [](double v, const Atom& a) { return v < a.x; })
                     : std::lower_bound(atoms.begin(), atoms.end(), x, [](const Atom& a, double v) { return a.x < v; });
    return suffix[k][static_cast<std::size_t>(it - atoms.begin())];
  }

  double lower(int k, double x, bool closed) const {
    double s = atoms_lower(k, x, closed);
    for (const auto& p : parts) s += p.interval_x(k, -kInf, x);
    return s;
  }

  double upper(int k, double x, bool closed) const {
    double s = atoms_upper(k, x, closed);
    for (const auto& p : parts) s += p.interval_x(k, x, kInf);
    return s;
  }

  double total_mass() const {
    double s = prefix[0].empty() ? 0.0 : prefix[0].back();
    for (const auto& p : parts) s += p.interval_x(0, -kInf, kInf);
    return s;
  }

  std::pair<double, double> support(double eps) const {
    double lo = kInf, hi = -kInf;
    if (!atoms.empty()) {
      lo = atoms.front().x;
      hi = atoms.back().x;
    }
    for (const auto& p : parts) {
      const double w = std::fabs(p.weight);
      if (w == 0.0) continue;
      auto [ya, yb] = p.support_y(eps / w);
      double xa = p.c * ya + p.d, xb = p.c * yb + p.d;
      if (xa > xb) std::swap(xa, xb);
      lo = std::min(lo, xa);
      hi = std::max(hi, xb);
    }
    if (lo > hi) lo = hi = 0.0;
    return {lo, hi};
  }
};

namespace {

Compiled compile(const LawSpec& spec);

Compiled single_part(Part p) {
  Compiled c;
  c.parts.push_back(std::move(p));
  return c;
}

Compiled affine_image(Compiled base, double c, double d) {
  Compiled out;
  if (c == 0.0) {
    out.atoms.push_back({d, base.total_mass()});
    out.finalize();
    return out;
  }
  for (const auto& a : base.atoms) out.atoms.push_back({c * a.x + d, a.w});
  for (auto p : base.parts) {
    p.d = c * p.d + d;
    p.c = c * p.c;
    out.parts.push_back(std::move(p));
  }
  out.finalize();
  return out;
}

Compiled restrict_to(const Compiled& base, double lo, double hi) {
  Compiled out;
  for (const auto& a : base.atoms)
    if (a.x > lo && a.x <= hi) out.atoms.push_back(a);
  for (auto p : base.parts) {
    double ya = (lo - p.d) / p.c, yb = (hi - p.d) / p.c;
    if (ya > yb) std::swap(ya, yb);
    p.ylo = std::max(p.ylo, ya);
    p.yhi = std::min(p.yhi, yb);
    if (p.ylo < p.yhi) out.parts.push_back(std::move(p));
  }
  out.finalize();
  return out;
}

/// G(x) = (F(x) + F(x-)) / 2 and its upper-tail twin T(x) = (M(]x,inf[) + M([x,inf[)) / 2.
struct HalfSplit {
  const Compiled& m;
  double lower(double x) const { return 0.5 * (m.lower(0, x, true) + m.lower(0, x, false)); }
  double upper(double x) const { return 0.5 * (m.upper(0, x, true) + m.upper(0, x, false)); }
};

struct CellMasses {
  long first = 0;
  std::vector<double> p;
};

CellMasses cell_masses(const Compiled& base, double eta, double alpha) {
  auto [lo, hi] = base.support(1e-17);
  const double jlo_d = std::floor(lo / eta - alpha) - 1.0;
  const double jhi_d = std::ceil(hi / eta - alpha) + 1.0;
  if (jhi_d - jlo_d > 5e7) throw DomainError("rounding: index window exceeds 5e7 cells");
  const long jlo = static_cast<long>(jlo_d), jhi = static_cast<long>(jhi_d);
  HalfSplit g{base};
  CellMasses out;
  out.first = jlo;
  const std::size_t n = static_cast<std::size_t>(jhi - jlo + 1);
  std::vector<double> edge(n + 1);
  for (std::size_t i = 0; i <= n; ++i) edge[i] = (alpha + static_cast<double>(jlo + static_cast<long>(i)) - 0.5) * eta;
  std::vector<double> lower(n + 1), upper(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    if (edge[i] <= 0.0) lower[i] = g.lower(edge[i]);
    if (edge[i] >= 0.0) upper[i] = g.upper(edge[i]);
  }
  out.p.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (edge[i] >= 0.0)
      out.p[i] = upper[i] - upper[i + 1];
    else if (edge[i + 1] <= 0.0)
      out.p[i] = lower[i + 1] - lower[i];
    else
      out.p[i] = (g.lower(0.0) - lower[i]) + (g.upper(0.0) - upper[i + 1]);
  }
  // Fold the negligible outer masses into the extreme cells.
  out.p.front() += edge.front() < 0.0 ? lower.front() : base.total_mass() - g.upper(edge.front());
  out.p.back() += edge.back() >= 0.0 ? upper.back() : base.total_mass() - g.lower(edge.back());
  return out;
}

Compiled compile_node(const law::Node& node) {
  return std::visit(
      [](const auto& n) -> Compiled {
        using T = std::decay_t<decltype(n)>;
        Compiled out;
        if constexpr (std::is_same_v<T, law::Dirac>) {
          out.atoms.push_back({n.a, 1.0});
        } else if constexpr (std::is_same_v<T, law::Atoms>) {
          for (const auto& [x, w] : n.points)
            if (w != 0.0) out.atoms.push_back({x, w});
        } else if constexpr (std::is_same_v<T, law::Lattice>) {
          for (std::size_t i = 0; i < n.weights.size(); ++i)
            if (n.weights[i] != 0.0)
              out.atoms.push_back({(n.alpha + static_cast<double>(n.first_index + static_cast<long>(i))) * n.eta,
                                   n.weights[i]});
        } else if constexpr (std::is_same_v<T, law::Bernoulli>) {
          if (n.p < 1.0) out.atoms.push_back({0.0, 1.0 - n.p});
          if (n.p > 0.0) out.atoms.push_back({1.0, n.p});
        } else if constexpr (std::is_same_v<T, law::Normal>) {
          Part p;
          p.c = n.sigma;
          p.d = n.mu;
          out = single_part(p);
        } else if constexpr (std::is_same_v<T, law::Uniform>) {
          Part p;
          p.kind = BaseKind::uniform01;
          p.c = n.b - n.a;
          p.d = n.a;
          out = single_part(p);
        } else if constexpr (std::is_same_v<T, law::TruncatedNormalLeft>) {
          Part p;
          p.ylo = -n.t;
          p.weight = 1.0 / std_normal_cdf(n.t);
          out = single_part(p);
        } else if constexpr (std::is_same_v<T, law::WinsorisedNormalLeft>) {
          Part p;
          p.ylo = -n.t;
          out = single_part(p);
          out.atoms.push_back({-n.t, std_normal_cdf(-n.t)});
        } else if constexpr (std::is_same_v<T, law::GammaPower>) {
          Part p;
          p.kind = BaseKind::gamma_power;
          p.a = n.alpha;
          p.b = n.beta;
          p.c = std::pow(n.lambda, -1.0 / n.beta);
          out = single_part(p);
        } else if constexpr (std::is_same_v<T, law::Subbotin>) {
          Part p;
          if (std::isinf(n.beta)) {
            p.kind = BaseKind::uniform01;
            p.c = 2.0 * n.alpha;
            p.d = -n.alpha;
          } else {
            p.kind = BaseKind::subbotin;
            p.a = n.beta;
            p.c = n.alpha;
          }
          out = single_part(p);
        } else if constexpr (std::is_same_v<T, law::Mixture>) {
          for (const auto& [w, law] : n.components)
            if (w != 0.0) out.append(compile(law), w);
        } else if constexpr (std::is_same_v<T, law::Affine>) {
          return affine_image(compile(*n.base), n.c, n.d);
        } else if constexpr (std::is_same_v<T, law::Rounded>) {
          const auto cm = cell_masses(compile(*n.base), n.eta, n.alpha);
          for (std::size_t i = 0; i < cm.p.size(); ++i)
            if (cm.p[i] != 0.0)
              out.atoms.push_back({(n.alpha + static_cast<double>(cm.first + static_cast<long>(i))) * n.eta, cm.p[i]});
        } else if constexpr (std::is_same_v<T, law::Histogram>) {
          const auto cm = cell_masses(compile(*n.base), n.eta, n.alpha);
          auto cells = std::make_shared<Cells>();
          cells->mass = cm.p;
          cells->edges.resize(cm.p.size() + 1);
          for (std::size_t i = 0; i <= cm.p.size(); ++i)
            cells->edges[i] = (n.alpha + static_cast<double>(cm.first + static_cast<long>(i)) - 0.5) * n.eta;
          cells->build();
          Part p;
          p.kind = BaseKind::histogram;
          p.cells = std::move(cells);
          out = single_part(p);
        } else if constexpr (std::is_same_v<T, law::Conditional>) {
          out = restrict_to(compile(*n.base), n.lo, n.hi);
          const double m = out.total_mass();
          if (!(m > 0.0)) throw DomainError("conditional: interval carries no mass");
          out.scale(1.0 / m);
        }
        out.finalize();
        return out;
      },
      node);
}

Compiled compile(const LawSpec& spec) { return compile_node(spec.node()); }

}  // namespace

}  // namespace detail

using detail::Compiled;

SignedMeasure::SignedMeasure() : compiled_(std::make_shared<const Compiled>([] {
                                   Compiled c;
                                   c.finalize();
                                   return c;
                                 }())) {}

SignedMeasure::SignedMeasure(std::vector<Term> terms) : terms_(std::move(terms)) {
  Compiled c;
  for (const auto& t : terms_) {
    if (!std::isfinite(t.coefficient)) throw DomainError("SignedMeasure: coefficients must be finite");
    mass_ += t.coefficient;
    if (t.coefficient != 0.0) c.append(detail::compile(t.law), t.coefficient);
  }
  c.finalize();
  compiled_ = std::make_shared<const Compiled>(std::move(c));
}

SignedMeasure SignedMeasure::of(const LawSpec& law) { return SignedMeasure({Term{1.0, law}}); }

bool SignedMeasure::is_zero() const { return compiled_->atoms.empty() && compiled_->parts.empty(); }

double SignedMeasure::cdf(double x) const { return compiled_->lower(0, x, true); }
double SignedMeasure::cdf_left(double x) const { return compiled_->lower(0, x, false); }
double SignedMeasure::tail(double x) const { return compiled_->upper(0, x, true); }

double SignedMeasure::distribution(double x) const {
  return x <= 0.0 ? compiled_->lower(0, x, true) : mass_ - compiled_->upper(0, x, true);
}

double SignedMeasure::distribution_left(double x) const {
  return x <= 0.0 ? compiled_->lower(0, x, false) : mass_ - compiled_->upper(0, x, false);
}

double SignedMeasure::density(double x) const {
  double s = 0.0;
  for (const auto& p : compiled_->parts) s += p.pdf_x(x);
  return s;
}

double SignedMeasure::lower_moment(int k, double x, bool closed) const {
  if (k < 0 || k > 4) throw DomainError("lower_moment: order must be in 0..4");
  return compiled_->lower(k, x, closed);
}

double SignedMeasure::upper_moment(int k, double x, bool closed) const {
  if (k < 0 || k > 4) throw DomainError("upper_moment: order must be in 0..4");
  return compiled_->upper(k, x, closed);
}

double SignedMeasure::moment(int k, double shift) const {
  if (k < 0 || k > 4) throw DomainError("moment: order must be in 0..4");
  double s = 0.0;
  for (const auto& a : compiled_->atoms) s += a.w * detail::ipow(a.x - shift, k);
  for (const auto& p : compiled_->parts) s += p.interval_x(k, -detail::kInf, detail::kInf, shift);
  return s;
}

const std::vector<Atom>& SignedMeasure::atoms() const& { return compiled_->atoms; }

std::vector<Atom> SignedMeasure::atoms() && { return compiled_->atoms; }

bool SignedMeasure::has_continuous_part() const { return !compiled_->parts.empty(); }

std::vector<double> SignedMeasure::kinks() const {
  std::vector<double> v;
  for (const auto& p : compiled_->parts)
    for (double y : p.kinks_y()) v.push_back(p.c * y + p.d);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::pair<double, double> SignedMeasure::effective_support(double eps) const { return compiled_->support(eps); }

bool SignedMeasure::density_bounded() const { return std::isfinite(density_sup()); }

double SignedMeasure::density_sup() const {
  double s = 0.0;
  for (const auto& p : compiled_->parts) s += std::fabs(p.weight) * p.sup_pdf_y() / std::fabs(p.c);
  return s;
}

SignedMeasure SignedMeasure::operator+(const SignedMeasure& other) const {
  auto t = terms_;
  t.insert(t.end(), other.terms_.begin(), other.terms_.end());
  return SignedMeasure(std::move(t));
}

SignedMeasure SignedMeasure::operator-(const SignedMeasure& other) const { return *this + other * -1.0; }

SignedMeasure SignedMeasure::operator*(double factor) const {
  auto t = terms_;
  for (auto& x : t) x.coefficient *= factor;
  return SignedMeasure(std::move(t));
}

}  // namespace zm
