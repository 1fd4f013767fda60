#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "zm/measures/law_spec.hpp"

namespace zm {

struct Term {
  double coefficient = 1.0;
  LawSpec law;
};

struct Atom {
  double x = 0.0;
  double w = 0.0;
};

namespace detail {
struct Compiled;
}

/// Finite signed combination of laws, M = sum_i c_i P_i. Construction
/// compiles the terms into merged signed atoms plus continuous parts with
/// closed-form distribution functions and partial moments.
class SignedMeasure {
 public:
  /// The zero measure.
  SignedMeasure();
  explicit SignedMeasure(std::vector<Term> terms);
  /// The law itself as a measure.
  static SignedMeasure of(const LawSpec& law);

  const std::vector<Term>& terms() const& { return terms_; }
  std::vector<Term> terms() && { return std::move(terms_); }
  /// Sum of the coefficients.
  double mass() const { return mass_; }
  /// True if atoms and continuous parts all cancel.
  bool is_zero() const;

  /// M(]-inf, x]).
  double cdf(double x) const;
  /// M(]-inf, x[).
  double cdf_left(double x) const;
  /// M(]x, inf[).
  double tail(double x) const;
  /// F_M(x) computed as M(]-inf,x]) for x <= 0 and as mass - M(]x,inf[) for x > 0.
  double distribution(double x) const;
  double distribution_left(double x) const;
  /// Summed signed density of the continuous parts.
  double density(double x) const;

  /// Integral of y^k over ]-inf, x] (or ]-inf, x[ if `closed` is false), k <= 4.
  double lower_moment(int k, double x, bool closed = true) const;
  /// Integral of y^k over ]x, inf[ (or [x, inf[ if `closed` is false), k <= 4.
  double upper_moment(int k, double x, bool closed = true) const;
  /// Integral of (y - shift)^k over the line, k <= 4; +-inf or NaN if not finite.
  double moment(int k, double shift = 0.0) const;

  /// Merged signed atoms, sorted by location.
  const std::vector<Atom>& atoms() const&;
  std::vector<Atom> atoms() &&;
  bool has_continuous_part() const;
  /// Points where the continuous part's density is not smooth.
  std::vector<double> kinks() const;
  /// Interval outside of which every component carries mass below eps.
  std::pair<double, double> effective_support(double eps = 1e-18) const;
  /// True if every continuous part has a finite density everywhere.
  bool density_bounded() const;
  /// Supremum of |density| (numerical for unbounded cases: +inf).
  double density_sup() const;

  SignedMeasure operator+(const SignedMeasure& other) const;
  SignedMeasure operator-(const SignedMeasure& other) const;
  SignedMeasure operator*(double factor) const;

 private:
  std::vector<Term> terms_;
  double mass_ = 0.0;
  std::shared_ptr<const detail::Compiled> compiled_;
};

}  // namespace zm
