#pragma once

#include <array>
#include <vector>

#include "zm/measures/law_spec.hpp"
#include "zm/measures/signed_measure.hpp"
#include "zm/numerics/quadrature.hpp"

namespace zm {

/// Signed moments mu_k and absolute moments nu_r for k, r = 0..4.
/// Infinite absolute moments are +inf; a signed moment whose absolute
/// counterpart is infinite is NaN.
struct MomentTable {
  std::array<double, 5> mu{};
  std::array<double, 5> nu{};
  double mean = 0.0;
  double sd = 0.0;
  /// Third central moment divided by sd^3, i.e. mu_3 of the standardisation.
  double skewness = 0.0;

  bool finite_mu(int k) const;
  bool finite_nu(int r) const;
};

MomentTable moments(const LawSpec& law);

/// nu_r(M) = integral of |x|^r d|M|; closed form when all continuous parts
/// share a sign and r is an integer, quadrature otherwise.
QuadResult absolute_moment(const SignedMeasure& m, double r, const Tolerance& tol = {});

/// Image of `law` under x -> c x + d, simplified for the closed families.
LawSpec affine_law(double c, double d, const LawSpec& law);
/// Throws DegenerateLawError unless 0 < sd < inf.
LawSpec standardise(const LawSpec& law);
LawSpec centre(const LawSpec& law);
LawSpec reflect(const LawSpec& law);

/// P - Q.
SignedMeasure signed_diff(const LawSpec& p, const LawSpec& q);

struct Variation {
  std::vector<Atom> atoms;  // merged signed atom weights
  RealFunction density;     // summed signed density
};
Variation variation_density_and_atoms(const SignedMeasure& m);

/// Largest eta with P(a + eta Z) = 1; 0 with a continuous part or
/// incommensurable atoms, +inf for a Dirac law.
double lattice_span(const LawSpec& law);
double lattice_span(const SignedMeasure& m);

}  // namespace zm
