#include <cmath>
#include <stdexcept>

#include "zm/bounds/bounds.hpp"
#include "zm/cli/cli.hpp"
#include "zm/convolve/convolve.hpp"
#include "zm/discretise/discretise.hpp"
#include "zm/measures/operations.hpp"
#include "zm/metrics/metrics.hpp"
#include "zm/numerics/special_functions.hpp"

namespace zm::cli {

namespace {

const LawSpec kN = LawSpec::normal();

/// Row against a truncated decimal quote such as "0.2417".
TableRow truncated(const std::string& table, const std::string& q, double computed, const std::string& digits) {
  TableRow r{table, q, computed, digits + "...", std::stod(digits), quoted_tolerance(digits)};
  r.ok = std::fabs(computed - r.reference) <= r.tolerance;
  return r;
}

/// Row against an exact closed form.
TableRow exact(const std::string& table, const std::string& q, double computed, const std::string& text,
               double value, double tol = 1e-7) {
  TableRow r{table, q, computed, text, value, tol};
  r.ok = std::fabs(computed - value) <= tol;
  return r;
}

TableRow below(const std::string& table, const std::string& q, double computed, const std::string& text,
               double bound) {
  TableRow r{table, q, computed, text, bound, 0.0, true};
  r.ok = computed < bound;
  return r;
}

void example_1_4(std::vector<TableRow>& rows) {
  const auto& k = constants();
  struct Line {
    double eta;
    const char* label;
    const char* z1;
    const char* z3;  // nullptr: quoted as "< 10^-5"
    const char* es;
    const char* ce;
    const char* m9;
  };
  const Line lines[] = {{1.0, "eta=1", "0.2417", "0.0051", "0.1916", "0.6562", "2.176"},
                        {0.1, "eta=1/10", "0.0249", nullptr, "0.01993", "0.6538", "0.224"},
                        {0.01, "eta=1/100", "0.00249", nullptr, "0.001994", "0.6538", "0.0224"}};
  for (const auto& l : lines) {
    const auto p = distance_profile(round_law(kN, l.eta));
    const std::string t = "example_1_4";
    const std::string e = std::string(" ") + l.label;
    rows.push_back(truncated(t, "zeta1" + e, p.zeta1, l.z1));
    if (l.z3)
      rows.push_back(truncated(t, "zeta3" + e, p.zeta3, l.z3));
    else
      rows.push_back(below(t, "zeta3" + e, p.zeta3, "< 1e-5", 1e-5));
    rows.push_back(truncated(t, "esseen_rhs" + e, esseen_asymptotic(p), l.es));
    rows.push_back(truncated(t, "c_E*nu3" + e, k.c_e * p.nu3, l.ce));
    rows.push_back(truncated(t, "9*(zeta1 v zeta3)" + e, 9 * std::max(p.zeta1, p.zeta3), l.m9));
  }
}

void zolotarev_m(std::vector<TableRow>& rows) {
  const double s3 = std::sqrt(3.0);
  const auto m = signed_diff(LawSpec::atoms({{-1.0, 0.5}, {1.0, 0.5}}), LawSpec::uniform(-s3, s3));
  const std::string t = "zolotarev_M";
  rows.push_back(exact(t, "K(M)", kolmogorov(m).value, "1/(2 sqrt 3)", 1 / (2 * s3)));
  rows.push_back(exact(t, "K(M*M)", kolmogorov_convolution(m, m).value, "1/4", 0.25));
  for (int r = 0; r <= 3; ++r)
    rows.push_back(exact(t, "nu_" + std::to_string(r), nu_r_signed(m, r).value, "3^{r/2}/(r+1) + 1",
                         std::pow(3.0, r / 2.0) / (r + 1) + 1));
  for (int r = 1; r <= 3; ++r)
    rows.push_back(exact(t, "kappa_" + std::to_string(r), kappa_r(m, r).value,
                         "(3^{r/2} + (2 sqrt 3 - 3) r/3 - 1)/(r+1)",
                         (std::pow(3.0, r / 2.0) + (2 * s3 - 3) * r / 3 - 1) / (r + 1)));
  const double z1 = zeta_r(m, 1).value;
  rows.push_back(exact(t, "zeta_1", z1, "(5 sqrt 3 - 6)/6", (5 * s3 - 6) / 6));
  rows.push_back(exact(t, "zeta_3", zeta_r(m, 3).value, "(3 sqrt 3 - 4)/24", (3 * s3 - 4) / 24));
  rows.push_back(exact(t, "zeta_4", zeta_r(m, 4).value, "1/30", 1.0 / 30));
}

void subbotin(std::vector<TableRow>& rows) {
  const std::string t = "subbotin";
  auto z3 = [](double beta) {
    return zeta_r(signed_diff(standardise(LawSpec::subbotin(beta)), kN), 3).value;
  };
  rows.push_back(truncated(t, "zeta3 beta=1", z3(1.0), "0.0875918"));
  rows.push_back(exact(t, "zeta3 beta=2", z3(2.0), "0", 0.0));
  rows.push_back(truncated(t, "zeta3 beta=inf", z3(INFINITY), "0.0494551"));
  for (double beta : {0.5, 1.5, 4.0}) {
    const double q = std::tgamma(4 / beta) * std::sqrt(std::tgamma(1 / beta)) / std::pow(std::tgamma(3 / beta), 1.5);
    const double v = (beta < 2 ? 1.0 : -1.0) / 6 * (q - 4 * kInvSqrt2Pi);
    char label[32];
    std::snprintf(label, sizeof label, "zeta3 beta=%g", beta);
    rows.push_back(exact(t, label, z3(beta), "gamma-function formula", v, 1e-6));
  }
}

void constant_rows(std::vector<TableRow>& rows) {
  const auto& k = constants();
  const std::string t = "constants";
  rows.push_back(truncated(t, "alpha", k.alpha_z, "0.9678"));
  rows.push_back(truncated(t, "beta", k.beta_z, "1.5957"));
  rows.push_back(truncated(t, "gamma", k.gamma_z, "1.5100"));
  rows.push_back(truncated(t, "zeta(3/2)", k.zeta_3_2, "2.612375"));
  rows.push_back(truncated(t, "lambda", k.lambda_z, "3.9447"));
  rows.push_back(truncated(t, "1/lambda", 1 / k.lambda_z, "0.2535"));
  rows.push_back(truncated(t, "c_E", k.c_e, "0.4097"));
  rows.push_back(exact(t, "||phi||_1", k.phi_deriv_l1[0], "1", 1.0));
  rows.push_back(truncated(t, "||phi'||_1", k.phi_deriv_l1[1], "0.797884"));
  rows.push_back(truncated(t, "||phi''||_1", k.phi_deriv_l1[2], "0.967882"));
  rows.push_back(truncated(t, "||phi'''||_1", k.phi_deriv_l1[3], "1.510013"));
  rows.push_back(truncated(t, "||phi''''||_1", k.phi_deriv_l1[4], "2.800600"));
  rows.push_back(truncated(t, "c_1", k.c1, "2.3416"));
  rows.push_back(truncated(t, "c zeta_1", proof_constant(1, 1), "13.3803"));
  rows.push_back(truncated(t, "c main", proof_constant(k.c1, k.c_sh), "8.92085"));
  rows.push_back(truncated(t, "c zeta_1 coarse", 2 + 2 * (k.alpha_z + 4 * k.beta_z * k.gamma_z), "23.21"));
  rows.push_back(truncated(t, "sharpness bound (15+6 sqrt 3)/13", (15 + 6 * std::sqrt(3.0)) / 13, "1.9532"));
}

}  // namespace

double quoted_tolerance(const std::string& digits) {
  const auto dot = digits.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(digits.size() - dot - 1);
  return 1.5 * std::pow(10.0, -decimals);
}

std::vector<TableRow> paper_table(const std::string& which) {
  std::vector<TableRow> rows;
  const bool all = which == "all";
  bool known = all;
  if (all || which == "example_1_4") example_1_4(rows), known = true;
  if (all || which == "zolotarev_M") zolotarev_m(rows), known = true;
  if (all || which == "subbotin") subbotin(rows), known = true;
  if (all || which == "constants") constant_rows(rows), known = true;
  if (!known) throw std::invalid_argument("unknown table: " + which);
  return rows;
}

}  // namespace zm::cli
