#include "zm/cli/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "zm/bounds/bounds.hpp"
#include "zm/convolve/convolve.hpp"
#include "zm/error.hpp"
#include "zm/measures/operations.hpp"
#include "zm/metrics/metrics.hpp"

namespace zm::cli {

namespace {

using nlohmann::json;

/// Exit codes.
constexpr int kOk = 0, kBreach = 1, kUsage = 2, kPrecondition = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 12 significant digits for stored output; non-finite values become null.
json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::stod(buf);
}

/// 6 significant digits for display.
std::string disp(double v) {
  if (std::isnan(v)) return "-";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string csv_num(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
  out << "\r\n";
}

void print_table(std::ostream& out, const std::vector<std::string>& head,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> w(head.size());
  for (std::size_t i = 0; i < head.size(); ++i) w[i] = head[i].size();
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) out << std::left << std::setw(static_cast<int>(w[i]) + 2) << r[i];
    out << "\n";
  };
  line(head);
  for (const auto& r : rows) line(r);
}

LawSpec load_spec(const std::string& arg) {
  std::string text = arg;
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw ParseError("cannot read spec file " + arg.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return LawSpec::parse(text);
}

Tolerance make_tol(std::optional<double> flag) {
  Tolerance tol;
  if (const char* env = std::getenv("ZM_TOL"); env && *env) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) throw UsageError("ZM_TOL must be a positive number");
    tol.abs_tol = v;
  }
  if (flag) tol.abs_tol = *flag;
  tol.validate();
  return tol;
}

json certificate_json(const MetricValue& v) {
  if (!v.certificate) return nullptr;
  return {{"count", v.certificate->count}, {"initial_sign", to_string(v.certificate->initial)}};
}

// ---------------------------------------------------------------- metric

struct MetricArgs {
  std::string spec, spec2, metric;
  double r = 1.0;
  bool standardise = false;
  std::optional<double> tol;
  bool json = false;
};

int cmd_metric(const MetricArgs& a, std::ostream& out) {
  const auto tol = make_tol(a.tol);
  auto p = load_spec(a.spec);
  // Without --spec2 the reference law is the standard normal.
  auto q = a.spec2.empty() ? LawSpec::normal() : load_spec(a.spec2);
  if (a.standardise) {
    p = standardise(p);
    if (!a.spec2.empty()) q = standardise(q);
  }
  const auto m = signed_diff(p, q);
  const bool integer_r = a.r == std::floor(a.r);
  MetricValue v;
  if (a.metric == "K") {
    v = kolmogorov(m, tol);
  } else if (a.metric == "nu_r") {
    if (!integer_r || a.r < 0 || a.r > 4) throw UsageError("nu_r needs integer r in 0..4");
    v = nu_r_signed(m, static_cast<int>(a.r), tol);
  } else if (a.metric == "kappa_r") {
    if (!(a.r > 0)) throw UsageError("kappa_r needs r > 0");
    v = kappa_r(m, a.r, tol);
  } else if (a.metric == "zeta_r") {
    if (!integer_r || a.r < 1 || a.r > 4) throw UsageError("zeta_r needs integer r in 1..4");
    v = zeta_r(m, static_cast<int>(a.r), tol);
  } else {
    throw UsageError("unknown metric " + a.metric);
  }
  if (a.json) {
    json j = {{"command", "metric"},   {"metric", a.metric},         {"r", a.r},
              {"value", num(v.value)}, {"err_est", num(v.err_est)},  {"method", to_string(v.method)},
              {"certificate", certificate_json(v)}, {"note", v.note}};
    out << j.dump(2) << "\n";
  } else {
    std::vector<std::vector<std::string>> rows = {
        {"metric", a.metric}, {"r", disp(a.r)}, {"value", disp(v.value)}, {"err_est", disp(v.err_est)},
        {"method", to_string(v.method)}};
    if (v.certificate)
      rows.push_back({"certificate", std::to_string(v.certificate->count) + " sign changes, initially " +
                                         to_string(v.certificate->initial)});
    if (!v.note.empty()) rows.push_back({"note", v.note});
    print_table(out, {"field", "value"}, rows);
  }
  return kOk;
}

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
  std::string spec;
  int n = 2;
  std::vector<std::string> ids;
  std::optional<double> tol;
  bool json = false, csv = false;
};

struct BoundRow {
  BoundReport report;
  std::string target;
  double lhs = NAN;
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
  const auto tol = make_tol(a.tol);
  if (a.n < 1) throw UsageError("--n must be >= 1");
  const auto law = load_spec(a.spec);
  const auto prof = distance_profile(law, tol);
  const bool normal = std::holds_alternative<law::Normal>(law.node());

  // Exact left-hand sides where they can be computed.
  double lhs_k = NAN, lhs_z1 = NAN;
  if (normal) {
    lhs_k = lhs_z1 = 0.0;
  } else {
    try {
      lhs_k = clt_lhs(law, a.n, CltMode::exact_lattice).value;
      lhs_z1 = kappa_r(signed_diff(standardised_power(law, a.n), LawSpec::normal()), 1.0, tol).value;
    } catch (const PreconditionError&) {
      if (a.n == 2) lhs_k = clt_lhs(law, 2, CltMode::quadrature_n2).value;
    }
  }

  std::vector<BoundRow> rows;
  for (auto& b : kolmogorov_bounds(prof, a.n)) rows.push_back({b, "kolmogorov", lhs_k});
  rows.push_back({zolotarev_zeta1_bound(prof, a.n), "zeta1", lhs_z1});
  rows.push_back({goldstein_tyurin(prof, a.n), "zeta1", lhs_z1});
  if (!a.ids.empty()) {
    // classical_c_e (Esseen's lower constant) is only produced on request.
    std::vector<BoundRow> picked;
    for (const auto& id : a.ids) {
      if (id == "classical_c_e") {
        picked.push_back({be_classical(prof, a.n, constants().c_e, "classical_c_e"), "kolmogorov", lhs_k});
        continue;
      }
      bool found = false;
      for (const auto& r : rows)
        if (r.report.id == id) picked.push_back(r), found = true;
      if (!found) throw UsageError("unknown bound id " + id);
    }
    rows = std::move(picked);
  }
  bool any = false;
  for (const auto& r : rows) any = any || r.report.applicable;

  auto holds = [](const BoundRow& r) -> std::string {
    if (!r.report.applicable || std::isnan(r.lhs)) return "";
    return r.lhs <= r.report.rhs + 1e-9 ? "yes" : "no";
  };
  if (a.json) {
    json j;
    j["command"] = "bounds";
    j["n"] = a.n;
    j["profile"] = {{"sigma", num(prof.sigma)},   {"zeta1", num(prof.zeta1)},   {"zeta3", num(prof.zeta3)},
                    {"kappa1", num(prof.kappa1)}, {"kappa3", num(prof.kappa3)}, {"nu3", num(prof.nu3)},
                    {"mu3", num(prof.mu3)},       {"span", num(prof.span)},     {"problem", prof.problem}};
    j["esseen_asymptotic"] = num(esseen_asymptotic(prof));
    j["rows"] = json::array();
    for (const auto& r : rows) {
      json inputs = json::object();
      for (const auto& [k, v] : r.report.inputs) inputs[k] = num(v);
      j["rows"].push_back({{"bound", r.report.id},
                           {"target", r.target},
                           {"rhs", num(r.report.rhs)},
                           {"applicable", r.report.applicable},
                           {"reason", r.report.reason},
                           {"lhs", num(r.lhs)},
                           {"holds", holds(r).empty() ? json(nullptr) : json(holds(r) == "yes")},
                           {"inputs", inputs}});
    }
    out << j.dump(2) << "\n";
  } else if (a.csv) {
    csv_row(out, {"bound", "target", "n", "rhs", "applicable", "lhs", "holds", "reason"});
    for (const auto& r : rows)
      csv_row(out, {r.report.id, r.target, std::to_string(a.n), csv_num(r.report.rhs),
                    r.report.applicable ? "true" : "false", csv_num(r.lhs), holds(r), r.report.reason});
  } else {
    std::vector<std::vector<std::string>> t;
    for (const auto& r : rows)
      t.push_back({r.report.id, r.target, r.report.applicable ? disp(r.report.rhs) : "n/a", disp(r.lhs), holds(r),
                   r.report.reason});
    print_table(out, {"bound", "target", "rhs", "lhs", "holds", "reason"}, t);
  }
  if (!any) throw PreconditionError("no bound applicable for n = " + std::to_string(a.n));
  return kOk;
}

// ---------------------------------------------------------------- clt

struct CltArgs {
  std::string spec, mode = "exact_lattice";
  int n = 0;
  std::vector<int> sweep;
  double eta = 0.0;
  bool json = false, csv = false;
};

int cmd_clt(const CltArgs& a, std::ostream& out) {
  const auto law = load_spec(a.spec);
  CltMode mode;
  if (a.mode == "exact_lattice")
    mode = CltMode::exact_lattice;
  else if (a.mode == "quadrature_n2")
    mode = CltMode::quadrature_n2;
  else if (a.mode == "lattice_approx")
    mode = CltMode::lattice_approx;
  else
    throw UsageError("unknown mode " + a.mode);
  std::vector<int> ns = a.sweep;
  if (a.n > 0) ns.insert(ns.begin(), a.n);
  if (ns.empty()) throw UsageError("give --n or --sweep");
  struct Row {
    int n;
    MetricValue v;
  };
  std::vector<Row> rows;
  for (int n : ns) {
    if (n < 1) throw UsageError("n must be >= 1");
    rows.push_back({n, clt_lhs(law, n, mode, a.eta)});
  }
  if (a.json) {
    json j;
    j["command"] = "clt";
    j["mode"] = a.mode;
    j["rows"] = json::array();
    for (const auto& r : rows)
      j["rows"].push_back({{"n", r.n},
                           {"lhs", num(r.v.value)},
                           {"err_est", num(r.v.err_est)},
                           {"sqrt_n_lhs", num(std::sqrt(r.n) * r.v.value)},
                           {"method", to_string(r.v.method)},
                           {"note", r.v.note}});
    out << j.dump(2) << "\n";
  } else if (a.csv) {
    csv_row(out, {"n", "lhs", "err_est", "sqrt_n_lhs", "method", "note"});
    for (const auto& r : rows)
      csv_row(out, {std::to_string(r.n), csv_num(r.v.value), csv_num(r.v.err_est),
                    csv_num(std::sqrt(r.n) * r.v.value), to_string(r.v.method), r.v.note});
  } else {
    std::vector<std::vector<std::string>> t;
    for (const auto& r : rows)
      t.push_back({std::to_string(r.n), disp(r.v.value), disp(r.v.err_est), disp(std::sqrt(r.n) * r.v.value),
                   to_string(r.v.method), r.v.note});
    print_table(out, {"n", "lhs", "err_est", "sqrt(n)*lhs", "method", "note"}, t);
  }
  return kOk;
}

// ---------------------------------------------------------------- paper-tables

int cmd_tables(const std::string& which, bool as_json, bool as_csv, std::ostream& out) {
  std::vector<TableRow> rows;
  try {
    rows = paper_table(which);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.ok;
  auto diff = [](const TableRow& r) { return std::fabs(r.computed - r.reference); };
  if (as_json) {
    json j;
    j["command"] = "paper-tables";
    j["ok"] = ok;
    j["rows"] = json::array();
    for (const auto& r : rows)
      j["rows"].push_back({{"table", r.table},
                           {"quantity", r.quantity},
                           {"computed", num(r.computed)},
                           {"quoted", r.quoted},
                           {"abs_diff", num(diff(r))},
                           {"tolerance", r.upper_bound ? json(nullptr) : num(r.tolerance)},
                           {"ok", r.ok}});
    out << j.dump(2) << "\n";
  } else if (as_csv) {
    csv_row(out, {"table", "quantity", "computed", "quoted", "abs_diff", "tolerance", "ok"});
    for (const auto& r : rows)
      csv_row(out, {r.table, r.quantity, csv_num(r.computed), r.quoted, csv_num(diff(r)),
                    r.upper_bound ? "" : csv_num(r.tolerance), r.ok ? "true" : "false"});
  } else {
    std::vector<std::vector<std::string>> t;
    for (const auto& r : rows)
      t.push_back({r.table, r.quantity, disp(r.computed), r.quoted, disp(diff(r)), r.ok ? "ok" : "BREACH"});
    print_table(out, {"table", "quantity", "computed", "quoted", "abs_diff", "status"}, t);
  }
  return ok ? kOk : kBreach;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probability metrics and Berry-Esseen bounds on the real line", "zm"};
  app.require_subcommand(1);

  MetricArgs ma;
  auto* metric = app.add_subcommand("metric", "Compute a norm of P - Q");
  metric->add_option("--spec", ma.spec, "Law P as JSON, or @file")->required();
  metric->add_option("--spec2", ma.spec2, "Law Q as JSON, or @file (default: standard normal)");
  metric->add_option("--metric", ma.metric, "K, nu_r, kappa_r or zeta_r")->required();
  metric->add_option("--r", ma.r, "Order r");
  metric->add_flag("--standardise", ma.standardise, "Standardise P and Q first");
  metric->add_option("--tol", ma.tol, "Absolute tolerance");
  metric->add_flag("--json", ma.json, "JSON output");

  BoundsArgs ba;
  bool all = false;
  auto* bounds = app.add_subcommand("bounds", "Evaluate Berry-Esseen type bounds for the n-fold power of P");
  bounds->add_option("--spec", ba.spec, "Law P as JSON, or @file")->required();
  bounds->add_option("--n", ba.n, "Number of summands")->required();
  bounds->add_flag("--all", all, "All bounds (default)");
  bounds->add_option("--bound", ba.ids, "Bound ids to report");
  bounds->add_option("--tol", ba.tol, "Absolute tolerance");
  bounds->add_flag("--json", ba.json, "JSON output");
  bounds->add_flag("--csv", ba.csv, "CSV output");

  CltArgs ca;
  auto* clt = app.add_subcommand("clt", "Kolmogorov distance of the standardised n-fold power to N");
  clt->add_option("--spec", ca.spec, "Law P as JSON, or @file")->required();
  clt->add_option("--n", ca.n, "Number of summands");
  clt->add_option("--sweep", ca.sweep, "List of n values")->delimiter(',');
  clt->add_option("--mode", ca.mode, "exact_lattice, quadrature_n2 or lattice_approx");
  clt->add_option("--eta", ca.eta, "Rounding span for lattice_approx");
  clt->add_flag("--json", ca.json, "JSON output");
  clt->add_flag("--csv", ca.csv, "CSV output");

  std::string which = "all";
  bool tj = false, tc = false;
  auto* tables = app.add_subcommand("paper-tables", "Recompute the published values and compare");
  tables->add_option("--which", which, "example_1_4, zolotarev_M, subbotin, constants or all");
  tables->add_flag("--json", tj, "JSON output");
  tables->add_flag("--csv", tc, "CSV output");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "zm: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*metric) return cmd_metric(ma, out);
    if (*bounds) return cmd_bounds(ba, out);
    if (*clt) return cmd_clt(ca, out);
    if (*tables) return cmd_tables(which, tj, tc, out);
  } catch (const ParseError& e) {
    err << "zm: parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "zm: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    err << "zm: precondition failed: " << e.what() << "\n";
    return kPrecondition;
  } catch (const DomainError& e) {
    err << "zm: precondition failed: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::exception& e) {
    err << "zm: error: " << e.what() << "\n";
    return kBreach;
  }
  return kUsage;
}

}  // namespace zm::cli
