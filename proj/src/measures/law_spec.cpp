#include "zm/measures/law_spec.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "json.hpp"
#include "zm/error.hpp"

namespace zm {

using nlohmann::json;

namespace {

constexpr double kMassTol = 1e-9;

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

bool finite(double v) { return std::isfinite(v); }

std::shared_ptr<const LawSpec> share(const LawSpec& s) { return std::make_shared<const LawSpec>(s); }

}  // namespace

LawSpec::LawSpec(law::Node node) : node_(std::make_shared<const law::Node>(std::move(node))) {}

LawSpec LawSpec::dirac(double a) {
  require(finite(a), "dirac: location must be finite");
  return LawSpec(law::Dirac{a});
}

LawSpec LawSpec::atoms(std::vector<std::pair<double, double>> points) {
  require(!points.empty(), "atoms: empty list");
  double total = 0.0;
  for (const auto& [x, w] : points) {
    require(finite(x), "atoms: location must be finite");
    require(finite(w) && w >= 0.0, "atoms: weights must be nonnegative");
    total += w;
  }
  require(std::fabs(total - 1.0) <= kMassTol, "atoms: weights must sum to 1");
  return LawSpec(law::Atoms{std::move(points)});
}

LawSpec LawSpec::lattice(double eta, double alpha, long first_index, std::vector<double> weights) {
  require(finite(eta) && eta > 0.0, "lattice: eta must be > 0");
  require(finite(alpha), "lattice: alpha must be finite");
  require(!weights.empty(), "lattice: empty weights");
  double total = 0.0;
  for (double w : weights) {
    require(finite(w) && w >= 0.0, "lattice: weights must be nonnegative");
    total += w;
  }
  require(std::fabs(total - 1.0) <= kMassTol, "lattice: weights must sum to 1");
  return LawSpec(law::Lattice{eta, alpha, first_index, std::move(weights)});
}

LawSpec LawSpec::bernoulli(double p) {
  require(p >= 0.0 && p <= 1.0, "bernoulli: p must lie in [0, 1]");
  return LawSpec(law::Bernoulli{p});
}

LawSpec LawSpec::normal(double mu, double sigma) {
  require(finite(mu), "normal: mu must be finite");
  require(finite(sigma) && sigma > 0.0, "normal: sigma must be > 0");
  return LawSpec(law::Normal{mu, sigma});
}

LawSpec LawSpec::uniform(double a, double b) {
  require(finite(a) && finite(b) && a < b, "uniform: need a < b");
  return LawSpec(law::Uniform{a, b});
}

LawSpec LawSpec::truncated_normal_left(double t) {
  require(finite(t) && t > -37.0, "truncated_normal_left: t must be finite and > -37");
  return LawSpec(law::TruncatedNormalLeft{t});
}

LawSpec LawSpec::winsorised_normal_left(double t) {
  require(finite(t), "winsorised_normal_left: t must be finite");
  return LawSpec(law::WinsorisedNormalLeft{t});
}

LawSpec LawSpec::gamma_power(double alpha, double lambda, double beta) {
  require(finite(alpha) && alpha > 0.0, "gamma_power: alpha must be > 0");
  require(finite(lambda) && lambda > 0.0, "gamma_power: lambda must be > 0");
  require(finite(beta) && beta != 0.0, "gamma_power: beta must be nonzero");
  return LawSpec(law::GammaPower{alpha, lambda, beta});
}

LawSpec LawSpec::subbotin(double beta, double alpha) {
  require(beta > 0.0, "subbotin: beta must be > 0");
  require(finite(alpha) && alpha > 0.0, "subbotin: alpha must be > 0");
  return LawSpec(law::Subbotin{beta, alpha});
}

LawSpec LawSpec::mixture(std::vector<std::pair<double, LawSpec>> components) {
  require(!components.empty(), "mixture: no components");
  double total = 0.0;
  for (const auto& [w, law] : components) {
    require(finite(w) && w >= 0.0, "mixture: weights must be nonnegative");
    total += w;
  }
  require(std::fabs(total - 1.0) <= kMassTol, "mixture: weights must sum to 1");
  return LawSpec(law::Mixture{std::move(components)});
}

LawSpec LawSpec::affine(double c, double d, const LawSpec& base) {
  require(finite(c) && finite(d), "affine: coefficients must be finite");
  return LawSpec(law::Affine{c, d, share(base)});
}

LawSpec LawSpec::rounded(double eta, double alpha, const LawSpec& base) {
  require(finite(eta) && eta > 0.0, "rounded: eta must be > 0");
  require(finite(alpha), "rounded: alpha must be finite");
  return LawSpec(law::Rounded{eta, alpha, share(base)});
}

LawSpec LawSpec::histogram(double eta, double alpha, const LawSpec& base) {
  require(finite(eta) && eta > 0.0, "histogram: eta must be > 0");
  require(finite(alpha), "histogram: alpha must be finite");
  return LawSpec(law::Histogram{eta, alpha, share(base)});
}

LawSpec LawSpec::conditional(double lo, double hi, const LawSpec& base) {
  require(!std::isnan(lo) && !std::isnan(hi) && lo < hi, "conditional: need lo < hi");
  return LawSpec(law::Conditional{lo, hi, share(base)});
}

std::string LawSpec::family() const {
  static const char* names[] = {"dirac",   "atoms",    "lattice",   "bernoulli",   "normal",
                                "uniform", "truncated_normal_left", "winsorised_normal_left",
                                "gamma_power", "subbotin", "mixture", "affine", "rounded", "histogram",
                                "conditional"};
  return names[node_->index()];
}

namespace {

json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json to_json(const LawSpec& spec) {
  json j;
  j["family"] = spec.family();
  std::visit(
      [&j](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, law::Dirac>) {
          j["a"] = n.a;
        } else if constexpr (std::is_same_v<T, law::Atoms>) {
          j["atoms"] = json::array();
          for (const auto& [x, w] : n.points) j["atoms"].push_back({x, w});
        } else if constexpr (std::is_same_v<T, law::Lattice>) {
          j["eta"] = n.eta;
          j["alpha"] = n.alpha;
          j["first_index"] = n.first_index;
          j["weights"] = n.weights;
        } else if constexpr (std::is_same_v<T, law::Bernoulli>) {
          j["p"] = n.p;
        } else if constexpr (std::is_same_v<T, law::Normal>) {
          j["mu"] = n.mu;
          j["sigma"] = n.sigma;
        } else if constexpr (std::is_same_v<T, law::Uniform>) {
          j["a"] = n.a;
          j["b"] = n.b;
        } else if constexpr (std::is_same_v<T, law::TruncatedNormalLeft> ||
                             std::is_same_v<T, law::WinsorisedNormalLeft>) {
          j["t"] = n.t;
        } else if constexpr (std::is_same_v<T, law::GammaPower>) {
          j["alpha"] = n.alpha;
          j["lambda"] = n.lambda;
          j["beta"] = n.beta;
        } else if constexpr (std::is_same_v<T, law::Subbotin>) {
          j["beta"] = number(n.beta);
          j["alpha"] = n.alpha;
        } else if constexpr (std::is_same_v<T, law::Mixture>) {
          j["components"] = json::array();
          for (const auto& [w, law] : n.components) j["components"].push_back({{"weight", w}, {"law", to_json(law)}});
        } else if constexpr (std::is_same_v<T, law::Affine>) {
          j["c"] = n.c;
          j["d"] = n.d;
          j["base"] = to_json(*n.base);
        } else if constexpr (std::is_same_v<T, law::Rounded> || std::is_same_v<T, law::Histogram>) {
          j["eta"] = n.eta;
          j["alpha"] = n.alpha;
          j["base"] = to_json(*n.base);
        } else if constexpr (std::is_same_v<T, law::Conditional>) {
          j["lo"] = number(n.lo);
          j["hi"] = number(n.hi);
          j["base"] = to_json(*n.base);
        }
      },
      spec.node());
  return j;
}

double get_number(const json& j, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ParseError(std::string("missing field \"") + key + "\"");
  }
  const json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    if (s == "-inf" || s == "-infinity") return -std::numeric_limits<double>::infinity();
  }
  throw ParseError(std::string("field \"") + key + "\" is not a number");
}

LawSpec from_json(const json& j) {
  if (!j.is_object()) throw ParseError("law spec must be a JSON object");
  if (!j.contains("family") || !j["family"].is_string()) throw ParseError("missing string field \"family\"");
  const auto family = j["family"].get<std::string>();
  auto base = [&j]() {
    if (!j.contains("base")) throw ParseError("missing field \"base\"");
    return from_json(j["base"]);
  };
  if (family == "dirac") return LawSpec::dirac(get_number(j, "a"));
  if (family == "atoms") {
    if (!j.contains("atoms") || !j["atoms"].is_array()) throw ParseError("atoms: missing array \"atoms\"");
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : j["atoms"]) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        throw ParseError("atoms: entries must be [location, weight]");
      pts.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return LawSpec::atoms(std::move(pts));
  }
  if (family == "lattice") {
    if (!j.contains("weights") || !j["weights"].is_array()) throw ParseError("lattice: missing array \"weights\"");
    std::vector<double> w;
    for (const auto& v : j["weights"]) {
      if (!v.is_number()) throw ParseError("lattice: weights must be numbers");
      w.push_back(v.get<double>());
    }
    long first = 0;
    if (j.contains("first_index")) {
      if (!j["first_index"].is_number_integer()) throw ParseError("lattice: first_index must be an integer");
      first = j["first_index"].get<long>();
    }
    return LawSpec::lattice(get_number(j, "eta"), get_number(j, "alpha", 0.0), first, std::move(w));
  }
  if (family == "bernoulli") return LawSpec::bernoulli(get_number(j, "p"));
  if (family == "normal") return LawSpec::normal(get_number(j, "mu", 0.0), get_number(j, "sigma", 1.0));
  if (family == "uniform") return LawSpec::uniform(get_number(j, "a"), get_number(j, "b"));
  if (family == "truncated_normal_left") return LawSpec::truncated_normal_left(get_number(j, "t"));
  if (family == "winsorised_normal_left") return LawSpec::winsorised_normal_left(get_number(j, "t"));
  if (family == "gamma_power")
    return LawSpec::gamma_power(get_number(j, "alpha"), get_number(j, "lambda", 1.0), get_number(j, "beta", 1.0));
  if (family == "subbotin") return LawSpec::subbotin(get_number(j, "beta"), get_number(j, "alpha", 1.0));
  if (family == "mixture") {
    if (!j.contains("components") || !j["components"].is_array())
      throw ParseError("mixture: missing array \"components\"");
    std::vector<std::pair<double, LawSpec>> comps;
    for (const auto& c : j["components"]) {
      if (!c.is_object() || !c.contains("law")) throw ParseError("mixture: components need \"weight\" and \"law\"");
      comps.emplace_back(get_number(c, "weight"), from_json(c["law"]));
    }
    return LawSpec::mixture(std::move(comps));
  }
  if (family == "affine") return LawSpec::affine(get_number(j, "c", 1.0), get_number(j, "d", 0.0), base());
  if (family == "rounded") return LawSpec::rounded(get_number(j, "eta"), get_number(j, "alpha", 0.0), base());
  if (family == "histogram") return LawSpec::histogram(get_number(j, "eta"), get_number(j, "alpha", 0.0), base());
  if (family == "conditional") return LawSpec::conditional(get_number(j, "lo"), get_number(j, "hi"), base());
  throw ParseError("unknown family \"" + family + "\"");
}

}  // namespace

std::string LawSpec::to_string(int indent) const { return to_json(*this).dump(indent); }

LawSpec LawSpec::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

bool LawSpec::operator==(const LawSpec& other) const {
  return node_ == other.node_ || to_json(*this) == to_json(other);
}

}  // namespace zm
