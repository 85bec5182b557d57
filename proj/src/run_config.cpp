#include "modalfit/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "modalfit/errors.hpp"

namespace modalfit {

namespace {

using nlohmann::json;

// A JSON object together with its dotted path, for error messages.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("config field '" + (path_.empty() ? std::string("<root>") : path_) + "': " + what);
  }

  void require_object(std::initializer_list<const char*> allowed) const {
    if (!j_.is_object()) fail("expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!ok.count(it.key())) Node(it.value(), child_path(it.key())).fail("unknown key");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  Node at(const char* key) const { return Node(j_.at(key), child_path(key)); }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }
  double positive() const {
    const double v = number();
    if (!(v > 0.0)) fail("must be positive");
    return v;
  }
  Index integer(Index min_value) const {
    if (!j_.is_number_integer()) fail("expected an integer");
    const auto v = j_.get<long long>();
    if (v < min_value) fail("must be at least " + std::to_string(min_value));
    return static_cast<Index>(v);
  }
  std::uint64_t unsigned_integer() const {
    if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<long long>() >= 0)) {
      fail("expected a nonnegative integer");
    }
    return j_.get<std::uint64_t>();
  }
  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  Vector vector() const {
    if (!j_.is_array() || j_.empty()) fail("expected a nonempty array of numbers");
    Vector v(static_cast<Index>(j_.size()));
    for (std::size_t i = 0; i < j_.size(); ++i) v[static_cast<Index>(i)] = Node(j_[i], path_ + "[" + std::to_string(i) + "]").number();
    return v;
  }
  std::pair<double, double> bounds() const {
    const Vector v = vector();
    if (v.size() != 2) fail("expected [lower, upper]");
    if (!(v[0] > 0.0 && v[0] < v[1])) fail("bounds must satisfy 0 < lower < upper");
    return {v[0], v[1]};
  }

 private:
  std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& j_;
  std::string path_;
};

void parse_benchmark(const Node& n, RunConfig& cfg) {
  n.require_object({"kind", "path", "resolution"});
  if (!n.has("kind")) n.fail("missing 'kind'");
  cfg.benchmark = n.at("kind").string();
  if (cfg.benchmark != "arch" && cfg.benchmark != "vault" && cfg.benchmark != "mesh") {
    n.at("kind").fail("expected \"arch\", \"vault\" or \"mesh\"");
  }
  if (cfg.benchmark == "mesh") {
    if (!n.has("path")) n.fail("mesh benchmark needs 'path'");
    cfg.mesh_path = n.at("path").string();
  } else if (n.has("path")) {
    n.at("path").fail("only allowed for kind \"mesh\"");
  }
  if (!n.has("resolution")) return;
  const Node r = n.at("resolution");
  auto take = [&](const char* key, int& field) {
    if (r.has(key)) field = static_cast<int>(r.at(key).integer(1));
  };
  if (cfg.benchmark == "arch") {
    r.require_object({"radial", "arc", "pier_height"});
    take("radial", cfg.arch.radial);
    take("arc", cfg.arch.arc);
    take("pier_height", cfg.arch.pier_height);
  } else if (cfg.benchmark == "vault") {
    r.require_object({"wall", "span", "pillar", "drum", "vault"});
    take("wall", cfg.vault.wall);
    take("span", cfg.vault.span);
    take("pillar", cfg.vault.pillar);
    take("drum", cfg.vault.drum);
    take("vault", cfg.vault.vault);
  } else {
    r.fail("not used with kind \"mesh\"");
  }
}

MaterialOverride parse_material(const Node& n) {
  n.require_object({"region", "E", "rho", "nu", "free", "fixed"});
  MaterialOverride m;
  if (!n.has("region")) n.fail("missing 'region'");
  m.region = static_cast<int>(n.at("region").integer(1));
  if (n.has("E")) m.youngs_modulus = n.at("E").positive();
  if (n.has("rho")) m.density = n.at("rho").positive();
  if (n.has("nu")) {
    m.poisson = n.at("nu").number();
    if (!(*m.poisson >= 0.0 && *m.poisson < 0.5)) n.at("nu").fail("must lie in [0, 0.5)");
  }
  if (n.has("free")) {
    const Node f = n.at("free");
    f.require_object({"E", "rho"});
    if (f.has("E")) m.modulus_bounds = f.at("E").bounds();
    if (f.has("rho")) m.density_bounds = f.at("rho").bounds();
  }
  if (n.has("fixed")) {
    const Node f = n.at("fixed");
    if (!f.raw().is_array()) f.fail("expected an array of \"E\" / \"rho\"");
    for (std::size_t i = 0; i < f.raw().size(); ++i) {
      const std::string what = Node(f.raw()[i], f.path() + "[" + std::to_string(i) + "]").string();
      if (what == "E") m.fix_modulus = true;
      else if (what == "rho") m.fix_density = true;
      else f.fail("unknown entry '" + what + "'");
    }
  }
  if ((m.fix_modulus && m.modulus_bounds) || (m.fix_density && m.density_bounds)) {
    n.fail("a parameter cannot be both free and fixed");
  }
  return m;
}

void parse_measured(const Node& n, RunConfig& cfg) {
  n.require_object({"frequencies", "generate", "count", "noise", "noise_seed"});
  const bool generate = n.has("generate") ? n.at("generate").boolean() : !n.has("frequencies");
  if (n.has("frequencies")) {
    if (generate) n.fail("'frequencies' and 'generate: true' are exclusive");
    const Vector f = n.at("frequencies").vector();
    for (Index i = 0; i < f.size(); ++i) {
      if (!(f[i] > 0.0)) n.at("frequencies").fail("frequencies must be positive");
      if (i > 0 && f[i] < f[i - 1]) n.at("frequencies").fail("frequencies must be nondecreasing");
    }
    cfg.frequencies = f;
    cfg.count = f.size();
    if (n.has("count") && n.at("count").integer(1) != f.size()) n.at("count").fail("does not match the frequency list");
  } else {
    if (!generate) n.fail("either give 'frequencies' or set 'generate' to true");
    if (n.has("count")) cfg.count = n.at("count").integer(1);
  }
  if (n.has("noise")) {
    cfg.noise = n.at("noise").number();
    if (!(cfg.noise >= 0.0)) n.at("noise").fail("must be nonnegative");
  }
  if (n.has("noise_seed")) cfg.noise_seed = n.at("noise_seed").unsigned_integer();
}

void parse_weights(const Node& n, RunConfig& cfg) {
  if (n.raw().is_string()) {
    const std::string w = n.string();
    if (w == "uniform") cfg.weights = WeightMode::Uniform;
    else if (w == "relative") cfg.weights = WeightMode::Relative;
    else n.fail("expected \"uniform\", \"relative\" or an array of weights");
    return;
  }
  cfg.weights = WeightMode::Custom;
  cfg.custom_weights = n.vector();
  if ((cfg.custom_weights.array() < 0.0).any()) n.fail("weights must be nonnegative");
  if (!(cfg.custom_weights.array() > 0.0).any()) n.fail("weights must not all be zero");
}

void parse_trust_region(const Node& n, TrustRegionConfig& tr) {
  n.require_object({"eta1", "eta2", "gamma1", "gamma2", "growth", "initial_radius", "max_radius",
                    "min_radius", "max_iterations", "inner_tolerance", "inner_max_iterations"});
  auto num = [&](const char* key, double& field) {
    if (n.has(key)) field = n.at(key).number();
  };
  num("eta1", tr.eta1);
  num("eta2", tr.eta2);
  num("gamma1", tr.gamma1);
  num("gamma2", tr.gamma2);
  num("growth", tr.growth);
  num("initial_radius", tr.initial_radius);
  num("max_radius", tr.max_radius);
  num("min_radius", tr.min_radius);
  if (n.has("max_iterations")) tr.max_iterations = n.at("max_iterations").integer(1);
  if (n.has("inner_tolerance")) tr.inner.tolerance = n.at("inner_tolerance").positive();
  if (n.has("inner_max_iterations")) tr.inner.max_iterations = n.at("inner_max_iterations").integer(1);
  try {
    tr.validate();
  } catch (const InvalidArgument& e) {
    n.fail(e.what());
  }
}

}  // namespace

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::ReducedModel: return "RM";
    case Strategy::FiniteDifference: return "A";
    case Strategy::Analytic: return "AD";
  }
  return "?";
}

std::pair<double, double> default_bounds(const std::string& benchmark, bool modulus) {
  if (benchmark == "vault") return modulus ? std::pair{2000.0, 6000.0} : std::pair{1600.0, 2400.0};
  return modulus ? std::pair{1000.0, 9000.0} : std::pair{1000.0, 3000.0};
}

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const Node root(doc, "");
  root.require_object({"version", "benchmark", "materials", "measured", "start", "weights", "tolerances",
                       "trust_region", "strategy", "baseline", "seed", "output"});
  if (!root.has("version")) root.fail("missing 'version'");
  if (root.at("version").integer(0) != 1) root.at("version").fail("unsupported version (expected 1)");

  RunConfig cfg;
  if (root.has("benchmark")) parse_benchmark(root.at("benchmark"), cfg);
  if (root.has("materials")) {
    const Node ms = root.at("materials");
    if (!ms.raw().is_array()) ms.fail("expected an array");
    std::set<int> seen;
    for (std::size_t i = 0; i < ms.raw().size(); ++i) {
      const Node m(ms.raw()[i], ms.path() + "[" + std::to_string(i) + "]");
      cfg.materials.push_back(parse_material(m));
      if (!seen.insert(cfg.materials.back().region).second) m.fail("region listed twice");
    }
  }
  if (cfg.benchmark == "vault") cfg.count = 10;
  if (root.has("measured")) parse_measured(root.at("measured"), cfg);
  if (root.has("start")) {
    const Node s = root.at("start");
    if (!s.raw().is_object()) s.fail("expected an object of parameter values");
    for (auto it = s.raw().begin(); it != s.raw().end(); ++it) {
      cfg.start[it.key()] = Node(it.value(), "start." + it.key()).positive();
    }
  }
  if (root.has("weights")) parse_weights(root.at("weights"), cfg);
  if (cfg.weights == WeightMode::Custom && cfg.custom_weights.size() != cfg.count) {
    root.at("weights").fail("length differs from measured.count");
  }
  if (root.has("tolerances")) {
    const Node t = root.at("tolerances");
    t.require_object({"lanczos", "criticality"});
    if (t.has("lanczos")) cfg.lanczos_tolerance = t.at("lanczos").positive();
    if (t.has("criticality")) cfg.criticality_tolerance = t.at("criticality").positive();
  }
  if (root.has("trust_region")) parse_trust_region(root.at("trust_region"), cfg.trust_region);
  if (root.has("strategy")) {
    const Node s = root.at("strategy");
    const std::string v = s.string();
    if (v == "RM") cfg.strategy = Strategy::ReducedModel;
    else if (v == "A") cfg.strategy = Strategy::FiniteDifference;
    else if (v == "AD") cfg.strategy = Strategy::Analytic;
    else s.fail("expected \"RM\", \"A\" or \"AD\"");
  }
  if (root.has("baseline")) {
    const Node b = root.at("baseline");
    b.require_object({"fd_step", "max_iterations"});
    if (b.has("fd_step")) cfg.fd_step = b.at("fd_step").positive();
    if (b.has("max_iterations")) cfg.baseline_max_iterations = b.at("max_iterations").integer(1);
  }
  if (root.has("seed")) cfg.seed = root.at("seed").unsigned_integer();
  if (root.has("output")) {
    const Node o = root.at("output");
    o.require_object({"convergence_csv", "summary"});
    if (o.has("convergence_csv")) cfg.convergence_csv = o.at("convergence_csv").string();
    if (o.has("summary")) cfg.summary = o.at("summary").string();
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace modalfit
