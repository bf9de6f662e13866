#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "levyext/errors.hpp"

namespace levyext::app {

using nlohmann::json;

ConfigError::ConfigError(std::string key, const std::string& message, std::optional<int> line)
    : std::runtime_error([&] {
        std::string s;
        if (line) s += "line " + std::to_string(*line) + ": ";
        if (!key.empty()) s += "key '" + key + "': ";
        return s + message;
      }()),
      key_(std::move(key)),
      line_(line) {}

namespace {

// Line of a dotted key path in the source text, following each segment in turn.
std::optional<int> locate(const std::string& text, const std::string& path) {
  if (text.empty() || path.empty()) return std::nullopt;
  std::size_t pos = 0;
  std::size_t start = 0;
  bool found = false;
  while (start <= path.size()) {
    const std::size_t dot = path.find('.', start);
    std::string seg = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (auto br = seg.find('['); br != std::string::npos) seg = seg.substr(0, br);
    const std::size_t hit = text.find("\"" + seg + "\"", pos);
    if (hit == std::string::npos) break;
    pos = hit;
    found = true;
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (!found) return std::nullopt;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
}

class Reader {
 public:
  Reader(const json& node, std::string path, const std::string& text)
      : node_(node), path_(std::move(path)), text_(text) {
    if (!node_.is_object()) fail("", "expected an object");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    const std::string full = join(key);
    throw ConfigError(full, message, locate(text_, full));
  }

  std::string join(const std::string& key) const {
    if (key.empty()) return path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const {
    seen_.insert(key);
    return node_.contains(key) && !node_.at(key).is_null();
  }

  const json& at(const std::string& key) const {
    if (!has(key)) fail(key, "required key is missing");
    return node_.at(key);
  }

  double number(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }
  std::optional<double> optional_number(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return number(key);
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<std::int64_t>();
  }
  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_boolean()) fail(key, "expected true or false");
    return v.get<bool>();
  }
  std::string string(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
  }
  std::vector<double> numbers(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(key, "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  Reader child(const std::string& key) const { return Reader(at(key), join(key), text_); }
  const std::string& text() const { return text_; }

  /// Rejects keys that were never queried (typos would otherwise be ignored).
  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) fail(key, "unknown key");
    }
  }

 private:
  const json& node_;
  std::string path_;
  const std::string& text_;
  mutable std::set<std::string> seen_;
};

// Domain errors from core constructors are reported against the owning key.
template <class Fn>
auto guarded(const Reader& r, const std::string& key, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    r.fail(key, e.what());
  }
}

TailModel read_model(const Reader& r) {
  TailModel m;
  const std::string family = r.string("family", "pareto");
  guarded(r, "family", [&] {
    m.family = tail_family_from_string(family);
    return 0;
  });
  m.alpha = r.number("alpha");
  if (!(m.alpha > 0.0)) r.fail("alpha", "must be positive");
  m.scale = r.number("scale", 1.0);
  m.gamma = r.number("gamma", std::min(m.alpha / 2.0, 1.0));
  if (r.has("negative_part")) {
    const Reader n = r.child("negative_part");
    m.negative_part = NegativePart{n.number("mass"), n.number("gamma_moment_bound")};
    n.finish();
  }
  guarded(r, "", [&] {
    m.validate();
    return 0;
  });
  r.finish();
  return m;
}

Kernel read_kernel(const Reader& r, int dim) {
  const std::string family = r.string("family", "gaussian");
  const std::optional<double> truncation = r.optional_number("truncation");
  Kernel k = guarded(r, "", [&] {
    if (family == "gaussian") return Kernel::gaussian(r.number("sigma", 1.0), dim, truncation);
    if (family == "power") {
      return Kernel::power(r.number("epsilon", 1.0), r.number("gamma", 1.0), dim, truncation);
    }
    r.fail("family", "expected 'gaussian' or 'power'");
  });
  r.finish();
  return k;
}

PConvexSet read_index_set(const Reader& r) {
  const auto dim = static_cast<int>(r.integer("dim", 1));
  if (dim < 1 || dim > kMaxDim) r.fail("dim", "must be 1, 2 or 3");
  const json& bodies = r.at("bodies");
  if (!bodies.is_array() || bodies.empty()) r.fail("bodies", "expected a non-empty array");
  std::vector<ConvexBody> out;
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    const std::string key = "bodies[" + std::to_string(i) + "]";
    const Reader b(bodies[i], r.join(key), r.text());
    const std::string type = b.string("type");
    auto coords = [&](const std::string& name) {
      auto v = b.numbers(name);
      if (static_cast<int>(v.size()) != dim) b.fail(name, "expected " + std::to_string(dim) + " entries");
      return v;
    };
    out.push_back(guarded(b, "", [&] {
      if (type == "box") return ConvexBody::box(coords("corner"), coords("sides"));
      if (type == "cube") {
        std::vector<double> corner = b.has("corner") ? coords("corner") : std::vector<double>(dim, 0.0);
        const double side = b.number("side");
        return ConvexBody::box(corner, std::vector<double>(dim, side));
      }
      if (type == "ball") return ConvexBody::ball(coords("center"), b.number("radius"));
      if (type == "point") return ConvexBody::point(coords("at"));
      b.fail("type", "expected box, cube, ball or point");
    }));
    b.finish();
  }
  PConvexSet set = guarded(r, "bodies", [&] { return PConvexSet(dim, std::move(out)); });
  r.finish();
  return set;
}

SideFieldSpec read_side_fields(const Reader& r) {
  SideFieldSpec s;
  auto kind = [&](const Reader& c) {
    const std::string k = c.string("kind", "zero");
    if (k == "zero") return SideFieldSpec::Kind::Zero;
    if (k == "smoothed_noise") return SideFieldSpec::Kind::SmoothedNoise;
    c.fail("kind", "expected 'zero' or 'smoothed_noise'");
  };
  if (r.has("one")) {
    const Reader c = r.child("one");
    s.one = kind(c);
    s.one_bound = c.number("bound", s.one_bound);
    s.one_sigma = c.number("sigma", s.one_sigma);
    if (!(s.one_bound > 0.0)) c.fail("bound", "must be positive");
    if (!(s.one_sigma > 0.0)) c.fail("sigma", "must be positive");
    c.finish();
  }
  if (r.has("two")) {
    const Reader c = r.child("two");
    s.two = kind(c);
    s.two_spacing = c.number("spacing", s.two_spacing);
    s.two_sd = c.number("sd", s.two_sd);
    s.two_sigma = c.number("sigma", s.two_sigma);
    if (!(s.two_spacing > 0.0)) c.fail("spacing", "must be positive");
    if (!(s.two_sd >= 0.0)) c.fail("sd", "must be >= 0");
    if (!(s.two_sigma > 0.0)) c.fail("sigma", "must be positive");
    c.finish();
  }
  r.finish();
  return s;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto byte = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
    throw ConfigError("", std::string("syntax error: ") + e.what(), line);
  }
}

RunConfig build_config(json raw, const std::string& text, const Overrides& overrides) {
  if (overrides.seed) raw["seed"] = *overrides.seed;
  if (overrides.replicates) raw["replicates"] = *overrides.replicates;

  RunConfig rc;
  const Reader root(raw, "", text);
  ExperimentConfig& cfg = rc.experiment;

  const auto seed = root.integer("seed", 1);
  if (seed < 0) root.fail("seed", "must be >= 0");
  cfg.seed = static_cast<std::uint64_t>(seed);
  const auto reps = root.integer("replicates", 1000);
  if (reps < 100) root.fail("replicates", "must be at least 100");
  cfg.replicates = static_cast<std::uint64_t>(reps);

  cfg.model = read_model(root.child("model"));
  cfg.index_set = read_index_set(root.child("index_set"));
  static const json kEmpty = json::object();
  cfg.kernel = read_kernel(root.has("kernel") ? root.child("kernel") : Reader(kEmpty, "kernel", text),
                           cfg.index_set.dim());

  if (root.has("scalings")) cfg.scalings = root.numbers("scalings");
  if (root.has("x_grid")) cfg.x_grid = root.numbers("x_grid");
  if (root.has("exceedance_targets")) cfg.exceedance_targets = root.numbers("exceedance_targets");

  const std::string mode = root.string("mode", "field");
  if (mode == "field") {
    cfg.mode = SupremumMode::Field;
  } else if (mode == "poisson_max_oracle") {
    cfg.mode = SupremumMode::PoissonMaxOracle;
  } else {
    root.fail("mode", "expected 'field' or 'poisson_max_oracle'");
  }

  if (root.has("grid")) {
    const Reader g = root.child("grid");
    cfg.k = g.integer("k", cfg.k);
    cfg.L = g.integer("L", cfg.L);
    if (g.has("k_list")) {
      rc.geometry.k_list.clear();
      for (double v : g.numbers("k_list")) {
        if (!(v >= 1.0) || v != std::floor(v)) g.fail("k_list", "entries must be positive integers");
        rc.geometry.k_list.push_back(static_cast<std::int64_t>(v));
      }
    }
    rc.geometry.count_constant = g.number("count_constant", rc.geometry.count_constant);
    rc.geometry.dump_grid = g.boolean("dump", rc.geometry.dump_grid);
    g.finish();
  }
  if (root.has("side_fields")) cfg.side_fields = read_side_fields(root.child("side_fields"));
  if (root.has("tolerances")) {
    const Reader t = root.child("tolerances");
    auto& tol = cfg.tolerances;
    tol.confidence = t.number("confidence", tol.confidence);
    tol.significance = t.number("significance", tol.significance);
    tol.ks = t.number("ks", tol.ks);
    tol.oracle_z = t.number("oracle_z", tol.oracle_z);
    tol.frechet_abs = t.number("frechet_abs", tol.frechet_abs);
    t.finish();
  }
  if (root.has("simulation")) {
    const Reader s = root.child("simulation");
    auto& sim = cfg.simulation;
    sim.neglect_budget = s.number("neglect_budget", sim.neglect_budget);
    sim.miss_probability = s.number("miss_probability", sim.miss_probability);
    sim.margin = s.optional_number("margin");
    sim.grid_step = s.optional_number("grid_step");
    sim.light = s.boolean("light", sim.light);
    sim.light_delta = s.optional_number("light_delta");
    sim.light_bias_fraction = s.number("light_bias_fraction", sim.light_bias_fraction);
    sim.prune_level = s.number("prune_level", sim.prune_level);
    if (!(sim.neglect_budget > 0.0)) s.fail("neglect_budget", "must be positive");
    if (!(sim.miss_probability > 0.0 && sim.miss_probability < 1.0)) {
      s.fail("miss_probability", "must lie in (0, 1)");
    }
    if (!(sim.prune_level > 0.0 && sim.prune_level < 1.0)) s.fail("prune_level", "must lie in (0, 1)");
    if (!(sim.light_bias_fraction > 0.0)) s.fail("light_bias_fraction", "must be positive");
    s.finish();
  }
  if (root.has("anticluster")) {
    const Reader a = root.child("anticluster");
    auto& ac = cfg.anticluster;
    ac.L = a.integer("L", ac.L);
    ac.block = a.integer("block", ac.block);
    ac.level = a.number("level", ac.level);
    if (a.has("distant_gap")) ac.distant_gap = a.integer("distant_gap", 2);
    if (ac.L < 1) a.fail("L", "must be positive");
    if (ac.block < 2) a.fail("block", "must be at least 2");
    a.finish();
  }
  if (root.has("ergodic")) {
    const Reader e = root.child("ergodic");
    if (e.has("blocks")) {
      cfg.ergodic.blocks.clear();
      for (double v : e.numbers("blocks")) {
        if (!(v >= 1.0) || v != std::floor(v)) e.fail("blocks", "entries must be positive integers");
        cfg.ergodic.blocks.push_back(static_cast<std::int64_t>(v));
      }
    }
    cfg.ergodic.indicator_level = e.number("indicator_level", cfg.ergodic.indicator_level);
    e.finish();
  }
  if (root.has("run")) {
    const Reader r = root.child("run");
    rc.perturbed = r.boolean("perturbed", false);
    rc.anticluster = r.boolean("anticluster", false);
    rc.ergodic = r.boolean("ergodic", false);
    r.finish();
  }
  root.string("description", "");
  root.finish();

  rc.raw = std::move(raw);
  if (!overrides.cross_checks) return rc;
  // Cross-field constraints owned by the core config.
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    const std::string msg = e.what();
    std::string key;
    const std::pair<const char*, const char*> owners[] = {
        {"x_grid", "x_grid"},
        {"replicates", "replicates"},
        {"exceedance", "exceedance_targets"},
        {"scalings", "scalings"},
        {"light", "simulation.light"},
        {"grid_step", "simulation.grid_step"},
        {"margin", "simulation.margin"},
        {"confidence", "tolerances"},
        {"tolerances", "tolerances"},
        {"diverges", "kernel"},
        {"dimension", "kernel"},
        {"k and L", "grid"},
        {"gamma", "model.gamma"},
        {"alpha", "model.alpha"},
    };
    for (const auto& [needle, path] : owners) {
      if (msg.find(needle) != std::string::npos) {
        key = path;
        break;
      }
    }
    throw ConfigError(key, msg, locate(text, key));
  }
  return rc;
}

std::optional<int> locate_key(const std::string& text, const std::string& path) {
  return locate(text, path);
}

RunConfig load_config(const std::string& path, const Overrides& overrides) {
  const std::string text = read_file(path);
  return build_config(parse_json(text), text, overrides);
}

}  // namespace levyext::app
