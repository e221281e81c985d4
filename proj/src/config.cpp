#include "rtmap/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rtmap/errors.hpp"

namespace rtmap {

namespace {

void check_keys(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigError("config: section '" + where + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("config: unknown key '" + key + "' in '" + where + "'");
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& out, const std::string& where) {
  const auto v = node[key];
  if (!v || v.IsNull()) return;
  try {
    out = v.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("config: bad value for '" + where + "." + key + "'");
  }
}

std::vector<double> read_coords(const YAML::Node& v, const std::string& where) {
  try {
    if (v.IsScalar()) return {v.as<double>()};
    return v.as<std::vector<double>>();
  } catch (const YAML::Exception&) {
    throw ConfigError("config: bad coordinate list for '" + where + "'");
  }
}

void read_box(const YAML::Node& node, const char* key, BoxSpec& out, const std::string& where) {
  const auto v = node[key];
  if (!v || v.IsNull()) return;
  const std::string name = where + "." + key;
  check_keys(v, name, {"center", "half_width"});
  if (v["center"]) out.center = read_coords(v["center"], name + ".center");
  if (v["half_width"]) out.half_width = read_coords(v["half_width"], name + ".half_width");
  if (out.half_width.size() == 1 && out.center.size() > 1)
    out.half_width.assign(out.center.size(), out.half_width[0]);
}

Box make_box(const BoxSpec& spec, const char* name) {
  if (spec.center.empty() || spec.center.size() != spec.half_width.size())
    throw ConfigError(std::string("config: ") + name + " center and half_width must have equal, nonzero length");
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < spec.center.size(); ++i) arcs.emplace_back(spec.center[i], spec.half_width[i]);
  return Box(std::move(arcs));
}

void positive_int(int v, const char* name) {
  if (v <= 0) throw ConfigError(std::string("config: ") + name + " must be positive");
}

}  // namespace

RunConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  RunConfig cfg;
  if (root.IsNull()) {
    build_system(cfg);
    return cfg;
  }
  check_keys(root, "<root>", {"map", "base", "blending", "ifs", "surgery", "verification", "sweep", "orbit"});

  if (auto m = root["map"]; m && !m.IsNull()) {
    const auto kind = m.as<std::string>();
    if (kind == "singular") cfg.map = MapKind::kSingular;
    else if (kind == "skew") cfg.map = MapKind::kSkew;
    else if (kind == "product") cfg.map = MapKind::kProduct;
    else throw ConfigError("config: map must be one of singular, skew, product");
  }
  if (auto b = root["base"]; b && !b.IsNull()) {
    check_keys(b, "base", {"degree", "N_override"});
    read(b, "degree", cfg.degree, "base");
    if (auto n = b["N_override"]; n && !n.IsNull()) {
      int v = 0;
      read(b, "N_override", v, "base");
      cfg.power_override = v;
    }
  }
  if (auto b = root["blending"]; b && !b.IsNull()) {
    check_keys(b, "blending", {"U", "V", "epsilon"});
    read_box(b, "U", cfg.U, "blending");
    read_box(b, "V", cfg.V, "blending");
    read(b, "epsilon", cfg.epsilon, "blending");
  }
  if (auto b = root["ifs"]; b && !b.IsNull()) {
    check_keys(b, "ifs", {"beta", "alpha"});
    read(b, "beta", cfg.beta, "ifs");
    read(b, "alpha", cfg.alpha, "ifs");
  }
  if (auto b = root["surgery"]; b && !b.IsNull()) {
    check_keys(b, "surgery", {"enabled", "r", "theta", "delta", "s_chart_coords"});
    read(b, "enabled", cfg.surgery_enabled, "surgery");
    read(b, "r", cfg.r, "surgery");
    read(b, "theta", cfg.theta, "surgery");
    read(b, "delta", cfg.delta, "surgery");
    if (auto s = b["s_chart_coords"]; s && !s.IsNull()) cfg.s_chart = read_coords(s, "surgery.s_chart_coords");
  }
  if (auto b = root["verification"]; b && !b.IsNull()) {
    check_keys(b, "verification",
               {"grid_k", "horizon", "samples_per_cell", "max_iters", "tol", "coverage_grid_k", "stable_radius",
                "witness_boxes", "critical_resolution", "cantor_depth"});
    read(b, "grid_k", cfg.grid_k, "verification");
    read(b, "horizon", cfg.horizon, "verification");
    read(b, "samples_per_cell", cfg.samples_per_cell, "verification");
    read(b, "max_iters", cfg.max_iters, "verification");
    read(b, "tol", cfg.tol, "verification");
    read(b, "coverage_grid_k", cfg.coverage_grid_k, "verification");
    read(b, "stable_radius", cfg.stable_radius, "verification");
    read(b, "witness_boxes", cfg.witness_boxes, "verification");
    read(b, "critical_resolution", cfg.critical_resolution, "verification");
    read(b, "cantor_depth", cfg.cantor_depth, "verification");
  }
  if (auto b = root["sweep"]; b && !b.IsNull()) {
    check_keys(b, "sweep", {"trials", "eta", "seed", "grid_k", "bump_count"});
    read(b, "trials", cfg.trials, "sweep");
    read(b, "eta", cfg.eta, "sweep");
    read(b, "seed", cfg.seed, "sweep");
    read(b, "grid_k", cfg.sweep_grid_k, "sweep");
    read(b, "bump_count", cfg.bump_count, "sweep");
  }
  if (auto b = root["orbit"]; b && !b.IsNull()) {
    check_keys(b, "orbit", {"steps", "start"});
    read(b, "steps", cfg.orbit_steps, "orbit");
    if (auto s = b["start"]; s && !s.IsNull()) cfg.orbit_start = read_coords(s, "orbit.start");
  }

  build_system(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

System build_system(const RunConfig& cfg) {
  positive_int(cfg.grid_k, "verification.grid_k");
  positive_int(cfg.horizon, "verification.horizon");
  positive_int(cfg.samples_per_cell, "verification.samples_per_cell");
  positive_int(cfg.max_iters, "verification.max_iters");
  positive_int(cfg.coverage_grid_k, "verification.coverage_grid_k");
  positive_int(cfg.witness_boxes, "verification.witness_boxes");
  positive_int(cfg.sweep_grid_k, "sweep.grid_k");
  positive_int(cfg.bump_count, "sweep.bump_count");
  positive_int(cfg.trials, "sweep.trials");
  if (cfg.orbit_steps < 0) throw ConfigError("config: orbit.steps must be nonnegative");
  if (cfg.cantor_depth < 0 || cfg.cantor_depth > 12) throw ConfigError("config: verification.cantor_depth must lie in [0, 12]");
  if (!(cfg.tol > 0.0)) throw ConfigError("config: verification.tol must be positive");
  if (!(cfg.stable_radius > 0.0 && cfg.stable_radius < 0.5))
    throw ConfigError("config: verification.stable_radius must lie in (0, 1/2)");
  if (!(cfg.critical_resolution > 0.0)) throw ConfigError("config: verification.critical_resolution must be positive");
  if (!(cfg.eta >= 0.0 && cfg.eta < 0.5)) throw ConfigError("config: sweep.eta must lie in [0, 1/2)");

  const Box U = make_box(cfg.U, "blending.U");
  const Box V = make_box(cfg.V, "blending.V");
  auto base = build_expanding(cfg.degree, U, V, cfg.epsilon, cfg.power_override);
  const std::size_t m1 = base.dim();
  if (!cfg.orbit_start.empty() && cfg.orbit_start.size() != m1 + 1)
    throw ConfigError("config: orbit.start must have base dimension + 1 coordinates");

  System sys{std::make_shared<const ExpandingBase>(base), IfsPair(cfg.beta, cfg.alpha), nullptr, nullptr, nullptr};
  sys.skew = std::make_shared<const SkewMap>(base, sys.pair);
  switch (cfg.map) {
    case MapKind::kProduct:
      sys.map = std::make_shared<const ProductMap>(base);
      break;
    case MapKind::kSkew:
      sys.map = sys.skew;
      break;
    case MapKind::kSingular:
      if (!cfg.surgery_enabled) {
        sys.map = sys.skew;
        break;
      }
      sys.singular = std::make_shared<const SingularMap>(
          *sys.skew, SurgeryParams{cfg.r, cfg.theta, cfg.delta, cfg.s_chart});
      sys.map = sys.singular;
      break;
  }
  return sys;
}

}  // namespace rtmap
