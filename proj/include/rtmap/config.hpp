#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rtmap/skew.hpp"
#include "rtmap/surgery.hpp"

namespace rtmap {

enum class MapKind { kSingular, kSkew, kProduct };

struct BoxSpec {
  std::vector<double> center;
  std::vector<double> half_width;
};

// All run parameters. Defaults reproduce the reference instantiation:
// degree 2 on T^1 x T^1, U = (-0.02, 0.02), V = (0.05, 0.09), eps = 0.01.
struct RunConfig {
  MapKind map = MapKind::kSingular;

  int degree = 2;
  std::optional<int> power_override;

  BoxSpec U{{0.0}, {0.02}};
  BoxSpec V{{0.07}, {0.02}};
  double epsilon = 0.01;

  double beta = IfsPair::kDefaultBeta;
  double alpha = IfsPair::kDefaultAlpha;

  bool surgery_enabled = true;
  double r = 0.12;
  double theta = 0.03;
  double delta = 0.04;
  std::vector<double> s_chart;  // empty: (1/4, 0, ..., 0, 1/4)

  int grid_k = 64;
  int horizon = 40;
  int samples_per_cell = 25;
  int max_iters = 40;
  double tol = 1e-6;
  int coverage_grid_k = 100;
  double stable_radius = 0.05;
  int witness_boxes = 10;
  double critical_resolution = 0.005;
  int cantor_depth = 4;

  int trials = 20;
  double eta = 0.01;
  std::uint64_t seed = 1;
  int sweep_grid_k = 32;
  int bump_count = 6;

  int orbit_steps = 100;
  std::vector<double> orbit_start;  // empty: (0.3, ..., 0.3, 0.6)
};

// Objects built from a validated config.
struct System {
  std::shared_ptr<const ExpandingBase> base;
  IfsPair pair;
  std::shared_ptr<const SkewMap> skew;
  std::shared_ptr<const SingularMap> singular;  // null unless map == singular
  std::shared_ptr<const Endomorphism> map;      // the map the commands verify
};

// Throws ConfigError on parse errors and on violated constraints; the message
// names the violated inequality.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& yaml_text);

System build_system(const RunConfig& cfg);

}  // namespace rtmap
