#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "rtmap/config.hpp"
#include "rtmap/errors.hpp"
#include "rtmap/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"rtmap: robustly transitive singular endomorphisms of the torus"};
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "rtmap_out";

  std::string names;
  for (const auto& c : rtmap::commands()) names += (names.empty() ? "" : ", ") + c;
  app.add_option("command", command, "one of: " + names)->required();
  app.add_option("--config", config_path, "YAML run configuration")->required();
  app.add_option("--seed", seed, "overrides sweep.seed");
  app.add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return rtmap::kExitUsage;
  }

  bool known = false;
  for (const auto& c : rtmap::commands()) known = known || c == command;
  if (!known) {
    std::cerr << "unknown command '" << command << "'\n" << app.help();
    return rtmap::kExitUsage;
  }

  rtmap::RunConfig cfg;
  try {
    cfg = rtmap::load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return rtmap::kExitUsage;
  }
  if (seed) cfg.seed = *seed;

  try {
    return rtmap::dispatch(command, cfg, out_dir);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return rtmap::kExitUsage;
  }
}
