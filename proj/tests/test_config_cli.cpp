#include <gtest/gtest.h>
#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "rtmap/config.hpp"
#include "rtmap/errors.hpp"
#include "rtmap/runner.hpp"

using namespace rtmap;
namespace fs = std::filesystem;

namespace {

std::string message_of(const std::string& yaml) {
  try {
    parse_config(yaml);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rtmap_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RTMAP_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, EmptyFileGivesDefaults) {
  const RunConfig cfg = parse_config("");
  const RunConfig def;
  EXPECT_EQ(cfg.degree, 2);
  EXPECT_EQ(cfg.epsilon, def.epsilon);
  EXPECT_EQ(cfg.U.center, def.U.center);
  EXPECT_EQ(cfg.delta, 0.04);
  EXPECT_EQ(cfg.theta, 0.03);
  EXPECT_EQ(cfg.r, 0.12);
  EXPECT_EQ(cfg.map, MapKind::kSingular);
  const System sys = build_system(cfg);
  EXPECT_EQ(sys.base->power(), 5);
  EXPECT_NE(sys.singular, nullptr);
}

TEST(Config, ReadsSections) {
  const RunConfig cfg = parse_config(R"(
map: skew
base: {degree: 3}
blending:
  U: {center: [0.0], half_width: [0.03]}
  V: {center: [0.5], half_width: [0.05]}
  epsilon: 0.02
ifs: {beta: 0.05, alpha: 0.3}
verification: {grid_k: 8, horizon: 12}
sweep: {trials: 3, eta: 0.005, seed: 42}
)");
  EXPECT_EQ(cfg.map, MapKind::kSkew);
  EXPECT_EQ(cfg.degree, 3);
  EXPECT_EQ(cfg.V.center[0], 0.5);
  EXPECT_EQ(cfg.epsilon, 0.02);
  EXPECT_EQ(cfg.beta, 0.05);
  EXPECT_EQ(cfg.grid_k, 8);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.trials, 3);
}

TEST(Config, NamesViolatedInequality) {
  EXPECT_NE(message_of("surgery: {delta: 0.08, theta: 0.03}").find("0<δ<2θ"), std::string::npos);
  EXPECT_NE(message_of("blending: {V: {center: [0.04], half_width: [0.02]}}").find("U_ε ∩ V_ε = ∅"),
            std::string::npos);
}

TEST(Config, RejectsBadInput) {
  EXPECT_FALSE(message_of("base: [1,").empty());
  EXPECT_FALSE(message_of("bogus: 1").empty());
  EXPECT_FALSE(message_of("map: torus").empty());
  EXPECT_FALSE(message_of("base: {degree: 1}").empty());
  EXPECT_FALSE(message_of("verification: {grid_k: 0}").empty());
  EXPECT_FALSE(message_of("sweep: {eta: 0.9}").empty());
  EXPECT_THROW(load_config("/nonexistent/rtmap.yaml"), ConfigError);
}

TEST(Runner, PgmEncoding) {
  const std::string pgm = encode_pgm(2, 2, {0, 64, 128, 255});
  EXPECT_EQ(pgm.substr(0, 11), "P5\n2 2\n255\n");
  EXPECT_EQ(pgm.size(), 15u);
  EXPECT_EQ(static_cast<unsigned char>(pgm.back()), 255);
  EXPECT_THROW(encode_pgm(3, 2, {0}), std::invalid_argument);
}

TEST(Runner, Sha256) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Runner, Controls) {
  RunConfig product;
  product.map = MapKind::kProduct;
  product.grid_k = 16;
  product.samples_per_cell = 5;
  ArtifactSet a;
  std::string log;
  EXPECT_EQ(run_command("transitivity", product, a, log), kExitFail);

  RunConfig skew;
  skew.surgery_enabled = false;
  ArtifactSet b;
  EXPECT_EQ(run_command("critical-set", skew, b, log), kExitFail);
  EXPECT_NE(log.find("empty critical set"), std::string::npos);
  EXPECT_NE(b.files().at("report.json").find("empty critical set"), std::string::npos);
  EXPECT_EQ(b.files().at("critical_set.csv"), "x,y,det_residual\n");

  ArtifactSet c;
  EXPECT_EQ(run_command("frobnicate", RunConfig{}, c, log), kExitUsage);
}

TEST(Runner, CsvHeaders) {
  RunConfig cfg;
  cfg.trials = 2;
  cfg.sweep_grid_k = 8;
  cfg.orbit_steps = 5;
  cfg.max_iters = 20;
  std::string log;
  auto first_line = [](const std::string& s) { return s.substr(0, s.find('\n')); };
  ArtifactSet a;
  ASSERT_EQ(run_command("orbit", cfg, a, log), kExitPass);
  EXPECT_EQ(first_line(a.files().at("orbit.csv")), "step,x0,y");
  ASSERT_EQ(run_command("critical-set", cfg, a, log), kExitPass);
  EXPECT_EQ(first_line(a.files().at("critical_set.csv")), "x,y,det_residual");
  ASSERT_EQ(run_command("perturb-sweep", cfg, a, log), kExitPass);
  EXPECT_EQ(first_line(a.files().at("sweep.csv")), "trial,seed,singular_pass,transitive_pass");
  run_command("unstable-coverage", cfg, a, log);
  EXPECT_EQ(first_line(a.files().at("coverage.csv")), "iterate,fraction");
}

TEST(Cli, ExitCodesAndManifest) {
  const fs::path dir = scratch("cli");
  const auto empty = write_file(dir / "empty.yaml", "");
  const auto bad = write_file(dir / "bad.yaml", "surgery: {delta: 0.08}\n");
  const auto broken = write_file(dir / "broken.yaml", "base: [1,\n");
  const auto product = write_file(dir / "product.yaml", "map: product\nverification: {grid_k: 16, samples_per_cell: 5}\n");

  EXPECT_EQ(run_cli("build --config " + bad.string()), 2);
  EXPECT_EQ(run_cli("build --config " + broken.string()), 2);
  EXPECT_EQ(run_cli("nonsense --config " + empty.string()), 2);
  EXPECT_EQ(run_cli("build"), 2);
  EXPECT_EQ(run_cli("transitivity --config " + product.string() + " --out " + (dir / "p").string()), 1);
  EXPECT_EQ(run_cli("cantor --config " + empty.string() + " --seed 9 --out " + (dir / "c").string()), 0);

  const auto manifest = nlohmann::json::parse(slurp(dir / "c" / "manifest.json"));
  std::set<std::string> listed;
  for (const auto& f : manifest["files"]) {
    listed.insert(f["file"].get<std::string>());
    EXPECT_EQ(f["sha256"].get<std::string>(), sha256_hex(slurp(dir / "c" / f["file"].get<std::string>())));
  }
  for (const auto& entry : fs::directory_iterator(dir / "c"))
    if (entry.path().filename() != "manifest.json") EXPECT_TRUE(listed.count(entry.path().filename().string()));
  EXPECT_TRUE(listed.count("cantor.csv"));
}

TEST(Cli, RerunsAreByteIdentical) {
  const fs::path dir = scratch("rerun");
  const auto cfg = write_file(dir / "cfg.yaml", "verification: {grid_k: 16, samples_per_cell: 10, coverage_grid_k: 50}\n"
                                                "sweep: {trials: 3, grid_k: 16}\n");
  ASSERT_EQ(run_cli("all --config " + cfg.string() + " --seed 5 --out " + (dir / "a").string()), 0);
  ASSERT_EQ(run_cli("all --config " + cfg.string() + " --seed 5 --out " + (dir / "b").string()), 0);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    ++files;
    EXPECT_EQ(slurp(entry.path()), slurp(dir / "b" / entry.path().filename())) << entry.path();
  }
  EXPECT_GE(files, 10u);
}
