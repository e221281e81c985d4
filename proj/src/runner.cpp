#include "rtmap/runner.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "rtmap/errors.hpp"
#include "rtmap/rng.hpp"
#include "rtmap/verification.hpp"

namespace rtmap {

namespace {

using Json = nlohmann::ordered_json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) { row(header); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

// Heatmap of a grid_k x grid_k array indexed [row * k + col] with row = fiber
// cell; the image puts the top fiber row first.
std::string heatmap(int k, const std::vector<double>& values) {
  double hi = 0.0;
  for (double v : values) hi = std::max(hi, v);
  std::vector<unsigned char> px(values.size());
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) {
      const double v = values[static_cast<std::size_t>(r) * k + c];
      const double t = hi > 0.0 ? v / hi : 0.0;
      px[static_cast<std::size_t>(k - 1 - r) * k + c] = static_cast<unsigned char>(std::lround(255.0 * t));
    }
  return encode_pgm(k, k, px);
}

std::string word_string(const SemigroupWord& w) {
  std::string s;
  for (auto l : w.letters) s += static_cast<char>('0' + l);
  return s.empty() ? "-" : s;
}

const char* kind_name(MapKind k) {
  switch (k) {
    case MapKind::kSingular: return "singular";
    case MapKind::kSkew: return "skew";
    case MapKind::kProduct: return "product";
  }
  return "?";
}

TorusPoint default_s(std::size_t m1) {
  TorusPoint s(m1 + 1);
  s.set(0, 0.25);
  s.set(m1, 0.25);
  return s;
}

struct Context {
  const RunConfig& cfg;
  const System& sys;
  ArtifactSet& artifacts;
  Json& report;
  std::ostream& log;
};

using Command = int (*)(Context&);

int cmd_build(Context& c) {
  const auto& b = *c.sys.base;
  Json j;
  j["map"] = kind_name(c.cfg.map);
  j["base_dim"] = b.dim();
  j["degree"] = b.degree();
  j["N"] = b.power();
  j["factor"] = b.factor();
  j["det_F"] = b.jacobian_det();
  j["epsilon"] = b.epsilon();
  j["alpha"] = c.sys.pair.alpha();
  j["beta"] = c.sys.pair.beta();
  j["surgery"] = c.sys.singular != nullptr;
  if (c.sys.singular) {
    const auto& A = *c.sys.singular;
    j["q1"] = A.q1();
    j["q2"] = A.q2();
    TorusPoint q1 = A.s(), q2 = A.s();
    q1.set(b.dim(), A.q1());
    q2.set(b.dim(), A.q2());
    j["det_at_q1"] = A.det(q1);
    j["det_at_q2"] = A.det(q2);
    j["det_at_s"] = A.det(A.s());
  }
  j["status"] = "pass";
  c.report["build"] = j;
  c.log << "build: N=" << b.power() << " factor=" << b.factor() << "\n";
  return kExitPass;
}

int cmd_orbit(Context& c) {
  const std::size_t m1 = c.sys.base->dim();
  TorusPoint pt(m1 + 1);
  if (c.cfg.orbit_start.empty()) {
    for (std::size_t i = 0; i < m1; ++i) pt.set(i, 0.3);
    pt.set(m1, 0.6);
  } else {
    pt = TorusPoint(std::span<const double>(c.cfg.orbit_start));
  }
  std::vector<std::string> header{"step"};
  for (std::size_t i = 0; i < m1; ++i) header.push_back("x" + std::to_string(i));
  header.push_back("y");
  Csv csv(header);
  bool finite = true;
  for (int step = 0; step <= c.cfg.orbit_steps; ++step) {
    std::vector<std::string> row{std::to_string(step)};
    for (std::size_t i = 0; i <= m1; ++i) {
      row.push_back(num(pt[i]));
      finite = finite && std::isfinite(pt[i]);
    }
    csv.row(row);
    if (step < c.cfg.orbit_steps) pt = c.sys.map->eval(pt);
  }
  c.artifacts.add("orbit.csv", csv.str());
  c.report["orbit"] = Json{{"steps", c.cfg.orbit_steps}, {"status", finite ? "pass" : "fail"}};
  return finite ? kExitPass : kExitFail;
}

int cmd_fixed_points(Context& c) {
  const auto reports = classify_fixed_points(*c.sys.map, c.sys.pair);
  const std::size_t m1 = c.sys.base->dim();
  std::vector<std::string> header{"label"};
  for (std::size_t i = 0; i < m1; ++i) header.push_back("x" + std::to_string(i));
  header.push_back("y");
  for (std::size_t i = 0; i <= m1; ++i) {
    header.push_back("eig" + std::to_string(i) + "_re");
    header.push_back("eig" + std::to_string(i) + "_im");
  }
  header.insert(header.end(), {"classification", "fixed", "residual"});
  Csv csv(header);
  Json list = Json::array();
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& r = reports[k];
    const std::string label = k == 0 ? "p_a1" : k == 1 ? "p_r1" : "extra" + std::to_string(k - 1);
    std::vector<std::string> row{label};
    for (std::size_t i = 0; i <= m1; ++i) row.push_back(num(r.point[i]));
    for (const auto& e : r.eigenvalues) {
      row.push_back(num(e.real()));
      row.push_back(num(e.imag()));
    }
    row.insert(row.end(), {to_string(r.classification), r.fixed ? "1" : "0", num(r.residual)});
    csv.row(row);
    list.push_back(Json{{"label", label}, {"classification", to_string(r.classification)}, {"fixed", r.fixed}});
  }
  const bool pass = reports.size() >= 2 && reports[0].fixed && reports[1].fixed &&
                    reports[0].classification == FixedPointType::kSaddle &&
                    reports[1].classification == FixedPointType::kSource;
  c.artifacts.add("fixed_points.csv", csv.str());
  c.report["fixed-points"] = Json{{"points", list}, {"status", pass ? "pass" : "fail"}};
  return pass ? kExitPass : kExitFail;
}

int cmd_unstable_coverage(Context& c) {
  const int k = c.cfg.coverage_grid_k;
  const auto rep = unstable_coverage(*c.sys.map, *c.sys.base, c.sys.pair.a1(), k, c.cfg.max_iters);
  const auto oracle = orbit_row_fractions(c.sys.pair, c.sys.pair.a1(), k, c.cfg.max_iters);
  Csv csv({"iterate", "fraction"});
  Csv ocsv({"iterate", "fraction"});
  bool dominates = true;
  for (std::size_t i = 0; i < rep.fractions.size(); ++i) {
    csv.row({std::to_string(i + 1), num(rep.fractions[i])});
    ocsv.row({std::to_string(i + 1), num(oracle[i])});
    dominates = dominates && rep.fractions[i] >= oracle[i];
  }
  const double final_fraction = rep.fractions.empty() ? 0.0 : rep.fractions.back();
  std::vector<double> hits(rep.hits.begin(), rep.hits.end());
  for (auto& h : hits) h = std::log1p(h);
  c.artifacts.add("coverage.csv", csv.str());
  c.artifacts.add("coverage_oracle.csv", ocsv.str());
  c.artifacts.add("coverage.pgm", heatmap(k, hits));
  const bool pass = final_fraction >= 0.99 && dominates;
  c.report["unstable-coverage"] = Json{{"grid_k", k},
                                       {"iterates", c.cfg.max_iters},
                                       {"final_fraction", final_fraction},
                                       {"dominates_oracle", dominates},
                                       {"curves", rep.curves},
                                       {"status", pass ? "pass" : "fail"}};
  c.log << "unstable-coverage: final " << final_fraction << (dominates ? "" : " (oracle not dominated)") << "\n";
  return pass ? kExitPass : kExitFail;
}

int cmd_stable_witness(Context& c) {
  Rng rng(mix_seed(c.cfg.seed, 0x57ab1e));
  StableWitnessOptions opts;
  opts.ball_radius = c.cfg.stable_radius;
  opts.tol = c.cfg.tol;
  Csv csv({"box", "x_center", "x_half_width", "y_center", "y_half_width", "x", "y", "m", "n", "word",
           "landing_error"});
  int passed = 0;
  for (int b = 0; b < c.cfg.witness_boxes; ++b) {
    const Box W(std::vector<Arc>{Arc(rng.uniform(), rng.uniform(0.01, 0.05)),
                                 Arc(rng.uniform(), rng.uniform(0.01, 0.05))});
    std::vector<std::string> row{std::to_string(b), num(W.arc(0).center()), num(W.arc(0).half_width()),
                                 num(W.arc(1).center()), num(W.arc(1).half_width())};
    try {
      const auto w = stable_witness(*c.sys.map, *c.sys.base, c.sys.pair, W, opts);
      row.insert(row.end(), {num(w.point[0]), num(w.point[1]), std::to_string(w.m), std::to_string(w.n),
                             word_string(w.word), num(w.landing_error)});
      ++passed;
    } catch (const PrecisionError& e) {
      row.insert(row.end(), {"", "", "", "", "", "nan"});
      c.log << "stable-witness: box " << b << ": " << e.what() << "\n";
    } catch (const SearchExhausted& e) {
      row.insert(row.end(), {"", "", "", "", "", "nan"});
      c.log << "stable-witness: box " << b << ": " << e.what() << "\n";
    }
    csv.row(row);
  }
  c.artifacts.add("stable_witness.csv", csv.str());
  const bool pass = passed == c.cfg.witness_boxes;
  c.report["stable-witness"] =
      Json{{"boxes", c.cfg.witness_boxes}, {"witnessed", passed}, {"tol", c.cfg.tol}, {"status", pass ? "pass" : "fail"}};
  return pass ? kExitPass : kExitFail;
}

Json transitivity_json(const TransitivityReport& rep) {
  return Json{{"strongly_connected", rep.strongly_connected},
              {"graph_strongly_connected", rep.graph_strongly_connected},
              {"diameter", rep.diameter},
              {"cells", rep.cells},
              {"edges", rep.edges},
              {"note", rep.note}};
}

int cmd_transitivity(Context& c) {
  ReachabilityGrid grid;
  const auto rep = box_transitivity(*c.sys.map, c.cfg.grid_k, c.cfg.horizon, c.cfg.samples_per_cell,
                                    mix_seed(c.cfg.seed, 0x7a4a), &grid);
  std::vector<double> out_degree(grid.cell_count(), 0.0);
  for (const auto& e : grid.edges) out_degree[e.from] += 1.0;
  Csv csv({"cell", "out_degree"});
  for (std::size_t i = 0; i < out_degree.size(); ++i) csv.row({std::to_string(i), num(out_degree[i])});
  c.artifacts.add("transitivity.csv", csv.str());
  if (grid.dim == 2) {
    // cell index is x-major; transpose so rows are fiber cells
    const int k = grid.grid_k;
    std::vector<double> img(out_degree.size());
    for (int x = 0; x < k; ++x)
      for (int y = 0; y < k; ++y)
        img[static_cast<std::size_t>(y) * k + x] = out_degree[static_cast<std::size_t>(x) * k + y];
    c.artifacts.add("transitivity.pgm", heatmap(k, img));
  }
  Json j = transitivity_json(rep);
  j["grid_k"] = c.cfg.grid_k;
  j["horizon"] = c.cfg.horizon;
  j["status"] = rep.strongly_connected ? "pass" : "fail";
  c.report["transitivity"] = j;
  c.log << "transitivity: " << rep.note << "\n";
  return rep.strongly_connected ? kExitPass : kExitFail;
}

int cmd_critical_set(Context& c) {
  const std::size_t m1 = c.sys.base->dim();
  CriticalTrace trace;
  if (c.sys.singular) {
    trace = critical_trace(*c.sys.singular, c.cfg.critical_resolution);
  } else {
    trace = critical_trace(*c.sys.map, default_s(m1), c.cfg.r, c.sys.base->jacobian_det(), c.cfg.critical_resolution);
  }
  std::vector<std::string> header;
  if (m1 == 1) {
    header = {"x", "y"};
  } else {
    for (std::size_t i = 0; i < m1; ++i) header.push_back("x" + std::to_string(i));
    header.push_back("y");
  }
  header.push_back("det_residual");
  Csv csv(header);
  for (std::size_t i = 0; i < trace.points.size(); ++i) {
    std::vector<std::string> row;
    for (std::size_t d = 0; d <= m1; ++d) row.push_back(num(trace.points[i][d]));
    row.push_back(num(trace.residuals[i]));
    csv.row(row);
  }
  c.artifacts.add("critical_set.csv", csv.str());
  if (m1 == 1) {
    // signed determinant around s, 128 is zero
    const int k = 128;
    const TorusPoint s = c.sys.singular ? c.sys.singular->s() : default_s(1);
    std::vector<double> det(static_cast<std::size_t>(k) * k);
    double hi = 0.0;
    for (int r = 0; r < k; ++r)
      for (int q = 0; q < k; ++q) {
        const TorusPoint pt{s[0] + c.cfg.r * (2.0 * (q + 0.5) / k - 1.0), s[1] + c.cfg.r * (2.0 * (r + 0.5) / k - 1.0)};
        const double v = c.sys.map->jacobian_det(pt);
        det[static_cast<std::size_t>(r) * k + q] = v;
        hi = std::max(hi, std::abs(v));
      }
    for (auto& v : det) v = hi > 0.0 ? 0.5 + 0.5 * v / hi : 0.5;
    c.artifacts.add("det_heatmap.pgm", heatmap(k, det));
  }
  const bool pass = !trace.points.empty();
  Json j{{"points", trace.points.size()}, {"resolution", trace.resolution}, {"status", pass ? "pass" : "fail"}};
  if (!pass) j["note"] = "empty critical set";
  c.report["critical-set"] = j;
  c.log << "critical-set: " << (pass ? std::to_string(trace.points.size()) + " points" : "empty critical set") << "\n";
  return pass ? kExitPass : kExitFail;
}

int cmd_cantor(Context& c) {
  const auto& b = *c.sys.base;
  const std::size_t m1 = b.dim();
  Csv summary({"depth", "components", "max_width", "min_width", "required"});
  std::vector<std::string> header{"depth", "component"};
  for (std::size_t i = 0; i < m1; ++i) {
    header.push_back("center" + std::to_string(i));
    header.push_back("half_width" + std::to_string(i));
  }
  Csv comps(header);
  bool pass = true;
  double prev_max = 0.0;
  Json depths = Json::array();
  for (int n = 0; n <= c.cfg.cantor_depth; ++n) {
    const auto approx = cantor_components(b, n);
    double wmax = 0.0, wmin = 1.0;
    for (std::size_t i = 0; i < approx.components.size(); ++i) {
      const auto& box = approx.components[i];
      std::vector<std::string> row{std::to_string(n), std::to_string(i)};
      double w = 0.0;
      for (std::size_t d = 0; d < m1; ++d) {
        row.push_back(num(box.arc(d).center()));
        row.push_back(num(box.arc(d).half_width()));
        w = std::max(w, box.arc(d).width());
      }
      comps.row(row);
      wmax = std::max(wmax, w);
      wmin = std::min(wmin, w);
    }
    const double required = std::ldexp(1.0, n + 1);
    const bool count_ok = static_cast<double>(approx.components.size()) >= required;
    const bool contract_ok = n == 0 || wmax * b.factor() <= prev_max * (1.0 + 1e-9);
    pass = pass && count_ok && contract_ok;
    summary.row({std::to_string(n), std::to_string(approx.components.size()), num(wmax), num(wmin), num(required)});
    depths.push_back(Json{{"depth", n}, {"components", approx.components.size()}, {"max_width", wmax}});
    prev_max = wmax;
  }
  c.artifacts.add("cantor.csv", summary.str());
  c.artifacts.add("cantor_components.csv", comps.str());
  c.report["cantor"] = Json{{"depths", depths}, {"status", pass ? "pass" : "fail"}};
  return pass ? kExitPass : kExitFail;
}

int cmd_perturb_sweep(Context& c) {
  if (!c.sys.singular) throw ConfigError("perturb-sweep requires map: singular with surgery enabled");
  SweepOptions opts;
  opts.bump_count = c.cfg.bump_count;
  opts.grid_k = c.cfg.sweep_grid_k;
  opts.horizon = c.cfg.horizon;
  opts.samples_per_cell = c.cfg.samples_per_cell;
  const auto rep = robustness_sweep(c.sys.singular, c.cfg.trials, c.cfg.eta, c.cfg.seed, opts);
  Csv csv({"trial", "seed", "singular_pass", "transitive_pass"});
  Csv detail({"trial", "seed", "c1_norm", "det_at_q1", "det_at_q2", "zero_y", "zero_residual", "diameter"});
  for (const auto& t : rep.trials) {
    csv.row({std::to_string(t.trial), std::to_string(t.seed), t.singular_pass ? "1" : "0",
             t.transitive_pass ? "1" : "0"});
    detail.row({std::to_string(t.trial), std::to_string(t.seed), num(t.c1_norm), num(t.det_at_q1), num(t.det_at_q2),
                num(t.zero_y), num(t.zero_residual), std::to_string(t.diameter)});
  }
  c.artifacts.add("sweep.csv", csv.str());
  c.artifacts.add("sweep_detail.csv", detail.str());
  const int n = static_cast<int>(rep.trials.size());
  const bool pass = rep.singular_passes() == n && rep.transitive_passes() == n;
  c.report["perturb-sweep"] = Json{{"trials", n},
                                   {"eta", rep.eta},
                                   {"singular_passes", rep.singular_passes()},
                                   {"transitive_passes", rep.transitive_passes()},
                                   {"note", "eta is an empirical perturbation size, not a proven radius"},
                                   {"status", pass ? "pass" : "fail"}};
  c.log << "perturb-sweep: singular " << rep.singular_passes() << "/" << n << ", transitive "
        << rep.transitive_passes() << "/" << n << "\n";
  return pass ? kExitPass : kExitFail;
}

const std::vector<std::pair<std::string, Command>>& table() {
  static const std::vector<std::pair<std::string, Command>> t{
      {"build", cmd_build},
      {"orbit", cmd_orbit},
      {"fixed-points", cmd_fixed_points},
      {"unstable-coverage", cmd_unstable_coverage},
      {"stable-witness", cmd_stable_witness},
      {"transitivity", cmd_transitivity},
      {"critical-set", cmd_critical_set},
      {"cantor", cmd_cantor},
      {"perturb-sweep", cmd_perturb_sweep},
  };
  return t;
}

int run_one(const std::string& name, Command fn, Context& c) {
  try {
    return fn(c);
  } catch (const ConfigError& e) {
    c.log << name << ": " << e.what() << "\n";
    c.report[name] = Json{{"status", "error"}, {"error", e.what()}};
    return kExitUsage;
  } catch (const DomainError& e) {
    c.log << name << ": " << e.what() << "\n";
    c.report[name] = Json{{"status", "error"}, {"error", e.what()}};
    return kExitUsage;
  } catch (const std::exception& e) {
    c.log << name << ": " << e.what() << "\n";
    c.report[name] = Json{{"status", "fail"}, {"error", e.what()}};
    return kExitFail;
  }
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : table()) n.push_back(name);
    n.push_back("all");
    return n;
  }();
  return names;
}

void ArtifactSet::add(const std::string& name, std::string bytes) { files_[name] = std::move(bytes); }

void ArtifactSet::flush(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  Json manifest = Json::object();
  Json files = Json::array();
  for (const auto& [name, bytes] : files_) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    files.push_back(Json{{"file", name}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
  }
  manifest["files"] = files;
  std::ofstream out(fs::path(dir) / "manifest.json", std::ios::binary);
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write manifest.json");
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[digest[i] >> 4];
    s += hex[digest[i] & 15];
  }
  return s;
}

std::string encode_pgm(int width, int height, const std::vector<unsigned char>& pixels) {
  if (width <= 0 || height <= 0 || pixels.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("encode_pgm: pixel count does not match dimensions");
  std::string s = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  s.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
  return s;
}

int run_command(const std::string& command, const RunConfig& cfg, ArtifactSet& artifacts, std::string& log) {
  std::ostringstream log_stream;
  Json report = Json::object();
  report["command"] = command;
  report["seed"] = cfg.seed;
  int code = kExitUsage;
  bool known = false;
  try {
    const System sys = build_system(cfg);
    Context ctx{cfg, sys, artifacts, report, log_stream};
    if (command == "all") {
      known = true;
      code = kExitPass;
      for (const auto& [name, fn] : table()) code = std::max(code, run_one(name, fn, ctx));
    } else {
      for (const auto& [name, fn] : table())
        if (name == command) {
          known = true;
          code = run_one(name, fn, ctx);
        }
    }
  } catch (const std::exception& e) {
    log_stream << e.what() << "\n";
    report["error"] = e.what();
    known = true;
    code = kExitUsage;
  }
  if (!known) {
    log_stream << "unknown command '" << command << "'\n";
    log = log_stream.str();
    return kExitUsage;
  }
  report["exit_code"] = code;
  artifacts.add("report.json", report.dump(2) + "\n");
  log = log_stream.str();
  return code;
}

int dispatch(const std::string& command, const RunConfig& cfg, const std::string& out_dir) {
  ArtifactSet artifacts;
  std::string log;
  const int code = run_command(command, cfg, artifacts, log);
  std::cerr << log;
  if (!artifacts.files().empty()) artifacts.flush(out_dir);
  return code;
}

}  // namespace rtmap
