#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rtmap/endomorphism.hpp"
#include "rtmap/expanding.hpp"
#include "rtmap/ifs.hpp"
#include "rtmap/perturbation.hpp"
#include "rtmap/surgery.hpp"

namespace rtmap {

// ---- fixed points -------------------------------------------------------

enum class FixedPointType { kSource, kSaddle, kSink, kNonhyperbolic };

std::string to_string(FixedPointType t);

struct FixedPointReport {
  TorusPoint point;
  std::vector<std::complex<double>> eigenvalues;
  FixedPointType classification = FixedPointType::kNonhyperbolic;
  bool fixed = false;         // eval(point) == point, bit for bit
  double residual = 0.0;      // torus distance between point and its image
};

// |λ| within tie_tol of 1 for some eigenvalue => nonhyperbolic.
FixedPointReport classify_point(const Endomorphism& map, const TorusPoint& pt, double tie_tol = 1e-9);

// Reports (p,a1) and (p,r1) first, then any further fixed points found by
// Newton iteration from a scan_k^d seed grid (scan_k = 0 disables the scan).
std::vector<FixedPointReport> classify_fixed_points(const Endomorphism& map, const IfsPair& pair,
                                                    int scan_k = 0);

// ---- unstable set coverage ---------------------------------------------

struct CoverageReport {
  int grid_k = 0;
  std::vector<double> fractions;      // cumulative, iterate 1..max_iters
  std::vector<std::uint32_t> hits;    // per cell hit counts, row-major (fiber rows)
  std::size_t curves = 0;             // distinct graph curves propagated
};

struct CoverageOptions {
  int curve_samples = 512;
  // Curves whose fiber value at x = 0 shares a cell of this many per grid row are merged.
  int dedupe_per_cell = 16;
};

// Pushes W^u_loc(p,a1) = U x {a1} forward. Each tracked object is a graph curve
// over all of M1; its image through any full branch of F (one inside U, one
// inside V, one free branch) is again such a curve. Requires m1 = 1.
CoverageReport unstable_coverage(const Endomorphism& map, const ExpandingBase& base, double a1, int grid_k,
                                 int max_iters, const CoverageOptions& opts = {});

// Independent lower bound for iterate k = 1..max_iters: fraction of fiber rows
// hit by the semigroup orbit of a1 with words of length <= k - 1.
std::vector<double> orbit_row_fractions(const IfsPair& pair, double a1, int grid_k, int max_iters);

// ---- stable set witnesses ----------------------------------------------

struct StableWitness {
  TorusPoint point;
  int m = 0;
  int n = 0;
  SemigroupWord word;
  double landing_error = 0.0;
  TorusPoint landing;
};

struct StableWitnessOptions {
  double ball_radius = 0.05;   // B = ball around a1
  double tol = 1e-6;
  int max_word = 40;
  int max_rounds = 16;
};

// Constructs (x1,x2) in W with map^{m+n}(x1,x2) in {p} x B: F^m(W1) = M1, a
// semigroup word into B, nested preimages realizing the word's itinerary, then
// bisection for F^{m+n}(x1) = p. Landing is checked by replaying the map.
StableWitness stable_witness(const Endomorphism& map, const ExpandingBase& base, const IfsPair& pair,
                             const Box& W, const StableWitnessOptions& opts = {});

// ---- box transitivity ---------------------------------------------------

struct ReachabilityEdge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  TorusPoint witness;
};

struct ReachabilityGrid {
  int grid_k = 0;
  std::size_t dim = 0;
  int horizon = 0;
  std::vector<ReachabilityEdge> edges;

  std::size_t cell_count() const;
  std::uint32_t cell_of(const TorusPoint& pt) const;
};

struct TransitivityReport {
  bool strongly_connected = false;   // every cell reaches every cell within horizon
  bool graph_strongly_connected = false;
  int diameter = -1;                 // -1 when the graph is not strongly connected
  std::size_t cells = 0;
  std::size_t edges = 0;
  // A missing edge only means "not found at this sampling".
  std::string note;
};

TransitivityReport box_transitivity(const Endomorphism& map, int grid_k, int horizon, int samples_per_cell,
                                    std::uint64_t seed, ReachabilityGrid* grid_out = nullptr);

// ---- robustness ---------------------------------------------------------

struct TrialResult {
  int trial = 0;
  std::uint64_t seed = 0;
  double c1_norm = 0.0;
  double det_at_q1 = 0.0;
  double det_at_q2 = 0.0;
  bool singular_pass = false;
  double zero_y = 0.0;          // fiber coordinate of the located determinant zero
  double zero_residual = 0.0;
  bool transitive_pass = false;
  int diameter = -1;
};

struct SweepOptions {
  int bump_count = 6;
  int grid_k = 32;
  int horizon = 40;
  int samples_per_cell = 25;
  bool check_transitivity = true;
  int norm_samples = 2000;
};

struct SweepReport {
  double eta = 0.0;
  std::vector<TrialResult> trials;
  int singular_passes() const;
  int transitive_passes() const;
};

// Locates a zero of det(Dg) on the fiber segment {s1} x [q1, q2] by bisection.
// Returns false when the endpoint signs do not straddle zero.
bool locate_segment_zero(const Endomorphism& g, const SingularMap& map, double& y_out, double& residual_out,
                         double& det_q1, double& det_q2);

SweepReport robustness_sweep(const std::shared_ptr<const SingularMap>& map, int trials, double eta,
                             std::uint64_t seed, const SweepOptions& opts = {});

}  // namespace rtmap
