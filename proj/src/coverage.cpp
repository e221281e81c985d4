#include "rtmap/verification.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "rtmap/errors.hpp"

namespace rtmap {

namespace {

// Fiber values of a graph curve over M1 at x_i = i / n.
using Curve = std::vector<double>;

double curve_at(const Curve& c, double x) {
  const auto n = static_cast<double>(c.size());
  const double t = reduce(x) * n;
  auto i = static_cast<std::size_t>(t);
  if (i >= c.size()) i = c.size() - 1;
  const double frac = t - static_cast<double>(i);
  const double y0 = c[i];
  const double y1 = c[(i + 1) % c.size()];
  return reduce(y0 + frac * circle_delta(y0, y1));
}

struct Sample {
  double x;
  double y;
};

class CellMarker {
 public:
  CellMarker(int grid_k, std::vector<std::uint32_t>& hits) : k_(grid_k), hits_(hits) {}

  void mark(double x, double y) {
    const int cx = std::min(k_ - 1, static_cast<int>(x * k_));
    const int cy = std::min(k_ - 1, static_cast<int>(y * k_));
    auto& h = hits_[static_cast<std::size_t>(cy) * static_cast<std::size_t>(k_) + static_cast<std::size_t>(cx)];
    if (h == 0) ++covered_;
    ++h;
  }
  std::size_t covered() const { return covered_; }

 private:
  int k_;
  std::vector<std::uint32_t>& hits_;
  std::size_t covered_ = 0;
};

// Image of the graph of `parent` restricted to the branch [a, a + 1/K), resampled
// on the uniform grid. Every raw image point is marked.
Curve push_through_branch(const Endomorphism& map, double slope, const Curve& parent, double a,
                          CellMarker& marker) {
  const std::size_t n = parent.size();
  const double fa = reduce(slope * a);
  std::vector<Sample> img;
  img.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double target = static_cast<double>(i) / static_cast<double>(n);
    const double x = a + reduce(target - fa) / slope;
    const TorusPoint out = map.eval(TorusPoint{x, curve_at(parent, x)});
    img.push_back({out[0], out[1]});
    marker.mark(out[0], out[1]);
  }
  std::sort(img.begin(), img.end(), [](const Sample& l, const Sample& r) { return l.x < r.x; });
  Curve child(n);
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n);
    while (j < img.size() && img[j].x <= x) ++j;
    const Sample& lo = img[(j + img.size() - 1) % img.size()];
    const Sample& hi = img[j % img.size()];
    double span = hi.x - lo.x;
    double off = x - lo.x;
    if (span <= 0.0) span += 1.0;
    if (off < 0.0) off += 1.0;
    child[i] = reduce(lo.y + (off / span) * circle_delta(lo.y, hi.y));
  }
  return child;
}

}  // namespace

CoverageReport unstable_coverage(const Endomorphism& map, const ExpandingBase& base, double a1, int grid_k,
                                 int max_iters, const CoverageOptions& opts) {
  if (grid_k < 2) throw ConfigError("unstable_coverage: grid_k must be >= 2");
  if (base.dim() != 1 || map.base_dim() != 1) throw ConfigError("unstable_coverage: requires m1 = 1");
  const double slope = base.factor();
  const double half_branch = 0.5 / slope;
  // One full branch of F inside U, one inside V, one on the far side of U.
  const double branch_u = base.U().arc(0).center() - half_branch;
  const double branch_v = base.V().arc(0).center() - half_branch;
  const double branch_free = base.U().arc(0).center() + 0.5 - half_branch;

  CoverageReport rep;
  rep.grid_k = grid_k;
  rep.hits.assign(static_cast<std::size_t>(grid_k) * static_cast<std::size_t>(grid_k), 0);
  CellMarker marker(grid_k, rep.hits);

  const double key_scale = static_cast<double>(grid_k) * opts.dedupe_per_cell;
  std::unordered_set<long long> seen;
  auto key_of = [&](const Curve& c) { return static_cast<long long>(std::floor(c[0] * key_scale)); };

  const Curve seed(static_cast<std::size_t>(opts.curve_samples), reduce(a1));
  std::vector<Curve> frontier;
  {
    // W^u_loc = U x {a1} only feeds the branch inside U.
    Curve c = push_through_branch(map, slope, seed, branch_u, marker);
    seen.insert(key_of(c));
    frontier.push_back(std::move(c));
  }
  rep.fractions.push_back(static_cast<double>(marker.covered()) / static_cast<double>(rep.hits.size()));
  for (int it = 2; it <= max_iters; ++it) {
    std::vector<Curve> next;
    for (const auto& parent : frontier)
      for (double a : {branch_u, branch_v, branch_free}) {
        Curve c = push_through_branch(map, slope, parent, a, marker);
        if (seen.insert(key_of(c)).second) next.push_back(std::move(c));
      }
    rep.curves += frontier.size();
    frontier = std::move(next);
    rep.fractions.push_back(static_cast<double>(marker.covered()) / static_cast<double>(rep.hits.size()));
  }
  rep.curves += frontier.size();
  return rep;
}

std::vector<double> orbit_row_fractions(const IfsPair& pair, double a1, int grid_k, int max_iters) {
  const auto levels = orbit_levels(pair, a1, max_iters, 1.0 / (4.0 * grid_k));
  std::vector<double> out;
  // f^k(U x {a1}) contains M1 x <F>^{k-1}(a1): the first iterate only applies g1.
  for (int k = 1; k <= max_iters; ++k) {
    std::unordered_set<int> rows;
    for (double y : levels[static_cast<std::size_t>(k - 1)]) rows.insert(std::min(grid_k - 1, static_cast<int>(y * grid_k)));
    out.push_back(static_cast<double>(rows.size()) / grid_k);
  }
  return out;
}

}  // namespace rtmap
