#include "rtmap/verification.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "rtmap/errors.hpp"
#include "rtmap/rng.hpp"

namespace rtmap {

std::size_t ReachabilityGrid::cell_count() const {
  std::size_t n = 1;
  for (std::size_t i = 0; i < dim; ++i) n *= static_cast<std::size_t>(grid_k);
  return n;
}

std::uint32_t ReachabilityGrid::cell_of(const TorusPoint& pt) const {
  std::uint32_t idx = 0;
  for (std::size_t i = dim; i-- > 0;) {
    const int c = std::min(grid_k - 1, static_cast<int>(pt[i] * grid_k));
    idx = idx * static_cast<std::uint32_t>(grid_k) + static_cast<std::uint32_t>(c);
  }
  return idx;
}

namespace {

using Adjacency = std::vector<std::vector<std::uint32_t>>;

// Distances from `src`; -1 for unreachable.
std::vector<int> bfs(const Adjacency& adj, std::uint32_t src) {
  std::vector<int> dist(adj.size(), -1);
  std::deque<std::uint32_t> queue{src};
  dist[src] = 0;
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (auto w : adj[v])
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

bool reaches_all(const std::vector<int>& dist) {
  return std::all_of(dist.begin(), dist.end(), [](int d) { return d >= 0; });
}

}  // namespace

TransitivityReport box_transitivity(const Endomorphism& map, int grid_k, int horizon, int samples_per_cell,
                                    std::uint64_t seed, ReachabilityGrid* grid_out) {
  if (grid_k < 1) throw ConfigError("box_transitivity: grid_k must be >= 1");
  ReachabilityGrid grid;
  grid.grid_k = grid_k;
  grid.dim = map.dim();
  grid.horizon = horizon;
  const std::size_t cells = grid.cell_count();

  Adjacency adj(cells);
  Rng rng(seed);
  TorusPoint pt(grid.dim);
  for (std::size_t c = 0; c < cells; ++c) {
    std::vector<int> coord(grid.dim);
    std::size_t rest = c;
    for (std::size_t i = 0; i < grid.dim; ++i) {
      coord[i] = static_cast<int>(rest % static_cast<std::size_t>(grid_k));
      rest /= static_cast<std::size_t>(grid_k);
    }
    auto& out = adj[c];
    for (int s = 0; s < samples_per_cell; ++s) {
      for (std::size_t i = 0; i < grid.dim; ++i) pt.set(i, (coord[i] + rng.uniform()) / grid_k);
      const std::uint32_t to = grid.cell_of(map.eval(pt));
      if (std::find(out.begin(), out.end(), to) != out.end()) continue;
      out.push_back(to);
      grid.edges.push_back({static_cast<std::uint32_t>(c), to, pt});
    }
  }

  TransitivityReport rep;
  rep.cells = cells;
  rep.edges = grid.edges.size();
  rep.note = "edges are witnessed by sampled points; missing edges are inconclusive";

  Adjacency rev(cells);
  for (std::size_t v = 0; v < cells; ++v)
    for (auto w : adj[v]) rev[w].push_back(static_cast<std::uint32_t>(v));
  rep.graph_strongly_connected = reaches_all(bfs(adj, 0)) && reaches_all(bfs(rev, 0));
  if (rep.graph_strongly_connected) {
    int diameter = 0;
    for (std::size_t v = 0; v < cells; ++v) {
      const auto dist = bfs(adj, static_cast<std::uint32_t>(v));
      diameter = std::max(diameter, *std::max_element(dist.begin(), dist.end()));
    }
    rep.diameter = diameter;
  }
  rep.strongly_connected = rep.graph_strongly_connected && rep.diameter <= horizon;
  if (grid_out) *grid_out = std::move(grid);
  return rep;
}

}  // namespace rtmap
