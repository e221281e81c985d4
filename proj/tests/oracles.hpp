#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "rtmap/ifs.hpp"

namespace rtmap::testing {

// Fraction of fiber rows (grid_k rows) met by semigroup orbit points of a1 of
// word length < k, for k = 1..max_iters. Every point kept is a genuine orbit
// point; near-duplicates (same 1/(16 grid_k) cell) are dropped, so the result
// is a lower bound for the row coverage of the true orbit.
inline std::vector<double> fiber_orbit_rows(const IfsPair& pair, double a1, int grid_k, int max_iters) {
  const int fine = 16 * grid_k;
  std::set<long> seen{static_cast<long>(std::floor(a1 * fine))};
  std::vector<double> frontier{a1};
  std::set<int> rows{std::min(grid_k - 1, static_cast<int>(a1 * grid_k))};
  std::vector<double> out;
  for (int k = 1; k <= max_iters; ++k) {
    out.push_back(static_cast<double>(rows.size()) / grid_k);
    std::vector<double> next;
    for (double y : frontier)
      for (double z : {pair.g1(y), pair.g2(y)}) {
        if (!seen.insert(static_cast<long>(std::floor(z * fine))).second) continue;
        next.push_back(z);
        rows.insert(std::min(grid_k - 1, static_cast<int>(z * grid_k)));
      }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace rtmap::testing
