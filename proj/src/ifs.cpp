#include "rtmap/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_set>

#include "rtmap/errors.hpp"

namespace rtmap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

long long cell_of(double y, double width) {
  const auto n = static_cast<long long>(std::ceil(1.0 / width));
  auto c = static_cast<long long>(std::floor(y * static_cast<double>(n)));
  return std::clamp(c, 0LL, n - 1);
}

}  // namespace

IfsPair::IfsPair(double beta, double alpha) : beta_(beta), alpha_(reduce(alpha)) {
  if (!(beta > 0.0 && beta < 1.0 / kTwoPi))
    throw ConfigError("ifs: beta must lie in (0, 1/(2π)) so that g1 is a diffeomorphism");
  alpha_lift_ = alpha_ > 0.5 ? alpha_ - 1.0 : alpha_;
}

double IfsPair::displacement(int letter, double y) const {
  return letter == 1 ? -beta_ * std::sin(kTwoPi * y) : alpha_lift_;
}

double IfsPair::displacement_deriv(int letter, double y) const {
  return letter == 1 ? -kTwoPi * beta_ * std::cos(kTwoPi * y) : 0.0;
}

double IfsPair::apply_letter(int letter, double y) const { return reduce(y + displacement(letter, y)); }

SemigroupWord SemigroupWord::operator*(const SemigroupWord& v) const {
  SemigroupWord out{letters};
  out.letters.insert(out.letters.end(), v.letters.begin(), v.letters.end());
  return out;
}

double ifs_apply(const IfsPair& pair, const SemigroupWord& word, double y) {
  for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it) y = pair.apply_letter(*it, y);
  return y;
}

double max_circular_gap(std::vector<double> points) {
  if (points.empty()) return 1.0;
  std::sort(points.begin(), points.end());
  double gap = points.front() + 1.0 - points.back();
  for (std::size_t i = 1; i < points.size(); ++i) gap = std::max(gap, points[i] - points[i - 1]);
  return gap;
}

namespace {

std::vector<int> uncovered_cells(std::vector<double> points, double eps) {
  const int n = static_cast<int>(std::ceil(1.0 / eps));
  std::vector<int> out;
  if (points.empty()) {
    for (int i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  std::sort(points.begin(), points.end());
  std::vector<bool> bad(static_cast<std::size_t>(n), false);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double a = points[i];
    const double b = (i + 1 < points.size()) ? points[i + 1] : points.front() + 1.0;
    if (b - a <= 2.0 * eps) continue;
    // (a + eps, b - eps) is farther than eps from the orbit.
    const double lo = a + eps;
    const double hi = b - eps;
    for (double t = std::floor(lo * n) / n; t < hi; t += 1.0 / n) {
      const int c = static_cast<int>(std::floor(reduce(t + 0.5 / n) * n));
      bad[static_cast<std::size_t>(std::clamp(c, 0, n - 1))] = true;
    }
  }
  for (int i = 0; i < n; ++i)
    if (bad[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

}  // namespace

MinimalityReport minimality_check(const IfsPair& pair, double start, double eps, int max_depth) {
  if (!(eps > 0.0)) throw ConfigError("minimality_check: eps must be > 0");
  const double cell = eps / 4.0;
  std::unordered_set<long long> seen;
  std::vector<double> points{reduce(start)};
  std::vector<double> frontier{reduce(start)};
  seen.insert(cell_of(points.front(), cell));

  MinimalityReport rep;
  for (int depth = 0;; ++depth) {
    if (max_circular_gap(points) <= 2.0 * eps) {
      rep.dense = true;
      rep.word_depth = depth;
      break;
    }
    if (depth == max_depth || frontier.empty()) break;
    std::vector<double> next;
    for (double y : frontier)
      for (int letter : {1, 2}) {
        const double z = pair.apply_letter(letter, y);
        if (seen.insert(cell_of(z, cell)).second) {
          next.push_back(z);
          points.push_back(z);
        }
      }
    frontier = std::move(next);
  }
  rep.orbit_points = points.size();
  if (!rep.dense) rep.uncovered_cells = uncovered_cells(points, eps);
  return rep;
}

SemigroupWord branch_to_target(const IfsPair& pair, double start, const Arc& target, int max_depth) {
  struct Node {
    double y;
    int parent;
    std::uint8_t letter;
  };
  const double cell = std::min(target.half_width() / 4.0, 1e-3);
  std::vector<Node> nodes{{reduce(start), -1, 0}};
  std::unordered_set<long long> seen{cell_of(nodes.front().y, cell)};

  auto word_of = [&](int idx) {
    SemigroupWord w;
    // Walking back from the last applied letter gives leftmost-first order.
    for (int i = idx; nodes[static_cast<std::size_t>(i)].parent >= 0; i = nodes[static_cast<std::size_t>(i)].parent)
      w.letters.push_back(nodes[static_cast<std::size_t>(i)].letter);
    return w;
  };

  if (target.contains(nodes.front().y)) return {};
  std::size_t level_begin = 0;
  for (int depth = 1; depth <= max_depth; ++depth) {
    const std::size_t level_end = nodes.size();
    for (std::size_t i = level_begin; i < level_end; ++i)
      for (std::uint8_t letter : {std::uint8_t{1}, std::uint8_t{2}}) {
        const double z = pair.apply_letter(letter, nodes[i].y);
        if (target.contains(z)) {
          nodes.push_back({z, static_cast<int>(i), letter});
          SemigroupWord w = word_of(static_cast<int>(nodes.size() - 1));
          if (!target.contains(ifs_apply(pair, w, start)))
            throw InvariantViolation("branch_to_target: word failed re-application");
          return w;
        }
        if (seen.insert(cell_of(z, cell)).second) nodes.push_back({z, static_cast<int>(i), letter});
      }
    level_begin = level_end;
    if (level_begin == nodes.size()) break;
  }
  throw SearchExhausted("branch_to_target: no word of length <= " + std::to_string(max_depth) +
                        " reaches the target");
}

std::vector<std::vector<double>> orbit_levels(const IfsPair& pair, double start, int max_depth,
                                              double cell_width) {
  std::unordered_set<long long> seen{cell_of(reduce(start), cell_width)};
  std::vector<double> all{reduce(start)};
  std::vector<double> frontier = all;
  std::vector<std::vector<double>> levels{all};
  for (int depth = 1; depth <= max_depth; ++depth) {
    std::vector<double> next;
    for (double y : frontier)
      for (int letter : {1, 2}) {
        const double z = pair.apply_letter(letter, y);
        if (seen.insert(cell_of(z, cell_width)).second) {
          next.push_back(z);
          all.push_back(z);
        }
      }
    frontier = std::move(next);
    levels.push_back(all);
  }
  return levels;
}

}  // namespace rtmap
