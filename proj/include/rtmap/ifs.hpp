#pragma once

#include <cstdint>
#include <vector>

#include "rtmap/torus.hpp"

namespace rtmap {

// The fiber pair g1(y) = y - beta sin(2 pi y), g2(y) = y + alpha (mod 1).
// g1 fixes a1 = 0 (attracting) and r1 = 1/2 (repelling).
class IfsPair {
 public:
  // (3 - sqrt 5) / 2
  static constexpr double kDefaultAlpha = 0.38196601125010515;
  static constexpr double kDefaultBeta = 0.1;

  IfsPair(double beta = kDefaultBeta, double alpha = kDefaultAlpha);

  double beta() const { return beta_; }
  double alpha() const { return alpha_; }
  double a1() const { return 0.0; }
  double r1() const { return 0.5; }

  // Canonical lifted displacements: g_i(y) = y + displacement_i(y) (mod 1).
  double displacement(int letter, double y) const;
  double displacement_deriv(int letter, double y) const;

  double g1(double y) const { return apply_letter(1, y); }
  double g2(double y) const { return apply_letter(2, y); }
  double apply_letter(int letter, double y) const;
  double g1_deriv(double y) const { return 1.0 + displacement_deriv(1, y); }

 private:
  double beta_;
  double alpha_;
  // Representative of alpha of smallest magnitude.
  double alpha_lift_;
};

// A word over {1, 2}; the rightmost letter acts first.
struct SemigroupWord {
  std::vector<std::uint8_t> letters;

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  // (w · v) acts as w ∘ v.
  SemigroupWord operator*(const SemigroupWord& v) const;
  friend bool operator==(const SemigroupWord&, const SemigroupWord&) = default;
};

double ifs_apply(const IfsPair& pair, const SemigroupWord& word, double y);

struct MinimalityReport {
  bool dense = false;
  int word_depth = -1;                 // first depth at which the orbit is eps-dense
  std::vector<int> uncovered_cells;    // cells of width 1/ceil(1/eps) with uncovered points
  std::size_t orbit_points = 0;
};

// Breadth-first semigroup orbit from `start`, keeping one representative per
// eps/4 cell. Dense means every circle point lies within eps of an orbit point.
MinimalityReport minimality_check(const IfsPair& pair, double start, double eps, int max_depth);

// Shortest word w (breadth-first, one state per fine cell) with ifs_apply(w, start)
// in target. Throws SearchExhausted.
SemigroupWord branch_to_target(const IfsPair& pair, double start, const Arc& target, int max_depth);

// Cumulative orbit of `start` by depth: entry k holds representatives (one per
// cell of the given width) of all words of length <= k.
std::vector<std::vector<double>> orbit_levels(const IfsPair& pair, double start, int max_depth,
                                              double cell_width);

// Covering radius check helpers.
double max_circular_gap(std::vector<double> points);

}  // namespace rtmap
