#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "rtmap/linalg.hpp"

namespace rtmap {

// Reduce to the canonical representative in [0,1). 1.0 (after rounding) maps to 0.0.
double reduce(double v);

// Signed displacement b - a, taken in [-1/2, 1/2).
double circle_delta(double a, double b);

double dist_circle(double a, double b);

// A point of T^d, d <= kMaxDim, coordinates in [0,1).
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(std::size_t dim);
  TorusPoint(std::initializer_list<double> coords);
  explicit TorusPoint(std::span<const double> coords);
  static TorusPoint from_vec(const Vec& v);

  std::size_t dim() const { return dim_; }
  double operator[](std::size_t i) const { return c_[i]; }
  void set(std::size_t i, double v) { c_[i] = reduce(v); }
  std::span<const double> coords() const { return {c_.data(), dim_}; }
  Vec to_vec() const;

  // Leading `n` coordinates / trailing coordinates as separate points.
  TorusPoint head(std::size_t n) const;
  TorusPoint tail(std::size_t from) const;
  static TorusPoint join(const TorusPoint& x, const TorusPoint& y);

  friend bool operator==(const TorusPoint& a, const TorusPoint& b);

 private:
  std::array<double, kMaxDim> c_{};
  std::size_t dim_ = 0;
};

// Euclidean combination of per-coordinate circle distances.
double torus_distance(const TorusPoint& a, const TorusPoint& b);

// Open arc {y : dist_circle(y, center) < half_width}. half_width = 1/2 is the
// circle minus the antipode of center.
class Arc {
 public:
  Arc(double center, double half_width);

  double center() const { return center_; }
  double half_width() const { return half_width_; }
  double width() const { return 2.0 * half_width_; }
  // Lifted endpoints, center - hw and center + hw.
  double lo() const { return center_ - half_width_; }
  double hi() const { return center_ + half_width_; }

  bool contains(double y) const;
  // Half-width grows by eps, capped at 1/2.
  Arc fatten(double eps) const;

 private:
  double center_;
  double half_width_;
};

bool arcs_overlap(const Arc& a, const Arc& b);

class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Arc> arcs);

  std::size_t dim() const { return arcs_.size(); }
  const Arc& arc(std::size_t i) const { return arcs_[i]; }
  const std::vector<Arc>& arcs() const { return arcs_; }

  bool contains(const TorusPoint& pt) const;
  double volume() const;
  Box fatten(double eps) const;
  TorusPoint center() const;

 private:
  std::vector<Arc> arcs_;
};

// Throws ConfigError on dimension mismatch.
bool box_intersects(const Box& a, const Box& b);

// Identity-on-window chart: each coordinate is sent to its lift in
// (offset - 1/2, offset + 1/2); only lifts within window_half_width of the
// offset are accepted.
class Chart {
 public:
  explicit Chart(std::vector<double> base_offsets, double window_half_width = 0.45);

  std::size_t dim() const { return offsets_.size(); }
  double window_half_width() const { return window_; }
  const std::vector<double>& offsets() const { return offsets_; }

  bool in_window(const TorusPoint& pt) const;
  double forward_coord(std::size_t i, double y) const;
  Vec forward(const TorusPoint& pt) const;
  TorusPoint backward(const Vec& lifted) const;

 private:
  std::vector<double> offsets_;
  double window_;
};

}  // namespace rtmap
