#include "rtmap/torus.hpp"

#include <cmath>
#include <string>

#include "rtmap/errors.hpp"

namespace rtmap {

double reduce(double v) {
  double r = v - std::floor(v);
  if (r >= 1.0) r = 0.0;
  return r;
}

double circle_delta(double a, double b) {
  double d = reduce(b - a);
  if (d >= 0.5) d -= 1.0;
  return d;
}

double dist_circle(double a, double b) { return std::abs(circle_delta(a, b)); }

TorusPoint::TorusPoint(std::size_t dim) : dim_(dim) {
  if (dim > static_cast<std::size_t>(kMaxDim)) throw ConfigError("torus dimension exceeds 3");
}

TorusPoint::TorusPoint(std::initializer_list<double> coords)
    : TorusPoint(std::span<const double>(coords.begin(), coords.size())) {}

TorusPoint::TorusPoint(std::span<const double> coords) : TorusPoint(coords.size()) {
  for (std::size_t i = 0; i < dim_; ++i) c_[i] = reduce(coords[i]);
}

TorusPoint TorusPoint::from_vec(const Vec& v) {
  TorusPoint p(static_cast<std::size_t>(v.size()));
  for (std::size_t i = 0; i < p.dim_; ++i) p.c_[i] = reduce(v(static_cast<Eigen::Index>(i)));
  return p;
}

Vec TorusPoint::to_vec() const {
  Vec v(static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < dim_; ++i) v(static_cast<Eigen::Index>(i)) = c_[i];
  return v;
}

TorusPoint TorusPoint::head(std::size_t n) const { return TorusPoint(coords().first(n)); }

TorusPoint TorusPoint::tail(std::size_t from) const { return TorusPoint(coords().subspan(from)); }

TorusPoint TorusPoint::join(const TorusPoint& x, const TorusPoint& y) {
  TorusPoint p(x.dim_ + y.dim_);
  for (std::size_t i = 0; i < x.dim_; ++i) p.c_[i] = x.c_[i];
  for (std::size_t i = 0; i < y.dim_; ++i) p.c_[x.dim_ + i] = y.c_[i];
  return p;
}

bool operator==(const TorusPoint& a, const TorusPoint& b) {
  if (a.dim_ != b.dim_) return false;
  for (std::size_t i = 0; i < a.dim_; ++i)
    if (a.c_[i] != b.c_[i]) return false;
  return true;
}

double torus_distance(const TorusPoint& a, const TorusPoint& b) {
  if (a.dim() != b.dim()) throw ConfigError("torus_distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = circle_delta(a[i], b[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

Arc::Arc(double center, double half_width) : center_(reduce(center)), half_width_(half_width) {
  if (!(half_width > 0.0 && half_width <= 0.5))
    throw ConfigError("arc half_width must lie in (0, 1/2], got " + std::to_string(half_width));
}

bool Arc::contains(double y) const { return dist_circle(y, center_) < half_width_; }

Arc Arc::fatten(double eps) const { return Arc(center_, std::min(half_width_ + eps, 0.5)); }

bool arcs_overlap(const Arc& a, const Arc& b) {
  return dist_circle(a.center(), b.center()) < a.half_width() + b.half_width();
}

Box::Box(std::vector<Arc> arcs) : arcs_(std::move(arcs)) {
  if (arcs_.empty() || arcs_.size() > static_cast<std::size_t>(kMaxDim))
    throw ConfigError("box needs between 1 and 3 arcs");
}

bool Box::contains(const TorusPoint& pt) const {
  if (pt.dim() != dim()) throw ConfigError("box membership: dimension mismatch");
  for (std::size_t i = 0; i < dim(); ++i)
    if (!arcs_[i].contains(pt[i])) return false;
  return true;
}

double Box::volume() const {
  double v = 1.0;
  for (const auto& a : arcs_) v *= a.width();
  return v;
}

Box Box::fatten(double eps) const {
  std::vector<Arc> out;
  out.reserve(arcs_.size());
  for (const auto& a : arcs_) out.push_back(a.fatten(eps));
  return Box(std::move(out));
}

TorusPoint Box::center() const {
  TorusPoint p(dim());
  for (std::size_t i = 0; i < dim(); ++i) p.set(i, arcs_[i].center());
  return p;
}

bool box_intersects(const Box& a, const Box& b) {
  if (a.dim() != b.dim()) throw ConfigError("box_intersects: dimension mismatch");
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (!arcs_overlap(a.arc(i), b.arc(i))) return false;
  return true;
}

Chart::Chart(std::vector<double> base_offsets, double window_half_width)
    : offsets_(std::move(base_offsets)), window_(window_half_width) {
  if (!(window_ > 0.0 && window_ < 0.5)) throw ConfigError("chart window half-width must lie in (0, 1/2)");
  for (double& o : offsets_) o = reduce(o);
}

bool Chart::in_window(const TorusPoint& pt) const {
  if (pt.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i)
    if (std::abs(circle_delta(offsets_[i], pt[i])) >= window_) return false;
  return true;
}

double Chart::forward_coord(std::size_t i, double y) const {
  const double d = circle_delta(offsets_[i], y);
  if (std::abs(d) >= window_)
    throw DomainError("chart: coordinate " + std::to_string(i) + " outside the chart window");
  // Offsets are normally 0, where the lift of y in [0,1/2) is y itself.
  if (offsets_[i] == 0.0 && d >= 0.0) return y;
  return offsets_[i] + d;
}

Vec Chart::forward(const TorusPoint& pt) const {
  if (pt.dim() != dim()) throw DomainError("chart: dimension mismatch");
  Vec v(static_cast<Eigen::Index>(dim()));
  for (std::size_t i = 0; i < dim(); ++i) v(static_cast<Eigen::Index>(i)) = forward_coord(i, pt[i]);
  return v;
}

TorusPoint Chart::backward(const Vec& lifted) const {
  if (static_cast<std::size_t>(lifted.size()) != dim()) throw DomainError("chart: dimension mismatch");
  for (std::size_t i = 0; i < dim(); ++i)
    if (std::abs(lifted(static_cast<Eigen::Index>(i)) - offsets_[i]) >= window_)
      throw DomainError("chart: lifted coordinate outside the chart image");
  return TorusPoint::from_vec(lifted);
}

}  // namespace rtmap
