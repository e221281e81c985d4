#include "rtmap/expanding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rtmap/errors.hpp"

namespace rtmap {

namespace {

double min_width(const Box& b) {
  double w = 1.0;
  for (const auto& a : b.arcs()) w = std::min(w, a.width());
  return w;
}

bool covers(double factor, const Box& b) { return factor * min_width(b) >= 1.0; }

}  // namespace

ExpandingBase::ExpandingBase(int degree, int power, Box u, Box v, double epsilon)
    : degree_(degree),
      power_(power),
      factor_(std::pow(static_cast<double>(degree), power)),
      u_(std::move(u)),
      v_(std::move(v)),
      epsilon_(epsilon),
      p_(u_.dim()) {}

TorusPoint ExpandingBase::eval(const TorusPoint& x) const {
  TorusPoint out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out.set(i, factor_ * x[i]);
  return out;
}

double ExpandingBase::jacobian_det() const { return std::pow(factor_, static_cast<double>(dim())); }

ExpandingBase build_expanding(int degree, const Box& U, const Box& V, double epsilon,
                              std::optional<int> power_override) {
  if (degree < 2) throw ConfigError("expanding base: degree must be >= 2");
  if (U.dim() != V.dim()) throw ConfigError("expanding base: U and V dimensions differ");
  if (U.dim() > 2) throw ConfigError("expanding base: m1 must be 1 or 2");
  if (!(epsilon > 0.0)) throw ConfigError("expanding base: epsilon must be > 0");
  if (box_intersects(U.fatten(epsilon), V.fatten(epsilon)))
    throw ConfigError("blending sets overlap: U_ε ∩ V_ε = ∅ violated");
  if (!U.contains(TorusPoint(U.dim()))) throw ConfigError("U must contain the fixed point p = 0");

  constexpr int kMaxPower = 60;
  int power = 0;
  if (power_override) {
    power = *power_override;
    if (power < 1 || power > kMaxPower) throw ConfigError("expanding base: N override out of range");
    const double f = std::pow(static_cast<double>(degree), power);
    if (!covers(f, U) || !covers(f, V))
      throw ConfigError("expanding base: N = " + std::to_string(power) + " does not give F(U) = F(V) = M1");
  } else {
    double f = 1.0;
    for (int n = 1; n <= kMaxPower; ++n) {
      f *= degree;
      if (covers(f, U) && covers(f, V)) {
        power = n;
        break;
      }
    }
    if (power == 0) throw ConfigError("expanding base: U or V too small to cover M1");
  }
  return ExpandingBase(degree, power, U, V, epsilon);
}

TorusPoint eval_F(const ExpandingBase& base, const TorusPoint& x) { return base.eval(x); }

std::vector<Arc> linear_preimage_arcs(double slope, const Arc& target, const Arc& within) {
  const double wa = within.lo();
  const double wb = within.hi();
  const double ta = target.lo();
  const double tb = target.hi();
  const auto j_lo = static_cast<long long>(std::floor(slope * wa - tb));
  const auto j_hi = static_cast<long long>(std::ceil(slope * wb - ta));
  std::vector<Arc> out;
  for (long long j = j_lo; j <= j_hi; ++j) {
    const double lo = std::max(wa, (ta + static_cast<double>(j)) / slope);
    const double hi = std::min(wb, (tb + static_cast<double>(j)) / slope);
    if (hi > lo) out.emplace_back(0.5 * (lo + hi), 0.5 * (hi - lo));
  }
  return out;
}

std::vector<Box> linear_preimage_boxes(double slope, const Box& target, const Box& within) {
  if (target.dim() != within.dim()) throw ConfigError("preimage: dimension mismatch");
  std::vector<std::vector<Arc>> per_coord;
  for (std::size_t i = 0; i < target.dim(); ++i) {
    per_coord.push_back(linear_preimage_arcs(slope, target.arc(i), within.arc(i)));
    if (per_coord.back().empty()) return {};
  }
  std::vector<std::vector<Arc>> acc{{}};
  for (const auto& arcs : per_coord) {
    std::vector<std::vector<Arc>> next;
    for (const auto& prefix : acc)
      for (const auto& a : arcs) {
        auto v = prefix;
        v.push_back(a);
        next.push_back(std::move(v));
      }
    acc = std::move(next);
  }
  std::vector<Box> out;
  out.reserve(acc.size());
  for (auto& arcs : acc) out.emplace_back(std::move(arcs));
  return out;
}

std::vector<Box> preimage_components(const ExpandingBase& base, const Box& target, const Box& within) {
  return linear_preimage_boxes(base.factor(), target, within);
}

CantorApproximation cantor_components(const ExpandingBase& base, int depth) {
  if (depth < 0) throw ConfigError("cantor_components: depth must be >= 0");
  CantorApproximation approx;
  approx.components = {base.U(), base.V()};
  for (int d = 1; d <= depth; ++d) {
    std::vector<Box> next;
    for (const auto& c : approx.components)
      for (const Box* within : {&base.U(), &base.V()})
        for (auto& b : preimage_components(base, c, *within)) next.push_back(std::move(b));
    for (const auto& b : next)
      for (const auto& a : b.arcs())
        if (a.half_width() < 1e-15)
          throw PrecisionError("cantor_components: component widths below 1e-15 at depth " + std::to_string(d));
    approx.components = std::move(next);
    approx.depth = d;
  }
  return approx;
}

TorusPoint ProductMap::eval(const TorusPoint& pt) const {
  const std::size_t m1 = base_.dim();
  return TorusPoint::join(base_.eval(pt.head(m1)), pt.tail(m1));
}

Mat ProductMap::jacobian(const TorusPoint&) const {
  const auto d = static_cast<Eigen::Index>(dim());
  Mat j = Mat::Identity(d, d);
  for (Eigen::Index i = 0; i + 1 < d; ++i) j(i, i) = base_.factor();
  return j;
}

}  // namespace rtmap
