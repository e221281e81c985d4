#include "rtmap/skew.hpp"

#include <cmath>

#include "rtmap/errors.hpp"

namespace rtmap {

namespace {

double flat(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double flat_deriv(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

}  // namespace

double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = flat(t);
  const double b = flat(1.0 - t);
  return a / (a + b);
}

double smoothstep_deriv(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = flat(t);
  const double b = flat(1.0 - t);
  const double s = a + b;
  return (flat_deriv(t) * b + a * flat_deriv(1.0 - t)) / (s * s);
}

BumpProfile::BumpProfile(Box U, Box V, double epsilon)
    : u_(std::move(U)),
      v_(std::move(V)),
      u_eps_(u_.fatten(epsilon)),
      v_eps_(v_.fatten(epsilon)),
      epsilon_(epsilon) {}

double BumpProfile::box_value(const Box& b, const TorusPoint& x) const {
  double v = 1.0;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const double excess = dist_circle(x[i], b.arc(i).center()) - b.arc(i).half_width();
    v *= 1.0 - smoothstep(excess / epsilon_);
  }
  return v;
}

Vec BumpProfile::box_gradient(const Box& b, const TorusPoint& x) const {
  const auto d = static_cast<Eigen::Index>(b.dim());
  Vec ramp(d), dramp(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto& arc = b.arc(static_cast<std::size_t>(i));
    const double delta = circle_delta(arc.center(), x[static_cast<std::size_t>(i)]);
    const double t = (std::abs(delta) - arc.half_width()) / epsilon_;
    ramp(i) = 1.0 - smoothstep(t);
    dramp(i) = -smoothstep_deriv(t) * (delta >= 0.0 ? 1.0 : -1.0) / epsilon_;
  }
  Vec g(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    double prod = dramp(i);
    for (Eigen::Index k = 0; k < d; ++k)
      if (k != i) prod *= ramp(k);
    g(i) = prod;
  }
  return g;
}

double BumpProfile::value(const TorusPoint& x) const {
  if (u_eps_.contains(x)) return box_value(u_, x);
  if (v_eps_.contains(x)) return box_value(v_, x);
  return 0.0;
}

Vec BumpProfile::gradient(const TorusPoint& x) const {
  if (u_eps_.contains(x)) return box_gradient(u_, x);
  if (v_eps_.contains(x)) return box_gradient(v_, x);
  return Vec::Zero(static_cast<Eigen::Index>(x.dim()));
}

SkewMap::SkewMap(ExpandingBase base, IfsPair pair)
    : base_(std::move(base)),
      pair_(pair),
      bump_(base_.U(), base_.V(), base_.epsilon()),
      u_eps_(base_.U_eps()),
      v_eps_(base_.V_eps()) {}

std::optional<int> SkewMap::active_letter(const TorusPoint& x) const {
  if (u_eps_.contains(x)) return 1;
  if (v_eps_.contains(x)) return 2;
  return std::nullopt;
}

TorusPoint SkewMap::eval(const TorusPoint& pt) const {
  const std::size_t m1 = base_.dim();
  const TorusPoint x = pt.head(m1);
  const double y = pt[m1];
  double y_out = y;
  if (const auto letter = active_letter(x)) {
    const double u = bump_.value(x);
    y_out = reduce(y + u * pair_.displacement(*letter, y));
  }
  return TorusPoint::join(base_.eval(x), TorusPoint{y_out});
}

Mat SkewMap::jacobian(const TorusPoint& pt) const {
  const std::size_t m1 = base_.dim();
  const auto d = static_cast<Eigen::Index>(m1 + 1);
  const auto last = d - 1;
  Mat j = Mat::Zero(d, d);
  for (Eigen::Index i = 0; i < last; ++i) j(i, i) = base_.factor();
  j(last, last) = 1.0;
  const TorusPoint x = pt.head(m1);
  const double y = pt[m1];
  if (const auto letter = active_letter(x)) {
    const double u = bump_.value(x);
    const Vec grad = bump_.gradient(x);
    const double disp = pair_.displacement(*letter, y);
    for (Eigen::Index i = 0; i < last; ++i) j(last, i) = grad(i) * disp;
    j(last, last) = 1.0 + u * pair_.displacement_deriv(*letter, y);
  }
  return j;
}

TorusPoint SkewMap::fhat(const TorusPoint& x, double y) const {
  const auto letter = active_letter(x);
  if (!letter) throw DomainError("fhat: x lies outside U_ε ∪ V_ε");
  return TorusPoint::join(base_.eval(x), TorusPoint{pair_.apply_letter(*letter, y)});
}

}  // namespace rtmap
