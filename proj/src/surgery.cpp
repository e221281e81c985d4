#include "rtmap/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "rtmap/errors.hpp"

namespace rtmap {

PsiProfile::PsiProfile(double theta) : theta_(theta) {
  if (!(theta > 0.0)) throw ConfigError("psi: theta must be > 0");
}

double PsiProfile::value(double t) const {
  const double z = (t - kPeak) / theta_;
  const double q = 1.0 - z * z;
  if (q <= 0.0) return 0.0;
  return 2.0 * std::exp(1.0 - 1.0 / q);
}

double PsiProfile::deriv(double t) const {
  const double z = (t - kPeak) / theta_;
  const double q = 1.0 - z * z;
  if (q <= 0.0) return 0.0;
  return value(t) * (-2.0 * z / (q * q)) / theta_;
}

namespace {

// Quintic on [0, h] matching (value, slope, curvature) at both ends, in monomial form.
std::array<double, 6> hermite_quintic(double h, double v0, double d0, double a0, double v1, double d1,
                                      double a1) {
  const double c0 = v0, c1 = d0, c2 = 0.5 * a0;
  const double r0 = v1 - (c0 + c1 * h + c2 * h * h);
  const double r1 = d1 - (c1 + 2.0 * c2 * h);
  const double r2 = a1 - 2.0 * c2;
  const double h2 = h * h, h3 = h2 * h;
  const double c3 = (20.0 * r0 - 8.0 * r1 * h + r2 * h2) / (2.0 * h3);
  const double c4 = (-30.0 * r0 + 14.0 * r1 * h - 2.0 * r2 * h2) / (2.0 * h3 * h);
  const double c5 = (12.0 * r0 - 6.0 * r1 * h + r2 * h2) / (2.0 * h3 * h2);
  return {c0, c1, c2, c3, c4, c5};
}

}  // namespace

PhiProfile::PhiProfile(double delta) : delta_(delta) {
  if (!(delta > 0.0)) throw ConfigError("phi: delta must be > 0");
  knots_ = {0.25 - delta / 4.0, 0.25, 0.25 + delta / 4.0, 0.25 + delta / 2.0, 0.25 + 3.0 * delta / 4.0};
  constexpr std::array<double, 5> slopes{0.0, 0.5, -3.0, 3.0, 0.0};
  for (std::size_t i = 0; i < 4; ++i)
    coeffs_[i] = hermite_quintic(knots_[i + 1] - knots_[i], 0.0, slopes[i], 0.0, 0.0, slopes[i + 1], 0.0);
}

int PhiProfile::piece(double t) const {
  if (t < knots_[0] || t >= knots_[4]) return -1;
  for (int i = 3; i >= 0; --i)
    if (t >= knots_[static_cast<std::size_t>(i)]) return i;
  return -1;
}

double PhiProfile::value(double t) const {
  const int i = piece(t);
  if (i < 0) return 0.0;
  const auto& c = coeffs_[static_cast<std::size_t>(i)];
  const double s = t - knots_[static_cast<std::size_t>(i)];
  return c[0] + s * (c[1] + s * (c[2] + s * (c[3] + s * (c[4] + s * c[5]))));
}

double PhiProfile::deriv(double t) const {
  const int i = piece(t);
  if (i < 0) return 0.0;
  const auto& c = coeffs_[static_cast<std::size_t>(i)];
  const double s = t - knots_[static_cast<std::size_t>(i)];
  return c[1] + s * (2.0 * c[2] + s * (3.0 * c[3] + s * (4.0 * c[4] + s * 5.0 * c[5])));
}

double PhiProfile::second_deriv(double t) const {
  const int i = piece(t);
  if (i < 0) return 0.0;
  const auto& c = coeffs_[static_cast<std::size_t>(i)];
  const double s = t - knots_[static_cast<std::size_t>(i)];
  return 2.0 * c[2] + s * (6.0 * c[3] + s * (12.0 * c[4] + s * 20.0 * c[5]));
}

namespace {

std::vector<double> default_s_chart(std::size_t m1) {
  std::vector<double> s(m1 + 1, 0.0);
  s.front() = 0.25;
  s.back() = 0.25;
  return s;
}

double sup_norm_of_box(const Box& b) {
  double s = 0.0;
  for (const auto& a : b.arcs()) {
    const double c = circle_delta(0.0, a.center());
    const double m = std::max(std::abs(c - a.half_width()), std::abs(c + a.half_width()));
    s += m * m;
  }
  return std::sqrt(s);
}

}  // namespace

SingularMap::SingularMap(SkewMap skew, SurgeryParams params)
    : skew_(std::move(skew)),
      params_(std::move(params)),
      chart_(std::vector<double>(skew_.base_dim() + 1, 0.0)),
      psi_(params_.theta > 0.0 ? params_.theta : 1.0),
      phi_(params_.delta > 0.0 ? params_.delta : 1.0),
      q1_(0.25 + params_.delta / 4.0),
      q2_(0.25 + params_.delta / 2.0) {
  const std::size_t m1 = skew_.base_dim();
  const auto& p = params_;
  if (!(p.delta > 0.0 && p.delta < 2.0 * p.theta))
    throw ConfigError("surgery parameters violate 0<δ<2θ (δ=" + std::to_string(p.delta) +
                      ", θ=" + std::to_string(p.theta) + ")");
  if (!(2.0 * p.theta < p.r)) throw ConfigError("surgery parameters violate 0<2θ<r");
  if (params_.s_chart.empty()) params_.s_chart = default_s_chart(m1);
  if (params_.s_chart != default_s_chart(m1))
    throw ConfigError("surgery point must satisfy μ(s)=(1/4,0,...,0,1/4)");
  s_ = chart_.backward(Eigen::Map<const Vec>(params_.s_chart.data(), static_cast<Eigen::Index>(m1 + 1)));

  const ExpandingBase& base = skew_.base();
  const double blend_norm = std::max(sup_norm_of_box(base.U_eps()), sup_norm_of_box(base.V_eps()));
  if (blend_norm > 0.1 + 1e-12) throw ConfigError("chart requires μ₁(U_ε ∪ V_ε) ⊂ B(0,1/10)");
  if (0.25 - p.r < 0.1) throw ConfigError("B(μ₁(s₁),r) must miss B(0,1/10): need r <= 0.15");

  // The surgery support has to sit strictly inside B(s,r) for A to be continuous.
  double far = 0.0;
  const auto box = support_box();
  for (std::size_t i = 0; i < box.size(); ++i) {
    const double c = params_.s_chart[i];
    const double m = std::max(std::abs(box[i][0] - c), std::abs(box[i][1] - c));
    far += m * m;
  }
  if (std::sqrt(far) >= p.r)
    throw ConfigError("surgery support of φ·ψ does not fit inside B(s,r); decrease θ or δ, or increase r");
  if (!in_ball(TorusPoint::join(s1(), TorusPoint{q1_})) || !in_ball(TorusPoint::join(s1(), TorusPoint{q2_})))
    throw ConfigError("(s₁,q₁) and (s₁,q₂) must lie in B(s,r)");
}

std::vector<std::array<double, 2>> SingularMap::support_box() const {
  const std::size_t m1 = base_dim();
  const double w = params_.r / 2.0;
  std::vector<std::array<double, 2>> box;
  double transverse = 0.0;
  for (std::size_t i = 1; i < m1; ++i) transverse += w * w;
  const double lo = std::sqrt(std::max(0.0, PsiProfile::kPeak - params_.theta - transverse));
  box.push_back({lo, std::sqrt(PsiProfile::kPeak + params_.theta)});
  for (std::size_t i = 1; i < m1; ++i) box.push_back({-w, w});
  box.push_back({phi_.knots()[0], phi_.knots()[4]});
  return box;
}

double SingularMap::cutoff(const Vec& x_lift, Vec* grad) const {
  const double w = params_.r / 2.0;
  const auto m1 = x_lift.size();
  if (grad) *grad = Vec::Zero(m1);
  Vec ramp = Vec::Ones(m1);
  Vec dramp = Vec::Zero(m1);
  for (Eigen::Index i = 1; i < m1; ++i) {
    const double t = (std::abs(x_lift(i)) - 0.5 * w) / (0.5 * w);
    ramp(i) = 1.0 - smoothstep(t);
    dramp(i) = -smoothstep_deriv(t) * (x_lift(i) >= 0.0 ? 1.0 : -1.0) / (0.5 * w);
  }
  const double c = ramp.prod();
  if (grad)
    for (Eigen::Index i = 1; i < m1; ++i) {
      double g = dramp(i);
      for (Eigen::Index k = 1; k < m1; ++k)
        if (k != i) g *= ramp(k);
      (*grad)(i) = g;
    }
  return c;
}

bool SingularMap::in_ball(const TorusPoint& pt) const { return torus_distance(pt, s_) < params_.r; }

TorusPoint SingularMap::eval(const TorusPoint& pt) const {
  if (!in_ball(pt)) return skew_.eval(pt);
  const std::size_t m1 = base_dim();
  const Vec lift = chart_.forward(pt);
  const Vec x_lift = lift.head(static_cast<Eigen::Index>(m1));
  const double y_lift = lift(static_cast<Eigen::Index>(m1));
  const double bend = phi_.value(y_lift) * psi_.value(x_lift.squaredNorm()) * cutoff(x_lift, nullptr);
  const double y_new = y_lift - bend;
  if (std::abs(y_new) >= chart_.window_half_width())
    throw InvariantViolation("A: modified fiber coordinate left the chart window");
  return TorusPoint::join(skew_.base().eval(pt.head(m1)), TorusPoint{y_new});
}

Mat SingularMap::jacobian(const TorusPoint& pt) const {
  if (!in_ball(pt)) return skew_.jacobian(pt);
  const std::size_t m1 = base_dim();
  const auto d = static_cast<Eigen::Index>(m1 + 1);
  const auto last = d - 1;
  const Vec lift = chart_.forward(pt);
  const Vec x_lift = lift.head(last);
  const double y_lift = lift(last);
  const double rho = x_lift.squaredNorm();
  Vec cgrad;
  const double c = cutoff(x_lift, &cgrad);
  const double phi = phi_.value(y_lift);
  const double psi = psi_.value(rho);
  const double dpsi = psi_.deriv(rho);

  Mat j = Mat::Zero(d, d);
  for (Eigen::Index i = 0; i < last; ++i) {
    j(i, i) = skew_.base().factor();
    j(last, i) = -phi * (dpsi * 2.0 * x_lift(i) * c + psi * cgrad(i));
  }
  j(last, last) = 1.0 - phi_.deriv(y_lift) * psi * c;
  return j;
}

double SingularMap::det(const TorusPoint& pt) const {
  const double det_f = skew_.base().jacobian_det();
  const auto last = static_cast<Eigen::Index>(base_dim());
  if (!in_ball(pt)) return det_f * skew_.jacobian(pt)(last, last);
  const Vec lift = chart_.forward(pt);
  const Vec x_lift = lift.head(last);
  const double factor = 1.0 - phi_.deriv(lift(last)) * psi_.value(x_lift.squaredNorm()) * cutoff(x_lift, nullptr);
  return det_f * factor;
}

namespace {

TorusPoint offset_point(const TorusPoint& c, const Vec& off) {
  TorusPoint p(c.dim());
  for (std::size_t i = 0; i < c.dim(); ++i) p.set(i, c[i] + off(static_cast<Eigen::Index>(i)));
  return p;
}

}  // namespace

CriticalTrace critical_trace(const Endomorphism& map, const TorusPoint& center, double radius,
                             double det_scale, double resolution, double rel_tol) {
  if (!(resolution > 0.0)) throw ConfigError("critical_trace: resolution must be > 0");
  const auto d = static_cast<Eigen::Index>(center.dim());
  const int n = static_cast<int>(std::ceil(radius / resolution));
  const int side = 2 * n + 1;
  const double tol = rel_tol * std::abs(det_scale);
  const auto* singular = dynamic_cast<const SingularMap*>(&map);
  auto det_at = [&](const Vec& off) {
    const TorusPoint p = offset_point(center, off);
    return singular ? singular->det(p) : map.jacobian_det(p);
  };

  CriticalTrace trace;
  trace.resolution = resolution;
  std::size_t total = 1;
  for (Eigen::Index i = 0; i < d; ++i) total *= static_cast<std::size_t>(side);
  std::vector<double> values(total, 0.0);
  std::vector<char> inside(total, 0);
  auto offset_of = [&](std::size_t idx) {
    Vec off(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      off(i) = (static_cast<int>(idx % static_cast<std::size_t>(side)) - n) * resolution;
      idx /= static_cast<std::size_t>(side);
    }
    return off;
  };
  for (std::size_t idx = 0; idx < total; ++idx) {
    const Vec off = offset_of(idx);
    if (off.norm() >= radius) continue;
    inside[idx] = 1;
    values[idx] = det_at(off);
    if (std::abs(values[idx]) <= tol) {
      trace.points.push_back(offset_point(center, off));
      trace.residuals.push_back(std::abs(values[idx]));
    }
  }
  std::size_t stride = 1;
  for (Eigen::Index axis = 0; axis < d; ++axis, stride *= static_cast<std::size_t>(side)) {
    for (std::size_t idx = 0; idx < total; ++idx) {
      const auto coord = (idx / stride) % static_cast<std::size_t>(side);
      if (coord + 1 >= static_cast<std::size_t>(side)) continue;
      const std::size_t nb = idx + stride;
      if (!inside[idx] || !inside[nb]) continue;
      double fa = values[idx], fb = values[nb];
      if (std::abs(fa) <= tol || std::abs(fb) <= tol || (fa > 0.0) == (fb > 0.0)) continue;
      Vec a = offset_of(idx), b = offset_of(nb);
      for (int it = 0; it < 200; ++it) {
        const Vec mid = 0.5 * (a + b);
        const double fm = det_at(mid);
        if (std::abs(fm) <= tol) {
          trace.points.push_back(offset_point(center, mid));
          trace.residuals.push_back(std::abs(fm));
          break;
        }
        if (mid == a || mid == b) break;
        if ((fm > 0.0) == (fa > 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
    }
  }
  return trace;
}

CriticalTrace critical_trace(const SingularMap& map, double resolution) {
  return critical_trace(map, map.s(), map.params().r, map.skew().base().jacobian_det(), resolution);
}

}  // namespace rtmap
