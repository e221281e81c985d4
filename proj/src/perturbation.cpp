#include "rtmap/perturbation.hpp"

#include <algorithm>
#include <cmath>

#include "rtmap/errors.hpp"
#include "rtmap/rng.hpp"

namespace rtmap {

namespace {

double bump(double z) {
  const double q = 1.0 - z * z;
  return q > 0.0 ? std::exp(1.0 - 1.0 / q) : 0.0;
}

double bump_slope(double z) {
  const double q = 1.0 - z * z;
  return q > 0.0 ? bump(z) * (-2.0 * z / (q * q)) : 0.0;
}

}  // namespace

double bump_profile_max_slope() {
  static const double cached = [] {
    constexpr int kSamples = 100000;
    int best = 0;
    double best_v = 0.0;
    for (int i = 0; i < kSamples; ++i) {
      const double v = std::abs(bump_slope(static_cast<double>(i) / kSamples));
      if (v > best_v) {
        best_v = v;
        best = i;
      }
    }
    // |b'| is unimodal; ternary search around the sampled maximum.
    double lo = std::max(0.0, (best - 1.0) / kSamples);
    double hi = std::min(1.0, (best + 1.0) / kSamples);
    for (int it = 0; it < 200; ++it) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (std::abs(bump_slope(m1)) < std::abs(bump_slope(m2)))
        lo = m1;
      else
        hi = m2;
    }
    return std::max(best_v, std::abs(bump_slope(0.5 * (lo + hi)))) * (1.0 + 1e-9);
  }();
  return cached;
}

PerturbationField::PerturbationField(std::vector<PerturbationBump> bumps, double eta, std::size_t dim)
    : bumps_(std::move(bumps)), eta_(eta), dim_(dim) {
  if (!(eta >= 0.0 && eta < 0.5)) throw ConfigError("perturbation: eta must lie in [0, 0.5)");
  std::vector<double> c0(dim, 0.0), c1(dim, 0.0);
  const double slope = bump_profile_max_slope();
  for (const auto& b : bumps_) {
    if (b.center.size() != dim || b.direction.size() != dim)
      throw ConfigError("perturbation: bump dimension mismatch");
    if (!(b.width > 0.0 && b.width < 0.5)) throw ConfigError("perturbation: bump width must lie in (0, 1/2)");
    for (std::size_t i = 0; i < dim; ++i) {
      c0[i] += std::abs(b.direction[i]);
      c1[i] += std::abs(b.direction[i]) * slope / b.width;
    }
  }
  double bound = 0.0;
  for (std::size_t i = 0; i < dim; ++i) bound = std::max({bound, c0[i], c1[i]});
  scale_ = bound > 0.0 ? eta / bound : 0.0;
}

Vec PerturbationField::value(const TorusPoint& pt) const {
  const auto d = static_cast<Eigen::Index>(dim_);
  Vec v = Vec::Zero(d);
  for (const auto& b : bumps_) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double dl = circle_delta(b.center[i], pt[i]);
      r2 += dl * dl;
    }
    const double w = bump(std::sqrt(r2) / b.width);
    if (w == 0.0) continue;
    for (Eigen::Index i = 0; i < d; ++i) v(i) += w * b.direction[static_cast<std::size_t>(i)];
  }
  return scale_ * v;
}

Mat PerturbationField::jacobian(const TorusPoint& pt) const {
  const auto d = static_cast<Eigen::Index>(dim_);
  Mat j = Mat::Zero(d, d);
  for (const auto& b : bumps_) {
    Vec delta(d);
    for (Eigen::Index i = 0; i < d; ++i)
      delta(i) = circle_delta(b.center[static_cast<std::size_t>(i)], pt[static_cast<std::size_t>(i)]);
    const double r = delta.norm();
    if (r == 0.0 || r >= b.width) continue;
    const double ds = bump_slope(r / b.width) / (r * b.width);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index k = 0; k < d; ++k) j(i, k) += b.direction[static_cast<std::size_t>(i)] * ds * delta(k);
  }
  return scale_ * j;
}

double PerturbationField::measured_c1_norm(std::uint64_t seed, int samples, double h) const {
  Rng rng(seed);
  double norm = 0.0;
  TorusPoint pt(dim_);
  for (int s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < dim_; ++i) pt.set(i, rng.uniform());
    norm = std::max(norm, value(pt).cwiseAbs().maxCoeff());
    for (std::size_t k = 0; k < dim_; ++k) {
      TorusPoint a = pt, b = pt;
      a.set(k, pt[k] + h);
      b.set(k, pt[k] - h);
      norm = std::max(norm, ((value(a) - value(b)) / (2.0 * h)).cwiseAbs().maxCoeff());
    }
  }
  return norm;
}

PerturbationField make_perturbation(PerturbationSpec spec, const std::optional<ExclusionBall>& avoid) {
  if (!(spec.eta >= 0.0 && spec.eta < 0.5)) throw ConfigError("perturbation: eta must lie in [0, 0.5)");
  if (spec.focus_radius > 0.0 && spec.focus_center.size() != spec.dim)
    throw ConfigError("perturbation: focus center dimension mismatch");
  if (spec.bumps.empty()) {
    Rng rng(spec.seed);
    for (int k = 0; k < spec.bump_count; ++k) {
      PerturbationBump b;
      b.width = rng.uniform(0.05, 0.25);
      b.center.assign(spec.dim, 0.0);
      for (int attempt = 0;; ++attempt) {
        if (k == 0 && spec.focus_radius > 0.0) {
          double n2 = 0.0;
          for (std::size_t i = 0; i < spec.dim; ++i) {
            b.center[i] = rng.uniform(-spec.focus_radius, spec.focus_radius);
            n2 += b.center[i] * b.center[i];
          }
          if (n2 >= spec.focus_radius * spec.focus_radius) continue;
          for (std::size_t i = 0; i < spec.dim; ++i) b.center[i] = reduce(spec.focus_center[i] + b.center[i]);
        } else {
          for (auto& c : b.center) c = rng.uniform();
        }
        if (!avoid) break;
        TorusPoint c(b.center);
        TorusPoint a(avoid->center);
        if (torus_distance(c, a) >= avoid->radius + b.width) break;
        if (attempt > 10000) throw ConfigError("perturbation: cannot place bump away from the excluded ball");
      }
      b.direction.assign(spec.dim, 0.0);
      for (auto& v : b.direction) v = rng.uniform(-1.0, 1.0);
      spec.bumps.push_back(std::move(b));
    }
  }
  return PerturbationField(std::move(spec.bumps), spec.eta, spec.dim);
}

PerturbedMap::PerturbedMap(std::shared_ptr<const Endomorphism> map, PerturbationField zeta)
    : map_(std::move(map)), zeta_(std::move(zeta)) {
  if (zeta_.dim() != map_->dim()) throw ConfigError("perturbed map: field dimension mismatch");
}

TorusPoint PerturbedMap::eval(const TorusPoint& pt) const {
  TorusPoint out = map_->eval(pt);
  const Vec z = zeta_.value(pt);
  for (std::size_t i = 0; i < out.dim(); ++i) out.set(i, out[i] + z(static_cast<Eigen::Index>(i)));
  return out;
}

Mat PerturbedMap::jacobian(const TorusPoint& pt) const { return map_->jacobian(pt) + zeta_.jacobian(pt); }

}  // namespace rtmap
