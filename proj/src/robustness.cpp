#include "rtmap/verification.hpp"

#include <cmath>

#include "rtmap/errors.hpp"
#include "rtmap/rng.hpp"

namespace rtmap {

int SweepReport::singular_passes() const {
  int n = 0;
  for (const auto& t : trials) n += t.singular_pass ? 1 : 0;
  return n;
}

int SweepReport::transitive_passes() const {
  int n = 0;
  for (const auto& t : trials) n += t.transitive_pass ? 1 : 0;
  return n;
}

bool locate_segment_zero(const Endomorphism& g, const SingularMap& map, double& y_out, double& residual_out,
                         double& det_q1, double& det_q2) {
  const TorusPoint s1 = map.s1();
  const double tol = 1e-9 * map.skew().base().jacobian_det();
  auto det_at = [&](double y) { return g.jacobian_det(TorusPoint::join(s1, TorusPoint{y})); };
  double lo = map.q1();
  double hi = map.q2();
  double f_lo = det_at(lo);
  const double f_hi = det_at(hi);
  det_q1 = f_lo;
  det_q2 = f_hi;
  if (std::abs(f_lo) <= tol) {
    y_out = lo;
    residual_out = std::abs(f_lo);
    return true;
  }
  if (std::abs(f_hi) <= tol) {
    y_out = hi;
    residual_out = std::abs(f_hi);
    return true;
  }
  if ((f_lo > 0.0) == (f_hi > 0.0)) return false;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = det_at(mid);
    if (std::abs(fm) <= tol) {
      y_out = mid;
      residual_out = std::abs(fm);
      return true;
    }
    if (mid == lo || mid == hi) break;
    if ((fm > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
    }
  }
  return false;
}

SweepReport robustness_sweep(const std::shared_ptr<const SingularMap>& map, int trials, double eta,
                             std::uint64_t seed, const SweepOptions& opts) {
  if (trials < 1) throw ConfigError("robustness_sweep: trials must be >= 1");
  SweepReport rep;
  rep.eta = eta;
  for (int t = 0; t < trials; ++t) {
    TrialResult r;
    r.trial = t;
    r.seed = mix_seed(seed, static_cast<std::uint64_t>(t));
    PerturbationSpec spec;
    spec.seed = r.seed;
    spec.eta = eta;
    spec.bump_count = opts.bump_count;
    spec.dim = map->dim();
    spec.focus_center.assign(map->s().coords().begin(), map->s().coords().end());
    spec.focus_radius = map->params().r;
    PerturbedMap g(map, make_perturbation(spec));
    r.c1_norm = g.field().measured_c1_norm(mix_seed(r.seed, 1), opts.norm_samples);
    r.singular_pass = locate_segment_zero(g, *map, r.zero_y, r.zero_residual, r.det_at_q1, r.det_at_q2);
    if (opts.check_transitivity) {
      const auto tr = box_transitivity(g, opts.grid_k, opts.horizon, opts.samples_per_cell, r.seed);
      r.transitive_pass = tr.strongly_connected;
      r.diameter = tr.diameter;
    }
    rep.trials.push_back(r);
  }
  return rep;
}

}  // namespace rtmap
