#include "rtmap/verification.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rtmap/errors.hpp"

namespace rtmap {

namespace {

TorusPoint iterate(const Endomorphism& map, TorusPoint pt, int steps) {
  for (int i = 0; i < steps; ++i) pt = map.eval(pt);
  return pt;
}

const Arc& widest(const std::vector<Arc>& arcs) {
  return *std::max_element(arcs.begin(), arcs.end(),
                           [](const Arc& l, const Arc& r) { return l.half_width() < r.half_width(); });
}

// x in `component` with slope^steps * x ≡ 0 (mod 1), by bisection on the lift.
double solve_landing(double slope, int steps, const Arc& component) {
  const double total = std::pow(slope, steps);
  double lo = component.lo();
  double hi = component.hi();
  const double j = std::ceil(total * lo);
  if (!(j < total * hi)) throw InvariantViolation("stable_witness: refined component does not bracket p");
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double v = total * mid - j;
    if (v == 0.0) return mid;
    (v < 0.0 ? lo : hi) = mid;
  }
  return std::abs(total * lo - j) <= std::abs(total * hi - j) ? lo : hi;
}

}  // namespace

StableWitness stable_witness(const Endomorphism& map, const ExpandingBase& base, const IfsPair& pair,
                             const Box& W, const StableWitnessOptions& opts) {
  if (base.dim() != 1 || W.dim() != 2) throw ConfigError("stable_witness: requires m1 = 1 and a 2-d box W");
  const Arc& w1 = W.arc(0);
  const Arc& w2 = W.arc(1);
  const double slope = base.factor();
  const Arc landing_zone(pair.a1(), 0.8 * opts.ball_radius);

  int m = 0;
  for (double len = w1.width(); len < 1.0; len *= slope) ++m;
  const double slope_m = std::pow(slope, m);

  double x1 = w1.center();
  const double x2 = w2.center();
  for (int round = 0; round < opts.max_rounds; ++round) {
    const TorusPoint after_m = iterate(map, TorusPoint{x1, x2}, m);
    const SemigroupWord word = branch_to_target(pair, after_m[1], landing_zone, opts.max_word);
    const int n = static_cast<int>(word.size());

    // Nested preimages: O_n = M1 \ {antipode of p}, O_t ⊂ U or V by the letter applied at step t.
    Arc component(base.p()[0], 0.5);
    for (int t = n - 1; t >= 0; --t) {
      const int letter = word.letters[static_cast<std::size_t>(n - 1 - t)];
      const Arc& within = (letter == 1 ? base.U() : base.V()).arc(0);
      const auto comps = linear_preimage_arcs(slope, component, within);
      if (comps.empty()) throw InvariantViolation("stable_witness: empty preimage in the blending region");
      component = widest(comps);
    }
    const auto starts = linear_preimage_arcs(slope_m, component, w1);
    if (starts.empty()) throw InvariantViolation("stable_witness: F^m(W1) misses the refined component");
    const double x1_new = solve_landing(slope, m + n, widest(starts));

    const TorusPoint check = iterate(map, TorusPoint{x1_new, x2}, m);
    x1 = x1_new;
    if (!landing_zone.contains(ifs_apply(pair, word, check[1]))) continue;

    StableWitness wit;
    wit.point = TorusPoint{x1, x2};
    wit.m = m;
    wit.n = n;
    wit.word = word;
    wit.landing = iterate(map, wit.point, m + n);
    const double dx = dist_circle(wit.landing[0], base.p()[0]);
    const double dy = std::max(0.0, dist_circle(wit.landing[1], pair.a1()) - opts.ball_radius);
    wit.landing_error = dx + dy;
    if (!W.contains(wit.point)) throw InvariantViolation("stable_witness: witness left W");
    if (!(wit.landing_error < opts.tol))
      throw PrecisionError("stable_witness: replay landed " + std::to_string(wit.landing_error) +
                           " away from {p} x B");
    return wit;
  }
  throw SearchExhausted("stable_witness: fiber itinerary did not stabilize");
}

}  // namespace rtmap
