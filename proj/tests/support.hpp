#pragma once

#include <algorithm>
#include <cmath>
#include <memory>

#include "rtmap/endomorphism.hpp"
#include "rtmap/expanding.hpp"
#include "rtmap/rng.hpp"
#include "rtmap/skew.hpp"
#include "rtmap/surgery.hpp"

namespace rtmap::testing {

inline Box arc_box(double c, double hw) { return Box(std::vector<Arc>{Arc(c, hw)}); }
inline Box arc_box(double c0, double h0, double c1, double h1) {
  return Box(std::vector<Arc>{Arc(c0, h0), Arc(c1, h1)});
}

inline ExpandingBase default_base() { return build_expanding(2, arc_box(0.0, 0.02), arc_box(0.07, 0.02), 0.01); }

inline std::shared_ptr<const SkewMap> default_skew() {
  return std::make_shared<const SkewMap>(default_base(), IfsPair());
}

inline std::shared_ptr<const SingularMap> default_singular(SurgeryParams params = {}) {
  return std::make_shared<const SingularMap>(*default_skew(), params);
}

inline TorusPoint at(const SingularMap& A, double y) {
  TorusPoint pt = A.s();
  pt.set(A.base_dim(), y);
  return pt;
}

// Central differences on the torus: output differences are taken as circle
// displacements so wrap-around does not spoil the quotient.
inline Mat fd_jacobian(const Endomorphism& map, const TorusPoint& pt, double h = 1e-6) {
  const auto d = static_cast<Eigen::Index>(map.dim());
  Mat J(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    TorusPoint lo = pt, hi = pt;
    lo.set(j, pt[j] - h);
    hi.set(j, pt[j] + h);
    const TorusPoint flo = map.eval(lo), fhi = map.eval(hi);
    for (Eigen::Index i = 0; i < d; ++i) J(i, j) = circle_delta(flo[i], fhi[i]) / (2.0 * h);
  }
  return J;
}

inline double relative_error(const Mat& analytic, const Mat& approx) {
  return (analytic - approx).cwiseAbs().maxCoeff() / std::max(1.0, analytic.cwiseAbs().maxCoeff());
}

inline TorusPoint random_point(Rng& rng, std::size_t dim) {
  TorusPoint pt(dim);
  for (std::size_t i = 0; i < dim; ++i) pt.set(i, rng.uniform());
  return pt;
}

inline TorusPoint random_in_ball(Rng& rng, const TorusPoint& c, double r) {
  TorusPoint pt(c.dim());
  while (true) {
    double n2 = 0.0;
    std::array<double, kMaxDim> d{};
    for (std::size_t i = 0; i < c.dim(); ++i) {
      d[i] = rng.uniform(-r, r);
      n2 += d[i] * d[i];
    }
    if (n2 >= r * r) continue;
    for (std::size_t i = 0; i < c.dim(); ++i) pt.set(i, c[i] + d[i]);
    return pt;
  }
}

inline TorusPoint iterate(const Endomorphism& map, TorusPoint pt, int n) {
  for (int i = 0; i < n; ++i) pt = map.eval(pt);
  return pt;
}

}  // namespace rtmap::testing
