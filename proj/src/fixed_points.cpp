#include "rtmap/verification.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace rtmap {

std::string to_string(FixedPointType t) {
  switch (t) {
    case FixedPointType::kSource: return "source";
    case FixedPointType::kSaddle: return "saddle";
    case FixedPointType::kSink: return "sink";
    case FixedPointType::kNonhyperbolic: return "nonhyperbolic";
  }
  return "unknown";
}

FixedPointReport classify_point(const Endomorphism& map, const TorusPoint& pt, double tie_tol) {
  FixedPointReport rep;
  rep.point = pt;
  const TorusPoint image = map.eval(pt);
  rep.fixed = image == pt;
  rep.residual = torus_distance(image, pt);

  Eigen::EigenSolver<Mat> solver(map.jacobian(pt), false);
  int expanding = 0, contracting = 0, neutral = 0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const std::complex<double> lambda = solver.eigenvalues()(i);
    rep.eigenvalues.push_back(lambda);
    const double mod = std::abs(lambda);
    if (std::abs(mod - 1.0) <= tie_tol)
      ++neutral;
    else if (mod > 1.0)
      ++expanding;
    else
      ++contracting;
  }
  if (neutral > 0)
    rep.classification = FixedPointType::kNonhyperbolic;
  else if (contracting == 0)
    rep.classification = FixedPointType::kSource;
  else if (expanding == 0)
    rep.classification = FixedPointType::kSink;
  else
    rep.classification = FixedPointType::kSaddle;
  return rep;
}

std::vector<FixedPointReport> classify_fixed_points(const Endomorphism& map, const IfsPair& pair, int scan_k) {
  const std::size_t m1 = map.base_dim();
  const TorusPoint p(m1);
  std::vector<FixedPointReport> out;
  out.push_back(classify_point(map, TorusPoint::join(p, TorusPoint{pair.a1()})));
  out.push_back(classify_point(map, TorusPoint::join(p, TorusPoint{pair.r1()})));
  if (scan_k <= 0) return out;

  const std::size_t d = map.dim();
  const auto de = static_cast<Eigen::Index>(d);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= static_cast<std::size_t>(scan_k);
  for (std::size_t idx = 0; idx < total; ++idx) {
    TorusPoint z(d);
    std::size_t rest = idx;
    for (std::size_t i = 0; i < d; ++i) {
      z.set(i, (static_cast<double>(rest % static_cast<std::size_t>(scan_k)) + 0.5) / scan_k);
      rest /= static_cast<std::size_t>(scan_k);
    }
    bool converged = false;
    for (int it = 0; it < 30; ++it) {
      const TorusPoint fz = map.eval(z);
      Vec res(de);
      for (std::size_t i = 0; i < d; ++i) res(static_cast<Eigen::Index>(i)) = circle_delta(z[i], fz[i]);
      if (res.norm() < 1e-13) {
        converged = true;
        break;
      }
      const Mat a = map.jacobian(z) - Mat::Identity(de, de);
      Eigen::FullPivLU<Mat> lu(a);
      if (!lu.isInvertible()) break;
      const Vec step = lu.solve(res);
      for (std::size_t i = 0; i < d; ++i) z.set(i, z[i] - step(static_cast<Eigen::Index>(i)));
    }
    if (!converged) continue;
    bool known = false;
    for (const auto& r : out)
      if (torus_distance(r.point, z) < 1e-6) known = true;
    if (!known) out.push_back(classify_point(map, z));
  }
  return out;
}

}  // namespace rtmap
