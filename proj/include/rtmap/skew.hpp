#pragma once

#include <optional>

#include "rtmap/endomorphism.hpp"
#include "rtmap/expanding.hpp"
#include "rtmap/ifs.hpp"

namespace rtmap {

// C^∞ step: 0 for t <= 0, 1 for t >= 1, built from exp(-1/t).
double smoothstep(double t);
double smoothstep_deriv(double t);

// u = 1 on U ∪ V, 0 off U_eps ∪ V_eps. Per box the value is the product over
// coordinates of 1 - smoothstep(excess / eps), where excess is the circle
// distance beyond the arc half-width.
class BumpProfile {
 public:
  BumpProfile(Box U, Box V, double epsilon);

  double value(const TorusPoint& x) const;
  Vec gradient(const TorusPoint& x) const;

 private:
  double box_value(const Box& b, const TorusPoint& x) const;
  Vec box_gradient(const Box& b, const TorusPoint& x) const;

  Box u_;
  Box v_;
  Box u_eps_;
  Box v_eps_;
  double epsilon_;
};

inline double bump_eval(const BumpProfile& bump, const TorusPoint& x) { return bump.value(x); }
inline Vec bump_grad(const BumpProfile& bump, const TorusPoint& x) { return bump.gradient(x); }

// f(x, y) = (F(x), y + u(x) Δ_i(y)) with Δ_i the lifted displacement of g1 on U_eps
// and of g2 on V_eps.
class SkewMap : public Endomorphism {
 public:
  SkewMap(ExpandingBase base, IfsPair pair);

  const ExpandingBase& base() const { return base_; }
  const IfsPair& pair() const { return pair_; }
  const BumpProfile& bump() const { return bump_; }

  std::size_t base_dim() const override { return base_.dim(); }
  TorusPoint eval(const TorusPoint& pt) const override;
  Mat jacobian(const TorusPoint& pt) const override;

  // Letter of the active fiber map at x: 1 on U_eps, 2 on V_eps, none elsewhere.
  std::optional<int> active_letter(const TorusPoint& x) const;

  // The blending map, defined on (U_eps ∪ V_eps) x M2; throws DomainError elsewhere.
  TorusPoint fhat(const TorusPoint& x, double y) const;

 private:
  ExpandingBase base_;
  IfsPair pair_;
  BumpProfile bump_;
  Box u_eps_;
  Box v_eps_;
};

inline TorusPoint fhat_eval(const SkewMap& map, const TorusPoint& x, double y) { return map.fhat(x, y); }
inline TorusPoint skew_eval(const SkewMap& map, const TorusPoint& pt) { return map.eval(pt); }
inline Mat skew_jacobian(const SkewMap& map, const TorusPoint& pt) { return map.jacobian(pt); }

}  // namespace rtmap
