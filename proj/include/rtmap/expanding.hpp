#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rtmap/endomorphism.hpp"
#include "rtmap/torus.hpp"

namespace rtmap {

// F = f0^N with f0(x) = degree * x (mod 1) in every base coordinate.
class ExpandingBase {
 public:
  int degree() const { return degree_; }
  int power() const { return power_; }
  // degree^N, the per-coordinate slope of F.
  double factor() const { return factor_; }
  std::size_t dim() const { return u_.dim(); }
  const Box& U() const { return u_; }
  const Box& V() const { return v_; }
  double epsilon() const { return epsilon_; }
  Box U_eps() const { return u_.fatten(epsilon_); }
  Box V_eps() const { return v_.fatten(epsilon_); }
  const TorusPoint& p() const { return p_; }

  TorusPoint eval(const TorusPoint& x) const;
  // det(D_x F) = factor^{m1}; constant for the linear map.
  double jacobian_det() const;

  // Expansion constants c = 1, k = degree: |D f0^n v| = degree^n |v|.
  double expansion_c() const { return 1.0; }
  double expansion_k() const { return degree_; }

 private:
  friend ExpandingBase build_expanding(int, const Box&, const Box&, double, std::optional<int>);
  ExpandingBase(int degree, int power, Box u, Box v, double epsilon);

  int degree_;
  int power_;
  double factor_;
  Box u_;
  Box v_;
  double epsilon_;
  TorusPoint p_;
};

// Chooses the smallest N with F(U) = F(V) = M1 (lifted-length criterion
// factor * width >= 1 in every coordinate). Throws ConfigError when U_eps and V_eps
// meet, U does not contain p = 0, degree < 2, or an explicit N does not cover.
ExpandingBase build_expanding(int degree, const Box& U, const Box& V, double epsilon,
                              std::optional<int> power_override = std::nullopt);

TorusPoint eval_F(const ExpandingBase& base, const TorusPoint& x);

// Connected components of {x in within : slope * x mod 1 in target} for one
// circle coordinate; exact lift-and-slice.
std::vector<Arc> linear_preimage_arcs(double slope, const Arc& target, const Arc& within);

// Components of F^{-power}(target) ∩ within for the diagonal map (products of
// per-coordinate components).
std::vector<Box> linear_preimage_boxes(double slope, const Box& target, const Box& within);

std::vector<Box> preimage_components(const ExpandingBase& base, const Box& target, const Box& within);

struct CantorApproximation {
  int depth = 0;
  std::vector<Box> components;
};

// Components of ∩_{t<=depth} F^{-t}(U ∪ V). Throws PrecisionError when component
// widths would drop below 1e-15.
CantorApproximation cantor_components(const ExpandingBase& base, int depth);

// The base map lifted to T^{m1} x T^1 as F x Id.
class ProductMap final : public Endomorphism {
 public:
  explicit ProductMap(ExpandingBase base) : base_(std::move(base)) {}
  std::size_t base_dim() const override { return base_.dim(); }
  TorusPoint eval(const TorusPoint& pt) const override;
  Mat jacobian(const TorusPoint& pt) const override;

 private:
  ExpandingBase base_;
};

}  // namespace rtmap
