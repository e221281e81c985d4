#pragma once

#include <cstddef>

#include "rtmap/linalg.hpp"
#include "rtmap/torus.hpp"

namespace rtmap {

// A C^1 self-map of T^{m1} x T^1. Points carry base coordinates first, the
// fiber coordinate last.
class Endomorphism {
 public:
  virtual ~Endomorphism() = default;

  virtual std::size_t base_dim() const = 0;
  std::size_t dim() const { return base_dim() + 1; }

  virtual TorusPoint eval(const TorusPoint& pt) const = 0;
  // Jacobian of a lift, in the flat coordinates of the torus.
  virtual Mat jacobian(const TorusPoint& pt) const = 0;

  double jacobian_det(const TorusPoint& pt) const { return jacobian(pt).determinant(); }
};

class IdentityMap final : public Endomorphism {
 public:
  explicit IdentityMap(std::size_t base_dim) : base_dim_(base_dim) {}
  std::size_t base_dim() const override { return base_dim_; }
  TorusPoint eval(const TorusPoint& pt) const override { return pt; }
  Mat jacobian(const TorusPoint&) const override {
    const auto d = static_cast<Eigen::Index>(dim());
    return Mat::Identity(d, d);
  }

 private:
  std::size_t base_dim_;
};

}  // namespace rtmap
