#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "rtmap/endomorphism.hpp"

namespace rtmap {

struct PerturbationBump {
  std::vector<double> center;
  double width = 0.1;               // support radius in the torus metric, < 1/2
  std::vector<double> direction;    // displacement per output coordinate
};

struct PerturbationSpec {
  std::uint64_t seed = 0;
  double eta = 0.01;
  int bump_count = 6;
  std::size_t dim = 2;
  std::vector<PerturbationBump> bumps;  // filled by make_perturbation when empty
  // When focus_radius > 0 the first generated bump is centered inside this ball.
  std::vector<double> focus_center;
  double focus_radius = 0.0;
};

// Region the random bump supports must avoid (e.g. B(s,r)).
struct ExclusionBall {
  std::vector<double> center;
  double radius = 0.0;
};

// ζ = scale * Σ direction_k b(|x - c_k| / w_k), b(z) = exp(1 - 1/(1 - z^2)).
// scale is chosen from the exact sup bounds of b and b' so that
// max(sup|ζ_i|, sup|∂_j ζ_i|) <= eta.
class PerturbationField {
 public:
  PerturbationField(std::vector<PerturbationBump> bumps, double eta, std::size_t dim);

  std::size_t dim() const { return dim_; }
  double scale() const { return scale_; }
  double eta() const { return eta_; }
  const std::vector<PerturbationBump>& bumps() const { return bumps_; }

  Vec value(const TorusPoint& pt) const;
  Mat jacobian(const TorusPoint& pt) const;

  // Sampled C^1 norm: sup over samples of |ζ_i| and of central differences of ζ.
  double measured_c1_norm(std::uint64_t seed, int samples, double h = 1e-6) const;

 private:
  std::vector<PerturbationBump> bumps_;
  double eta_;
  std::size_t dim_;
  double scale_ = 0.0;
};

// Throws ConfigError for eta < 0 or eta >= 0.5.
PerturbationField make_perturbation(PerturbationSpec spec,
                                    const std::optional<ExclusionBall>& avoid = std::nullopt);

// g = map ⊕ ζ, evaluated as reduce(map(pt) + ζ(pt)).
class PerturbedMap final : public Endomorphism {
 public:
  PerturbedMap(std::shared_ptr<const Endomorphism> map, PerturbationField zeta);

  std::size_t base_dim() const override { return map_->base_dim(); }
  TorusPoint eval(const TorusPoint& pt) const override;
  Mat jacobian(const TorusPoint& pt) const override;
  const PerturbationField& field() const { return zeta_; }

 private:
  std::shared_ptr<const Endomorphism> map_;
  PerturbationField zeta_;
};

// Sup of |b'(z)| over [0,1).
double bump_profile_max_slope();

}  // namespace rtmap
