#pragma once

#include <array>
#include <vector>

#include "rtmap/skew.hpp"

namespace rtmap {

// ψ(t) = 2 exp(1 - 1/(1 - z^2)), z = (t - 1/16)/θ, zero for |z| >= 1.
class PsiProfile {
 public:
  static constexpr double kPeak = 1.0 / 16.0;

  explicit PsiProfile(double theta);
  double theta() const { return theta_; }
  double value(double t) const;
  double deriv(double t) const;

 private:
  double theta_;
};

// C^2 piecewise quintic on [1/4 - δ/4, 1/4 + 3δ/4] through zeros at 1/4, 1/4 + δ/4,
// 1/4 + δ/2 with slopes 1/2, -3, 3; second derivative zero at every knot, and
// value, slope and curvature zero at both support ends.
class PhiProfile {
 public:
  explicit PhiProfile(double delta);
  double delta() const { return delta_; }
  // Knots in increasing order: support start, 1/4, 1/4+δ/4, 1/4+δ/2, support end.
  const std::array<double, 5>& knots() const { return knots_; }
  double value(double t) const;
  double deriv(double t) const;
  double second_deriv(double t) const;

 private:
  // Monomial coefficients in s = t - knot[i].
  std::array<std::array<double, 6>, 4> coeffs_{};
  std::array<double, 5> knots_{};
  double delta_;

  int piece(double t) const;
};

inline double psi_eval(const PsiProfile& p, double t) { return p.value(t); }
inline double psi_deriv(const PsiProfile& p, double t) { return p.deriv(t); }
inline double phi_eval(const PhiProfile& p, double t) { return p.value(t); }
inline double phi_deriv(const PhiProfile& p, double t) { return p.deriv(t); }

struct SurgeryParams {
  double r = 0.12;
  double theta = 0.03;
  double delta = 0.04;
  // μ(s) in chart coordinates: base part then fiber; default (1/4, [0,] 1/4).
  std::vector<double> s_chart;
};

// A(x,y) = f(x,y) off B(s,r); inside, the fiber becomes
// μ2^{-1}(μ2(y) - φ(μ2(y)) ψ(|μ1(x)|^2) c(x)), where c is a cutoff in the base
// coordinates transverse to s1 (identically 1 when m1 = 1).
class SingularMap : public Endomorphism {
 public:
  SingularMap(SkewMap skew, SurgeryParams params);

  const SkewMap& skew() const { return skew_; }
  const Chart& chart() const { return chart_; }
  const SurgeryParams& params() const { return params_; }
  const PsiProfile& psi() const { return psi_; }
  const PhiProfile& phi() const { return phi_; }
  const TorusPoint& s() const { return s_; }
  TorusPoint s1() const { return s_.head(base_dim()); }
  double q1() const { return q1_; }
  double q2() const { return q2_; }

  std::size_t base_dim() const override { return skew_.base_dim(); }
  TorusPoint eval(const TorusPoint& pt) const override;
  Mat jacobian(const TorusPoint& pt) const override;

  bool in_ball(const TorusPoint& pt) const;
  // det(DF) (1 - φ' ψ c) inside B(s,r); the skew determinant outside.
  double det(const TorusPoint& pt) const;

  // Axis-aligned chart box containing the support of φ ψ c.
  std::vector<std::array<double, 2>> support_box() const;

 private:
  double cutoff(const Vec& x_lift, Vec* grad) const;

  SkewMap skew_;
  SurgeryParams params_;
  Chart chart_;
  PsiProfile psi_;
  PhiProfile phi_;
  TorusPoint s_;
  double q1_;
  double q2_;
};

inline TorusPoint A_eval(const SingularMap& map, const TorusPoint& pt) { return map.eval(pt); }
inline double A_jacobian_det(const SingularMap& map, const TorusPoint& pt) { return map.det(pt); }

struct CriticalTrace {
  std::vector<TorusPoint> points;
  std::vector<double> residuals;  // |det| at each point
  double resolution = 0.0;
};

// Grid scan of the ball B(s,r) (chart coordinates) for sign changes of the
// Jacobian determinant of `map`, refined by bisection to |det| <= rel_tol * det(DF).
CriticalTrace critical_trace(const Endomorphism& map, const TorusPoint& center, double radius,
                             double det_scale, double resolution, double rel_tol = 1e-9);
CriticalTrace critical_trace(const SingularMap& map, double resolution);

}  // namespace rtmap
