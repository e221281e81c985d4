#include <gtest/gtest.h>

#include "rtmap/errors.hpp"
#include "support.hpp"

using namespace rtmap;
using namespace rtmap::testing;

namespace {

bool inside_support(const SingularMap& A, const TorusPoint& pt) {
  const Vec lift = A.chart().forward(pt);
  const auto box = A.support_box();
  for (std::size_t i = 0; i < box.size(); ++i)
    if (lift(static_cast<Eigen::Index>(i)) < box[i][0] || lift(static_cast<Eigen::Index>(i)) > box[i][1]) return false;
  return true;
}

}  // namespace

TEST(Psi, KnotValues) {
  const PsiProfile psi(0.03);
  EXPECT_EQ(psi_eval(psi, 1.0 / 16), 2.0);
  EXPECT_EQ(psi_deriv(psi, 1.0 / 16), 0.0);
  EXPECT_EQ(psi_eval(psi, 1.0 / 16 + 0.03), 0.0);
  EXPECT_EQ(psi_eval(psi, 1.0 / 16 - 0.03), 0.0);
  EXPECT_EQ(psi_eval(psi, 0.5), 0.0);
}

TEST(Psi, SingleCriticalPointAndDerivative) {
  const PsiProfile psi(0.03);
  const double h = 1e-7;
  for (int i = 1; i < 2000; ++i) {
    const double t = 1.0 / 16 - 0.03 + 0.06 * i / 2000.0;
    const double d = psi_deriv(psi, t);
    if (t < 1.0 / 16 - 1e-12) EXPECT_GT(d, 0.0);
    if (t > 1.0 / 16 + 1e-12) EXPECT_LT(d, 0.0);
    const double fd = (psi_eval(psi, t + h) - psi_eval(psi, t - h)) / (2 * h);
    EXPECT_NEAR(d, fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST(Phi, KnotConstraints) {
  const double delta = 0.04;
  const PhiProfile phi(delta);
  const double q = 0.25;
  EXPECT_NEAR(phi_eval(phi, q), 0.0, 1e-10);
  EXPECT_NEAR(phi_deriv(phi, q), 0.5, 1e-10);
  EXPECT_NEAR(phi_eval(phi, q + delta / 4), 0.0, 1e-10);
  EXPECT_NEAR(phi_deriv(phi, q + delta / 4), -3.0, 1e-10);
  EXPECT_NEAR(phi_eval(phi, q + delta / 2), 0.0, 1e-10);
  EXPECT_NEAR(phi_deriv(phi, q + delta / 2), 3.0, 1e-10);
  EXPECT_NEAR(phi_eval(phi, q - delta / 4), 0.0, 1e-10);
  EXPECT_NEAR(phi_deriv(phi, q - delta / 4), 0.0, 1e-10);
  EXPECT_NEAR(phi_eval(phi, q + 3 * delta / 4), 0.0, 1e-10);
  EXPECT_NEAR(phi_deriv(phi, q + 3 * delta / 4), 0.0, 1e-10);
}

TEST(Phi, SupportAndSmoothness) {
  const double delta = 0.04;
  const PhiProfile phi(delta);
  for (double t : {0.0, 0.1, 0.2399, 0.2801, 0.5, 0.9}) {
    EXPECT_EQ(phi_eval(phi, t), 0.0);
    EXPECT_EQ(phi_deriv(phi, t), 0.0);
  }
  // C^2: one-sided limits agree at every knot
  const double e = 1e-12;
  for (double k : phi.knots()) {
    EXPECT_NEAR(phi.value(k - e), phi.value(k + e), 1e-10);
    EXPECT_NEAR(phi.deriv(k - e), phi.deriv(k + e), 1e-8);
    EXPECT_NEAR(phi.second_deriv(k - e), phi.second_deriv(k + e), 1e-5);
  }
  const double h = 1e-7;
  for (int i = 0; i < 1000; ++i) {
    const double t = 0.23 + 0.06 * i / 1000.0;
    EXPECT_NEAR(phi.deriv(t), (phi.value(t + h) - phi.value(t - h)) / (2 * h), 1e-6);
  }
}

TEST(Singular, ParameterChain) {
  try {
    default_singular(SurgeryParams{0.12, 0.03, 0.08, {}});
    FAIL() << "delta >= 2 theta accepted";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("0<δ<2θ"), std::string::npos);
  }
  EXPECT_THROW(default_singular(SurgeryParams{0.05, 0.03, 0.04, {}}), ConfigError);
  EXPECT_THROW(default_singular(SurgeryParams{0.2, 0.03, 0.04, {}}), ConfigError);
  EXPECT_THROW(default_singular(SurgeryParams{0.12, 0.03, 0.04, {0.3, 0.25}}), ConfigError);
}

TEST(Singular, PointsAndChart) {
  const auto A = default_singular();
  EXPECT_EQ(A->s(), (TorusPoint{0.25, 0.25}));
  EXPECT_NEAR(A->q1(), 0.26, 1e-15);
  EXPECT_NEAR(A->q2(), 0.27, 1e-15);
  EXPECT_EQ(A->chart().forward(TorusPoint{0.0, 0.6})[0], 0.0);
  const Vec mu = A->chart().forward(A->s());
  EXPECT_EQ(mu[0], 0.25);
  EXPECT_EQ(mu[1], 0.25);
}

TEST(Singular, EvalExamples) {
  const auto A = default_singular();
  const auto& f = A->skew();
  EXPECT_EQ(A_eval(*A, TorusPoint{0.6, 0.9}), f.eval(TorusPoint{0.6, 0.9}));
  const TorusPoint As = A_eval(*A, A->s());
  EXPECT_EQ(As[0], f.eval(A->s())[0]);
  EXPECT_NEAR(As[1], 0.25, 1e-15);
  const TorusPoint q1 = at(*A, A->q1());
  EXPECT_NEAR(A_eval(*A, q1)[1], A->q1(), 1e-15);
  EXPECT_NEAR(A_eval(*A, at(*A, A->q2()))[1], A->q2(), 1e-15);
}

TEST(Singular, DeterminantIdentities) {
  const auto A = default_singular();
  EXPECT_NEAR(A_jacobian_det(*A, at(*A, A->q1())), 224.0, 224.0 * 1e-9);
  EXPECT_NEAR(A_jacobian_det(*A, at(*A, A->q2())), -160.0, 160.0 * 1e-9);
  EXPECT_NEAR(A_jacobian_det(*A, A->s()), 0.0, 32.0 * 1e-9);
  EXPECT_GT(A->det(at(*A, A->q1())), 0.0);
  EXPECT_LT(A->det(at(*A, A->q2())), 0.0);
}

TEST(Singular, DeterminantMatchesFiniteDifferences) {
  const auto A = default_singular();
  Rng rng(67);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const TorusPoint pt = random_in_ball(rng, A->s(), A->params().r);
    const double fd = fd_jacobian(*A, pt).determinant();
    worst = std::max(worst, std::abs(A->det(pt) - fd) / 32.0);
  }
  EXPECT_LT(worst, 1e-5);
}

TEST(Singular, JacobianMatchesFiniteDifferences) {
  const auto A = default_singular();
  Rng rng(71);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const TorusPoint pt = i % 2 ? random_point(rng, 2) : random_in_ball(rng, A->s(), A->params().r);
    worst = std::max(worst, relative_error(A->jacobian(pt), fd_jacobian(*A, pt)));
  }
  EXPECT_LT(worst, 1e-5);
}

TEST(Singular, LocalityOutsideSupport) {
  const auto A = default_singular();
  const auto& f = A->skew();
  Rng rng(73);
  int checked = 0;
  for (int i = 0; i < 5000; ++i) {
    const TorusPoint pt = i % 2 ? random_point(rng, 2) : random_in_ball(rng, A->s(), A->params().r);
    if (A->in_ball(pt) && inside_support(*A, pt)) continue;
    ++checked;
    EXPECT_EQ(A->eval(pt), f.eval(pt));
    EXPECT_EQ(A->jacobian(pt), f.jacobian(pt));
  }
  EXPECT_GT(checked, 2000);
}

TEST(Singular, CriticalSet) {
  const auto A = default_singular();
  const auto trace = critical_trace(*A, 0.005);
  ASSERT_FALSE(trace.points.empty());
  double nearest = 1.0;
  for (std::size_t i = 0; i < trace.points.size(); ++i) {
    nearest = std::min(nearest, torus_distance(trace.points[i], A->s()));
    EXPECT_LE(trace.residuals[i], 32.0 * 1e-9);
    EXPECT_NEAR(A->det(trace.points[i]), 0.0, 32.0 * 1e-9);
  }
  EXPECT_LE(nearest, 0.005);
}

TEST(Singular, CriticalSetControls) {
  const auto f = default_skew();
  EXPECT_TRUE(critical_trace(*f, TorusPoint{0.25, 0.25}, 0.12, 32.0, 0.005).points.empty());
  const auto half = default_singular(SurgeryParams{0.12, 0.03, 0.02, {}});
  EXPECT_FALSE(critical_trace(*half, 0.005).points.empty());
}

TEST(Singular, TwoDimensionalBase) {
  const auto base = build_expanding(2, arc_box(0.0, 0.02, 0.0, 0.02), arc_box(0.05, 0.01, 0.05, 0.01), 0.005);
  const SingularMap A(SkewMap(base, IfsPair()), SurgeryParams{});
  EXPECT_EQ(A.s(), (TorusPoint{0.25, 0.0, 0.25}));
  const double detF = base.jacobian_det();
  TorusPoint q1 = A.s(), q2 = A.s();
  q1.set(2, A.q1());
  q2.set(2, A.q2());
  EXPECT_NEAR(A.det(q1), 7 * detF, 7 * detF * 1e-9);
  EXPECT_NEAR(A.det(q2), -5 * detF, 5 * detF * 1e-9);
  EXPECT_NEAR(A.det(A.s()), 0.0, detF * 1e-9);
  Rng rng(79);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const TorusPoint pt = random_in_ball(rng, A.s(), 0.12);
    worst = std::max(worst, relative_error(A.jacobian(pt), fd_jacobian(A, pt)));
  }
  EXPECT_LT(worst, 1e-5);
}
