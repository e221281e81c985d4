#include <gtest/gtest.h>

#include "rtmap/errors.hpp"
#include "support.hpp"

using namespace rtmap;
using namespace rtmap::testing;

TEST(Torus, ReduceHalfOpen) {
  EXPECT_EQ(reduce(1.0), 0.0);
  EXPECT_EQ(reduce(-0.25), 0.75);
  EXPECT_EQ(reduce(3.5), 0.5);
  EXPECT_EQ(reduce(-1e-18), 0.0);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.uniform(-50.0, 50.0);
    const double r = reduce(v);
    EXPECT_GE(r, 0.0);
    EXPECT_LT(r, 1.0);
    EXPECT_EQ(reduce(r), r);
  }
}

TEST(Torus, CircleDistanceExamples) {
  EXPECT_NEAR(dist_circle(0.1, 0.9), 0.2, 1e-15);
  EXPECT_EQ(dist_circle(0.25, 0.25), 0.0);
  EXPECT_EQ(dist_circle(0.0, 0.5), 0.5);
}

TEST(Torus, CircleDistanceIsAMetric) {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(), b = rng.uniform(), c = rng.uniform();
    EXPECT_EQ(dist_circle(a, b), dist_circle(b, a));
    EXPECT_LE(dist_circle(a, b), 0.5);
    EXPECT_LE(dist_circle(a, c), dist_circle(a, b) + dist_circle(b, c) + 1e-15);
  }
}

TEST(Torus, PointsAreReduced) {
  TorusPoint pt{1.25, -0.5};
  EXPECT_EQ(pt[0], 0.25);
  EXPECT_EQ(pt[1], 0.5);
  EXPECT_EQ(TorusPoint::join(pt.head(1), pt.tail(1)), pt);
}

TEST(Torus, ArcMembershipMatchesDistance) {
  const Arc a(0.95, 0.1);
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double y = rng.uniform();
    EXPECT_EQ(a.contains(y), dist_circle(y, 0.95) < 0.1);
  }
  EXPECT_TRUE(a.contains(0.02));
  EXPECT_FALSE(a.contains(0.05));
}

TEST(Torus, ArcFattening) {
  const Arc a(0.3, 0.05);
  EXPECT_DOUBLE_EQ(a.fatten(0.01).half_width(), 0.06);
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const double y = rng.uniform(0.25, 0.35);
    const double eps = rng.uniform(1e-9, 0.2);
    if (a.contains(y)) EXPECT_TRUE(a.fatten(eps).contains(y));
  }
}

TEST(Torus, ArcRejectsBadWidth) {
  EXPECT_THROW(Arc(0.1, 0.0), ConfigError);
  EXPECT_THROW(Arc(0.1, 0.6), ConfigError);
  EXPECT_NO_THROW(Arc(0.1, 0.5));
}

TEST(Torus, BoxIntersections) {
  EXPECT_TRUE(box_intersects(arc_box(0.1, 0.05, 0.5, 0.1), arc_box(0.12, 0.02, 0.45, 0.1)));
  EXPECT_FALSE(box_intersects(arc_box(0.1, 0.05, 0.5, 0.1), arc_box(0.12, 0.02, 0.8, 0.1)));
  const Box b = arc_box(0.7, 0.1, 0.2, 0.3);
  EXPECT_TRUE(box_intersects(b, b));
  EXPECT_THROW(box_intersects(b, arc_box(0.1, 0.1)), ConfigError);
}

TEST(Torus, BoxMembershipAndVolume) {
  const Box b = arc_box(0.0, 0.1, 0.5, 0.25);
  EXPECT_TRUE(b.contains(TorusPoint{0.95, 0.3}));
  EXPECT_FALSE(b.contains(TorusPoint{0.95, 0.8}));
  EXPECT_NEAR(b.volume(), 0.2 * 0.5, 1e-15);
  EXPECT_GT(b.volume(), 0.0);
  EXPECT_LE(b.volume(), 1.0);
}

TEST(Torus, ChartExamples) {
  const Chart chart({0.0, 0.0});
  const Vec s = chart.forward(TorusPoint{0.25, 0.25});
  EXPECT_EQ(s[0], 0.25);
  EXPECT_EQ(s[1], 0.25);
  EXPECT_EQ(chart.forward(TorusPoint{0.0, 0.7})[0], 0.0);
  EXPECT_EQ(chart.forward(TorusPoint{0.98, 0.0})[0], 0.98 - 1.0);
  EXPECT_THROW(chart.forward(TorusPoint{0.5, 0.0}), DomainError);
}

TEST(Torus, ChartRoundTrip) {
  const Chart chart({0.0, 0.0});
  Rng rng(21);
  for (int i = 0; i < 1000; ++i) {
    const TorusPoint pt = TorusPoint{reduce(rng.uniform(-0.449, 0.449)), reduce(rng.uniform(-0.449, 0.449))};
    ASSERT_TRUE(chart.in_window(pt));
    EXPECT_EQ(chart.backward(chart.forward(pt)), pt);
  }
}
