#include <gtest/gtest.h>

#include <set>

#include "rtmap/errors.hpp"
#include "support.hpp"

using namespace rtmap;
using namespace rtmap::testing;

namespace {

// Smallest power whose image of every sample of U and of V hits each of the
// `cells` grid cells of the circle.
bool covers(int degree, int n, const Arc& a, int cells) {
  const double factor = std::pow(degree, n);
  const double step = 0.5 / (cells * factor);
  std::vector<bool> hit(cells, false);
  for (double x = a.lo() + step / 2; x < a.hi(); x += step) {
    const double y = reduce(factor * x);
    hit[std::min(cells - 1, static_cast<int>(y * cells))] = true;
  }
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

int oracle_power(int degree, const Arc& u, const Arc& v) {
  for (int n = 1; n < 30; ++n)
    if (covers(degree, n, u, 10000) && covers(degree, n, v, 10000)) return n;
  return -1;
}

}  // namespace

TEST(Expanding, DefaultPowerMatchesCoveringOracle) {
  const auto base = default_base();
  EXPECT_EQ(base.power(), 5);
  EXPECT_EQ(base.power(), oracle_power(2, Arc(0.0, 0.02), Arc(0.07, 0.02)));
  EXPECT_EQ(base.factor(), 32.0);
  EXPECT_EQ(base.jacobian_det(), 32.0);
}

TEST(Expanding, WideArcs) {
  // U has length 1/2 and is covered by one doubling; V (length 0.4) needs two
  const auto base = build_expanding(2, arc_box(0.0, 0.25), arc_box(0.5, 0.2), 0.01);
  EXPECT_TRUE(covers(2, 1, Arc(0.0, 0.25), 10000));
  EXPECT_FALSE(covers(2, 1, Arc(0.5, 0.2), 10000));
  EXPECT_EQ(base.power(), 2);
  EXPECT_EQ(base.power(), oracle_power(2, Arc(0.0, 0.25), Arc(0.5, 0.2)));
}

TEST(Expanding, DegreeThreePowerMatchesOracle) {
  // 3^3 * 0.04 = 1.08 already covers the circle
  const auto base = build_expanding(3, arc_box(0.0, 0.02), arc_box(0.07, 0.02), 0.01);
  EXPECT_EQ(base.power(), oracle_power(3, Arc(0.0, 0.02), Arc(0.07, 0.02)));
  EXPECT_EQ(base.power(), 3);
}

TEST(Expanding, Errors) {
  EXPECT_THROW(build_expanding(1, arc_box(0.0, 0.02), arc_box(0.07, 0.02), 0.01), ConfigError);
  try {
    build_expanding(2, arc_box(0.0, 0.02), arc_box(0.05, 0.02), 0.01);
    FAIL() << "overlap accepted";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("U_ε ∩ V_ε = ∅"), std::string::npos);
  }
  EXPECT_THROW(build_expanding(2, arc_box(0.3, 0.02), arc_box(0.07, 0.02), 0.01), ConfigError);
  EXPECT_THROW(build_expanding(2, arc_box(0.0, 0.02), arc_box(0.07, 0.02), 0.01, 2), ConfigError);
}

TEST(Expanding, EvalExamples) {
  const auto base = default_base();
  EXPECT_EQ(eval_F(base, TorusPoint{0.0})[0], 0.0);
  EXPECT_NEAR(eval_F(base, TorusPoint{0.01})[0], 0.32, 1e-15);
  EXPECT_EQ(eval_F(base, TorusPoint{0.5})[0], 0.0);
}

TEST(Expanding, LinearDerivativeScalesEveryVector) {
  const auto base = build_expanding(2, arc_box(0.0, 0.02, 0.0, 0.02), arc_box(0.07, 0.02, 0.07, 0.02), 0.01);
  const ProductMap F(base);
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const TorusPoint pt = random_point(rng, 3);
    Vec v(3);
    for (int k = 0; k < 3; ++k) v[k] = rng.uniform(-1, 1);
    const Vec w = F.jacobian(pt) * v;
    EXPECT_NEAR(w.head(2).norm(), base.factor() * v.head(2).norm(), 1e-12);
  }
}

TEST(Expanding, ImagesOfUAndVCoverTheCircle) {
  const auto base = default_base();
  for (const Box* b : {&base.U(), &base.V()}) {
    std::set<int> cells;
    const Arc& a = b->arc(0);
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const double x = a.lo() + a.width() * (i + 0.5) / n;
      cells.insert(static_cast<int>(eval_F(base, TorusPoint{x})[0] * 2048));
    }
    EXPECT_EQ(cells.size(), 2048u);
  }
}

TEST(Expanding, PreimageOfCircleWithinU) {
  const auto base = default_base();
  const auto comps = preimage_components(base, arc_box(0.5, 0.5), base.U());
  EXPECT_GE(comps.size(), 1u);
  EXPECT_LE(comps.size(), 3u);
  double total = 0.0;
  for (const auto& c : comps) total += c.volume();
  EXPECT_NEAR(total, base.U().volume(), 1e-12);
}

TEST(Expanding, PreimageOfUnionIteratedOnce) {
  const auto base = default_base();
  std::size_t count = 0;
  for (const Box* t : {&base.U(), &base.V()})
    for (const Box* w : {&base.U(), &base.V()}) count += preimage_components(base, *t, *w).size();
  EXPECT_GE(count, 4u);
}

TEST(Expanding, PreimageOfMissedTargetIsEmpty) {
  const auto wide = build_expanding(2, arc_box(0.0, 0.25), arc_box(0.5, 0.2), 0.01);
  // F = doubling; Arc(0.0,0.01) maps onto Arc(0,0.02), which misses Arc(0.5,0.1)
  EXPECT_TRUE(preimage_components(wide, arc_box(0.5, 0.1), arc_box(0.0, 0.01)).empty());
}

TEST(Expanding, PreimageComponentsMapIntoTarget) {
  const auto base = default_base();
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const Box target = arc_box(rng.uniform(), rng.uniform(0.01, 0.3));
    for (const auto& c : preimage_components(base, target, base.V())) {
      for (int k = 0; k < 20; ++k) {
        const Arc& a = c.arc(0);
        const double x = a.lo() + a.width() * (k + 0.5) / 20;
        EXPECT_TRUE(base.V().contains(TorusPoint{x}));
        EXPECT_TRUE(target.contains(eval_F(base, TorusPoint{x})));
      }
    }
  }
}

TEST(Expanding, CantorDepths) {
  const auto base = default_base();
  const auto d0 = cantor_components(base, 0);
  ASSERT_EQ(d0.components.size(), 2u);
  EXPECT_EQ(d0.components[0].arc(0).center(), base.U().arc(0).center());
  EXPECT_EQ(d0.components[1].arc(0).center(), base.V().arc(0).center());
  EXPECT_GE(cantor_components(base, 1).components.size(), 4u);
  const auto d3 = cantor_components(base, 3);
  EXPECT_GE(d3.components.size(), 16u);
  for (const auto& c : d3.components) EXPECT_LE(c.arc(0).width(), 0.04 / (32.0 * 32.0 * 32.0) * (1 + 1e-9));
}

TEST(Expanding, CantorComponentsAreDisjointAndNested) {
  const auto base = default_base();
  for (int depth = 0; depth < 4; ++depth) {
    const auto outer = cantor_components(base, depth);
    const auto inner = cantor_components(base, depth + 1);
    for (std::size_t i = 0; i < inner.components.size(); ++i)
      for (std::size_t j = i + 1; j < inner.components.size(); ++j)
        EXPECT_FALSE(box_intersects(inner.components[i], inner.components[j]));
    for (const auto& c : inner.components) {
      const TorusPoint mid = c.center();
      EXPECT_TRUE(base.U().contains(mid) || base.V().contains(mid));
      const TorusPoint image = eval_F(base, mid);
      bool inside = false;
      for (const auto& o : outer.components) inside = inside || o.contains(image);
      EXPECT_TRUE(inside) << "depth " << depth;
    }
  }
}

TEST(Expanding, CantorInTwoDimensions) {
  const auto base = build_expanding(2, arc_box(0.0, 0.02, 0.0, 0.02), arc_box(0.07, 0.02, 0.07, 0.02), 0.01);
  for (int n = 0; n <= 2; ++n) EXPECT_GE(cantor_components(base, n).components.size(), std::size_t{2} << n);
}
