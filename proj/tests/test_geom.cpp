#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "linklock/geom.hpp"
#include "oracles.hpp"

using namespace linklock;

namespace {
Vec2 V(double x, double y) { return {x, y}; }
std::string K(Vec2 a, Vec2 b, Vec2 c, Vec2 d) { return to_string(classify_pair(a, b, c, d).kind); }
}  // namespace

TEST(Classify, BasicKinds) {
    EXPECT_EQ(K(V(0, 0), V(1, 0), V(0, 1), V(1, 1)), "disjoint");
    EXPECT_EQ(K(V(0, 0), V(1, 0), V(1, 0), V(1, 1)), "shared-endpoint-only");
    EXPECT_EQ(K(V(0, 0), V(2, 0), V(1, 0), V(1, 1)), "touching-noncrossing");
    EXPECT_EQ(K(V(0, 0), V(2, 2), V(0, 2), V(2, 0)), "properly-crossing");
    EXPECT_EQ(K(V(0, 0), V(2, 0), V(1, 0), V(3, 0)), "overlapping-collinear");
    EXPECT_EQ(K(V(0, 0), V(1, 0), V(1, 0), V(3, 0)), "shared-endpoint-only");
    EXPECT_EQ(K(V(0, 0), V(1, 0), V(2, 0), V(3, 0)), "disjoint");
}

TEST(Classify, Degenerate) {
    EXPECT_EQ(K(V(1, 1), V(1, 1), V(1, 1), V(1, 1)), "shared-endpoint-only");
    EXPECT_EQ(K(V(1, 0), V(1, 0), V(0, 0), V(2, 0)), "touching-noncrossing");
    EXPECT_EQ(K(V(0, 0), V(0, 0), V(0, 0), V(2, 0)), "shared-endpoint-only");
    EXPECT_EQ(K(V(0, 1), V(0, 1), V(0, 0), V(2, 0)), "disjoint");
}

TEST(Classify, Witness) {
    auto c = classify_pair(V(0, 0), V(2, 2), V(0, 2), V(2, 0));
    EXPECT_NEAR(c.w0.x, 1, 1e-12);
    EXPECT_NEAR(c.w0.y, 1, 1e-12);
    auto o = classify_pair(V(0, 0), V(2, 0), V(1, 0), V(3, 0));
    EXPECT_NEAR(std::min(o.w0.x, o.w1.x), 1, 1e-12);
    EXPECT_NEAR(std::max(o.w0.x, o.w1.x), 2, 1e-12);
}

// Symmetric under swapping the segments and reversing either one.
TEST(Classify, SymmetryProperty) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> D(-2, 2);
    for (int i = 0; i < 5000; ++i) {
        Vec2 p[4];
        for (auto& v : p) v = V(D(rng), D(rng));
        auto k = K(p[0], p[1], p[2], p[3]);
        EXPECT_EQ(k, K(p[2], p[3], p[0], p[1]));
        EXPECT_EQ(k, K(p[1], p[0], p[2], p[3]));
        EXPECT_EQ(k, K(p[0], p[1], p[3], p[2]));
    }
}

TEST(Classify, AgreesWithExactOracleOnGrid) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> D(-3, 3);
    for (int i = 0; i < 20000; ++i) {
        oracle::IP p[4];
        for (auto& v : p) v = {D(rng), D(rng)};
        auto want = oracle::classify_exact(p[0], p[1], p[2], p[3]);
        auto got = K(V(p[0].x, p[0].y), V(p[1].x, p[1].y), V(p[2].x, p[2].y), V(p[3].x, p[3].y));
        ASSERT_EQ(got, want) << i;
    }
}

TEST(Angles, AngleAt) {
    EXPECT_NEAR(*angle_at(V(1, 0), V(0, 0), V(0, 1)), std::numbers::pi / 2, 1e-15);
    EXPECT_NEAR(*angle_at(V(1, 0), V(0, 0), V(-1, 0)), std::numbers::pi, 1e-15);
    EXPECT_FALSE(angle_at(V(0, 0), V(0, 0), V(1, 0)).has_value());
}

TEST(Angles, ConvexSurrounds) {
    Segment bp{V(0, 0), V(1, 0)}, bpp{V(0, 0), V(0, 1)};
    Segment inside{V(0, 0), V(1, 1)}, outside{V(0, 0), V(-1, -1)};
    EXPECT_TRUE(*convex_angle_surrounds(inside, bp, bpp, Side::left));
    EXPECT_FALSE(*convex_angle_surrounds(outside, bp, bpp, Side::left));
    // Sweeping right from +x to +y is 270 degrees: not convex.
    EXPECT_FALSE(*convex_angle_surrounds(inside, bp, bpp, Side::right));
    EXPECT_TRUE(*convex_angle_surrounds(inside, bpp, bp, Side::right));
    // Boundary inclusive.
    EXPECT_TRUE(*convex_angle_surrounds(Segment{V(0, 0), V(2, 0)}, bp, bpp, Side::left));
    // Non-incident edge uses its midpoint.
    EXPECT_TRUE(*convex_angle_surrounds(Segment{V(0.5, 0.2), V(0.2, 0.5)}, bp, bpp, Side::left));
    EXPECT_FALSE(convex_angle_surrounds(inside, bp, Segment{V(5, 5), V(6, 6)}, Side::left).has_value());
}
