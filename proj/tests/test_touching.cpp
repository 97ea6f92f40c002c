#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "linklock/constructions.hpp"
#include "linklock/touching.hpp"

using namespace linklock;

namespace {

std::shared_ptr<Linkage> make(std::vector<std::string> vs, std::vector<Edge> es) {
    auto L = std::make_shared<Linkage>();
    L->vertices = std::move(vs);
    L->edges = std::move(es);
    for (const auto& v : L->vertices) L->rotation[v] = L->incident(v);
    return L;
}

// Two unit bars on the same segment, pulled apart left and right.
TouchingConfig two_bars(double left_x, double right_x) {
    auto L = make({"a", "b", "c", "d"}, {{"a", "b", 1}, {"c", "d", 1}});
    L->forest = true;
    TouchingConfig tc{{L, {{0, 0}, {0, 1}, {0, 0}, {0, 1}}}, {{left_x, 0}, {left_x, 0}, {right_x, 0}, {right_x, 0}}, 0};
    return finalize(tc);
}

std::vector<TouchingConfig> touching_fixtures() {
    return {fig2(), fig2_zero(), fig2(2.5), as_touching(comb()), as_touching(chain(8, 3))};
}

double max_disp(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, dist(a[i], b[i]));
    return m;
}

}  // namespace

TEST(Epsilon0, SampledLimitProperty) {
    for (const auto& tc : touching_fixtures()) {
        ASSERT_GT(tc.epsilon0, 0);
        for (double e : {tc.epsilon0, tc.epsilon0 / 2, tc.epsilon0 / 10})
            EXPECT_TRUE(is_nontouching(tc.linkage(), tc.pulled_apart(e))) << "eps " << e;
    }
}

TEST(Groups, TwoBarsOrderFollowsOffsets) {
    auto tc = two_bars(-1, 1);
    auto gs = collocation_groups(tc);
    std::vector<CollocationGroup> big;
    for (auto& g : gs)
        if (g.members.size() > 1) big.push_back(g);
    ASSERT_EQ(big.size(), 1u);
    // Reference direction is upward; increasing order runs to the right.
    EXPECT_EQ(big[0].members, (std::vector<int>{0, 1}));
    auto swapped = collocation_groups(two_bars(1, -1));
    for (auto& g : swapped)
        if (g.members.size() > 1) EXPECT_EQ(g.members, (std::vector<int>{1, 0}));
}

TEST(Groups, NontouchingGivesSingletons) {
    for (auto& g : collocation_groups(as_touching(comb()))) EXPECT_EQ(g.members.size(), 1u);
}

TEST(Groups, Fig2TopSegmentHoldsTheNamedBars) {
    auto tc = fig2();
    const Linkage& L = tc.linkage();
    for (auto& g : collocation_groups(tc)) {
        if (!(std::abs(g.p.y - 1) < 1e-12 || std::abs(g.q.y - 1) < 1e-12)) continue;
        std::set<std::string> names;
        for (int e : g.members) names.insert(L.edge_name(e));
        for (auto n : {"CA", "CF", "EF"}) EXPECT_TRUE(names.count(n)) << n;
    }
}

TEST(Groups, OrderStableBetweenEps0AndTenth) {
    for (const auto& tc : touching_fixtures()) {
        auto tenth = tc;
        tenth.epsilon0 = tc.epsilon0 / 10;  // groups are read at eps0 and eps0/10 internally
        auto a = collocation_groups(tc), b = collocation_groups(tenth);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].members, b[i].members);
    }
}

// Membership, and order up to the reversal a mirrored reference direction can
// cause, survive rotating and translating the whole picture.
TEST(Groups, InvariantUnderRigidMotion) {
    auto tc = fig2();
    for (double ang : {0.3, 1.2, 2.9}) {
        auto moved = tc;
        double c = std::cos(ang), s = std::sin(ang);
        auto rot = [&](Vec2 p) { return Vec2{c * p.x - s * p.y, s * p.x + c * p.y}; };
        for (auto& p : moved.base.coords) p = rot(p) + Vec2{3, -2};
        for (auto& o : moved.offsets) o = rot(o);
        auto a = collocation_groups(tc), b = collocation_groups(moved);
        std::multiset<std::vector<int>> A, B;
        for (auto& g : a) {
            auto m = g.members;
            if (m.size() > 1 && m.front() > m.back()) std::reverse(m.begin(), m.end());
            A.insert(m);
        }
        for (auto& g : b) {
            auto m = g.members;
            if (m.size() > 1 && m.front() > m.back()) std::reverse(m.begin(), m.end());
            B.insert(m);
        }
        EXPECT_EQ(A, B) << "angle " << ang;
    }
}

TEST(Perturb, ZeroIsBase) {
    auto tc = fig2();
    auto c = perturb(tc, 0, 1);
    EXPECT_EQ(c.coords, tc.base.coords);
    EXPECT_FALSE(is_nontouching(c));
}

TEST(Perturb, Fig2SmallDelta) {
    auto tc = fig2();
    for (unsigned long seed = 1; seed <= 20; ++seed) {
        auto c = perturb(tc, 0.01, seed);
        EXPECT_EQ(c.linkage->edges.size(), 11u);
        EXPECT_TRUE(is_nontouching(c));
        EXPECT_LE(max_disp(c.coords, tc.base.coords), 0.01 + 1e-15);
        EXPECT_LT(edge_length_residual(c), 1e-12);  // lengths are recomputed
    }
}

TEST(Perturb, DeterministicInSeed) {
    auto tc = fig2();
    EXPECT_EQ(perturb(tc, 0.05, 9).coords, perturb(tc, 0.05, 9).coords);
    EXPECT_NE(perturb(tc, 0.05, 9).coords, perturb(tc, 0.05, 10).coords);
}

TEST(Perturb, DisplacementBoundProperty) {
    auto tc = fig2_zero();
    for (double d : {1e-4, 1e-3, 1e-2, 0.05})
        for (unsigned long seed = 0; seed < 10; ++seed) {
            auto c = perturb(tc, d, seed);
            EXPECT_LE(max_disp(c.coords, tc.base.coords), d * (1 + 1e-12));
            EXPECT_TRUE(is_nontouching(c));
        }
}

TEST(Perturb, RefusesWithSafeDelta) {
    auto tc = fig2();
    try {
        perturb(tc, 5.0, 1);
        FAIL() << "expected refusal";
    } catch (const PerturbRefused& e) {
        EXPECT_GT(e.safe_delta, 0);
        EXPECT_LT(e.safe_delta, 5.0);
        EXPECT_NO_THROW(perturb(tc, e.safe_delta, 1));
    }
}

TEST(ZeroEdges, UnitSegment) {
    auto L = make({"a", "b"}, {{"a", "b", 1}});
    TouchingConfig tc{{L, {{0, 0}, {1, 0}}}, {{0, 0}, {0, 0}}, 0};
    tc = finalize(tc);
    auto z = add_zero_length_edges(tc, {{"b", 0, "", {}, {}}});
    EXPECT_EQ(z.linkage().edges.size(), 2u);
    EXPECT_EQ(z.linkage().edges[1].length, 0);
    EXPECT_NO_THROW(z.linkage().validate());
    EXPECT_TRUE(is_nontouching(z.linkage(), z.pulled_apart(z.reference_epsilon())));
    EXPECT_THROW(add_zero_length_edges(tc, {{"b", 5, "", {}, {}}}), ValidationError);
}

// Splitting every vertex of degree d into d copies adds 10 zero-length edges.
TEST(ZeroEdges, Fig2SplitsTo21) {
    auto z = fig2();
    const auto names = z.linkage().vertices;
    for (const auto& v : names) {
        std::string host = v;
        for (std::size_t k = 1;; ++k) {
            // Hand all but one of host's edges to a fresh copy, named as they are now.
            const Linkage& L = z.linkage();
            std::vector<std::string> take;
            for (int e : L.incident(host))
                if (L.edges[e].length > 0) take.push_back(L.edge_name(e));
            if (take.size() < 2) break;
            take.erase(take.begin());
            std::string nv = v + "'" + std::to_string(k);
            z = add_zero_length_edges(z, {{host, 0, nv, {}, take}});
            host = nv;
        }
    }
    EXPECT_EQ(z.linkage().edges.size(), 21u);
    int zero = 0;
    for (auto& e : z.linkage().edges) zero += e.length == 0;
    EXPECT_EQ(zero, 10);
    EXPECT_NO_THROW(z.linkage().validate());
}

TEST(ZeroEdges, PerturbedZeroFixtureIsClean) {
    auto z = fig2_zero();
    auto c = perturb(z, 0.01, 4);
    EXPECT_TRUE(is_nontouching(c));
    for (std::size_t i = 11; i < c.linkage->edges.size(); ++i) EXPECT_LE(c.linkage->edges[i].length, 0.02 + 1e-12);
}
