#include <gtest/gtest.h>

#include <random>

#include "linklock/model.hpp"
#include "oracles.hpp"

using namespace linklock;

namespace {

std::shared_ptr<Linkage> path(int n) {
    auto L = std::make_shared<Linkage>();
    for (int i = 0; i <= n; ++i) L->vertices.push_back("v" + std::to_string(i));
    for (int i = 0; i < n; ++i) L->edges.push_back({L->vertices[i], L->vertices[i + 1], 1});
    for (const auto& v : L->vertices) L->rotation[v] = L->incident(v);
    return L;
}

void expect_invalid(const Linkage& L, const std::string& fragment) {
    try {
        L.validate();
        FAIL() << "expected ValidationError mentioning " << fragment;
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
}

}  // namespace

TEST(Linkage, ValidTree) { EXPECT_NO_THROW(path(3)->validate()); }

TEST(Linkage, RejectsBrokenInvariants) {
    {
        auto L = path(2);
        L->edges[1].length = -1;
        expect_invalid(*L, "negative");
    }
    {
        auto L = path(2);
        L->edges.push_back({"v0", "v2", 1});
        for (const auto& v : L->vertices) L->rotation[v] = L->incident(v);
        expect_invalid(*L, "not a tree");
    }
    {
        auto L = path(2);
        L->vertices.push_back("v0");
        expect_invalid(*L, "duplicate");
    }
    {
        auto L = path(2);
        L->edges[0].b = "zz";
        expect_invalid(*L, "unknown endpoint");
    }
    {
        auto L = path(2);
        L->rotation["v1"] = {0};
        expect_invalid(*L, "rotation[v1]");
    }
    {
        auto L = path(3);
        L->edges[2] = {"v2", "v0", 1};  // cycle v0 v1 v2, v3 cut off
        for (const auto& v : L->vertices) L->rotation[v] = L->incident(v);
        expect_invalid(*L, "cycle");
    }
}

TEST(Linkage, ForestNeedsFlag) {
    auto L = path(3);
    L->edges.erase(L->edges.begin() + 1);
    for (const auto& v : L->vertices) L->rotation[v] = L->incident(v);
    expect_invalid(*L, "not a tree");
    L->forest = true;
    EXPECT_NO_THROW(L->validate());
}

TEST(Linkage, Lookup) {
    auto L = path(2);
    EXPECT_EQ(L->find_edge("v1v0"), 0);
    EXPECT_EQ(L->find_edge("v1", "v2"), 1);
    EXPECT_EQ(L->find_edge("v0", "v2"), -1);
    EXPECT_EQ(L->other(0, "v0"), "v1");
    EXPECT_THROW(L->index_of("nope"), ValidationError);
}

TEST(Configuration, LengthResidualAndTouching) {
    auto L = path(2);
    Configuration c{L, {{0, 0}, {1, 0}, {1, 1}}};
    EXPECT_LT(edge_length_residual(c), 1e-15);
    EXPECT_TRUE(is_nontouching(c));
    c.coords[2] = {0.5, 0};  // folds back onto the first edge
    EXPECT_FALSE(is_nontouching(c));
    EXPECT_FALSE(has_crossing(*L, c.coords));
}

TEST(Configuration, SharedVertexTouchingElsewhere) {
    auto L = std::make_shared<Linkage>();
    L->vertices = {"a", "b", "c"};
    L->edges = {{"a", "b", 1}, {"a", "c", 1}};
    for (const auto& v : L->vertices) L->rotation[v] = L->incident(v);
    // Both edges from a, along the same ray: they overlap, not just share a.
    EXPECT_FALSE(is_nontouching(*L, {{0, 0}, {1, 0}, {0.5, 0}}));
    EXPECT_TRUE(is_nontouching(*L, {{0, 0}, {1, 0}, {0, 1}}));
}

// Nontouching agrees with an all-pairs check using the exact integer classifier:
// incident edges may share only their endpoint, all other pairs are disjoint.
TEST(Configuration, NontouchingMatchesBruteForce) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> D(-3, 3);
    auto L = path(4);
    int clean = 0;
    for (int k = 0; k < 5000; ++k) {
        std::vector<Vec2> x;
        std::vector<oracle::IP> ip;
        for (int i = 0; i < 5; ++i) {
            ip.push_back({D(rng), D(rng)});
            x.push_back({double(ip.back().x), double(ip.back().y)});
        }
        bool ok = true;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                auto kind = oracle::classify_exact(ip[i], ip[i + 1], ip[j], ip[j + 1]);
                ok = ok && (j == i + 1 ? kind == "shared-endpoint-only" : kind == "disjoint");
            }
        clean += ok;
        ASSERT_EQ(is_nontouching(*L, x), ok) << "sample " << k;
    }
    EXPECT_GT(clean, 100);
}

TEST(Rotation, CounterClockwiseFromDrawing) {
    auto L = std::make_shared<Linkage>();
    L->vertices = {"o", "e", "n", "w", "s"};
    L->edges = {{"o", "s", 1}, {"o", "w", 1}, {"o", "e", 1}, {"o", "n", 1}};
    auto rot = rotation_from_drawing(*L, {{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}});
    // Starting anywhere, CCW order is e, n, w, s.
    auto r = rot["o"];
    ASSERT_EQ(r.size(), 4u);
    std::vector<std::string> names;
    for (int e : r) names.push_back(L->other(e, "o"));
    auto it = std::find(names.begin(), names.end(), "e");
    std::rotate(names.begin(), it, names.end());
    EXPECT_EQ(names, (std::vector<std::string>{"e", "n", "w", "s"}));
}

TEST(Components, SplitForest) {
    auto L = path(4);
    L->edges.erase(L->edges.begin() + 1);  // v0-v1 | v2-v3-v4
    L->forest = true;
    for (const auto& v : L->vertices) L->rotation[v] = L->incident(v);
    Configuration c{L, {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}}};
    auto parts = split_components(c);
    ASSERT_EQ(parts.size(), 2u);
    EXPECT_EQ(parts[0].linkage->edges.size(), 1u);
    EXPECT_EQ(parts[1].linkage->edges.size(), 2u);
    EXPECT_EQ(parts[1].coords.size(), 3u);
    for (auto& p : parts) EXPECT_NO_THROW(p.linkage->validate());
}

TEST(Motion, Validation) {
    auto L = path(1);
    Motion m{L, {{0, {{0, 0}, {1, 0}}}, {1, {{0, 0}, {0, 1}}}}};
    EXPECT_NO_THROW(m.validate());
    m.samples[1].t = 0.5;
    EXPECT_THROW(m.validate(), ValidationError);
    m.samples[1].t = 1;
    m.samples[1].coords.pop_back();
    EXPECT_THROW(m.validate(), ValidationError);
}
