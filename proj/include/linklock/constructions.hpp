#pragma once
// Fixture builders: the 11-edge collinear tree, its orthogonal 21-edge
// realization, and a few controls.

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "rigidity.hpp"
#include "touching.hpp"

namespace linklock {

// A tree whose vertices sit on three points of a vertical line: level 0 at
// (0, s), level 1 at the origin, level 2 at (0, -s).
struct LevelTree {
    std::vector<std::string> names;
    std::vector<int> level;
    std::vector<std::pair<int, int>> edges;
};

namespace cons_detail {

inline Vec2 level_point(int level, double scale) { return {0.0, scale * (1 - level)}; }

inline TouchingConfig make_touching(std::shared_ptr<Linkage> L, std::vector<Vec2> X, std::vector<Vec2> O) {
    for (const auto& v : L->vertices) L->rotation[v] = {};
    TouchingConfig tc{{L, std::move(X)}, std::move(O), 0};
    tc = finalize(tc);
    if (!(tc.epsilon0 > 0)) throw ValidationError("fixture: no nontouching pulled-apart drawing");
    L->rotation = rotation_from_drawing(*L, tc.pulled_apart(tc.reference_epsilon()));
    L->validate();
    return tc;
}

inline Configuration make_config(std::shared_ptr<Linkage> L, std::vector<Vec2> x) {
    auto ep = endpoints(*L);
    for (std::size_t i = 0; i < ep.size(); ++i) L->edges[i].length = dist(x[ep[i].first], x[ep[i].second]);
    L->rotation = rotation_from_drawing(*L, x);
    L->validate();
    return {L, std::move(x)};
}

}  // namespace cons_detail

inline const LevelTree& fig2_tree() {
    // 0 = top, 1 = middle, 2 = bottom
    static const LevelTree t{
        {"A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L"},
        {2, 2, 0, 1, 0, 1, 2, 0, 1, 0, 1, 1},
        // CA CF EF DG DB BH AL FG BK BI BJ
        {{2, 0}, {2, 5}, {4, 5}, {3, 6}, {3, 1}, {1, 7}, {0, 11}, {5, 6}, {1, 10}, {1, 8}, {1, 9}},
    };
    return t;
}

// Pull-apart directions of the 11-edge fixture (units of the scale).
inline const std::vector<Vec2>& fig2_offsets() {
    static const std::vector<Vec2> o{{0, 0}, {0, -2}, {1, 1}, {-2, -2}, {1, -2}, {3, 1},
                                     {0, -3}, {1, -1}, {-1, -2}, {1, 0}, {-1, 0}, {0, 2}};
    return o;
}

inline TouchingConfig level_fixture(const LevelTree& t, const std::vector<Vec2>& offsets, double scale = 1) {
    auto L = std::make_shared<Linkage>();
    L->vertices = t.names;
    std::vector<Vec2> X, O;
    for (std::size_t i = 0; i < t.names.size(); ++i) {
        X.push_back(cons_detail::level_point(t.level[i], scale));
        O.push_back(scale * offsets[i]);
    }
    for (auto [a, b] : t.edges)
        L->edges.push_back({t.names[a], t.names[b], scale * std::abs(t.level[a] - t.level[b])});
    return cons_detail::make_touching(L, X, O);
}

inline TouchingConfig fig2(double scale = 1) { return level_fixture(fig2_tree(), fig2_offsets(), scale); }

// Orthogonal layout of a level tree: every edge gets its own column, every
// vertex a height at its level. Vertex v of degree d becomes d copies, one per
// incident edge, joined left to right by zero-length edges.
struct OrthoLayout {
    std::vector<double> column;  // per edge
    std::vector<double> height;  // per vertex
};

inline const OrthoLayout& fig3_layout() {
    static const OrthoLayout o{
        {3, 16, 6, -5, -4, 5, -1, 18, -2, -3, 4},
        {2, -3, 2, -4, -2, -4, -4, -3, -2, -2, -2, -4},
    };
    return o;
}

// Zero-length-edge augmentation of a level tree with the orthogonal layout as
// its pull-apart direction.
inline TouchingConfig split_fixture(const LevelTree& t, const OrthoLayout& lay, double scale = 1) {
    auto L = std::make_shared<Linkage>();
    std::vector<Vec2> X, O;
    int n = int(t.names.size());
    std::vector<std::vector<int>> inc(n);
    for (int e = 0; e < int(t.edges.size()); ++e) {
        inc[t.edges[e].first].push_back(e);
        inc[t.edges[e].second].push_back(e);
    }
    // copy_of[v][k]: vertex id of v's copy serving inc[v][k] after sorting by column
    std::vector<std::vector<std::string>> copy(n);
    std::vector<std::pair<std::string, std::string>> zero;
    for (int v = 0; v < n; ++v) {
        std::sort(inc[v].begin(), inc[v].end(), [&](int a, int b) { return lay.column[a] < lay.column[b]; });
        for (std::size_t k = 0; k < inc[v].size(); ++k) {
            std::string id = k == 0 ? t.names[v] : t.names[v] + std::to_string(k);
            copy[v].push_back(id);
            if (k > 0) zero.push_back({copy[v][k - 1], id});
        }
        if (inc[v].empty()) copy[v].push_back(t.names[v]);
    }
    auto add = [&](int v, std::size_t k) {
        L->vertices.push_back(copy[v][k]);
        X.push_back(cons_detail::level_point(t.level[v], scale));
        double col = inc[v].empty() ? 0 : lay.column[inc[v][k]];
        O.push_back(scale * Vec2{col, lay.height[v]});
    };
    for (int v = 0; v < n; ++v) add(v, 0);
    for (int v = 0; v < n; ++v)
        for (std::size_t k = 1; k < copy[v].size(); ++k) add(v, k);
    for (int e = 0; e < int(t.edges.size()); ++e) {
        auto [a, b] = t.edges[e];
        auto slot = [&](int v) {
            return copy[v][std::find(inc[v].begin(), inc[v].end(), e) - inc[v].begin()];
        };
        L->edges.push_back({slot(a), slot(b), scale * std::abs(t.level[a] - t.level[b])});
    }
    for (auto& [a, b] : zero) L->edges.push_back({a, b, 0.0});
    return cons_detail::make_touching(L, X, O);
}

inline TouchingConfig fig2_zero(double scale = 1) { return split_fixture(fig2_tree(), fig3_layout(), scale); }

// The orthogonal tree: horizontal edges are multiples of h (columns h apart),
// coincident vertices are separated vertically by multiples of g. All 21 edges
// are axis-parallel; lengths are those of the drawing.
inline Configuration fig3(double h, double g, double scale = 1) {
    if (!(h > 0) || !(g > 0)) throw ValidationError("fig3: h and g must be positive; use fig2_zero for the limit");
    auto z = fig2_zero(scale);
    auto x = z.base.coords;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = x[i] + (1 / scale) * Vec2{h * z.offsets[i].x, g * z.offsets[i].y};
    auto L = std::make_shared<Linkage>(z.linkage());
    auto c = cons_detail::make_config(L, x);
    if (!is_nontouching(c)) throw ValidationError("fig3: h, g too large for a nontouching drawing");
    return c;
}

inline Configuration fig3(double scale = 1) { return fig3(scale / 100, scale / 100, scale); }

// Every fig3 vertex lies within fig3_constant() * max(h, g) of its base point.
inline double fig3_constant() {
    double c = 0;
    for (double col : fig3_layout().column)
        for (double ht : fig3_layout().height) c = std::max(c, std::hypot(col, ht));
    return c;
}

// The merged system left after reducing fig2: clusters as joints.
inline MergedSystem fig2b(double scale = 1) {
    auto tc = fig2(scale);
    return merged_system(tc, reduce(tc));
}

// A random nontouching fold of n edges (turns up to 0.9 pi), resampled until
// clean. Deterministic in seed.
inline Configuration chain(int n, unsigned long seed = 1, double scale = 1) {
    if (n < 1) throw ValidationError("chain: need at least one edge");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> turn(-0.9 * std::numbers::pi, 0.9 * std::numbers::pi);
    auto L = std::make_shared<Linkage>();
    for (int i = 0; i <= n; ++i) L->vertices.push_back("v" + std::to_string(i));
    for (int i = 0; i < n; ++i) L->edges.push_back({L->vertices[i], L->vertices[i + 1], scale});
    for (;;) {
        std::vector<Vec2> x{{0, 0}};
        double a = 0;
        for (int i = 0; i < n; ++i) {
            if (i > 0) a += turn(rng);
            x.push_back(x.back() + scale * Vec2{std::cos(a), std::sin(a)});
        }
        if (is_nontouching(*L, x)) return cons_detail::make_config(L, x);
    }
}

// Eleven unit axis-parallel edges: a spine of five with six teeth.
inline Configuration comb(double scale = 1) {
    auto L = std::make_shared<Linkage>();
    std::vector<Vec2> x;
    for (int i = 0; i <= 5; ++i) {
        L->vertices.push_back("s" + std::to_string(i));
        x.push_back(scale * Vec2{double(i), 0.0});
    }
    for (int i = 0; i <= 5; ++i) {
        L->vertices.push_back("t" + std::to_string(i));
        x.push_back(scale * Vec2{double(i), 1.0});
    }
    for (int i = 0; i < 5; ++i) L->edges.push_back({"s" + std::to_string(i), "s" + std::to_string(i + 1), scale});
    for (int i = 0; i <= 5; ++i) L->edges.push_back({"s" + std::to_string(i), "t" + std::to_string(i), scale});
    return cons_detail::make_config(L, x);
}

// A nontouching configuration viewed as a touching one with nothing to pull apart.
inline TouchingConfig as_touching(const Configuration& c) {
    TouchingConfig tc{c, std::vector<Vec2>(c.coords.size()), 0};
    return finalize(tc);
}

// Drops one edge; the result is a forest.
inline TouchingConfig remove_edge(const TouchingConfig& tc, const std::string& name) {
    int e = tc.linkage().find_edge(name);
    if (e < 0) throw ValidationError("remove_edge: no edge '" + name + "'");
    auto L = std::make_shared<Linkage>(tc.linkage());
    L->edges.erase(L->edges.begin() + e);
    L->forest = true;
    return cons_detail::make_touching(L, tc.base.coords, tc.offsets);
}

// Control: a delta-perturbed fig2 with DG removed. Two components, so nothing
// pins the pieces against each other.
inline Configuration fig2_cut(double delta = 0.01, unsigned long seed = 1, double scale = 1) {
    auto c = perturb(fig2(scale), delta, seed);
    auto L = std::make_shared<Linkage>(*c.linkage);
    L->edges.erase(L->edges.begin() + L->find_edge("DG"));
    L->forest = true;
    return cons_detail::make_config(L, c.coords);
}

inline std::vector<std::pair<std::string, Configuration>> control_instances(unsigned long seed = 1, double delta = 0.01) {
    std::vector<std::pair<std::string, Configuration>> out;
    for (int n : {4, 8, 16}) out.emplace_back("chain-" + std::to_string(n), chain(n, seed));
    out.emplace_back("comb", comb());
    out.emplace_back("fig2-cut", fig2_cut(delta, seed));
    return out;
}

inline const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> n{"fig2", "fig2-zero", "fig3", "chain-4", "chain-8", "chain-16", "comb", "fig2-cut"};
    return n;
}

}  // namespace linklock
