#pragma once
// Linkages, configurations and motions.

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geom.hpp"

namespace linklock {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Edge {
    std::string a, b;
    double length = 0;
};

struct Linkage {
    std::vector<std::string> vertices;
    std::vector<Edge> edges;
    // Per vertex: incident edge indices in counter-clockwise order.
    std::map<std::string, std::vector<int>> rotation;
    std::string outerFace = "outer";
    // Controls only: allow several components (still acyclic).
    bool forest = false;

    int index_of(const std::string& v) const {
        auto it = std::find(vertices.begin(), vertices.end(), v);
        if (it == vertices.end()) throw ValidationError("unknown vertex '" + v + "'");
        return int(it - vertices.begin());
    }
    bool has_vertex(const std::string& v) const {
        return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
    }
    std::string edge_name(int e) const { return edges[e].a + edges[e].b; }
    // Edge index by name "XY" or by endpoints in either order; -1 if absent.
    int find_edge(const std::string& u, const std::string& v) const {
        for (int i = 0; i < int(edges.size()); ++i)
            if ((edges[i].a == u && edges[i].b == v) || (edges[i].a == v && edges[i].b == u)) return i;
        return -1;
    }
    int find_edge(const std::string& name) const {
        for (int i = 0; i < int(edges.size()); ++i)
            if (edge_name(i) == name || edges[i].b + edges[i].a == name) return i;
        return -1;
    }
    std::vector<int> incident(const std::string& v) const {
        std::vector<int> out;
        for (int i = 0; i < int(edges.size()); ++i)
            if (edges[i].a == v || edges[i].b == v) out.push_back(i);
        return out;
    }
    std::string other(int e, const std::string& v) const { return edges[e].a == v ? edges[e].b : edges[e].a; }

    // Throws ValidationError naming the first broken invariant.
    void validate() const {
        if (vertices.empty()) throw ValidationError("vertices: empty");
        {
            auto s = vertices;
            std::sort(s.begin(), s.end());
            if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw ValidationError("vertices: duplicate id");
        }
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const Edge& e = edges[i];
            if (!has_vertex(e.a) || !has_vertex(e.b))
                throw ValidationError("edges[" + std::to_string(i) + "]: unknown endpoint");
            if (e.a == e.b) throw ValidationError("edges[" + std::to_string(i) + "]: self-loop");
            if (!(e.length >= 0)) throw ValidationError("edges[" + std::to_string(i) + "].length: negative");
            for (std::size_t j = 0; j < i; ++j) {
                const Edge& f = edges[j];
                if ((f.a == e.a && f.b == e.b) || (f.a == e.b && f.b == e.a))
                    throw ValidationError("edges: multi-edge " + e.a + e.b);
            }
        }
        if (!forest && edges.size() + 1 != vertices.size()) throw ValidationError("edges: not a tree (|E| != |V| - 1)");
        std::vector<int> p(vertices.size());
        std::iota(p.begin(), p.end(), 0);
        auto find = [&](int x) { while (p[x] != x) x = p[x] = p[p[x]]; return x; };
        for (const Edge& e : edges) {
            int a = find(index_of(e.a)), b = find(index_of(e.b));
            if (a == b) throw ValidationError("edges: cycle through " + e.a + e.b);
            p[a] = b;
        }
        for (std::size_t i = 0; i < vertices.size(); ++i)
            if (!forest && find(int(i)) != find(0)) throw ValidationError("edges: graph is disconnected");
        for (const auto& [v, rot] : rotation) {
            if (!has_vertex(v)) throw ValidationError("rotation: unknown vertex '" + v + "'");
            auto inc = incident(v);
            auto r = rot;
            std::sort(r.begin(), r.end());
            if (r != inc) throw ValidationError("rotation[" + v + "]: must list each incident edge once");
        }
        for (const auto& v : vertices)
            if (!rotation.count(v)) throw ValidationError("rotation: missing vertex '" + v + "'");
        if (outerFace.empty()) throw ValidationError("outerFace: empty");
    }
};

struct Configuration {
    std::shared_ptr<const Linkage> linkage;
    std::vector<Vec2> coords;  // indexed like linkage->vertices

    Vec2 at(const std::string& v) const { return coords[linkage->index_of(v)]; }
    Segment segment(int e) const {
        const Edge& E = linkage->edges[e];
        return {at(E.a), at(E.b)};
    }
};

struct MotionSample {
    double t = 0;
    std::vector<Vec2> coords;
};

struct Motion {
    std::shared_ptr<const Linkage> linkage;
    std::vector<MotionSample> samples;

    Configuration config(std::size_t i) const { return {linkage, samples[i].coords}; }

    void validate() const {
        if (samples.empty()) throw ValidationError("samples: empty");
        if (samples.front().t != 0) throw ValidationError("samples[0].t: must be 0");
        if (samples.back().t != 1) throw ValidationError("samples[last].t: must be 1");
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (samples[i].coords.size() != linkage->vertices.size())
                throw ValidationError("samples[" + std::to_string(i) + "].coords: wrong vertex count");
            if (i > 0 && !(samples[i].t > samples[i - 1].t))
                throw ValidationError("samples[" + std::to_string(i) + "].t: not strictly increasing");
        }
    }
};

// One configuration per connected component, in order of first vertex.
inline std::vector<Configuration> split_components(const Configuration& c) {
    const Linkage& L = *c.linkage;
    int n = int(L.vertices.size());
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    auto find = [&](int x) { while (p[x] != x) x = p[x] = p[p[x]]; return x; };
    for (const Edge& e : L.edges) p[find(L.index_of(e.a))] = find(L.index_of(e.b));
    std::vector<Configuration> out;
    std::map<int, std::size_t> slot;
    std::vector<std::shared_ptr<Linkage>> parts;
    for (int i = 0; i < n; ++i) {
        int r = find(i);
        if (!slot.count(r)) {
            slot[r] = parts.size();
            parts.push_back(std::make_shared<Linkage>());
            parts.back()->outerFace = L.outerFace;
            out.push_back({nullptr, {}});
        }
        parts[slot[r]]->vertices.push_back(L.vertices[i]);
        out[slot[r]].coords.push_back(c.coords[i]);
    }
    for (std::size_t e = 0; e < L.edges.size(); ++e) {
        auto& P = *parts[slot[find(L.index_of(L.edges[e].a))]];
        P.edges.push_back(L.edges[e]);
    }
    for (std::size_t k = 0; k < parts.size(); ++k) {
        for (const auto& v : parts[k]->vertices) {
            auto& r = parts[k]->rotation[v];
            for (int e : L.rotation.at(v)) r.push_back(parts[k]->find_edge(L.edges[e].a, L.edges[e].b));
        }
        out[k].linkage = parts[k];
    }
    return out;
}

// Edge indices a and b share an endpoint.
inline bool adjacent(const Linkage& L, int a, int b) {
    const Edge &A = L.edges[a], &B = L.edges[b];
    return A.a == B.a || A.a == B.b || A.b == B.a || A.b == B.b;
}

inline std::vector<std::vector<int>> incidence(const Linkage& L) {
    std::vector<std::vector<int>> inc(L.vertices.size());
    for (int i = 0; i < int(L.edges.size()); ++i) {
        inc[L.index_of(L.edges[i].a)].push_back(i);
        inc[L.index_of(L.edges[i].b)].push_back(i);
    }
    return inc;
}

// Endpoint index pairs per edge, resolved once.
inline std::vector<std::pair<int, int>> endpoints(const Linkage& L) {
    std::vector<std::pair<int, int>> out;
    out.reserve(L.edges.size());
    for (const Edge& e : L.edges) out.emplace_back(L.index_of(e.a), L.index_of(e.b));
    return out;
}

inline double edge_length_residual(const Configuration& c) {
    double r = 0;
    for (const Edge& e : c.linkage->edges) r = std::max(r, std::abs(dist(c.at(e.a), c.at(e.b)) - e.length));
    return r;
}

inline double edge_length_residual(const Linkage& L, const std::vector<Vec2>& x) {
    double r = 0;
    auto ep = endpoints(L);
    for (std::size_t i = 0; i < ep.size(); ++i)
        r = std::max(r, std::abs(dist(x[ep[i].first], x[ep[i].second]) - L.edges[i].length));
    return r;
}

// Pair (i, j) of edge indices is in contact beyond what the tree allows.
inline bool pair_conflicts(const std::vector<std::pair<int, int>>& ep, const std::vector<Vec2>& x, int i, int j) {
    auto [a, b] = ep[i];
    auto [c, d] = ep[j];
    auto k = classify_pair(x[a], x[b], x[c], x[d]).kind;
    bool adj = a == c || a == d || b == c || b == d;
    if (adj) return k != PairKind::shared_endpoint_only;
    return k != PairKind::disjoint;
}

inline bool is_nontouching(const Linkage& L, const std::vector<Vec2>& x) {
    auto ep = endpoints(L);
    for (int i = 0; i < int(ep.size()); ++i)
        for (int j = i + 1; j < int(ep.size()); ++j)
            if (pair_conflicts(ep, x, i, j)) return false;
    return true;
}

inline bool is_nontouching(const Configuration& c) { return is_nontouching(*c.linkage, c.coords); }

// True if some pair of edges properly crosses (touching is allowed).
inline bool has_crossing(const Linkage& L, const std::vector<Vec2>& x) {
    auto ep = endpoints(L);
    for (int i = 0; i < int(ep.size()); ++i)
        for (int j = i + 1; j < int(ep.size()); ++j) {
            auto [a, b] = ep[i];
            auto [c, d] = ep[j];
            if (classify_pair(x[a], x[b], x[c], x[d]).kind == PairKind::properly_crossing) return true;
        }
    return false;
}

// Counter-clockwise rotation system read off a drawing.
inline std::map<std::string, std::vector<int>> rotation_from_drawing(const Linkage& L, const std::vector<Vec2>& x) {
    std::map<std::string, std::vector<int>> rot;
    for (const auto& v : L.vertices) {
        Vec2 p = x[L.index_of(v)];
        auto inc = L.incident(v);
        std::vector<std::pair<double, int>> keyed;
        for (int e : inc) {
            Vec2 q = x[L.index_of(L.other(e, v))];
            keyed.emplace_back(std::atan2(q.y - p.y, q.x - p.x), e);
        }
        std::sort(keyed.begin(), keyed.end());
        auto& r = rot[v];
        for (auto& [ang, e] : keyed) r.push_back(e);
    }
    return rot;
}

}  // namespace linklock
