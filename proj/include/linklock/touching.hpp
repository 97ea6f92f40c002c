#pragma once
// Self-touching configurations encoded as limits of pulled-apart drawings.

#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "model.hpp"

namespace linklock {

struct AmbiguousAnnotation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PerturbRefused : std::runtime_error {
    double safe_delta;
    PerturbRefused(const std::string& m, double safe) : std::runtime_error(m), safe_delta(safe) {}
};

struct TouchingConfig {
    Configuration base;
    std::vector<Vec2> offsets;  // per vertex, same indexing as base.coords
    double epsilon0 = 0;        // filled by finalize()

    const Linkage& linkage() const { return *base.linkage; }

    std::vector<Vec2> pulled_apart(double eps) const {
        std::vector<Vec2> x = base.coords;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = x[i] + eps * offsets[i];
        return x;
    }
    Configuration pulled_apart_config(double eps) const { return {base.linkage, pulled_apart(eps)}; }
    // Reference drawing used for side reads.
    double reference_epsilon() const { return epsilon0 / 2; }
};

// Largest eps in (0, cap] with a nontouching pulled-apart drawing, by
// bisection. The cap (at most 1) keeps every positive-length edge within half
// the eps at which it would start to reverse direction.
inline double compute_epsilon0(const TouchingConfig& tc, int steps = 20) {
    const Linkage& L = tc.linkage();
    double cap = 1.0;
    auto ep = endpoints(L);
    for (auto [a, b] : ep) {
        Vec2 d = tc.base.coords[b] - tc.base.coords[a];
        double k = dot(tc.offsets[b] - tc.offsets[a], d);
        if (norm(d) > TOL_GEOM && k < 0) cap = std::min(cap, 0.5 * dot(d, d) / -k);
    }
    if (is_nontouching(L, tc.pulled_apart(cap))) return cap;
    double lo = 0, hi = cap;
    for (int i = 0; i < steps; ++i) {
        double mid = 0.5 * (lo + hi);
        if (is_nontouching(L, tc.pulled_apart(mid))) lo = mid;
        else hi = mid;
    }
    return lo;
}

inline TouchingConfig finalize(TouchingConfig tc) {
    tc.epsilon0 = compute_epsilon0(tc);
    return tc;
}

// Edges overlapping one elementary interval [p, q] of a line in the base drawing.
struct CollocationGroup {
    Vec2 p, q;                // interval endpoints, p -> q is the reference direction
    std::vector<int> members; // side order: left to right when looking from p to q... see side_coordinate
};

namespace detail {

// Signed offset of a drawn segment at the interval midpoint, measured along
// the right-hand normal of p -> q.
inline std::optional<double> side_coordinate(Vec2 p, Vec2 q, Vec2 a, Vec2 b) {
    Vec2 d = q - p;
    double L = norm(d);
    Vec2 u = (1.0 / L) * d;
    Vec2 m = 0.5 * (p + q);
    double sa = dot(a - m, u), sb = dot(b - m, u);
    if (std::abs(sb - sa) < 1e-15) return std::nullopt;
    double t = -sa / (sb - sa);
    if (t < -1e-12 || t > 1 + 1e-12) return std::nullopt;
    Vec2 at = a + t * (b - a);
    return cross(at - m, u);
}

inline std::vector<int> order_members(const TouchingConfig& tc, Vec2 p, Vec2 q, const std::vector<int>& members,
                                      double eps) {
    auto x = tc.pulled_apart(eps);
    auto ep = endpoints(tc.linkage());
    std::vector<std::pair<double, int>> keyed;
    for (int e : members) {
        auto s = side_coordinate(p, q, x[ep[e].first], x[ep[e].second]);
        if (!s) throw AmbiguousAnnotation("edge " + tc.linkage().edge_name(e) + " does not span its collocation interval");
        keyed.emplace_back(*s, e);
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 1; i < keyed.size(); ++i)
        if (keyed[i].first - keyed[i - 1].first <= 1e-14)
            throw AmbiguousAnnotation("edges " + tc.linkage().edge_name(keyed[i - 1].second) + " and " +
                                      tc.linkage().edge_name(keyed[i].second) + " have no side separation");
    std::vector<int> out;
    for (auto& [s, e] : keyed) out.push_back(e);
    return out;
}

}  // namespace detail

// Elementary intervals between consecutive base points on each supporting line;
// a positive-length edge belongs to the group of every interval it covers.
inline std::vector<CollocationGroup> collocation_groups(const TouchingConfig& tc) {
    const Linkage& L = tc.linkage();
    auto ep = endpoints(L);
    const auto& X = tc.base.coords;
    int m = int(L.edges.size());
    std::vector<char> done(m, 0);
    std::vector<CollocationGroup> groups;
    std::vector<std::vector<int>> intervals_of(m);

    for (int e = 0; e < m; ++e) {
        if (done[e]) continue;
        Vec2 a = X[ep[e].first], b = X[ep[e].second];
        if (dist(a, b) <= TOL_GEOM) {
            done[e] = 1;
            groups.push_back({a, a, {e}});
            continue;
        }
        // All positive-length edges on this supporting line, transitively overlapping.
        std::vector<int> line{e};
        done[e] = 1;
        for (std::size_t k = 0; k < line.size(); ++k) {
            int f = line[k];
            for (int g = 0; g < m; ++g) {
                if (done[g]) continue;
                Vec2 c = X[ep[g].first], d = X[ep[g].second];
                if (dist(c, d) <= TOL_GEOM) continue;
                auto cls = classify_pair(X[ep[f].first], X[ep[f].second], c, d);
                if (cls.kind == PairKind::overlapping_collinear) {
                    done[g] = 1;
                    line.push_back(g);
                }
            }
        }
        // Canonical direction: lexicographically smaller endpoint first along the line.
        Vec2 u = b - a;
        u = (1.0 / norm(u)) * u;
        if (u.x < -TOL_GEOM || (std::abs(u.x) <= TOL_GEOM && u.y < 0)) u = -1.0 * u;
        std::vector<double> ts;
        for (int f : line)
            for (int vi : {ep[f].first, ep[f].second}) ts.push_back(dot(X[vi] - a, u));
        std::sort(ts.begin(), ts.end());
        std::vector<double> cuts;
        for (double t : ts)
            if (cuts.empty() || t - cuts.back() > TOL_GEOM) cuts.push_back(t);
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            double t0 = cuts[k], t1 = cuts[k + 1], tm = 0.5 * (t0 + t1);
            CollocationGroup g{a + t0 * u, a + t1 * u, {}};
            for (int f : line) {
                double s0 = dot(X[ep[f].first] - a, u), s1 = dot(X[ep[f].second] - a, u);
                if (std::min(s0, s1) < tm && tm < std::max(s0, s1)) g.members.push_back(f);
            }
            if (!g.members.empty()) groups.push_back(std::move(g));
        }
    }
    double eps = tc.epsilon0 > 0 ? tc.epsilon0 : compute_epsilon0(tc);
    for (auto& g : groups) {
        if (g.members.size() < 2) continue;
        auto o1 = detail::order_members(tc, g.p, g.q, g.members, eps);
        auto o2 = detail::order_members(tc, g.p, g.q, g.members, eps / 10);
        if (o1 != o2) throw AmbiguousAnnotation("side order changes between eps0 and eps0/10");
        g.members = o1;
    }
    return groups;
}

// Position of edge e in the group covering the interval adjacent to vertex v
// along edge `along` (which must be in that group). nullopt if not found.
struct SideIndex {
    std::vector<CollocationGroup> groups;

    const CollocationGroup* group_near(const TouchingConfig& tc, int along, int vertex) const {
        const Linkage& L = tc.linkage();
        auto ep = endpoints(L);
        Vec2 v = tc.base.coords[vertex];
        int o = ep[along].first == vertex ? ep[along].second : ep[along].first;
        Vec2 w = tc.base.coords[o];
        for (const auto& g : groups) {
            if (std::find(g.members.begin(), g.members.end(), along) == g.members.end()) continue;
            if (dist(g.p, g.q) <= TOL_GEOM) continue;
            // Interval touches v and lies toward w.
            bool touches = dist(g.p, v) <= TOL_GEOM || dist(g.q, v) <= TOL_GEOM;
            Vec2 mid = 0.5 * (g.p + g.q);
            if (touches && dot(mid - v, w - v) > 0) return &g;
        }
        return nullptr;
    }
    static int index_in(const CollocationGroup& g, int e) {
        auto it = std::find(g.members.begin(), g.members.end(), e);
        return it == g.members.end() ? -1 : int(it - g.members.begin());
    }
};

// Displace each vertex by delta along its normalized offset plus a seeded
// tangential jitter of at most jitter * delta.
inline std::vector<Vec2> perturbed_coords(const TouchingConfig& tc, double delta, unsigned long seed,
                                          double jitter = 0.1) {
    double maxoff = 0;
    for (Vec2 o : tc.offsets) maxoff = std::max(maxoff, norm(o));
    std::vector<Vec2> x = tc.base.coords;
    if (delta == 0 || maxoff == 0) return x;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double s = delta / maxoff;
    for (std::size_t i = 0; i < x.size(); ++i) {
        Vec2 o = tc.offsets[i];
        double j = U(rng);
        double n = norm(o);
        if (n == 0) continue;
        Vec2 t{-o.y / n, o.x / n};
        // Keep |step| <= delta: shrink the radial part to make room for jitter.
        double jit = jitter * delta * j;
        double r = std::min(s * n, std::sqrt(std::max(0.0, delta * delta - jit * jit)));
        x[i] = x[i] + (r / n) * o + jit * t;
    }
    return x;
}

namespace detail {

// Nested vertices sit in wedges of width O(delta^2), so a fixed jitter of
// delta/10 can cross them; halve it until the drawing is clean.
inline std::optional<std::vector<Vec2>> clean_perturbation(const TouchingConfig& tc, double delta, unsigned long seed) {
    const Linkage& L = tc.linkage();
    double jitter = 0.1;
    for (int k = 0; k < 40; ++k, jitter *= 0.5) {
        auto x = perturbed_coords(tc, delta, seed, jitter);
        if (is_nontouching(L, x)) return x;
    }
    auto x = perturbed_coords(tc, delta, seed, 0);
    if (is_nontouching(L, x)) return x;
    return std::nullopt;
}

}  // namespace detail

// Largest delta (by bisection, up to the pulled-apart bound) that perturb accepts.
inline double safe_delta(const TouchingConfig& tc, unsigned long seed) {
    double maxoff = 0;
    for (Vec2 o : tc.offsets) maxoff = std::max(maxoff, norm(o));
    double hi = tc.epsilon0 * maxoff;
    if (detail::clean_perturbation(tc, hi, seed)) return hi;
    double lo = 0;
    for (int i = 0; i < 30; ++i) {
        double mid = 0.5 * (lo + hi);
        if (detail::clean_perturbation(tc, mid, seed)) lo = mid;
        else hi = mid;
    }
    return lo;
}

// Returns a Configuration of the delta-related linkage (lengths recomputed).
inline Configuration perturb(const TouchingConfig& tc, double delta, unsigned long seed) {
    if (!(delta >= 0)) throw ValidationError("delta: negative");
    if (delta == 0) return tc.base;
    double maxoff = 0;
    for (Vec2 o : tc.offsets) maxoff = std::max(maxoff, norm(o));
    auto x = delta <= tc.epsilon0 * maxoff ? detail::clean_perturbation(tc, delta, seed) : std::nullopt;
    if (!x) {
        double s = safe_delta(tc, seed);
        throw PerturbRefused("delta " + std::to_string(delta) + " too large; largest safe delta is " + std::to_string(s), s);
    }
    auto L = std::make_shared<Linkage>(tc.linkage());
    auto ep = endpoints(*L);
    for (std::size_t i = 0; i < ep.size(); ++i) L->edges[i].length = dist((*x)[ep[i].first], (*x)[ep[i].second]);
    L->rotation = rotation_from_drawing(*L, *x);
    return {L, std::move(*x)};
}

struct ZeroEdgeSpec {
    std::string host;
    int slot = 0;            // insertion position in host's rotation
    std::string new_vertex;  // empty: auto-named host + "z" + k
    Vec2 offset{};           // offset of the new vertex; zero = derived from the slot
    // Host edges handed over to the new vertex (a vertex split). Empty keeps
    // the new vertex as a degree-1 pendant.
    std::vector<std::string> take;
};

// Adds zero-length edges at host vertices. Without an explicit offset the new
// vertex is placed a short way into the angular gap of the requested rotation
// slot, measured in the reference pulled-apart drawing.
inline TouchingConfig add_zero_length_edges(const TouchingConfig& tc, const std::vector<ZeroEdgeSpec>& specs) {
    auto L = std::make_shared<Linkage>(tc.linkage());
    std::vector<Vec2> X = tc.base.coords, O = tc.offsets;
    std::map<std::string, int> counters;
    double eps = tc.epsilon0 > 0 ? tc.epsilon0 / 2 : 1e-3;
    for (const auto& sp : specs) {
        if (!L->has_vertex(sp.host)) throw ValidationError("zero-length edge: unknown host '" + sp.host + "'");
        auto& rot = L->rotation[sp.host];
        if (sp.slot < 0 || sp.slot > int(rot.size())) throw ValidationError("zero-length edge: invalid rotation slot");
        std::string nv = sp.new_vertex;
        if (nv.empty()) nv = sp.host + "z" + std::to_string(counters[sp.host]++);
        if (L->has_vertex(nv)) throw ValidationError("zero-length edge: vertex '" + nv + "' exists");
        int h = L->index_of(sp.host);
        Vec2 off = sp.offset;
        if (off == Vec2{}) {
            Vec2 ph = X[h] + eps * O[h];
            double a0 = 0, a1 = 2 * std::numbers::pi;
            if (!rot.empty()) {
                auto dir = [&](int e) {
                    int o = L->index_of(L->other(e, sp.host));
                    Vec2 q = X[o] + eps * O[o];
                    return std::atan2(q.y - ph.y, q.x - ph.x);
                };
                int n = int(rot.size());
                a0 = dir(rot[(sp.slot - 1 + n) % n]);
                a1 = dir(rot[sp.slot % n]);
                if (a1 <= a0) a1 += 2 * std::numbers::pi;
            }
            double am = 0.5 * (a0 + a1);
            off = O[h] + Vec2{0.05 * std::cos(am), 0.05 * std::sin(am)};
        }
        L->vertices.push_back(nv);
        for (const auto& tname : sp.take) {
            int te = L->find_edge(tname);
            if (te < 0 || (L->edges[te].a != sp.host && L->edges[te].b != sp.host))
                throw ValidationError("zero-length edge: '" + tname + "' is not incident to '" + sp.host + "'");
            if (L->edges[te].a == sp.host) L->edges[te].a = nv;
            else L->edges[te].b = nv;
            auto it = std::find(rot.begin(), rot.end(), te);
            if (it != rot.end()) rot.erase(it);
            L->rotation[nv].push_back(te);
        }
        L->edges.push_back({sp.host, nv, 0.0});
        int e = int(L->edges.size()) - 1;
        auto& hr = L->rotation[sp.host];
        hr.insert(hr.begin() + std::min<int>(sp.slot, int(hr.size())), e);
        L->rotation[nv].push_back(e);
        X.push_back(X[h]);
        O.push_back(off);
    }
    for (const auto& v : L->vertices) L->rotation[v] = {};
    TouchingConfig out{{L, X}, O, 0};
    out = finalize(out);
    L->rotation = rotation_from_drawing(*L, out.pulled_apart(out.epsilon0 / 2));
    return out;
}

}  // namespace linklock
