#pragma once
// Heuristic flattening of nontouching trees: projected gradient descent on a
// flatness measure plus a short-range repulsion, with clearance-certified
// steps and random restarts.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "model.hpp"

namespace linklock {

enum class FlattenStatus { flattened, stalled, budget_exhausted };

inline const char* to_string(FlattenStatus s) {
    switch (s) {
        case FlattenStatus::flattened: return "flattened";
        case FlattenStatus::stalled: return "stalled";
        case FlattenStatus::budget_exhausted: return "budget-exhausted";
    }
    return "?";
}

struct FlattenResult {
    Motion motion;
    double finalFlatness = 0;
    double maxDisplacement = 0;
    FlattenStatus status = FlattenStatus::stalled;
    int pinEdge = -1;
    unsigned long seed = 0;  // seed of the winning restart
};

struct FlattenOptions {
    int restarts = 20;
    double step0 = 1e-2;
    double min_step = 1e-13;
    double max_sample_disp = 0.01;  // vertex travel between recorded samples
    double jitter = 0.05;           // radians, per joint, for restarts after the first
    // Short-range repulsion between non-incident features, active below
    // barrier_range; keeps tight starts from collapsing their own clearance.
    double barrier_range = 1e-3;
    double barrier_weight = 1e-3;
    // Share of the budget for the opening phase (spread ascent) that runs
    // before flatness descent; 0 disables it.
    double open_share = 0.5;
    // Share of what is left for the alignment phase (all edges pointing the
    // same way, away from the root), which has no folded-back local minima.
    double align_share = 0.5;
};

// Sum over vertices of y^2 + max(0, -x)^2 with the root moved to the origin.
inline double flatness(const Linkage& L, const std::vector<Vec2>& x, int root) {
    double f = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i].x - x[root].x, dy = x[i].y - x[root].y;
        double neg = std::max(0.0, -dx);
        f += dy * dy + neg * neg;
    }
    (void)L;
    return f;
}

inline double flatness(const Configuration& c, const std::string& root) {
    return flatness(*c.linkage, c.coords, c.linkage->index_of(root));
}

// Smallest separation the tree must keep: segment distance for disjoint edge
// pairs, far-endpoint-to-edge distance for adjacent pairs.
inline double clearance(const std::vector<std::pair<int, int>>& ep, const std::vector<Vec2>& x) {
    auto seg_dist = [&](int i, int j) {
        auto [a, b] = ep[i];
        auto [c, d] = ep[j];
        if (classify_pair(x[a], x[b], x[c], x[d]).kind != PairKind::disjoint) return 0.0;
        return std::min({point_segment_dist(x[a], x[c], x[d]), point_segment_dist(x[b], x[c], x[d]),
                         point_segment_dist(x[c], x[a], x[b]), point_segment_dist(x[d], x[a], x[b])});
    };
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < int(ep.size()); ++i)
        for (int j = i + 1; j < int(ep.size()); ++j) {
            auto [a, b] = ep[i];
            auto [c, d] = ep[j];
            int shared = (a == c || a == d) ? a : (b == c || b == d) ? b : -1;
            if (shared < 0) {
                best = std::min(best, seg_dist(i, j));
                continue;
            }
            int p = a == shared ? b : a;
            int q = c == shared ? d : c;
            double dp = point_segment_dist(x[p], x[shared], x[q]);
            double dq = point_segment_dist(x[q], x[shared], x[p]);
            // A zero-length edge has no far end of its own to protect.
            if (dist(x[p], x[shared]) <= TOL_GEOM) dp = std::numeric_limits<double>::infinity();
            if (dist(x[q], x[shared]) <= TOL_GEOM) dq = std::numeric_limits<double>::infinity();
            best = std::min({best, dp, dq});
        }
    return best;
}

// Linear interpolation from x to y cannot create a contact if every pair of
// edges moves, relative to each other, by less than the pair's separation:
// points of a segment move by convex combinations of its endpoint moves.
// Adjacent pairs can only meet at a far endpoint, so those are what count.
inline bool step_is_safe(const std::vector<std::pair<int, int>>& ep, const std::vector<Vec2>& x,
                         const std::vector<Vec2>& y) {
    auto rel = [&](int a, int c) { return dist(y[a] - x[a], y[c] - x[c]); };
    for (int i = 0; i < int(ep.size()); ++i)
        for (int j = i + 1; j < int(ep.size()); ++j) {
            auto [a, b] = ep[i];
            auto [c, d] = ep[j];
            int shared = (a == c || a == d) ? a : (b == c || b == d) ? b : -1;
            if (shared < 0) {
                if (classify_pair(x[a], x[b], x[c], x[d]).kind != PairKind::disjoint) return false;
                double sep = std::min({point_segment_dist(x[a], x[c], x[d]), point_segment_dist(x[b], x[c], x[d]),
                                       point_segment_dist(x[c], x[a], x[b]), point_segment_dist(x[d], x[a], x[b])});
                double m = std::max({rel(a, c), rel(a, d), rel(b, c), rel(b, d)});
                if (!(m < sep)) return false;
                continue;
            }
            int p = a == shared ? b : a;
            int q = c == shared ? d : c;
            if (dist(x[p], x[shared]) > TOL_GEOM && !(std::max(rel(p, shared), rel(p, q)) < point_segment_dist(x[p], x[shared], x[q])))
                return false;
            if (dist(x[q], x[shared]) > TOL_GEOM && !(std::max(rel(q, shared), rel(q, p)) < point_segment_dist(x[q], x[shared], x[p])))
                return false;
        }
    return true;
}

inline double max_step(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, dist(a[i], b[i]));
    return m;
}

// Rigidly maps sample coords so that edge e's source and direction match ref.
inline std::vector<Vec2> align_to(const std::vector<Vec2>& x, const std::vector<Vec2>& ref, int src, int dst) {
    Vec2 d0 = ref[dst] - ref[src], d1 = x[dst] - x[src];
    double a = std::atan2(d0.y, d0.x) - std::atan2(d1.y, d1.x);
    double c = std::cos(a), s = std::sin(a);
    std::vector<Vec2> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        Vec2 p = x[i] - x[src];
        out[i] = ref[src] + Vec2{c * p.x - s * p.y, s * p.x + c * p.y};
    }
    return out;
}

inline double max_displacement(const Motion& m, int pinEdge) {
    const Linkage& L = *m.linkage;
    if (pinEdge < 0 || pinEdge >= int(L.edges.size())) throw ValidationError("pinEdge: out of range");
    if (L.edges[pinEdge].length <= TOL_LEN) throw ValidationError("pinEdge: zero-length edge cannot fix a direction");
    int s = L.index_of(L.edges[pinEdge].a), d = L.index_of(L.edges[pinEdge].b);
    const auto& ref = m.samples.front().coords;
    double best = 0;
    for (const auto& smp : m.samples) best = std::max(best, max_step(align_to(smp.coords, ref, s, d), ref));
    return best;
}

// The vertex nearest the centroid, first in id order on ties. Rooting a
// near-collinear drawing at an extreme vertex would make it nearly flat by a
// rigid turn alone, so central roots are the default.
inline std::string central_vertex(const Configuration& c) {
    Vec2 m{};
    for (const auto& p : c.coords) m = m + p;
    m = (1.0 / double(c.coords.size())) * m;
    std::size_t best = 0;
    for (std::size_t i = 1; i < c.coords.size(); ++i)
        if (dist(c.coords[i], m) < dist(c.coords[best], m) - TOL_GEOM) best = i;
    return c.linkage->vertices[best];
}

// Default pin: the longest edge at the root, else the longest edge. A long
// pin keeps a small wobble of the pin itself from reading as a large
// displacement far away.
inline int default_pin_edge(const Linkage& L, int root) {
    int best = -1;
    for (int e : L.incident(L.vertices[root]))
        if (L.edges[e].length > TOL_LEN && (best < 0 || L.edges[e].length > L.edges[best].length)) best = e;
    if (best >= 0) return best;
    for (int e = 0; e < int(L.edges.size()); ++e)
        if (L.edges[e].length > TOL_LEN && (best < 0 || L.edges[e].length > L.edges[best].length)) best = e;
    return best;
}

// Independent re-check: lengths at every sample, nontouching at every sample
// and at linear midpoints.
inline bool motion_is_valid(const Motion& m, std::string* why = nullptr) {
    const Linkage& L = *m.linkage;
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    for (std::size_t i = 0; i < m.samples.size(); ++i) {
        const auto& x = m.samples[i].coords;
        if (edge_length_residual(L, x) > TOL_LEN) return fail("length residual at sample " + std::to_string(i));
        if (!is_nontouching(L, x)) return fail("contact at sample " + std::to_string(i));
        if (i > 0) {
            std::vector<Vec2> mid(x.size());
            for (std::size_t k = 0; k < x.size(); ++k) mid[k] = 0.5 * (x[k] + m.samples[i - 1].coords[k]);
            if (!is_nontouching(L, mid)) return fail("contact between samples " + std::to_string(i - 1) + " and " + std::to_string(i));
        }
    }
    return true;
}

namespace detail {

struct TreeOrder {
    std::vector<int> order;   // BFS from root
    std::vector<int> parent;  // parent vertex, -1 for (sub-)roots
    std::vector<double> len;  // length of edge to parent
};

inline TreeOrder tree_order(const Linkage& L, int root) {
    int n = int(L.vertices.size());
    TreeOrder t{{}, std::vector<int>(n, -1), std::vector<double>(n, 0)};
    auto inc = incidence(L);
    auto ep = endpoints(L);
    std::vector<char> seen(n, 0);
    // Forest controls: every further component hangs off its own free sub-root.
    for (int r0 = -1; r0 < n; ++r0) {
        int r = r0 < 0 ? root : r0;
        if (seen[r]) continue;
        std::queue<int> q;
        q.push(r);
        seen[r] = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            t.order.push_back(v);
            for (int e : inc[v]) {
                int w = ep[e].first == v ? ep[e].second : ep[e].first;
                if (seen[w]) continue;
                seen[w] = 1;
                t.parent[w] = v;
                t.len[w] = L.edges[e].length;
                q.push(w);
            }
        }
    }
    return t;
}

// Joint coordinates: rot[v] turns the subtree below v (edge included) about
// v's parent; sub-roots of further components move by shift[v]. Lengths are
// restored exactly from the stored ones.
inline std::vector<Vec2> move_joints(const TreeOrder& t, const std::vector<Vec2>& x, const std::vector<double>& rot,
                                     const std::vector<Vec2>& shift) {
    std::vector<Vec2> nx = x;
    std::vector<double> acc(x.size(), 0);
    for (int v : t.order) {
        int p = t.parent[v];
        if (p < 0) {
            nx[v] = x[v] + shift[v];
            continue;
        }
        acc[v] = acc[p] + rot[v];
        Vec2 d = x[v] - x[p];
        double n = norm(d);
        double c = std::cos(acc[v]), s = std::sin(acc[v]);
        Vec2 r{c * d.x - s * d.y, s * d.x + c * d.y};
        nx[v] = n > 0 ? nx[p] + (t.len[v] / n) * r : nx[p];
    }
    return nx;
}

// Chain rule from vertex gradients g to joint gradients.
inline void joint_grad(const TreeOrder& t, const std::vector<Vec2>& x, const std::vector<Vec2>& g,
                       std::vector<double>& grot, std::vector<Vec2>& gshift) {
    std::size_t n = x.size();
    std::vector<double> C(n, 0);
    std::vector<Vec2> G(n);
    for (std::size_t i = 0; i < n; ++i) {
        C[i] = cross(x[i], g[i]);
        G[i] = g[i];
    }
    grot.assign(n, 0);
    gshift.assign(n, Vec2{});
    for (auto it = t.order.rbegin(); it != t.order.rend(); ++it) {
        int v = *it, p = t.parent[v];
        if (p < 0) {
            gshift[v] = G[v];
            continue;
        }
        grot[v] = C[v] - cross(x[p], G[v]);
        C[p] += C[v];
        G[p] = G[p] + G[v];
    }
}

inline Vec2 turn(Vec2 p, double th) {
    double c = std::cos(th), s = std::sin(th);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

// Flatness of the drawing turned by th about the root.
inline double turned_flatness(const std::vector<Vec2>& x, int root, double th) {
    double f = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        Vec2 p = turn(x[i] - x[root], th);
        double neg = std::max(0.0, -p.x);
        f += p.y * p.y + neg * neg;
    }
    return f;
}

// Rigid turns about the root never collide, so the solver works with the
// flatness of the best turn: a coarse scan, then golden-section refinement.
inline std::pair<double, double> best_turn(const std::vector<Vec2>& x, int root, double hint) {
    constexpr int K = 64;
    double bt = hint, bf = turned_flatness(x, root, hint);
    for (int k = 0; k < K; ++k) {
        double th = hint + 2 * std::numbers::pi * k / K;
        double f = turned_flatness(x, root, th);
        if (f < bf) bf = f, bt = th;
    }
    double lo = bt - 2 * std::numbers::pi / K, hi = bt + 2 * std::numbers::pi / K;
    const double r = 0.5 * (std::sqrt(5.0) - 1);
    double a = hi - r * (hi - lo), b = lo + r * (hi - lo);
    double fa = turned_flatness(x, root, a), fb = turned_flatness(x, root, b);
    for (int it = 0; it < 40; ++it) {
        if (fa < fb) hi = b, b = a, fb = fa, a = hi - r * (hi - lo), fa = turned_flatness(x, root, a);
        else lo = a, a = b, fa = fb, b = lo + r * (hi - lo), fb = turned_flatness(x, root, b);
    }
    double m = 0.5 * (lo + hi), fm = turned_flatness(x, root, m);
    if (fm < bf) bf = fm, bt = m;
    return {bf, std::remainder(bt, 2 * std::numbers::pi)};
}

// Gradient of the turned flatness (the turn held at its optimum).
inline void flatness_grad(const std::vector<Vec2>& x, int root, double th, std::vector<Vec2>& g) {
    g.assign(x.size(), Vec2{});
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (int(i) == root) continue;
        Vec2 p = turn(x[i] - x[root], th);
        g[i] = turn(Vec2{-2 * std::max(0.0, -p.x), 2 * p.y}, -th);
    }
}

// Distance features: far endpoint of one edge against the other edge, for
// every edge pair (the same pairs clearance() looks at).
struct Feature {
    int p, a, b;
};

inline std::vector<Feature> features(const std::vector<std::pair<int, int>>& ep, const std::vector<double>& len) {
    std::vector<Feature> out;
    for (int i = 0; i < int(ep.size()); ++i)
        for (int j = 0; j < int(ep.size()); ++j) {
            if (i == j) continue;
            auto [a, b] = ep[i];
            auto [c, d] = ep[j];
            for (int p : {a, b}) {
                if (p == c || p == d) continue;
                int q = p == a ? b : a;
                // Adjacent pair: only the far end of edge i counts, and only if it has one.
                if ((q == c || q == d) && len[i] <= TOL_LEN) continue;
                out.push_back({p, c, d});
            }
        }
    return out;
}

// phi(d) = log(r / d) + d / r - 1 below the range r, zero above: C^1 at r.
inline double barrier(const std::vector<Feature>& fs, const std::vector<Vec2>& x, double r, double w,
                      std::vector<Vec2>* g) {
    double e = 0;
    for (const auto& f : fs) {
        Vec2 ab = x[f.b] - x[f.a];
        double L2 = dot(ab, ab);
        double t = L2 > 0 ? std::clamp(dot(x[f.p] - x[f.a], ab) / L2, 0.0, 1.0) : 0.0;
        Vec2 c = x[f.a] + t * ab;
        double d = dist(x[f.p], c);
        if (d >= r) continue;
        if (d <= 0) return std::numeric_limits<double>::infinity();
        e += w * (std::log(r / d) + d / r - 1);
        if (g) {
            double k = w * (1 / r - 1 / d);
            Vec2 n = (1 / d) * (x[f.p] - c);
            (*g)[f.p] = (*g)[f.p] + k * n;
            (*g)[f.a] = (*g)[f.a] - (k * (1 - t)) * n;
            (*g)[f.b] = (*g)[f.b] - (k * t) * n;
        }
    }
    return e;
}

struct RunOut {
    std::vector<std::vector<Vec2>> samples;
    double f = 0;
    FlattenStatus status = FlattenStatus::stalled;
};

inline RunOut run_once(const Linkage& L, const std::vector<Vec2>& start, int root, long budget, unsigned long seed,
                       bool jitter, const FlattenOptions& opt) {
    auto ep = endpoints(L);
    auto t = tree_order(L, root);
    std::vector<Vec2> x = start;
    RunOut out;
    out.samples.push_back(x);
    std::vector<Vec2> last = x;
    long used = 0;

    // Every recorded interval must itself be certified: start a new sample
    // before the interval from the last one would stop being safe or too long.
    auto record_if_needed = [&](const std::vector<Vec2>& nx) {
        if (max_step(nx, last) > opt.max_sample_disp || !step_is_safe(ep, last, nx)) {
            out.samples.push_back(x);
            last = x;
        }
    };

    if (jitter) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        std::vector<double> ang(x.size());
        for (auto& a : ang) a = U(rng);
        double amp = opt.jitter;
        for (int tries = 0; tries < 40 && used < budget; ++tries, ++used) {
            // Rotate each edge about its parent end, accumulating down the tree.
            std::vector<Vec2> nx = x;
            for (int v : t.order) {
                int p = t.parent[v];
                if (p < 0) continue;
                Vec2 d = x[v] - x[p];
                double c = std::cos(amp * ang[v]), s = std::sin(amp * ang[v]);
                nx[v] = nx[p] + Vec2{c * d.x - s * d.y, s * d.x + c * d.y};
            }
            if (max_step(nx, x) <= opt.max_sample_disp && step_is_safe(ep, x, nx)) {
                record_if_needed(nx);
                x = nx;
                break;
            }
            amp *= 0.5;
        }
    }

    std::vector<double> len;
    for (const auto& e : L.edges) len.push_back(e.length);
    auto fs = features(ep, len);
    double R = opt.barrier_range, W = opt.barrier_weight;
    std::vector<Vec2> g, nx(x.size()), gshift;
    std::vector<double> grot;

    // Certified descent on obj + barrier in joint coordinates. obj(y) may
    // stash side results; keep() commits them when y is accepted.
    auto descend = [&](auto&& obj, auto&& grad, auto&& keep, auto&& done, long limit) {
        double F = obj(x) + barrier(fs, x, R, W, nullptr);
        keep();
        double eta = opt.step0;
        while (used < limit) {
            if (done()) return 1;
            if (eta < opt.min_step) return 0;
            ++used;
            grad(x, g);
            barrier(fs, x, R, W, &g);
            joint_grad(t, x, g, grot, gshift);
            for (std::size_t i = 0; i < x.size(); ++i) {
                grot[i] *= -eta;
                gshift[i] = -eta * gshift[i];
            }
            gshift[root] = Vec2{};
            nx = move_joints(t, x, grot, gshift);
            double step = max_step(nx, x);
            if (step == 0 || step > opt.max_sample_disp) {
                eta *= 0.5;
                continue;
            }
            double nF = obj(nx) + barrier(fs, nx, R, W, nullptr);
            if (!(nF < F) || !step_is_safe(ep, x, nx)) {
                eta *= 0.5;
                continue;
            }
            record_if_needed(nx);
            x = nx;
            keep();
            F = nF;
            eta *= 2;
        }
        return -1;
    };

    // Opening: push the vertices apart (mean squared distance from their
    // centroid) so folds come undone before flatness starts pulling.
    if (opt.open_share > 0) {
        int n = int(x.size());
        auto spread = [&](const std::vector<Vec2>& y) {
            Vec2 c{};
            for (const auto& p : y) c = c + p;
            c = (1.0 / n) * c;
            double s = 0;
            for (const auto& p : y) s += dot(p - c, p - c);
            return s / n;
        };
        auto obj = [&](const std::vector<Vec2>& y) { return -spread(y); };
        auto grad = [&](const std::vector<Vec2>& y, std::vector<Vec2>& gg) {
            Vec2 c{};
            for (const auto& p : y) c = c + p;
            c = (1.0 / n) * c;
            gg.assign(y.size(), Vec2{});
            for (int i = 0; i < n; ++i) gg[i] = (-2.0 / n) * (y[i] - c);
        };
        long check = used;
        double s_check = spread(x);
        auto done = [&] {
            if (used - check < 2000) return false;
            double s = spread(x);
            bool flat = s - s_check < 1e-6 * (1 + s);
            check = used;
            s_check = s;
            return flat;
        };
        descend(obj, grad, [] {}, done, used + long(opt.open_share * double(budget)));
    }

    // Alignment: maximize |sum of parent-to-child edge vectors|. Turning any
    // subtree whose own sum opposes the total increases it, so edges folded
    // back past the root get swung round instead of sitting in a minimum.
    if (opt.align_share > 0) {
        auto total = [&](const std::vector<Vec2>& y) {
            Vec2 S{};
            for (int v : t.order)
                if (t.parent[v] >= 0) S = S + (y[v] - y[t.parent[v]]);
            return S;
        };
        auto obj = [&](const std::vector<Vec2>& y) { return -norm(total(y)); };
        auto grad = [&](const std::vector<Vec2>& y, std::vector<Vec2>& gg) {
            Vec2 S = total(y);
            double n = norm(S);
            gg.assign(y.size(), Vec2{});
            if (n == 0) return;
            Vec2 u = (1.0 / n) * S;
            for (int v : t.order)
                if (int p = t.parent[v]; p >= 0) gg[v] = gg[v] - u, gg[p] = gg[p] + u;
        };
        long check = used;
        double a_check = norm(total(x));
        auto done = [&] {
            if (used - check < 2000) return false;
            if (best_turn(x, root, 0).first <= FLAT_TOL) return true;
            double a = norm(total(x));
            bool flat = a - a_check < 1e-6 * (1 + a);
            check = used;
            a_check = a;
            return flat;
        };
        descend(obj, grad, [] {}, done, used + long(opt.align_share * double(budget - used)));
    }

    auto [f, th] = best_turn(x, root, 0);
    double pf = f, pth = th;
    auto fobj = [&](const std::vector<Vec2>& y) {
        std::tie(pf, pth) = best_turn(y, root, th);
        return pf;
    };
    auto fgrad = [&](const std::vector<Vec2>& y, std::vector<Vec2>& gg) { flatness_grad(y, root, th, gg); };
    auto fkeep = [&] { f = pf, th = pth; };
    int r = descend(fobj, fgrad, fkeep, [&] { return f <= FLAT_TOL; }, budget);
    out.status = r == 1 ? FlattenStatus::flattened : r == 0 ? FlattenStatus::stalled : FlattenStatus::budget_exhausted;
    if (out.samples.back() != x) out.samples.push_back(x);
    // Apply the turn as a rigid motion, in steps of bounded travel.
    double reach = 0;
    for (const auto& p : x) reach = std::max(reach, dist(p, x[root]));
    int k = int(std::ceil(std::abs(th) * reach / opt.max_sample_disp));
    for (int i = 1; i <= k; ++i) {
        std::vector<Vec2> y(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[root] + turn(x[j] - x[root], th * i / k);
        out.samples.push_back(y);
    }
    if (k > 0) x = out.samples.back();
    out.f = flatness(L, x, root);
    return out;
}

}  // namespace detail

inline FlattenResult flatten(const Configuration& c, const std::string& root_id, long budget, unsigned long seed,
                             const FlattenOptions& opt = {}) {
    const Linkage& L = *c.linkage;
    if (!is_nontouching(c)) throw ValidationError("flatten: configuration is touching");
    int root = L.index_of(root_id);
    FlattenResult best;
    bool have = false;
    for (int r = 0; r < std::max(1, opt.restarts); ++r) {
        unsigned long s = seed * 1000003UL + static_cast<unsigned long>(r);
        auto run = detail::run_once(L, c.coords, root, budget, s, r > 0, opt);
        if (!have || run.f < best.finalFlatness) {
            have = true;
            best.finalFlatness = run.f;
            best.status = run.status;
            best.seed = s;
            best.motion.linkage = c.linkage;
            best.motion.samples.clear();
            int n = int(run.samples.size());
            for (int i = 0; i < n; ++i)
                best.motion.samples.push_back({n == 1 ? 0.0 : double(i) / (n - 1), run.samples[i]});
        }
        if (best.status == FlattenStatus::flattened) break;
    }
    if (best.motion.samples.size() == 1) best.motion.samples.push_back({1.0, best.motion.samples[0].coords});
    best.motion.samples.front().t = 0;
    best.motion.samples.back().t = 1;
    best.pinEdge = default_pin_edge(L, root);
    best.maxDisplacement = best.pinEdge >= 0 ? max_displacement(best.motion, best.pinEdge) : 0;
    return best;
}

}  // namespace linklock
