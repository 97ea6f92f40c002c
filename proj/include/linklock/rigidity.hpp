#pragma once
// Rule detectors for self-touching bars, the reduction loop, and rank tests.

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "touching.hpp"

namespace linklock {

enum class Rule { Rule1 = 1, Rule2 = 2 };

struct RuleApplication {
    Rule rule;
    int bar;             // Rule 1: the trapped bar b; Rule 2: the bar carrying the witness
    int collocatedWith;  // Rule 1: b'; Rule 2: the incident bar it is collocated with
    std::vector<int> witnesses;

    auto key() const { return std::tuple(int(rule), bar, collocatedWith); }
    bool operator==(const RuleApplication& o) const { return key() == o.key() && witnesses == o.witnesses; }
};

struct ReductionTrace {
    std::vector<RuleApplication> steps;
    std::vector<std::pair<std::string, std::string>> pins;
    bool rigid = false;
    int dof = 0;
};

// ---------------------------------------------------------------------------
// Rank tests

namespace detail {

inline int null_dim(const std::vector<Eigen::VectorXd>& rows, int cols) {
    if (rows.empty() || cols == 0) return cols;
    Eigen::MatrixXd J(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) J.row(i) = rows[i].transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    const auto& s = svd.singularValues();
    double smax = s.size() ? s(0) : 0;
    int rank = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > TOL_RANK * std::max(smax, 1.0)) ++rank;
    return cols - rank;
}

struct DSU {
    std::vector<int> p;
    explicit DSU(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a), b = find(b);
        if (a == b) return false;
        p[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

inline std::vector<Eigen::VectorXd> constraint_rows(const Linkage& L, const std::vector<Vec2>& x,
                                                    const std::vector<std::pair<int, int>>& pins) {
    int n = int(L.vertices.size());
    std::vector<Eigen::VectorXd> rows;
    auto ep = endpoints(L);
    std::vector<std::pair<int, int>> all_pins = pins;
    for (std::size_t i = 0; i < ep.size(); ++i) {
        auto [u, v] = ep[i];
        if (L.edges[i].length <= TOL_LEN) {
            all_pins.emplace_back(u, v);
            continue;
        }
        Eigen::VectorXd r = Eigen::VectorXd::Zero(2 * n);
        Vec2 d = x[u] - x[v];
        r(2 * u) += d.x, r(2 * u + 1) += d.y;
        r(2 * v) -= d.x, r(2 * v + 1) -= d.y;
        rows.push_back(r);
    }
    for (auto [u, v] : all_pins) {
        if (u == v) continue;
        for (int k = 0; k < 2; ++k) {
            Eigen::VectorXd r = Eigen::VectorXd::Zero(2 * n);
            r(2 * u + k) = 1;
            r(2 * v + k) = -1;
            rows.push_back(r);
        }
    }
    return rows;
}

}  // namespace detail

// First-order degrees of freedom: one length row per positive-length edge,
// two coordinate rows per pin (zero-length edges act as pins).
inline int infinitesimal_dof(const Configuration& c, const std::vector<std::pair<int, int>>& pins) {
    const Linkage& L = *c.linkage;
    return detail::null_dim(detail::constraint_rows(L, c.coords, pins), 2 * int(L.vertices.size()));
}

inline int infinitesimal_dof(const Configuration& c, const std::vector<std::pair<std::string, std::string>>& pins) {
    std::vector<std::pair<int, int>> p;
    for (auto& [a, b] : pins) p.emplace_back(c.linkage->index_of(a), c.linkage->index_of(b));
    return infinitesimal_dof(c, p);
}

// As infinitesimal_dof, plus the exact constraints implied by degenerate
// triangles: when clusters P, Q, R are pairwise joined by bars with
// |PQ| + |QR| = |PR|, the only realization puts Q on segment PR at a fixed
// ratio, so Q = (1 - t) P + t R holds along every motion.
inline int merged_dof(const Configuration& c, const std::vector<std::pair<int, int>>& pins) {
    const Linkage& L = *c.linkage;
    int n = int(L.vertices.size());
    auto rows = detail::constraint_rows(L, c.coords, pins);
    detail::DSU dsu(n);
    for (auto [u, v] : pins) dsu.unite(u, v);
    auto ep = endpoints(L);
    for (std::size_t i = 0; i < ep.size(); ++i)
        if (L.edges[i].length <= TOL_LEN) dsu.unite(ep[i].first, ep[i].second);
    std::map<std::pair<int, int>, double> bars;
    for (std::size_t i = 0; i < ep.size(); ++i) {
        int a = dsu.find(ep[i].first), b = dsu.find(ep[i].second);
        if (a == b || L.edges[i].length <= TOL_LEN) continue;
        bars[{std::min(a, b), std::max(a, b)}] = L.edges[i].length;
    }
    std::vector<int> reps;
    for (int i = 0; i < n; ++i)
        if (dsu.find(i) == i) reps.push_back(i);
    auto bar = [&](int a, int b) -> double {
        auto it = bars.find({std::min(a, b), std::max(a, b)});
        return it == bars.end() ? -1 : it->second;
    };
    for (int P : reps)
        for (int Q : reps)
            for (int R : reps) {
                if (P >= R || Q == P || Q == R) continue;
                double pq = bar(P, Q), qr = bar(Q, R), pr = bar(P, R);
                if (pq <= 0 || qr <= 0 || pr <= 0) continue;
                if (std::abs(pq + qr - pr) > TOL_LEN) continue;
                double t = pq / pr;
                for (int k = 0; k < 2; ++k) {
                    Eigen::VectorXd r = Eigen::VectorXd::Zero(2 * n);
                    r(2 * Q + k) = 1;
                    r(2 * P + k) = -(1 - t);
                    r(2 * R + k) = -t;
                    rows.push_back(r);
                }
            }
    return detail::null_dim(rows, 2 * n);
}

// ---------------------------------------------------------------------------
// Detectors

namespace detail {

struct Ctx {
    const TouchingConfig& tc;
    const Linkage& L;
    std::vector<std::pair<int, int>> ep;
    std::vector<CollocationGroup> groups;
    DSU dsu;  // vertices identified by earlier conclusions or zero-length edges

    Ctx(const TouchingConfig& t, const std::vector<std::pair<int, int>>& pins)
        : tc(t), L(t.linkage()), ep(endpoints(L)), groups(collocation_groups(t)), dsu(int(L.vertices.size())) {
        for (auto [a, b] : pins) dsu.unite(a, b);
        // A zero-length edge keeps its endpoints together in every motion.
        for (std::size_t e = 0; e < ep.size(); ++e)
            if (L.edges[e].length <= TOL_LEN) dsu.unite(ep[e].first, ep[e].second);
    }

    Vec2 X(int v) const { return tc.base.coords[v]; }
    double len(int e) const { return L.edges[e].length; }
    int other(int e, int v) { return dsu.find(ep[e].first) == dsu.find(v) ? ep[e].second : ep[e].first; }
    bool touches(int e, int v) { return dsu.find(ep[e].first) == dsu.find(v) || dsu.find(ep[e].second) == dsu.find(v); }

    bool same_segment(int e, int f) const {
        Vec2 a = X(ep[e].first), b = X(ep[e].second), c = X(ep[f].first), d = X(ep[f].second);
        return (dist(a, c) <= TOL_GEOM && dist(b, d) <= TOL_GEOM) || (dist(a, d) <= TOL_GEOM && dist(b, c) <= TOL_GEOM);
    }

    // Group covering the interval of `along` adjacent to vertex v.
    const CollocationGroup* group_near(int along, int v) const {
        Vec2 pv = X(v);
        int o = ep[along].first == v ? ep[along].second : ep[along].first;
        Vec2 w = X(o);
        for (const auto& g : groups) {
            if (dist(g.p, g.q) <= TOL_GEOM) continue;
            if (std::find(g.members.begin(), g.members.end(), along) == g.members.end()) continue;
            bool at_v = dist(g.p, pv) <= TOL_GEOM || dist(g.q, pv) <= TOL_GEOM;
            if (at_v && dot(0.5 * (g.p + g.q) - pv, w - pv) > 0) return &g;
        }
        return nullptr;
    }

    static int pos(const CollocationGroup& g, int e) {
        auto it = std::find(g.members.begin(), g.members.end(), e);
        return it == g.members.end() ? -1 : int(it - g.members.begin());
    }

    // Side of `b` relative to the directed bar v -> other(bp, v): +1 left, -1 right, 0 unknown.
    int side_of(int b, int bp, int v) const {
        const CollocationGroup* g = group_near(bp, v);
        if (!g) return 0;
        int ib = pos(*g, b), ibp = pos(*g, bp);
        if (ib < 0 || ibp < 0) return 0;
        int o = ep[bp].first == v ? ep[bp].second : ep[bp].first;
        // Group order increases to the right of g.p -> g.q.
        double aligned = dot(X(o) - X(v), g->q - g->p) > 0 ? 1 : -1;
        int right = ib > ibp ? 1 : -1;
        return int(-right * aligned);
    }

    // b strictly between x and w in the group next to v along x.
    bool between(int x, int b, int w, int v) const {
        const CollocationGroup* g = group_near(x, v);
        if (!g) return false;
        int ix = pos(*g, x), ib = pos(*g, b), iw = pos(*g, w);
        if (ix < 0 || ib < 0 || iw < 0) return false;
        return std::min(ix, iw) < ib && ib < std::max(ix, iw);
    }
};

}  // namespace detail

namespace detail {

// Witness at the end v of bar bp for the bar b (Rule 1 condition).
inline std::vector<int> rule1_witnesses_at(Ctx& c, int b, int bp, int v) {
    std::vector<int> out;
    int far = c.ep[bp].first == v ? c.ep[bp].second : c.ep[bp].first;
    for (int w = 0; w < int(c.L.edges.size()); ++w) {
        if (w == b || w == bp || c.len(w) <= TOL_LEN || !c.touches(w, v)) continue;
        int wv = c.dsu.find(c.ep[w].first) == c.dsu.find(v) ? c.ep[w].first : c.ep[w].second;
        int wo = c.ep[w].first == wv ? c.ep[w].second : c.ep[w].first;
        auto ang = angle_at(c.X(far), c.X(v), c.X(wo));
        if (!ang || *ang >= std::numbers::pi / 2 - TOL_ANG) continue;
        if (*ang <= TOL_ANG) {
            // Folded back along bp: must enclose b.
            const CollocationGroup* g = c.group_near(bp, v);
            if (!g || Ctx::pos(*g, w) < 0) continue;
            if (!c.between(bp, b, w, v)) continue;
        } else {
            int s = c.side_of(b, bp, v);
            if (s == 0 || orient(c.X(v), c.X(far), c.X(wo)) != s) continue;
        }
        out.push_back(w);
    }
    // Innermost first: closest to b in the side order.
    if (const CollocationGroup* g = c.group_near(bp, v)) {
        int ib = Ctx::pos(*g, b);
        std::stable_sort(out.begin(), out.end(), [&](int p, int q) {
            int dp = Ctx::pos(*g, p) < 0 ? 1 << 20 : std::abs(Ctx::pos(*g, p) - ib);
            int dq = Ctx::pos(*g, q) < 0 ? 1 << 20 : std::abs(Ctx::pos(*g, q) - ib);
            return dp < dq;
        });
    }
    return out;
}

inline std::vector<RuleApplication> rule1(Ctx& c) {
    std::vector<RuleApplication> out;
    int m = int(c.L.edges.size());
    for (int bp = 0; bp < m; ++bp) {
        if (c.len(bp) <= TOL_LEN) continue;
        for (int b = 0; b < m; ++b) {
            if (b == bp || c.len(b) <= TOL_LEN) continue;
            if (std::abs(c.len(b) - c.len(bp)) > TOL_LEN || !c.same_segment(b, bp)) continue;
            std::vector<int> wit;
            bool ok = true;
            for (int v : {c.ep[bp].first, c.ep[bp].second}) {
                auto ws = rule1_witnesses_at(c, b, bp, v);
                if (ws.empty()) { ok = false; break; }
                wit.push_back(ws.front());
            }
            if (ok) out.push_back({Rule::Rule1, b, bp, wit});
        }
    }
    return out;
}

// Zero-length path from u to v inside one cluster, as vertex ids; empty if none.
inline std::vector<int> zero_path(Ctx& c, int u, int v) {
    int n = int(c.L.vertices.size());
    std::vector<int> prev(n, -2);
    std::vector<int> q{u};
    prev[u] = -1;
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t e = 0; e < c.ep.size(); ++e) {
            if (c.len(int(e)) > TOL_LEN) continue;
            auto [a, b] = c.ep[e];
            int o = a == q[i] ? b : b == q[i] ? a : -1;
            if (o >= 0 && prev[o] == -2) { prev[o] = q[i]; q.push_back(o); }
        }
    if (prev[v] == -2) return {};
    std::vector<int> out;
    for (int k = v; k != -1; k = prev[k]) out.push_back(k);
    std::reverse(out.begin(), out.end());
    return out;
}

// Surround test when bar leaves the cluster at v and the witness at wv != v.
// The pocket is bounded by both edges (cut at radius r), the zero-length path
// between their feet, and a cap on the convex side; col must run into it.
inline std::optional<bool> pocket_contains(Ctx& c, int bar, int v, int w, int wv, int col) {
    auto path = zero_path(c, v, wv);
    if (path.empty()) return std::nullopt;
    // Any eps below eps0 gives the same picture; a small one keeps the
    // offsets well inside the pocket radius.
    auto x = c.tc.pulled_apart(c.tc.reference_epsilon() / 64);
    int s = c.ep[bar].first == v ? c.ep[bar].second : c.ep[bar].first;
    int wo = c.ep[w].first == wv ? c.ep[w].second : c.ep[w].first;
    Vec2 d1 = x[s] - x[v], d2 = x[wo] - x[wv];
    if (norm(d1) <= TOL_GEOM || norm(d2) <= TOL_GEOM) return std::nullopt;
    d1 = (1 / norm(d1)) * d1;
    d2 = (1 / norm(d2)) * d2;
    double r = 0.25 * std::min(c.len(bar), c.len(w));
    Vec2 bis = d1 + d2;
    // Antiparallel: both sides are straight angles, and with boundaries
    // included either one counts. Test the two half-plane pockets.
    std::vector<Vec2> caps;
    if (norm(bis) < 1e-9) caps = {Vec2{-d1.y, d1.x}, Vec2{d1.y, -d1.x}};
    else caps = {(1 / norm(bis)) * bis};
    // col's end at the cluster, stepped a little way along col
    int u = c.dsu.find(c.ep[col].first) == c.dsu.find(s) ? c.ep[col].second : c.ep[col].first;
    int uo = u == c.ep[col].first ? c.ep[col].second : c.ep[col].first;
    Vec2 du = x[uo] - x[u];
    if (norm(du) <= TOL_GEOM) return std::nullopt;
    Vec2 t = x[u] + (0.5 * r / norm(du)) * du;
    for (Vec2 cap : caps) {
        std::vector<Vec2> poly{x[v] + r * d1};
        for (int k : path) poly.push_back(x[k]);
        poly.push_back(x[wv] + r * d2);
        poly.push_back(0.5 * (x[v] + x[wv]) + r * cap);
        double wind = 0;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            Vec2 a = poly[i] - t, b = poly[(i + 1) % poly.size()] - t;
            wind += std::atan2(cross(a, b), dot(a, b));
        }
        if (std::abs(wind) > std::numbers::pi) return true;
    }
    return false;
}

inline std::vector<RuleApplication> rule2(Ctx& c) {
    std::vector<RuleApplication> out;
    int m = int(c.L.edges.size());
    double eps = c.tc.reference_epsilon();
    auto x = c.tc.pulled_apart(eps);
    for (int bar = 0; bar < m; ++bar) {
        if (c.len(bar) <= TOL_LEN) continue;
        for (int col = 0; col < m; ++col) {
            if (col == bar || c.len(col) <= TOL_LEN) continue;
            if (std::abs(c.len(col) - c.len(bar)) > TOL_LEN || !c.same_segment(bar, col)) continue;
            // Shared vertex s; the witness hangs off bar's other end v.
            int s = -1;
            for (int p : {c.ep[bar].first, c.ep[bar].second})
                for (int q : {c.ep[col].first, c.ep[col].second})
                    if (c.dsu.find(p) == c.dsu.find(q)) s = p;
            if (s < 0) continue;
            int v = c.ep[bar].first == s ? c.ep[bar].second : c.ep[bar].first;
            std::vector<int> wit;
            for (int w = 0; w < m; ++w) {
                if (w == bar || w == col || c.len(w) <= TOL_LEN || !c.touches(w, v)) continue;
                int wv = c.dsu.find(c.ep[w].first) == c.dsu.find(v) ? c.ep[w].first : c.ep[w].second;
                int wo = c.ep[w].first == wv ? c.ep[w].second : c.ep[w].first;
                auto ang = angle_at(c.X(s), c.X(v), c.X(wo));
                if (!ang) continue;
                bool surrounds;
                if (*ang <= TOL_ANG) {
                    const CollocationGroup* g = c.group_near(bar, v);
                    surrounds = g && Ctx::pos(*g, w) >= 0 && c.between(bar, col, w, v);
                } else if (wv != v) {
                    auto r = pocket_contains(c, bar, v, w, wv, col);
                    surrounds = r && *r;
                } else {
                    Segment sb{x[c.ep[bar].first], x[c.ep[bar].second]};
                    Segment sw{x[c.ep[w].first], x[c.ep[w].second]};
                    Segment sc{x[c.ep[col].first], x[c.ep[col].second]};
                    Vec2 apex = x[v];
                    double turn = cross(x[s] - apex, x[wo] - apex);
                    Side side = turn >= 0 ? Side::left : Side::right;
                    auto r = convex_angle_surrounds(sc, sb, sw, side);
                    surrounds = r && *r;
                }
                if (surrounds) wit.push_back(w);
            }
            if (!wit.empty()) out.push_back({Rule::Rule2, bar, col, {wit.front()}});
        }
    }
    return out;
}

}  // namespace detail

inline std::vector<RuleApplication> detect_rule1(const TouchingConfig& tc) {
    detail::Ctx c(tc, {});
    return detail::rule1(c);
}

inline std::vector<RuleApplication> detect_rule2(const TouchingConfig& tc) {
    detail::Ctx c(tc, {});
    return detail::rule2(c);
}

// Vertex pairs forced together by a conclusion: matching endpoints of the two bars.
inline std::vector<std::pair<int, int>> pins_of(const TouchingConfig& tc, const RuleApplication& a) {
    auto ep = endpoints(tc.linkage());
    std::vector<std::pair<int, int>> out;
    for (int p : {ep[a.bar].first, ep[a.bar].second})
        for (int q : {ep[a.collocatedWith].first, ep[a.collocatedWith].second})
            if (p != q && dist(tc.base.coords[p], tc.base.coords[q]) <= TOL_GEOM) out.emplace_back(std::min(p, q), std::max(p, q));
    return out;
}

// Fire all rules to a fixed point, pinning conclusions as they appear, then
// run the rank test on the merged system.
inline ReductionTrace reduce(const TouchingConfig& tc) {
    ReductionTrace tr;
    std::vector<std::pair<int, int>> pins;
    std::set<std::tuple<int, int, int>> fired;
    for (;;) {
        detail::Ctx c(tc, pins);
        auto r1 = detail::rule1(c);
        auto r2 = detail::rule2(c);
        auto by_key = [](const RuleApplication& a, const RuleApplication& b) { return a.key() < b.key(); };
        std::sort(r1.begin(), r1.end(), by_key);
        std::sort(r2.begin(), r2.end(), by_key);
        bool any = false;
        for (auto* list : {&r1, &r2})
            for (auto& a : *list) {
                if (!fired.insert(a.key()).second) continue;
                any = true;
                tr.steps.push_back(a);
                for (auto p : pins_of(tc, a))
                    if (std::find(pins.begin(), pins.end(), p) == pins.end()) pins.push_back(p);
            }
        if (!any) break;
    }
    const Linkage& L = tc.linkage();
    for (auto [a, b] : pins) tr.pins.emplace_back(L.vertices[a], L.vertices[b]);
    tr.dof = merged_dof(tc.base, pins);
    tr.rigid = tr.dof == 3;
    return tr;
}

// The pinned system with each cluster collapsed to one joint: cluster names
// join member ids with '+', bars are deduplicated. Usually not a tree.
struct MergedSystem {
    std::vector<std::string> joints;
    std::vector<Vec2> coords;
    std::vector<Edge> bars;

    Configuration as_configuration() const {
        auto L = std::make_shared<Linkage>();
        L->vertices = joints;
        L->edges = bars;
        return {L, coords};
    }
};

inline MergedSystem merged_system(const TouchingConfig& tc, const ReductionTrace& tr) {
    const Linkage& L = tc.linkage();
    int n = int(L.vertices.size());
    detail::DSU dsu(n);
    for (auto& [a, b] : tr.pins) dsu.unite(L.index_of(a), L.index_of(b));
    auto ep = endpoints(L);
    for (std::size_t i = 0; i < ep.size(); ++i)
        if (L.edges[i].length <= TOL_LEN) dsu.unite(ep[i].first, ep[i].second);
    MergedSystem m;
    std::map<int, int> joint;
    for (int i = 0; i < n; ++i) {
        int r = dsu.find(i);
        if (!joint.count(r)) {
            joint[r] = int(m.joints.size());
            m.joints.push_back(L.vertices[i]);
            m.coords.push_back(tc.base.coords[i]);
        } else {
            m.joints[joint[r]] += "+" + L.vertices[i];
        }
    }
    std::set<std::pair<int, int>> seen;
    for (std::size_t i = 0; i < ep.size(); ++i) {
        int a = joint[dsu.find(ep[i].first)], b = joint[dsu.find(ep[i].second)];
        if (a == b || !seen.insert({std::min(a, b), std::max(a, b)}).second) continue;
        m.bars.push_back({m.joints[a], m.joints[b], L.edges[i].length});
    }
    return m;
}

inline int merged_dof(const MergedSystem& m) { return merged_dof(m.as_configuration(), {}); }

inline std::string rule_name(Rule r) { return r == Rule::Rule1 ? "Rule1" : "Rule2"; }

// Human-readable proof log.
inline std::string proof_log(const TouchingConfig& tc, const ReductionTrace& tr) {
    const Linkage& L = tc.linkage();
    std::ostringstream os;
    int k = 1;
    for (const auto& s : tr.steps) {
        os << k++ << ". ";
        if (s.rule == Rule::Rule1) {
            os << "Rule 1: " << L.edge_name(s.bar) << " stays collocated with " << L.edge_name(s.collocatedWith)
               << ", enclosed by ";
        } else {
            os << "Rule 2: " << L.edge_name(s.bar) << " stays collocated with incident " << L.edge_name(s.collocatedWith)
               << ", surrounded via ";
        }
        for (std::size_t i = 0; i < s.witnesses.size(); ++i) os << (i ? " and " : "") << L.edge_name(s.witnesses[i]);
        os << "\n";
    }
    if (tr.steps.empty()) os << "no rule applies\n";
    os << "merged system: " << tr.pins.size() << " pins, dof " << tr.dof << "\n";
    os << "verdict: " << (tr.rigid ? "rigid" : "inconclusive") << "\n";
    return os.str();
}

}  // namespace linklock
