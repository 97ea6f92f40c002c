#pragma once
// Planar predicates: orientation, segment-pair classification, angles.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace linklock {

inline constexpr double TOL_LEN = 1e-9;
inline constexpr double TOL_GEOM = 1e-9;
inline constexpr double TOL_ANG = 1e-9;
inline constexpr double TOL_RANK = 1e-7;
inline constexpr double FLAT_TOL = 1e-4;

struct Vec2 {
    double x = 0, y = 0;
    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

// Signed distance-like orientation: positive when c is left of a->b.
// Normalized by |b - a| so it compares against TOL_GEOM as a length.
inline int orient(Vec2 a, Vec2 b, Vec2 c, double tol = TOL_GEOM) {
    double L = dist(a, b);
    double o = cross(b - a, c - a);
    if (L > tol) o /= L;
    else o = 0;  // degenerate base: treat everything as collinear
    if (o > tol) return 1;
    if (o < -tol) return -1;
    return 0;
}

// Closest point on segment [a,b] to p.
inline Vec2 project_to_segment(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 d = b - a;
    double L2 = dot(d, d);
    if (L2 == 0) return a;
    double t = std::clamp(dot(p - a, d) / L2, 0.0, 1.0);
    return a + t * d;
}

inline double point_segment_dist(Vec2 p, Vec2 a, Vec2 b) {
    return dist(p, project_to_segment(p, a, b));
}

enum class PairKind {
    disjoint,
    shared_endpoint_only,
    touching_noncrossing,
    properly_crossing,
    overlapping_collinear
};

inline const char* to_string(PairKind k) {
    switch (k) {
        case PairKind::disjoint: return "disjoint";
        case PairKind::shared_endpoint_only: return "shared-endpoint-only";
        case PairKind::touching_noncrossing: return "touching-noncrossing";
        case PairKind::properly_crossing: return "properly-crossing";
        case PairKind::overlapping_collinear: return "overlapping-collinear";
    }
    return "?";
}

struct SegmentPairClass {
    PairKind kind = PairKind::disjoint;
    // Contact point, or the overlap sub-segment [w0, w1] (w0 == w1 for points).
    Vec2 w0{}, w1{};
};

namespace detail {

inline bool near(Vec2 a, Vec2 b) { return dist(a, b) <= TOL_GEOM; }

// Overlap of two collinear segments projected onto direction u through o.
inline std::optional<std::pair<Vec2, Vec2>> collinear_overlap(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
    Vec2 d = p2 - p1;
    if (norm(d) <= TOL_GEOM) d = q2 - q1;
    double L = norm(d);
    if (L <= TOL_GEOM) return std::nullopt;
    Vec2 u = (1.0 / L) * d;
    auto s = [&](Vec2 v) { return dot(v - p1, u); };
    double a0 = std::min(s(p1), s(p2)), a1 = std::max(s(p1), s(p2));
    double b0 = std::min(s(q1), s(q2)), b1 = std::max(s(q1), s(q2));
    double lo = std::max(a0, b0), hi = std::min(a1, b1);
    if (hi - lo <= TOL_GEOM) return std::nullopt;
    return std::pair{p1 + lo * u, p1 + hi * u};
}

}  // namespace detail

// Classifies two closed segments. Degenerate (point) segments are allowed.
inline SegmentPairClass classify_pair(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
    using detail::near;
    bool pdeg = near(p1, p2), qdeg = near(q1, q2);

    // Shared endpoints, counted once per coincident pair.
    int shared = 0;
    Vec2 sp{};
    for (Vec2 a : {p1, p2})
        for (Vec2 b : {q1, q2})
            if (near(a, b)) { ++shared; sp = a; }

    int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
    int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);

    bool collinear = (pdeg || qdeg) ? false : (o1 == 0 && o2 == 0 && o3 == 0 && o4 == 0);
    if (collinear) {
        if (auto ov = detail::collinear_overlap(p1, p2, q1, q2))
            return {PairKind::overlapping_collinear, ov->first, ov->second};
    }
    if (pdeg && qdeg) {
        if (near(p1, q1)) return {PairKind::shared_endpoint_only, p1, p1};
        return {PairKind::disjoint, {}, {}};
    }

    // Contacts: endpoints of one lying on the other.
    auto on = [](Vec2 p, Vec2 a, Vec2 b) { return point_segment_dist(p, a, b) <= TOL_GEOM; };
    if (pdeg || qdeg) {
        Vec2 pt = pdeg ? p1 : q1;
        Vec2 a = pdeg ? q1 : p1, b = pdeg ? q2 : p2;
        if (!on(pt, a, b)) return {PairKind::disjoint, {}, {}};
        if (near(pt, a) || near(pt, b)) return {PairKind::shared_endpoint_only, pt, pt};
        return {PairKind::touching_noncrossing, pt, pt};
    }

    if (o1 * o2 < 0 && o3 * o4 < 0) {
        double t = cross(q1 - p1, q2 - q1) / cross(p2 - p1, q2 - q1);
        Vec2 w = p1 + t * (p2 - p1);
        return {PairKind::properly_crossing, w, w};
    }

    // Remaining contacts are at an endpoint of one segment.
    bool touch = false;
    Vec2 tp{};
    for (Vec2 p : {p1, p2})
        if (on(p, q1, q2)) { touch = true; tp = p; }
    for (Vec2 q : {q1, q2})
        if (on(q, p1, p2)) { touch = true; tp = q; }
    if (!touch) return {PairKind::disjoint, {}, {}};

    if (shared > 0) {
        // Touching only at the common joint, unless another endpoint also touches.
        bool other = false;
        for (Vec2 p : {p1, p2})
            if (!near(p, sp) && on(p, q1, q2)) other = true;
        for (Vec2 q : {q1, q2})
            if (!near(q, sp) && on(q, p1, p2)) other = true;
        if (!other) return {PairKind::shared_endpoint_only, sp, sp};
    }
    return {PairKind::touching_noncrossing, tp, tp};
}

// Unsigned angle at apex in [0, pi]; nullopt when a ray has zero length.
inline std::optional<double> angle_at(Vec2 a, Vec2 apex, Vec2 b) {
    Vec2 u = a - apex, v = b - apex;
    if (norm(u) <= TOL_GEOM || norm(v) <= TOL_GEOM) return std::nullopt;
    return std::atan2(std::abs(cross(u, v)), dot(u, v));
}

enum class Side { left = 1, right = -1 };

struct Segment {
    Vec2 a, b;
};

// Sector at the shared endpoint of bPrime and bDoublePrime, swept from bPrime
// toward the given side (left = counter-clockwise) until bDoublePrime; must be
// at most pi. Returns whether it contains the direction from the apex to the
// far end of b_edge (boundary inclusive). nullopt on degenerate input.
inline std::optional<bool> convex_angle_surrounds(Segment b_edge, Segment bPrime, Segment bDoublePrime, Side side) {
    using detail::near;
    Vec2 apex;
    Vec2 p, q;
    if (near(bPrime.a, bDoublePrime.a)) { apex = bPrime.a; p = bPrime.b; q = bDoublePrime.b; }
    else if (near(bPrime.a, bDoublePrime.b)) { apex = bPrime.a; p = bPrime.b; q = bDoublePrime.a; }
    else if (near(bPrime.b, bDoublePrime.a)) { apex = bPrime.b; p = bPrime.a; q = bDoublePrime.b; }
    else if (near(bPrime.b, bDoublePrime.b)) { apex = bPrime.b; p = bPrime.a; q = bDoublePrime.a; }
    else return std::nullopt;
    Vec2 target = near(b_edge.a, apex) ? b_edge.b : near(b_edge.b, apex) ? b_edge.a : 0.5 * (b_edge.a + b_edge.b);
    Vec2 u = p - apex, v = q - apex, w = target - apex;
    if (norm(u) <= TOL_GEOM || norm(v) <= TOL_GEOM || norm(w) <= TOL_GEOM) return std::nullopt;

    double s = side == Side::left ? 1.0 : -1.0;
    auto ccw_angle = [s](Vec2 from, Vec2 to) {
        double a = std::atan2(s * cross(from, to), dot(from, to));
        if (a < 0) a += 2 * std::numbers::pi;
        return a;
    };
    double span = ccw_angle(u, v);
    if (span > 2 * std::numbers::pi - TOL_ANG) span = 0;  // coincident rays
    if (span > std::numbers::pi + TOL_ANG) return false;
    double aw = ccw_angle(u, w);
    if (aw > 2 * std::numbers::pi - TOL_ANG) aw = 0;
    return aw <= span + TOL_ANG;
}

}  // namespace linklock
