#pragma once
// SVG output. Drawings use model units directly with y negated, so parsing
// x1/y1 or cx/cy back out recovers the coordinates (y = -cy).

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "touching.hpp"

namespace linklock {

struct RenderStyle {
    double margin = 0.1;      // fraction of the larger extent
    double stroke = 0.004;    // fraction of the larger extent
    double mark = 0.008;      // vertex radius, same units
    double seconds = 4.0;     // animation length
    bool labels = true;
};

namespace render_detail {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0 ? 0.0 : v);
    return buf;
}

struct Box {
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
    void add(Vec2 p) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, -p.y);
        y1 = std::max(y1, -p.y);
    }
    double extent() const { return std::max({x1 - x0, y1 - y0, 1e-6}); }
};

inline std::string header(const Box& b, const RenderStyle& st) {
    double e = b.extent(), m = st.margin * e;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(b.x0 - m) << ' ' << num(b.y0 - m) << ' '
       << num(b.x1 - b.x0 + 2 * m) << ' ' << num(b.y1 - b.y0 + 2 * m) << "\" width=\"800\" height=\"800\">\n";
    os << "<g stroke=\"black\" stroke-width=\"" << num(st.stroke * e) << "\" stroke-linecap=\"round\">\n";
    return os.str();
}

inline std::string drawing(const Linkage& L, const std::vector<Vec2>& x, const Box& b, const RenderStyle& st) {
    double e = b.extent();
    std::ostringstream os;
    os << header(b, st);
    auto ep = endpoints(L);
    for (std::size_t i = 0; i < ep.size(); ++i) {
        Vec2 p = x[ep[i].first], q = x[ep[i].second];
        os << "<line data-edge=\"" << L.edge_name(int(i)) << "\" x1=\"" << num(p.x) << "\" y1=\"" << num(-p.y)
           << "\" x2=\"" << num(q.x) << "\" y2=\"" << num(-q.y) << "\"/>\n";
    }
    os << "</g>\n<g fill=\"#c33\">\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        os << "<circle data-vertex=\"" << L.vertices[i] << "\" cx=\"" << num(x[i].x) << "\" cy=\"" << num(-x[i].y)
           << "\" r=\"" << num(st.mark * e) << "\"/>\n";
    os << "</g>\n";
    if (st.labels) {
        os << "<g font-size=\"" << num(0.03 * e) << "\" fill=\"#236\">\n";
        for (std::size_t i = 0; i < x.size(); ++i)
            os << "<text x=\"" << num(x[i].x + 0.012 * e) << "\" y=\"" << num(-x[i].y - 0.012 * e) << "\">"
               << L.vertices[i] << "</text>\n";
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace render_detail

inline std::string render_svg(const Linkage& L, const std::vector<Vec2>& x, const RenderStyle& st = {}) {
    render_detail::Box b;
    for (Vec2 p : x) b.add(p);
    return render_detail::drawing(L, x, b, st);
}

inline std::string render_svg(const Configuration& c, const RenderStyle& st = {}) {
    return render_svg(*c.linkage, c.coords, st);
}

// A touching configuration is drawn pulled apart at eps; past epsilon0 the
// drawing may touch and no longer encodes the configuration.
inline std::string render_svg(const TouchingConfig& tc, double eps, const RenderStyle& st = {}) {
    if (!(eps > 0) || eps > tc.epsilon0) throw ValidationError("epsilon: must lie in (0, epsilon0]");
    return render_svg(tc.linkage(), tc.pulled_apart(eps), st);
}

// One static frame per sample, all framed by the same viewBox.
inline std::vector<std::string> render_frames(const Motion& m, const RenderStyle& st = {}) {
    std::vector<std::string> out;
    render_detail::Box b;
    for (const auto& s : m.samples)
        for (Vec2 p : s.coords) b.add(p);
    for (const auto& s : m.samples) out.push_back(render_detail::drawing(*m.linkage, s.coords, b, st));
    return out;
}

// Single SVG whose lines and marks move through the samples with SMIL.
inline std::string render_animated(const Motion& m, const RenderStyle& st = {}) {
    using render_detail::num;
    const Linkage& L = *m.linkage;
    render_detail::Box b;
    for (const auto& s : m.samples)
        for (Vec2 p : s.coords) b.add(p);
    double e = b.extent();
    std::string keys;
    for (std::size_t i = 0; i < m.samples.size(); ++i) keys += (i ? ";" : "") + num(m.samples[i].t);
    auto values = [&](auto f) {
        std::string v;
        for (std::size_t i = 0; i < m.samples.size(); ++i) v += (i ? ";" : "") + num(f(m.samples[i].coords));
        return v;
    };
    auto anim = [&](const std::string& attr, const std::string& vals) {
        return "<animate attributeName=\"" + attr + "\" dur=\"" + num(st.seconds) + "s\" repeatCount=\"indefinite\" keyTimes=\"" +
               keys + "\" values=\"" + vals + "\"/>";
    };
    const auto& x0 = m.samples.front().coords;
    std::ostringstream os;
    os << render_detail::header(b, st);
    auto ep = endpoints(L);
    for (std::size_t i = 0; i < ep.size(); ++i) {
        int a = ep[i].first, c = ep[i].second;
        os << "<line data-edge=\"" << L.edge_name(int(i)) << "\" x1=\"" << num(x0[a].x) << "\" y1=\"" << num(-x0[a].y)
           << "\" x2=\"" << num(x0[c].x) << "\" y2=\"" << num(-x0[c].y) << "\">"
           << anim("x1", values([&](const std::vector<Vec2>& x) { return x[a].x; }))
           << anim("y1", values([&](const std::vector<Vec2>& x) { return -x[a].y; }))
           << anim("x2", values([&](const std::vector<Vec2>& x) { return x[c].x; }))
           << anim("y2", values([&](const std::vector<Vec2>& x) { return -x[c].y; })) << "</line>\n";
    }
    os << "</g>\n<g fill=\"#c33\">\n";
    for (std::size_t i = 0; i < x0.size(); ++i)
        os << "<circle data-vertex=\"" << L.vertices[i] << "\" cx=\"" << num(x0[i].x) << "\" cy=\"" << num(-x0[i].y)
           << "\" r=\"" << num(st.mark * e) << "\">"
           << anim("cx", values([&](const std::vector<Vec2>& x) { return x[i].x; }))
           << anim("cy", values([&](const std::vector<Vec2>& x) { return -x[i].y; })) << "</circle>\n";
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace linklock
