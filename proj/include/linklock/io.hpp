#pragma once
// JSON reading and writing. Field order is fixed and doubles are printed in
// shortest round-trip form, so equal inputs give byte-identical files.

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "flatten.hpp"
#include "rigidity.hpp"
#include "touching.hpp"

namespace linklock {

using Json = nlohmann::ordered_json;

namespace io_detail {

inline void only_keys(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ValidationError(where + ": expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key())) throw ValidationError(where + (where.empty() ? "" : ".") + it.key() + ": unknown key");
}

inline const Json& need(const Json& j, const char* key, const std::string& where = "") {
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError((where.empty() ? "" : where + ".") + key + ": missing");
    return *it;
}

inline double num(const Json& j, const std::string& field) {
    if (!j.is_number()) throw ValidationError(field + ": expected a number");
    return j.get<double>();
}

inline std::string str(const Json& j, const std::string& field) {
    if (!j.is_string()) throw ValidationError(field + ": expected a string");
    return j.get<std::string>();
}

inline Json point(Vec2 p) { return Json::array({p.x, p.y}); }

inline Vec2 point(const Json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2) throw ValidationError(field + ": expected [x, y]");
    return {num(j[0], field + "[0]"), num(j[1], field + "[1]")};
}

inline Json coords_json(const Linkage& L, const std::vector<Vec2>& x) {
    Json c = Json::object();
    for (std::size_t i = 0; i < L.vertices.size(); ++i) c[L.vertices[i]] = point(x[i]);
    return c;
}

inline std::vector<Vec2> coords_from(const Linkage& L, const Json& j, const std::string& field) {
    if (!j.is_object()) throw ValidationError(field + ": expected an object keyed by vertex");
    std::vector<Vec2> x(L.vertices.size());
    std::vector<char> seen(L.vertices.size(), 0);
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!L.has_vertex(it.key())) throw ValidationError(field + "." + it.key() + ": unknown vertex");
        int i = L.index_of(it.key());
        x[i] = point(*it, field + "." + it.key());
        seen[i] = 1;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) throw ValidationError(field + "." + L.vertices[i] + ": missing");
    return x;
}

inline void write_linkage(Json& j, const Linkage& L) {
    j["vertices"] = L.vertices;
    Json es = Json::array();
    for (const auto& e : L.edges) es.push_back(Json{{"a", e.a}, {"b", e.b}, {"length", e.length}});
    j["edges"] = es;
    Json rot = Json::object();
    for (const auto& v : L.vertices) {
        Json r = Json::array();
        for (int e : L.rotation.at(v)) r.push_back(L.other(e, v));
        rot[v] = r;
    }
    j["rotation"] = rot;
    j["outerFace"] = L.outerFace;
    if (L.forest) j["forest"] = true;
}

inline std::shared_ptr<Linkage> read_linkage(const Json& j) {
    auto L = std::make_shared<Linkage>();
    const Json& vs = need(j, "vertices");
    if (!vs.is_array()) throw ValidationError("vertices: expected an array");
    for (std::size_t i = 0; i < vs.size(); ++i) L->vertices.push_back(str(vs[i], "vertices[" + std::to_string(i) + "]"));
    const Json& es = need(j, "edges");
    if (!es.is_array()) throw ValidationError("edges: expected an array");
    for (std::size_t i = 0; i < es.size(); ++i) {
        std::string w = "edges[" + std::to_string(i) + "]";
        only_keys(es[i], w, {"a", "b", "length"});
        L->edges.push_back({str(need(es[i], "a", w), w + ".a"), str(need(es[i], "b", w), w + ".b"),
                            num(need(es[i], "length", w), w + ".length")});
    }
    const Json& rot = need(j, "rotation");
    if (!rot.is_object()) throw ValidationError("rotation: expected an object keyed by vertex");
    for (auto it = rot.begin(); it != rot.end(); ++it) {
        std::string w = "rotation." + it.key();
        if (!it->is_array()) throw ValidationError(w + ": expected an array of neighbours");
        auto& r = L->rotation[it.key()];
        for (std::size_t k = 0; k < it->size(); ++k) {
            int e = L->find_edge(it.key(), str((*it)[k], w + "[" + std::to_string(k) + "]"));
            if (e < 0) throw ValidationError(w + "[" + std::to_string(k) + "]: not a neighbour");
            r.push_back(e);
        }
    }
    if (j.contains("outerFace")) L->outerFace = str(j["outerFace"], "outerFace");
    if (j.contains("forest")) {
        if (!j["forest"].is_boolean()) throw ValidationError("forest: expected a boolean");
        L->forest = j["forest"].get<bool>();
    }
    L->validate();
    return L;
}

}  // namespace io_detail

enum class DocKind { linkage, configuration, touching, motion };

inline DocKind doc_kind(const Json& j) {
    if (j.contains("offsets")) return DocKind::touching;
    if (j.contains("samples")) return DocKind::motion;
    if (j.contains("coords")) return DocKind::configuration;
    return DocKind::linkage;
}

inline Json to_json(const Linkage& L) {
    Json j = Json::object();
    io_detail::write_linkage(j, L);
    return j;
}

inline Json to_json(const Configuration& c) {
    Json j = to_json(*c.linkage);
    j["coords"] = io_detail::coords_json(*c.linkage, c.coords);
    return j;
}

inline Json to_json(const TouchingConfig& tc) {
    Json j = to_json(tc.base);
    j["offsets"] = io_detail::coords_json(tc.linkage(), tc.offsets);
    return j;
}

inline Json to_json(const Motion& m) {
    Json j = to_json(*m.linkage);
    Json s = Json::array();
    for (const auto& smp : m.samples)
        s.push_back(Json{{"t", smp.t}, {"coords", io_detail::coords_json(*m.linkage, smp.coords)}});
    j["samples"] = s;
    return j;
}

inline Linkage linkage_from_json(const Json& j) {
    io_detail::only_keys(j, "", {"vertices", "edges", "rotation", "outerFace", "forest"});
    return *io_detail::read_linkage(j);
}

inline Configuration configuration_from_json(const Json& j) {
    io_detail::only_keys(j, "", {"vertices", "edges", "rotation", "outerFace", "forest", "coords"});
    auto L = io_detail::read_linkage(j);
    Configuration c{L, io_detail::coords_from(*L, io_detail::need(j, "coords"), "coords")};
    auto ep = endpoints(*L);
    for (std::size_t i = 0; i < ep.size(); ++i)
        if (std::abs(dist(c.coords[ep[i].first], c.coords[ep[i].second]) - L->edges[i].length) > TOL_LEN)
            throw ValidationError("coords: edge " + L->edge_name(int(i)) + " does not match its length");
    return c;
}

// epsilon0 is not stored; it is recomputed from the drawing on load.
inline TouchingConfig touching_from_json(const Json& j) {
    io_detail::only_keys(j, "", {"vertices", "edges", "rotation", "outerFace", "forest", "coords", "offsets"});
    Json base = j;
    base.erase("offsets");
    Configuration c = configuration_from_json(base);
    TouchingConfig tc{c, io_detail::coords_from(*c.linkage, io_detail::need(j, "offsets"), "offsets"), 0};
    return finalize(tc);
}

inline Motion motion_from_json(const Json& j) {
    io_detail::only_keys(j, "", {"vertices", "edges", "rotation", "outerFace", "forest", "samples"});
    Motion m;
    m.linkage = io_detail::read_linkage(j);
    const Json& s = io_detail::need(j, "samples");
    if (!s.is_array()) throw ValidationError("samples: expected an array");
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::string w = "samples[" + std::to_string(i) + "]";
        io_detail::only_keys(s[i], w, {"t", "coords"});
        m.samples.push_back({io_detail::num(io_detail::need(s[i], "t", w), w + ".t"),
                             io_detail::coords_from(*m.linkage, io_detail::need(s[i], "coords", w), w + ".coords")});
    }
    m.validate();
    return m;
}

inline Json to_json(const ReductionTrace& tr, const Linkage& L) {
    Json steps = Json::array();
    for (const auto& s : tr.steps) {
        Json w = Json::array();
        for (int e : s.witnesses) w.push_back(L.edge_name(e));
        steps.push_back(Json{{"rule", rule_name(s.rule)},
                             {"bar", L.edge_name(s.bar)},
                             {"collocatedWith", L.edge_name(s.collocatedWith)},
                             {"witnesses", w}});
    }
    Json pins = Json::array();
    for (const auto& [a, b] : tr.pins) pins.push_back(Json::array({a, b}));
    return Json{{"steps", steps}, {"pins", pins}, {"verdict", tr.rigid ? "rigid" : "inconclusive"}, {"dof", tr.dof}};
}

inline Json to_json(const FlattenResult& r) {
    return Json{{"status", to_string(r.status)},
                {"finalFlatness", r.finalFlatness},
                {"maxDisplacement", r.maxDisplacement},
                {"pinEdge", r.pinEdge >= 0 ? r.motion.linkage->edge_name(r.pinEdge) : ""},
                {"seed", r.seed},
                {"motion", to_json(r.motion)}};
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(path + ": cannot open");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError(path + ": cannot write");
    out << text;
}

}  // namespace linklock
