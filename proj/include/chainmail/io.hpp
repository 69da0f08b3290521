#pragma once

// .cmg.json graph files: parsing with line/column syntax errors and
// id-naming semantic errors, canonical serialization (byte-identical
// round-trip), and JSON emission for matrices, groups, and certificates.

#include "chainmail/graph.hpp"
#include "chainmail/lspace.hpp"
#include "chainmail/surgery.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chainmail {

using json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A graph file: the graph under internal integer ids plus the name tables
// that tie it back to the ids used in the file.
struct GraphFile {
    ChainmailGraph graph;
    bool augmented = false;
    std::map<EdgeId, CrossingCoefficient> coefficients;

    std::map<std::string, VertexId> vertex_ids;
    std::map<std::string, EdgeId> edge_ids;
    std::map<VertexId, std::string> vertex_names;
    std::map<EdgeId, std::string> edge_names;

    VertexId vertex(const std::string& name) const {
        auto it = vertex_ids.find(name);
        if (it == vertex_ids.end()) throw ParseError("unknown vertex \"" + name + "\"");
        return it->second;
    }
    EdgeId edge(const std::string& name) const {
        auto it = edge_ids.find(name);
        if (it == edge_ids.end()) throw ParseError("unknown edge \"" + name + "\"");
        return it->second;
    }

    AugmentedGraph augmented_graph() const {
        AugmentedGraph ag{graph, coefficients};
        ag.check_well_formed();
        return ag;
    }

    // Wraps a library graph with generated names v<id> / e<id>.
    static GraphFile wrap(const ChainmailGraph& g) {
        GraphFile f;
        f.graph = g;
        for (const auto& [v, w] : g.vertices) {
            f.vertex_names[v] = "v" + std::to_string(v);
            f.vertex_ids[f.vertex_names[v]] = v;
        }
        for (const auto& [e, ed] : g.edges) {
            f.edge_names[e] = "e" + std::to_string(e);
            f.edge_ids[f.edge_names[e]] = e;
        }
        return f;
    }
    static GraphFile wrap(const AugmentedGraph& ag) {
        GraphFile f = wrap(ag.base);
        f.augmented = true;
        f.coefficients = ag.coefficients;
        return f;
    }
};

// ---------------------------------------------------------------------------
// Coefficient strings

inline CrossingCoefficient parse_coefficient(const std::string& s) {
    if (s == "inf") return CrossingCoefficient::infinity();
    if (s.rfind("-1/", 0) == 0) {
        std::string tail = s.substr(3);
        if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("bad coefficient \"" + s + "\"");
        return CrossingCoefficient::rational(std::stoll(tail));
    }
    if (s.size() >= 2 && s[0] == '-' &&
        s.find_first_not_of("0123456789", 1) == std::string::npos)
        return CrossingCoefficient::integer(std::stoll(s.substr(1)));
    throw ParseError("bad coefficient \"" + s + "\" (want \"-c\", \"-1/n\", or \"inf\")");
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::string line_column(const std::string& text, size_t byte) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline long long require_int(const json& j, const std::string& what) {
    if (!j.is_number_integer()) throw ParseError(what + " must be an integer");
    return j.get<long long>();
}

inline std::string require_str(const json& j, const std::string& what) {
    if (!j.is_string()) throw ParseError(what + " must be a string");
    return j.get<std::string>();
}

// "edgeName.end" -> dart under internal ids.
inline Dart parse_dart(const GraphFile& f, const std::string& s) {
    auto dot = s.rfind('.');
    if (dot == std::string::npos || dot + 2 != s.size() || (s[dot + 1] != '0' && s[dot + 1] != '1'))
        throw ParseError("malformed dart \"" + s + "\" (want \"edgeId.end\")");
    return {f.edge(s.substr(0, dot)), s[dot + 1] - '0'};
}

}  // namespace detail

inline GraphFile parse_graph_file(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("syntax error at " + detail::line_column(text, e.byte ? e.byte - 1 : 0) +
                         ": " + e.what());
    }
    if (!j.is_object()) throw ParseError("top level must be an object");
    if (!j.contains("format") || j["format"] != "chainmail-graph")
        throw ParseError("missing or wrong \"format\" (want \"chainmail-graph\")");
    if (!j.contains("version") || j["version"] != 1)
        throw ParseError("missing or unsupported \"version\" (want 1)");

    GraphFile f;
    if (!j.contains("vertices") || !j["vertices"].is_array())
        throw ParseError("\"vertices\" must be an array");
    VertexId nv = 0;
    for (const auto& jv : j["vertices"]) {
        if (!jv.is_object()) throw ParseError("vertex entries must be objects");
        std::string name = detail::require_str(jv.at("id"), "vertex id");
        if (f.vertex_ids.count(name)) throw ParseError("duplicate vertex \"" + name + "\"");
        long long w = detail::require_int(jv.at("weight"), "weight of vertex \"" + name + "\"");
        f.vertex_ids[name] = ++nv;
        f.vertex_names[nv] = name;
        f.graph.add_vertex(nv, w);
    }
    EdgeId ne = 0;
    if (j.contains("edges")) {
        if (!j["edges"].is_array()) throw ParseError("\"edges\" must be an array");
        for (const auto& je : j["edges"]) {
            if (!je.is_object()) throw ParseError("edge entries must be objects");
            std::string name = detail::require_str(je.at("id"), "edge id");
            if (f.edge_ids.count(name)) throw ParseError("duplicate edge \"" + name + "\"");
            const auto& ends = je.at("ends");
            if (!ends.is_array() || ends.size() != 2)
                throw ParseError("edge \"" + name + "\": \"ends\" must be a pair");
            VertexId a = f.vertex(detail::require_str(ends[0], "edge end"));
            VertexId b = f.vertex(detail::require_str(ends[1], "edge end"));
            long long w = detail::require_int(je.at("weight"), "weight of edge \"" + name + "\"");
            f.edge_ids[name] = ++ne;
            f.edge_names[ne] = name;
            f.graph.add_edge(ne, a, b, w);
        }
    }

    if (j.contains("rotations")) {
        if (!j["rotations"].is_object()) throw ParseError("\"rotations\" must be an object");
        for (auto& [v, rot] : f.graph.rotations) rot.clear();
        for (const auto& [vname, jr] : j["rotations"].items()) {
            VertexId v = f.vertex(vname);
            if (!jr.is_array())
                throw ParseError("rotation of vertex \"" + vname + "\" must be an array");
            for (const auto& jd : jr)
                f.graph.rotations[v].push_back(
                    detail::parse_dart(f, detail::require_str(jd, "dart")));
        }
        auto rep = validate(f.graph);
        if (!rep.errors.empty()) throw ParseError("bad rotations: " + rep.errors.front());
        if (!rep.valid) throw ParseError("rotations do not describe a sphere embedding");
    } else {
        try {
            f.graph = compute_embedding(f.graph);
        } catch (const GraphError& e) {
            throw ParseError(e.what());
        }
    }

    if (j.contains("augmented")) {
        if (!j["augmented"].is_object()) throw ParseError("\"augmented\" must be an object");
        f.augmented = true;
        for (const auto& [ename, jc] : j["augmented"].items())
            f.coefficients[f.edge(ename)] =
                parse_coefficient(detail::require_str(jc, "coefficient"));
        try {
            f.augmented_graph();
        } catch (const GraphError& e) {
            throw ParseError(e.what());
        }
    }
    return f;
}

// ---------------------------------------------------------------------------
// Serialization (canonical: internal-id order, rotations always emitted)

inline json graph_file_json(const GraphFile& f) {
    json j;
    j["format"] = "chainmail-graph";
    j["version"] = 1;
    j["vertices"] = json::array();
    for (const auto& [v, w] : f.graph.vertices)
        j["vertices"].push_back({{"id", f.vertex_names.at(v)}, {"weight", w}});
    j["edges"] = json::array();
    for (const auto& [e, ed] : f.graph.edges)
        j["edges"].push_back({{"id", f.edge_names.at(e)},
                              {"ends", {f.vertex_names.at(ed.ends[0]),
                                        f.vertex_names.at(ed.ends[1])}},
                              {"weight", ed.weight}});
    json rot = json::object();
    for (const auto& [v, darts] : f.graph.rotations) {
        json arr = json::array();
        for (const Dart& d : darts)
            arr.push_back(f.edge_names.at(d.edge) + "." + std::to_string(d.end));
        rot[f.vertex_names.at(v)] = std::move(arr);
    }
    j["rotations"] = std::move(rot);
    if (f.augmented) {
        json aug = json::object();
        for (const auto& [e, c] : f.coefficients) aug[f.edge_names.at(e)] = c.str();
        j["augmented"] = std::move(aug);
    }
    return j;
}

inline std::string serialize_graph_file(const GraphFile& f) {
    return graph_file_json(f).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// JSON views of library results

inline json matrix_json(const IntMatrix& m) {
    json j;
    j["rows"] = m.rows;
    j["cols"] = m.cols;
    if (!m.row_labels.empty()) j["row_labels"] = m.row_labels;
    if (!m.col_labels.empty()) j["col_labels"] = m.col_labels;
    json entries = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (int k = 0; k < m.cols; ++k) row.push_back(m.at(i, k).str());
        entries.push_back(std::move(row));
    }
    j["entries"] = std::move(entries);
    return j;
}

inline json group_json(const AbelianGroup& g) {
    json j;
    j["name"] = g.to_string();
    json inv = json::array();
    for (const Int& d : g.invariant_factors) inv.push_back(d.str());
    j["invariant_factors"] = std::move(inv);
    j["free_rank"] = g.free_rank;
    return j;
}

// ---------------------------------------------------------------------------
// Certificate JSON (raw integer ids so node graphs survive round-trips)

namespace detail {

inline json raw_graph_json(const ChainmailGraph& g) {
    json j;
    j["vertices"] = json::array();
    for (const auto& [v, w] : g.vertices) j["vertices"].push_back({{"id", v}, {"weight", w}});
    j["edges"] = json::array();
    for (const auto& [e, ed] : g.edges)
        j["edges"].push_back(
            {{"id", e}, {"ends", {ed.ends[0], ed.ends[1]}}, {"weight", ed.weight}});
    json rot = json::object();
    for (const auto& [v, darts] : g.rotations) {
        json arr = json::array();
        for (const Dart& d : darts) arr.push_back(d.str());
        rot[std::to_string(v)] = std::move(arr);
    }
    j["rotations"] = std::move(rot);
    return j;
}

inline ChainmailGraph parse_raw_graph(const json& j) {
    ChainmailGraph g;
    for (const auto& jv : j.at("vertices"))
        g.add_vertex(jv.at("id").get<VertexId>(), require_int(jv.at("weight"), "vertex weight"));
    for (const auto& je : j.at("edges"))
        g.add_edge(je.at("id").get<EdgeId>(), je.at("ends")[0].get<VertexId>(),
                   je.at("ends")[1].get<VertexId>(), require_int(je.at("weight"), "edge weight"));
    for (auto& [v, rot] : g.rotations) rot.clear();
    for (const auto& [vs, jr] : j.at("rotations").items()) {
        VertexId v = std::stoi(vs);
        if (!g.vertices.count(v)) throw ParseError("rotation at unknown vertex " + vs);
        for (const auto& jd : jr) {
            std::string s = require_str(jd, "dart");
            auto dot = s.rfind('.');
            if (dot == std::string::npos || dot + 2 != s.size())
                throw ParseError("malformed dart \"" + s + "\"");
            g.rotations[v].push_back({std::stoi(s.substr(0, dot)), s[dot + 1] - '0'});
        }
    }
    auto rep = validate(g);
    if (!rep.errors.empty()) throw ParseError("bad certificate graph: " + rep.errors.front());
    return g;
}

inline json raw_augmented_json(const AugmentedGraph& ag) {
    json j = raw_graph_json(ag.base);
    json c = json::object();
    for (const auto& [e, coeff] : ag.coefficients) c[std::to_string(e)] = coeff.str();
    j["coefficients"] = std::move(c);
    return j;
}

inline AugmentedGraph parse_raw_augmented(const json& j) {
    AugmentedGraph ag;
    ag.base = parse_raw_graph(j);
    for (const auto& [es, jc] : j.at("coefficients").items())
        ag.coefficients[std::stoi(es)] = parse_coefficient(require_str(jc, "coefficient"));
    return ag;
}

}  // namespace detail

inline json certificate_json(const Certificate& cert) {
    json nodes = json::array();
    for (const CertNode& n : cert.nodes) {
        json jn;
        switch (n.kind) {
            case CertNode::LensBase: jn["kind"] = "lens-base"; break;
            case CertNode::EdgeTriangle: jn["kind"] = "edge-triangle"; break;
            case CertNode::LeafRemoval: jn["kind"] = "leaf-removal"; break;
        }
        jn["det"] = n.det.str();
        jn["graph"] = detail::raw_graph_json(n.graph);
        if (n.kind == CertNode::LensBase) jn["lens_weights"] = n.lens_weights;
        if (n.kind == CertNode::EdgeTriangle) {
            jn["edge"] = n.edge;
            jn["delete_child"] = n.delete_child;
            jn["contract_child"] = n.contract_child;
        }
        if (n.kind == CertNode::LeafRemoval) {
            jn["leaf"] = n.leaf;
            jn["leaf_edge"] = n.leaf_edge;
            jn["child"] = n.child;
        }
        nodes.push_back(std::move(jn));
    }
    json j;
    j["certificate"] = "alternating";
    j["nodes"] = std::move(nodes);
    j["root"] = cert.root;
    return j;
}

inline Certificate parse_certificate(const json& j) {
    if (!j.is_object() || j.value("certificate", "") != "alternating")
        throw ParseError("not an alternating certificate");
    Certificate cert;
    cert.root = j.at("root").get<int>();
    for (const auto& jn : j.at("nodes")) {
        CertNode n;
        std::string kind = jn.at("kind").get<std::string>();
        if (kind == "lens-base")
            n.kind = CertNode::LensBase;
        else if (kind == "edge-triangle")
            n.kind = CertNode::EdgeTriangle;
        else if (kind == "leaf-removal")
            n.kind = CertNode::LeafRemoval;
        else
            throw ParseError("unknown certificate node kind \"" + kind + "\"");
        n.det = Int(jn.at("det").get<std::string>());
        n.graph = detail::parse_raw_graph(jn.at("graph"));
        if (n.kind == CertNode::LensBase)
            n.lens_weights = jn.at("lens_weights").get<std::vector<long long>>();
        if (n.kind == CertNode::EdgeTriangle) {
            n.edge = jn.at("edge").get<EdgeId>();
            n.delete_child = jn.at("delete_child").get<int>();
            n.contract_child = jn.at("contract_child").get<int>();
        }
        if (n.kind == CertNode::LeafRemoval) {
            n.leaf = jn.at("leaf").get<VertexId>();
            n.leaf_edge = jn.at("leaf_edge").get<EdgeId>();
            n.child = jn.at("child").get<int>();
        }
        cert.nodes.push_back(std::move(n));
    }
    return cert;
}

inline json generalized_certificate_json(const GeneralizedCertificate& cert) {
    json nodes = json::array();
    for (const GenCertNode& n : cert.nodes) {
        json jn;
        switch (n.kind) {
            case GenCertNode::ChainmailBase: jn["kind"] = "chainmail-base"; break;
            case GenCertNode::CoefficientTriangle: jn["kind"] = "coefficient-triangle"; break;
            case GenCertNode::UnitBlowDown: jn["kind"] = "unit-blow-down"; break;
        }
        jn["det"] = n.det.str();
        jn["graph"] = detail::raw_augmented_json(n.graph);
        switch (n.kind) {
            case GenCertNode::ChainmailBase:
                jn["base_certificate"] = certificate_json(n.base_certificate);
                break;
            case GenCertNode::CoefficientTriangle:
                jn["edge"] = n.edge;
                jn["shallower_child"] = n.shallower_child;
                jn["erased_child"] = n.erased_child;
                break;
            case GenCertNode::UnitBlowDown:
                jn["edge"] = n.edge;
                jn["child"] = n.child;
                break;
        }
        nodes.push_back(std::move(jn));
    }
    json j;
    j["certificate"] = "generalized";
    j["nodes"] = std::move(nodes);
    j["root"] = cert.root;
    return j;
}

inline GeneralizedCertificate parse_generalized_certificate(const json& j) {
    if (!j.is_object() || j.value("certificate", "") != "generalized")
        throw ParseError("not a generalized certificate");
    GeneralizedCertificate cert;
    cert.root = j.at("root").get<int>();
    for (const auto& jn : j.at("nodes")) {
        GenCertNode n;
        std::string kind = jn.at("kind").get<std::string>();
        if (kind == "chainmail-base")
            n.kind = GenCertNode::ChainmailBase;
        else if (kind == "coefficient-triangle")
            n.kind = GenCertNode::CoefficientTriangle;
        else if (kind == "unit-blow-down")
            n.kind = GenCertNode::UnitBlowDown;
        else
            throw ParseError("unknown certificate node kind \"" + kind + "\"");
        n.det = Int(jn.at("det").get<std::string>());
        n.graph = detail::parse_raw_augmented(jn.at("graph"));
        switch (n.kind) {
            case GenCertNode::ChainmailBase:
                n.base_certificate = parse_certificate(jn.at("base_certificate"));
                break;
            case GenCertNode::CoefficientTriangle:
                n.edge = jn.at("edge").get<EdgeId>();
                n.shallower_child = jn.at("shallower_child").get<int>();
                n.erased_child = jn.at("erased_child").get<int>();
                break;
            case GenCertNode::UnitBlowDown:
                n.edge = jn.at("edge").get<EdgeId>();
                n.child = jn.at("child").get<int>();
                break;
        }
        cert.nodes.push_back(std::move(n));
    }
    return cert;
}

}  // namespace chainmail
