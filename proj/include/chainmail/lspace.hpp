#pragma once

// Certificate trees mechanizing the deletion-contraction induction for
// negative alternating chainmail graphs, the coefficient induction for
// partially augmented graphs, and the acyclic-orientation obstruction.

#include "chainmail/exact.hpp"
#include "chainmail/graph.hpp"
#include "chainmail/surgery.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chainmail {

struct CertificateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Hypotheses of the alternating theorem

// nu(v) >= 0 everywhere, at least one nu(v) > 0 per component, all
// epsilon(e) < 0. Returns a description of the first violation, if any.
inline std::optional<std::string> alternating_hypothesis_violation(const ChainmailGraph& g) {
    for (const auto& [v, w] : g.vertices)
        if (w < 0) return "vertex " + std::to_string(v) + " has negative weight";
    for (const auto& [e, ed] : g.edges)
        if (ed.weight >= 0) return "edge " + std::to_string(e) + " has weight >= 0";
    for (const auto& comp : connected_components(g)) {
        bool positive = false;
        for (VertexId v : comp) positive = positive || g.vertices.at(v) > 0;
        if (!positive)
            return "component of vertex " + std::to_string(*comp.begin()) +
                   " has no positive-weight vertex";
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Certificates for the alternating theorem

struct CertNode {
    enum Kind { LensBase, EdgeTriangle, LeafRemoval } kind;
    ChainmailGraph graph;  // normalized snapshot at this node
    Int det;               // det Lambda(graph)
    // LensBase
    std::vector<long long> lens_weights;
    // EdgeTriangle
    EdgeId edge = 0;
    int delete_child = -1;
    int contract_child = -1;
    // LeafRemoval
    VertexId leaf = 0;
    EdgeId leaf_edge = 0;
    int child = -1;
};

struct Certificate {
    std::vector<CertNode> nodes;
    int root = -1;
};

namespace detail {

// Deterministic edge choice for the induction step on a normalized graph
// (all epsilon = -1, no loops): lowest-id non-isthmus edge if one exists;
// otherwise the graph is a forest and we pick the lowest-id isthmus whose
// two sides both retain a positive vertex, if any.
inline std::optional<EdgeId> pick_triangle_edge(const ChainmailGraph& g) {
    for (const auto& [e, ed] : g.edges)
        if (!is_bridge(g, e)) return e;
    for (const auto& [e, ed] : g.edges) {
        ChainmailGraph del = minor(g, e, MinorKind::Delete);
        bool ok = true;
        for (const auto& comp : connected_components(del)) {
            if (!comp.count(ed.ends[0]) && !comp.count(ed.ends[1])) continue;
            bool positive = false;
            for (VertexId v : comp) positive = positive || del.vertices.at(v) > 0;
            ok = ok && positive;
        }
        if (ok) return e;
    }
    return std::nullopt;
}

inline int certify_rec(Certificate& cert, const ChainmailGraph& g) {
    CertNode node;
    node.graph = g;
    node.det = determinant(linking_matrix(g).matrix);

    if (g.edges.empty()) {
        node.kind = CertNode::LensBase;
        Int prod = 1;
        for (const auto& [v, w] : g.vertices) {
            node.lens_weights.push_back(w);
            prod *= w;
        }
        if (node.det != prod)
            throw CertificateError("certify: lens base determinant mismatch");
        int idx = static_cast<int>(cert.nodes.size());
        cert.nodes.push_back(std::move(node));
        return idx;
    }

    if (auto e = pick_triangle_edge(g)) {
        node.kind = CertNode::EdgeTriangle;
        node.edge = *e;
        node.delete_child = certify_rec(cert, minor(g, *e, MinorKind::Delete));
        node.contract_child = certify_rec(cert, contract_delooped(g, *e));
        Int sum = cert.nodes[node.delete_child].det + cert.nodes[node.contract_child].det;
        if (node.det != sum)
            throw CertificateError("certify: deletion-contraction additivity failed at edge " +
                                   std::to_string(*e));
        if (node.det <= 0 || cert.nodes[node.delete_child].det <= 0 ||
            cert.nodes[node.contract_child].det <= 0)
            throw CertificateError("certify: non-positive determinant in triangle node");
        int idx = static_cast<int>(cert.nodes.size());
        cert.nodes.push_back(std::move(node));
        return idx;
    }

    // forest whose every edge separates a positive vertex from none:
    // remove the lowest-id zero-weight leaf
    for (const auto& [v, w] : g.vertices) {
        if (w != 0 || g.degree(v) != 1) continue;
        node.kind = CertNode::LeafRemoval;
        node.leaf = v;
        node.leaf_edge = g.rotations.at(v).front().edge;
        node.child = certify_rec(cert, apply_move(g, MoveKind::remove_unit_leaf(v, node.leaf_edge)));
        if (node.det != cert.nodes[node.child].det)
            throw CertificateError("certify: leaf removal changed the determinant");
        int idx = static_cast<int>(cert.nodes.size());
        cert.nodes.push_back(std::move(node));
        return idx;
    }
    throw CertificateError("certify: no zero-weight leaf available (internal invariant broken)");
}

}  // namespace detail

// Builds the deletion-contraction certificate for a graph satisfying the
// alternating-theorem hypotheses. The input is normalized first (parallel
// -1 copies, loops dropped). Every node's determinant identity is checked
// during construction.
inline Certificate certify(const ChainmailGraph& g) {
    if (auto why = alternating_hypothesis_violation(g))
        throw CertificateError("certify: " + *why);
    Certificate cert;
    cert.root = detail::certify_rec(cert, normalize(g));
    return cert;
}

// Independently recomputes every node: hypotheses, determinants, child-graph
// derivations, additivity, and base-case products. Returns false (with the
// first failure, if requested) rather than throwing.
inline bool verify_certificate(const Certificate& cert, std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (cert.root < 0 || cert.root >= static_cast<int>(cert.nodes.size()))
        return fail("bad root index");
    for (size_t i = 0; i < cert.nodes.size(); ++i) {
        const CertNode& n = cert.nodes[i];
        const std::string at = "node " + std::to_string(i) + ": ";
        if (auto v = alternating_hypothesis_violation(n.graph)) return fail(at + *v);
        for (const auto& [e, ed] : n.graph.edges) {
            if (ed.weight != -1) return fail(at + "graph is not normalized (edge weight != -1)");
            if (ed.is_loop()) return fail(at + "graph is not normalized (loop present)");
        }
        if (n.det != determinant(linking_matrix(n.graph).matrix))
            return fail(at + "stored determinant does not match Lambda");
        auto child_ok = [&](int c) { return c >= 0 && c < static_cast<int>(cert.nodes.size()); };
        switch (n.kind) {
            case CertNode::LensBase: {
                if (!n.graph.edges.empty()) return fail(at + "lens base has edges");
                Int prod = 1;
                size_t k = 0;
                for (const auto& [v, w] : n.graph.vertices) {
                    if (k >= n.lens_weights.size() || n.lens_weights[k] != w)
                        return fail(at + "lens weights do not match graph");
                    if (w <= 0) return fail(at + "lens base has a non-positive weight");
                    prod *= w;
                    ++k;
                }
                if (k != n.lens_weights.size()) return fail(at + "lens weights do not match graph");
                if (n.det != prod) return fail(at + "lens base determinant != product of weights");
                break;
            }
            case CertNode::EdgeTriangle: {
                if (!child_ok(n.delete_child) || !child_ok(n.contract_child))
                    return fail(at + "bad child index");
                auto it = n.graph.edges.find(n.edge);
                if (it == n.graph.edges.end() || it->second.weight != -1 || it->second.is_loop())
                    return fail(at + "triangle edge is not a -1 non-loop edge");
                if (!(cert.nodes[n.delete_child].graph == minor(n.graph, n.edge, MinorKind::Delete)))
                    return fail(at + "delete child is not G - e");
                if (!(cert.nodes[n.contract_child].graph == contract_delooped(n.graph, n.edge)))
                    return fail(at + "contract child is not G / e");
                if (n.det != cert.nodes[n.delete_child].det + cert.nodes[n.contract_child].det)
                    return fail(at + "determinant additivity fails");
                if (n.det <= 0) return fail(at + "non-positive determinant");
                break;
            }
            case CertNode::LeafRemoval: {
                if (!child_ok(n.child)) return fail(at + "bad child index");
                auto vit = n.graph.vertices.find(n.leaf);
                if (vit == n.graph.vertices.end() || vit->second != 0 ||
                    n.graph.degree(n.leaf) != 1)
                    return fail(at + "removed vertex is not a zero-weight leaf");
                ChainmailGraph expect =
                    apply_move(n.graph, MoveKind::remove_unit_leaf(n.leaf, n.leaf_edge));
                if (!(cert.nodes[n.child].graph == expect))
                    return fail(at + "child is not the leaf removal");
                if (n.det != cert.nodes[n.child].det)
                    return fail(at + "leaf removal determinant mismatch");
                break;
            }
        }
    }
    return true;
}

// Root determinant also equals the sum over LensBase leaves of the product
// of their weights (the unrolled deletion-contraction expansion).
inline Int lens_leaf_sum(const Certificate& cert, int node = -1) {
    const CertNode& n = cert.nodes[node < 0 ? cert.root : node];
    switch (n.kind) {
        case CertNode::LensBase: {
            Int prod = 1;
            for (long long w : n.lens_weights) prod *= w;
            return prod;
        }
        case CertNode::EdgeTriangle:
            return lens_leaf_sum(cert, n.delete_child) + lens_leaf_sum(cert, n.contract_child);
        case CertNode::LeafRemoval:
            return lens_leaf_sum(cert, n.child);
    }
    throw CertificateError("lens_leaf_sum: unknown node kind");
}

// ---------------------------------------------------------------------------
// Generalized certificates for augmented graphs

struct GenCertNode {
    enum Kind { ChainmailBase, CoefficientTriangle, UnitBlowDown } kind;
    AugmentedGraph graph;
    Int det;  // det of the augmented matrix (signed)
    // CoefficientTriangle
    EdgeId edge = 0;
    int shallower_child = -1;  // same graph with c - 1 on the chosen loop
    int erased_child = -1;     // crossing loop erased
    // UnitBlowDown
    int child = -1;
    // ChainmailBase
    Certificate base_certificate;
};

struct GeneralizedCertificate {
    std::vector<GenCertNode> nodes;
    int root = -1;
};

namespace detail {

inline void check_sign_lemma(const AugmentedGraph& ag, const Int& det) {
    int vc = static_cast<int>(ag.coefficients.size());
    if (det != 0 && (det > 0) != (vc % 2 == 0))
        throw CertificateError("certify_generalized: sign lemma fails with " + std::to_string(vc) +
                               " crossing loops, det " + det.str());
}

inline int certify_gen_rec(GeneralizedCertificate& cert, const AugmentedGraph& ag) {
    GenCertNode node;
    node.graph = ag;
    node.det = determinant(augmented_matrix(ag).matrix);
    check_sign_lemma(ag, node.det);

    EdgeId deep = -1, unit = -1;
    for (const auto& [e, c] : ag.coefficients) {
        if (c.c >= 2 && deep < 0) deep = e;
        if (c.c == 1 && unit < 0) unit = e;
    }
    if (deep >= 0) {
        node.kind = GenCertNode::CoefficientTriangle;
        node.edge = deep;
        AugmentedGraph shallower = ag;
        shallower.coefficients.at(deep) =
            CrossingCoefficient::integer(ag.coefficients.at(deep).c - 1);
        node.shallower_child = certify_gen_rec(cert, shallower);
        node.erased_child =
            certify_gen_rec(cert, crossing_loop_transform(ag, deep, CrossingLoopAction::Erase));
        Int want = abs(cert.nodes[node.shallower_child].det) + abs(cert.nodes[node.erased_child].det);
        if (abs(node.det) != want)
            throw CertificateError(
                "certify_generalized: coefficient-triangle magnitude additivity fails at edge " +
                std::to_string(deep));
    } else if (unit >= 0) {
        node.kind = GenCertNode::UnitBlowDown;
        node.edge = unit;
        node.child =
            certify_gen_rec(cert, crossing_loop_transform(ag, unit, CrossingLoopAction::BlowDownUnit));
        if (abs(node.det) != abs(cert.nodes[node.child].det))
            throw CertificateError("certify_generalized: blow-down changed |det| at edge " +
                                   std::to_string(unit));
    } else {
        node.kind = GenCertNode::ChainmailBase;
        node.base_certificate = certify(ag.base);
        if (node.det != node.base_certificate.nodes[node.base_certificate.root].det)
            throw CertificateError("certify_generalized: base determinant mismatch");
    }
    int idx = static_cast<int>(cert.nodes.size());
    cert.nodes.push_back(std::move(node));
    return idx;
}

}  // namespace detail

// Builds the coefficient-induction certificate for an augmented graph with
// integer coefficients -c <= -1 whose base (all loops restored at -1)
// satisfies the alternating hypotheses. The sign lemma and the magnitude
// additivity are checked at every node.
inline GeneralizedCertificate certify_generalized(const AugmentedGraph& ag) {
    ag.check_well_formed();
    if (!ag.all_integer_coefficients())
        throw CertificateError("certify_generalized: coefficients must be integers -c <= -1");
    if (auto why = alternating_hypothesis_violation(ag.base))
        throw CertificateError("certify_generalized: restored base: " + *why);
    GeneralizedCertificate cert;
    cert.root = detail::certify_gen_rec(cert, ag);
    return cert;
}

// Independently recomputes every node of a generalized certificate:
// well-formedness, determinants, the sign lemma, child derivations,
// magnitude additivity, and the embedded base certificates.
inline bool verify_generalized_certificate(const GeneralizedCertificate& cert,
                                           std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (cert.root < 0 || cert.root >= static_cast<int>(cert.nodes.size()))
        return fail("bad root index");
    for (size_t i = 0; i < cert.nodes.size(); ++i) {
        const GenCertNode& n = cert.nodes[i];
        const std::string at = "node " + std::to_string(i) + ": ";
        try {
            n.graph.check_well_formed();
        } catch (const GraphError& e) {
            return fail(at + e.what());
        }
        if (!n.graph.all_integer_coefficients())
            return fail(at + "non-integer coefficient");
        if (auto v = alternating_hypothesis_violation(n.graph.base))
            return fail(at + "restored base: " + *v);
        if (n.det != determinant(augmented_matrix(n.graph).matrix))
            return fail(at + "stored determinant does not match the augmented matrix");
        int vc = static_cast<int>(n.graph.coefficients.size());
        if (n.det != 0 && (n.det > 0) != (vc % 2 == 0))
            return fail(at + "sign lemma fails");
        auto child_ok = [&](int c) { return c >= 0 && c < static_cast<int>(cert.nodes.size()); };
        switch (n.kind) {
            case GenCertNode::CoefficientTriangle: {
                if (!child_ok(n.shallower_child) || !child_ok(n.erased_child))
                    return fail(at + "bad child index");
                auto it = n.graph.coefficients.find(n.edge);
                if (it == n.graph.coefficients.end() || it->second.c < 2)
                    return fail(at + "triangle loop does not carry coefficient -c, c >= 2");
                AugmentedGraph shallower = n.graph;
                shallower.coefficients.at(n.edge) =
                    CrossingCoefficient::integer(it->second.c - 1);
                if (!(cert.nodes[n.shallower_child].graph == shallower))
                    return fail(at + "shallower child is not c - 1");
                if (!(cert.nodes[n.erased_child].graph ==
                      crossing_loop_transform(n.graph, n.edge, CrossingLoopAction::Erase)))
                    return fail(at + "erased child is not the loop erasure");
                if (abs(n.det) != abs(cert.nodes[n.shallower_child].det) +
                                      abs(cert.nodes[n.erased_child].det))
                    return fail(at + "magnitude additivity fails");
                break;
            }
            case GenCertNode::UnitBlowDown: {
                if (!child_ok(n.child)) return fail(at + "bad child index");
                auto it = n.graph.coefficients.find(n.edge);
                if (it == n.graph.coefficients.end() || it->second.c != 1)
                    return fail(at + "blow-down loop does not carry coefficient -1");
                if (!(cert.nodes[n.child].graph ==
                      crossing_loop_transform(n.graph, n.edge, CrossingLoopAction::BlowDownUnit)))
                    return fail(at + "child is not the blow-down");
                if (abs(n.det) != abs(cert.nodes[n.child].det))
                    return fail(at + "blow-down changed |det|");
                break;
            }
            case GenCertNode::ChainmailBase: {
                if (!n.graph.coefficients.empty())
                    return fail(at + "base node still has crossing loops");
                std::string sub;
                if (!verify_certificate(n.base_certificate, &sub))
                    return fail(at + "base certificate: " + sub);
                const CertNode& root = n.base_certificate.nodes[n.base_certificate.root];
                if (!(root.graph == normalize(n.graph.base)))
                    return fail(at + "base certificate root graph mismatch");
                if (root.det != n.det) return fail(at + "base determinant mismatch");
                break;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Orderability obstruction

struct OrientationWitness {
    EdgeOrientation orientation;
    std::set<VertexId> sinks;
    std::set<VertexId> sources;
    std::optional<VertexId> zero_weight_witness;  // a sink or source with nu = 0
};

struct ObstructionReport {
    std::vector<OrientationWitness> orientations;
    bool verdict = false;
};

// Enumerates all acyclic orientations of a graph with epsilon = -1 edges and
// at most one positive vertex weight; each must have a sink and a source,
// and (when edges exist) a zero-weight sink-or-source witness.
inline ObstructionReport orderability_obstruction(const ChainmailGraph& g, int cap = 20) {
    for (const auto& [e, ed] : g.edges)
        if (ed.weight != -1)
            throw GraphError("orderability_obstruction: edge " + std::to_string(e) +
                             " has weight != -1");
    int positive = 0;
    for (const auto& [v, w] : g.vertices) {
        if (w < 0) throw GraphError("orderability_obstruction: negative vertex weight");
        if (w > 0) ++positive;
    }
    if (positive > 1)
        throw GraphError("orderability_obstruction: more than one positive vertex weight");

    ObstructionReport rep;
    rep.verdict = true;
    for (EdgeOrientation& o : enumerate_acyclic_orientations(g, cap)) {
        OrientationWitness w;
        std::map<VertexId, int> indeg, outdeg;
        for (const auto& [v, wt] : g.vertices) indeg[v] = outdeg[v] = 0;
        for (const auto& [e, src] : o.source) {
            const EdgeData& ed = g.edges.at(e);
            VertexId dst = ed.ends[0] == src ? ed.ends[1] : ed.ends[0];
            ++outdeg[src];
            ++indeg[dst];
        }
        for (const auto& [v, wt] : g.vertices) {
            bool touched = indeg[v] + outdeg[v] > 0;
            if (!touched) continue;  // isolated vertices are vacuous sinks and sources
            if (outdeg[v] == 0) w.sinks.insert(v);
            if (indeg[v] == 0) w.sources.insert(v);
        }
        for (VertexId v : w.sinks)
            if (g.vertices.at(v) == 0 && !w.zero_weight_witness) w.zero_weight_witness = v;
        for (VertexId v : w.sources)
            if (g.vertices.at(v) == 0 && !w.zero_weight_witness) w.zero_weight_witness = v;
        if (!g.edges.empty() && (w.sinks.empty() || w.sources.empty() || !w.zero_weight_witness))
            rep.verdict = false;
        w.orientation = std::move(o);
        rep.orientations.push_back(std::move(w));
    }
    return rep;
}

}  // namespace chainmail
