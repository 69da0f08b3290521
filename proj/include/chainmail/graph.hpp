#pragma once

// Weighted planar multigraphs with rotation systems: validation by face
// tracing, minors, simplification moves, normalization, combinatorial
// predicates, acyclic orientations and spanning-tree enumeration.

#include "chainmail/exact.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace chainmail {

using VertexId = int;
using EdgeId = int;

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Half-edge of the planar embedding. Every edge has exactly two darts
// (end 0 and end 1); for a loop both attach to the same vertex.
struct Dart {
    EdgeId edge = 0;
    int end = 0;  // 0 or 1

    bool operator==(const Dart& o) const { return edge == o.edge && end == o.end; }
    bool operator<(const Dart& o) const { return edge != o.edge ? edge < o.edge : end < o.end; }
    Dart opposite() const { return {edge, 1 - end}; }

    std::string str() const { return std::to_string(edge) + "." + std::to_string(end); }
};

struct EdgeData {
    VertexId ends[2] = {0, 0};
    long long weight = 0;  // epsilon

    bool is_loop() const { return ends[0] == ends[1]; }
    bool operator==(const EdgeData& o) const {
        return ends[0] == o.ends[0] && ends[1] == o.ends[1] && weight == o.weight;
    }
};

// Weighted planar multigraph with rotation system (vertex weights nu,
// edge weights epsilon, counterclockwise dart order per vertex).
struct ChainmailGraph {
    std::map<VertexId, long long> vertices;           // id -> nu
    std::map<EdgeId, EdgeData> edges;                 // id -> endpoints, epsilon
    std::map<VertexId, std::vector<Dart>> rotations;  // id -> ccw dart cycle

    bool operator==(const ChainmailGraph& o) const {
        return vertices == o.vertices && edges == o.edges && rotations == o.rotations;
    }

    VertexId vertex_of(const Dart& d) const { return edges.at(d.edge).ends[d.end]; }

    int degree(VertexId v) const {
        auto it = rotations.find(v);
        return it == rotations.end() ? 0 : static_cast<int>(it->second.size());
    }

    void add_vertex(VertexId v, long long nu) {
        vertices[v] = nu;
        rotations.emplace(v, std::vector<Dart>{});
    }

    // Appends the new darts at the end of each endpoint's rotation.
    void add_edge(EdgeId e, VertexId a, VertexId b, long long eps) {
        if (edges.count(e)) throw GraphError("add_edge: duplicate edge id " + std::to_string(e));
        edges[e] = EdgeData{{a, b}, eps};
        rotations[a].push_back({e, 0});
        rotations[b].push_back({e, 1});
    }

    void erase_edge(EdgeId e) {
        auto it = edges.find(e);
        if (it == edges.end()) throw GraphError("erase_edge: unknown edge " + std::to_string(e));
        for (int k = 0; k < 2; ++k) {
            auto& rot = rotations[it->second.ends[k]];
            for (auto rit = rot.begin(); rit != rot.end(); ++rit)
                if (*rit == Dart{e, k}) {
                    rot.erase(rit);
                    break;
                }
        }
        edges.erase(it);
    }

    EdgeId fresh_edge_id() const { return edges.empty() ? 1 : edges.rbegin()->first + 1; }
    VertexId fresh_vertex_id() const { return vertices.empty() ? 1 : vertices.rbegin()->first + 1; }
};

// ---------------------------------------------------------------------------
// Face tracing and validation

namespace detail {

// Successor of dart d in the rotation at its vertex.
inline Dart rotation_next(const ChainmailGraph& g, const Dart& d) {
    const auto& rot = g.rotations.at(g.vertex_of(d));
    for (size_t i = 0; i < rot.size(); ++i)
        if (rot[i] == d) return rot[(i + 1) % rot.size()];
    throw GraphError("rotation_next: dart " + d.str() + " missing from its rotation");
}

// Face permutation: follow the edge of d, then turn at the far vertex.
inline Dart face_next(const ChainmailGraph& g, const Dart& d) {
    return rotation_next(g, d.opposite());
}

}  // namespace detail

// Orbits of the face permutation, as dart cycles.
inline std::vector<std::vector<Dart>> trace_faces(const ChainmailGraph& g) {
    std::set<Dart> seen;
    std::vector<std::vector<Dart>> faces;
    for (const auto& [e, ed] : g.edges) {
        for (int k = 0; k < 2; ++k) {
            Dart start{e, k};
            if (seen.count(start)) continue;
            std::vector<Dart> face;
            Dart d = start;
            do {
                face.push_back(d);
                seen.insert(d);
                d = detail::face_next(g, d);
            } while (!(d == start));
            faces.push_back(std::move(face));
        }
    }
    return faces;
}

// Connected components as vertex sets, lowest-id vertex first.
inline std::vector<std::set<VertexId>> connected_components(const ChainmailGraph& g) {
    std::map<VertexId, VertexId> parent;
    for (const auto& [v, w] : g.vertices) parent[v] = v;
    auto find = [&](VertexId v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const auto& [e, ed] : g.edges) {
        VertexId a = find(ed.ends[0]), b = find(ed.ends[1]);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::map<VertexId, std::set<VertexId>> comps;
    for (const auto& [v, w] : g.vertices) comps[find(v)].insert(v);
    std::vector<std::set<VertexId>> out;
    for (auto& [root, vs] : comps) out.push_back(std::move(vs));
    return out;
}

struct ComponentReport {
    std::set<VertexId> vertices;
    int edge_count = 0;
    int face_count = 0;
    int euler_characteristic = 0;  // V - E + F
};

struct ValidationReport {
    bool valid = false;
    std::vector<ComponentReport> components;
    std::vector<std::string> errors;
};

// Checks dart invariants and that face tracing yields Euler characteristic 2
// per connected component (a sphere embedding).
inline ValidationReport validate(const ChainmailGraph& g) {
    ValidationReport rep;

    std::map<Dart, int> dart_count;
    for (const auto& [v, rot] : g.rotations) {
        if (!g.vertices.count(v)) {
            rep.errors.push_back("rotation at unknown vertex " + std::to_string(v));
            continue;
        }
        for (const Dart& d : rot) {
            auto eit = g.edges.find(d.edge);
            if (eit == g.edges.end() || (d.end != 0 && d.end != 1)) {
                rep.errors.push_back("vertex " + std::to_string(v) + ": malformed dart " + d.str());
                continue;
            }
            if (eit->second.ends[d.end] != v)
                rep.errors.push_back("vertex " + std::to_string(v) + ": dart " + d.str() +
                                     " belongs at vertex " + std::to_string(eit->second.ends[d.end]));
            ++dart_count[d];
        }
    }
    for (const auto& [e, ed] : g.edges) {
        for (int k = 0; k < 2; ++k) {
            if (!g.vertices.count(ed.ends[k]))
                rep.errors.push_back("edge " + std::to_string(e) + " references unknown vertex " +
                                     std::to_string(ed.ends[k]));
            int c = dart_count.count({e, k}) ? dart_count[{e, k}] : 0;
            if (c != 1)
                rep.errors.push_back("dart " + Dart{e, k}.str() + " appears " + std::to_string(c) +
                                     " times in rotations");
        }
    }
    if (!rep.errors.empty()) return rep;

    auto faces = trace_faces(g);
    auto comps = connected_components(g);
    rep.valid = true;
    for (const auto& comp : comps) {
        ComponentReport cr;
        cr.vertices = comp;
        for (const auto& [e, ed] : g.edges)
            if (comp.count(ed.ends[0])) ++cr.edge_count;
        if (cr.edge_count == 0) {
            cr.face_count = 1;  // an isolated vertex on its own sphere
        } else {
            for (const auto& f : faces)
                if (comp.count(g.vertex_of(f.front()))) ++cr.face_count;
        }
        cr.euler_characteristic =
            static_cast<int>(comp.size()) - cr.edge_count + cr.face_count;
        if (cr.euler_characteristic != 2) rep.valid = false;
        rep.components.push_back(std::move(cr));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Minors

enum class MinorKind { Delete, Contract };

// Delete removes e and its darts. Contract merges the endpoints of e into
// the lower of the two vertex ids with nu summed, splicing the rotations at
// the darts of e so the embedding stays spherical. Parallel edges become
// loops and are retained.
inline ChainmailGraph minor(const ChainmailGraph& g, EdgeId e, MinorKind kind) {
    auto it = g.edges.find(e);
    if (it == g.edges.end()) throw GraphError("minor: unknown edge " + std::to_string(e));
    ChainmailGraph out = g;
    if (kind == MinorKind::Delete) {
        out.erase_edge(e);
        return out;
    }
    if (it->second.is_loop()) throw GraphError("minor: cannot contract loop " + std::to_string(e));
    VertexId v1 = it->second.ends[0], v2 = it->second.ends[1];
    VertexId keep = std::min(v1, v2);
    // rotation of the merged vertex: at v1's dart of e, splice in v2's
    // rotation read cyclically starting after v2's dart of e
    VertexId a = v1, b = v2;  // splice b into a, at a's dart of e
    int ea = (g.edges.at(e).ends[0] == a) ? 0 : 1;
    const auto& rot_a = g.rotations.at(a);
    const auto& rot_b = g.rotations.at(b);
    size_t pa = 0, pb = 0;
    while (!(rot_a[pa] == Dart{e, ea})) ++pa;
    while (!(rot_b[pb] == Dart{e, 1 - ea})) ++pb;
    std::vector<Dart> merged;
    for (size_t i = 0; i < rot_a.size(); ++i) {
        if (i == pa) {
            for (size_t j = 1; j < rot_b.size(); ++j) merged.push_back(rot_b[(pb + j) % rot_b.size()]);
        } else {
            merged.push_back(rot_a[i]);
        }
    }
    out.rotations.erase(v1);
    out.rotations.erase(v2);
    out.vertices.erase(v1);
    out.vertices.erase(v2);
    out.add_vertex(keep, g.vertices.at(v1) + g.vertices.at(v2));
    out.rotations[keep] = std::move(merged);
    for (auto& [id, ed] : out.edges)
        for (int k = 0; k < 2; ++k)
            if (ed.ends[k] == v1 || ed.ends[k] == v2) ed.ends[k] = keep;
    out.erase_edge(e);
    return out;
}

// Contraction followed by erasing any loops it created.
inline ChainmailGraph contract_delooped(const ChainmailGraph& g, EdgeId e) {
    ChainmailGraph out = minor(g, e, MinorKind::Contract);
    std::vector<EdgeId> loops;
    for (const auto& [id, ed] : out.edges)
        if (ed.is_loop()) loops.push_back(id);
    for (EdgeId id : loops) out.erase_edge(id);
    return out;
}

// ---------------------------------------------------------------------------
// Moves preserving M_G

struct MoveKind {
    enum Tag { EraseZeroEdge, MergeParallel, EraseLoop, RemoveUnitLeaf } tag;
    EdgeId e1 = 0, e2 = 0;
    VertexId v = 0;

    static MoveKind erase_zero_edge(EdgeId e) { return {EraseZeroEdge, e, 0, 0}; }
    static MoveKind merge_parallel(EdgeId a, EdgeId b) { return {MergeParallel, a, b, 0}; }
    static MoveKind erase_loop(EdgeId e) { return {EraseLoop, e, 0, 0}; }
    static MoveKind remove_unit_leaf(VertexId v, EdgeId e) { return {RemoveUnitLeaf, e, 0, v}; }
};

inline ChainmailGraph apply_move(const ChainmailGraph& g, const MoveKind& m) {
    ChainmailGraph out = g;
    auto need_edge = [&](EdgeId e) -> const EdgeData& {
        auto it = g.edges.find(e);
        if (it == g.edges.end()) throw GraphError("apply_move: unknown edge " + std::to_string(e));
        return it->second;
    };
    switch (m.tag) {
        case MoveKind::EraseZeroEdge: {
            if (need_edge(m.e1).weight != 0)
                throw GraphError("EraseZeroEdge: edge weight is not 0");
            out.erase_edge(m.e1);
            return out;
        }
        case MoveKind::MergeParallel: {
            const EdgeData &a = need_edge(m.e1), &b = need_edge(m.e2);
            if (m.e1 == m.e2) throw GraphError("MergeParallel: edges must be distinct");
            bool same = (a.ends[0] == b.ends[0] && a.ends[1] == b.ends[1]) ||
                        (a.ends[0] == b.ends[1] && a.ends[1] == b.ends[0]);
            if (!same) throw GraphError("MergeParallel: edges do not share both endpoints");
            EdgeId keep = std::min(m.e1, m.e2), drop = std::max(m.e1, m.e2);
            out.edges[keep].weight = a.weight + b.weight;
            out.erase_edge(drop);
            return out;
        }
        case MoveKind::EraseLoop: {
            if (!need_edge(m.e1).is_loop()) throw GraphError("EraseLoop: edge is not a loop");
            out.erase_edge(m.e1);
            return out;
        }
        case MoveKind::RemoveUnitLeaf: {
            auto vit = g.vertices.find(m.v);
            if (vit == g.vertices.end())
                throw GraphError("RemoveUnitLeaf: unknown vertex " + std::to_string(m.v));
            if (vit->second != 0) throw GraphError("RemoveUnitLeaf: vertex weight is not 0");
            if (g.degree(m.v) != 1) throw GraphError("RemoveUnitLeaf: vertex degree is not 1");
            EdgeId e = g.rotations.at(m.v).front().edge;
            if (m.e1 != 0 && m.e1 != e)
                throw GraphError("RemoveUnitLeaf: edge " + std::to_string(m.e1) +
                                 " is not the leaf's edge");
            long long w = g.edges.at(e).weight;
            if (w != 1 && w != -1) throw GraphError("RemoveUnitLeaf: edge weight is not +-1");
            out.erase_edge(e);
            out.vertices.erase(m.v);
            out.rotations.erase(m.v);
            return out;
        }
    }
    throw GraphError("apply_move: unknown move");
}

// Greedy fixpoint of the four moves, deterministic order: zero edges, then
// parallel merges, then loops, then unit leaves, lowest ids first.
inline ChainmailGraph simplify(const ChainmailGraph& g) {
    ChainmailGraph cur = g;
    for (;;) {
        std::optional<MoveKind> mv;
        for (const auto& [e, ed] : cur.edges)
            if (ed.weight == 0) {
                mv = MoveKind::erase_zero_edge(e);
                break;
            }
        if (!mv) {
            for (auto it = cur.edges.begin(); it != cur.edges.end() && !mv; ++it) {
                if (it->second.is_loop()) continue;
                for (auto jt = std::next(it); jt != cur.edges.end(); ++jt) {
                    const EdgeData &a = it->second, &b = jt->second;
                    bool same = (a.ends[0] == b.ends[0] && a.ends[1] == b.ends[1]) ||
                                (a.ends[0] == b.ends[1] && a.ends[1] == b.ends[0]);
                    if (same) {
                        mv = MoveKind::merge_parallel(it->first, jt->first);
                        break;
                    }
                }
            }
        }
        if (!mv) {
            for (const auto& [e, ed] : cur.edges)
                if (ed.is_loop()) {
                    mv = MoveKind::erase_loop(e);
                    break;
                }
        }
        if (!mv) {
            for (const auto& [v, w] : cur.vertices) {
                if (w != 0 || cur.degree(v) != 1) continue;
                EdgeId e = cur.rotations.at(v).front().edge;
                long long ew = cur.edges.at(e).weight;
                if (ew == 1 || ew == -1) {
                    mv = MoveKind::remove_unit_leaf(v, e);
                    break;
                }
            }
        }
        if (!mv) return cur;
        cur = apply_move(cur, *mv);
    }
}

// Splits every edge of weight -k (k >= 2) into k parallel -1 edges inserted
// adjacently in the rotations (opposite orders at the two endpoints, so each
// pair bounds a bigon), and removes loops. Lambda is preserved entry-wise.
// Requires all edge weights < 0.
inline ChainmailGraph normalize(const ChainmailGraph& g) {
    for (const auto& [e, ed] : g.edges)
        if (ed.weight >= 0)
            throw GraphError("normalize: edge " + std::to_string(e) + " has weight >= 0");
    ChainmailGraph out = g;
    std::vector<EdgeId> loops;
    for (const auto& [e, ed] : out.edges)
        if (ed.is_loop()) loops.push_back(e);
    for (EdgeId e : loops) out.erase_edge(e);

    std::vector<EdgeId> heavy;
    for (const auto& [e, ed] : out.edges)
        if (ed.weight < -1) heavy.push_back(e);
    EdgeId next = out.fresh_edge_id();
    for (EdgeId e : heavy) {
        EdgeData ed = out.edges.at(e);
        long long k = -ed.weight;
        out.edges[e].weight = -1;
        std::vector<EdgeId> ids(1, e);
        for (long long i = 1; i < k; ++i) {
            EdgeId ne = next++;
            out.edges[ne] = EdgeData{{ed.ends[0], ed.ends[1]}, -1};
            ids.push_back(ne);
        }
        for (int end = 0; end < 2; ++end) {
            auto& rot = out.rotations[ed.ends[end]];
            std::vector<Dart> nr;
            for (const Dart& d : rot) {
                if (d == Dart{e, end}) {
                    if (end == 0)
                        for (size_t i = 0; i < ids.size(); ++i) nr.push_back({ids[i], 0});
                    else
                        for (size_t i = ids.size(); i-- > 0;) nr.push_back({ids[i], 1});
                } else {
                    nr.push_back(d);
                }
            }
            rot = std::move(nr);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Combinatorial predicates

struct PropertyReport {
    std::vector<std::set<VertexId>> components;
    std::set<EdgeId> bridges;
    std::set<VertexId> leaves;
    std::map<VertexId, int> degrees;  // loops count twice
    bool simplicial = false;
    bool triangle_free = false;
    bool min_degree_ge3 = false;
    bool bridge_free = false;
    bool sphere_embedding = false;
    bool asymmetry_candidate = false;
    std::vector<std::string> violations;
};

inline bool is_bridge(const ChainmailGraph& g, EdgeId e) {
    if (g.edges.at(e).is_loop()) return false;
    ChainmailGraph del = minor(g, e, MinorKind::Delete);
    return connected_components(del).size() > connected_components(g).size();
}

inline PropertyReport graph_properties(const ChainmailGraph& g) {
    PropertyReport rep;
    rep.components = connected_components(g);
    for (const auto& [v, w] : g.vertices) rep.degrees[v] = 0;
    for (const auto& [e, ed] : g.edges) {
        rep.degrees[ed.ends[0]] += 1;
        rep.degrees[ed.ends[1]] += 1;
        if (is_bridge(g, e)) rep.bridges.insert(e);
    }
    for (const auto& [v, d] : rep.degrees)
        if (d == 1) rep.leaves.insert(v);

    rep.simplicial = true;
    std::set<std::pair<VertexId, VertexId>> pairs;
    for (const auto& [e, ed] : g.edges) {
        if (ed.is_loop()) rep.simplicial = false;
        auto p = std::minmax(ed.ends[0], ed.ends[1]);
        if (!pairs.insert({p.first, p.second}).second) rep.simplicial = false;
    }
    rep.triangle_free = true;
    std::map<VertexId, std::set<VertexId>> adj;
    for (const auto& [e, ed] : g.edges)
        if (!ed.is_loop()) {
            adj[ed.ends[0]].insert(ed.ends[1]);
            adj[ed.ends[1]].insert(ed.ends[0]);
        }
    for (const auto& [a, na] : adj)
        for (VertexId b : na) {
            if (b <= a) continue;
            for (VertexId c : adj[b])
                if (c > b && na.count(c)) rep.triangle_free = false;
        }
    rep.min_degree_ge3 = true;
    bool has_degree2 = false;
    for (const auto& [v, d] : rep.degrees) {
        if (d < 3) rep.min_degree_ge3 = false;
        if (d == 2) has_degree2 = true;
    }
    rep.bridge_free = rep.bridges.empty();
    rep.sphere_embedding = validate(g).valid;

    if (!rep.simplicial) rep.violations.push_back("not simplicial");
    if (!rep.triangle_free) rep.violations.push_back("contains a triangle");
    if (has_degree2) rep.violations.push_back("has a degree-2 vertex");
    if (!rep.bridge_free) rep.violations.push_back("has a separating edge");
    if (!rep.sphere_embedding) rep.violations.push_back("not a sphere embedding");
    rep.asymmetry_candidate = rep.violations.empty();
    return rep;
}

// ---------------------------------------------------------------------------
// Acyclic orientations

// Total orientation of the non-loop edges: edge -> source vertex.
struct EdgeOrientation {
    std::map<EdgeId, VertexId> source;
};

namespace detail {

inline bool has_directed_cycle(const ChainmailGraph& g, const EdgeOrientation& o) {
    // Kahn peeling on the directed multigraph
    std::map<VertexId, int> indeg;
    for (const auto& [v, w] : g.vertices) indeg[v] = 0;
    std::multimap<VertexId, VertexId> out;
    for (const auto& [e, src] : o.source) {
        const EdgeData& ed = g.edges.at(e);
        VertexId dst = ed.ends[0] == src ? ed.ends[1] : ed.ends[0];
        out.insert({src, dst});
        ++indeg[dst];
    }
    std::vector<VertexId> queue;
    for (const auto& [v, d] : indeg)
        if (d == 0) queue.push_back(v);
    size_t removed = 0;
    while (!queue.empty()) {
        VertexId v = queue.back();
        queue.pop_back();
        ++removed;
        auto range = out.equal_range(v);
        for (auto it = range.first; it != range.second; ++it)
            if (--indeg[it->second] == 0) queue.push_back(it->second);
    }
    return removed != g.vertices.size();
}

}  // namespace detail

inline std::vector<EdgeOrientation> enumerate_acyclic_orientations(const ChainmailGraph& g,
                                                                   int cap = 20) {
    std::vector<EdgeId> eids;
    for (const auto& [e, ed] : g.edges) {
        if (ed.is_loop())
            throw GraphError("enumerate_acyclic_orientations: graph has a loop");
        eids.push_back(e);
    }
    if (static_cast<int>(eids.size()) > cap)
        throw GraphError("enumerate_acyclic_orientations: edge count exceeds cap");
    std::vector<EdgeOrientation> out;
    const uint64_t total = uint64_t(1) << eids.size();
    for (uint64_t mask = 0; mask < total; ++mask) {
        EdgeOrientation o;
        for (size_t i = 0; i < eids.size(); ++i) {
            const EdgeData& ed = g.edges.at(eids[i]);
            o.source[eids[i]] = ed.ends[(mask >> i) & 1];
        }
        if (!detail::has_directed_cycle(g, o)) out.push_back(std::move(o));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Weighted spanning trees (independent oracle for the matrix-tree checks)

namespace detail {

inline void spanning_tree_rec(const std::vector<std::pair<VertexId, VertexId>>& edges,
                              const std::vector<long long>& weights, size_t idx,
                              std::map<VertexId, VertexId>& parent, size_t joined, size_t nverts,
                              const Int& product, Int& total) {
    if (joined == nverts - 1) {
        total += product;
        return;
    }
    if (idx >= edges.size() || edges.size() - idx < (nverts - 1) - joined) return;
    auto find = [&](VertexId v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    VertexId a = find(edges[idx].first), b = find(edges[idx].second);
    if (a != b) {
        auto saved = parent;
        parent[std::max(a, b)] = std::min(a, b);
        Int w = weights[idx] >= 0 ? weights[idx] : -weights[idx];
        spanning_tree_rec(edges, weights, idx + 1, parent, joined + 1, nverts, product * w, total);
        parent = saved;
    }
    spanning_tree_rec(edges, weights, idx + 1, parent, joined, nverts, product, total);
}

}  // namespace detail

// Sum over spanning trees T of the product of |epsilon(e)| over e in T,
// by explicit enumeration. Requires a connected graph.
inline Int count_weighted_spanning_trees(const ChainmailGraph& g) {
    if (connected_components(g).size() != 1)
        throw GraphError("count_weighted_spanning_trees: graph is not connected");
    std::vector<std::pair<VertexId, VertexId>> edges;
    std::vector<long long> weights;
    for (const auto& [e, ed] : g.edges)
        if (!ed.is_loop()) {
            edges.push_back({ed.ends[0], ed.ends[1]});
            weights.push_back(ed.weight);
        }
    std::map<VertexId, VertexId> parent;
    for (const auto& [v, w] : g.vertices) parent[v] = v;
    Int total = 0;
    if (g.vertices.size() == 1) return 1;  // empty product over the empty tree
    detail::spanning_tree_rec(edges, weights, 0, parent, 0, g.vertices.size(), 1, total);
    return total;
}

// ---------------------------------------------------------------------------
// Planar embedding search

namespace detail {

// Gap after the dart at position p in the rotation of v (p = -1 for an
// empty rotation). Each gap lies on exactly one face.
struct Gap {
    VertexId v;
    int pos;
};

// Face id of each gap, from the current rotation system. Gaps at isolated
// vertices of the same component as nothing get face id -1 - component.
inline std::map<std::pair<VertexId, int>, int> gap_faces(const ChainmailGraph& g,
                                                         std::vector<std::vector<Dart>>& faces) {
    faces = trace_faces(g);
    std::map<Dart, int> orbit;
    for (size_t f = 0; f < faces.size(); ++f)
        for (const Dart& d : faces[f]) orbit[d] = static_cast<int>(f);
    std::map<std::pair<VertexId, int>, int> out;
    for (const auto& [v, rot] : g.rotations) {
        if (rot.empty()) {
            out[{v, -1}] = -1;  // its own sphere
            continue;
        }
        for (size_t p = 0; p < rot.size(); ++p) {
            // the gap after rot[p] is crossed by the face transition into
            // the rotation successor of rot[p]
            Dart succ = rot[(p + 1) % rot.size()];
            out[{v, static_cast<int>(p)}] = orbit.at(succ);
        }
    }
    return out;
}

inline void insert_dart(ChainmailGraph& g, VertexId v, int pos, const Dart& d) {
    auto& rot = g.rotations[v];
    rot.insert(rot.begin() + (pos + 1), d);
}

inline bool same_component(const ChainmailGraph& g, VertexId a, VertexId b) {
    for (const auto& comp : connected_components(g))
        if (comp.count(a)) return comp.count(b) > 0;
    return false;
}

// Backtracking insertion of the remaining edges into the rotation system.
// Complete for planar graphs: any planar embedding restricts to every edge
// prefix, so some choice sequence always extends. Exponential worst case;
// intended for the small graphs this artifact works with.
inline bool embed_rec(ChainmailGraph& g, const std::vector<std::pair<EdgeId, EdgeData>>& todo,
                      size_t idx) {
    if (idx == todo.size()) return true;
    const auto& [e, ed] = todo[idx];
    VertexId a = ed.ends[0], b = ed.ends[1];
    std::vector<std::vector<Dart>> faces;
    auto gf = gap_faces(g, faces);

    std::vector<Gap> gaps_a, gaps_b;
    for (const auto& [key, f] : gf) {
        if (key.first == a) gaps_a.push_back({key.first, key.second});
        if (key.first == b) gaps_b.push_back({key.first, key.second});
    }
    bool cross = !same_component(g, a, b) && a != b;
    for (const Gap& ga : gaps_a)
        for (const Gap& gb : gaps_b) {
            if (a == b && ga.pos > gb.pos) continue;  // loop: unordered gap pair
            if (!cross && gf.at({ga.v, ga.pos}) != gf.at({gb.v, gb.pos})) continue;
            ChainmailGraph saved = g;
            g.edges[e] = ed;
            if (a == b) {
                // both darts into the same vertex; insert higher position first
                insert_dart(g, b, gb.pos, {e, 1});
                insert_dart(g, a, ga.pos, {e, 0});
            } else {
                insert_dart(g, a, ga.pos, {e, 0});
                insert_dart(g, b, gb.pos, {e, 1});
            }
            if (embed_rec(g, todo, idx + 1)) return true;
            g = std::move(saved);
        }
    return false;
}

}  // namespace detail

// Computes a genus-0 rotation system for the given vertices and edges,
// ignoring any rotations already present. Throws on nonplanar input.
inline ChainmailGraph compute_embedding(const ChainmailGraph& g) {
    ChainmailGraph out;
    for (const auto& [v, w] : g.vertices) out.add_vertex(v, w);
    std::vector<std::pair<EdgeId, EdgeData>> todo(g.edges.begin(), g.edges.end());
    if (!detail::embed_rec(out, todo, 0))
        throw GraphError("compute_embedding: graph is not planar");
    return out;
}

}  // namespace chainmail
