#pragma once

// Planar diagrams of chainmail links L_G and medial links K_G: PD codes,
// diagrammatic invariants (lk, alternation, Seifert circles, Goeritz
// determinant) and SVG rendering.

#include "chainmail/exact.hpp"
#include "chainmail/graph.hpp"
#include "chainmail/surgery.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace chainmail {

enum class ComponentKind { VertexLoop, CrossingLoop, MedialCurve };

inline std::string component_kind_name(ComponentKind k) {
    switch (k) {
        case ComponentKind::VertexLoop: return "vertex-loop";
        case ComponentKind::CrossingLoop: return "crossing-loop";
        default: return "medial-curve";
    }
}

// One crossing: arc ids counterclockwise starting at the incoming under
// strand. Positive sign: (under-in, over-out, under-out, over-in); negative:
// (under-in, over-in, under-out, over-out).
struct PDCrossing {
    std::array<int, 4> arcs{};
    int sign = -1;
};

// Arcs are the diagram segments between consecutive crossing passages,
// numbered from 1 along each component in traversal order. A component that
// meets no crossing is a free loop holding one arc that appears in no
// crossing; every other arc appears in the crossing tuples exactly twice.
struct PDCode {
    std::vector<PDCrossing> crossings;
    std::vector<std::vector<int>> components;  // arc cycles in traversal order
    std::vector<ComponentKind> kinds;
    std::vector<std::string> names;
    std::vector<EdgeId> crossing_edges;  // originating graph edge per crossing

    // rendering source
    bool has_source = false;
    bool source_is_medial = false;
    ChainmailGraph source;

    int arc_count() const {
        int n = 0;
        for (const auto& c : components) n += static_cast<int>(c.size());
        return n;
    }

    void check_well_formed() const {
        if (components.size() != kinds.size() || components.size() != names.size())
            throw GraphError("PDCode: component metadata sizes disagree");
        std::map<int, int> uses;
        for (const auto& x : crossings) {
            if (x.sign != 1 && x.sign != -1) throw GraphError("PDCode: bad crossing sign");
            for (int a : x.arcs) ++uses[a];
        }
        std::set<int> seen;
        for (const auto& comp : components) {
            if (comp.empty()) throw GraphError("PDCode: empty component");
            for (int a : comp) {
                if (!seen.insert(a).second) throw GraphError("PDCode: arc in two components");
                int u = uses.count(a) ? uses.at(a) : 0;
                if (u != 2 && !(u == 0 && comp.size() == 1))
                    throw GraphError("PDCode: arc " + std::to_string(a) +
                                     " appears " + std::to_string(u) + " times");
            }
        }
        for (const auto& [a, u] : uses)
            if (!seen.count(a)) throw GraphError("PDCode: crossing arc not on any component");
    }
};

namespace detail {

struct Port {
    int crossing = -1;
    int slot = -1;
    bool operator<(const Port& o) const {
        return crossing != o.crossing ? crossing < o.crossing : slot < o.slot;
    }
    bool operator==(const Port& o) const { return crossing == o.crossing && slot == o.slot; }
};

// A 4-valent map under construction: per-crossing over-axis flags, directed
// arcs (exit port -> entry port) and an ordered component list.
struct DiagramMap {
    struct Component {
        bool free = false;  // no crossings: a round unknotted circle
        Port start;         // exit port where arc numbering begins
        ComponentKind kind = ComponentKind::VertexLoop;
        std::string name;
    };
    int crossing_count = 0;
    std::vector<bool> over_odd;  // slots {1,3} carry the over strand?
    std::vector<EdgeId> crossing_edges;
    std::map<Port, Port> next;  // exit port -> entry port
    std::vector<Component> comps;
};

// Walks every component, numbers arcs in traversal order, and derives the
// PD tuples and signs from the per-crossing over-axis and travel directions.
inline PDCode finish_diagram(const DiagramMap& dm) {
    PDCode pd;
    pd.crossings.resize(dm.crossing_count);
    pd.crossing_edges = dm.crossing_edges;
    std::vector<std::array<int, 4>> slot_arc(dm.crossing_count, {0, 0, 0, 0});
    std::vector<std::array<int, 4>> slot_dir(dm.crossing_count, {0, 0, 0, 0});  // +1 in, -1 out
    int next_arc = 0;
    for (const auto& comp : dm.comps) {
        pd.kinds.push_back(comp.kind);
        pd.names.push_back(comp.name);
        std::vector<int> cycle;
        if (comp.free) {
            cycle.push_back(++next_arc);
            pd.components.push_back(std::move(cycle));
            continue;
        }
        Port exit = comp.start;
        do {
            auto it = dm.next.find(exit);
            if (it == dm.next.end()) throw GraphError("diagram: dangling exit port");
            Port entry = it->second;
            int arc = ++next_arc;
            cycle.push_back(arc);
            if (slot_dir[exit.crossing][exit.slot] != 0 ||
                slot_dir[entry.crossing][entry.slot] != 0)
                throw GraphError("diagram: port visited twice");
            slot_arc[exit.crossing][exit.slot] = arc;
            slot_dir[exit.crossing][exit.slot] = -1;
            slot_arc[entry.crossing][entry.slot] = arc;
            slot_dir[entry.crossing][entry.slot] = +1;
            exit = Port{entry.crossing, (entry.slot + 2) % 4};
        } while (!(exit == comp.start));
        pd.components.push_back(std::move(cycle));
    }
    for (int x = 0; x < dm.crossing_count; ++x) {
        int ui = -1, oi = -1;
        for (int s = 0; s < 4; ++s) {
            if (slot_dir[x][s] == 0) throw GraphError("diagram: unvisited crossing port");
            if (slot_dir[x][s] != +1) continue;
            bool odd = s % 2 == 1;
            (odd == dm.over_odd[x] ? oi : ui) = s;
        }
        if (ui < 0 || oi < 0) throw GraphError("diagram: crossing lacks an incoming strand");
        for (int p = 0; p < 4; ++p) pd.crossings[x].arcs[p] = slot_arc[x][(ui + p) % 4];
        pd.crossings[x].sign = (oi == (ui + 1) % 4) ? -1 : +1;
    }
    pd.check_well_formed();
    return pd;
}

// Vertex 2-coloring minimizing the cycle rank of the equal-color edge set.
// Components of up to 20 vertices are solved exactly (first vertex pinned to
// color 0, lexicographically first optimum); larger ones get a proper forest
// coloring, which is optimal whenever the component is bipartite.
inline std::map<VertexId, int> seifert_coloring(const ChainmailGraph& g) {
    std::map<VertexId, std::vector<VertexId>> adj;
    for (const auto& [e, ed] : g.edges)
        if (ed.weight != 0 && !ed.is_loop()) {
            adj[ed.ends[0]].push_back(ed.ends[1]);
            adj[ed.ends[1]].push_back(ed.ends[0]);
        }
    std::map<VertexId, int> color;
    for (const auto& [root, w0] : g.vertices) {
        if (color.count(root)) continue;
        std::vector<VertexId> comp{root};
        std::map<VertexId, int> idx{{root, 0}};
        for (size_t h = 0; h < comp.size(); ++h) {
            auto it = adj.find(comp[h]);
            if (it == adj.end()) continue;
            for (VertexId y : it->second)
                if (!idx.count(y)) {
                    idx[y] = static_cast<int>(comp.size());
                    comp.push_back(y);
                }
        }
        // component edges as local index pairs; parallel edges share one
        // corridor, so they count once toward the cycle rank
        std::set<std::pair<int, int>> ces;
        for (const auto& [e, ed] : g.edges)
            if (ed.weight != 0 && !ed.is_loop() && idx.count(ed.ends[0]) &&
                idx.count(ed.ends[1])) {
                int a = idx.at(ed.ends[0]), b = idx.at(ed.ends[1]);
                ces.insert({std::min(a, b), std::max(a, b)});
            }
        std::vector<std::pair<int, int>> ce(ces.begin(), ces.end());
        int n = static_cast<int>(comp.size());
        if (n <= 20) {
            std::uint64_t best_mask = 0;
            int best_rank = -1;
            std::vector<int> uf(n);
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
                for (int i = 0; i < n; ++i) uf[i] = i;
                auto find = [&](int x) {
                    while (uf[x] != x) x = uf[x] = uf[uf[x]];
                    return x;
                };
                int rank = 0;
                for (const auto& [a, b] : ce) {
                    bool ca = a > 0 && ((mask >> (a - 1)) & 1);
                    bool cb = b > 0 && ((mask >> (b - 1)) & 1);
                    if (ca != cb) continue;
                    int ra = find(a), rb = find(b);
                    if (ra == rb) ++rank;
                    else uf[ra] = rb;
                }
                if (best_rank < 0 || rank < best_rank) {
                    best_rank = rank;
                    best_mask = mask;
                    if (rank == 0) break;
                }
            }
            for (int i = 0; i < n; ++i)
                color[comp[i]] = i > 0 && ((best_mask >> (i - 1)) & 1) ? 1 : 0;
        } else {
            color[root] = 0;
            for (size_t h = 0; h < comp.size(); ++h) {
                auto it = adj.find(comp[h]);
                if (it == adj.end()) continue;
                for (VertexId y : it->second)
                    if (!color.count(y)) color[y] = 1 - color.at(comp[h]);
            }
        }
    }
    return color;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Chainmail diagram L_G
//
// Each vertex is one counterclockwise round component. All edges joining the
// same vertex pair share one clasp tower: a ladder of 2*sum|epsilon| crossings
// that both strands traverse in the same ascending order, each edge owning a
// consecutive block of 2|epsilon| crossings. Crossing slots sit
// counterclockwise with the two incoming strands at slots {0, 1}: at even
// rungs the first endpoint enters slot 0 and the second slot 1, at odd rungs
// they swap, so along either strand the crossings alternate over/under.
// Negative-weight crossings put the odd-slot entrant on top (sign -1
// throughout the block), positive-weight crossings the even-slot entrant
// (sign +1), so each edge contributes exactly epsilon to the linking number
// of its endpoints.
//
// Where each strand starts within the tower is a cyclic offset. Offsets are
// chosen from a vertex 2-coloring: towers joining opposite colors give the
// two strands equal offsets (their Seifert smoothing then merges and
// re-splits the vertex circles, keeping one circle per vertex), towers
// joining equal colors differ by an odd shift, which costs two extra Seifert
// circles per independent cycle of such towers. The coloring minimizes that
// cycle rank, so whenever the equal-color towers can be kept acyclic the
// diagram realizes s = |V| Seifert circles; the offsets also phase every
// vertex circle consistently, which keeps sign-uniform diagrams alternating.

inline PDCode build_chainmail_pd(const ChainmailGraph& g) {
    ValidationReport rep = validate(g);
    if (!rep.valid) throw GraphError("build_chainmail_pd: " + rep.errors.front());

    std::map<VertexId, int> color = detail::seifert_coloring(g);

    // Group nonzero-weight edges into towers keyed by their vertex pair.
    // Tower ends (p, q) and crossing blocks follow the lowest member edge id.
    struct Tower {
        std::vector<EdgeId> members;  // ascending edge ids
        VertexId p = 0, q = 0;        // ends[0], ends[1] of the first member
        int base = 0;                 // first crossing id
        int k2 = 0;                   // total crossings = 2 * sum |epsilon|
        int r[2] = {0, 0};            // start offset of the p / q strand
    };
    std::map<std::pair<VertexId, VertexId>, Tower> towers;
    for (const auto& [e, ed] : g.edges) {
        if (ed.weight == 0) continue;
        auto key = std::minmax(ed.ends[0], ed.ends[1]);
        Tower& t = towers[{key.first, key.second}];
        if (t.members.empty()) {
            t.p = ed.ends[0];
            t.q = ed.ends[1];
        }
        t.members.push_back(e);
    }

    detail::DiagramMap dm;
    // allocate crossing blocks in order of each tower's first edge id
    std::map<EdgeId, Tower*> order;
    for (auto& [key, t] : towers) order[t.members.front()] = &t;
    for (auto& [first, tp] : order) {
        Tower& t = *tp;
        t.base = dm.crossing_count;
        bool wpos = g.edges.at(first).weight > 0;
        t.r[0] = (color.at(t.p) == 1) != wpos ? 1 : 0;
        t.r[1] = (color.at(t.q) == 0) != wpos ? 1 : 0;
        for (EdgeId e : t.members) {
            const EdgeData& ed = g.edges.at(e);
            long long k = ed.weight < 0 ? -ed.weight : ed.weight;
            for (long long i = 0; i < 2 * k; ++i) {
                dm.over_odd.push_back(ed.weight < 0);
                dm.crossing_edges.push_back(e);
                ++dm.crossing_count;
                ++t.k2;
            }
        }
    }
    for (const auto& [v, w] : g.vertices) {
        std::vector<std::pair<detail::Port, detail::Port>> events;  // (in, out)
        for (const Dart& d : g.rotations.at(v)) {
            const EdgeData& ed = g.edges.at(d.edge);
            if (ed.weight == 0) continue;
            auto key = std::minmax(ed.ends[0], ed.ends[1]);
            const Tower& t = towers.at({key.first, key.second});
            if (d.edge != t.members.front()) continue;  // shared tower, one pass
            int side = (ed.is_loop() ? d.end : (v == t.p ? 0 : 1));
            for (int j = 0; j < t.k2; ++j) {
                int idx = (j + t.r[side]) % t.k2;
                int in = (idx % 2 == 0) == (side == 0) ? 0 : 1;
                events.push_back({{t.base + idx, in}, {t.base + idx, (in + 2) % 4}});
            }
        }
        detail::DiagramMap::Component comp;
        comp.kind = ComponentKind::VertexLoop;
        comp.name = "v" + std::to_string(v);
        if (events.empty()) {
            comp.free = true;
        } else {
            for (size_t j = 0; j < events.size(); ++j)
                dm.next[events[j].second] = events[(j + 1) % events.size()].first;
            comp.start = events.back().second;  // first arc enters the first event
        }
        dm.comps.push_back(std::move(comp));
    }
    PDCode pd = detail::finish_diagram(dm);
    pd.has_source = true;
    pd.source = g;
    return pd;
}

// ---------------------------------------------------------------------------
// Medial diagram K_G
//
// Each edge of weight epsilon becomes a twist region of |epsilon| crossings
// stacked along the corridor, every crossing flanked by the two endpoint
// regions; the strands pass straight through on the diagonal axes. Crossing
// slots counterclockwise: (NE, NW, SW, SE) = (0, 1, 2, 3). Consecutive darts
// of a rotation are joined by corner strands around the vertex; zero-weight
// edges pass two parallel strands without crossing.

inline PDCode medial_link_pd(const ChainmailGraph& g) {
    ValidationReport rep = validate(g);
    if (!rep.valid) throw GraphError("medial_link_pd: " + rep.errors.front());
    if (connected_components(g).size() > 1)
        throw GraphError("medial_link_pd: graph is disconnected");

    // token = a strand end of a dart: (dart, side) with side 0 = left
    // (counterclockwise side seen from the vertex), 1 = right.
    struct Token {
        Dart d;
        int side = 0;
        bool operator<(const Token& o) const {
            if (!(d == o.d)) return d.edge != o.d.edge ? d.edge < o.d.edge : d.end < o.d.end;
            return side < o.side;
        }
        bool operator==(const Token& o) const { return d == o.d && side == o.side; }
    };

    detail::DiagramMap dm;
    std::map<EdgeId, int> base;
    std::map<Token, detail::Port> token_port;  // corridor attachment (weight != 0)
    std::map<Token, Token> token_wire;         // straight pass-through (weight == 0)
    for (const auto& [e, ed] : g.edges) {
        long long k = ed.weight < 0 ? -ed.weight : ed.weight;
        Token l0{{e, 0}, 0}, r0{{e, 0}, 1}, l1{{e, 1}, 0}, r1{{e, 1}, 1};
        if (k == 0) {
            token_wire[l0] = r1;
            token_wire[r1] = l0;
            token_wire[r0] = l1;
            token_wire[l1] = r0;
            continue;
        }
        base[e] = dm.crossing_count;
        for (long long i = 0; i < k; ++i) {
            dm.over_odd.push_back(ed.weight < 0);  // negative: NW-SE strand over
            dm.crossing_edges.push_back(e);
            ++dm.crossing_count;
        }
        int c1 = base.at(e), ck = c1 + static_cast<int>(k) - 1;
        token_port[l0] = {c1, 1};  // NW
        token_port[r1] = {c1, 0};  // NE
        token_port[r0] = {ck, 2};  // SW
        token_port[l1] = {ck, 3};  // SE
    }

    // corner strands: left(d) -- right(sigma(d)) around each vertex
    std::map<Token, Token> corner;
    for (const auto& [v, w] : g.vertices) {
        const auto& rot = g.rotations.at(v);
        for (size_t i = 0; i < rot.size(); ++i) {
            Token a{rot[i], 0}, b{rot[(i + 1) % rot.size()], 1};
            corner[a] = b;
            corner[b] = a;
        }
    }

    // undirected arcs between ports, walking corner strands through wires
    std::map<detail::Port, detail::Port> mate;
    std::set<Token> token_used;
    for (const auto& [tok, port] : token_port) {
        if (token_used.count(tok)) continue;
        Token t = tok;
        token_used.insert(t);
        while (true) {
            Token u = corner.at(t);
            token_used.insert(u);
            auto pit = token_port.find(u);
            if (pit != token_port.end()) {
                mate[port] = pit->second;
                mate[pit->second] = port;
                break;
            }
            t = token_wire.at(u);
            token_used.insert(t);
        }
    }
    // internal twist connections: c_i.SW -- c_{i+1}.NW, c_i.SE -- c_{i+1}.NE
    for (const auto& [e, b] : base) {
        const EdgeData& ed = g.edges.at(e);
        long long k = ed.weight < 0 ? -ed.weight : ed.weight;
        for (long long i = 0; i + 1 < k; ++i) {
            int c = b + static_cast<int>(i);
            mate[{c, 2}] = {c + 1, 1};
            mate[{c + 1, 1}] = {c, 2};
            mate[{c, 3}] = {c + 1, 0};
            mate[{c + 1, 0}] = {c, 3};
        }
    }

    // orient components: enter at the lowest unvisited port, pass straight
    std::set<detail::Port> entered;
    int comp_no = 0;
    for (int x = 0; x < dm.crossing_count; ++x) {
        for (int s = 0; s < 4; ++s) {
            detail::Port start{x, s};
            if (entered.count(start)) continue;
            detail::DiagramMap::Component comp;
            comp.kind = ComponentKind::MedialCurve;
            comp.name = "k" + std::to_string(++comp_no);
            detail::Port entry = start;
            detail::Port first_exit{-1, -1};
            do {
                entered.insert(entry);
                detail::Port exit{entry.crossing, (entry.slot + 2) % 4};
                entered.insert(exit);
                if (first_exit.crossing < 0) first_exit = exit;
                entry = mate.at(exit);
                dm.next[exit] = entry;
            } while (!(entry == start));
            comp.start = first_exit;
            dm.comps.push_back(std::move(comp));
        }
    }
    // free loops: corner/wire cycles that never touch a crossing
    for (const auto& [tok, partner] : corner) {
        if (token_used.count(tok)) continue;
        Token t = tok;
        while (!token_used.count(t)) {
            token_used.insert(t);
            Token u = corner.at(t);
            token_used.insert(u);
            t = token_wire.at(u);
        }
        detail::DiagramMap::Component comp;
        comp.free = true;
        comp.kind = ComponentKind::MedialCurve;
        comp.name = "k" + std::to_string(++comp_no);
        dm.comps.push_back(std::move(comp));
    }
    if (dm.comps.empty()) {  // single isolated vertex
        detail::DiagramMap::Component comp;
        comp.free = true;
        comp.kind = ComponentKind::MedialCurve;
        comp.name = "k1";
        dm.comps.push_back(std::move(comp));
    }
    PDCode pd = detail::finish_diagram(dm);
    pd.has_source = true;
    pd.source_is_medial = true;
    pd.source = g;
    return pd;
}

// ---------------------------------------------------------------------------
// Invariants

struct DiagramInvariants {
    int crossing_count = 0;
    long long writhe = 0;
    IntMatrix lk;  // symmetric, zero diagonal, indexed by component order
    bool alternating = false;
    int seifert_circles = 0;
    int seifert_euler = 0;  // circles - crossings
    Int goeritz_det = 0;    // meaningful only when goeritz_valid
    bool goeritz_valid = false;
};

namespace detail {

// incoming slots of a tuple: under at 0, over at 1 (negative) or 3 (positive)
inline int over_in_pos(const PDCrossing& x) { return x.sign < 0 ? 1 : 3; }

struct ArcUnionFind {
    std::map<int, int> parent;
    int find(int a) {
        parent.emplace(a, a);
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void join(int a, int b) { parent[find(a)] = find(b); }
};

// faces of the diagram seen as a planar 4-valent map whose rotation at each
// crossing is the tuple order; darts are (crossing, tuple position)
struct FaceStructure {
    std::map<Port, int> face_of_dart;
    int face_count = 0;
};

inline FaceStructure trace_pd_faces(const PDCode& pd) {
    std::map<int, std::vector<Port>> ends;
    for (int x = 0; x < static_cast<int>(pd.crossings.size()); ++x)
        for (int p = 0; p < 4; ++p) ends[pd.crossings[x].arcs[p]].push_back({x, p});
    auto other_end = [&](Port d) {
        const auto& v = ends.at(pd.crossings[d.crossing].arcs[d.slot]);
        if (v.size() != 2) throw GraphError("diagram faces: arc without two ends");
        return v[0] == d ? v[1] : v[0];
    };
    FaceStructure fs;
    for (int x = 0; x < static_cast<int>(pd.crossings.size()); ++x) {
        for (int p = 0; p < 4; ++p) {
            Port d{x, p};
            if (fs.face_of_dart.count(d)) continue;
            int f = fs.face_count++;
            while (!fs.face_of_dart.count(d)) {
                fs.face_of_dart[d] = f;
                Port o = other_end(d);
                d = {o.crossing, (o.slot + 1) % 4};
            }
        }
    }
    return fs;
}

}  // namespace detail

// |det| of a Goeritz matrix of the checkerboard coloring: the shaded color is
// the one containing the region at dart (crossing 0, position 0), and the
// last-indexed shaded region's row and column are deleted. Split diagrams
// have determinant 0; a crossing-free unknot has determinant 1.
inline Int goeritz_determinant(const PDCode& pd) {
    const int n = static_cast<int>(pd.crossings.size());
    if (n == 0) return pd.components.size() == 1 ? 1 : 0;
    bool free_loop = false;
    for (const auto& comp : pd.components) free_loop = free_loop || comp.size() == 1;
    detail::ArcUnionFind conn;  // connectivity of the 4-valent map via tuples
    for (const auto& x : pd.crossings)
        for (int p = 1; p < 4; ++p) conn.join(x.arcs[0], x.arcs[p]);
    std::set<int> pieces;
    for (const auto& x : pd.crossings) pieces.insert(conn.find(x.arcs[0]));
    if (free_loop || pieces.size() > 1) return 0;

    detail::FaceStructure fs = detail::trace_pd_faces(pd);
    // 2-color faces: the two ends of each arc lie in the faces on its two sides
    std::map<int, std::vector<detail::Port>> ends;
    for (int x = 0; x < n; ++x)
        for (int p = 0; p < 4; ++p) ends[pd.crossings[x].arcs[p]].push_back({x, p});
    std::vector<int> color(fs.face_count, -1);
    color[fs.face_of_dart.at({0, 0})] = 1;  // shaded basepoint region
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [a, v] : ends) {
            int f1 = fs.face_of_dart.at(v[0]), f2 = fs.face_of_dart.at(v[1]);
            if (color[f1] >= 0 && color[f2] < 0) color[f2] = 1 - color[f1], changed = true;
            if (color[f2] >= 0 && color[f1] < 0) color[f1] = 1 - color[f2], changed = true;
            if (color[f1] >= 0 && color[f1] == color[f2] && f1 != f2)
                throw GraphError("goeritz: diagram faces are not checkerboard-colorable");
        }
    }
    std::map<int, int> shaded_index;
    for (int f = 0; f < fs.face_count; ++f)
        if (color[f] == 1) shaded_index.emplace(f, static_cast<int>(shaded_index.size()));
    const int m = static_cast<int>(shaded_index.size());
    IntMatrix gz(m, m);
    for (int x = 0; x < n; ++x) {
        // quadrant q_p lies between tuple positions p and p+1
        auto quad = [&](int p) { return fs.face_of_dart.at({x, (p + 1) % 4}); };
        int pair0 = color[quad(0)] == 1 ? 0 : 1;  // shaded opposite pair {p, p+2}
        if (color[quad(pair0)] != 1 || color[quad(pair0 + 2)] != 1)
            throw GraphError("goeritz: shaded quadrants are not opposite");
        int eta = pair0 == 1 ? +1 : -1;
        int fi = quad(pair0), fj = quad(pair0 + 2);
        if (fi == fj) continue;
        int i = shaded_index.at(fi), j = shaded_index.at(fj);
        gz.at(i, j) -= eta;
        gz.at(j, i) -= eta;
    }
    for (int i = 0; i < m; ++i) {
        Int sum = 0;
        for (int j = 0; j < m; ++j)
            if (j != i) sum += gz.at(i, j);
        gz.at(i, i) = -sum;
    }
    Int det = determinant(gz.submatrix(0, 0, m - 1, m - 1));
    return det < 0 ? -det : det;
}

inline DiagramInvariants diagram_invariants(const PDCode& pd) {
    pd.check_well_formed();
    DiagramInvariants inv;
    inv.crossing_count = static_cast<int>(pd.crossings.size());
    const int nc = static_cast<int>(pd.components.size());
    std::map<int, int> comp_of;
    for (int i = 0; i < nc; ++i)
        for (int a : pd.components[i]) comp_of[a] = i;

    inv.lk = IntMatrix(nc, nc);
    inv.lk.row_labels = pd.names;
    inv.lk.col_labels = pd.names;
    IntMatrix twice(nc, nc);
    for (const auto& x : pd.crossings) {
        inv.writhe += x.sign;
        int cu = comp_of.at(x.arcs[0]);
        int co = comp_of.at(x.arcs[detail::over_in_pos(x)]);
        if (cu != co) {
            twice.at(cu, co) += x.sign;
            twice.at(co, cu) += x.sign;
        }
    }
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j) {
            if (twice.at(i, j) % 2 != 0)
                throw GraphError("diagram_invariants: odd inter-component crossing sum");
            inv.lk.at(i, j) = twice.at(i, j) / 2;
        }

    // head crossing of each arc: the unique crossing it enters, with a flag
    // for whether it enters as the under strand
    std::map<int, bool> head_under;
    for (const auto& x : pd.crossings) {
        head_under[x.arcs[0]] = true;
        head_under[x.arcs[detail::over_in_pos(x)]] = false;
    }
    inv.alternating = true;
    for (const auto& comp : pd.components) {
        if (comp.size() == 1 && !head_under.count(comp[0])) continue;  // free loop
        for (size_t j = 0; j < comp.size(); ++j) {
            bool cur = head_under.at(comp[j]);
            bool nxt = head_under.at(comp[(j + 1) % comp.size()]);
            if (cur == nxt) inv.alternating = false;
        }
    }

    detail::ArcUnionFind seifert;
    std::set<int> arcs;
    for (const auto& comp : pd.components)
        for (int a : comp) arcs.insert(a), seifert.find(a);
    for (const auto& x : pd.crossings) {
        if (x.sign > 0) {
            seifert.join(x.arcs[0], x.arcs[1]);
            seifert.join(x.arcs[3], x.arcs[2]);
        } else {
            seifert.join(x.arcs[0], x.arcs[3]);
            seifert.join(x.arcs[1], x.arcs[2]);
        }
    }
    std::set<int> circles;
    for (int a : arcs) circles.insert(seifert.find(a));
    inv.seifert_circles = static_cast<int>(circles.size());
    inv.seifert_euler = inv.seifert_circles - inv.crossing_count;
    try {
        inv.goeritz_det = goeritz_determinant(pd);
        inv.goeritz_valid = true;
    } catch (const GraphError&) {  // not checkerboard-colorable
        inv.goeritz_det = 0;
        inv.goeritz_valid = false;
    }
    return inv;
}

// ---------------------------------------------------------------------------
// PD text format: one `X[a,b,c,d]+` / `X[a,b,c,d]-` line per crossing, then a
// component manifest `L<i> <kind> <name>: a1 a2 ...`.

inline std::string pd_to_text(const PDCode& pd) {
    std::ostringstream out;
    for (const auto& x : pd.crossings)
        out << "X[" << x.arcs[0] << ',' << x.arcs[1] << ',' << x.arcs[2] << ',' << x.arcs[3]
            << (x.sign > 0 ? "]+" : "]-") << '\n';
    for (size_t i = 0; i < pd.components.size(); ++i) {
        out << 'L' << (i + 1) << ' ' << component_kind_name(pd.kinds[i]) << ' ' << pd.names[i]
            << ':';
        for (int a : pd.components[i]) out << ' ' << a;
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// SVG rendering

struct RenderOptions {
    double width = 640;
    double height = 480;
    std::map<EdgeId, std::string> edge_labels;  // e.g. augmentation coefficients
};

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    std::string s(buf);
    if (s == "-0.00") s = "0.00";
    return s;
}

struct Vec {
    double x = 0, y = 0;
};

// quadratic bezier restricted to [t0, t1] via de Casteljau
inline std::array<Vec, 3> sub_bezier(Vec p0, Vec p1, Vec p2, double t0, double t1) {
    auto lerp = [](Vec a, Vec b, double t) { return Vec{a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t}; };
    auto point = [&](double t) { return lerp(lerp(p0, p1, t), lerp(p1, p2, t), t); };
    Vec q0 = point(t0), q2 = point(t1);
    Vec q1 = lerp(lerp(p0, p1, t0), lerp(p1, p2, t0), t1);
    return {q0, q1, q2};
}

}  // namespace detail

// Deterministic standalone SVG: crossing positions from a barycentric (Tutte)
// layout pinned on the largest face, arcs as quadratic beziers, the under
// strand interrupted by a gap at every crossing, one path per component.
inline std::string render_svg(const PDCode& pd, const RenderOptions& opt = {}) {
    if (!pd.has_source) throw GraphError("render_svg: PD code has no stored embedding source");
    pd.check_well_formed();
    const int n = static_cast<int>(pd.crossings.size());

    // arc endpoints
    std::map<int, std::vector<detail::Port>> ends;
    for (int x = 0; x < n; ++x)
        for (int p = 0; p < 4; ++p) ends[pd.crossings[x].arcs[p]].push_back({x, p});

    // crossing layout
    std::vector<detail::Vec> pos(n);
    bool placed = false;
    if (n >= 3) {
        detail::FaceStructure fs = detail::trace_pd_faces(pd);
        std::vector<std::vector<int>> face_darts(fs.face_count);
        for (const auto& [d, f] : fs.face_of_dart) face_darts[f].push_back(d.crossing);
        int outer = 0;
        for (int f = 1; f < fs.face_count; ++f)
            if (face_darts[f].size() > face_darts[outer].size()) outer = f;
        std::vector<int> boundary;
        std::set<int> on_boundary;
        for (int x : face_darts[outer])
            if (on_boundary.insert(x).second) boundary.push_back(x);
        if (boundary.size() >= 3) {
            std::vector<bool> pinned(n, false);
            for (size_t i = 0; i < boundary.size(); ++i) {
                double a = 2 * 3.14159265358979 * static_cast<double>(i) /
                           static_cast<double>(boundary.size());
                pos[boundary[i]] = {std::cos(a), std::sin(a)};
                pinned[boundary[i]] = true;
            }
            // neighbor lists via arcs
            std::vector<std::vector<int>> nbr(n);
            for (const auto& [a, v] : ends)
                if (v.size() == 2) {
                    nbr[v[0].crossing].push_back(v[1].crossing);
                    nbr[v[1].crossing].push_back(v[0].crossing);
                }
            for (int iter = 0; iter < 300; ++iter) {
                for (int x = 0; x < n; ++x) {
                    if (pinned[x] || nbr[x].empty()) continue;
                    detail::Vec s;
                    for (int y : nbr[x]) s.x += pos[y].x, s.y += pos[y].y;
                    pos[x] = {s.x / nbr[x].size(), s.y / nbr[x].size()};
                }
            }
            placed = true;
        }
    }
    if (!placed) {
        for (int x = 0; x < n; ++x) {
            double a = 2 * 3.14159265358979 * x / std::max(1, n);
            pos[x] = {std::cos(a), std::sin(a)};
        }
    }
    // map to canvas
    double margin = 40;
    double sx = (opt.width - 2 * margin) / 2.2, sy = (opt.height - 2 * margin) / 2.2;
    auto canvas = [&](detail::Vec v) {
        return detail::Vec{opt.width / 2 + v.x * sx, opt.height / 2 - v.y * sy};
    };

    // bezier control per arc: midpoint pushed sideways; parallel arcs and
    // self-arcs bowed apart deterministically
    std::map<std::pair<int, int>, int> pair_seen;
    std::map<int, std::array<detail::Vec, 3>> curve;
    for (const auto& [a, v] : ends) {
        if (v.size() != 2) continue;
        detail::Vec p0 = canvas(pos[v[0].crossing]), p2 = canvas(pos[v[1].crossing]);
        auto key = std::minmax(v[0].crossing, v[1].crossing);
        int idx = pair_seen[{key.first, key.second}]++;
        detail::Vec mid{(p0.x + p2.x) / 2, (p0.y + p2.y) / 2};
        detail::Vec dir{p2.x - p0.x, p2.y - p0.y};
        double len = std::sqrt(dir.x * dir.x + dir.y * dir.y);
        detail::Vec normal = len > 1e-9 ? detail::Vec{-dir.y / len, dir.x / len}
                                        : detail::Vec{1, 0};
        double off = (idx % 2 == 0 ? 1 : -1) * (18.0 + 14.0 * (idx / 2));
        if (v[0].crossing == v[1].crossing) off = 46.0 + 22.0 * idx;
        curve[a] = {p0, detail::Vec{mid.x + normal.x * off, mid.y + normal.y * off}, p2};
    }

    // under passages: trim the incoming arc's end and the outgoing arc's start
    std::map<int, bool> head_under, tail_trim;
    for (const auto& x : pd.crossings) {
        head_under[x.arcs[0]] = true;
        head_under[x.arcs[detail::over_in_pos(x)]] = false;
        tail_trim[x.arcs[2]] = true;                                   // under-out
        tail_trim[x.arcs[x.sign > 0 ? 1 : 3]] = false;                 // over-out
    }

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
        << detail::fmt(opt.width) << "\" height=\"" << detail::fmt(opt.height)
        << "\" viewBox=\"0 0 " << detail::fmt(opt.width) << ' ' << detail::fmt(opt.height)
        << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    int free_count = 0;
    for (size_t ci = 0; ci < pd.components.size(); ++ci) {
        const auto& comp = pd.components[ci];
        const char* color = palette[ci % 8];
        std::ostringstream d;
        if (comp.size() == 1 && !ends.count(comp[0])) {
            // free loop: a round circle beside the diagram
            detail::Vec c{margin + 24.0 + 56.0 * free_count++, margin + 24.0};
            d << "M " << detail::fmt(c.x - 20) << ' ' << detail::fmt(c.y) << " a 20 20 0 1 0 40 0"
              << " a 20 20 0 1 0 -40 0 Z";
        } else {
            bool gaps = false;
            for (int a : comp) gaps = gaps || head_under.at(a) || tail_trim.at(a);
            bool pen_down = false;
            for (size_t j = 0; j < comp.size(); ++j) {
                int a = comp[j];
                double t0 = tail_trim.at(a) ? 0.18 : 0.0;
                double t1 = head_under.at(a) ? 0.82 : 1.0;
                auto seg = detail::sub_bezier(curve.at(a)[0], curve.at(a)[1], curve.at(a)[2],
                                              t0, t1);
                if (!pen_down) {
                    d << "M " << detail::fmt(seg[0].x) << ' ' << detail::fmt(seg[0].y) << ' ';
                    pen_down = true;
                }
                d << "Q " << detail::fmt(seg[1].x) << ' ' << detail::fmt(seg[1].y) << ' '
                  << detail::fmt(seg[2].x) << ' ' << detail::fmt(seg[2].y) << ' ';
                if (head_under.at(a)) pen_down = false;
            }
            if (!gaps) d << "Z";
        }
        svg << "<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2.5\" d=\""
            << d.str() << "\"/>\n";
    }
    for (const auto& [e, label] : opt.edge_labels) {
        detail::Vec s;
        int count = 0;
        for (int x = 0; x < n; ++x)
            if (x < static_cast<int>(pd.crossing_edges.size()) && pd.crossing_edges[x] == e) {
                detail::Vec p = canvas(pos[x]);
                s.x += p.x;
                s.y += p.y;
                ++count;
            }
        if (count == 0) continue;
        svg << "<text x=\"" << detail::fmt(s.x / count) << "\" y=\""
            << detail::fmt(s.y / count - 10) << "\" font-size=\"13\" fill=\"#333\">" << label
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace chainmail
