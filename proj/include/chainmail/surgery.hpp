#pragma once

// Framing/linking matrices of chainmail and augmented chainmail links,
// first homology of the surgered manifold, deletion-contraction and
// sign-lemma determinant checks.

#include "chainmail/exact.hpp"
#include "chainmail/graph.hpp"

#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace chainmail {

// Integer -c with c >= 1, rational -1/n with n >= 1, or infinity.
struct CrossingCoefficient {
    enum Kind { Integer, Rational, Infinity } kind = Integer;
    long long c = 1;  // Integer: value -c; Rational: value -1/c

    static CrossingCoefficient integer(long long c) {
        if (c < 1) throw GraphError("CrossingCoefficient: integer coefficient must be -c, c >= 1");
        return {Integer, c};
    }
    static CrossingCoefficient rational(long long n) {
        if (n < 1) throw GraphError("CrossingCoefficient: rational coefficient must be -1/n, n >= 1");
        return {Rational, n};
    }
    static CrossingCoefficient infinity() { return {Infinity, 0}; }

    bool operator==(const CrossingCoefficient& o) const { return kind == o.kind && c == o.c; }

    std::string str() const {
        switch (kind) {
            case Integer: return "-" + std::to_string(c);
            case Rational: return "-1/" + std::to_string(c);
            default: return "inf";
        }
    }
};

// Simplicial all-(-1) chainmail graph with crossing loops on a subset of edges.
struct AugmentedGraph {
    ChainmailGraph base;
    std::map<EdgeId, CrossingCoefficient> coefficients;

    bool operator==(const AugmentedGraph& o) const {
        return base == o.base && coefficients == o.coefficients;
    }

    void check_well_formed() const {
        for (const auto& [e, ed] : base.edges) {
            if (ed.weight != -1)
                throw GraphError("AugmentedGraph: base edge " + std::to_string(e) +
                                 " has weight != -1");
        }
        PropertyReport rep;
        std::set<std::pair<VertexId, VertexId>> pairs;
        for (const auto& [e, ed] : base.edges) {
            if (ed.is_loop()) throw GraphError("AugmentedGraph: base has a loop");
            auto p = std::minmax(ed.ends[0], ed.ends[1]);
            if (!pairs.insert({p.first, p.second}).second)
                throw GraphError("AugmentedGraph: base has a multiedge");
        }
        for (const auto& [e, coeff] : coefficients)
            if (!base.edges.count(e))
                throw GraphError("AugmentedGraph: coefficient on unknown edge " + std::to_string(e));
    }

    bool all_integer_coefficients() const {
        for (const auto& [e, c] : coefficients)
            if (c.kind != CrossingCoefficient::Integer) return false;
        return true;
    }
};

// ---------------------------------------------------------------------------
// Linking matrix

struct LinkingMatrix {
    IntMatrix matrix;                 // symmetric, indexed by vertex order
    std::vector<VertexId> vertices;  // row/column i <-> vertices[i], ascending
};

// Lambda(G): off-diagonal w_ij = sum of epsilon over edges joining v_i, v_j,
// diagonal w_ii = nu(v_i) - sum_{k != i} w_ik. Loops contribute nothing.
inline LinkingMatrix linking_matrix(const ChainmailGraph& g) {
    LinkingMatrix out;
    std::map<VertexId, int> index;
    for (const auto& [v, w] : g.vertices) {
        index[v] = static_cast<int>(out.vertices.size());
        out.vertices.push_back(v);
    }
    const int n = static_cast<int>(out.vertices.size());
    out.matrix = IntMatrix(n, n);
    for (const auto& [e, ed] : g.edges) {
        if (ed.is_loop()) continue;
        int i = index.at(ed.ends[0]), j = index.at(ed.ends[1]);
        out.matrix.at(i, j) += ed.weight;
        out.matrix.at(j, i) += ed.weight;
    }
    for (int i = 0; i < n; ++i) {
        Int offsum = 0;
        for (int j = 0; j < n; ++j)
            if (j != i) offsum += out.matrix.at(i, j);
        out.matrix.at(i, i) = Int(g.vertices.at(out.vertices[i])) - offsum;
    }
    for (int i = 0; i < n; ++i) out.matrix.row_labels.push_back(std::to_string(out.vertices[i]));
    out.matrix.col_labels = out.matrix.row_labels;
    return out;
}

// H1(M_G) = coker Lambda(G).
inline AbelianGroup first_homology(const ChainmailGraph& g) {
    return cokernel(linking_matrix(g).matrix);
}

// ---------------------------------------------------------------------------
// Deletion-contraction determinant identity

struct DCReport {
    Int det_graph;
    Int det_deleted;
    Int det_contracted;
    bool holds = false;
};

// det Lambda(G) = det Lambda(G-e) + det Lambda(G/e), for epsilon(e) = -1,
// e not a loop; loops arising in G/e are deleted before forming Lambda.
inline DCReport dc_check(const ChainmailGraph& g, EdgeId e) {
    auto it = g.edges.find(e);
    if (it == g.edges.end()) throw GraphError("dc_check: unknown edge " + std::to_string(e));
    if (it->second.is_loop()) throw GraphError("dc_check: edge is a loop");
    if (it->second.weight != -1) throw GraphError("dc_check: edge weight is not -1");
    DCReport rep;
    rep.det_graph = determinant(linking_matrix(g).matrix);
    rep.det_deleted = determinant(linking_matrix(minor(g, e, MinorKind::Delete)).matrix);
    rep.det_contracted = determinant(linking_matrix(contract_delooped(g, e)).matrix);
    rep.holds = (rep.det_graph == rep.det_deleted + rep.det_contracted);
    return rep;
}

// ---------------------------------------------------------------------------
// Augmented matrix

struct AugmentedMatrix {
    IntMatrix matrix;                     // crossing loop rows first, then vertices
    std::vector<EdgeId> crossing_loops;  // ascending edge ids
    std::vector<VertexId> vertices;      // ascending vertex ids
};

// Block matrix of the partially augmented link: per crossing loop a row with
// diagonal -c, +1 against the smaller-id endpoint and -1 against the larger;
// vertex block Lambda(G - A). Requires integer coefficients.
inline AugmentedMatrix augmented_matrix(const AugmentedGraph& ag) {
    ag.check_well_formed();
    for (const auto& [e, c] : ag.coefficients)
        if (c.kind != CrossingCoefficient::Integer)
            throw GraphError("augmented_matrix: non-integer coefficient on edge " +
                             std::to_string(e) + " (use rational_surgery_matrix)");

    ChainmailGraph stripped = ag.base;
    AugmentedMatrix out;
    for (const auto& [e, c] : ag.coefficients) {
        out.crossing_loops.push_back(e);
        stripped.erase_edge(e);
    }
    LinkingMatrix lam = linking_matrix(stripped);
    out.vertices = lam.vertices;
    const int m = static_cast<int>(out.crossing_loops.size());
    const int n = static_cast<int>(out.vertices.size());
    out.matrix = IntMatrix(m + n, m + n);
    std::map<VertexId, int> vindex;
    for (int i = 0; i < n; ++i) vindex[out.vertices[i]] = i;
    for (int i = 0; i < m; ++i) {
        EdgeId e = out.crossing_loops[i];
        out.matrix.at(i, i) = -Int(ag.coefficients.at(e).c);
        const EdgeData& ed = ag.base.edges.at(e);
        VertexId lo = std::min(ed.ends[0], ed.ends[1]), hi = std::max(ed.ends[0], ed.ends[1]);
        out.matrix.at(i, m + vindex.at(lo)) = 1;
        out.matrix.at(m + vindex.at(lo), i) = 1;
        out.matrix.at(i, m + vindex.at(hi)) = -1;
        out.matrix.at(m + vindex.at(hi), i) = -1;
        out.matrix.row_labels.push_back("c" + std::to_string(e));
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.matrix.at(m + i, m + j) = lam.matrix.at(i, j);
    for (int i = 0; i < n; ++i) out.matrix.row_labels.push_back(std::to_string(out.vertices[i]));
    out.matrix.col_labels = out.matrix.row_labels;
    return out;
}

// ---------------------------------------------------------------------------
// Rational surgery presentation

// p/q in lowest terms with q >= 0; infinity is p=1, q=0.
struct SurgeryCoefficient {
    Int p = 1;
    Int q = 0;

    static SurgeryCoefficient make(Int p, Int q) {
        if (q < 0) {
            p = -p;
            q = -q;
        }
        Int g = gcd(abs(p), q);
        if (g > 1) {
            p /= g;
            q /= g;
        }
        if (q == 0) p = 1;
        return {p, q};
    }
    static SurgeryCoefficient infinity() { return {1, 0}; }
    bool is_infinity() const { return q == 0; }
};

struct SurgeryComponent {
    SurgeryCoefficient coefficient;
    std::vector<Int> lk;  // linking numbers against all components (self entry ignored)
};

// Presentation matrix for H1 of the rational surgery: M_ii = p_i,
// M_ij = q_i * lk(L_i, L_j). No infinity coefficients allowed.
inline IntMatrix rational_surgery_matrix(const std::vector<SurgeryComponent>& components) {
    const int n = static_cast<int>(components.size());
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        if (components[i].coefficient.is_infinity())
            throw GraphError("rational_surgery_matrix: infinity coefficient (erase the component first)");
        if (static_cast<int>(components[i].lk.size()) != n)
            throw GraphError("rational_surgery_matrix: linking row has wrong length");
        m.at(i, i) = components[i].coefficient.p;
        for (int j = 0; j < n; ++j)
            if (j != i) m.at(i, j) = components[i].coefficient.q * components[i].lk[j];
    }
    return m;
}

// Rational surgery presentation of a fully/partially augmented graph whose
// coefficients may be rational -1/n. Component order: crossing loops by edge
// id, then vertices by id (vertex coefficients are the integer framings of
// Lambda(G - A)). Infinity-coefficient loops are erased first.
inline IntMatrix rational_surgery_matrix(const AugmentedGraph& ag) {
    ag.check_well_formed();
    AugmentedGraph work = ag;
    for (auto it = work.coefficients.begin(); it != work.coefficients.end();) {
        if (it->second.kind == CrossingCoefficient::Infinity) {
            work.base.erase_edge(it->first);
            it = work.coefficients.erase(it);
        } else {
            ++it;
        }
    }
    ChainmailGraph stripped = work.base;
    std::vector<EdgeId> loops;
    for (const auto& [e, c] : work.coefficients) {
        loops.push_back(e);
        stripped.erase_edge(e);
    }
    LinkingMatrix lam = linking_matrix(stripped);
    const int m = static_cast<int>(loops.size());
    const int n = static_cast<int>(lam.vertices.size());
    std::map<VertexId, int> vindex;
    for (int i = 0; i < n; ++i) vindex[lam.vertices[i]] = i;

    std::vector<SurgeryComponent> comps(m + n);
    for (int i = 0; i < m; ++i) {
        const CrossingCoefficient& c = work.coefficients.at(loops[i]);
        long long denom = c.kind == CrossingCoefficient::Rational ? c.c : 1;
        long long numer = c.kind == CrossingCoefficient::Rational ? -1 : -c.c;
        comps[i].coefficient = SurgeryCoefficient::make(numer, denom);
        comps[i].lk.assign(m + n, 0);
        const EdgeData& ed = work.base.edges.at(loops[i]);
        VertexId lo = std::min(ed.ends[0], ed.ends[1]), hi = std::max(ed.ends[0], ed.ends[1]);
        comps[i].lk[m + vindex.at(lo)] = 1;
        comps[i].lk[m + vindex.at(hi)] = -1;
    }
    for (int i = 0; i < n; ++i) {
        comps[m + i].coefficient = SurgeryCoefficient::make(lam.matrix.at(i, i), 1);
        comps[m + i].lk.assign(m + n, 0);
        for (int j = 0; j < n; ++j)
            if (j != i) comps[m + i].lk[m + j] = lam.matrix.at(i, j);
        for (int k = 0; k < m; ++k) comps[m + i].lk[k] = comps[k].lk[m + i];
    }
    return rational_surgery_matrix(comps);
}

// ---------------------------------------------------------------------------
// Crossing-loop surgeries

enum class CrossingLoopAction { RolfsenTwist, BlowDownUnit, Erase };

// RolfsenTwist (coefficient -1/n): remove the loop, restore epsilon(e) = -n.
// BlowDownUnit (coefficient -1): remove the loop, restore epsilon(e) = -1.
// Erase (any): remove the loop and the edge; the flat strands stay unlinked.
inline AugmentedGraph crossing_loop_transform(const AugmentedGraph& ag, EdgeId e,
                                              CrossingLoopAction action) {
    auto it = ag.coefficients.find(e);
    if (it == ag.coefficients.end())
        throw GraphError("crossing_loop_transform: edge " + std::to_string(e) + " is not augmented");
    AugmentedGraph out = ag;
    out.coefficients.erase(e);
    switch (action) {
        case CrossingLoopAction::RolfsenTwist: {
            if (it->second.kind != CrossingCoefficient::Rational)
                throw GraphError("crossing_loop_transform: RolfsenTwist needs a -1/n coefficient");
            out.base.edges.at(e).weight = -it->second.c;
            return out;
        }
        case CrossingLoopAction::BlowDownUnit: {
            if (!(it->second.kind == CrossingCoefficient::Integer && it->second.c == 1))
                throw GraphError("crossing_loop_transform: BlowDownUnit needs coefficient -1");
            out.base.edges.at(e).weight = -1;
            return out;
        }
        case CrossingLoopAction::Erase: {
            out.base.erase_edge(e);
            return out;
        }
    }
    throw GraphError("crossing_loop_transform: unknown action");
}

// ---------------------------------------------------------------------------
// Sign lemma

struct SignReport {
    Int det;
    int crossing_loop_count = 0;
    bool holds = false;  // det == 0 or sign(det) == (-1)^count
};

// sign(det of the augmented matrix) = (-1)^{|V_c|} when nonzero, for integer
// coefficients and nonnegative base vertex weights.
inline SignReport sign_check(const AugmentedGraph& ag) {
    for (const auto& [v, w] : ag.base.vertices)
        if (w < 0) throw GraphError("sign_check: base vertex weight < 0");
    AugmentedMatrix am = augmented_matrix(ag);  // rejects non-integer coefficients
    SignReport rep;
    rep.det = determinant(am.matrix);
    rep.crossing_loop_count = static_cast<int>(am.crossing_loops.size());
    int expected = rep.crossing_loop_count % 2 == 0 ? 1 : -1;
    rep.holds = rep.det == 0 || (rep.det > 0) == (expected > 0);
    return rep;
}

}  // namespace chainmail
