#pragma once

// Seeded random chainmail graphs. Profiles constrain weights so that every
// draw satisfies the corresponding hypothesis set; embeddings come from
// incremental planar insertion (candidate edges breaking planarity are
// skipped). Deterministic for a fixed seed (std::mt19937_64).

#include "chainmail/graph.hpp"
#include "chainmail/io.hpp"
#include "chainmail/surgery.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>

namespace chainmail {

enum class Profile { TheoremAlternating, Balanced, Augmented, Arbitrary };

inline std::string profile_name(Profile p) {
    switch (p) {
        case Profile::TheoremAlternating: return "theorem-alternating";
        case Profile::Balanced: return "balanced";
        case Profile::Augmented: return "augmented";
        default: return "arbitrary";
    }
}

inline Profile parse_profile(const std::string& s) {
    if (s == "theorem-alternating") return Profile::TheoremAlternating;
    if (s == "balanced") return Profile::Balanced;
    if (s == "augmented") return Profile::Augmented;
    if (s == "arbitrary") return Profile::Arbitrary;
    throw GraphError("unknown profile \"" + s + "\"");
}

struct GeneratorParams {
    std::uint64_t seed = 1;
    int vertices_min = 1, vertices_max = 6;
    int edges_min = 0, edges_max = 10;
    long long nu_min = 0, nu_max = 3;
    long long eps_min = -3, eps_max = -1;
    Profile profile = Profile::TheoremAlternating;
};

namespace detail {

inline long long draw(std::mt19937_64& rng, long long lo, long long hi) {
    return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

}  // namespace detail

inline GraphFile random_graph(const GeneratorParams& p) {
    if (p.vertices_min < 1 || p.vertices_min > p.vertices_max)
        throw GraphError("random_graph: empty vertex range");
    if (p.edges_min < 0 || p.edges_min > p.edges_max)
        throw GraphError("random_graph: empty edge range");
    if (p.nu_min > p.nu_max || p.eps_min > p.eps_max)
        throw GraphError("random_graph: empty weight range");
    if (p.edges_min > std::max(0, 3 * p.vertices_max - 6))
        throw GraphError("random_graph: edge minimum exceeds planar bound 3V-6");

    // Profile-effective weight ranges.
    long long nu_lo = p.nu_min, nu_hi = p.nu_max;
    long long eps_lo = p.eps_min, eps_hi = p.eps_max;
    const bool negative_edges = p.profile != Profile::Arbitrary;
    const bool simplicial = p.profile == Profile::Augmented;
    const bool allow_loops = p.profile == Profile::Arbitrary;
    switch (p.profile) {
        case Profile::TheoremAlternating: nu_lo = std::max(nu_lo, 0LL); break;
        case Profile::Balanced: nu_lo = nu_hi = 0; break;
        case Profile::Augmented:
            nu_lo = std::max(nu_lo, 1LL);
            eps_lo = eps_hi = -1;
            break;
        case Profile::Arbitrary: break;
    }
    if (negative_edges) eps_hi = std::min(eps_hi, -1LL);
    if (nu_lo > nu_hi) throw GraphError("random_graph: vertex weight range empty for profile");
    if (eps_lo > eps_hi) throw GraphError("random_graph: edge weight range empty for profile");

    std::mt19937_64 rng(p.seed);
    const int n = static_cast<int>(detail::draw(rng, p.vertices_min, p.vertices_max));
    int target = static_cast<int>(detail::draw(rng, p.edges_min, p.edges_max));
    if (simplicial) target = std::min<long long>({target, 3LL * n - 6, 1LL * n * (n - 1) / 2});
    if (n == 1 && !allow_loops) target = 0;
    target = std::max(target, 0);

    ChainmailGraph g;
    for (VertexId v = 1; v <= n; ++v) g.add_vertex(v, detail::draw(rng, nu_lo, nu_hi));

    std::set<std::pair<VertexId, VertexId>> pairs;
    int attempts = 0;
    const int max_attempts = 60 * (target + 1) + 200;
    while (static_cast<int>(g.edges.size()) < target && attempts++ < max_attempts) {
        VertexId a = static_cast<VertexId>(detail::draw(rng, 1, n));
        VertexId b = static_cast<VertexId>(detail::draw(rng, 1, n));
        if (a == b && !allow_loops) continue;
        auto key = std::minmax(a, b);
        if (simplicial && pairs.count({key.first, key.second})) continue;
        long long w = detail::draw(rng, eps_lo, eps_hi);
        ChainmailGraph trial = g;
        trial.add_edge(static_cast<EdgeId>(g.edges.size()) + 1, a, b, w);
        try {
            g = compute_embedding(trial);
        } catch (const GraphError&) {
            continue;  // insertion would break planarity
        }
        pairs.insert({key.first, key.second});
    }
    if (g.edges.empty()) g = compute_embedding(g);

    if (p.profile == Profile::TheoremAlternating) {
        // One positive vertex per component.
        for (const auto& comp : connected_components(g)) {
            bool positive = false;
            for (VertexId v : comp) positive = positive || g.vertices.at(v) > 0;
            if (!positive) g.vertices.at(*comp.begin()) = 1;
        }
    }

    if (p.profile == Profile::Augmented) {
        AugmentedGraph ag;
        ag.base = g;
        for (const auto& [e, ed] : g.edges)
            if (detail::draw(rng, 0, 1) == 1)
                ag.coefficients[e] = CrossingCoefficient::integer(detail::draw(rng, 1, 4));
        ag.check_well_formed();
        return GraphFile::wrap(ag);
    }
    return GraphFile::wrap(g);
}

}  // namespace chainmail
