#include "chainmail/graph.hpp"
#include "chainmail/surgery.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace chainmail;

namespace {

ChainmailGraph path_graph(std::vector<long long> nu, long long eps = -1) {
    ChainmailGraph g;
    for (size_t i = 0; i < nu.size(); ++i) g.add_vertex(static_cast<int>(i + 1), nu[i]);
    for (size_t i = 0; i + 1 < nu.size(); ++i)
        g.add_edge(static_cast<int>(i + 1), static_cast<int>(i + 1), static_cast<int>(i + 2), eps);
    return g;
}

ChainmailGraph triangle(long long n1, long long n2, long long n3) {
    ChainmailGraph g;
    g.add_vertex(1, n1);
    g.add_vertex(2, n2);
    g.add_vertex(3, n3);
    g.add_edge(1, 1, 2, -1);
    g.add_edge(2, 2, 3, -1);
    g.add_edge(3, 3, 1, -1);
    return g;
}

// small random planar graphs via compute_embedding over random sparse picks
ChainmailGraph random_planar(std::mt19937_64& rng, int maxv, int maxe) {
    int n = 1 + static_cast<int>(rng() % maxv);
    ChainmailGraph g;
    for (int v = 1; v <= n; ++v) g.add_vertex(v, static_cast<long long>(rng() % 3));
    int m = static_cast<int>(rng() % (maxe + 1));
    ChainmailGraph shape;
    for (const auto& [v, w] : g.vertices) shape.add_vertex(v, w);
    int id = 1;
    for (int i = 0; i < m; ++i) {
        int a = 1 + static_cast<int>(rng() % n), b = 1 + static_cast<int>(rng() % n);
        long long w = static_cast<long long>(rng() % 5) - 3;
        shape.edges[id] = EdgeData{{a, b}, w};
        ++id;
    }
    try {
        return compute_embedding(shape);
    } catch (const GraphError&) {
        return g;  // nonplanar draw: fall back to the edgeless graph
    }
}

}  // namespace

TEST_CASE("validate: empty graph") {
    ChainmailGraph g;
    auto rep = validate(g);
    CHECK(rep.valid);
    CHECK(rep.components.empty());
}

TEST_CASE("validate: one vertex with one loop") {
    // rotation [e.0, e.1]: hand-traced faces are (e.0)(e.1) -> V=1 E=1 F=2
    ChainmailGraph g;
    g.add_vertex(1, 0);
    g.add_edge(7, 1, 1, -2);
    auto rep = validate(g);
    REQUIRE(rep.valid);
    REQUIRE(rep.components.size() == 1);
    CHECK(rep.components[0].edge_count == 1);
    CHECK(rep.components[0].face_count == 2);
    CHECK(rep.components[0].euler_characteristic == 2);
}

TEST_CASE("validate: K5 with any rotation is invalid") {
    ChainmailGraph g;
    for (int v = 1; v <= 5; ++v) g.add_vertex(v, 0);
    int id = 1;
    for (int a = 1; a <= 5; ++a)
        for (int b = a + 1; b <= 5; ++b) g.add_edge(id++, a, b, -1);
    auto rep = validate(g);
    CHECK_FALSE(rep.valid);
    bool below = false;
    for (const auto& c : rep.components) below = below || c.euler_characteristic < 2;
    CHECK(below);
}

TEST_CASE("validate: reports malformed rotations") {
    ChainmailGraph g;
    g.add_vertex(1, 0);
    g.add_vertex(2, 0);
    g.add_edge(1, 1, 2, -1);
    g.rotations[1].clear();  // drop dart 1.0
    auto rep = validate(g);
    CHECK_FALSE(rep.valid);
    REQUIRE_FALSE(rep.errors.empty());
}

TEST_CASE("minor: contraction sums weights") {
    ChainmailGraph g = path_graph({1, 2});
    ChainmailGraph c = minor(g, 1, MinorKind::Contract);
    REQUIRE(c.vertices.size() == 1);
    CHECK(c.vertices.begin()->second == 3);
    CHECK(c.edges.empty());
}

TEST_CASE("minor: contracting a triangle edge leaves parallel edges") {
    ChainmailGraph g = triangle(0, 0, 0);
    ChainmailGraph c = minor(g, 2, MinorKind::Contract);  // contract edge {2,3}
    REQUIRE(c.vertices.size() == 2);
    REQUIRE(c.edges.size() == 2);
    for (const auto& [e, ed] : c.edges) {
        CHECK_FALSE(ed.is_loop());
        CHECK(ed.weight == -1);
    }
    CHECK(validate(c).valid);
}

TEST_CASE("minor: errors") {
    ChainmailGraph g;
    g.add_vertex(1, 0);
    g.add_edge(1, 1, 1, -1);
    CHECK_THROWS_AS(minor(g, 1, MinorKind::Contract), GraphError);
    CHECK_THROWS_AS(minor(g, 99, MinorKind::Delete), GraphError);
}

TEST_CASE("minors preserve the sphere embedding") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 60; ++trial) {
        ChainmailGraph g = random_planar(rng, 5, 8);
        REQUIRE(validate(g).valid);
        for (const auto& [e, ed] : g.edges) {
            CHECK(validate(minor(g, e, MinorKind::Delete)).valid);
            if (!ed.is_loop()) CHECK(validate(minor(g, e, MinorKind::Contract)).valid);
        }
    }
}

TEST_CASE("apply_move: merge parallel") {
    ChainmailGraph g;
    g.add_vertex(1, 0);
    g.add_vertex(2, 0);
    g.add_edge(1, 1, 2, -1);
    g.add_edge(2, 2, 1, -2);
    ChainmailGraph h = apply_move(g, MoveKind::merge_parallel(1, 2));
    REQUIRE(h.edges.size() == 1);
    CHECK(h.edges.at(1).weight == -3);
}

TEST_CASE("apply_move: remove unit leaf") {
    ChainmailGraph g = path_graph({1, 0, 0});
    ChainmailGraph h = apply_move(g, MoveKind::remove_unit_leaf(3, 2));
    CHECK(h.vertices.size() == 2);
    CHECK(h.edges.size() == 1);
    CHECK(h.vertices.at(1) == 1);
}

TEST_CASE("apply_move: erase loop keeps Lambda") {
    ChainmailGraph g;
    g.add_vertex(1, 2);
    g.add_edge(1, 1, 1, -1);
    ChainmailGraph h = apply_move(g, MoveKind::erase_loop(1));
    CHECK(h.edges.empty());
    CHECK(linking_matrix(g).matrix == linking_matrix(h).matrix);
}

TEST_CASE("apply_move: precondition failures name the condition") {
    ChainmailGraph g = path_graph({1, 1});
    CHECK_THROWS_WITH(apply_move(g, MoveKind::erase_zero_edge(1)),
                      Catch::Matchers::ContainsSubstring("not 0"));
    CHECK_THROWS_WITH(apply_move(g, MoveKind::erase_loop(1)),
                      Catch::Matchers::ContainsSubstring("not a loop"));
    CHECK_THROWS_WITH(apply_move(g, MoveKind::remove_unit_leaf(1, 1)),
                      Catch::Matchers::ContainsSubstring("weight is not 0"));
}

TEST_CASE("simplify examples") {
    ChainmailGraph g = path_graph({1, 0, 0});
    ChainmailGraph s = simplify(g);
    CHECK(s.vertices.size() == 1);
    CHECK(s.vertices.at(1) == 1);
    CHECK(s.edges.empty());

    ChainmailGraph zero = path_graph({1, 1}, 0);
    CHECK(simplify(zero).edges.empty());

    ChainmailGraph fix = triangle(1, 1, 1);
    CHECK(simplify(fix) == fix);
    CHECK(simplify(simplify(g)) == simplify(g));
}

TEST_CASE("moves preserve the cokernel of Lambda") {
    std::mt19937_64 rng(77);
    int applied = 0;
    for (int trial = 0; trial < 80; ++trial) {
        ChainmailGraph g = random_planar(rng, 5, 7);
        AbelianGroup before = first_homology(g);
        // try each available move once
        for (const auto& [e, ed] : g.edges) {
            if (ed.weight == 0) {
                CHECK(first_homology(apply_move(g, MoveKind::erase_zero_edge(e))) == before);
                ++applied;
            }
            if (ed.is_loop()) {
                CHECK(first_homology(apply_move(g, MoveKind::erase_loop(e))) == before);
                ++applied;
            }
        }
        for (const auto& [v, w] : g.vertices) {
            if (w != 0 || g.degree(v) != 1) continue;
            EdgeId e = g.rotations.at(v).front().edge;
            long long ew = g.edges.at(e).weight;
            if (ew != 1 && ew != -1) continue;
            ChainmailGraph h = apply_move(g, MoveKind::remove_unit_leaf(v, e));
            CHECK(first_homology(h) == before);
            // det Lambda(before) = -eps * det Lambda(after)
            CHECK(determinant(linking_matrix(g).matrix) ==
                  Int(-ew) * determinant(linking_matrix(h).matrix));
            ++applied;
        }
    }
    CHECK(applied > 20);
}

TEST_CASE("normalize splits heavy edges and preserves Lambda") {
    ChainmailGraph g = path_graph({1, 1}, -3);
    ChainmailGraph n = normalize(g);
    CHECK(n.edges.size() == 3);
    for (const auto& [e, ed] : n.edges) CHECK(ed.weight == -1);
    CHECK(linking_matrix(n).matrix == linking_matrix(g).matrix);
    CHECK(validate(n).valid);

    ChainmailGraph already = triangle(1, 0, 0);
    CHECK(normalize(already) == already);

    ChainmailGraph bad = path_graph({1, 1}, 0);
    CHECK_THROWS_AS(normalize(bad), GraphError);
}

TEST_CASE("normalize preserves Lambda on random graphs") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 50; ++trial) {
        ChainmailGraph g = random_planar(rng, 5, 6);
        for (auto& [e, ed] : g.edges) ed.weight = -1 - static_cast<long long>(rng() % 3);
        ChainmailGraph n = normalize(g);
        CHECK(linking_matrix(n).matrix == linking_matrix(g).matrix);
        CHECK(validate(n).valid);
    }
}

TEST_CASE("graph_properties examples") {
    auto rep = graph_properties(triangle(0, 0, 0));
    CHECK(rep.bridge_free);
    CHECK_FALSE(rep.triangle_free);
    CHECK_FALSE(rep.asymmetry_candidate);

    rep = graph_properties(path_graph({0, 0, 0}));
    CHECK(rep.bridges.size() == 2);
    CHECK_FALSE(rep.asymmetry_candidate);
    CHECK(rep.leaves == std::set<VertexId>{1, 3});
}

TEST_CASE("graph_properties: cube graph is an asymmetry candidate") {
    // Q3 with an explicit genus-0 rotation system found by the embedder
    ChainmailGraph shape;
    for (int v = 0; v < 8; ++v) shape.add_vertex(v + 1, 0);
    int id = 1;
    auto edge = [&](int a, int b) { shape.edges[id++] = EdgeData{{a + 1, b + 1}, -1}; };
    for (int v = 0; v < 8; ++v)
        for (int bit : {1, 2, 4})
            if ((v ^ bit) > v) edge(v, v ^ bit);
    ChainmailGraph q3 = compute_embedding(shape);
    REQUIRE(validate(q3).valid);
    auto rep = graph_properties(q3);
    CHECK(rep.simplicial);
    CHECK(rep.triangle_free);
    CHECK(rep.min_degree_ge3);
    CHECK(rep.bridge_free);
    CHECK(rep.asymmetry_candidate);
    CHECK(rep.violations.empty());
}

TEST_CASE("acyclic orientations") {
    ChainmailGraph one = path_graph({0, 0});
    CHECK(enumerate_acyclic_orientations(one).size() == 2);

    CHECK(enumerate_acyclic_orientations(triangle(0, 0, 0)).size() == 6);

    ChainmailGraph edgeless;
    edgeless.add_vertex(1, 0);
    CHECK(enumerate_acyclic_orientations(edgeless).size() == 1);

    ChainmailGraph loopy;
    loopy.add_vertex(1, 0);
    loopy.add_edge(1, 1, 1, -1);
    CHECK_THROWS_AS(enumerate_acyclic_orientations(loopy), GraphError);
    CHECK_THROWS_AS(enumerate_acyclic_orientations(triangle(0, 0, 0), 2), GraphError);
}

TEST_CASE("every acyclic orientation has a sink and a source") {
    std::mt19937_64 rng(1001);
    for (int trial = 0; trial < 40; ++trial) {
        ChainmailGraph g = random_planar(rng, 5, 6);
        std::vector<EdgeId> loops;
        for (const auto& [e, ed] : g.edges)
            if (ed.is_loop()) loops.push_back(e);
        for (EdgeId e : loops) g.erase_edge(e);
        if (g.edges.empty()) continue;
        for (const auto& o : enumerate_acyclic_orientations(g, 10)) {
            std::map<VertexId, int> indeg, outdeg;
            for (const auto& [e, src] : o.source) {
                const EdgeData& ed = g.edges.at(e);
                ++outdeg[src];
                ++indeg[ed.ends[0] == src ? ed.ends[1] : ed.ends[0]];
            }
            bool sink = false, source = false;
            for (const auto& [v, w] : g.vertices) {
                if (indeg[v] + outdeg[v] == 0) continue;
                if (outdeg[v] == 0) sink = true;
                if (indeg[v] == 0) source = true;
            }
            CHECK(sink);
            CHECK(source);
        }
    }
}

TEST_CASE("weighted spanning trees") {
    ChainmailGraph g = path_graph({0, 0}, -2);
    CHECK(count_weighted_spanning_trees(g) == 2);

    CHECK(count_weighted_spanning_trees(triangle(0, 0, 0)) == 3);

    ChainmailGraph t = path_graph({0, 0, 0, 0}, -3);
    CHECK(count_weighted_spanning_trees(t) == 27);

    ChainmailGraph split;
    split.add_vertex(1, 0);
    split.add_vertex(2, 0);
    CHECK_THROWS_AS(count_weighted_spanning_trees(split), GraphError);
}

TEST_CASE("compute_embedding rejects nonplanar graphs") {
    ChainmailGraph k5;
    for (int v = 1; v <= 5; ++v) k5.add_vertex(v, 0);
    int id = 1;
    for (int a = 1; a <= 5; ++a)
        for (int b = a + 1; b <= 5; ++b) k5.edges[id++] = EdgeData{{a, b}, -1};
    CHECK_THROWS_AS(compute_embedding(k5), GraphError);

    ChainmailGraph k33;
    for (int v = 1; v <= 6; ++v) k33.add_vertex(v, 0);
    id = 1;
    for (int a = 1; a <= 3; ++a)
        for (int b = 4; b <= 6; ++b) k33.edges[id++] = EdgeData{{a, b}, -1};
    CHECK_THROWS_AS(compute_embedding(k33), GraphError);
}

TEST_CASE("compute_embedding embeds planar graphs with loops and multiedges") {
    ChainmailGraph shape;
    shape.add_vertex(1, 0);
    shape.add_vertex(2, 0);
    shape.edges[1] = EdgeData{{1, 2}, -1};
    shape.edges[2] = EdgeData{{1, 2}, -1};
    shape.edges[3] = EdgeData{{1, 1}, -1};
    shape.edges[4] = EdgeData{{2, 2}, -2};
    ChainmailGraph g = compute_embedding(shape);
    CHECK(validate(g).valid);

    // K4 (planar, 3-connected)
    ChainmailGraph k4;
    for (int v = 1; v <= 4; ++v) k4.add_vertex(v, 0);
    int id = 1;
    for (int a = 1; a <= 4; ++a)
        for (int b = a + 1; b <= 4; ++b) k4.edges[id++] = EdgeData{{a, b}, -1};
    CHECK(validate(compute_embedding(k4)).valid);
}
