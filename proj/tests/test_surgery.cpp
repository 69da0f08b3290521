#include "chainmail/surgery.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace chainmail;

namespace {

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

ChainmailGraph single_edge(long long n1, long long n2, long long eps = -1) {
    ChainmailGraph g;
    g.add_vertex(1, n1);
    g.add_vertex(2, n2);
    g.add_edge(1, 1, 2, eps);
    return g;
}

ChainmailGraph random_planar(std::mt19937_64& rng, int maxv, int maxe) {
    int n = 1 + static_cast<int>(rng() % maxv);
    ChainmailGraph shape;
    for (int v = 1; v <= n; ++v) shape.add_vertex(v, static_cast<long long>(rng() % 4) - 1);
    int m = static_cast<int>(rng() % (maxe + 1));
    for (int i = 1; i <= m; ++i) {
        int a = 1 + static_cast<int>(rng() % n), b = 1 + static_cast<int>(rng() % n);
        shape.edges[i] = EdgeData{{a, b}, static_cast<long long>(rng() % 5) - 3};
    }
    try {
        return compute_embedding(shape);
    } catch (const GraphError&) {
        shape.edges.clear();
        return compute_embedding(shape);
    }
}

}  // namespace

TEST_CASE("linking matrix: triangle with unit weights") {
    auto lm = linking_matrix(triangle(1, 1, 1));
    // row sums: nu_i = diagonal + off-diagonal sum, so diag = 1 - (-2) = 3
    IntMatrix want(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) want.at(i, j) = (i == j) ? 3 : -1;
    CHECK(lm.matrix == want);
    CHECK(lm.vertices == std::vector<VertexId>{1, 2, 3});
}

TEST_CASE("linking matrix: loops contribute nothing") {
    ChainmailGraph g = single_edge(2, 0, -1);
    g.add_edge(5, 1, 1, -4);
    auto lm = linking_matrix(g).matrix;
    CHECK(lm.at(0, 0) == 3);  // 2 - (-1)
    CHECK(lm.at(0, 1) == -1);
    CHECK(lm.at(1, 1) == 1);
}

TEST_CASE("linking matrix row sums equal the vertex weights") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 60; ++trial) {
        ChainmailGraph g = random_planar(rng, 6, 8);
        auto lm = linking_matrix(g);
        REQUIRE(lm.matrix.is_symmetric());
        for (size_t i = 0; i < lm.vertices.size(); ++i) {
            Int sum = 0;
            for (size_t j = 0; j < lm.vertices.size(); ++j) sum += lm.matrix.at(i, j);
            CHECK(sum == g.vertices.at(lm.vertices[i]));
        }
    }
}

TEST_CASE("first homology: triangle with one marked vertex gives Z/3") {
    AbelianGroup h = first_homology(triangle(1, 0, 0));
    CHECK(h.to_string() == "Z/3");
    CHECK(h.order() == 3);
}

TEST_CASE("first homology: zero-weight vertex pair gives Z + torsion-free rank") {
    AbelianGroup h = first_homology(single_edge(1, 1, -1));
    // Lambda = [[2,-1],[-1,2]], det 3
    CHECK(h.order() == 3);
    CHECK(h.free_rank == 0);

    AbelianGroup z = first_homology(single_edge(-1, 1, -1));
    // Lambda = [[0,-1],[-1,2]], det -1: trivial group
    CHECK(z.order() == 1);
}

TEST_CASE("dc-check: single edge 3 = 1 + 2") {
    ChainmailGraph g = single_edge(1, 1);
    auto rep = dc_check(g, 1);
    CHECK(rep.det_graph == 3);
    CHECK(rep.det_deleted == 1);
    CHECK(rep.det_contracted == 2);
    CHECK(rep.holds);
}

TEST_CASE("dc-check: rejects loops and positive edges") {
    ChainmailGraph g = single_edge(1, 1, +1);
    CHECK_THROWS_AS(dc_check(g, 1), GraphError);
    ChainmailGraph l;
    l.add_vertex(1, 1);
    l.add_edge(1, 1, 1, -1);
    CHECK_THROWS_AS(dc_check(l, 1), GraphError);
}

TEST_CASE("dc-check holds on random graphs") {
    std::mt19937_64 rng(31);
    int checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
        ChainmailGraph g = random_planar(rng, 5, 7);
        for (const auto& [e, ed] : g.edges) {
            if (ed.is_loop() || ed.weight != -1) continue;
            CHECK(dc_check(g, e).holds);
            ++checked;
        }
    }
    CHECK(checked > 40);
}

TEST_CASE("augmented matrix: single crossing loop on a triangle") {
    ChainmailGraph g = triangle(1, 1, 1);
    AugmentedGraph a{g, {{1, CrossingCoefficient::integer(1)}}};
    auto am = augmented_matrix(a);
    REQUIRE(am.matrix.rows == 4);
    // crossing row first: diag -c, +1 smaller endpoint, -1 larger
    CHECK(am.matrix.at(0, 0) == -1);
    CHECK(am.matrix.at(0, 1) == 1);
    CHECK(am.matrix.at(0, 2) == -1);
    CHECK(am.matrix.at(0, 3) == 0);
    // symmetric and vertex block is Lambda(G - A)
    CHECK(am.matrix.is_symmetric());
    ChainmailGraph base = g;
    base.erase_edge(1);
    auto lm = linking_matrix(base).matrix;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(am.matrix.at(i + 1, j + 1) == lm.at(i, j));
}

TEST_CASE("augmented matrix: two-vertex example has det -c-2") {
    for (long long c = 1; c <= 5; ++c) {
        ChainmailGraph g = single_edge(1, 1);
        AugmentedGraph a{g, {{1, CrossingCoefficient::integer(c)}}};
        auto am = augmented_matrix(a);
        REQUIRE(am.matrix.rows == 3);
        CHECK(determinant(am.matrix) == Int(-c - 2));
    }
}

TEST_CASE("augmented matrix rejects malformed graphs") {
    ChainmailGraph pos = single_edge(1, 1, +1);
    AugmentedGraph a{pos, {}};
    CHECK_THROWS_AS(augmented_matrix(a), GraphError);

    ChainmailGraph multi = single_edge(1, 1);
    multi.add_edge(2, 1, 2, -1);
    AugmentedGraph b{multi, {{1, CrossingCoefficient::integer(1)}}};
    CHECK_THROWS_AS(augmented_matrix(b), GraphError);

    ChainmailGraph ok = single_edge(1, 1);
    AugmentedGraph c{ok, {{9, CrossingCoefficient::integer(1)}}};
    CHECK_THROWS_AS(augmented_matrix(c), GraphError);
}

TEST_CASE("rational surgery matrix from explicit components") {
    std::vector<SurgeryComponent> comps(3);
    comps[0].coefficient = SurgeryCoefficient::make(1, 1);
    comps[1].coefficient = SurgeryCoefficient::make(1, 1);
    comps[2].coefficient = SurgeryCoefficient::make(-1, 2);
    comps[0].lk = {0, 0, 1};
    comps[1].lk = {0, 0, -1};
    comps[2].lk = {1, -1, 0};
    IntMatrix m = rational_surgery_matrix(comps);
    // [[1,0,1],[0,1,-1],[2,-2,-1]]
    CHECK(m.at(0, 0) == 1);
    CHECK(m.at(2, 0) == 2);
    CHECK(m.at(2, 1) == -2);
    CHECK(m.at(2, 2) == -1);
    CHECK(determinant(m) == -5);
}

TEST_CASE("rational surgery matrix of an augmented graph") {
    ChainmailGraph g = single_edge(1, 1);
    AugmentedGraph a{g, {{1, CrossingCoefficient::rational(2)}}};  // -1/2
    IntMatrix m = rational_surgery_matrix(a);
    REQUIRE(m.rows == 3);
    // crossing-loop row: p = -1, off-diagonal q * lk = 2 * (+-1)
    CHECK(m.at(0, 0) == -1);
    CHECK(m.at(0, 1) == 2);
    CHECK(m.at(0, 2) == -2);
    // vertex rows use the framings of Lambda(G - A) with q = 1
    CHECK(m.at(1, 1) == 1);
    CHECK(m.at(2, 2) == 1);
    CHECK(m.at(1, 0) == 1);
    CHECK(m.at(2, 0) == -1);
}

TEST_CASE("rational surgery matrix: infinity coefficient erases the component") {
    ChainmailGraph g = single_edge(1, 1);
    AugmentedGraph a{g, {{1, CrossingCoefficient::infinity()}}};
    IntMatrix m = rational_surgery_matrix(a);
    REQUIRE(m.rows == 2);
    // the loop and its flat edge are gone: Lambda of two isolated weights
    CHECK(m.at(0, 0) == 1);
    CHECK(m.at(0, 1) == 0);
    CHECK(m.at(1, 1) == 1);
}

TEST_CASE("twist: Rolfsen twist preserves first homology") {
    for (long long n = 1; n <= 5; ++n) {
        ChainmailGraph g = single_edge(2, 1);
        AugmentedGraph a{g, {{1, CrossingCoefficient::rational(n)}}};
        AbelianGroup before = cokernel(rational_surgery_matrix(a));
        AugmentedGraph twisted = crossing_loop_transform(a, 1, CrossingLoopAction::RolfsenTwist);
        CHECK(twisted.base.edges.at(1).weight == -n);
        CHECK(first_homology(twisted.base) == before);
    }
}

TEST_CASE("twist: blowing down a -1 crossing loop preserves first homology") {
    ChainmailGraph g = single_edge(1, 1);
    AugmentedGraph a{g, {{1, CrossingCoefficient::integer(1)}}};
    AbelianGroup before = cokernel(augmented_matrix(a).matrix);
    AugmentedGraph down = crossing_loop_transform(a, 1, CrossingLoopAction::BlowDownUnit);
    CHECK(down.coefficients.empty());
    CHECK(first_homology(down.base) == before);

    AugmentedGraph deep{g, {{1, CrossingCoefficient::integer(2)}}};
    CHECK_THROWS_AS(crossing_loop_transform(deep, 1, CrossingLoopAction::BlowDownUnit), GraphError);
    CHECK_THROWS_AS(crossing_loop_transform(a, 9, CrossingLoopAction::Erase), GraphError);
}

TEST_CASE("sign lemma: determinant sign is (-1)^{#crossing loops}") {
    std::mt19937_64 rng(55);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        ChainmailGraph g = random_planar(rng, 5, 6);
        // make it a valid augmented base: simple, all eps=-1, nu >= 1
        std::set<std::pair<VertexId, VertexId>> seen;
        std::vector<EdgeId> drop;
        for (auto& [e, ed] : g.edges) {
            auto key = std::minmax(ed.ends[0], ed.ends[1]);
            if (ed.is_loop() || !seen.insert({key.first, key.second}).second)
                drop.push_back(e);
            else
                ed.weight = -1;
        }
        for (EdgeId e : drop) g.erase_edge(e);
        for (auto& [v, w] : g.vertices) w = 1 + static_cast<long long>(rng() % 3);
        AugmentedGraph a{g, {}};
        for (const auto& [e, ed] : g.edges)
            if (rng() % 2)
                a.coefficients[e] =
                    CrossingCoefficient::integer(1 + static_cast<long long>(rng() % 4));
        if (a.coefficients.empty()) continue;
        auto rep = sign_check(a);
        CHECK(rep.holds);
        Int det = determinant(augmented_matrix(a).matrix);
        int sgn = (a.coefficients.size() % 2 == 0) ? 1 : -1;
        CHECK(det * sgn > 0);
        ++checked;
    }
    CHECK(checked > 80);
}

TEST_CASE("sign check rejects non-positive vertex weights") {
    ChainmailGraph g = single_edge(-1, 1);
    AugmentedGraph a{g, {{1, CrossingCoefficient::integer(1)}}};
    CHECK_THROWS_AS(sign_check(a), GraphError);
}
