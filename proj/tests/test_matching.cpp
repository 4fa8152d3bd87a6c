#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "matchplex/bruteforce.hpp"
#include "matchplex/gallai_edmonds.hpp"
#include "matchplex/graph.hpp"
#include "matchplex/matching.hpp"

using namespace matchplex;

namespace {

bool matching_valid_in(const Graph& g, const Matching& m) {
    std::vector<bool> used(g.n + 1, false);
    for (auto [u, v] : m.edges) {
        if (!g.has_edge(u, v)) return false;
        if (used[u] || used[v]) return false;
        used[u] = used[v] = true;
    }
    return true;
}

Graph path_graph(int n) {
    Graph g(n);
    for (int v = 1; v < n; ++v) g = g.with_edge(v, v + 1);
    return g;
}

Graph complete_graph(int n) {
    Graph g(n);
    for (int u = 1; u <= n; ++u)
        for (int v = u + 1; v <= n; ++v) g = g.with_edge(u, v);
    return g;
}

Graph cycle_graph(int n) {
    Graph g = path_graph(n);
    return g.with_edge(1, n);
}

}  // namespace

TEST_CASE("max_matching on the spec's small graphs") {
    CHECK(max_matching(Graph(3)).size() == 0);
    CHECK(max_matching(complete_graph(3)).size() == 1);
    Graph p4 = path_graph(4);
    // Frozen from the edge-subset brute force.
    CHECK(bruteforce::max_matching_size(p4) == 2);
    CHECK(max_matching(p4).size() == 2);
}

TEST_CASE("max_matching agrees with brute force on every graph with n <= 6") {
    for (int n = 2; n <= 6; ++n) {
        int slots = n * (n - 1) / 2;
        for (EdgeMask mask = 0; mask < (EdgeMask{1} << slots); ++mask) {
            Graph g(n, mask);
            Matching m = max_matching(g);
            REQUIRE(matching_valid_in(g, m));
            REQUIRE(m.size() == bruteforce::max_matching_size(g));
        }
    }
}

TEST_CASE("max_matching agrees with brute force on random graphs with n = 7..11") {
    std::mt19937 rng(20240522);
    for (int n = 7; n <= 11; ++n) {
        int slots = n * (n - 1) / 2;
        for (int trial = 0; trial < 400; ++trial) {
            EdgeMask mask = 0;
            for (int i = 0; i < slots; ++i)
                if (rng() & 1u) mask |= EdgeMask{1} << i;
            Graph g(n, mask);
            Matching m = max_matching(g);
            REQUIRE(matching_valid_in(g, m));
            REQUIRE(m.size() == bruteforce::max_matching_size(g));
        }
    }
}

TEST_CASE("bipartite matching basics") {
    BipartiteGraph k22(2, 2, 0b1111);
    CHECK(max_matching_bipartite(k22).size() == 2);

    BipartiteGraph star(1, 3, 0b111);
    CHECK(max_matching_bipartite(star).size() == 1);

    BipartiteGraph b(2, 2);
    b = b.with_edge(1, 1).with_edge(2, 1);
    CHECK(bruteforce::max_matching_size_bipartite(b) == 1);
    CHECK(max_matching_bipartite(b).size() == 1);
}

TEST_CASE("bipartite matching agrees with brute force on all masks up to 4x4") {
    for (auto [r, s] : {std::pair{2, 2}, {1, 3}, {3, 2}, {2, 4}, {3, 3}}) {
        for (EdgeMask mask = 0; mask < (EdgeMask{1} << (r * s)); ++mask) {
            BipartiteGraph b(r, s, mask);
            REQUIRE(nu_bipartite(b) == bruteforce::max_matching_size_bipartite(b));
        }
    }
}

TEST_CASE("Koenig cover: touches every edge, size equals nu") {
    BipartiteGraph k22(2, 2, 0b1111);
    CHECK(min_vertex_cover_bipartite(k22).size() == 2);

    CHECK(min_vertex_cover_bipartite(BipartiteGraph(2, 2)).size() == 0);

    BipartiteGraph b(2, 2);
    b = b.with_edge(1, 1).with_edge(1, 2).with_edge(2, 1);
    auto cover = min_vertex_cover_bipartite(b);
    CHECK(cover.size() == 2);
    CHECK(cover.size() == bruteforce::min_vertex_cover_size_bipartite(b));
}

TEST_CASE("Koenig duality holds on every bipartite mask with r*s <= 16") {
    for (auto [r, s] : {std::pair{2, 2}, {1, 4}, {4, 2}, {2, 4}, {4, 4}, {3, 3}}) {
        for (EdgeMask mask = 0; mask < (EdgeMask{1} << (r * s)); ++mask) {
            BipartiteGraph b(r, s, mask);
            auto cover = min_vertex_cover_bipartite(b);
            // Covers every edge.
            for (auto [u, v] : b.edge_list()) {
                bool touched = std::count(cover.left.begin(), cover.left.end(), u) ||
                               std::count(cover.right.begin(), cover.right.end(), v);
                REQUIRE(touched);
            }
            REQUIRE(cover.size() == nu_bipartite(b));
        }
    }
}

TEST_CASE("factor-critical test") {
    CHECK(is_factor_critical(Graph(1)));
    CHECK(is_factor_critical(cycle_graph(5)));
    CHECK(!is_factor_critical(path_graph(3)));
    CHECK(!is_factor_critical(path_graph(4)));  // even order
    CHECK(is_factor_critical(complete_graph(7)));
}

TEST_CASE("factor-critical agrees with brute force on all graphs with n <= 5") {
    for (int n = 1; n <= 5; ++n) {
        int slots = n * (n - 1) / 2;
        for (EdgeMask mask = 0; mask < (EdgeMask{1} << slots); ++mask) {
            Graph g(n, mask);
            REQUIRE(is_factor_critical(g) == bruteforce::is_factor_critical(g));
        }
    }
}

TEST_CASE("factor critical implies odd order and connected when |V| > 1") {
    for (int n = 1; n <= 5; ++n) {
        int slots = n * (n - 1) / 2;
        for (EdgeMask mask = 0; mask < (EdgeMask{1} << slots); ++mask) {
            Graph g(n, mask);
            if (!is_factor_critical(g)) continue;
            REQUIRE(n % 2 == 1);
            if (n > 1) {
                std::vector<bool> all(n + 1, true);
                all[0] = false;
                REQUIRE(components_within(g, all).size() == 1);
            }
        }
    }
}

TEST_CASE("a bipartite graph viewed as a general graph is factor critical iff a single vertex") {
    // General graphs on [r+s] whose edges all cross the (left, right) split.
    for (auto [r, s] : {std::pair{1, 2}, {2, 1}, {2, 2}, {1, 4}, {2, 3}}) {
        int n = r + s;
        for (EdgeMask bmask = 0; bmask < (EdgeMask{1} << (r * s)); ++bmask) {
            BipartiteGraph b(r, s, bmask);
            Graph g(n);
            for (auto [u, v] : b.edge_list()) g = g.with_edge(u, r + v);
            REQUIRE(!is_factor_critical(g));  // n = r+s >= 3 here, never a single vertex
        }
    }
    CHECK(is_factor_critical(Graph(1)));
}

TEST_CASE("q-factor-critical test") {
    BipartiteGraph both(1, 2, 0b11);
    CHECK(is_q_factor_critical(both, 1));

    BipartiteGraph one(1, 2, 0b01);
    CHECK(!is_q_factor_critical(one, 1));

    BipartiteGraph k23(2, 3, 0b111111);
    CHECK(is_q_factor_critical(k23, 2));

    CHECK_THROWS_AS(is_q_factor_critical(k23, 1), std::domain_error);

    // s = q is never q-factor critical.
    BipartiteGraph k22(2, 2, 0b1111);
    CHECK(!is_q_factor_critical(k22, 2));

    // q = 0: the empty graph on [0] u [s-bar] is 0-factor critical.
    CHECK(is_q_factor_critical(BipartiteGraph(0, 2), 0));
}
