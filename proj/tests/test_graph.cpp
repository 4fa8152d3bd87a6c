#include <catch2/catch_amalgamated.hpp>

#include "matchplex/graph.hpp"

using namespace matchplex;

TEST_CASE("edge_index follows the lexicographic order on (u,v)") {
    CHECK(edge_index(1, 2, 4) == 0);
    CHECK(edge_index(1, 3, 4) == 1);
    CHECK(edge_index(1, 4, 4) == 2);
    CHECK(edge_index(2, 3, 4) == 3);
    CHECK(edge_index(3, 4, 4) == 5);
}

TEST_CASE("edge_index round-trips with edge_endpoints") {
    CHECK(edge_endpoints(edge_index(2, 5, 5), 5) == std::pair<Vertex, Vertex>{2, 5});
    for (int n = 2; n <= 11; ++n)
        for (int i = 0; i < n * (n - 1) / 2; ++i) {
            auto [u, v] = edge_endpoints(i, n);
            REQUIRE(edge_index(u, v, n) == i);
        }
}

TEST_CASE("edge_index rejects degenerate pairs") {
    CHECK_THROWS_AS(edge_index(3, 3, 5), std::domain_error);
    CHECK_THROWS_AS(edge_index(4, 2, 5), std::domain_error);
    CHECK_THROWS_AS(edge_index(2, 6, 5), std::domain_error);
}

TEST_CASE("graph edge operations") {
    Graph g(4);
    g = g.with_edge(1, 2).with_edge(3, 4).with_edge(2, 3);
    CHECK(g.edge_count() == 3);
    CHECK(g.has_edge(2, 1));
    CHECK(!g.has_edge(1, 3));
    CHECK(g.without_edge(2, 3).edge_count() == 2);
    CHECK(g.without_vertex(2).edge_list() ==
          std::vector<std::pair<Vertex, Vertex>>{{3, 4}});
    CHECK(g.neighbors(2) == std::vector<Vertex>{1, 3});
}

TEST_CASE("graph constructor validates") {
    CHECK_THROWS_AS(Graph(0), std::domain_error);
    CHECK_THROWS_AS(Graph(12), std::domain_error);
    CHECK_THROWS_AS(Graph(3, 0b1000), std::domain_error);
}

TEST_CASE("bipartite index is (u-1)s + (v-1)") {
    CHECK(bip_edge_index(1, 1, 2, 3) == 0);
    CHECK(bip_edge_index(1, 3, 2, 3) == 2);
    CHECK(bip_edge_index(2, 1, 2, 3) == 3);
    for (int i = 0; i < 6; ++i) {
        auto [u, v] = bip_edge_endpoints(i, 2, 3);
        REQUIRE(bip_edge_index(u, v, 2, 3) == i);
    }
}

TEST_CASE("bipartite edge operations") {
    BipartiteGraph b(2, 2);
    b = b.with_edge(1, 1).with_edge(2, 2).with_edge(1, 2);
    CHECK(b.edge_count() == 3);
    CHECK(b.without_right(2).edge_list() ==
          std::vector<std::pair<Vertex, Vertex>>{{1, 1}});
    CHECK(b.without_left(1).edge_count() == 1);
}
