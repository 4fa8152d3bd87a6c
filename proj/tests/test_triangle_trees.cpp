#include <catch2/catch_amalgamated.hpp>
#include <set>

#include "matchplex/matching.hpp"
#include "matchplex/triangle_trees.hpp"

using namespace matchplex;

TEST_CASE("double factorial") {
    CHECK(double_factorial(-1) == 1);
    CHECK(double_factorial(1) == 1);
    CHECK(double_factorial(3) == 3);
    CHECK(double_factorial(5) == 15);
    CHECK(double_factorial(19) == BigInt("654729075"));
    CHECK_THROWS_AS(double_factorial(4), std::domain_error);
    CHECK_THROWS_AS(double_factorial(-3), std::domain_error);
}

TEST_CASE("binomial") {
    CHECK(binomial(4, 2) == 6);
    CHECK(binomial(3, 0) == 1);
    CHECK(binomial(2, 5) == 0);
    CHECK(binomial(50, 25) == BigInt("126410606437752"));
}

TEST_CASE("odd partitions: counts frozen from direct enumeration") {
    CHECK(odd_partitions(range_1_to(5), 1).size() == 1);
    CHECK(odd_partitions(range_1_to(4), 2).size() == 4);   // singleton + triple
    CHECK(odd_partitions(range_1_to(6), 2).size() == 16);  // 6 of type 1+5, 10 of type 3+3
    CHECK(odd_partitions(range_1_to(5), 3).size() == 10);  // 1+1+3
}

TEST_CASE("odd partitions: parity mismatch gives the empty list") {
    CHECK(odd_partitions(range_1_to(5), 2).empty());
    CHECK(odd_partitions(range_1_to(4), 1).empty());
}

TEST_CASE("odd partitions: blocks are odd, disjoint, and cover the ground set") {
    for (int parts = 1; parts <= 6; ++parts) {
        for (const auto& p : odd_partitions(range_1_to(6), parts)) {
            REQUIRE(static_cast<int>(p.blocks.size()) == parts);
            std::set<Vertex> all;
            for (const auto& b : p.blocks) {
                REQUIRE(b.size() % 2 == 1);
                for (Vertex v : b) REQUIRE(all.insert(v).second);
            }
            REQUIRE(all.size() == 6);
        }
    }
}

TEST_CASE("trees of triangles: base cases") {
    CHECK(trees_of_triangles(1) == std::vector<EdgeMask>{0});

    auto t3 = trees_of_triangles(3);
    REQUIRE(t3.size() == 1);
    CHECK(Graph(3, t3[0]).edge_list() ==
          std::vector<std::pair<Vertex, Vertex>>{{1, 2}, {1, 3}, {2, 3}});

    CHECK_THROWS_AS(trees_of_triangles(4), std::domain_error);
}

TEST_CASE("trees of triangles on [5]: 9 graphs with 6 edges each") {
    auto t5 = trees_of_triangles(5);
    REQUIRE(t5.size() == 9);
    for (EdgeMask m : t5) CHECK(popcount64(m) == 6);
    CHECK(std::set<EdgeMask>(t5.begin(), t5.end()).size() == 9);
}

TEST_CASE("enumerated counts match the closed form (2k-3)!!^2 up to 9 vertices") {
    for (int size : {1, 3, 5, 7, 9}) {
        auto trees = trees_of_triangles(size);
        CHECK(BigInt(trees.size()) == count_trees_of_triangles(size));
        CHECK(std::set<EdgeMask>(trees.begin(), trees.end()).size() == trees.size());
    }
    CHECK(count_trees_of_triangles(1) == 1);
    CHECK(count_trees_of_triangles(5) == 9);
    CHECK(count_trees_of_triangles(7) == 225);
}

TEST_CASE("every tree of triangles is factor critical with 3k-3 edges") {
    for (int size : {1, 3, 5, 7}) {
        int k = (size + 1) / 2;
        for (EdgeMask m : trees_of_triangles(size)) {
            REQUIRE(popcount64(m) == 3 * k - 3);
            REQUIRE(is_factor_critical(Graph(size, m)));
        }
    }
}

TEST_CASE("trees on a sub-vertex-set leave the other host vertices isolated") {
    auto trees = trees_of_triangles(7, {2, 4, 5, 6, 7});
    REQUIRE(trees.size() == 9);
    for (EdgeMask m : trees) {
        Graph g(7, m);
        CHECK(g.neighbors(1).empty());
        CHECK(g.neighbors(3).empty());
        // Factor critical as a graph on its own five vertices: removing
        // any of them leaves a perfect matching on the other four.
        for (Vertex v : {2, 4, 5, 6, 7}) REQUIRE(nu(g.without_vertex(v)) == 2);
    }
}

TEST_CASE("forests of triangles") {
    SECTION("all singleton blocks give the empty graph") {
        OddPartition p{{{1}, {2}, {3}}};
        CHECK(forests_of_triangles(3, p) == std::vector<EdgeMask>{0});
    }
    SECTION("triangle block plus isolated vertex") {
        OddPartition p{{{1, 2, 3}, {4}}};
        auto f = forests_of_triangles(4, p);
        REQUIRE(f.size() == 1);
        CHECK(Graph(4, f[0]).edge_list() ==
              std::vector<std::pair<Vertex, Vertex>>{{1, 2}, {1, 3}, {2, 3}});
    }
    SECTION("single block [5] reproduces the trees") {
        OddPartition p{{{1, 2, 3, 4, 5}}};
        CHECK(forests_of_triangles(5, p) == trees_of_triangles(5));
    }
    SECTION("counts multiply across blocks") {
        OddPartition p{{{1, 2, 3, 4, 5}, {6, 7, 8}}};
        CHECK(forests_of_triangles(8, p).size() == 9);
    }
}

TEST_CASE("forests for partitions of [n-1] into n-2k+1 blocks have 3k-3 edges") {
    for (int n : {4, 5, 6, 7}) {
        for (int k = 2; 3 * k - 3 <= n * (n - 1) / 2 && n - 2 * k + 1 >= 1; ++k) {
            for (const auto& tau : odd_partitions(range_1_to(n - 1), n - 2 * k + 1))
                for (EdgeMask m : forests_of_triangles(n, tau))
                    REQUIRE(popcount64(m) == 3 * k - 3);
        }
    }
}
