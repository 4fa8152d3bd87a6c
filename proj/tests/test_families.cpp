#include <catch2/catch_amalgamated.hpp>
#include <random>
#include <set>

#include "matchplex/bruteforce.hpp"
#include "matchplex/families.hpp"

using namespace matchplex;

namespace {

// Naive membership scan over every mask of the ground set; the pruned
// enumeration must produce exactly this list.
std::vector<EdgeMask> naive_faces(const FamilySpec& spec) {
    std::vector<EdgeMask> out;
    for (EdgeMask mask = 0; mask < (EdgeMask{1} << spec.ground_bits()); ++mask)
        if (contains_mask(spec, mask)) out.push_back(mask);
    std::sort(out.begin(), out.end(), [](EdgeMask a, EdgeMask b) {
        int pa = popcount64(a), pb = popcount64(b);
        return pa != pb ? pa < pb : a < b;
    });
    return out;
}

EdgeMask relabel_general(EdgeMask mask, int n, const std::vector<Vertex>& perm) {
    EdgeMask out = 0;
    Graph g(n, mask);
    for (auto [u, v] : g.edge_list()) {
        Vertex a = perm[u - 1], b = perm[v - 1];
        if (a > b) std::swap(a, b);
        out |= EdgeMask{1} << edge_index(a, b, n);
    }
    return out;
}

EdgeMask relabel_bipartite(EdgeMask mask, int r, int s, const std::vector<Vertex>& pl,
                           const std::vector<Vertex>& pr) {
    EdgeMask out = 0;
    BipartiteGraph b(r, s, mask);
    for (auto [u, v] : b.edge_list())
        out |= EdgeMask{1} << bip_edge_index(pl[u - 1], pr[v - 1], r, s);
    return out;
}

}  // namespace

TEST_CASE("contains on the spec's examples") {
    CHECK(contains(FamilySpec::nm(5, 2), Graph(5).with_edge(1, 2)));
    CHECK(!contains(FamilySpec::npm(4), Graph(4).with_edge(1, 2).with_edge(3, 4)));

    // The triangle is the unique factor-critical graph on [3]: brute force.
    FamilySpec fc3 = FamilySpec::fc(3);
    int members = 0;
    for (EdgeMask m = 0; m < 8; ++m) {
        bool in = contains(fc3, Graph(3, m));
        CHECK(in == bruteforce::is_factor_critical(Graph(3, m)));
        if (in) {
            ++members;
            CHECK(m == 0b111);
        }
    }
    CHECK(members == 1);
}

TEST_CASE("contains rejects ground-set mismatches") {
    CHECK_THROWS_AS(contains(FamilySpec::nm(5, 2), Graph(4)), std::domain_error);
    CHECK_THROWS_AS(contains(FamilySpec::bnm(2, 2, 2), BipartiteGraph(2, 3)), std::domain_error);
    CHECK_THROWS_AS(contains(FamilySpec::nm(5, 2), BipartiteGraph(2, 3)), std::domain_error);
}

TEST_CASE("family parameter validation") {
    CHECK_THROWS_AS(FamilySpec::npm(5), std::domain_error);
    CHECK_THROWS_AS(FamilySpec::fc(4), std::domain_error);
    CHECK_THROWS_AS(FamilySpec::bfc(2, 2), std::domain_error);
    CHECK_THROWS_AS(FamilySpec::nbfc(3, 2), std::domain_error);
    CHECK_THROWS_AS(FamilySpec::nm(0, 1), std::domain_error);
}

TEST_CASE("enumerate_faces: degenerate and tiny families") {
    CHECK(enumerate_faces(FamilySpec::nm(3, 1)) == std::vector<EdgeMask>{0});

    auto bfc12 = enumerate_faces(FamilySpec::bfc(1, 2));
    REQUIRE(bfc12.size() == 1);
    CHECK(bfc12[0] == 0b11);  // both edges 1-1bar, 1-2bar
}

TEST_CASE("enumerate_faces matches the naive membership scan") {
    for (const FamilySpec& spec :
         {FamilySpec::nm(4, 2), FamilySpec::nm(5, 2), FamilySpec::npm(4), FamilySpec::nfc(5),
          FamilySpec::fc(5), FamilySpec::bnm(2, 3, 2), FamilySpec::bnm(3, 3, 2),
          FamilySpec::bfc(2, 3), FamilySpec::nbfc(2, 3)}) {
        CAPTURE(spec.describe());
        REQUIRE(enumerate_faces(spec) == naive_faces(spec));
    }
}

TEST_CASE("enumerate_faces streams in increasing edge count with ties by bitset value") {
    auto faces = enumerate_faces(FamilySpec::npm(4));
    for (std::size_t i = 1; i < faces.size(); ++i) {
        int pa = popcount64(faces[i - 1]), pb = popcount64(faces[i]);
        REQUIRE((pa < pb || (pa == pb && faces[i - 1] < faces[i])));
    }
}

TEST_CASE("NPM(4) census cross-checked by brute force over all 64 graphs") {
    int with_pm = 0;
    for (EdgeMask m = 0; m < 64; ++m)
        if (bruteforce::max_matching_size(Graph(4, m)) == 2) ++with_pm;
    auto faces = enumerate_faces(FamilySpec::npm(4));
    CHECK(faces.size() == 64 - with_pm);
}

TEST_CASE("monotonicity: every member stays a member after any edge deletion") {
    for (const FamilySpec& spec :
         {FamilySpec::nm(5, 2), FamilySpec::nm(6, 3), FamilySpec::npm(6), FamilySpec::nfc(5),
          FamilySpec::bnm(3, 3, 2), FamilySpec::bnm(4, 4, 3), FamilySpec::nbfc(2, 3),
          FamilySpec::nbfc(2, 4)}) {
        CAPTURE(spec.describe());
        auto faces = enumerate_faces(spec);
        std::set<EdgeMask> members(faces.begin(), faces.end());
        for (EdgeMask mask : faces) {
            EdgeMask rest = mask;
            while (rest) {
                EdgeMask bit = rest & (~rest + 1);
                REQUIRE(members.count(mask ^ bit) == 1);
                rest ^= bit;
            }
        }
    }
}

TEST_CASE("membership is invariant under vertex relabeling") {
    std::mt19937 rng(99);
    for (const FamilySpec& spec : {FamilySpec::nm(5, 2), FamilySpec::npm(6), FamilySpec::nfc(5),
                                   FamilySpec::fc(5)}) {
        CAPTURE(spec.describe());
        std::vector<Vertex> perm = range_1_to(spec.n);
        for (int trial = 0; trial < 20; ++trial) {
            std::shuffle(perm.begin(), perm.end(), rng);
            for (int inner = 0; inner < 50; ++inner) {
                EdgeMask mask = rng() & ((EdgeMask{1} << spec.ground_bits()) - 1);
                REQUIRE(contains_mask(spec, mask) ==
                        contains_mask(spec, relabel_general(mask, spec.n, perm)));
            }
        }
    }
}

TEST_CASE("bipartite membership is invariant under relabeling within each part") {
    std::mt19937 rng(100);
    for (const FamilySpec& spec :
         {FamilySpec::bnm(3, 3, 2), FamilySpec::bfc(2, 4), FamilySpec::nbfc(2, 3)}) {
        CAPTURE(spec.describe());
        std::vector<Vertex> pl = range_1_to(spec.r), pr = range_1_to(spec.s);
        for (int trial = 0; trial < 20; ++trial) {
            std::shuffle(pl.begin(), pl.end(), rng);
            std::shuffle(pr.begin(), pr.end(), rng);
            for (int inner = 0; inner < 50; ++inner) {
                EdgeMask mask = rng() & ((EdgeMask{1} << spec.ground_bits()) - 1);
                REQUIRE(contains_mask(spec, mask) ==
                        contains_mask(spec, relabel_bipartite(mask, spec.r, spec.s, pl, pr)));
            }
        }
    }
}

TEST_CASE("signed Euler sums match the closed-form predictions") {
    CHECK(signed_euler_sum(FamilySpec::npm(4)) == -1);
    CHECK(signed_euler_sum(FamilySpec::npm(6)) == 9);
    CHECK(signed_euler_sum(FamilySpec::nm(5, 2)) == -4);
    CHECK(signed_euler_sum(FamilySpec::bnm(2, 2, 2)) == 1);
    CHECK(signed_euler_sum(FamilySpec::bnm(3, 3, 2)) == 4);
    CHECK(signed_euler_sum(FamilySpec::bnm(4, 4, 3)) == 9);
}

TEST_CASE("signed Euler sum equals the prediction for all n <= 7, k <= 3 and r,s <= 4") {
    for (int n = 2; n <= 7; ++n)
        for (int k = 1; k <= 3; ++k) {
            FamilySpec spec = FamilySpec::nm(n, k);
            CAPTURE(n, k);
            REQUIRE(BigInt(signed_euler_sum(spec)) == predicted_signed_euler_sum(spec));
        }
    for (int r = 1; r <= 4; ++r)
        for (int s = 1; s <= 4; ++s)
            for (int k = 1; k <= 3; ++k) {
                FamilySpec spec = FamilySpec::bnm(r, s, k);
                CAPTURE(r, s, k);
                REQUIRE(BigInt(signed_euler_sum(spec)) == predicted_signed_euler_sum(spec));
            }
}

TEST_CASE("predicted sphere counts") {
    auto npm6 = predicted_spheres(FamilySpec::npm(6));
    CHECK(npm6.dimension == 5);
    CHECK(npm6.count == 9);

    auto bnm332 = predicted_spheres(FamilySpec::bnm(3, 3, 2));
    CHECK(bnm332.dimension == 1);
    CHECK(bnm332.count == 4);

    // Evaluate the partition sum by hand: 16 odd partitions of [6] into
    // two blocks, 6 of type 1+5 contributing 9 and 10 of type 3+3
    // contributing 1.
    auto nm73 = predicted_spheres(FamilySpec::nm(7, 3));
    CHECK(nm73.dimension == 5);
    CHECK(nm73.count == 64);

    auto fc5 = predicted_spheres(FamilySpec::fc(5));
    CHECK(fc5.dimension == 5);
    CHECK(fc5.count == 9);

    auto nfc5 = predicted_spheres(FamilySpec::nfc(5));
    CHECK(nfc5.dimension == 4);
    CHECK(nfc5.count == 9);

    auto bfc24 = predicted_spheres(FamilySpec::bfc(2, 4));
    CHECK(bfc24.dimension == 3);
    CHECK(bfc24.count == 3);

    auto nbfc23 = predicted_spheres(FamilySpec::nbfc(2, 3));
    CHECK(nbfc23.dimension == 2);
    CHECK(nbfc23.count == 1);

    // NPM(n) agrees with NM(n, n/2): the partition sum collapses to the
    // single block [n-1].
    for (int n : {2, 4, 6, 8}) {
        auto a = predicted_spheres(FamilySpec::npm(n));
        auto b = predicted_spheres(FamilySpec::nm(n, n / 2));
        CHECK(a.dimension == b.dimension);
        CHECK(a.count == b.count);
    }

    // Degenerate k = 1: the complex is {empty face} = S^{-1}.
    auto nm41 = predicted_spheres(FamilySpec::nm(4, 1));
    CHECK(nm41.dimension == -1);
    CHECK(nm41.count == 1);

    CHECK_THROWS_AS(predicted_spheres(FamilySpec::full_simplex(3)), std::domain_error);
}

TEST_CASE("generic families: full simplex works, non-monotone predicates are rejected") {
    CHECK(enumerate_faces(FamilySpec::full_simplex(3)).size() == 8);

    FamilySpec bad = FamilySpec::generic_general(
        4, [](EdgeMask m) { return popcount64(m) == 2; }, "exactly-two-edges");
    CHECK_THROWS_AS(enumerate_faces(bad), std::domain_error);
}

TEST_CASE("resource caps") {
    CHECK_THROWS_AS(enumerate_faces(FamilySpec::nm(8, 2)), resource_error);

    EnumerationOptions tight;
    tight.max_faces = 10;
    CHECK_THROWS_AS(enumerate_faces(FamilySpec::full_simplex(4), tight), resource_error);
}
