#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "matchplex/snf.hpp"

using namespace matchplex;

namespace {

// Dense textbook Smith normal form over BigInt, written independently
// of the sparse implementation: repeatedly move the smallest nonzero to
// the corner, reduce its row and column by Euclid, and recurse.
std::vector<BigInt> dense_snf(std::vector<std::vector<BigInt>> a) {
    std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    std::vector<BigInt> diag;
    std::size_t t = 0;
    while (t < rows && t < cols) {
        std::size_t pi = t, pj = t;
        bool found = false;
        BigInt best = 0;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (a[i][j] != 0 &&
                    (!found || boost::multiprecision::abs(a[i][j]) < best)) {
                    best = boost::multiprecision::abs(a[i][j]);
                    pi = i;
                    pj = j;
                    found = true;
                }
        if (!found) break;
        std::swap(a[pi], a[t]);
        for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][pj], a[i][t]);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < rows; ++i)
                if (a[i][t] != 0) {
                    BigInt q = a[i][t] / a[t][t];
                    for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
                    if (a[i][t] != 0) {
                        std::swap(a[i], a[t]);
                        clean = false;
                    }
                }
            for (std::size_t j = t + 1; j < cols; ++j)
                if (a[t][j] != 0) {
                    BigInt q = a[t][j] / a[t][t];
                    for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
                    if (a[t][j] != 0) {
                        for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][j], a[i][t]);
                        clean = false;
                    }
                }
        }
        diag.push_back(boost::multiprecision::abs(a[t][t]));
        ++t;
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < diag.size(); ++i)
            for (std::size_t j = i + 1; j < diag.size(); ++j)
                if (diag[j] % diag[i] != 0) {
                    BigInt g = boost::multiprecision::gcd(diag[i], diag[j]);
                    BigInt l = diag[i] / g * diag[j];
                    diag[i] = g;
                    diag[j] = l;
                    changed = true;
                }
    }
    std::sort(diag.begin(), diag.end());
    return diag;
}

SparseIntMatrix to_sparse(const std::vector<std::vector<BigInt>>& a) {
    SparseIntMatrix m(static_cast<int>(a.size()), a.empty() ? 0 : static_cast<int>(a[0].size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j)
            if (a[i][j] != 0) m.add(static_cast<int>(i), static_cast<int>(j), a[i][j]);
    return m;
}

}  // namespace

TEST_CASE("smith normal form of tiny known matrices") {
    SECTION("2x2 identity") {
        SparseIntMatrix m(2, 2);
        m.add(0, 0, 1);
        m.add(1, 1, 1);
        SnfResult snf = smith_normal_form(m);
        CHECK(snf.rank == 2);
        CHECK(snf.invariant_factors == std::vector<BigInt>{1, 1});
        CHECK(snf.torsion().empty());
    }
    SECTION("the 1x1 matrix (2)") {
        SparseIntMatrix m(1, 1);
        m.add(0, 0, 2);
        SnfResult snf = smith_normal_form(m);
        CHECK(snf.rank == 1);
        CHECK(snf.invariant_factors == std::vector<BigInt>{2});
        CHECK(snf.torsion() == std::vector<BigInt>{2});
    }
    SECTION("boundary of the triangle cycle: rank 2, invariants (1,1)") {
        // Vertex-by-edge incidence of the 3-cycle with signs.
        SparseIntMatrix m(3, 3);
        m.add(0, 0, -1); m.add(1, 0, 1);
        m.add(1, 1, -1); m.add(2, 1, 1);
        m.add(0, 2, 1);  m.add(2, 2, -1);
        SnfResult snf = smith_normal_form(m);
        CHECK(snf.rank == 2);
        CHECK(snf.invariant_factors == std::vector<BigInt>{1, 1});
    }
    SECTION("zero and empty matrices") {
        CHECK(smith_normal_form(SparseIntMatrix(3, 4)).rank == 0);
        CHECK(smith_normal_form(SparseIntMatrix(0, 0)).rank == 0);
    }
    SECTION("a matrix with torsion 2 and 6") {
        // diag(2, 6) hidden by row/column mixing.
        SparseIntMatrix m(2, 2);
        m.add(0, 0, 2); m.add(0, 1, 2);
        m.add(1, 0, 2); m.add(1, 1, 8);
        // det = 12, gcd of entries = 2 -> invariants (2, 6).
        SnfResult snf = smith_normal_form(m);
        CHECK(snf.invariant_factors == std::vector<BigInt>{2, 6});
    }
}

TEST_CASE("sparse SNF agrees with an independent dense SNF on random matrices") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 120; ++trial) {
        int rows = 1 + static_cast<int>(rng() % 7);
        int cols = 1 + static_cast<int>(rng() % 7);
        std::vector<std::vector<BigInt>> a(rows, std::vector<BigInt>(cols, 0));
        for (auto& row : a)
            for (auto& cell : row)
                if (rng() % 100 < 60) cell = static_cast<int>(rng() % 9) - 4;
        SnfResult sparse = smith_normal_form(to_sparse(a));
        REQUIRE(sparse.invariant_factors == dense_snf(a));
    }
}

TEST_CASE("SNF recovers planted invariant factors after unimodular mixing") {
    std::mt19937 rng(555);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<BigInt> planted{1, 2, 6};
        int n = 4;
        std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n, 0));
        for (std::size_t i = 0; i < planted.size(); ++i) a[i][i] = planted[i];
        // Random integer row/column shears keep the Smith form intact.
        for (int step = 0; step < 25; ++step) {
            int i = static_cast<int>(rng() % n), j = static_cast<int>(rng() % n);
            if (i == j) continue;
            int c = static_cast<int>(rng() % 5) - 2;
            if (rng() % 2 == 0)
                for (int l = 0; l < n; ++l) a[i][l] += c * a[j][l];
            else
                for (int l = 0; l < n; ++l) a[l][i] += c * a[l][j];
        }
        SnfResult snf = smith_normal_form(to_sparse(a));
        REQUIRE(snf.rank == 3);
        REQUIRE(snf.invariant_factors == planted);
    }
}

TEST_CASE("rank over F_p matches the integer rank on random matrices") {
    std::mt19937 rng(31337);
    for (int trial = 0; trial < 80; ++trial) {
        int rows = 1 + static_cast<int>(rng() % 8);
        int cols = 1 + static_cast<int>(rng() % 8);
        SparseIntMatrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                if (rng() % 100 < 50) m.add(i, j, static_cast<int>(rng() % 7) - 3);
        int exact = smith_normal_form(m).rank;
        REQUIRE(rank_mod_p(m, 1048583) == exact);
        REQUIRE(rank_mod_p(m, 1048589) == exact);
    }
}

TEST_CASE("the rank-check primes are prime") {
    for (std::int64_t p : {1048583LL, 1048589LL, 1048601LL}) {
        REQUIRE(p > (1 << 20));
        for (std::int64_t d = 2; d * d <= p; ++d) REQUIRE(p % d != 0);
    }
}
