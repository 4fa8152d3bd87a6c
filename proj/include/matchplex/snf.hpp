#ifndef MATCHPLEX_SNF_HPP
#define MATCHPLEX_SNF_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace matchplex {

using BigInt = boost::multiprecision::cpp_int;

struct SparseIntMatrix {
    int rows = 0;
    int cols = 0;
    // One entry per (row, col); duplicates accumulate.
    std::vector<std::pair<std::pair<int, int>, BigInt>> entries;

    SparseIntMatrix() = default;
    SparseIntMatrix(int rows_, int cols_) : rows(rows_), cols(cols_) {}

    void add(int r, int c, BigInt v) {
        if (r < 0 || r >= rows || c < 0 || c >= cols)
            throw std::out_of_range("SparseIntMatrix::add: index out of range");
        if (v != 0) entries.push_back({{r, c}, std::move(v)});
    }
    std::size_t nnz() const { return entries.size(); }
};

struct SnfResult {
    int rank = 0;
    /// The nonzero diagonal of the Smith form: d_1 | d_2 | ... | d_rank.
    std::vector<BigInt> invariant_factors;

    std::vector<BigInt> torsion() const {
        std::vector<BigInt> out;
        for (const BigInt& d : invariant_factors)
            if (d > 1) out.push_back(d);
        return out;
    }
};

/// Smith normal form by fraction-free elimination over arbitrary-size
/// integers.  Pivots prefer low-degree columns and +-1 entries; where a
/// pivot fails to divide its row or column, Euclidean reduction steps
/// shrink it until it does.  The collected diagonal is normalized into
/// a divisibility chain at the end (gcd/lcm exchanges on a diagonal
/// matrix realize its Smith form).
inline SnfResult smith_normal_form(const SparseIntMatrix& mat) {
    std::vector<std::map<int, BigInt>> row(mat.rows);
    std::vector<std::set<int>> col_rows(mat.cols);
    for (const auto& [rc, v] : mat.entries) {
        auto [r, c] = rc;
        BigInt& cell = row[r][c];
        cell += v;
        if (cell == 0) row[r].erase(c);
    }
    for (int r = 0; r < mat.rows; ++r)
        for (const auto& [c, v] : row[r]) col_rows[c].insert(r);

    auto subtract_row = [&](int target, int source, const BigInt& q) {
        // row[target] -= q * row[source]
        for (const auto& [c, v] : row[source]) {
            BigInt& cell = row[target][c];
            bool was_zero = (cell == 0);
            cell -= q * v;
            if (cell == 0) {
                row[target].erase(c);
                col_rows[c].erase(target);
            } else if (was_zero) {
                col_rows[c].insert(target);
            }
        }
    };

    std::vector<BigInt> diagonal;
    std::vector<bool> row_done(mat.rows, false), col_done(mat.cols, false);

    for (;;) {
        // Pivot column: lowest degree among active columns; pivot row
        // within it: unit entries first, then sparsest row.
        int pj = -1;
        std::size_t best_deg = 0;
        for (int c = 0; c < mat.cols; ++c) {
            if (col_done[c] || col_rows[c].empty()) continue;
            if (pj == -1 || col_rows[c].size() < best_deg) {
                pj = c;
                best_deg = col_rows[c].size();
            }
        }
        if (pj == -1) break;
        int pi = -1;
        std::size_t best_row_key = 0;
        for (int r : col_rows[pj]) {
            bool unit = boost::multiprecision::abs(row[r].at(pj)) == 1;
            std::size_t key = (unit ? 0 : (std::size_t{1} << 40)) + row[r].size();
            if (pi == -1 || key < best_row_key) {
                pi = r;
                best_row_key = key;
            }
        }

        // Reduce until the pivot's row and column are otherwise empty.
        for (;;) {
            bool moved = false;
            // Column phase: eliminate other rows; a nonzero remainder
            // becomes the new, strictly smaller pivot.
            for (;;) {
                int other = -1;
                for (int r : col_rows[pj])
                    if (r != pi) {
                        other = r;
                        break;
                    }
                if (other == -1) break;
                BigInt q = row[other].at(pj) / row[pi].at(pj);
                if (q != 0) subtract_row(other, pi, q);
                if (row[other].count(pj)) {
                    pi = other;
                    moved = true;
                }
            }
            // Row phase: the pivot column is clear, so a column
            // operation touches only the pivot row.
            bool row_clean = true;
            for (auto it = row[pi].begin(); it != row[pi].end();) {
                int c = it->first;
                if (c == pj) {
                    ++it;
                    continue;
                }
                BigInt q = it->second / row[pi].at(pj);
                BigInt rem = it->second - q * row[pi].at(pj);
                if (rem == 0) {
                    col_rows[c].erase(pi);
                    it = row[pi].erase(it);
                } else {
                    it->second = rem;
                    // Pivot moves to the smaller remainder; its column
                    // may hold other rows, so re-run the column phase.
                    pj = c;
                    row_clean = false;
                    moved = true;
                    break;
                }
            }
            if (row_clean && !moved) break;
        }

        diagonal.push_back(boost::multiprecision::abs(row[pi].at(pj)));
        row[pi].clear();
        col_rows[pj].clear();
        row_done[pi] = true;
        col_done[pj] = true;
    }

    // Normalize into a divisibility chain.
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < diagonal.size(); ++i)
            for (std::size_t j = i + 1; j < diagonal.size(); ++j) {
                if (diagonal[j] % diagonal[i] == 0) continue;
                BigInt g = boost::multiprecision::gcd(diagonal[i], diagonal[j]);
                BigInt l = diagonal[i] / g * diagonal[j];
                diagonal[i] = g;
                diagonal[j] = l;
                changed = true;
            }
    }
    std::sort(diagonal.begin(), diagonal.end());

    SnfResult out;
    out.rank = static_cast<int>(diagonal.size());
    out.invariant_factors = std::move(diagonal);
    return out;
}

namespace detail {

inline std::int64_t mod_pow(std::int64_t base, std::int64_t exp, std::int64_t p) {
    std::int64_t acc = 1 % p;
    base %= p;
    if (base < 0) base += p;
    while (exp > 0) {
        if (exp & 1) acc = static_cast<std::int64_t>(__int128{acc} * base % p);
        base = static_cast<std::int64_t>(__int128{base} * base % p);
        exp >>= 1;
    }
    return acc;
}

}  // namespace detail

/// Rank of the matrix over F_p, p prime.
inline int rank_mod_p(const SparseIntMatrix& mat, std::int64_t p) {
    std::vector<std::map<int, std::int64_t>> row(mat.rows);
    std::vector<std::set<int>> col_rows(mat.cols);
    for (const auto& [rc, v] : mat.entries) {
        auto [r, c] = rc;
        std::int64_t vp = static_cast<std::int64_t>(v % p);
        if (vp < 0) vp += p;
        std::int64_t& cell = row[r][c];
        cell = (cell + vp) % p;
        if (cell == 0) row[r].erase(c);
    }
    for (int r = 0; r < mat.rows; ++r)
        for (const auto& [c, v] : row[r]) col_rows[c].insert(r);

    int rank = 0;
    for (;;) {
        int pj = -1;
        std::size_t best = 0;
        for (int c = 0; c < mat.cols; ++c) {
            if (col_rows[c].empty()) continue;
            if (pj == -1 || col_rows[c].size() < best) {
                pj = c;
                best = col_rows[c].size();
            }
        }
        if (pj == -1) break;
        int pi = -1;
        std::size_t best_row = 0;
        for (int r : col_rows[pj])
            if (pi == -1 || row[r].size() < best_row) {
                pi = r;
                best_row = row[r].size();
            }
        std::int64_t inv = detail::mod_pow(row[pi].at(pj), p - 2, p);
        std::vector<int> targets(col_rows[pj].begin(), col_rows[pj].end());
        for (int r : targets) {
            if (r == pi) continue;
            std::int64_t factor = static_cast<std::int64_t>(__int128{row[r].at(pj)} * inv % p);
            for (const auto& [c, v] : row[pi]) {
                std::int64_t& cell = row[r][c];
                bool was_zero = (cell == 0);
                cell = static_cast<std::int64_t>(((__int128{cell} - __int128{factor} * v) % p + p) % p);
                if (cell == 0) {
                    row[r].erase(c);
                    col_rows[c].erase(r);
                } else if (was_zero) {
                    col_rows[c].insert(r);
                }
            }
        }
        for (const auto& [c, v] : row[pi]) col_rows[c].erase(pi);
        row[pi].clear();
        ++rank;
    }
    return rank;
}

}  // namespace matchplex

#endif
