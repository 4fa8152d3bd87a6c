#ifndef MATCHPLEX_TRIANGLE_TREES_HPP
#define MATCHPLEX_TRIANGLE_TREES_HPP

#include <algorithm>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "matchplex/graph.hpp"

// Trees and forests of triangles.  A tree of triangles on an ordered
// vertex set V is either a single vertex or: the edge v1v2, a unique
// apex v_m adjacent to both v1 and v2, and -- after removing those
// three edges -- three connected components containing v1, v2, v_m
// respectively, each again a tree of triangles.  These graphs are the
// critical cells of the Morse matchings built in morse_builders.hpp.

namespace matchplex {

using BigInt = boost::multiprecision::cpp_int;

/// n!! for odd n >= -1, with (-1)!! = 1.
inline BigInt double_factorial(long long n) {
    if (n < -1 || n % 2 == 0) throw std::domain_error("double_factorial: need odd n >= -1");
    BigInt out = 1;
    for (long long j = 3; j <= n; j += 2) out *= j;
    return out;
}

inline BigInt binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    BigInt out = 1;
    for (long long i = 1; i <= k; ++i) {
        out *= n - k + i;
        out /= i;
    }
    return out;
}

/// Number of trees of triangles on 2k-1 vertices: (2k-3)!!^2.
inline BigInt count_trees_of_triangles(int size) {
    if (size < 1 || size % 2 == 0)
        throw std::domain_error("count_trees_of_triangles: vertex count must be odd");
    BigInt df = double_factorial(size - 2);
    return df * df;
}

namespace detail {

inline EdgeMask edge_bit(Vertex u, Vertex v, int host_n) {
    if (u > v) std::swap(u, v);
    return EdgeMask{1} << edge_index(u, v, host_n);
}

/// Subsets of `pool` with even cardinality.
inline std::vector<std::vector<Vertex>> even_subsets(const std::vector<Vertex>& pool) {
    std::vector<std::vector<Vertex>> out;
    int m = static_cast<int>(pool.size());
    for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
        if (popcount64(bits) % 2 != 0) continue;
        std::vector<Vertex> sub;
        for (int i = 0; i < m; ++i)
            if ((bits >> i) & 1u) sub.push_back(pool[i]);
        out.push_back(std::move(sub));
    }
    return out;
}

inline void trees_rec(int host_n, const std::vector<Vertex>& V, std::vector<EdgeMask>& out) {
    if (V.size() == 1) {
        out.push_back(0);
        return;
    }
    Vertex v1 = V[0], v2 = V[1];
    std::vector<Vertex> others(V.begin() + 2, V.end());
    for (std::size_t mi = 0; mi < others.size(); ++mi) {
        Vertex apex = others[mi];
        EdgeMask base = edge_bit(v1, v2, host_n) | edge_bit(v1, apex, host_n) |
                        edge_bit(v2, apex, host_n);
        std::vector<Vertex> rest;
        for (std::size_t j = 0; j < others.size(); ++j)
            if (j != mi) rest.push_back(others[j]);

        // Ordered splits (I, J, L) of `rest` into even-size parts; the
        // components are I+{v1}, J+{v2}, L+{apex}.
        for (const auto& I : even_subsets(rest)) {
            std::vector<Vertex> rem;
            std::set_difference(rest.begin(), rest.end(), I.begin(), I.end(),
                                std::back_inserter(rem));
            for (const auto& J : even_subsets(rem)) {
                std::vector<Vertex> L;
                std::set_difference(rem.begin(), rem.end(), J.begin(), J.end(),
                                    std::back_inserter(L));

                auto with_front = [](Vertex v, const std::vector<Vertex>& tail) {
                    std::vector<Vertex> comp{v};
                    comp.insert(comp.end(), tail.begin(), tail.end());
                    std::sort(comp.begin(), comp.end());
                    return comp;
                };
                std::vector<EdgeMask> t1, t2, t3;
                trees_rec(host_n, with_front(v1, I), t1);
                trees_rec(host_n, with_front(v2, J), t2);
                trees_rec(host_n, with_front(apex, L), t3);
                for (EdgeMask a : t1)
                    for (EdgeMask b : t2)
                        for (EdgeMask c : t3) out.push_back(base | a | b | c);
            }
        }
    }
}

inline void validate_vertex_set(int host_n, const std::vector<Vertex>& V) {
    if (V.empty()) throw std::domain_error("trees_of_triangles: empty vertex set");
    for (std::size_t i = 0; i < V.size(); ++i) {
        if (V[i] < 1 || V[i] > host_n)
            throw std::domain_error("trees_of_triangles: vertex out of host range");
        if (i > 0 && V[i] <= V[i - 1])
            throw std::domain_error("trees_of_triangles: vertex set must be strictly increasing");
    }
}

}  // namespace detail

/// All trees of triangles on the vertex set V, as edge masks of a host
/// graph on [host_n].  Exactly (|V|-2)!!^2 graphs, each with
/// 3(|V|+1)/2 - 3 edges.
inline std::vector<EdgeMask> trees_of_triangles(int host_n, const std::vector<Vertex>& V) {
    detail::validate_vertex_set(host_n, V);
    if (V.size() % 2 == 0) throw std::domain_error("trees_of_triangles: |V| must be odd");
    std::vector<EdgeMask> out;
    detail::trees_rec(host_n, V, out);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<EdgeMask> trees_of_triangles(int n) {
    std::vector<Vertex> V(n);
    for (int i = 0; i < n; ++i) V[i] = i + 1;
    return trees_of_triangles(n, V);
}

struct OddPartition {
    std::vector<std::vector<Vertex>> blocks;
};

/// All graphs whose restriction to each block is a tree of triangles
/// and which have no cross-block edges.
inline std::vector<EdgeMask> forests_of_triangles(int host_n, const OddPartition& partition) {
    std::vector<std::vector<EdgeMask>> per_block;
    for (const auto& block : partition.blocks) {
        if (block.size() % 2 == 0)
            throw std::domain_error("forests_of_triangles: blocks must have odd size");
        per_block.push_back(trees_of_triangles(host_n, block));
    }
    std::vector<EdgeMask> out{0};
    for (const auto& options : per_block) {
        std::vector<EdgeMask> next;
        next.reserve(out.size() * options.size());
        for (EdgeMask acc : out)
            for (EdgeMask t : options) next.push_back(acc | t);
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Unordered partitions of `ground` into exactly `parts` blocks of odd
/// size.  Incompatible parity yields an empty list.
inline std::vector<OddPartition> odd_partitions(std::vector<Vertex> ground, int parts) {
    std::sort(ground.begin(), ground.end());
    std::vector<OddPartition> out;
    if (parts < 0) return out;
    if (ground.empty()) {
        if (parts == 0) out.push_back(OddPartition{});
        return out;
    }
    if (parts < 1 || static_cast<int>(ground.size()) < parts) return out;
    if ((static_cast<int>(ground.size()) - parts) % 2 != 0) return out;

    // The block of the smallest element is {first} + an even subset of
    // the rest; recurse on what remains.
    Vertex first = ground[0];
    std::vector<Vertex> rest(ground.begin() + 1, ground.end());
    for (const auto& sub : detail::even_subsets(rest)) {
        std::vector<Vertex> block{first};
        block.insert(block.end(), sub.begin(), sub.end());
        std::vector<Vertex> remaining;
        std::set_difference(rest.begin(), rest.end(), sub.begin(), sub.end(),
                            std::back_inserter(remaining));
        for (auto& tail : odd_partitions(remaining, parts - 1)) {
            OddPartition p;
            p.blocks.push_back(block);
            for (auto& b : tail.blocks) p.blocks.push_back(std::move(b));
            out.push_back(std::move(p));
        }
    }
    return out;
}

inline std::vector<Vertex> range_1_to(int n) {
    std::vector<Vertex> v(n);
    for (int i = 0; i < n; ++i) v[i] = i + 1;
    return v;
}

}  // namespace matchplex

#endif
