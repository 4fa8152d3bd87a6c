#ifndef MATCHPLEX_BRUTEFORCE_HPP
#define MATCHPLEX_BRUTEFORCE_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "matchplex/graph.hpp"

// Brute-force reference implementations used to cross-check the real
// algorithms.  Everything here works by enumerating edge subsets that
// are matchings (or vertex subsets that are covers); nothing in this
// file calls the augmenting-path code, so agreement between the two is
// meaningful evidence.

namespace matchplex::bruteforce {

namespace detail {

template <typename Visit>
void enumerate_matchings_rec(const std::vector<std::pair<Vertex, Vertex>>& edges,
                             std::size_t i, std::uint32_t used_vertices,
                             std::vector<std::pair<Vertex, Vertex>>& current, Visit& visit) {
    if (i == edges.size()) {
        visit(current);
        return;
    }
    enumerate_matchings_rec(edges, i + 1, used_vertices, current, visit);
    auto [u, v] = edges[i];
    std::uint32_t uv = (1u << u) | (1u << v);
    if ((used_vertices & uv) == 0) {
        current.push_back(edges[i]);
        enumerate_matchings_rec(edges, i + 1, used_vertices | uv, current, visit);
        current.pop_back();
    }
}

}  // namespace detail

/// Visit every edge subset of g that is a matching (including the empty one).
template <typename Visit>
void enumerate_matchings(const Graph& g, Visit visit) {
    auto edges = g.edge_list();
    std::vector<std::pair<Vertex, Vertex>> current;
    detail::enumerate_matchings_rec(edges, 0, 0, current, visit);
}

inline int max_matching_size(const Graph& g) {
    int best = 0;
    enumerate_matchings(g, [&](const std::vector<std::pair<Vertex, Vertex>>& m) {
        best = std::max(best, static_cast<int>(m.size()));
    });
    return best;
}

/// All maximum matchings, as edge lists.
inline std::vector<std::vector<std::pair<Vertex, Vertex>>> maximum_matchings(const Graph& g) {
    int best = max_matching_size(g);
    std::vector<std::vector<std::pair<Vertex, Vertex>>> out;
    enumerate_matchings(g, [&](const std::vector<std::pair<Vertex, Vertex>>& m) {
        if (static_cast<int>(m.size()) == best) out.push_back(m);
    });
    return out;
}

/// D(G) from its definition: vertices missed by some maximum matching.
inline std::vector<Vertex> exposed_by_some_maximum_matching(const Graph& g) {
    std::vector<bool> missable(g.n + 1, false);
    int best = max_matching_size(g);
    enumerate_matchings(g, [&](const std::vector<std::pair<Vertex, Vertex>>& m) {
        if (static_cast<int>(m.size()) != best) return;
        std::vector<bool> covered(g.n + 1, false);
        for (auto [u, v] : m) covered[u] = covered[v] = true;
        for (Vertex x = 1; x <= g.n; ++x)
            if (!covered[x]) missable[x] = true;
    });
    std::vector<Vertex> out;
    for (Vertex x = 1; x <= g.n; ++x)
        if (missable[x]) out.push_back(x);
    return out;
}

inline int max_matching_size_bipartite(const BipartiteGraph& b) {
    auto edges = b.edge_list();
    int best = 0;
    int m = static_cast<int>(edges.size());
    for (std::uint32_t subset = 0; subset < (1u << m); ++subset) {
        if (popcount64(subset) <= best) continue;
        std::uint32_t lefts = 0, rights = 0;
        bool ok = true;
        for (int i = 0; i < m && ok; ++i)
            if ((subset >> i) & 1u) {
                std::uint32_t lu = 1u << edges[i].first, rv = 1u << edges[i].second;
                if ((lefts & lu) || (rights & rv)) ok = false;
                lefts |= lu;
                rights |= rv;
            }
        if (ok) best = popcount64(subset);
    }
    return best;
}

/// Smallest size of a vertex cover, by scanning all vertex subsets.
inline int min_vertex_cover_size_bipartite(const BipartiteGraph& b) {
    auto edges = b.edge_list();
    int best = b.r + b.s;
    for (std::uint32_t lefts = 0; lefts < (1u << b.r); ++lefts)
        for (std::uint32_t rights = 0; rights < (1u << b.s); ++rights) {
            int size = popcount64(lefts) + popcount64(rights);
            if (size >= best) continue;
            bool covers = true;
            for (auto [u, v] : edges)
                if (!((lefts >> (u - 1)) & 1u) && !((rights >> (v - 1)) & 1u)) {
                    covers = false;
                    break;
                }
            if (covers) best = size;
        }
    return best;
}

inline bool is_factor_critical(const Graph& g) {
    if (g.n % 2 == 0) return false;
    for (Vertex v = 1; v <= g.n; ++v)
        if (max_matching_size(g.without_vertex(v)) != (g.n - 1) / 2) return false;
    return true;
}

}  // namespace matchplex::bruteforce

#endif
