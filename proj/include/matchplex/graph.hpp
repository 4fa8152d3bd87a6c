#ifndef MATCHPLEX_GRAPH_HPP
#define MATCHPLEX_GRAPH_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Labelled graphs as edge bitsets.  Vertices are 1-based throughout
// ([n] = {1,...,n}); an edge {u,v} with u < v is stored as one bit at a
// canonical index, so a whole graph on a fixed vertex set is a single
// uint64_t word.  This caps general graphs at n <= 11 (55 edge slots)
// and bipartite graphs at r*s <= 64, which covers every desk-scale
// computation in this library.

namespace matchplex {

using Vertex = int;
using EdgeMask = std::uint64_t;

inline constexpr int kMaxGeneralVertices = 11;

inline int popcount64(EdgeMask m) { return __builtin_popcountll(m); }

/// Canonical index of edge {u,v}, u < v, in lexicographic (u,v) order:
/// (1,2),(1,3),...,(1,n),(2,3),... is 0,1,...
inline int edge_index(Vertex u, Vertex v, int n) {
    if (u < 1 || u >= v || v > n)
        throw std::domain_error("edge_index: need 1 <= u < v <= n, got u=" +
                                std::to_string(u) + " v=" + std::to_string(v) +
                                " n=" + std::to_string(n));
    return (u - 1) * n - u * (u - 1) / 2 + (v - u - 1);
}

/// Inverse of edge_index.
inline std::pair<Vertex, Vertex> edge_endpoints(int index, int n) {
    if (index < 0 || index >= n * (n - 1) / 2)
        throw std::domain_error("edge_endpoints: index out of range");
    int u = 1;
    int rest = index;
    while (rest >= n - u) {
        rest -= n - u;
        ++u;
    }
    return {u, u + 1 + rest};
}

struct Graph {
    int n = 1;
    EdgeMask edges = 0;

    Graph() = default;
    Graph(int n_, EdgeMask edges_ = 0) : n(n_), edges(edges_) {
        if (n < 1 || n > kMaxGeneralVertices)
            throw std::domain_error("Graph: vertex count must be in [1, 11]");
        if (n * (n - 1) / 2 < 64 && (edges >> (n * (n - 1) / 2)) != 0)
            throw std::domain_error("Graph: edge bits beyond C(n,2)");
    }

    int edge_slots() const { return n * (n - 1) / 2; }
    int edge_count() const { return popcount64(edges); }

    bool has_edge(Vertex u, Vertex v) const {
        if (u == v) return false;
        if (u > v) std::swap(u, v);
        return (edges >> edge_index(u, v, n)) & 1u;
    }
    Graph with_edge(Vertex u, Vertex v) const {
        if (u > v) std::swap(u, v);
        return Graph(n, edges | (EdgeMask{1} << edge_index(u, v, n)));
    }
    Graph without_edge(Vertex u, Vertex v) const {
        if (u > v) std::swap(u, v);
        return Graph(n, edges & ~(EdgeMask{1} << edge_index(u, v, n)));
    }

    /// Edge bits incident to v.
    EdgeMask incident_mask(Vertex v) const {
        EdgeMask m = 0;
        for (Vertex w = 1; w <= n; ++w)
            if (w != v) {
                Vertex a = v < w ? v : w, b = v < w ? w : v;
                m |= EdgeMask{1} << edge_index(a, b, n);
            }
        return m;
    }

    /// G - v in the paper's sense: all edges at v removed.  The vertex
    /// itself stays in place (isolated), which leaves every matching
    /// computation unchanged.
    Graph without_vertex(Vertex v) const { return Graph(n, edges & ~incident_mask(v)); }

    std::vector<std::pair<Vertex, Vertex>> edge_list() const {
        std::vector<std::pair<Vertex, Vertex>> out;
        EdgeMask m = edges;
        while (m) {
            int i = __builtin_ctzll(m);
            out.push_back(edge_endpoints(i, n));
            m &= m - 1;
        }
        return out;
    }

    std::vector<Vertex> neighbors(Vertex v) const {
        std::vector<Vertex> out;
        for (Vertex w = 1; w <= n; ++w)
            if (w != v && has_edge(v, w)) out.push_back(w);
        return out;
    }

    bool operator==(const Graph&) const = default;
};

/// Index of the bipartite edge (u, v-bar): (u-1)*s + (v-1).
inline int bip_edge_index(Vertex u, Vertex v, int r, int s) {
    if (u < 1 || u > r || v < 1 || v > s)
        throw std::domain_error("bip_edge_index: endpoint out of range");
    return (u - 1) * s + (v - 1);
}

inline std::pair<Vertex, Vertex> bip_edge_endpoints(int index, int r, int s) {
    if (index < 0 || index >= r * s)
        throw std::domain_error("bip_edge_endpoints: index out of range");
    return {index / s + 1, index % s + 1};
}

/// Bipartite graph on [r] u [s-bar]; an edge (u, v-bar) pairs a left
/// vertex u in [r] with a right vertex v-bar in [s-bar].
struct BipartiteGraph {
    int r = 0;
    int s = 1;
    EdgeMask edges = 0;

    BipartiteGraph() = default;
    BipartiteGraph(int r_, int s_, EdgeMask edges_ = 0) : r(r_), s(s_), edges(edges_) {
        if (r < 0 || s < 1 || r * s > 64)
            throw std::domain_error("BipartiteGraph: need r >= 0, s >= 1, r*s <= 64");
        if (r * s < 64 && (edges >> (r * s)) != 0)
            throw std::domain_error("BipartiteGraph: edge bits beyond r*s");
    }

    int edge_slots() const { return r * s; }
    int edge_count() const { return popcount64(edges); }

    bool has_edge(Vertex u, Vertex v) const {
        return (edges >> bip_edge_index(u, v, r, s)) & 1u;
    }
    BipartiteGraph with_edge(Vertex u, Vertex v) const {
        return BipartiteGraph(r, s, edges | (EdgeMask{1} << bip_edge_index(u, v, r, s)));
    }
    BipartiteGraph without_edge(Vertex u, Vertex v) const {
        return BipartiteGraph(r, s, edges & ~(EdgeMask{1} << bip_edge_index(u, v, r, s)));
    }

    EdgeMask left_mask(Vertex u) const {
        EdgeMask m = 0;
        for (Vertex v = 1; v <= s; ++v) m |= EdgeMask{1} << bip_edge_index(u, v, r, s);
        return m;
    }
    EdgeMask right_mask(Vertex v) const {
        EdgeMask m = 0;
        for (Vertex u = 1; u <= r; ++u) m |= EdgeMask{1} << bip_edge_index(u, v, r, s);
        return m;
    }

    BipartiteGraph without_left(Vertex u) const { return BipartiteGraph(r, s, edges & ~left_mask(u)); }
    BipartiteGraph without_right(Vertex v) const { return BipartiteGraph(r, s, edges & ~right_mask(v)); }

    std::vector<std::pair<Vertex, Vertex>> edge_list() const {
        std::vector<std::pair<Vertex, Vertex>> out;
        EdgeMask m = edges;
        while (m) {
            int i = __builtin_ctzll(m);
            out.push_back(bip_edge_endpoints(i, r, s));
            m &= m - 1;
        }
        return out;
    }

    bool operator==(const BipartiteGraph&) const = default;
};

/// A set of pairwise disjoint edges.  For bipartite hosts the second
/// endpoint of each pair is a right-side label.
struct Matching {
    std::vector<std::pair<Vertex, Vertex>> edges;
    int size() const { return static_cast<int>(edges.size()); }
};

}  // namespace matchplex

#endif
