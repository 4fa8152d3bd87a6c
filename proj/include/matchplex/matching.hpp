#ifndef MATCHPLEX_MATCHING_HPP
#define MATCHPLEX_MATCHING_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "matchplex/graph.hpp"

// Maximum matchings.  General graphs use a blossom-contracting
// augmenting search (adequate for n <= 11); bipartite graphs use plain
// augmenting paths.  The brute-force oracle that guards both lives in
// bruteforce.hpp and shares no code with this file.

namespace matchplex {

namespace detail {

/// One augmenting-path search phase on the graph (n, edges), starting
/// from the exposed vertex `root`.  mate[] is 1-based with 0 = exposed.
/// Returns true (and augments mate) if an augmenting path was found.
///
/// Classic array-based blossom search: `base` tracks blossom bases,
/// `parent` the alternating forest, and odd cycles found during the BFS
/// are contracted by re-basing every vertex of the cycle.
struct BlossomSearch {
    int n;
    const Graph* g;
    std::array<int, kMaxGeneralVertices + 1> mate{};
    std::array<int, kMaxGeneralVertices + 1> parent{};
    std::array<int, kMaxGeneralVertices + 1> base{};
    std::array<bool, kMaxGeneralVertices + 1> used{};
    std::array<bool, kMaxGeneralVertices + 1> blossom{};

    explicit BlossomSearch(const Graph& graph) : n(graph.n), g(&graph) {
        mate.fill(0);
    }

    int lowest_common_base(int a, int b) {
        std::array<bool, kMaxGeneralVertices + 1> seen{};
        for (;;) {
            a = base[a];
            seen[a] = true;
            if (mate[a] == 0) break;
            a = parent[mate[a]];
        }
        for (;;) {
            b = base[b];
            if (seen[b]) return b;
            b = parent[mate[b]];
        }
    }

    void mark_path(int v, int b, int child, std::vector<int>& queue) {
        while (base[v] != b) {
            blossom[base[v]] = true;
            blossom[base[mate[v]]] = true;
            parent[v] = child;
            child = mate[v];
            v = parent[mate[v]];
        }
        (void)queue;
    }

    bool find_augmenting_path(int root) {
        used.fill(false);
        parent.fill(0);
        for (int i = 1; i <= n; ++i) base[i] = i;
        used[root] = true;
        std::vector<int> queue{root};
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            int v = queue[qi];
            for (int to = 1; to <= n; ++to) {
                if (to == v || !g->has_edge(v, to)) continue;
                if (base[v] == base[to] || mate[v] == to) continue;
                if (to == root || (mate[to] != 0 && parent[mate[to]] != 0)) {
                    // Odd cycle: contract the blossom through v and to.
                    int b = lowest_common_base(v, to);
                    blossom.fill(false);
                    mark_path(v, b, to, queue);
                    mark_path(to, b, v, queue);
                    for (int i = 1; i <= n; ++i)
                        if (blossom[base[i]]) {
                            base[i] = b;
                            if (!used[i]) {
                                used[i] = true;
                                queue.push_back(i);
                            }
                        }
                } else if (parent[to] == 0) {
                    parent[to] = v;
                    if (mate[to] == 0) {
                        // Augment along the alternating path root..to.
                        int u = to;
                        while (u != 0) {
                            int pv = parent[u];
                            int ppv = mate[pv];
                            mate[u] = pv;
                            mate[pv] = u;
                            u = ppv;
                        }
                        return true;
                    }
                    used[mate[to]] = true;
                    queue.push_back(mate[to]);
                }
            }
        }
        return false;
    }

    /// Augment from any exposed root; true if the matching grew.
    bool augment_once() {
        for (int v = 1; v <= n; ++v)
            if (mate[v] == 0 && find_augmenting_path(v)) return true;
        return false;
    }

    void run_to_maximum() {
        // Greedy seed, then augmenting phases.
        for (int u = 1; u <= n; ++u)
            if (mate[u] == 0)
                for (int v = u + 1; v <= n; ++v)
                    if (mate[v] == 0 && g->has_edge(u, v)) {
                        mate[u] = v;
                        mate[v] = u;
                        break;
                    }
        while (augment_once()) {
        }
    }
};

}  // namespace detail

inline Matching max_matching(const Graph& g) {
    detail::BlossomSearch search(g);
    search.run_to_maximum();
    Matching m;
    for (int v = 1; v <= g.n; ++v)
        if (search.mate[v] > v) m.edges.push_back({v, search.mate[v]});
    return m;
}

/// nu(G), the maximum matching size.
inline int nu(const Graph& g) { return max_matching(g).size(); }

namespace detail {

/// Kuhn's algorithm.  mate_right[v] = left partner of right vertex v (0 = none).
struct KuhnSearch {
    const BipartiteGraph* b;
    std::vector<int> mate_right;   // size s+1
    std::vector<bool> visited;     // rights visited in current phase

    explicit KuhnSearch(const BipartiteGraph& bg)
        : b(&bg), mate_right(bg.s + 1, 0), visited(bg.s + 1, false) {}

    bool try_left(int u) {
        for (int v = 1; v <= b->s; ++v) {
            if (!b->has_edge(u, v) || visited[v]) continue;
            visited[v] = true;
            if (mate_right[v] == 0 || try_left(mate_right[v])) {
                mate_right[v] = u;
                return true;
            }
        }
        return false;
    }

    int run() {
        int size = 0;
        for (int u = 1; u <= b->r; ++u) {
            std::fill(visited.begin(), visited.end(), false);
            if (try_left(u)) ++size;
        }
        return size;
    }
};

}  // namespace detail

inline Matching max_matching_bipartite(const BipartiteGraph& b) {
    detail::KuhnSearch search(b);
    search.run();
    Matching m;
    for (int v = 1; v <= b.s; ++v)
        if (search.mate_right[v] != 0) m.edges.push_back({search.mate_right[v], v});
    std::sort(m.edges.begin(), m.edges.end());
    return m;
}

inline int nu_bipartite(const BipartiteGraph& b) {
    detail::KuhnSearch search(b);
    return search.run();
}

struct VertexCover {
    std::vector<Vertex> left;
    std::vector<Vertex> right;
    int size() const { return static_cast<int>(left.size() + right.size()); }
};

/// Minimum vertex cover via Koenig's theorem: starting from the exposed
/// left vertices, walk unmatched edges left-to-right and matched edges
/// right-to-left; the cover is (unreached lefts) + (reached rights).
inline VertexCover min_vertex_cover_bipartite(const BipartiteGraph& b) {
    detail::KuhnSearch search(b);
    search.run();
    std::vector<int> mate_left(b.r + 1, 0);
    for (int v = 1; v <= b.s; ++v)
        if (search.mate_right[v] != 0) mate_left[search.mate_right[v]] = v;

    std::vector<bool> left_reached(b.r + 1, false), right_reached(b.s + 1, false);
    std::vector<int> stack;
    for (int u = 1; u <= b.r; ++u)
        if (mate_left[u] == 0) {
            left_reached[u] = true;
            stack.push_back(u);
        }
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v = 1; v <= b.s; ++v) {
            if (!b.has_edge(u, v) || right_reached[v] || mate_left[u] == v) continue;
            right_reached[v] = true;
            int w = search.mate_right[v];
            if (w != 0 && !left_reached[w]) {
                left_reached[w] = true;
                stack.push_back(w);
            }
        }
    }
    VertexCover cover;
    for (int u = 1; u <= b.r; ++u)
        if (!left_reached[u]) cover.left.push_back(u);
    for (int v = 1; v <= b.s; ++v)
        if (right_reached[v]) cover.right.push_back(v);
    return cover;
}

inline bool has_perfect_matching(const Graph& g) {
    return g.n % 2 == 0 && nu(g) == g.n / 2;
}

/// True iff |V| is odd and deleting any single vertex leaves a graph
/// with a perfect matching.
inline bool is_factor_critical(const Graph& g) {
    if (g.n % 2 == 0) return false;
    const int target = (g.n - 1) / 2;
    for (Vertex v = 1; v <= g.n; ++v)
        if (nu(g.without_vertex(v)) != target) return false;
    return true;
}

/// q-factor criticality on [q] u [s-bar]: s > q and deleting any right
/// vertex leaves a matching covering the whole left side.
inline bool is_q_factor_critical(const BipartiteGraph& b, int q) {
    if (b.r != q) throw std::domain_error("is_q_factor_critical: left part size must equal q");
    if (b.s <= q) return false;
    for (Vertex v = 1; v <= b.s; ++v)
        if (nu_bipartite(b.without_right(v)) != q) return false;
    return true;
}

}  // namespace matchplex

#endif
