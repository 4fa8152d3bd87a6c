#ifndef MATCHPLEX_GALLAI_EDMONDS_HPP
#define MATCHPLEX_GALLAI_EDMONDS_HPP

#include <vector>

#include "matchplex/graph.hpp"
#include "matchplex/matching.hpp"

namespace matchplex {

/// The canonical partition V = D u A u C: D is the set of vertices
/// missed by some maximum matching, A the outside neighbors of D, C the
/// rest.  components_of_D lists the connected components of G|_D, each
/// factor critical, and nu = (|V| - con + |A|)/2.
struct GallaiEdmonds {
    std::vector<Vertex> D;
    std::vector<Vertex> A;
    std::vector<Vertex> C;
    int nu = 0;
    std::vector<std::vector<Vertex>> components_of_D;

    int con() const { return static_cast<int>(components_of_D.size()); }
};

/// Connected components of the subgraph induced on `inside` (a
/// true/false flag per vertex, 1-based).  Isolated vertices of the
/// induced subgraph form singleton components.
inline std::vector<std::vector<Vertex>> components_within(const Graph& g,
                                                          const std::vector<bool>& inside) {
    std::vector<std::vector<Vertex>> comps;
    std::vector<bool> seen(g.n + 1, false);
    for (Vertex v = 1; v <= g.n; ++v) {
        if (!inside[v] || seen[v]) continue;
        std::vector<Vertex> comp;
        std::vector<Vertex> stack{v};
        seen[v] = true;
        while (!stack.empty()) {
            Vertex x = stack.back();
            stack.pop_back();
            comp.push_back(x);
            for (Vertex w = 1; w <= g.n; ++w)
                if (inside[w] && !seen[w] && g.has_edge(x, w)) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

/// D is computed straight from its definition, v in D iff
/// nu(G - v) = nu(G), one matching run per vertex.
inline GallaiEdmonds gallai_edmonds(const Graph& g) {
    GallaiEdmonds ge;
    ge.nu = nu(g);
    std::vector<bool> in_D(g.n + 1, false);
    for (Vertex v = 1; v <= g.n; ++v)
        if (nu(g.without_vertex(v)) == ge.nu) {
            in_D[v] = true;
            ge.D.push_back(v);
        }
    for (Vertex v = 1; v <= g.n; ++v) {
        if (in_D[v]) continue;
        bool touches_D = false;
        for (Vertex w = 1; w <= g.n; ++w)
            if (w != v && in_D[w] && g.has_edge(v, w)) {
                touches_D = true;
                break;
            }
        if (touches_D)
            ge.A.push_back(v);
        else
            ge.C.push_back(v);
    }
    ge.components_of_D = components_within(g, in_D);
    return ge;
}

}  // namespace matchplex

#endif
