#ifndef MATCHPLEX_FAMILIES_HPP
#define MATCHPLEX_FAMILIES_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "matchplex/graph.hpp"
#include "matchplex/matching.hpp"
#include "matchplex/triangle_trees.hpp"

// The graph families studied by this library.  A family induces a
// monotone simplicial complex (NM, NPM, BNM, NFC, NBFC) or the cells of
// a quotient complex Sigma/Gamma (FC, BFC); a graph with m edges is a
// face of dimension m-1 and the empty graph is the (-1)-face.

namespace matchplex {

enum class FamilyKind { NM, NPM, BNM, FC, NFC, BFC, NBFC, GENERIC };

inline const char* family_kind_name(FamilyKind k) {
    switch (k) {
        case FamilyKind::NM: return "nm";
        case FamilyKind::NPM: return "npm";
        case FamilyKind::BNM: return "bnm";
        case FamilyKind::FC: return "fc";
        case FamilyKind::NFC: return "nfc";
        case FamilyKind::BFC: return "bfc";
        case FamilyKind::NBFC: return "nbfc";
        case FamilyKind::GENERIC: return "generic";
    }
    return "?";
}

class resource_error : public std::runtime_error {
  public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

struct EnumerationOptions {
    // Hard cap on the number of potential edges of the ground set.
    int max_ground_bits = 24;
    // Cap on the number of faces an enumeration may materialize.
    std::int64_t max_faces = std::int64_t{1} << 21;
};

struct FamilySpec {
    FamilyKind kind = FamilyKind::GENERIC;
    int n = 0;             // NM/NPM/FC/NFC and general GENERIC grounds
    int k = 0;             // NM/BNM (for NPM, k = n/2)
    int r = 0, s = 0;      // BNM and bipartite grounds
    int q = 0;             // BFC/NBFC
    bool bipartite_ground = false;
    std::function<bool(EdgeMask)> generic_pred;
    std::string generic_name;

    static FamilySpec nm(int n, int k) {
        require(n >= 1 && n <= kMaxGeneralVertices && k >= 1, "nm: need n in [1,11], k >= 1");
        FamilySpec f;
        f.kind = FamilyKind::NM;
        f.n = n;
        f.k = k;
        return f;
    }
    static FamilySpec npm(int n) {
        require(n >= 2 && n % 2 == 0 && n <= kMaxGeneralVertices, "npm: need even n in [2,11]");
        FamilySpec f;
        f.kind = FamilyKind::NPM;
        f.n = n;
        f.k = n / 2;
        return f;
    }
    static FamilySpec bnm(int r, int s, int k) {
        require(r >= 1 && s >= 1 && k >= 1 && r * s <= 64, "bnm: need r,s,k >= 1 and r*s <= 64");
        FamilySpec f;
        f.kind = FamilyKind::BNM;
        f.r = r;
        f.s = s;
        f.k = k;
        f.bipartite_ground = true;
        return f;
    }
    static FamilySpec fc(int n) {
        require(n >= 1 && n % 2 == 1 && n <= kMaxGeneralVertices, "fc: need odd n in [1,11]");
        FamilySpec f;
        f.kind = FamilyKind::FC;
        f.n = n;
        return f;
    }
    static FamilySpec nfc(int n) {
        require(n >= 1 && n % 2 == 1 && n <= kMaxGeneralVertices, "nfc: need odd n in [1,11]");
        FamilySpec f;
        f.kind = FamilyKind::NFC;
        f.n = n;
        return f;
    }
    static FamilySpec bfc(int q, int s) {
        require(q >= 1 && s > q && q * s <= 64, "bfc: need 1 <= q < s and q*s <= 64");
        FamilySpec f;
        f.kind = FamilyKind::BFC;
        f.q = q;
        f.r = q;
        f.s = s;
        f.bipartite_ground = true;
        return f;
    }
    static FamilySpec nbfc(int q, int s) {
        require(q >= 1 && s > q && q * s <= 64, "nbfc: need 1 <= q < s and q*s <= 64");
        FamilySpec f;
        f.kind = FamilyKind::NBFC;
        f.q = q;
        f.r = q;
        f.s = s;
        f.bipartite_ground = true;
        return f;
    }
    static FamilySpec generic_general(int n, std::function<bool(EdgeMask)> pred,
                                      std::string name = "generic") {
        require(n >= 1 && n <= kMaxGeneralVertices, "generic: need n in [1,11]");
        FamilySpec f;
        f.n = n;
        f.generic_pred = std::move(pred);
        f.generic_name = std::move(name);
        return f;
    }
    static FamilySpec generic_bipartite(int r, int s, std::function<bool(EdgeMask)> pred,
                                        std::string name = "generic") {
        require(r >= 0 && s >= 1 && r * s <= 64, "generic: need r*s <= 64");
        FamilySpec f;
        f.r = r;
        f.s = s;
        f.bipartite_ground = true;
        f.generic_pred = std::move(pred);
        f.generic_name = std::move(name);
        return f;
    }
    /// The full simplex Sigma(n) as a (trivially monotone) family.
    static FamilySpec full_simplex(int n) {
        return generic_general(n, [](EdgeMask) { return true; }, "sigma");
    }
    static FamilySpec full_simplex_bipartite(int r, int s) {
        return generic_bipartite(r, s, [](EdgeMask) { return true; }, "sigma");
    }

    /// FC and BFC list the cells of a quotient complex Sigma/Gamma; the
    /// other kinds are simplicial complexes in their own right.
    bool quotient() const { return kind == FamilyKind::FC || kind == FamilyKind::BFC; }

    int ground_bits() const {
        return bipartite_ground ? r * s : n * (n - 1) / 2;
    }

    std::string describe() const {
        std::string out = kind == FamilyKind::GENERIC ? generic_name
                                                      : std::string(family_kind_name(kind));
        out += "(";
        if (bipartite_ground) {
            out += std::to_string(r) + "," + std::to_string(s);
            if (kind == FamilyKind::BNM) out += ";k=" + std::to_string(k);
        } else {
            out += std::to_string(n);
            if (kind == FamilyKind::NM) out += ";k=" + std::to_string(k);
        }
        out += ")";
        return out;
    }

  private:
    static void require(bool ok, const char* msg) {
        if (!ok) throw std::domain_error(msg);
    }
};

namespace detail {

/// nu for every edge mask of the complete graph on [n]; index = mask.
inline std::vector<std::uint8_t> nu_table_general(int n) {
    int slots = n * (n - 1) / 2;
    std::vector<std::uint8_t> table(std::size_t{1} << slots);
    // nu changes by at most one when the highest edge is removed, so an
    // augmenting step from the smaller mask's matching suffices; we
    // simply rerun the search per mask, which is fast enough at n <= 7.
    for (EdgeMask mask = 0; mask < (EdgeMask{1} << slots); ++mask) {
        Graph g(n, mask);
        BlossomSearch search(g);
        search.run_to_maximum();
        int size = 0;
        for (int v = 1; v <= n; ++v)
            if (search.mate[v] > v) ++size;
        table[mask] = static_cast<std::uint8_t>(size);
    }
    return table;
}

inline std::vector<std::uint8_t> nu_table_bipartite(int r, int s) {
    int slots = r * s;
    std::vector<std::uint8_t> table(std::size_t{1} << slots);
    for (EdgeMask mask = 0; mask < (EdgeMask{1} << slots); ++mask)
        table[mask] = static_cast<std::uint8_t>(nu_bipartite(BipartiteGraph(r, s, mask)));
    return table;
}

}  // namespace detail

/// Membership of a general graph; domain error on a ground-set mismatch.
inline bool contains(const FamilySpec& spec, const Graph& g) {
    if (spec.bipartite_ground || g.n != spec.n)
        throw std::domain_error("contains: graph does not match the family's ground set");
    switch (spec.kind) {
        case FamilyKind::NM:
        case FamilyKind::NPM: return nu(g) < spec.k;
        case FamilyKind::FC: return is_factor_critical(g);
        case FamilyKind::NFC: return !is_factor_critical(g);
        case FamilyKind::GENERIC: return spec.generic_pred(g.edges);
        default: throw std::domain_error("contains: family lives on a bipartite ground set");
    }
}

inline bool contains(const FamilySpec& spec, const BipartiteGraph& b) {
    if (!spec.bipartite_ground || b.r != spec.r || b.s != spec.s)
        throw std::domain_error("contains: graph does not match the family's ground set");
    switch (spec.kind) {
        case FamilyKind::BNM: return nu_bipartite(b) < spec.k;
        case FamilyKind::BFC: return is_q_factor_critical(b, spec.q);
        case FamilyKind::NBFC: return !is_q_factor_critical(b, spec.q);
        case FamilyKind::GENERIC: return spec.generic_pred(b.edges);
        default: throw std::domain_error("contains: family lives on a general ground set");
    }
}

inline bool contains_mask(const FamilySpec& spec, EdgeMask mask) {
    if (spec.bipartite_ground) return contains(spec, BipartiteGraph(spec.r, spec.s, mask));
    return contains(spec, Graph(spec.n, mask));
}

namespace detail {

/// Depth-first enumeration of the matching-bounded families, deciding
/// edges in canonical index order.  As soon as the partial graph
/// reaches a k-matching its entire up-set is skipped; the cut is exact
/// because a k-matching survives every edge addition.
template <typename Visit>
void enumerate_nm_pruned(int n, int k, Visit&& visit) {
    int slots = n * (n - 1) / 2;
    Graph full(n, slots == 64 ? ~EdgeMask{0} : (EdgeMask{1} << slots) - 1);

    struct Frame {
        EdgeMask mask;
        int nu;
        std::array<int, kMaxGeneralVertices + 1> mate;
    };
    std::function<void(const Frame&, int)> rec = [&](const Frame& f, int i) {
        if (i == slots) {
            visit(f.mask);
            return;
        }
        rec(f, i + 1);
        Frame g = f;
        g.mask |= EdgeMask{1} << i;
        Graph host(n, g.mask);
        BlossomSearch search(host);
        search.mate = f.mate;
        if (search.augment_once()) {
            g.nu += 1;
            g.mate = search.mate;
        }
        if (g.nu < k) rec(g, i + 1);
    };
    Frame root;
    root.mask = 0;
    root.nu = 0;
    root.mate.fill(0);
    rec(root, 0);
}

template <typename Visit>
void enumerate_bnm_pruned(int r, int s, int k, Visit&& visit) {
    int slots = r * s;
    struct Frame {
        EdgeMask mask;
        int nu;
        std::vector<int> mate_right;
    };
    std::function<void(const Frame&, int)> rec = [&](const Frame& f, int i) {
        if (i == slots) {
            visit(f.mask);
            return;
        }
        rec(f, i + 1);
        Frame g = f;
        g.mask |= EdgeMask{1} << i;
        BipartiteGraph host(r, s, g.mask);
        KuhnSearch search(host);
        search.mate_right = f.mate_right;
        std::vector<bool> left_matched(r + 1, false);
        for (int v = 1; v <= s; ++v)
            if (search.mate_right[v] != 0) left_matched[search.mate_right[v]] = true;
        for (int u = 1; u <= r && g.nu == f.nu; ++u) {
            if (left_matched[u]) continue;
            std::fill(search.visited.begin(), search.visited.end(), false);
            if (search.try_left(u)) {
                g.nu += 1;
                g.mate_right = search.mate_right;
            }
        }
        if (g.nu < k) rec(g, i + 1);
    };
    Frame root;
    root.mask = 0;
    root.nu = 0;
    root.mate_right.assign(s + 1, 0);
    rec(root, 0);
}

inline void check_bits_cap(const FamilySpec& spec, const EnumerationOptions& opts) {
    if (spec.ground_bits() > opts.max_ground_bits)
        throw resource_error("enumeration cap exceeded: ground set has " +
                             std::to_string(spec.ground_bits()) + " potential edges, cap is " +
                             std::to_string(opts.max_ground_bits));
}

/// Sampled monotonicity check for caller-supplied predicates: every
/// edge-deletion of a sampled member must stay in the family.
inline void check_generic_monotone(const FamilySpec& spec) {
    int bits = spec.ground_bits();
    std::mt19937_64 rng(0x6d6f6e6f);  // fixed seed: deterministic rejection
    int checked = 0;
    for (int trial = 0; trial < 4096 && checked < 256; ++trial) {
        EdgeMask mask = rng() & ((bits == 64 ? ~EdgeMask{0} : (EdgeMask{1} << bits) - 1));
        if (!spec.generic_pred(mask)) continue;
        ++checked;
        EdgeMask m = mask;
        while (m) {
            EdgeMask bit = m & (~m + 1);
            if (!spec.generic_pred(mask ^ bit))
                throw std::domain_error(
                    "generic family rejected: sampled monotonicity check failed "
                    "(a member has an edge-deletion outside the family)");
            m ^= bit;
        }
    }
}

}  // namespace detail

/// Visit every member of the family (for quotient kinds: every cell),
/// in no particular order.  See enumerate_faces for the canonical order.
template <typename Visit>
void for_each_face(const FamilySpec& spec, Visit&& visit,
                   const EnumerationOptions& opts = {}) {
    detail::check_bits_cap(spec, opts);
    const int bits = spec.ground_bits();
    switch (spec.kind) {
        case FamilyKind::NM:
        case FamilyKind::NPM:
            detail::enumerate_nm_pruned(spec.n, spec.k, visit);
            return;
        case FamilyKind::BNM:
            detail::enumerate_bnm_pruned(spec.r, spec.s, spec.k, visit);
            return;
        case FamilyKind::FC:
        case FamilyKind::NFC: {
            auto table = detail::nu_table_general(spec.n);
            std::vector<EdgeMask> inc(spec.n + 1);
            Graph full(spec.n);
            for (Vertex v = 1; v <= spec.n; ++v) inc[v] = full.incident_mask(v);
            const int target = (spec.n - 1) / 2;
            const bool want_fc = spec.kind == FamilyKind::FC;
            for (EdgeMask mask = 0; mask < (EdgeMask{1} << bits); ++mask) {
                bool fc = true;
                for (Vertex v = 1; v <= spec.n && fc; ++v)
                    if (table[mask & ~inc[v]] != target) fc = false;
                if (fc == want_fc) visit(mask);
            }
            return;
        }
        case FamilyKind::BFC:
        case FamilyKind::NBFC: {
            auto table = detail::nu_table_bipartite(spec.r, spec.s);
            std::vector<EdgeMask> right(spec.s + 1);
            BipartiteGraph full(spec.r, spec.s);
            for (Vertex v = 1; v <= spec.s; ++v) right[v] = full.right_mask(v);
            const bool want_cells = spec.kind == FamilyKind::BFC;
            for (EdgeMask mask = 0; mask < (EdgeMask{1} << bits); ++mask) {
                bool qfc = true;
                for (Vertex v = 1; v <= spec.s && qfc; ++v)
                    if (table[mask & ~right[v]] != spec.q) qfc = false;
                if (qfc == want_cells) visit(mask);
            }
            return;
        }
        case FamilyKind::GENERIC: {
            detail::check_generic_monotone(spec);
            for (EdgeMask mask = 0; mask < (EdgeMask{1} << bits); ++mask)
                if (spec.generic_pred(mask)) visit(mask);
            return;
        }
    }
}

/// The family's faces in canonical order: increasing edge count, ties
/// broken by bitset value.
inline std::vector<EdgeMask> enumerate_faces(const FamilySpec& spec,
                                             const EnumerationOptions& opts = {}) {
    std::vector<EdgeMask> faces;
    for_each_face(
        spec,
        [&](EdgeMask mask) {
            if (static_cast<std::int64_t>(faces.size()) >= opts.max_faces)
                throw resource_error("enumeration cap exceeded: more than " +
                                     std::to_string(opts.max_faces) + " faces");
            faces.push_back(mask);
        },
        opts);
    std::sort(faces.begin(), faces.end(), [](EdgeMask a, EdgeMask b) {
        int pa = popcount64(a), pb = popcount64(b);
        return pa != pb ? pa < pb : a < b;
    });
    return faces;
}

/// Sum of (-1)^{|E(G)|} over the family; the empty graph contributes +1.
/// Equals minus the reduced Euler characteristic of the complex.
inline std::int64_t signed_euler_sum(const FamilySpec& spec,
                                     const EnumerationOptions& opts = {}) {
    std::int64_t sum = 0;
    for_each_face(
        spec, [&](EdgeMask mask) { sum += (popcount64(mask) % 2 == 0) ? 1 : -1; }, opts);
    return sum;
}

struct SphereCountPrediction {
    int dimension = -1;   // -1 encodes the empty-complex sphere S^{-1}
    BigInt count = 0;
};

/// Closed-form wedge-of-spheres prediction for each non-GENERIC kind.
inline SphereCountPrediction predicted_spheres(const FamilySpec& spec) {
    SphereCountPrediction p;
    switch (spec.kind) {
        case FamilyKind::NM:
        case FamilyKind::NPM: {
            p.dimension = 3 * spec.k - 4;
            p.count = 0;
            for (const auto& tau : odd_partitions(range_1_to(spec.n - 1), spec.n - 2 * spec.k + 1)) {
                BigInt prod = 1;
                for (const auto& block : tau.blocks)
                    prod *= double_factorial(static_cast<long long>(block.size()) - 2);
                p.count += prod * prod;
            }
            return p;
        }
        case FamilyKind::BNM:
            p.dimension = 2 * spec.k - 3;
            p.count = binomial(spec.r - 1, spec.k - 1) * binomial(spec.s - 1, spec.k - 1);
            return p;
        case FamilyKind::FC: {
            int m = (spec.n + 1) / 2;
            BigInt df = double_factorial(spec.n - 2);
            p.dimension = 3 * m - 4;
            p.count = df * df;
            return p;
        }
        case FamilyKind::NFC: {
            int m = (spec.n + 1) / 2;
            BigInt df = double_factorial(spec.n - 2);
            p.dimension = 3 * m - 5;
            p.count = df * df;
            return p;
        }
        case FamilyKind::BFC:
            p.dimension = 2 * spec.q - 1;
            p.count = binomial(spec.s - 1, spec.q);
            return p;
        case FamilyKind::NBFC:
            p.dimension = 2 * spec.q - 2;
            p.count = binomial(spec.s - 1, spec.q);
            return p;
        case FamilyKind::GENERIC:
            throw std::domain_error("predicted_spheres: unsupported for generic families");
    }
    return p;
}

/// The signed Euler sum a wedge of `count` spheres of dimension d
/// forces: (-1)^{d+1} * count.
inline BigInt predicted_signed_euler_sum(const FamilySpec& spec) {
    SphereCountPrediction p = predicted_spheres(spec);
    BigInt sign = ((p.dimension + 1) % 2 == 0) ? 1 : -1;
    return sign * p.count;
}

}  // namespace matchplex

#endif
