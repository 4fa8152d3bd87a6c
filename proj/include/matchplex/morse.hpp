#ifndef MATCHPLEX_MORSE_HPP
#define MATCHPLEX_MORSE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "matchplex/face_poset.hpp"

// Morse matchings on face-poset digraphs and their certification.  A
// matching pairs a face with a codimension-1 subface; reversing the
// paired arcs must leave the digraph acyclic (condition M2).  Nothing
// here trusts a construction: acyclicity is established by explicit
// search, exploiting the fact that any directed cycle in the modified
// digraph alternates between matched up-arcs and unmatched down-arcs
// inside two adjacent dimensions.

namespace matchplex {

struct MorsePair {
    FaceId upper = -1;  // the larger face, matched downward to `lower`
    FaceId lower = -1;
};

struct MorseMatching {
    std::vector<MorsePair> pairs;

    void add_pair(FaceId upper, FaceId lower) { pairs.push_back({upper, lower}); }
    std::int64_t size() const { return static_cast<std::int64_t>(pairs.size()); }
};

struct VerificationReport {
    bool is_matching = false;
    bool is_acyclic = false;
    /// On failure of M2: faces sigma_1, tau_1, sigma_2, ..., sigma_r = sigma_1
    /// alternating lower/upper along a directed cycle.
    std::vector<FaceId> cycle_witness;
    std::vector<FaceId> critical;
    std::map<int, std::int64_t> census;  // dimension -> critical cell count

    bool valid() const { return is_matching && is_acyclic; }
};

class cluster_order_error : public std::logic_error {
  public:
    std::vector<int> block_cycle;
    cluster_order_error(const std::string& what, std::vector<int> cycle)
        : std::logic_error(what), block_cycle(std::move(cycle)) {}
};

namespace detail {

/// Throws unless every pair joins incident faces of the poset.
inline void check_structural(const FacePoset& poset, const MorseMatching& m) {
    for (const MorsePair& p : m.pairs) {
        if (p.upper < 0 || p.upper >= poset.size() || p.lower < 0 || p.lower >= poset.size())
            throw std::invalid_argument("morse pair references a face outside the poset");
        EdgeMask fu = poset.faces[p.upper], fl = poset.faces[p.lower];
        if ((fl & ~fu) != 0 || popcount64(fu ^ fl) != 1)
            throw std::invalid_argument(
                "morse pair joins non-incident faces (lower must be upper minus one edge)");
    }
}

/// Core verification, optionally restricted to a subset of faces
/// (restrict[i] != 0).  Pairs must lie inside the restriction.
inline VerificationReport verify_impl(const FacePoset& poset, const MorseMatching& m,
                                      const std::vector<std::uint8_t>* restrict_faces) {
    check_structural(poset, m);
    VerificationReport report;

    std::vector<FaceId> up(poset.size(), -1);
    std::vector<std::uint8_t> matched(poset.size(), 0);
    report.is_matching = true;
    for (const MorsePair& p : m.pairs) {
        if (restrict_faces &&
            (!(*restrict_faces)[p.upper] || !(*restrict_faces)[p.lower]))
            throw std::invalid_argument("morse pair leaves the restricted face set");
        if (matched[p.upper] || matched[p.lower]) {
            report.is_matching = false;  // M1 fails: a face meets two arcs
            break;
        }
        matched[p.upper] = matched[p.lower] = 1;
        up[p.lower] = p.upper;
    }

    if (report.is_matching) {
        // Acyclicity.  Nodes: matched-lower faces.  Arc x -> x' when
        // x' = up(x) - y for an edge y other than the one the pair adds,
        // x' is a face of the poset, and x' is itself matched upward.
        enum : std::uint8_t { WHITE, GRAY, BLACK };
        std::vector<std::uint8_t> color(poset.size(), WHITE);
        struct Frame {
            FaceId node;
            EdgeMask pending;  // candidate edges still to drop from up(node)
        };
        std::vector<Frame> stack;
        report.is_acyclic = true;

        auto pending_of = [&](FaceId x) {
            EdgeMask upper = poset.faces[up[x]];
            EdgeMask added = upper ^ poset.faces[x];
            return upper & ~added;
        };

        for (FaceId start = 0; start < poset.size() && report.is_acyclic; ++start) {
            if (up[start] < 0 || color[start] != WHITE) continue;
            if (restrict_faces && !(*restrict_faces)[start]) continue;
            color[start] = GRAY;
            stack.push_back({start, pending_of(start)});
            while (!stack.empty() && report.is_acyclic) {
                Frame& f = stack.back();
                if (f.pending == 0) {
                    color[f.node] = BLACK;
                    stack.pop_back();
                    continue;
                }
                EdgeMask bit = f.pending & (~f.pending + 1);
                f.pending ^= bit;
                FaceId next = poset.index_of(poset.faces[up[f.node]] ^ bit);
                if (next < 0 || up[next] < 0) continue;
                if (restrict_faces && !(*restrict_faces)[next]) continue;
                if (color[next] == GRAY) {
                    // Directed cycle: unwind the gray path from `next`.
                    std::size_t pos = stack.size();
                    while (pos > 0 && stack[pos - 1].node != next) --pos;
                    for (std::size_t i = pos - 1; i < stack.size(); ++i) {
                        report.cycle_witness.push_back(stack[i].node);
                        report.cycle_witness.push_back(up[stack[i].node]);
                    }
                    report.cycle_witness.push_back(next);
                    report.is_acyclic = false;
                } else if (color[next] == WHITE) {
                    color[next] = GRAY;
                    stack.push_back({next, pending_of(next)});
                }
            }
        }
    }

    // Critical cells: faces in no pair (within the restriction).
    for (FaceId i = 0; i < poset.size(); ++i) {
        if (restrict_faces && !(*restrict_faces)[i]) continue;
        if (!matched[i]) {
            report.critical.push_back(i);
            report.census[poset.dim(i)] += 1;
        }
    }
    return report;
}

}  // namespace detail

inline VerificationReport verify(const FacePoset& poset, const MorseMatching& m) {
    return detail::verify_impl(poset, m, nullptr);
}

/// Critical-cell count per dimension (assumes the matching verifies).
inline std::map<int, std::int64_t> critical_census(const FacePoset& poset,
                                                   const MorseMatching& m) {
    std::vector<std::uint8_t> matched(poset.size(), 0);
    for (const MorsePair& p : m.pairs) matched[p.upper] = matched[p.lower] = 1;
    std::map<int, std::int64_t> census;
    for (FaceId i = 0; i < poset.size(); ++i)
        if (!matched[i]) census[poset.dim(i)] += 1;
    return census;
}

/// Checks that a cycle witness has the alternating shape of the Cycle
/// Lemma: r >= 3 lower faces with sigma_r = sigma_1, each tau_i adds one
/// edge x_i to sigma_i via a matched arc, each sigma_{i+1} drops one
/// edge y_i from tau_i, and the added and dropped edge multisets agree.
inline bool cycle_witness_wellformed(const FacePoset& poset, const MorseMatching& m,
                                     const std::vector<FaceId>& witness) {
    if (witness.size() < 7 || witness.size() % 2 == 0) return false;  // r >= 3, 2r-1 faces
    if (witness.front() != witness.back()) return false;
    std::map<FaceId, FaceId> up;
    for (const MorsePair& p : m.pairs) up[p.lower] = p.upper;
    std::multiset<EdgeMask> added, removed;
    for (std::size_t i = 0; i + 2 < witness.size(); i += 2) {
        FaceId sigma = witness[i], tau = witness[i + 1], sigma_next = witness[i + 2];
        auto it = up.find(sigma);
        if (it == up.end() || it->second != tau) return false;
        EdgeMask x = poset.faces[tau] ^ poset.faces[sigma];
        EdgeMask y = poset.faces[tau] ^ poset.faces[sigma_next];
        if (popcount64(x) != 1 || popcount64(y) != 1 || x == y) return false;
        if ((poset.faces[sigma] & ~poset.faces[tau]) != 0) return false;
        if ((poset.faces[sigma_next] & ~poset.faces[tau]) != 0) return false;
        added.insert(x);
        removed.insert(y);
    }
    return added == removed;
}

struct ClusterBlock {
    std::vector<FaceId> faces;
    MorseMatching matching;
};

/// Union of block matchings under the Cluster Lemma.  Blocks must be
/// pairwise disjoint, order convex subposets (the caller's obligation);
/// this routine verifies that each block matching is an acyclic matching
/// inside its block, that the comparability relation between blocks is a
/// partial order, and finally re-verifies the union on the touched faces.
inline MorseMatching cluster_compose(const FacePoset& poset,
                                     const std::vector<ClusterBlock>& blocks) {
    std::vector<std::int32_t> owner(poset.size(), -1);
    std::vector<std::uint8_t> in_union(poset.size(), 0);
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (FaceId f : blocks[b].faces) {
            if (f < 0 || f >= poset.size())
                throw std::invalid_argument("cluster block references a face outside the poset");
            if (owner[f] != -1) throw std::invalid_argument("cluster blocks are not disjoint");
            owner[f] = static_cast<std::int32_t>(b);
            in_union[f] = 1;
        }

    MorseMatching result;
    {
        // Per-block M1 and acyclicity.  Blocks are disjoint, so one
        // color array serves every block's cycle search; arcs are only
        // followed between faces of the same owner.
        std::vector<FaceId> up(poset.size(), -1);
        std::vector<std::uint8_t> matched(poset.size(), 0);
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            detail::check_structural(poset, blocks[b].matching);
            for (const MorsePair& p : blocks[b].matching.pairs) {
                if (owner[p.upper] != static_cast<std::int32_t>(b) ||
                    owner[p.lower] != static_cast<std::int32_t>(b))
                    throw std::invalid_argument("cluster block matching leaves its block");
                if (matched[p.upper] || matched[p.lower])
                    throw std::invalid_argument("cluster block matching violates M1");
                matched[p.upper] = matched[p.lower] = 1;
                up[p.lower] = p.upper;
                result.pairs.push_back(p);
            }
        }
        enum : std::uint8_t { WHITE, GRAY, BLACK };
        std::vector<std::uint8_t> color(poset.size(), WHITE);
        struct Frame {
            FaceId node;
            EdgeMask pending;
        };
        std::vector<Frame> stack;
        auto pending_of = [&](FaceId x) {
            EdgeMask upper = poset.faces[up[x]];
            return upper & ~(upper ^ poset.faces[x]);
        };
        for (FaceId start = 0; start < poset.size(); ++start) {
            if (up[start] < 0 || color[start] != WHITE) continue;
            color[start] = GRAY;
            stack.push_back({start, pending_of(start)});
            while (!stack.empty()) {
                Frame& f = stack.back();
                if (f.pending == 0) {
                    color[f.node] = BLACK;
                    stack.pop_back();
                    continue;
                }
                EdgeMask bit = f.pending & (~f.pending + 1);
                f.pending ^= bit;
                FaceId next = poset.index_of(poset.faces[up[f.node]] ^ bit);
                if (next < 0 || up[next] < 0) continue;
                if (owner[next] != owner[f.node]) continue;  // only block-internal arcs
                if (color[next] == GRAY)
                    throw std::invalid_argument(
                        "cluster block matching is not acyclic inside its block");
                if (color[next] == WHITE) {
                    color[next] = GRAY;
                    stack.push_back({next, pending_of(next)});
                }
            }
        }
    }

    // Comparability digraph: b -> c when some face of b is contained in
    // some face of c.  The Cluster Lemma needs this to be a partial
    // order, i.e. the strict relation must have no directed cycle.
    std::size_t nb = blocks.size();
    std::vector<EdgeMask> block_union(nb, 0);
    for (std::size_t b = 0; b < nb; ++b)
        for (FaceId f : blocks[b].faces) block_union[b] |= poset.faces[f];
    std::vector<std::vector<int>> adj(nb);
    for (std::size_t i = 0; i < nb; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            if (i == j) continue;
            // x <= y needs x inside the union of block j; a cheap
            // prefilter before the pairwise subset scan.
            bool related = false;
            for (FaceId x : blocks[i].faces) {
                EdgeMask mx = poset.faces[x];
                if ((mx & ~block_union[j]) != 0) continue;
                for (FaceId y : blocks[j].faces)
                    if ((mx & ~poset.faces[y]) == 0) {
                        related = true;
                        break;
                    }
                if (related) break;
            }
            if (related) adj[i].push_back(static_cast<int>(j));
        }
    }
    // Cycle detection on the block digraph.
    std::vector<std::uint8_t> color(nb, 0);
    std::vector<int> path;
    std::vector<int> found_cycle;
    std::function<bool(int)> dfs = [&](int v) -> bool {
        color[v] = 1;
        path.push_back(v);
        for (int w : adj[v]) {
            if (color[w] == 1) {
                auto it = std::find(path.begin(), path.end(), w);
                found_cycle.assign(it, path.end());
                found_cycle.push_back(w);
                return true;
            }
            if (color[w] == 0 && dfs(w)) return true;
        }
        color[v] = 2;
        path.pop_back();
        return false;
    };
    for (std::size_t v = 0; v < nb; ++v)
        if (color[v] == 0 && dfs(static_cast<int>(v)))
            throw cluster_order_error(
                "cluster blocks are not partially ordered by comparability", found_cycle);

    VerificationReport r = detail::verify_impl(poset, result, &in_union);
    if (!r.valid())
        throw std::logic_error("cluster composition failed verification on the block union");
    return result;
}

}  // namespace matchplex

#endif
