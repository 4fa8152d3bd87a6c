#ifndef MATCHPLEX_MORSE_BUILDERS_HPP
#define MATCHPLEX_MORSE_BUILDERS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "matchplex/gallai_edmonds.hpp"
#include "matchplex/morse.hpp"
#include "matchplex/triangle_trees.hpp"

// Executable constructions of the four explicit Morse matchings.
//
// build_fc_matching(n)    on Sigma(n):   critical cells = NFC graphs + trees of triangles
// build_bfc_matching(q,s) on Sigma(q,s): critical cells = NBFC graphs + C(s-1,q) cells
// build_nm_matching(n,k)  on NM_k(n):    critical cells = forests of triangles
// build_bnm_matching(r,s,k) on BNM_k(r,s): C(r-1,k-1)*C(s-1,k-1) critical cells
//
// Each construction follows its proof step by step with the stated
// tie-breaks (pair on edge 12 / 1-1bar first; then the two smallest
// elements of A; then per-block matchings and recursion).  Pairs are
// only ever added when the partner lands in the same step-local set, so
// condition M1 holds by bookkeeping; acyclicity is never assumed — the
// per-block compositions go through cluster_compose and the final
// matchings are certified by verify() in the callers.

namespace matchplex {

struct BuilderOptions {
    enum class Claims { Auto, On, Off };
    /// Re-derive the proof's intermediate claims on every face visited
    /// during construction (Auto: on for desk-small instances).
    Claims claims = Claims::Auto;
};

struct BuilderResult {
    FacePoset poset;
    MorseMatching matching;
};

namespace detail {

using MaskPair = std::pair<EdgeMask, EdgeMask>;  // (upper, lower)
using VertexSet = std::uint16_t;                 // bit v-1 = local vertex v

inline void claim(bool ok, const char* what) {
    if (!ok) throw std::logic_error(std::string("morse builder claim violated: ") + what);
}

/// Gallai-Edmonds data over local vertex bitmasks, derived from a nu
/// table by the defining characterization of D.
struct LocalGE {
    VertexSet D = 0, A = 0, C = 0;
    std::vector<VertexSet> comps;  // connected components of G|_D
    int nu = 0;
};

struct LocalGround {
    int nv = 0;                                  // local vertex count
    int nbits = 0;                               // local edge slots
    std::vector<std::pair<int, int>> ends;       // local edge -> (u, v), u < v
    std::vector<EdgeMask> inc;                   // local incident-edge masks, inc[v], 1-based
    std::vector<std::array<int, 16>> edge_at;    // edge_at[u][v] = local edge index or -1

    int edge(int u, int v) const {
        if (u > v) std::swap(u, v);
        return edge_at[u][v];
    }
};

/// Product Morse matching on a box of factors: in stage i the first
/// i-1 coordinates are pinned to critical cells, coordinate i runs
/// through the factor's pairs, and the remaining coordinates run over
/// all members.  Criticals of the product are the all-critical tuples.
struct ProductFactor {
    const std::vector<EdgeMask>* members;
    const std::vector<MaskPair>* pairs;
    const std::vector<EdgeMask>* criticals;
};

inline void product_matching(EdgeMask base, const std::vector<ProductFactor>& factors,
                             std::vector<MaskPair>& out_pairs,
                             std::vector<EdgeMask>& out_criticals) {
    std::size_t c = factors.size();
    std::vector<std::vector<EdgeMask>> prefix(c + 1), suffix(c + 1);
    prefix[0] = {0};
    for (std::size_t i = 1; i <= c; ++i)
        for (EdgeMask acc : prefix[i - 1])
            for (EdgeMask t : *factors[i - 1].criticals) prefix[i].push_back(acc | t);
    suffix[c] = {0};
    for (std::size_t i = c; i-- > 0;)
        for (EdgeMask g : *factors[i].members)
            for (EdgeMask acc : suffix[i + 1]) suffix[i].push_back(g | acc);
    for (std::size_t i = 0; i < c; ++i)
        for (EdgeMask pm : prefix[i])
            for (auto [u, l] : *factors[i].pairs)
                for (EdgeMask sm : suffix[i + 1])
                    out_pairs.push_back({base | pm | u | sm, base | pm | l | sm});
    for (EdgeMask pm : prefix[c]) out_criticals.push_back(base | pm);
}

inline LocalGE local_ge(const LocalGround& ground, EdgeMask mask,
                        const std::vector<std::uint8_t>& nut) {
    LocalGE ge;
    ge.nu = nut[mask];
    for (int v = 1; v <= ground.nv; ++v)
        if (nut[mask & ~ground.inc[v]] == ge.nu) ge.D |= VertexSet(1u << (v - 1));
    // Adjacency over local vertices.
    std::array<VertexSet, 17> adj{};
    EdgeMask rest = mask;
    while (rest) {
        int e = __builtin_ctzll(rest);
        rest &= rest - 1;
        auto [u, v] = ground.ends[e];
        adj[u] |= VertexSet(1u << (v - 1));
        adj[v] |= VertexSet(1u << (u - 1));
    }
    for (int v = 1; v <= ground.nv; ++v) {
        VertexSet bit = VertexSet(1u << (v - 1));
        if (ge.D & bit) continue;
        if (adj[v] & ge.D)
            ge.A |= bit;
        else
            ge.C |= bit;
    }
    VertexSet seen = 0;
    for (int v = 1; v <= ground.nv; ++v) {
        VertexSet bit = VertexSet(1u << (v - 1));
        if (!(ge.D & bit) || (seen & bit)) continue;
        VertexSet comp = bit, frontier = bit;
        while (frontier) {
            int x = __builtin_ctz(frontier) + 1;
            frontier &= frontier - 1;
            VertexSet grow = VertexSet(adj[x] & ge.D & ~comp);
            comp |= grow;
            frontier |= grow;
        }
        seen |= comp;
        ge.comps.push_back(comp);
    }
    return ge;
}

/// The Morse matching on Sigma(V) whose critical cells are the
/// not-factor-critical graphs plus the trees of triangles on V.  Only
/// the pairs and the factor-critical side of the critical set are
/// materialized: every pair joins two factor-critical graphs, so the
/// NFC faces are critical by omission.
struct FcData {
    std::vector<EdgeMask> members;    // factor-critical graphs on V (host masks)
    std::vector<MaskPair> pairs;      // the complete matching (host masks)
    std::vector<EdgeMask> criticals;  // critical FC cells = trees of triangles on V
};

class FcMachine {
  public:
    FcMachine(int host_n, BuilderOptions::Claims claims) : host_n_(host_n), claims_(claims) {}

    const FcData& build(const std::vector<Vertex>& V) {
        auto it = cache_.find(V);
        if (it != cache_.end()) return it->second;
        FcData data = construct(V);
        return cache_.emplace(V, std::move(data)).first->second;
    }

    bool checking(const std::vector<Vertex>& V) const {
        if (claims_ == BuilderOptions::Claims::On) return true;
        if (claims_ == BuilderOptions::Claims::Off) return false;
        return V.size() <= 5;
    }

  private:
    int host_n_;
    BuilderOptions::Claims claims_;
    std::map<std::vector<Vertex>, FcData> cache_;

    LocalGround make_ground(const std::vector<Vertex>& V) const {
        LocalGround g;
        g.nv = static_cast<int>(V.size());
        g.inc.assign(g.nv + 1, 0);
        g.edge_at.assign(g.nv + 1, {});
        for (auto& row : g.edge_at) row.fill(-1);
        for (int u = 1; u <= g.nv; ++u)
            for (int v = u + 1; v <= g.nv; ++v) {
                g.edge_at[u][v] = g.nbits;
                g.ends.push_back({u, v});
                ++g.nbits;
            }
        for (int e = 0; e < g.nbits; ++e) {
            g.inc[g.ends[e].first] |= EdgeMask{1} << e;
            g.inc[g.ends[e].second] |= EdgeMask{1} << e;
        }
        return g;
    }

    /// Host edge index of the local edge e for vertex set V.
    std::vector<int> host_edges(const std::vector<Vertex>& V, const LocalGround& g) const {
        std::vector<int> out(g.nbits);
        for (int e = 0; e < g.nbits; ++e)
            out[e] = edge_index(V[g.ends[e].first - 1], V[g.ends[e].second - 1], host_n_);
        return out;
    }

    FcData construct(const std::vector<Vertex>& V) {
        if (V.size() % 2 == 0)
            throw std::logic_error("fc construction reached an even vertex set");
        FcData data;
        if (V.size() == 1) {
            data.members = {0};
            data.criticals = {0};
            return data;
        }

        LocalGround ground = make_ground(V);
        std::vector<int> to_host = host_edges(V, ground);
        auto spread = [&](EdgeMask local) {
            EdgeMask host = 0;
            while (local) {
                int e = __builtin_ctzll(local);
                local &= local - 1;
                host |= EdgeMask{1} << to_host[e];
            }
            return host;
        };

        const std::size_t count = std::size_t{1} << ground.nbits;
        std::vector<std::uint8_t> nut(count);
        for (EdgeMask m = 0; m < count; ++m) {
            Graph g(ground.nv, m);
            BlossomSearch search(g);
            search.run_to_maximum();
            int size = 0;
            for (int v = 1; v <= ground.nv; ++v)
                if (search.mate[v] > v) ++size;
            nut[m] = static_cast<std::uint8_t>(size);
        }
        const int target = (ground.nv - 1) / 2;
        std::vector<std::uint8_t> fc(count);
        for (EdgeMask m = 0; m < count; ++m) {
            bool ok = true;
            for (int v = 1; v <= ground.nv && ok; ++v)
                if (nut[m & ~ground.inc[v]] != target) ok = false;
            fc[m] = ok;
        }

        const bool check = checking(V);
        const EdgeMask e12 = EdgeMask{1} << ground.edge(1, 2);

        // Step 0: pair G+12 with G over factor-critical G without 12.
        std::vector<EdgeMask> c0;
        for (EdgeMask m = 0; m < count; ++m) {
            if (!fc[m]) continue;
            data.members.push_back(spread(m));
            if (!(m & e12))
                data.pairs.push_back({spread(m | e12), spread(m)});
            else if (!fc[m ^ e12])
                c0.push_back(m);
        }

        // Step 1: inside C0, pair on the edge joining the two smallest
        // elements of A(G-12).  The pair partner keeps the same
        // Gallai-Edmonds data, so membership in C0 is stable; the code
        // still checks it before pairing.
        std::map<std::array<VertexSet, 4>, std::vector<EdgeMask>> blocks;  // (a,X,Y,Z)
        auto c0_ge = [&](EdgeMask m) { return local_ge(ground, m ^ e12, nut); };
        auto in_c0 = [&](EdgeMask m) { return fc[m] && (m & e12) && !fc[m ^ e12]; };

        std::vector<std::pair<EdgeMask, EdgeMask>> m1_pairs_local;
        std::unordered_set<EdgeMask> m1_matched;
        for (EdgeMask m : c0) {
            LocalGE ge = c0_ge(m);
            if (check) {
                claim(ge.nu == target, "step 0: nu(G-12) = (n-1)/2 for G in C0");
                claim((ge.D & 1) && (ge.D & 2), "step 0: vertices 1 and 2 lie in D(G-12)");
                VertexSet comp1 = 0, comp2 = 0;
                for (VertexSet c : ge.comps) {
                    if (c & 1) comp1 = c;
                    if (c & 2) comp2 = c;
                }
                claim(comp1 != comp2, "claim 1: vertices 1 and 2 lie in distinct D-components");
                claim(ge.A != 0, "claim 2: A(G-12) is nonempty");
            }
            if (popcount64(ge.A) < 2) continue;
            int a = __builtin_ctz(ge.A) + 1;
            int b = __builtin_ctz(ge.A & (ge.A - 1)) + 1;
            EdgeMask eab = EdgeMask{1} << ground.edge(a, b);
            if (m & eab) continue;  // the pair is recorded from its lower face
            EdgeMask partner = m | eab;
            bool partner_ok = in_c0(partner);
            if (partner_ok) {
                LocalGE pge = c0_ge(partner);
                partner_ok = popcount64(pge.A) >= 2 && (__builtin_ctz(pge.A) + 1) == a &&
                             (__builtin_ctz(pge.A & (pge.A - 1)) + 1) == b;
            }
            if (check)
                claim(partner_ok, "step 1: adding the edge ab preserves the decomposition");
            if (partner_ok) {
                m1_pairs_local.push_back({partner, m});
                m1_matched.insert(partner);
                m1_matched.insert(m);
            }
        }
        for (auto [u, l] : m1_pairs_local) data.pairs.push_back({spread(u), spread(l)});

        // Step 2: bucket the remaining critical cells by (a, X, Y, Z).
        for (EdgeMask m : c0) {
            if (m1_matched.count(m)) continue;
            LocalGE ge = c0_ge(m);
            if (popcount64(ge.A) >= 2) {
                claim(false, "claim 5: every C0 face with |A| >= 2 is matched in step 1");
                continue;
            }
            claim(popcount64(ge.A) == 1, "claim 5: critical C0 faces have |A(G-12)| = 1");
            claim(ge.comps.size() == 2, "claim 5: G-12 has exactly two D-components");
            VertexSet comp1 = (ge.comps[0] & 1) ? ge.comps[0] : ge.comps[1];
            VertexSet comp2 = (ge.comps[0] & 1) ? ge.comps[1] : ge.comps[0];
            claim((comp1 & 1) && (comp2 & 2), "claim 5: components contain vertices 1 and 2");
            std::array<VertexSet, 4> key = {ge.A, VertexSet(comp1 & ~1u), VertexSet(comp2 & ~2u),
                                            ge.C};
            auto [it, fresh] = blocks.emplace(key, std::vector<EdgeMask>{});
            it->second.push_back(m);
            (void)fresh;
        }

        // Per-block matchings M(1), M(2) and the three-component
        // recursion, composed under the Cluster Lemma at the end.
        std::vector<std::vector<EdgeMask>> block_faces_local;
        std::vector<std::vector<MaskPair>> block_pairs_local;
        for (const auto& [key, members] : blocks) {
            int a = __builtin_ctz(key[0]) + 1;
            VertexSet X = key[1], Y = key[2], Z = key[3];
            std::unordered_set<EdgeMask> member_set(members.begin(), members.end());
            std::vector<MaskPair> pairs;

            EdgeMask e1a = EdgeMask{1} << ground.edge(1, a);
            EdgeMask e2a = EdgeMask{1} << ground.edge(2, a);

            // M(1): toggle the edge 1a inside the block.
            std::unordered_set<EdgeMask> matched;
            for (EdgeMask m : members) {
                if (m & e1a) continue;
                if (member_set.count(m | e1a)) {
                    pairs.push_back({m | e1a, m});
                    matched.insert(m | e1a);
                    matched.insert(m);
                }
            }
            // C(1) and M(2): toggle 2a among the M(1)-criticals.
            std::unordered_set<EdgeMask> c1;
            for (EdgeMask m : members)
                if (!matched.count(m)) c1.insert(m);
            if (check) {
                auto a_hits = [&](EdgeMask m, VertexSet side) {
                    EdgeMask hits = 0;
                    for (int v = 1; v <= ground.nv; ++v)
                        if (side & (1u << (v - 1)))
                            hits |= m & (EdgeMask{1} << ground.edge(std::min(v, a), std::max(v, a)));
                    return hits;
                };
                for (EdgeMask m : members)
                    claim((c1.count(m) != 0) == (a_hits(m, X) == 0),
                          "step 2: M(1)-critical iff a has no neighbor in X");
            }
            for (EdgeMask m : c1) {
                if (m & e2a) continue;
                if (c1.count(m | e2a)) {
                    pairs.push_back({m | e2a, m});
                    matched.insert(m | e2a);
                    matched.insert(m);
                }
            }
            std::vector<EdgeMask> c2;
            for (EdgeMask m : members)
                if (!matched.count(m)) c2.push_back(m);

            // Recursion: C(2) = {12,1a,2a} + FC(X+1) x FC(Y+2) x FC(Z+a).
            auto to_host_vertices = [&](VertexSet set, int extra) {
                std::vector<Vertex> out{V[extra - 1]};
                for (int v = 1; v <= ground.nv; ++v)
                    if (set & (1u << (v - 1))) out.push_back(V[v - 1]);
                std::sort(out.begin(), out.end());
                return out;
            };
            const FcData& sub1 = build(to_host_vertices(X, 1));
            const FcData& sub2 = build(to_host_vertices(Y, 2));
            const FcData& sub3 = build(to_host_vertices(Z, a));
            EdgeMask base = spread(e12 | e1a | e2a);

            std::vector<MaskPair> host_pairs;
            for (auto [u, l] : pairs) host_pairs.push_back({spread(u), spread(l)});
            std::vector<ProductFactor> factors{
                {&sub1.members, &sub1.pairs, &sub1.criticals},
                {&sub2.members, &sub2.pairs, &sub2.criticals},
                {&sub3.members, &sub3.pairs, &sub3.criticals}};
            std::vector<EdgeMask> block_criticals;
            product_matching(base, factors, host_pairs, block_criticals);

            if (check) {
                // C(2) must be exactly the product set.
                std::unordered_set<EdgeMask> c2_host;
                for (EdgeMask m : c2) c2_host.insert(spread(m));
                std::size_t expect = sub1.members.size() * sub2.members.size() * sub3.members.size();
                claim(c2_host.size() == expect,
                      "step 2: C(2) is the product of the component FC families");
                for (EdgeMask t : block_criticals)
                    claim(c2_host.count(t) == 1, "step 2: product criticals lie in C(2)");
            }

            for (EdgeMask t : block_criticals) data.criticals.push_back(t);

            std::vector<EdgeMask> faces_host;
            faces_host.reserve(members.size());
            for (EdgeMask m : members) faces_host.push_back(spread(m));
            block_faces_local.push_back(std::move(faces_host));
            // Collect the block's own pairs: M(1), M(2) and the stages.
            block_pairs_local.push_back(std::move(host_pairs));
        }

        // Compose the per-block matchings under the Cluster Lemma on
        // the face poset of Sigma(V) restricted to all block faces.
        if (!block_faces_local.empty()) {
            FacePoset sigma;
            sigma.n = host_n_;
            sigma.ground_bits = host_n_ * (host_n_ - 1) / 2;
            for (EdgeMask m = 0; m < count; ++m) sigma.faces.push_back(spread(m));
            sigma.finalize();
            std::vector<ClusterBlock> cluster;
            for (std::size_t b = 0; b < block_faces_local.size(); ++b) {
                ClusterBlock cb;
                for (EdgeMask host : block_faces_local[b]) cb.faces.push_back(sigma.index_of(host));
                for (auto [u, l] : block_pairs_local[b])
                    cb.matching.add_pair(sigma.index_of(u), sigma.index_of(l));
                cluster.push_back(std::move(cb));
            }
            MorseMatching composed = cluster_compose(sigma, cluster);
            for (const MorsePair& p : composed.pairs)
                data.pairs.push_back({sigma.faces[p.upper], sigma.faces[p.lower]});
        }

        std::sort(data.criticals.begin(), data.criticals.end());
        std::sort(data.members.begin(), data.members.end());
        return data;
    }
};

/// Matching on Sigma(q,s) whose criticals are the not-q-factor-critical
/// graphs plus binom(s-1, q) cells with 2q edges.  As in the FC case,
/// every pair joins two cells, so the NBFC part is critical by omission.
struct BfcData {
    std::vector<EdgeMask> members;    // q-factor-critical masks
    std::vector<MaskPair> pairs;
    std::vector<EdgeMask> criticals;  // the binom(s-1,q) cells
};

class BfcMachine {
  public:
    explicit BfcMachine(BuilderOptions::Claims claims) : claims_(claims) {}

    const BfcData& build(int q, int s) {
        auto it = cache_.find({q, s});
        if (it != cache_.end()) return it->second;
        BfcData data = construct(q, s);
        return cache_.emplace(std::make_pair(q, s), std::move(data)).first->second;
    }

    bool checking(int q, int s) const {
        if (claims_ == BuilderOptions::Claims::On) return true;
        if (claims_ == BuilderOptions::Claims::Off) return false;
        return q <= 2 && s <= 4;
    }

  private:
    BuilderOptions::Claims claims_;
    std::map<std::pair<int, int>, BfcData> cache_;

    BfcData construct(int q, int s) {
        BfcData data;
        if (q == 0) {
            // The induction base: Sigma(0,s) is the single empty face,
            // which is 0-factor critical; no pairs are needed.
            data.members = {0};
            data.criticals = {0};
            return data;
        }
        const int bits = q * s;
        auto bip = [&](int u, int v) { return (u - 1) * s + (v - 1); };
        std::vector<EdgeMask> left_mask(q + 1, 0), right_mask(s + 1, 0);
        for (int u = 1; u <= q; ++u)
            for (int v = 1; v <= s; ++v) {
                left_mask[u] |= EdgeMask{1} << bip(u, v);
                right_mask[v] |= EdgeMask{1} << bip(u, v);
            }

        const std::size_t count = std::size_t{1} << bits;
        std::vector<std::uint8_t> nut(count);
        for (EdgeMask m = 0; m < count; ++m)
            nut[m] = static_cast<std::uint8_t>(nu_bipartite(BipartiteGraph(q, s, m)));
        std::vector<std::uint8_t> qfc(count);
        for (EdgeMask m = 0; m < count; ++m) {
            bool ok = true;
            for (int v = 1; v <= s && ok; ++v)
                if (nut[m & ~right_mask[v]] != q) ok = false;
            qfc[m] = ok;
        }

        const bool check = checking(q, s);
        const EdgeMask e11 = EdgeMask{1} << bip(1, 1);

        // Step 0: pair G+1-1bar with G over q-factor-critical G.
        std::vector<EdgeMask> c0;
        for (EdgeMask m = 0; m < count; ++m) {
            if (!qfc[m]) continue;
            data.members.push_back(m);
            if (!(m & e11))
                data.pairs.push_back({m | e11, m});
            else if (!qfc[m ^ e11])
                c0.push_back(m);
        }

        // Gallai-Edmonds of G-1-1bar viewed as a general graph: vertex
        // bits 0..q-1 are the left side, q..q+s-1 the right side.
        struct BipGE {
            std::uint32_t D = 0, A = 0, C = 0;
            int nu = 0;
        };
        auto ge_of = [&](EdgeMask gp) {
            BipGE ge;
            ge.nu = nut[gp];
            for (int u = 1; u <= q; ++u)
                if (nut[gp & ~left_mask[u]] == ge.nu) ge.D |= 1u << (u - 1);
            for (int v = 1; v <= s; ++v)
                if (nut[gp & ~right_mask[v]] == ge.nu) ge.D |= 1u << (q + v - 1);
            for (int u = 1; u <= q; ++u) {
                if (ge.D & (1u << (u - 1))) continue;
                bool touches = false;
                for (int v = 1; v <= s && !touches; ++v)
                    if ((gp >> bip(u, v)) & 1u)
                        if (ge.D & (1u << (q + v - 1))) touches = true;
                (touches ? ge.A : ge.C) |= 1u << (u - 1);
            }
            for (int v = 1; v <= s; ++v) {
                if (ge.D & (1u << (q + v - 1))) continue;
                bool touches = false;
                for (int u = 1; u <= q && !touches; ++u)
                    if ((gp >> bip(u, v)) & 1u)
                        if (ge.D & (1u << (u - 1))) touches = true;
                (touches ? ge.A : ge.C) |= 1u << (q + v - 1);
            }
            return ge;
        };
        const std::uint32_t lefts = (q >= 32) ? ~0u : ((1u << q) - 1);

        // Step 1: pair on the edge a-cbar for the smallest a in A' and
        // cbar in C' among the right side.
        std::unordered_set<EdgeMask> m1_matched;
        std::vector<MaskPair> m1_pairs;
        auto in_c0 = [&](EdgeMask m) { return qfc[m] && (m & e11) && !qfc[m ^ e11]; };
        for (EdgeMask m : c0) {
            BipGE ge = ge_of(m ^ e11);
            if (check) {
                claim(ge.nu == q, "step 0: nu(G-1-1bar) = q for G in C0");
                claim((ge.D >> (q + 0)) & 1u, "claim 1: 1bar lies in D'");
                claim((ge.D & lefts) == 0, "claim 2: D' is contained in the right side");
                claim((ge.A & ~lefts) == 0, "claim 2: A' is contained in the left side");
                claim((ge.C >> 0) & 1u, "claim 3: the left vertex 1 lies in C'");
            }
            if ((ge.A & lefts) == 0) continue;
            int a = __builtin_ctz(ge.A & lefts) + 1;
            std::uint32_t c_rights = ge.C >> q;
            claim(c_rights != 0, "step 1: C' meets the right side");
            int cbar = __builtin_ctz(c_rights) + 1;
            EdgeMask eac = EdgeMask{1} << bip(a, cbar);
            if (!(m & eac)) continue;  // pairs are recorded from the upper face
            EdgeMask partner = m ^ eac;
            bool partner_ok = in_c0(partner);
            if (partner_ok) {
                BipGE pge = ge_of(partner ^ e11);
                partner_ok = (pge.A & lefts) != 0 &&
                             __builtin_ctz(pge.A & lefts) + 1 == a &&
                             (pge.C >> q) != 0 && __builtin_ctz(pge.C >> q) + 1 == cbar;
            }
            if (check)
                claim(partner_ok, "claims 4-5: removing a-cbar preserves the decomposition");
            if (partner_ok) {
                m1_pairs.push_back({m, partner});
                m1_matched.insert(m);
                m1_matched.insert(partner);
            }
        }
        for (auto p : m1_pairs) data.pairs.push_back(p);

        // Step 2: bucket the rest by X = D' minus {1bar}.
        std::map<std::uint32_t, std::vector<EdgeMask>> blocks;
        for (EdgeMask m : c0) {
            if (m1_matched.count(m)) continue;
            BipGE ge = ge_of(m ^ e11);
            claim((ge.A & lefts) == 0, "step 2: critical C0 cells have empty A'");
            std::uint32_t d_rights = ge.D >> q;
            claim(popcount64(d_rights) == s - q, "step 2: |D'| = s - q");
            claim(d_rights & 1u, "step 2: 1bar lies in D'");
            if (check)
                for (int v = 2; v <= s; ++v)
                    if ((d_rights >> (v - 1)) & 1u)
                        claim((m & right_mask[v]) == 0, "step 2: D' minus 1bar is isolated in G");
            blocks[d_rights & ~1u].push_back(m);
        }
        claim(static_cast<long long>(blocks.size()) <=
                  static_cast<long long>(binomial(s - 1, s - q - 1)),
              "step 2: at most binom(s-1, q) blocks");

        // Step 3 per block: pair on 1-cbar, then recurse on the cells
        // over the q remaining right vertices.
        std::vector<std::vector<EdgeMask>> block_faces;
        std::vector<std::vector<MaskPair>> block_pairs;
        for (auto& [X, members] : blocks) {
            std::unordered_set<EdgeMask> member_set(members.begin(), members.end());
            std::vector<MaskPair> pairs;

            std::vector<int> rights;  // C' on the right side, sorted
            for (int v = 2; v <= s; ++v)
                if (!((X >> (v - 1)) & 1u)) rights.push_back(v);
            int cbar = rights.front();
            EdgeMask e1c = EdgeMask{1} << bip(1, cbar);

            std::unordered_set<EdgeMask> matched;
            for (EdgeMask m : members) {
                if (m & e1c) continue;
                if (member_set.count(m | e1c)) {
                    pairs.push_back({m | e1c, m});
                    matched.insert(m | e1c);
                    matched.insert(m);
                }
            }
            std::vector<EdgeMask> c2;
            for (EdgeMask m : members)
                if (!matched.count(m)) c2.push_back(m);

            const BfcData& sub = build(q - 1, q);
            auto lift = [&](EdgeMask sub_mask) {
                EdgeMask out = 0;
                while (sub_mask) {
                    int e = __builtin_ctzll(sub_mask);
                    sub_mask &= sub_mask - 1;
                    int u = e / q + 1, v = e % q + 1;  // on the ([q-1], [q]) ground
                    out |= EdgeMask{1} << bip(u + 1, rights[v - 1]);
                }
                return out;
            };
            EdgeMask base = e11 | e1c;
            if (check) {
                std::unordered_set<EdgeMask> c2_set(c2.begin(), c2.end());
                claim(c2_set.size() == sub.members.size(),
                      "claim 8: C2[X] matches the cells of bfc(q-1, q)");
                for (EdgeMask g : sub.members)
                    claim(c2_set.count(base | lift(g)) == 1,
                          "claim 8: lifted cells land in C2[X]");
            }
            for (auto [u, l] : sub.pairs) pairs.push_back({base | lift(u), base | lift(l)});
            for (EdgeMask t : sub.criticals) data.criticals.push_back(base | lift(t));

            block_faces.push_back(members);
            block_pairs.push_back(std::move(pairs));
        }

        // Compose the per-block matchings under the Cluster Lemma.
        if (!block_faces.empty()) {
            FacePoset sigma;
            sigma.bipartite = true;
            sigma.r = q;
            sigma.s = s;
            sigma.ground_bits = bits;
            sigma.faces.resize(count);
            for (EdgeMask m = 0; m < count; ++m) sigma.faces[m] = m;
            sigma.finalize();
            std::vector<ClusterBlock> cluster;
            for (std::size_t b = 0; b < block_faces.size(); ++b) {
                ClusterBlock cb;
                for (EdgeMask m : block_faces[b]) cb.faces.push_back(sigma.index_of(m));
                for (auto [u, l] : block_pairs[b])
                    cb.matching.add_pair(sigma.index_of(u), sigma.index_of(l));
                cluster.push_back(std::move(cb));
            }
            MorseMatching composed = cluster_compose(sigma, cluster);
            for (const MorsePair& p : composed.pairs)
                data.pairs.push_back({sigma.faces[p.upper], sigma.faces[p.lower]});
        }

        std::sort(data.criticals.begin(), data.criticals.end());
        return data;
    }
};

}  // namespace detail

/// Morse matching on the full simplex Sigma(n) whose critical cells are
/// every not-factor-critical graph and the trees of triangles on [n].
inline BuilderResult build_fc_matching(int n, const BuilderOptions& options = {}) {
    if (n < 1 || n % 2 == 0) throw std::domain_error("build_fc_matching: n must be odd");
    if (n > 7) throw std::domain_error("build_fc_matching: resource-bounded to n <= 7");
    detail::FcMachine machine(n, options.claims);
    const detail::FcData& data = machine.build(range_1_to(n));

    BuilderResult result;
    result.poset = face_poset(FamilySpec::full_simplex(n));
    for (auto [u, l] : data.pairs)
        result.matching.add_pair(result.poset.index_of(u), result.poset.index_of(l));
    return result;
}

/// Morse matching on the full bipartite simplex Sigma(q,s) whose
/// critical cells are every not-q-factor-critical graph plus
/// binom(s-1, q) cells of dimension 2q-1.
inline BuilderResult build_bfc_matching(int q, int s, const BuilderOptions& options = {}) {
    if (q < 0 || q >= s) throw std::domain_error("build_bfc_matching: need 0 <= q < s");
    if (q * s > 24) throw std::domain_error("build_bfc_matching: resource-bounded to q*s <= 24");
    detail::BfcMachine machine(options.claims);
    const detail::BfcData& data = machine.build(q, s);

    BuilderResult result;
    result.poset = face_poset(FamilySpec::full_simplex_bipartite(q, s));
    for (auto [u, l] : data.pairs)
        result.matching.add_pair(result.poset.index_of(u), result.poset.index_of(l));
    return result;
}

/// Morse matching on NM_k(n) whose critical cells are the forests of
/// triangles on [n-1] with n-2k+1 components (vertex n isolated), each
/// of dimension 3k-4.
inline BuilderResult build_nm_matching(int n, int k, const BuilderOptions& options = {}) {
    if (n < 2 || k < 1) throw std::domain_error("build_nm_matching: need n >= 2, k >= 1");
    if (n * (n - 1) / 2 > 21)
        throw std::domain_error("build_nm_matching: resource-bounded to n <= 7");
    const bool check = options.claims == BuilderOptions::Claims::On ||
                       (options.claims == BuilderOptions::Claims::Auto && n <= 5);

    BuilderResult result;
    result.poset = face_poset(FamilySpec::nm(n, k));
    const FacePoset& poset = result.poset;
    auto nut = detail::nu_table_general(n);

    // Step 0: for v = 1, ..., n-1 in order, toggle the edge vn among the
    // faces not already matched.  A face settles at the first v where
    // either vn is present (matched downward) or adding vn keeps the
    // matching number below k (matched upward); pairs are recorded from
    // the upper face.
    std::vector<EdgeMask> step0_critical;
    std::vector<int> evn(n);
    for (int v = 1; v < n; ++v) evn[v] = edge_index(v, n, n);
    for (FaceId i = 0; i < poset.size(); ++i) {
        EdgeMask m = poset.faces[i];
        bool matched = false;
        for (int v = 1; v < n && !matched; ++v) {
            EdgeMask bit = EdgeMask{1} << evn[v];
            if (m & bit) {
                result.matching.add_pair(i, poset.index_of(m ^ bit));
                matched = true;
            } else if (nut[m | bit] < k) {
                matched = true;  // recorded from the upper side
            }
        }
        if (!matched) step0_critical.push_back(m);
    }

    // Step 1: the critical faces split by the partition of [n-1] their
    // components induce; each block is a product of FC families and is
    // matched by the factor-critical construction componentwise.
    detail::FcMachine machine(n, options.claims);
    Graph host(n);
    std::vector<EdgeMask> inc(n + 1);
    for (Vertex v = 1; v <= n; ++v) inc[v] = host.incident_mask(v);

    std::map<std::vector<std::uint16_t>, std::vector<EdgeMask>> blocks;
    for (EdgeMask m : step0_critical) {
        detail::claim((m & inc[n]) == 0, "step 0: critical faces have vertex n isolated");
        if (check)
            for (int v = 1; v < n; ++v)
                detail::claim(nut[m | (EdgeMask{1} << evn[v])] == k,
                              "step 0: G+vn contains a matching of size k");
        // Components of G-n, singletons included.
        std::vector<bool> inside(n + 1, true);
        inside[0] = false;
        inside[n] = false;
        auto comps = components_within(Graph(n, m), inside);
        detail::claim(static_cast<int>(comps.size()) == n - 2 * k + 1,
                      "step 1: critical faces split into n-2k+1 components");
        std::vector<std::uint16_t> key;
        for (const auto& comp : comps) {
            std::uint16_t bits = 0;
            for (Vertex v : comp) bits |= static_cast<std::uint16_t>(1u << (v - 1));
            key.push_back(bits);
        }
        std::sort(key.begin(), key.end());
        blocks[key].push_back(m);
    }

    std::vector<ClusterBlock> cluster;
    for (auto& [key, members] : blocks) {
        std::vector<const detail::FcData*> subs;
        for (std::uint16_t bits : key) {
            std::vector<Vertex> V;
            for (Vertex v = 1; v < n; ++v)
                if (bits & (1u << (v - 1))) V.push_back(v);
            detail::claim(V.size() % 2 == 1, "step 1: components have odd size");
            subs.push_back(&machine.build(V));
        }
        std::vector<detail::ProductFactor> factors;
        for (const detail::FcData* sub : subs)
            factors.push_back({&sub->members, &sub->pairs, &sub->criticals});
        std::vector<detail::MaskPair> pairs;
        std::vector<EdgeMask> criticals;
        detail::product_matching(0, factors, pairs, criticals);
        if (check) {
            std::unordered_set<EdgeMask> member_set(members.begin(), members.end());
            std::size_t expect = 1;
            for (const detail::FcData* sub : subs) expect *= sub->members.size();
            detail::claim(member_set.size() == expect,
                          "step 1: each block is the product of its component FC families");
            for (EdgeMask t : criticals)
                detail::claim(member_set.count(t) == 1,
                              "step 1: forests of triangles lie in their block");
        }
        ClusterBlock cb;
        for (EdgeMask m : members) cb.faces.push_back(poset.index_of(m));
        for (auto [u, l] : pairs) cb.matching.add_pair(poset.index_of(u), poset.index_of(l));
        cluster.push_back(std::move(cb));
    }
    if (!cluster.empty()) {
        MorseMatching composed = cluster_compose(poset, cluster);
        for (const MorsePair& p : composed.pairs) result.matching.pairs.push_back(p);
    }
    return result;
}

/// Morse matching on BNM_k(r,s) with binom(r-1,k-1)*binom(s-1,k-1)
/// critical cells of dimension 2k-3.
inline BuilderResult build_bnm_matching(int r, int s, int k, const BuilderOptions& options = {}) {
    if (r < 1 || s < 1 || k < 1)
        throw std::domain_error("build_bnm_matching: need r, s, k >= 1");
    if (r * s > 20) throw std::domain_error("build_bnm_matching: resource-bounded to r*s <= 20");
    const bool check = options.claims == BuilderOptions::Claims::On ||
                       (options.claims == BuilderOptions::Claims::Auto && r <= 3 && s <= 3);

    BuilderResult result;
    result.poset = face_poset(FamilySpec::bnm(r, s, k));
    const FacePoset& poset = result.poset;
    auto nut = detail::nu_table_bipartite(r, s);
    auto bip = [&](int u, int v) { return (u - 1) * s + (v - 1); };

    // Step 0: toggle the edges r-vbar for vbar = 1bar, ..., sbar in order.
    std::vector<EdgeMask> step0_critical;
    for (FaceId i = 0; i < poset.size(); ++i) {
        EdgeMask m = poset.faces[i];
        bool matched = false;
        for (int v = 1; v <= s && !matched; ++v) {
            EdgeMask bit = EdgeMask{1} << bip(r, v);
            if (m & bit) {
                result.matching.add_pair(i, poset.index_of(m ^ bit));
                matched = true;
            } else if (nut[m | bit] < k) {
                matched = true;
            }
        }
        if (!matched) step0_critical.push_back(m);
    }

    // Step 1: by Koenig duality exactly k-1 left vertices are not
    // isolated in a critical face; for each choice the block is a
    // relabelled copy of the cells of bfc(k-1, s).
    std::vector<EdgeMask> left_mask(r + 1, 0);
    for (int u = 1; u <= r; ++u)
        for (int v = 1; v <= s; ++v) left_mask[u] |= EdgeMask{1} << bip(u, v);

    detail::BfcMachine machine(options.claims);
    std::map<std::vector<int>, std::vector<EdgeMask>> blocks;
    for (EdgeMask m : step0_critical) {
        detail::claim((m & left_mask[r]) == 0, "step 0: critical faces have vertex r isolated");
        if (check)
            for (int v = 1; v <= s; ++v)
                detail::claim(nut[m | (EdgeMask{1} << bip(r, v))] == k,
                              "step 0: G+r-vbar contains a matching of size k");
        std::vector<int> support;
        for (int u = 1; u < r; ++u)
            if (m & left_mask[u]) support.push_back(u);
        detail::claim(static_cast<int>(support.size()) == k - 1,
                      "step 1: exactly k-1 left vertices are not isolated");
        blocks[support].push_back(m);
    }

    std::vector<ClusterBlock> cluster;
    for (auto& [support, members] : blocks) {
        const detail::BfcData& sub = machine.build(k - 1, s);
        auto lift = [&](EdgeMask sub_mask) {
            EdgeMask out = 0;
            while (sub_mask) {
                int e = __builtin_ctzll(sub_mask);
                sub_mask &= sub_mask - 1;
                int u = e / s + 1, v = e % s + 1;
                out |= EdgeMask{1} << bip(support[u - 1], v);
            }
            return out;
        };
        if (check) {
            std::unordered_set<EdgeMask> member_set(members.begin(), members.end());
            detail::claim(member_set.size() == sub.members.size(),
                          "step 1: each block is a relabelled copy of the bfc(k-1,s) cells");
            for (EdgeMask g : sub.members)
                detail::claim(member_set.count(lift(g)) == 1,
                              "step 1: lifted cells land in their block");
        }
        ClusterBlock cb;
        for (EdgeMask m : members) cb.faces.push_back(poset.index_of(m));
        for (auto [u, l] : sub.pairs)
            cb.matching.add_pair(poset.index_of(lift(u)), poset.index_of(lift(l)));
        cluster.push_back(std::move(cb));
    }
    if (!cluster.empty()) {
        MorseMatching composed = cluster_compose(poset, cluster);
        for (const MorsePair& p : composed.pairs) result.matching.pairs.push_back(p);
    }
    return result;
}

}  // namespace matchplex

#endif
