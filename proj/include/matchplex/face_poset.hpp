#ifndef MATCHPLEX_FACE_POSET_HPP
#define MATCHPLEX_FACE_POSET_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "matchplex/families.hpp"

namespace matchplex {

using FaceId = std::int32_t;

/// Explicit face poset of a complex.  For simplicial kinds it holds
/// every face including the empty one; for quotient kinds (FC, BFC) it
/// holds exactly the non-collapsed cells, and incidences into collapsed
/// faces simply do not exist (they attach to the basepoint).
///
/// Faces are sorted by (edge count, bitset value); lookups binary-search
/// inside the edge-count bucket.
struct FacePoset {
    bool bipartite = false;
    bool quotient = false;
    int n = 0;        // general ground
    int r = 0, s = 0; // bipartite ground
    int ground_bits = 0;
    std::vector<EdgeMask> faces;
    std::vector<FaceId> bucket_offset;  // per edge count, size ground_bits + 2

    FaceId size() const { return static_cast<FaceId>(faces.size()); }
    int dim(FaceId i) const { return popcount64(faces[i]) - 1; }

    FaceId index_of(EdgeMask mask) const {
        int pc = popcount64(mask);
        if (pc > ground_bits) return -1;
        auto begin = faces.begin() + bucket_offset[pc];
        auto end = faces.begin() + bucket_offset[pc + 1];
        auto it = std::lower_bound(begin, end, mask);
        if (it == end || *it != mask) return -1;
        return static_cast<FaceId>(it - faces.begin());
    }

    /// Codimension-1 subfaces of face i that are present in the poset.
    std::vector<FaceId> subfaces(FaceId i) const {
        std::vector<FaceId> out;
        EdgeMask mask = faces[i];
        EdgeMask rest = mask;
        while (rest) {
            EdgeMask bit = rest & (~rest + 1);
            FaceId j = index_of(mask ^ bit);
            if (j >= 0) out.push_back(j);
            rest ^= bit;
        }
        return out;
    }

    void finalize() {
        std::sort(faces.begin(), faces.end(), [](EdgeMask a, EdgeMask b) {
            int pa = popcount64(a), pb = popcount64(b);
            return pa != pb ? pa < pb : a < b;
        });
        bucket_offset.assign(ground_bits + 2, 0);
        for (EdgeMask m : faces) bucket_offset[popcount64(m) + 1] += 1;
        for (int i = 1; i < static_cast<int>(bucket_offset.size()); ++i)
            bucket_offset[i] += bucket_offset[i - 1];
    }
};

inline FacePoset face_poset(const FamilySpec& spec, const EnumerationOptions& opts = {}) {
    FacePoset poset;
    poset.bipartite = spec.bipartite_ground;
    poset.quotient = spec.quotient();
    poset.n = spec.n;
    poset.r = spec.r;
    poset.s = spec.s;
    poset.ground_bits = spec.ground_bits();
    poset.faces = enumerate_faces(spec, opts);
    poset.finalize();
    return poset;
}

}  // namespace matchplex

#endif
