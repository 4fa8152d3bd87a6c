#ifndef MATCHPLEX_HOMOLOGY_HPP
#define MATCHPLEX_HOMOLOGY_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "matchplex/families.hpp"
#include "matchplex/snf.hpp"

// Integer chain complexes of the graph complexes: reduced simplicial
// for the monotone kinds (the empty graph is the (-1)-basis), relative
// C(Sigma, Gamma) for the quotient kinds FC and BFC, where boundary
// terms landing in the collapsed subcomplex are dropped.  Homology is
// computed by exact Smith normal form, with ranks re-derived modulo
// three large primes as an independent cross-check.

namespace matchplex {

inline constexpr std::int64_t kRankCheckPrimes[3] = {1048583, 1048589, 1048601};

struct ChainComplex {
    int min_dim = 0;
    int max_dim = -2;  // empty complex when max_dim < min_dim
    // basis_by_dim[d - min_dim] = faces of dimension d, canonically sorted.
    std::vector<std::vector<EdgeMask>> basis_by_dim;

    bool empty() const { return max_dim < min_dim; }
    int levels() const { return empty() ? 0 : max_dim - min_dim + 1; }
    const std::vector<EdgeMask>& basis(int dim) const {
        static const std::vector<EdgeMask> none;
        if (dim < min_dim || dim > max_dim) return none;
        return basis_by_dim[dim - min_dim];
    }

    /// Boundary matrix from dimension dim to dim-1.  Rows index the
    /// (dim-1)-basis, columns the dim-basis; the i-th smallest edge of a
    /// face is dropped with sign (-1)^i, and faces absent from the
    /// complex (collapsed into Gamma for quotients) contribute nothing.
    SparseIntMatrix boundary(int dim) const {
        const auto& domain = basis(dim);
        const auto& codomain = basis(dim - 1);
        SparseIntMatrix mat(static_cast<int>(codomain.size()), static_cast<int>(domain.size()));
        std::unordered_map<EdgeMask, int> codomain_index;
        codomain_index.reserve(codomain.size() * 2);
        for (std::size_t i = 0; i < codomain.size(); ++i)
            codomain_index[codomain[i]] = static_cast<int>(i);
        for (std::size_t c = 0; c < domain.size(); ++c) {
            EdgeMask mask = domain[c];
            EdgeMask rest = mask;
            int sign = 1;
            while (rest) {
                EdgeMask bit = rest & (~rest + 1);
                auto it = codomain_index.find(mask ^ bit);
                if (it != codomain_index.end())
                    mat.add(it->second, static_cast<int>(c), sign);
                sign = -sign;
                rest ^= bit;
            }
        }
        return mat;
    }

    /// Exhaustive check that consecutive boundaries compose to zero.
    bool boundary_squares_to_zero() const {
        for (int d = min_dim + 2; d <= max_dim; ++d) {
            const auto& domain = basis(d);
            std::unordered_map<EdgeMask, int> mid_index, low_index;
            for (std::size_t i = 0; i < basis(d - 1).size(); ++i) mid_index[basis(d - 1)[i]] = 1;
            for (std::size_t i = 0; i < basis(d - 2).size(); ++i) low_index[basis(d - 2)[i]] = 1;
            for (EdgeMask mask : domain) {
                std::map<EdgeMask, long long> acc;
                EdgeMask rest = mask;
                int sign = 1;
                while (rest) {
                    EdgeMask bit = rest & (~rest + 1);
                    EdgeMask mid = mask ^ bit;
                    if (mid_index.count(mid)) {
                        EdgeMask rest2 = mid;
                        int sign2 = 1;
                        while (rest2) {
                            EdgeMask bit2 = rest2 & (~rest2 + 1);
                            if (low_index.count(mid ^ bit2)) acc[mid ^ bit2] += sign * sign2;
                            sign2 = -sign2;
                            rest2 ^= bit2;
                        }
                    }
                    sign = -sign;
                    rest ^= bit;
                }
                for (const auto& [face, value] : acc)
                    if (value != 0) return false;
            }
        }
        return true;
    }

    /// Reduced Euler characteristic from the face census alone.
    std::int64_t euler_characteristic() const {
        std::int64_t chi = 0;
        for (int d = min_dim; d <= max_dim; ++d) {
            std::int64_t count = static_cast<std::int64_t>(basis(d).size());
            chi += (d % 2 == 0) ? count : -count;
        }
        return chi;
    }
};

inline ChainComplex chain_complex(const FamilySpec& spec, const EnumerationOptions& opts = {}) {
    ChainComplex cc;
    auto faces = enumerate_faces(spec, opts);
    if (faces.empty()) {
        cc.min_dim = 0;
        cc.max_dim = -2;
        return cc;
    }
    cc.min_dim = popcount64(faces.front()) - 1;
    cc.max_dim = popcount64(faces.back()) - 1;
    cc.basis_by_dim.assign(cc.levels(), {});
    for (EdgeMask m : faces) cc.basis_by_dim[popcount64(m) - 1 - cc.min_dim].push_back(m);
    return cc;
}

struct HomologyProfile {
    std::map<int, std::int64_t> betti;             // only nonzero entries
    std::map<int, std::vector<BigInt>> torsion;    // invariant factors > 1

    bool torsion_free() const { return torsion.empty(); }
    std::int64_t euler_characteristic() const {
        std::int64_t chi = 0;
        for (const auto& [d, b] : betti) chi += (d % 2 == 0) ? b : -b;
        return chi;
    }
    bool operator==(const HomologyProfile&) const = default;
};

/// Homology of an explicit chain complex (reduced or relative).  The
/// integer rank of each boundary matrix must agree with its rank over
/// F_p for three large primes; disagreement throws, since it would mean
/// one of the two elimination routes is wrong.
inline HomologyProfile homology_of(const ChainComplex& cc) {
    HomologyProfile profile;
    if (cc.empty()) return profile;
    std::vector<SnfResult> snf_by_level(cc.levels() + 1);
    for (int d = cc.min_dim; d <= cc.max_dim + 1; ++d) {
        SparseIntMatrix mat = (d <= cc.max_dim)
                                  ? cc.boundary(d)
                                  : SparseIntMatrix(static_cast<int>(cc.basis(cc.max_dim).size()), 0);
        SnfResult snf = smith_normal_form(mat);
        for (std::int64_t p : kRankCheckPrimes)
            if (rank_mod_p(mat, p) != snf.rank)
                throw std::logic_error("integer rank disagrees with rank mod p");
        snf_by_level[d - cc.min_dim] = std::move(snf);
    }
    for (int d = cc.min_dim; d <= cc.max_dim; ++d) {
        std::int64_t betti = static_cast<std::int64_t>(cc.basis(d).size()) -
                             snf_by_level[d - cc.min_dim].rank -
                             snf_by_level[d - cc.min_dim + 1].rank;
        if (betti != 0) profile.betti[d] = betti;
        std::vector<BigInt> torsion = snf_by_level[d - cc.min_dim + 1].torsion();
        if (!torsion.empty()) profile.torsion[d] = std::move(torsion);
    }
    return profile;
}

/// Reduced (or, for quotient kinds, relative) integer homology.
inline HomologyProfile reduced_homology(const FamilySpec& spec,
                                        const EnumerationOptions& opts = {}) {
    return homology_of(chain_complex(spec, opts));
}

struct EulerCrosscheck {
    std::int64_t chi_from_faces = 0;
    std::int64_t chi_from_betti = 0;
    std::int64_t signed_sum = 0;
    bool agree = false;
};

/// Three routes to the reduced Euler characteristic: alternating face
/// counts, alternating Betti numbers, and the signed member sum (which
/// equals minus chi).
inline EulerCrosscheck euler_crosscheck(const FamilySpec& spec,
                                        const EnumerationOptions& opts = {}) {
    EulerCrosscheck out;
    out.chi_from_faces = chain_complex(spec, opts).euler_characteristic();
    out.chi_from_betti = reduced_homology(spec, opts).euler_characteristic();
    out.signed_sum = signed_euler_sum(spec, opts);
    out.agree = out.chi_from_faces == out.chi_from_betti && out.signed_sum == -out.chi_from_faces;
    return out;
}

struct SuspensionCheck {
    HomologyProfile fc;
    HomologyProfile nfc;
    bool agree = false;
};

/// H_i(FC_n) must equal H_{i-1}(NFC_n): the quotient Sigma/Gamma is a
/// suspension of Gamma.  The two sides come from genuinely different
/// complexes (relative cells vs. plain subcomplex).
inline SuspensionCheck suspension_check(int n, const EnumerationOptions& opts = {}) {
    if (n % 2 == 0 || n < 3) throw std::domain_error("suspension_check: need odd n >= 3");
    SuspensionCheck out;
    out.fc = reduced_homology(FamilySpec::fc(n), opts);
    out.nfc = reduced_homology(FamilySpec::nfc(n), opts);
    HomologyProfile shifted;
    for (const auto& [d, b] : out.nfc.betti) shifted.betti[d + 1] = b;
    for (const auto& [d, t] : out.nfc.torsion) shifted.torsion[d + 1] = t;
    out.agree = shifted == out.fc;
    return out;
}

}  // namespace matchplex

#endif
