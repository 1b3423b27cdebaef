#ifndef LATGAUSS_COSET_HPP
#define LATGAUSS_COSET_HPP

#include <cstdint>
#include <vector>

#include "latgauss/lattice.hpp"

namespace latgauss {

// Canonical representative of L/2L: basis coefficients reduced mod 2.
// label(v) == label(w) iff (v - w)/2 is a lattice vector.
struct CosetLabel {
    std::vector<uint8_t> coeffs;  // entries in {0,1}

    uint64_t key() const {
        uint64_t k = 0;
        for (size_t i = 0; i < coeffs.size(); ++i) k |= static_cast<uint64_t>(coeffs[i]) << i;
        return k;
    }
    bool operator==(const CosetLabel& o) const { return coeffs == o.coeffs; }
};

template <typename I>
inline CosetLabel label_of_coeffs(const std::vector<I>& coeffs) {
    CosetLabel l;
    l.coeffs.resize(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if constexpr (std::is_same_v<I, Int>)
            l.coeffs[i] = static_cast<uint8_t>(mpz_odd_p(coeffs[i].get_mpz_t()) ? 1 : 0);
        else
            l.coeffs[i] = static_cast<uint8_t>(coeffs[i] & 1);
    }
    return l;
}

inline CosetLabel label_from_key(uint64_t key, int n) {
    CosetLabel l;
    l.coeffs.resize(n);
    for (int i = 0; i < n; ++i) l.coeffs[i] = (key >> i) & 1;
    return l;
}

// Spec operation: label of a lattice vector given in ambient coordinates.
// Throws when v is not in L (non-integral coefficients).
CosetLabel coset_label(const Basis& B, const RatVec& v);
CosetLabel coset_label(const Lattice& L, const RationalGS& gs, const RatVec& v);

// Ambient representative sum_i label_i b_i.
RatVec coset_representative(const Lattice& L, const CosetLabel& c);

}  // namespace latgauss

#endif
