#ifndef LATGAUSS_HKZ_HPP
#define LATGAUSS_HKZ_HPP

#include "latgauss/enumerate.hpp"
#include "latgauss/lattice.hpp"

namespace latgauss {

struct HKZBasis {
    Basis basis;
    double gamma = 1.0;
};

// Exact HKZ data for internal use on rank-deficient views.
struct HKZData {
    Lattice lattice;   // reduced generators
    RationalGS gs;
};

// Recursive exact HKZ: b_1 attains lambda_1, projected tails are HKZ, and all
// |mu_{i,j}| <= 1/2. A vector already attaining the projected minimum is kept
// as is, so an HKZ basis is a fixed point.
HKZData hkz_reduce(const Lattice& L);
HKZBasis hkz_basis(const Basis& B);

// Completes a gcd-1 integer row vector to a unimodular matrix having it as
// the first row.
std::vector<std::vector<Int>> complete_to_unimodular(const std::vector<Int>& x);

}  // namespace latgauss

#endif
