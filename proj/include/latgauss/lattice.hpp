#ifndef LATGAUSS_LATTICE_HPP
#define LATGAUSS_LATTICE_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "latgauss/rational.hpp"

namespace latgauss {

// Row-major list of generators. rank() <= ambient(); internal algorithms
// accept rank-deficient views (projections, recursion sublattices), while the
// public Basis constructor enforces the full-rank square case.
struct Lattice {
    RatMat vectors;  // vectors[i] = b_i, each of length ambient()

    int rank() const { return static_cast<int>(vectors.size()); }
    int ambient() const { return vectors.empty() ? 0 : static_cast<int>(vectors[0].size()); }

    // B^T * c for an integer coefficient vector.
    template <typename I>
    RatVec vector_of(const std::vector<I>& coeffs) const {
        RatVec v(ambient(), Rat(0));
        for (int i = 0; i < rank(); ++i) {
            if (coeffs[i] == 0) continue;
            Rat c;
            if constexpr (std::is_same_v<I, Int>) c = coeffs[i];
            else c = static_cast<long>(coeffs[i]);
            axpy(v, c, vectors[i]);
        }
        return v;
    }
};

// Full-rank basis of an n-dimensional lattice. Throws degenerate_basis_error
// when the generators are dependent or the matrix is not square.
struct Basis : Lattice {
    Basis() = default;
    explicit Basis(RatMat rows);

    int n() const { return rank(); }
};

// Exact rational Gram-Schmidt data. gs[i] = b_i projected orthogonally to
// b_1..b_{i-1}; mu[i][j] = <b_i, gs_j>/|gs_j|^2 for j < i; gs_norm2[i] = |gs_i|^2.
struct RationalGS {
    RatMat gs;
    RatMat mu;               // lower triangular, mu[i][i] = 1
    std::vector<Rat> gs_norm2;

    int rank() const { return static_cast<int>(gs.size()); }
};

// Floating mirror used by enumeration, samplers and mass accumulation.
struct GramSchmidt {
    std::vector<std::vector<real_t>> gs_vectors;
    std::vector<std::vector<real_t>> mu;
    std::vector<real_t> gs_norms;   // ||gs_i||
    std::vector<real_t> gs_norm2;   // ||gs_i||^2

    int rank() const { return static_cast<int>(gs_norms.size()); }
    real_t max_gs_norm() const;
};

RationalGS rational_gram_schmidt(const Lattice& L);
GramSchmidt to_float_gs(const RationalGS& exact);

// Spec operation: orthogonalization of a full-rank basis.
GramSchmidt gram_schmidt(const Basis& B);

// sqrt(1/4 sum ||gs_i||^2), an upper bound on the covering radius.
real_t covering_radius_upper(const GramSchmidt& G);

// Exact coordinates of t in the row span; nullopt when t is outside the span.
std::optional<RatVec> coords_in_span(const Lattice& L, const RationalGS& gs, const RatVec& t);

// Babai nearest-plane point: returns integer coefficients.
std::vector<Int> babai_nearest_plane(const Lattice& L, const RationalGS& gs, const RatVec& t);

// Text format: line 1 "n", then n rows of n rationals, optional "t: ..." line.
struct BasisFile {
    Basis basis;
    std::optional<RatVec> target;
};

BasisFile read_basis_file(std::istream& in);
BasisFile read_basis_file(const std::string& path);
void write_basis_file(std::ostream& out, const Basis& B, const RatVec* target = nullptr);

}  // namespace latgauss

#endif
