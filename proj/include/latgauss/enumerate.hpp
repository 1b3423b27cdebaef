#ifndef LATGAUSS_ENUMERATE_HPP
#define LATGAUSS_ENUMERATE_HPP

#include <functional>
#include <vector>

#include "latgauss/lattice.hpp"

namespace latgauss {

struct SvpResult {
    std::vector<Int> coeffs;
    RatVec vector;
    Rat norm2;
};

struct CvpResult {
    std::vector<Int> coeffs;
    RatVec vector;  // lattice vector y
    Rat dist2;      // ||y - t||^2
};

// Shortest nonzero vector, ties broken by lexicographically smallest
// coefficient vector.
SvpResult svp_enum(const Basis& B);
SvpResult svp_enum(const Lattice& L, const RationalGS& gs);

// Closest lattice vector to t; depth-first Schnorr-Euchner enumeration with
// the pruning radius initialized from the Babai nearest-plane point; ties
// broken lexicographically on coefficients. With require_in_span the call
// fails on targets outside the row span, otherwise the off-span component is
// treated as a constant offset.
CvpResult cvp_enum(const Basis& B, const RatVec& t);
CvpResult cvp_enum(const Lattice& L, const RationalGS& gs, const RatVec& t,
                   bool require_in_span = true);

// Visits every x with ||B^T x - t||^2 <= radius2 (full-space distance,
// including any off-span component of t). dist2 passed to the callback is the
// floating-point value.
using BallVisitor = std::function<void(const std::vector<long long>& coeffs, real_t dist2)>;
void enumerate_ball(const Lattice& L, const RationalGS& gs, const RatVec& t,
                    real_t radius2, const BallVisitor& visit);

// Same, driven entirely by cached float GS data; t given by its GS
// coordinates plus a constant squared offset orthogonal to the span.
void enumerate_ball_float(const GramSchmidt& fgs, const std::vector<real_t>& target_gs_coords,
                          real_t perp2, real_t radius2, const BallVisitor& visit);

uint64_t count_ball(const Lattice& L, const RationalGS& gs, const RatVec& t, real_t radius2);

}  // namespace latgauss

#endif
