#ifndef LATGAUSS_INSTANCES_HPP
#define LATGAUSS_INSTANCES_HPP

#include "latgauss/lattice.hpp"
#include "latgauss/rng.hpp"

namespace latgauss {

enum class TargetMode {
    kUniform,    // uniform (dyadic, 20 bits) in the fundamental parallelepiped
    kNearLattice,  // lattice point plus small dyadic ambient noise
    kDeepHole,   // average of two random parallelepiped corners
};

struct Instance {
    Basis basis;
    RatVec target;
};

// Integer entries uniform in [-entry_bound, entry_bound], resampled until the
// Gram determinant is nonzero; deterministic in the seed.
Basis gen_basis(int n, int entry_bound, Rng& rng);
Instance gen_instance(int n, int entry_bound, uint64_t seed,
                      TargetMode mode = TargetMode::kUniform, double noise = 1.0 / 64);

uint64_t instance_hash(const Basis& B, const RatVec& t);

}  // namespace latgauss

#endif
