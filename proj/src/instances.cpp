#include "latgauss/instances.hpp"

#include <sstream>

namespace latgauss {

Basis gen_basis(int n, int entry_bound, Rng& rng) {
    if (n < 1 || entry_bound < 1) throw precondition_error("gen_basis: bad parameters");
    for (;;) {
        RatMat m(n, RatVec(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m[i][j] = Rat(static_cast<long>(rng.below(2 * entry_bound + 1)) - entry_bound);
        try {
            return Basis(std::move(m));
        } catch (const degenerate_basis_error&) {
        }
    }
}

Instance gen_instance(int n, int entry_bound, uint64_t seed, TargetMode mode, double noise) {
    Rng rng(splitmix64(seed));
    Instance inst;
    inst.basis = gen_basis(n, entry_bound, rng);
    const long denom = 1L << 20;
    switch (mode) {
        case TargetMode::kUniform: {
            RatVec t(n, Rat(0));
            for (int i = 0; i < n; ++i)
                axpy(t, Rat(static_cast<long>(rng.below(denom)), denom), inst.basis.vectors[i]);
            inst.target = t;
            break;
        }
        case TargetMode::kNearLattice: {
            RatVec t(n, Rat(0));
            for (int i = 0; i < n; ++i)
                axpy(t, Rat(static_cast<long>(rng.below(5)) - 2), inst.basis.vectors[i]);
            // noise as a dyadic rational box around the lattice point
            Rat scale(static_cast<long>(noise * denom), denom);
            for (int i = 0; i < n; ++i) {
                Rat u(static_cast<long>(rng.below(2 * denom + 1)) - denom, denom);
                t[i] += u * scale;
            }
            inst.target = t;
            break;
        }
        case TargetMode::kDeepHole: {
            RatVec t(n, Rat(0));
            uint64_t c1 = rng.below(uint64_t{1} << n);
            uint64_t c2 = rng.below(uint64_t{1} << n);
            for (int i = 0; i < n; ++i) {
                long m = static_cast<long>(((c1 >> i) & 1) + ((c2 >> i) & 1));
                if (m) axpy(t, Rat(m, 2), inst.basis.vectors[i]);
            }
            inst.target = t;
            break;
        }
    }
    return inst;
}

uint64_t instance_hash(const Basis& B, const RatVec& t) {
    std::ostringstream ss;
    write_basis_file(ss, B, &t);
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : ss.str()) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace latgauss
