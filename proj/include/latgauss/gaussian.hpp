#ifndef LATGAUSS_GAUSSIAN_HPP
#define LATGAUSS_GAUSSIAN_HPP

#include <cmath>
#include <map>
#include <vector>

#include "latgauss/coset.hpp"
#include "latgauss/enumerate.hpp"
#include "latgauss/lattice.hpp"

namespace latgauss {

// Gaussian parameter with an exact dyadic sqrt(2)-exponent, so that a ladder
// of halvings lands back on the starting value bit-exactly.
struct GaussianParam {
    real_t base = 1.0L;
    int half_steps = 0;  // value = base * 2^(half_steps/2)

    static GaussianParam of(real_t s) { return {s, 0}; }

    real_t value() const {
        int q = half_steps >= 0 ? half_steps / 2 : -((-half_steps + 1) / 2);
        int r = half_steps - 2 * q;  // r in {0,1}
        real_t v = std::ldexp(base, q);
        if (r) v *= 1.41421356237309504880168872420969808L;
        return v;
    }
    GaussianParam halved() const { return {base, half_steps - 1}; }
    GaussianParam raised(int steps) const { return {base, half_steps + steps}; }
    bool operator==(const GaussianParam& o) const {
        return base == o.base && half_steps == o.half_steps;
    }
};

inline real_t log_rho(real_t s, real_t dist2) { return -kPi * dist2 / (s * s); }

// rho_s(x) = exp(-pi ||x||^2 / s^2)
real_t rho(const GaussianParam& s, const std::vector<real_t>& x);
real_t rho(real_t s, const std::vector<real_t>& x);

// Certified truncated Gaussian mass in the natural-log domain. rel_err bounds
// the relative truncation error (analytic point-count tail bound plus float
// slop).
struct MassEstimate {
    real_t log_mass = 0;
    real_t rel_err = 0;
    real_t value() const { return std::exp(log_mass); }
};

inline MassEstimate mass_mul(const MassEstimate& a, const MassEstimate& b) {
    return {a.log_mass + b.log_mass, a.rel_err + b.rel_err};
}
inline MassEstimate mass_div(const MassEstimate& a, const MassEstimate& b) {
    return {a.log_mass - b.log_mass, a.rel_err + b.rel_err};
}

// Mass oracle bound to one lattice view. All masses are full-space (an
// off-span component of the shift contributes its constant Gaussian factor).
class MassOracle {
  public:
    MassOracle(const Lattice& L, const RationalGS& gs);
    explicit MassOracle(const Basis& B);

    int rank() const { return fgs_.rank(); }

    // rho_s(L - t)
    MassEstimate mass(const RatVec& t, const GaussianParam& s,
                      real_t eps_rel = kDefaultMassEps) const;

    // Mass plus the radius at which the truncation was certified.
    struct MassResult {
        MassEstimate est;
        real_t radius;
    };
    MassResult mass_certified(const RatVec& t, const GaussianParam& s,
                              real_t eps_rel = kDefaultMassEps) const;

    // rho_s(2L + rep(c) - t)
    MassEstimate coset_mass(const RatVec& t, const CosetLabel& c, const GaussianParam& s,
                            real_t eps_rel = kDefaultMassEps) const;

    // All 2^rank coset masses plus the total, from one enumeration pass.
    struct CosetDecomposition {
        std::vector<MassEstimate> coset;  // indexed by label key
        MassEstimate total;
        uint64_t max_key = 0;
    };
    CosetDecomposition coset_decomposition(const RatVec& t, const GaussianParam& s,
                                           real_t eps_rel = kDefaultMassEps) const;

    // m(L - t, s) = rho_s(L - t) / max_c rho_s(c - t); always in [1, 2^rank].
    real_t m_target(const RatVec& t, const GaussianParam& s,
                    real_t eps_rel = kDefaultMassEps) const;

    // Centered lattice mass rho_s(L).
    MassEstimate centered_mass(const GaussianParam& s, real_t eps_rel = kDefaultMassEps) const;

    const Lattice& lattice() const { return lattice_; }
    const RationalGS& exact_gs() const { return gs_; }
    const GramSchmidt& float_gs() const { return fgs_; }
    real_t lambda1() const { return lambda1_; }

    std::vector<real_t> gs_coords_of(const RatVec& t) const;
    real_t perp2_of(const RatVec& t) const;

  private:
    Lattice lattice_;
    RationalGS gs_;
    GramSchmidt fgs_;
    real_t lambda1_;

    struct CoreResult {
        real_t log_mass;
        real_t rel_err;
        real_t radius;
        std::vector<real_t> coset_log;  // empty unless per-coset requested
    };
    CoreResult mass_core(const std::vector<real_t>& tc, real_t perp2, real_t s_val,
                         real_t eps_rel, real_t lambda, bool per_coset) const;
};

}  // namespace latgauss

#endif
