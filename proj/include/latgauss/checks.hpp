#ifndef LATGAUSS_CHECKS_HPP
#define LATGAUSS_CHECKS_HPP

#include "latgauss/gaussian.hpp"

namespace latgauss {

// rho_s(L-x) rho_s(L-y) = sum_{c in L/2L} rho_{sqrt2 s}(c-x-y) rho_{sqrt2 s}(c-x+y)
struct IdentityCheck {
    real_t lhs_log;
    real_t rhs_log;
    real_t residual;  // |LHS - RHS| / LHS
};
IdentityCheck check_rs_identity(const MassOracle& oracle, const RatVec& x, const RatVec& y,
                                const GaussianParam& s, real_t eps_rel = kDefaultMassEps);

// max_c rho_s(c-t)^2 <= max_c rho_{s/sqrt2}(c-t) * rho_{s/sqrt2}(L)
struct HolderCheck {
    real_t lhs_log;        // log of max coset mass squared
    real_t rhs_log;
    real_t margin;         // (RHS - LHS)/RHS = 1 - exp(lhs_log - rhs_log)
};
HolderCheck check_rs_holder(const MassOracle& oracle, const RatVec& t, const GaussianParam& s,
                            real_t eps_rel = kDefaultMassEps);

// Coset-mass ladder: theta(j) = rho_{2^{-j/2} s}(L),
// S_i = prod_j theta(i+j)^{1/2^j} / theta(i+2); the first i in [1, ell] with
// S_i <= 2^{3n/(4 ell)} is returned, and the sandwich
// 1 <= max_c rho_{s_i}(c-t) / (rho_{s_i}(y-t) rho_{s_i}(2L)) <= S_i <= 2^{n/4}
// is verified for every i, with y a closest lattice vector to t.
struct LadderTrace {
    int ell = 0;
    std::vector<real_t> S;         // S[i-1] = S_i
    std::vector<real_t> R;         // R[i-1] = theta(i+1)/theta(i+2)
    int chosen_i = 0;
    std::vector<real_t> sandwich;  // mid ratio per i
    real_t qualify_bound = 0;      // 2^{3n/(4 ell)}
};
LadderTrace coset_ladder(const MassOracle& oracle, const RatVec& t, const GaussianParam& s,
                         int ell, real_t eps_rel = kDefaultMassEps,
                         real_t tolerance = 1e-9L);

}  // namespace latgauss

#endif
