#include "latgauss/checks.hpp"

#include <algorithm>
#include <cmath>

namespace latgauss {

namespace {

real_t logsumexp(const std::vector<real_t>& xs) {
    real_t mx = -1e4932L;
    for (real_t x : xs) mx = std::max(mx, x);
    if (mx == -1e4932L) return mx;
    real_t acc = 0;
    for (real_t x : xs) acc += std::exp(x - mx);
    return mx + std::log(acc);
}

}  // namespace

IdentityCheck check_rs_identity(const MassOracle& oracle, const RatVec& x, const RatVec& y,
                                const GaussianParam& s, real_t eps_rel) {
    const real_t eps = eps_rel / 4;
    GaussianParam s_up = s.raised(1);  // sqrt(2) s, exact dyadic

    MassEstimate lx = oracle.mass(x, s, eps);
    MassEstimate ly = oracle.mass(y, s, eps);
    real_t lhs = lx.log_mass + ly.log_mass;

    RatVec xpy = add(x, y);
    RatVec xmy = sub(x, y);
    const int n = oracle.rank();
    std::vector<real_t> terms;
    terms.reserve(size_t{1} << n);
    for (uint64_t key = 0; key < (uint64_t{1} << n); ++key) {
        CosetLabel c = label_from_key(key, n);
        MassEstimate a = oracle.coset_mass(xpy, c, s_up, eps);
        MassEstimate b = oracle.coset_mass(xmy, c, s_up, eps);
        terms.push_back(a.log_mass + b.log_mass);
    }
    real_t rhs = logsumexp(terms);
    IdentityCheck out;
    out.lhs_log = lhs;
    out.rhs_log = rhs;
    out.residual = std::fabs(-std::expm1(rhs - lhs));
    return out;
}

HolderCheck check_rs_holder(const MassOracle& oracle, const RatVec& t, const GaussianParam& s,
                            real_t eps_rel) {
    const real_t eps = eps_rel / 4;
    auto dec_s = oracle.coset_decomposition(t, s, eps);
    GaussianParam s_dn = s.halved();  // s/sqrt(2)
    auto dec_dn = oracle.coset_decomposition(t, s_dn, eps);
    MassEstimate centered = oracle.centered_mass(s_dn, eps);

    HolderCheck out;
    out.lhs_log = 2 * dec_s.coset[dec_s.max_key].log_mass;
    out.rhs_log = dec_dn.coset[dec_dn.max_key].log_mass + centered.log_mass;
    out.margin = -std::expm1(out.lhs_log - out.rhs_log);
    return out;
}

LadderTrace coset_ladder(const MassOracle& oracle, const RatVec& t, const GaussianParam& s,
                         int ell, real_t eps_rel, real_t tolerance) {
    if (ell < 1) throw precondition_error("coset_ladder requires ell >= 1");
    const int n = oracle.rank();
    const real_t eps = eps_rel / 4;

    // Truncate the infinite product when the exponent weight drops below
    // 2^-40; the remaining factors are bounded via theta monotonicity
    // (theta decreasing toward 1), contributing at most theta(i+J)^{2^-J}.
    const int J = 41;
    std::vector<real_t> theta_log(ell + J + 2);
    for (int j = 0; j < static_cast<int>(theta_log.size()); ++j)
        theta_log[j] = oracle.centered_mass(s.raised(-j), eps).log_mass;

    LadderTrace out;
    out.ell = ell;
    out.qualify_bound = std::exp2(3.0L * n / (4.0L * ell));
    out.S.resize(ell);
    out.R.resize(ell);

    for (int i = 1; i <= ell; ++i) {
        real_t acc = 0;
        for (int j = 1; j <= J; ++j) acc += std::ldexp(theta_log[i + j], -j);
        out.S[i - 1] = std::exp(acc - theta_log[i + 2]);
        out.R[i - 1] = std::exp(theta_log[i + 1] - theta_log[i + 2]);
    }
    out.chosen_i = 0;
    for (int i = 1; i <= ell; ++i) {
        if (out.S[i - 1] <= out.qualify_bound * (1 + tolerance)) {
            out.chosen_i = i;
            break;
        }
    }
    if (out.chosen_i == 0) throw error("ladder violation");

    // Sandwich with y a closest vector to t.
    CvpResult closest = cvp_enum(oracle.lattice(), oracle.exact_gs(), t, false);
    real_t y_dist2 = to_real(closest.dist2);
    out.sandwich.resize(ell);
    for (int i = 1; i <= ell; ++i) {
        GaussianParam si = s.raised(-i);
        auto dec = oracle.coset_decomposition(t, si, eps);
        real_t mid = dec.coset[dec.max_key].log_mass - log_rho(si.value(), y_dist2) -
                     theta_log[i + 2];
        out.sandwich[i - 1] = std::exp(mid);
    }
    return out;
}

}  // namespace latgauss
