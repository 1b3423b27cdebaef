#include "latgauss/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace latgauss {

namespace {

constexpr real_t kNegInf = -std::numeric_limits<real_t>::infinity();

// Streaming log-sum-exp with Kahan compensation; rescales when a larger
// exponent arrives, which preserves relative accuracy.
struct LogAccum {
    real_t mx = kNegInf;
    real_t sum = 0;
    real_t comp = 0;
    uint64_t count = 0;

    void kadd(real_t v) {
        real_t y = v - comp;
        real_t t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    void add(real_t e) {
        ++count;
        if (sum == 0) {
            mx = e;
            sum = 1;
            comp = 0;
            return;
        }
        if (e <= mx) {
            kadd(std::exp(e - mx));
        } else {
            real_t f = std::exp(mx - e);
            sum *= f;
            comp *= f;
            mx = e;
            kadd(1.0L);
        }
    }
    bool empty() const { return count == 0; }
    real_t log() const { return empty() ? kNegInf : mx + std::log(sum); }
};

// Analytic bound on sum_{x in L - t, ||x|| > R} rho_s(x), via the lattice
// point-count bound applied to geometric shells: the shell (R 2^j, R 2^{j+1}]
// holds at most 2 ceil(4 R 2^{j+1} / lambda)^n - 1 points, each of weight at
// most exp(-pi (R 2^j)^2 / s^2).
real_t tail_bound_log(real_t R, real_t s, real_t lambda, int n) {
    LogAccum acc;
    real_t prev_term = kNegInf;
    for (int j = 0; j < 220; ++j) {
        real_t rj = R * std::ldexp(1.0L, j);
        real_t rnext = rj * 2;
        real_t count_log = std::log(2.0L) + n * std::log(std::ceil(4 * rnext / lambda));
        real_t term = count_log + log_rho(s, rj * rj);
        acc.add(term);
        bool decaying = j > 0 && term < prev_term - 0.7L;  // ratio < 1/2
        if (decaying && term < acc.log() - 45.0L) {
            // remainder dominated by a geometric series with ratio <= 1/2
            acc.add(term + 0.7L);
            return acc.log();
        }
        prev_term = term;
    }
    return std::numeric_limits<real_t>::infinity();
}

}  // namespace

real_t rho(real_t s, const std::vector<real_t>& x) {
    real_t d2 = 0;
    for (real_t v : x) d2 += v * v;
    return std::exp(log_rho(s, d2));
}

real_t rho(const GaussianParam& s, const std::vector<real_t>& x) {
    return rho(s.value(), x);
}

MassOracle::MassOracle(const Lattice& L, const RationalGS& gs)
    : lattice_(L), gs_(gs), fgs_(to_float_gs(gs)) {
    if (rank() > kDeskDimCap) throw precondition_error("mass oracle beyond desk-scale dimension cap");
    lambda1_ = std::sqrt(to_real(svp_enum(lattice_, gs_).norm2));
}

MassOracle::MassOracle(const Basis& B) : MassOracle(B, rational_gram_schmidt(B)) {}

std::vector<real_t> MassOracle::gs_coords_of(const RatVec& t) const {
    std::vector<real_t> tc(rank());
    for (int i = 0; i < rank(); ++i)
        tc[i] = to_real(dot(t, gs_.gs[i]) / gs_.gs_norm2[i]);
    return tc;
}

real_t MassOracle::perp2_of(const RatVec& t) const {
    RatVec res = t;
    for (int i = 0; i < rank(); ++i) {
        Rat c = dot(res, gs_.gs[i]) / gs_.gs_norm2[i];
        axpy(res, -c, gs_.gs[i]);
    }
    return to_real(norm2(res));
}

MassOracle::CoreResult MassOracle::mass_core(const std::vector<real_t>& tc, real_t perp2,
                                             real_t s_val, real_t eps_rel, real_t lambda,
                                             bool per_coset) const {
    const int n = rank();
    // Babai residual from the float GS data bounds the distance to the
    // nearest point and anchors the initial radius.
    real_t babai2 = 0;
    {
        std::vector<real_t> x(n, 0.0L);
        for (int i = n - 1; i >= 0; --i) {
            real_t c = tc[i];
            for (int j = i + 1; j < n; ++j) c -= fgs_.mu[j][i] * x[j];
            real_t z = std::floor(c + 0.5L);
            x[i] = z;
            babai2 += (z - c) * (z - c) * fgs_.gs_norm2[i];
        }
    }
    real_t R = std::sqrt(babai2 + perp2) + s_val * (std::sqrt(static_cast<real_t>(n)) + 1);

    std::vector<LogAccum> buckets;
    real_t prev_log = kNegInf;
    for (int iter = 0; iter < 48; ++iter) {
        LogAccum total;
        buckets.assign(per_coset ? (size_t{1} << n) : 0, LogAccum{});
        enumerate_ball_float(fgs_, tc, perp2, R * R,
                             [&](const std::vector<long long>& cf, real_t d2) {
                                 real_t e = log_rho(s_val, d2);
                                 total.add(e);
                                 if (per_coset) {
                                     uint64_t key = 0;
                                     for (size_t i = 0; i < cf.size(); ++i)
                                         key |= static_cast<uint64_t>(cf[i] & 1) << i;
                                     buckets[key].add(e);
                                 }
                             });
        if (!total.empty()) {
            real_t lg = total.log();
            real_t tail_rel = std::exp(tail_bound_log(R, s_val, lambda, n) - lg);
            real_t inc_rel = prev_log == kNegInf ? 1.0L : -std::expm1(prev_log - lg);
            real_t slop = static_cast<real_t>(total.count) * 2e-18L;
            if (tail_rel <= eps_rel / 2 && inc_rel <= eps_rel / 2) {
                CoreResult out;
                out.log_mass = lg;
                out.rel_err = tail_rel + std::max(inc_rel, 0.0L) + slop;
                out.radius = R;
                if (per_coset) {
                    out.coset_log.resize(buckets.size());
                    for (size_t k = 0; k < buckets.size(); ++k)
                        out.coset_log[k] = buckets[k].log();
                }
                return out;
            }
            prev_log = lg;
        }
        R *= 2;
    }
    throw convergence_error("mass did not converge");
}

MassEstimate MassOracle::mass(const RatVec& t, const GaussianParam& s, real_t eps_rel) const {
    auto res = mass_core(gs_coords_of(t), perp2_of(t), s.value(), eps_rel, lambda1_, false);
    return {res.log_mass, res.rel_err};
}

MassOracle::MassResult MassOracle::mass_certified(const RatVec& t, const GaussianParam& s,
                                                  real_t eps_rel) const {
    auto res = mass_core(gs_coords_of(t), perp2_of(t), s.value(), eps_rel, lambda1_, false);
    return {{res.log_mass, res.rel_err}, res.radius};
}

MassEstimate MassOracle::centered_mass(const GaussianParam& s, real_t eps_rel) const {
    RatVec zero(lattice_.ambient(), Rat(0));
    return mass(zero, s, eps_rel);
}

MassEstimate MassOracle::coset_mass(const RatVec& t, const CosetLabel& c, const GaussianParam& s,
                                    real_t eps_rel) const {
    // 2L + rep - t scaled down by 2: enumerate L against (t - rep)/2 with
    // parameter s/2; the mass is identical.
    RatVec shifted = sub(t, coset_representative(lattice_, c));
    for (auto& q : shifted) q /= 2;
    auto res = mass_core(gs_coords_of(shifted), perp2_of(shifted), s.value() / 2, eps_rel,
                         lambda1_, false);
    return {res.log_mass, res.rel_err};
}

MassOracle::CosetDecomposition MassOracle::coset_decomposition(const RatVec& t,
                                                               const GaussianParam& s,
                                                               real_t eps_rel) const {
    const int n = rank();
    // Per-coset relative truncation error can exceed the total's by up to the
    // inverse mass fraction; tightening by 2^n keeps the max coset certified.
    real_t eps_pass = eps_rel / std::ldexp(1.0L, n + 1);
    auto res = mass_core(gs_coords_of(t), perp2_of(t), s.value(), eps_pass, lambda1_, true);

    CosetDecomposition out;
    out.total = {res.log_mass, res.rel_err * std::ldexp(1.0L, n + 1)};
    out.coset.resize(res.coset_log.size());
    real_t best = kNegInf;
    for (size_t k = 0; k < res.coset_log.size(); ++k) {
        out.coset[k] = {res.coset_log[k], out.total.rel_err};
        if (res.coset_log[k] > best) {
            best = res.coset_log[k];
            out.max_key = k;
        }
    }
    return out;
}

real_t MassOracle::m_target(const RatVec& t, const GaussianParam& s, real_t eps_rel) const {
    auto dec = coset_decomposition(t, s, eps_rel);
    return std::exp(dec.total.log_mass - dec.coset[dec.max_key].log_mass);
}

}  // namespace latgauss
