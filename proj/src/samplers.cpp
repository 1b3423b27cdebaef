#include "latgauss/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace latgauss {

namespace {

constexpr long long kTableWindowCap = 512;

real_t window_of(real_t s) { return 10.0L * s + 1.0L; }

// 10 significant bytes of an x86 long double, for bit-exact memo keys.
uint64_t ld_key(real_t v) {
    unsigned char buf[sizeof(real_t)] = {};
    std::memcpy(buf, &v, sizeof(real_t));
    uint64_t lo;
    std::memcpy(&lo, buf, 8);
    uint16_t hi;
    std::memcpy(&hi, buf + 8, 2);
    uint64_t state = lo ^ (static_cast<uint64_t>(hi) << 48) ^ 0x9e3779b97f4a7c15ULL;
    return splitmix64(state);
}

// Exact rejection for wide windows: proposal N(center, s'^2/(2 pi)) with
// s'^2 = s^2 (1 + 1/s); accept k = round(x) with probability
// rho_s(k-c) exp(pi (x-c)^2 / s'^2) / M, where log M = pi/(4s) bounds the
// ratio over every cell of the window.
long long rejection_draw(real_t c, real_t s, Rng& rng) {
    const real_t w = window_of(s);
    const real_t s2 = s * s;
    const real_t sp2 = s2 * (1.0L + 1.0L / s);
    const real_t sigma = std::sqrt(sp2 / (2.0L * kPi));
    const real_t logM = kPi / (4.0L * s) + 1e-9L;
    for (;;) {
        real_t x = c + rng.normal() * sigma;
        real_t k = std::floor(x + 0.5L);
        if (std::fabs(k - c) > w) continue;
        real_t la = -kPi * (k - c) * (k - c) / s2 + kPi * (x - c) * (x - c) / sp2 - logM;
        if (rng.uniform01() < std::exp(la)) return static_cast<long long>(k);
    }
}

}  // namespace

AliasTable::AliasTable(const std::vector<real_t>& weights) {
    const size_t n = weights.size();
    cut_.assign(n, 1.0L);
    alias_.resize(n);
    real_t total = 0;
    for (real_t w : weights) total += w;
    std::vector<real_t> scaled(n);
    for (size_t i = 0; i < n; ++i) {
        scaled[i] = weights[i] * n / total;
        alias_[i] = static_cast<uint32_t>(i);
    }
    std::vector<uint32_t> small, large;
    for (size_t i = 0; i < n; ++i) (scaled[i] < 1.0L ? small : large).push_back(i);
    while (!small.empty() && !large.empty()) {
        uint32_t s_ = small.back();
        small.pop_back();
        uint32_t l = large.back();
        cut_[s_] = scaled[s_];
        alias_[s_] = l;
        scaled[l] -= 1.0L - scaled[s_];
        if (scaled[l] < 1.0L) {
            large.pop_back();
            small.push_back(l);
        }
    }
}

Gauss1D::Gauss1D(real_t c, real_t s_param) : center(c), s(s_param) {
    const real_t w = window_of(s);
    long long kmin = static_cast<long long>(std::ceil(c - w));
    long long kmax = static_cast<long long>(std::floor(c + w));
    if (kmax - kmin > kTableWindowCap) return;  // rejection mode
    kmin_ = kmin;
    // shift by the max exponent so tiny s cannot underflow everything
    real_t best = 0;
    {
        real_t nearest = std::floor(c + 0.5L);
        if (nearest < kmin) nearest = static_cast<real_t>(kmin);
        if (nearest > kmax) nearest = static_cast<real_t>(kmax);
        best = log_rho(s, (nearest - c) * (nearest - c));
    }
    std::vector<real_t> weights;
    weights.reserve(kmax - kmin + 1);
    for (long long k = kmin; k <= kmax; ++k) {
        real_t d = static_cast<real_t>(k) - c;
        weights.push_back(std::exp(log_rho(s, d * d) - best));
    }
    table_ = AliasTable(weights);
}

long long Gauss1D::draw(Rng& rng) const {
    if (table_.size() == 0) return rejection_draw(center, s, rng);
    return kmin_ + static_cast<long long>(table_.draw(rng));
}

long long sample_1d(real_t center, real_t s, Rng& rng) {
    if (window_of(s) * 2 > kTableWindowCap) return rejection_draw(center, s, rng);
    Gauss1D g(center, s);
    return g.draw(rng);
}

bool KleinSampler::precondition_holds(const GramSchmidt& fgs, real_t s_value,
                                      real_t klein_factor) {
    real_t floor = klein_factor * std::sqrt(std::log(static_cast<real_t>(fgs.rank() + 2))) *
                   fgs.max_gs_norm();
    return s_value >= floor;
}

KleinSampler::KleinSampler(const Lattice& L, const RationalGS& gs, const RatVec& t,
                           const GaussianParam& s, real_t klein_factor,
                           bool enforce_precondition) {
    GramSchmidt fgs = to_float_gs(gs);
    n_ = fgs.rank();
    if (enforce_precondition && n_ >= 2 &&
        !precondition_holds(fgs, s.value(), klein_factor))
        throw precondition_error("parameter too small for Klein");

    mu_.assign(n_, std::vector<real_t>(n_, 0.0L));
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < i; ++j) mu_[i][j] = fgs.mu[i][j];
    tc_.resize(n_);
    s_i_.resize(n_);
    const real_t sval = s.value();
    for (int i = 0; i < n_; ++i) {
        tc_[i] = to_real(dot(t, gs.gs[i]) / gs.gs_norm2[i]);
        s_i_[i] = sval / fgs.gs_norms[i];
    }
    adj_.resize(n_);
    memo_.resize(n_);
    cacheable_.resize(n_);
    for (int i = 0; i < n_; ++i)
        cacheable_[i] = window_of(s_i_[i]) * 2 <= kTableWindowCap;
    diagonal_ = true;
    for (int i = 0; i < n_ && diagonal_; ++i)
        for (int j = 0; j < i; ++j)
            if (mu_[i][j] != 0.0L) { diagonal_ = false; break; }
    if (diagonal_) {
        fixed_.reserve(n_);
        for (int i = 0; i < n_; ++i) fixed_.emplace_back(tc_[i], s_i_[i]);
    } else {
        last_key_.assign(n_, ~uint64_t{0});
        last_tab_.assign(n_, nullptr);
    }
}

void KleinSampler::draw_into(Rng& rng, coeff_t* out) {
    if (diagonal_) {
        for (int i = n_ - 1; i >= 0; --i) out[i] = static_cast<coeff_t>(fixed_[i].draw(rng));
        return;
    }
    std::copy(tc_.begin(), tc_.end(), adj_.begin());
    for (int i = n_ - 1; i >= 0; --i) {
        real_t c = adj_[i];
        long long z;
        if (cacheable_[i]) {
            uint64_t key = ld_key(c);
            if (last_tab_[i] && last_key_[i] == key) {
                z = last_tab_[i]->draw(rng);
            } else {
                auto& slot = memo_[i];
                auto it = slot.find(key);
                if (it == slot.end()) {
                    if (slot.size() > (1u << 15)) { slot.clear(); last_tab_[i] = nullptr; }
                    it = slot.emplace(key, Gauss1D(c, s_i_[i])).first;
                }
                last_key_[i] = key;
                last_tab_[i] = &it->second;
                z = it->second.draw(rng);
            }
        } else {
            z = rejection_draw(c, s_i_[i], rng);
        }
        out[i] = static_cast<coeff_t>(z);
        real_t zf = static_cast<real_t>(z);
        for (int j = 0; j < i; ++j) adj_[j] -= zf * mu_[i][j];
    }
}

std::vector<coeff_t> KleinSampler::draw(Rng& rng) {
    std::vector<coeff_t> out(n_);
    draw_into(rng, out.data());
    return out;
}

ExactSampler::ExactSampler(const Lattice& L, const RationalGS& gs, const RatVec& t,
                           const GaussianParam& s, real_t support_eps) {
    MassOracle oracle(L, gs);
    dim_ = L.rank();
    const real_t sval = s.value();

    real_t radius = oracle.mass_certified(t, s, support_eps).radius;
    std::vector<real_t> tc = oracle.gs_coords_of(t);
    real_t perp2 = oracle.perp2_of(t);

    real_t best = -1e4932L;
    std::vector<real_t> logs;
    enumerate_ball_float(oracle.float_gs(), tc, perp2, radius * radius,
                         [&](const std::vector<long long>& cf, real_t d2) {
                             for (long long v : cf) points_.push_back(static_cast<coeff_t>(v));
                             real_t e = log_rho(sval, d2);
                             logs.push_back(e);
                             dist2_.push_back(d2);
                             best = std::max(best, e);
                         });
    cdf_.resize(logs.size());
    std::vector<real_t> weights(logs.size());
    real_t acc = 0;
    for (size_t i = 0; i < logs.size(); ++i) {
        weights[i] = std::exp(logs[i] - best);
        acc += weights[i];
        cdf_[i] = acc;
    }
    if (cdf_.empty()) throw error("exact sampler: empty support");
    table_ = AliasTable(weights);
}

size_t ExactSampler::draw_index(Rng& rng) const { return table_.draw(rng); }

std::vector<coeff_t> ExactSampler::draw(Rng& rng) const {
    size_t idx = draw_index(rng);
    return std::vector<coeff_t>(coeffs(idx), coeffs(idx) + dim_);
}

void ExactSampler::draw_into(Rng& rng, coeff_t* out) const {
    size_t idx = draw_index(rng);
    std::copy(coeffs(idx), coeffs(idx) + dim_, out);
}

real_t ExactSampler::prob(size_t idx) const {
    real_t prev = idx == 0 ? 0.0L : cdf_[idx - 1];
    return (cdf_[idx] - prev) / cdf_.back();
}

}  // namespace latgauss
