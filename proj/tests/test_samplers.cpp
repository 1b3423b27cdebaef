#include <doctest.h>

#include "latgauss/instances.hpp"
#include "latgauss/samplers.hpp"
#include "latgauss/stats.hpp"

using namespace latgauss;

namespace {

Basis identity_basis(int n) {
    RatMat m(n, RatVec(n, Rat(0)));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return Basis(m);
}

std::map<long long, double> window_probs(real_t c, real_t s) {
    real_t w = 10 * s + 1;
    long long kmin = (long long)std::ceil(c - w), kmax = (long long)std::floor(c + w);
    real_t tot = 0;
    std::map<long long, double> p;
    for (long long k = kmin; k <= kmax; ++k) {
        real_t d = (real_t)k - c;
        real_t v = std::exp(-kPi * d * d / (s * s));
        p[k] = (double)v;
        tot += v;
    }
    for (auto& [k, v] : p) v /= (double)tot;
    return p;
}

}  // namespace

TEST_CASE("sample_1d concentrates for tiny s") {
    Rng rng(3);
    for (int i = 0; i < 10000; ++i) CHECK(sample_1d(0.2L, 0.01L, rng) == 0);
}

TEST_CASE("sample_1d frequencies match the mass oracle at s=1") {
    Rng rng(5);
    const uint64_t N = 200000;
    std::map<long long, uint64_t> obs;
    for (uint64_t i = 0; i < N; ++i) ++obs[sample_1d(0.0L, 1.0L, rng)];
    auto p = window_probs(0, 1);
    CHECK(p[0] == doctest::Approx(0.9204417878).epsilon(1e-9));
    Chi2Tv r = chi2_tv(obs, p);
    CHECK(r.p_value > 1e-4);
    // symmetry Pr[k] = Pr[-k]
    for (long long k = 1; k <= 2; ++k) {
        double a = (double)obs[k], b = (double)obs[-k];
        CHECK(std::fabs(a - b) <= 5 * std::sqrt(a + b + 1));
    }
}

TEST_CASE("table and rejection paths realize the same distribution") {
    // s = 60 forces the rejection path (window > 512); compare against the
    // window-truncated probabilities directly
    Rng rng(7);
    const uint64_t N = 150000;
    std::map<long long, uint64_t> obs;
    for (uint64_t i = 0; i < N; ++i) ++obs[sample_1d(0.37L, 60.0L, rng)];
    auto p = window_probs(0.37L, 60.0L);
    Chi2Tv r = chi2_tv(obs, p);
    CHECK(r.p_value > 1e-4);
}

TEST_CASE("klein on Z^n gives i.i.d. coordinate Gaussians") {
    Basis B = identity_basis(3);
    RationalGS gs = rational_gram_schmidt(B);
    KleinSampler ks(B, gs, RatVec(3, Rat(0)), GaussianParam::of(10.0L));
    Rng rng(11);
    const uint64_t N = 120000;
    std::vector<std::map<long long, uint64_t>> obs(3);
    for (uint64_t i = 0; i < N; ++i) {
        auto v = ks.draw(rng);
        for (int j = 0; j < 3; ++j) ++obs[j][v[j]];
    }
    auto p = window_probs(0, 10);
    for (int j = 0; j < 3; ++j) {
        Chi2Tv r = chi2_tv(obs[j], p);
        CHECK(r.p_value > 1e-4 / 3);
    }
}

TEST_CASE("klein matches exact probabilities on shifted Z^2 below the conservative floor") {
    Basis B = identity_basis(2);
    RationalGS gs = rational_gram_schmidt(B);
    RatVec t{Rat(1, 2), Rat(1, 2)};
    GaussianParam s = GaussianParam::of(3.0L);
    KleinSampler ks(B, gs, t, s, 4.0L, /*enforce=*/false);
    ExactSampler ex(B, gs, t, s);
    Rng rng(13);
    const uint64_t N = 100000;
    std::map<std::vector<int>, uint64_t> obs;
    for (uint64_t i = 0; i < N; ++i) {
        auto v = ks.draw(rng);
        ++obs[std::vector<int>(v.begin(), v.end())];
    }
    std::map<std::vector<int>, double> expd;
    for (size_t j = 0; j < ex.support_size(); ++j)
        expd[std::vector<int>(ex.coeffs(j), ex.coeffs(j) + 2)] = (double)ex.prob(j);
    double tv = 0;
    for (auto& [k, p] : expd) {
        auto it = obs.find(k);
        double f = it == obs.end() ? 0.0 : (double)it->second / N;
        tv += std::fabs(f - p);
    }
    for (auto& [k, c] : obs)
        if (!expd.count(k)) tv += (double)c / N;
    CHECK(tv / 2 <= 0.02);
}

TEST_CASE("klein at huge s equidistributes over cosets of 2L") {
    Rng grng(17);
    Basis B = gen_basis(2, 5, grng);
    RationalGS gs = rational_gram_schmidt(B);
    GramSchmidt fgs = to_float_gs(gs);
    GaussianParam s = GaussianParam::of(1e6L * fgs.max_gs_norm());
    KleinSampler ks(B, gs, RatVec(2, Rat(0)), s);
    Rng rng(19);
    const uint64_t N = 100000;
    std::map<long long, uint64_t> obs;
    for (uint64_t i = 0; i < N; ++i) {
        auto v = ks.draw(rng);
        ++obs[(long long)((v[0] & 1) | ((v[1] & 1) << 1))];
    }
    std::map<long long, double> expd{{0, 0.25}, {1, 0.25}, {2, 0.25}, {3, 0.25}};
    CHECK(chi2_tv(obs, expd).p_value > 1e-4);
}

TEST_CASE("klein precondition error") {
    Basis B = identity_basis(2);
    RationalGS gs = rational_gram_schmidt(B);
    CHECK_THROWS_WITH_AS(
        KleinSampler(B, gs, RatVec(2, Rat(0)), GaussianParam::of(1.0L)),
        "parameter too small for Klein", precondition_error);
    // one dimension needs no floor
    Basis Z1(RatMat{{Rat(1)}});
    RationalGS g1 = rational_gram_schmidt(Z1);
    CHECK_NOTHROW(KleinSampler(Z1, g1, RatVec{Rat(0)}, GaussianParam::of(0.3L)));
}

TEST_CASE("exact sampler frequencies match mass-oracle probabilities") {
    Rng grng(23);
    Basis B = gen_basis(2, 4, grng);
    RationalGS gs = rational_gram_schmidt(B);
    RatVec t(2, Rat(0));
    axpy(t, Rat(3, 7), B.vectors[0]);
    GaussianParam s = GaussianParam::of(2.0L);
    ExactSampler ex(B, gs, t, s);
    MassOracle oracle(B, gs);
    MassEstimate total = oracle.mass(t, s);

    // independent probabilities: per-point rho over the oracle total
    std::map<std::vector<int>, double> expd;
    double psum = 0;
    for (size_t j = 0; j < ex.support_size(); ++j) {
        double p = (double)std::exp(log_rho(s.value(), ex.dist2(j)) - total.log_mass);
        expd[std::vector<int>(ex.coeffs(j), ex.coeffs(j) + 2)] = p;
        psum += p;
    }
    REQUIRE(std::fabs(psum - 1) < 1e-9);
    Rng rng(29);
    const uint64_t N = 120000;
    std::map<std::vector<int>, uint64_t> obs;
    for (uint64_t i = 0; i < N; ++i) {
        auto v = ex.draw(rng);
        ++obs[std::vector<int>(v.begin(), v.end())];
    }
    CHECK(chi2_tv(obs, expd).p_value > 1e-4);
}

TEST_CASE("exact sampler degenerates to the closest vector as s -> 0") {
    Basis B = identity_basis(2);
    RationalGS gs = rational_gram_schmidt(B);
    ExactSampler ex(B, gs, RatVec{Rat(3, 10), Rat(-7, 10)}, GaussianParam::of(0.01L));
    Rng rng(31);
    for (int i = 0; i < 2000; ++i) {
        auto v = ex.draw(rng);
        CHECK(v == std::vector<coeff_t>{0, -1});
    }
    // t = 0 at moderate s: the mode is the origin
    ExactSampler ez(B, gs, RatVec(2, Rat(0)), GaussianParam::of(1.0L));
    std::map<std::vector<coeff_t>, uint64_t> obs;
    for (int i = 0; i < 20000; ++i) ++obs[ez.draw(rng)];
    uint64_t best = 0;
    std::vector<coeff_t> arg;
    for (auto& [k, c] : obs)
        if (c > best) best = c, arg = k;
    CHECK(arg == std::vector<coeff_t>{0, 0});
}
