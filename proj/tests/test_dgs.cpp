#include <doctest.h>

#include "latgauss/dgs.hpp"
#include "latgauss/instances.hpp"

using namespace latgauss;

namespace {

Basis identity_basis(int n) {
    RatMat m(n, RatVec(n, Rat(0)));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return Basis(m);
}

RatVec uniform_target(const Basis& B, Rng& rng) {
    const long denom = 1L << 20;
    RatVec t(B.n(), Rat(0));
    for (int i = 0; i < B.n(); ++i)
        axpy(t, Rat((long)rng.below(denom), denom), B.vectors[i]);
    return t;
}

}  // namespace

TEST_CASE("distance estimates") {
    Rng rng(301);
    for (int trial = 0; trial < 10; ++trial) {
        Basis B = gen_basis(3, 6, rng);
        RatVec t = uniform_target(B, rng);
        HKZData hkz = hkz_reduce(B);
        real_t exact = std::sqrt(to_real(cvp_enum(hkz.lattice, hkz.gs, t, false).dist2));
        DistanceEstimate oracle = distance_estimate_oracle(hkz.lattice, hkz.gs, t);
        oracle.validate();
        CHECK(oracle.upper == doctest::Approx((double)exact));
        DistanceEstimate witness = distance_estimate_witness(hkz, t);
        witness.validate();
        CHECK(witness.upper >= exact * (1 - 1e-12L));  // witnessed upper bound
    }
}

TEST_CASE("shifted sublattice: whole-lattice case when r clears every GS norm") {
    Rng rng(303);
    Basis B = gen_basis(3, 5, rng);
    GramSchmidt fgs = gram_schmidt(B);
    RatVec t = uniform_target(B, rng);
    SublatticeSplit sp = shifted_sublattice(B, t, fgs.max_gs_norm() * 100, 2.0L);
    CHECK(sp.k_index == 4);
    CHECK(sp.sub_rank() == 3);
    for (auto& q : sp.anchor) CHECK(q == 0);
}

TEST_CASE("shifted sublattice on a skewed basis keeps the short direction") {
    Basis B(RatMat{{Rat(1), Rat(0)}, {Rat(0), Rat(100)}});
    SublatticeSplit sp = shifted_sublattice(B, RatVec{Rat(1, 10), Rat(0)}, 2.0L, 2.0L);
    CHECK(sp.sub_rank() == 1);
    CHECK(sp.sub_basis.vectors[0] == RatVec{Rat(1), Rat(0)});
    CHECK(sp.anchor == RatVec{Rat(0), Rat(0)});
    CHECK(sp.radius_precondition_ok);
}

TEST_CASE("shifted sublattice radius precondition error") {
    Basis B(RatMat{{Rat(1), Rat(0)}, {Rat(0), Rat(100)}});
    // target far from the lattice: dist ~ 50, r = 2 violates the bound
    CHECK_THROWS_WITH_AS(shifted_sublattice(B, RatVec{Rat(1, 2), Rat(50)}, 2.0L, 2.0L),
                         "radius too small", precondition_error);
}

TEST_CASE("shifted sublattice containment audit on random 3-D instances") {
    Rng rng(307);
    for (int trial = 0; trial < 10; ++trial) {
        Basis B = gen_basis(3, 5, rng);
        RatVec t = uniform_target(B, rng);
        HKZData hkz = hkz_reduce(B);
        DistanceEstimate est = distance_estimate_oracle(hkz.lattice, hkz.gs, t);
        // pick r between the GS norms so the split is proper when possible
        GramSchmidt fgs = to_float_gs(hkz.gs);
        real_t r = (fgs.gs_norms[0] + fgs.max_gs_norm()) / 2;
        SublatticeSplit sp = shifted_sublattice(hkz, t, r, 2.0L, est, false);

        // every v in L - t with ||v|| <= r - dist lies in L' - y - t,
        // i.e. its suffix coefficients match the lift
        real_t cap = r - est.upper;
        if (cap <= 0) continue;
        uint64_t checked = 0;
        enumerate_ball(hkz.lattice, hkz.gs, t, cap * cap,
                       [&](const std::vector<long long>& cf, real_t) {
                           ++checked;
                           for (int j = sp.sub_rank(); j < 3; ++j)
                               CHECK(Int((long)cf[j]) ==
                                     sp.lift_suffix[j - sp.sub_rank()]);
                       });
        (void)checked;
    }
}

TEST_CASE("init_samples: membership and orthogonal independence") {
    Basis B = identity_basis(3);
    HKZData hkz = hkz_reduce(B);
    Rng rng(311);
    GaussianParam s_hat = GaussianParam::of(12.0L);
    InitSamples init = init_samples(hkz, RatVec(3, Rat(0)), 20000, s_hat, 2.0L, rng);
    CHECK(init.batch.count() == 20000);
    CHECK(init.split.sub_rank() == 3);
    // coordinates are independent 1-D Gaussians: check coordinate means
    for (int j = 0; j < 3; ++j) {
        double mean = 0;
        for (size_t i = 0; i < init.batch.count(); ++i) mean += init.batch.row(i)[j];
        mean /= (double)init.batch.count();
        double sigma = 12.0 / std::sqrt(2 * 3.14159265) / std::sqrt(20000.0);
        CHECK(std::fabs(mean) < 6 * sigma);
    }
}

TEST_CASE("init_samples distribution audit at n = 2") {
    Basis B = identity_basis(2);
    HKZData hkz = hkz_reduce(B);
    RatVec t{Rat(1, 3), Rat(2, 7)};
    real_t floor = 4.0L * std::sqrt(std::log(4.0L));
    GaussianParam s_hat = GaussianParam::of(floor * 1.02L);
    Rng rng(313);
    InitSamples init = init_samples(hkz, t, 100000, s_hat, 2.0L, rng);
    REQUIRE(init.split.sub_rank() == 2);

    ExactSampler ex(B, hkz.gs, t, s_hat);
    std::map<std::vector<int>, double> expd;
    for (size_t j = 0; j < ex.support_size(); ++j)
        expd[std::vector<int>(ex.coeffs(j), ex.coeffs(j) + 2)] = (double)ex.prob(j);
    std::map<std::vector<int>, uint64_t> obs;
    for (size_t i = 0; i < init.batch.count(); ++i)
        ++obs[std::vector<int>(init.batch.row(i), init.batch.row(i) + 2)];
    double tv = 0;
    for (auto& [k, p] : expd) {
        auto it = obs.find(k);
        double f = it == obs.end() ? 0.0 : (double)it->second / init.batch.count();
        tv += std::fabs(f - p);
    }
    for (auto& [k, c] : obs)
        if (!expd.count(k)) tv += (double)c / init.batch.count();
    CHECK(tv / 2 <= 0.02);
}

TEST_CASE("dgs_solve on Z lands exactly on s with the advertised quality") {
    Basis Z1(RatMat{{Rat(1)}});
    DGSRequest req;
    req.lattice = &Z1;
    req.shift = RatVec{Rat(2, 5)};
    req.s = GaussianParam::of(0.5L);
    req.f = 100;
    DgsOptions opts;
    opts.verify = true;
    Rng rng(317);
    DgsResult res = dgs_solve(req, PipelineConfig{2, 4.0}, 200000, rng, opts);
    CHECK(res.ell_eff == 2);
    CHECK(res.batch.s == req.s);  // dyadic bookkeeping is exact
    CHECK(res.tv >= 0);
    CHECK(res.tv <= 0.03L);
    CHECK((real_t)res.batch.count() >= res.m_target);
    CHECK(!res.shortfall);
}

TEST_CASE("dgs_solve with ell = 0 reduces to the initializer") {
    Basis Z1(RatMat{{Rat(1)}});
    DGSRequest req;
    req.lattice = &Z1;
    req.shift = RatVec{Rat(2, 5)};
    req.s = GaussianParam::of(1.5L);
    req.f = 100;
    DgsOptions opts;
    opts.verify = true;
    Rng rng(319);
    DgsResult res = dgs_solve(req, PipelineConfig{0, 4.0}, 3000, rng, opts);
    CHECK(res.ell_eff == 0);
    CHECK(res.batch.count() == 3000);
    CHECK(res.tv <= 0.03L);
}

TEST_CASE("dgs_solve below the sigma floor is rejected") {
    Basis Z1(RatMat{{Rat(1)}});
    DGSRequest req;
    req.lattice = &Z1;
    req.shift = RatVec{Rat(2, 5)};
    req.s = GaussianParam::of(0.01L);
    req.f = 2;  // sigma = dist/f = 0.2 > s
    Rng rng(323);
    CHECK_THROWS_AS(dgs_solve(req, PipelineConfig{1, 4.0}, 1000, rng, {}), precondition_error);
}

TEST_CASE("dgs_solve samples concentrate per the tail corollary") {
    Rng grng(329);
    Basis B = gen_basis(2, 5, grng);
    Rng trng(331);
    RatVec t = uniform_target(B, trng);
    HKZData hkz = hkz_reduce(B);
    real_t dist = std::sqrt(to_real(cvp_enum(hkz.lattice, hkz.gs, t, false).dist2));
    DGSRequest req;
    req.lattice = &B;
    req.shift = t;
    req.s = GaussianParam::of(dist / 2);
    req.f = 1000;
    DgsOptions opts;
    opts.oracle_estimate = true;
    Rng rng(337);
    DgsResult res = dgs_solve(req, PipelineConfig{2, 4.0}, 40000, rng, opts);
    REQUIRE(res.batch.count() >= 100);
    real_t sval = req.s.value();
    real_t thr2 = dist * dist + 2 * (sval * 2) * (sval * 2);
    uint64_t inside = 0;
    for (size_t i = 0; i < res.batch.count(); ++i) {
        RatVec v = res.batch.sample_vector(i);
        if (to_real(norm2(v)) <= thr2) ++inside;
    }
    CHECK((double)inside / res.batch.count() >= 0.99);
}

TEST_CASE("approx_cvp examples") {
    Rng rng(341);
    // zero-distance target returns the lattice point itself
    Basis Z2 = identity_basis(2);
    ApproxCvpResult z = approx_cvp(Z2, RatVec{Rat(3), Rat(-2)}, 100, rng);
    CHECK(z.dist2 == Rat(0));
    CHECK(z.vector == RatVec{Rat(3), Rat(-2)});

    ApproxCvpResult r = approx_cvp(Z2, RatVec{Rat(3, 10), Rat(-7, 10)}, 100, rng);
    CHECK(r.vector == RatVec{Rat(0), Rat(-1)});
}

TEST_CASE("approx_cvp achieves the (1+1/f) factor on random 4-D instances") {
    int good = 0;
    const int N = 50;
    const real_t f = 64;  // n^3
    for (int trial = 0; trial < N; ++trial) {
        Instance inst = gen_instance(4, 8, 400 + trial);
        Rng rng(500 + trial);
        DgsOptions opts;
        opts.oracle_estimate = false;
        ApproxCvpResult mine = approx_cvp(inst.basis, inst.target, f, rng, opts);
        Rat oracle = cvp_enum(inst.basis, inst.target).dist2;
        // ||y - t|| <= (1 + 1/f) dist
        Rat bound = oracle * Rat((long)((1 + 1 / (double)f) * (1 + 1 / (double)f) * 1e9),
                                 1000000000L);
        if (mine.dist2 <= bound) ++good;
    }
    CHECK(good >= 49);  // >= 98%
}
