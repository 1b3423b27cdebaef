#include <doctest.h>

#include "latgauss/gaussian.hpp"
#include "latgauss/instances.hpp"

using namespace latgauss;

namespace {

Basis z_basis() { return Basis(RatMat{{Rat(1)}}); }

// independent 1-D oracle: direct truncated sum over k in [-60, 60]
real_t sum_1d(real_t s, real_t shift, int parity = -1) {
    real_t acc = 0;
    for (int k = -60; k <= 60; ++k) {
        if (parity >= 0 && ((k % 2) + 2) % 2 != parity) continue;
        real_t x = (real_t)k - shift;
        acc += std::exp(-kPi * x * x / (s * s));
    }
    return acc;
}

RatVec uniform_target(const Basis& B, Rng& rng) {
    const long denom = 1L << 20;
    RatVec t(B.n(), Rat(0));
    for (int i = 0; i < B.n(); ++i)
        axpy(t, Rat((long)rng.below(denom), denom), B.vectors[i]);
    return t;
}

}  // namespace

TEST_CASE("rho point evaluations") {
    CHECK(rho(1.0L, {0.0L, 0.0L}) == 1.0L);
    CHECK(rho(1.0L, {1.0L}) == doctest::Approx(0.0432139182637722).epsilon(1e-12));
    CHECK(rho(2.0L, {1.0L, 1.0L}) == doctest::Approx(std::exp(-kPi / 2)).epsilon(1e-15));
}

TEST_CASE("dyadic parameter bookkeeping is exact") {
    GaussianParam s = GaussianParam::of(0.7L);
    GaussianParam up = s.raised(7);
    for (int i = 0; i < 7; ++i) up = up.halved();
    CHECK(up == s);
    CHECK(GaussianParam::of(2.0L).raised(2).value() == doctest::Approx(4.0));
    CHECK(GaussianParam::of(1.0L).raised(1).value() ==
          doctest::Approx(std::sqrt(2.0L)).epsilon(1e-18));
}

TEST_CASE("1-D masses match the direct-summation oracle and frozen values") {
    MassOracle o(z_basis());
    RatVec zero{Rat(0)};
    GaussianParam s1 = GaussianParam::of(1.0L);

    MassEstimate m = o.mass(zero, s1);
    CHECK(m.rel_err <= 1e-12L);
    CHECK(std::fabs(m.value() - sum_1d(1, 0)) / m.value() < 1e-11L);
    CHECK(m.value() == doctest::Approx(1.086434811213308).epsilon(1e-11));

    MassEstimate even = o.coset_mass(zero, label_from_key(0, 1), s1);
    MassEstimate odd = o.coset_mass(zero, label_from_key(1, 1), s1);
    CHECK(even.value() == doctest::Approx(1.000006974684712).epsilon(1e-11));
    CHECK(odd.value() == doctest::Approx(0.086427836528596).epsilon(1e-11));
    CHECK(even.value() == doctest::Approx((double)sum_1d(1, 0, 0)).epsilon(1e-11));
    CHECK(odd.value() == doctest::Approx((double)sum_1d(1, 0, 1)).epsilon(1e-11));
}

TEST_CASE("mass consistency sandwich rho_s(t) <= rho_s(L-t)/rho_s(L) <= 1") {
    Rng rng(67);
    for (int trial = 0; trial < 12; ++trial) {
        Basis B = gen_basis(2, 4, rng);
        RatVec t = uniform_target(B, rng);
        GaussianParam s = GaussianParam::of(0.8L + 2 * rng.uniform01());
        MassOracle o(B);
        real_t shifted = o.mass(t, s).log_mass;
        real_t centered = o.centered_mass(s).log_mass;
        std::vector<real_t> tf(2);
        for (int i = 0; i < 2; ++i) tf[i] = to_real(t[i]);
        CHECK(std::log(rho(s, tf)) <= shifted - centered + 1e-9L);
        CHECK(shifted <= centered + 1e-9L);
    }
}

TEST_CASE("coset masses partition the total") {
    Rng rng(71);
    for (int trial = 0; trial < 8; ++trial) {
        int n = 1 + (int)(trial % 3);
        Basis B = gen_basis(n, 4, rng);
        RatVec t = uniform_target(B, rng);
        GaussianParam s = GaussianParam::of(0.8L + 1.5L * rng.uniform01());
        MassOracle o(B);
        const real_t eps = 1e-12L;
        MassEstimate total = o.mass(t, s, eps);
        real_t acc = 0;
        for (uint64_t key = 0; key < (uint64_t{1} << n); ++key)
            acc += o.coset_mass(t, label_from_key(key, n), s, eps).value();
        CHECK(std::fabs(acc - total.value()) / total.value() <=
              std::ldexp(1.0L, n + 1) * eps + 1e-13L);
        // the one-pass decomposition agrees with per-coset enumeration
        auto dec = o.coset_decomposition(t, s, eps);
        for (uint64_t key = 0; key < (uint64_t{1} << n); ++key) {
            real_t a = dec.coset[key].log_mass;
            real_t b = o.coset_mass(t, label_from_key(key, n), s, eps).log_mass;
            CHECK(std::fabs(a - b) < 1e-10L);
        }
    }
}

TEST_CASE("m_target examples") {
    MassOracle o1(z_basis());
    RatVec zero{Rat(0)};
    CHECK(o1.m_target(zero, GaussianParam::of(1.0L)) ==
          doctest::Approx(1.086427234).epsilon(1e-8));
    CHECK(o1.m_target(zero, GaussianParam::of(0.05L)) == doctest::Approx(1.0).epsilon(1e-12));

    Basis Z2(RatMat{{Rat(1), Rat(0)}, {Rat(0), Rat(1)}});
    MassOracle o2(Z2);
    CHECK(o2.m_target(RatVec{Rat(0), Rat(0)}, GaussianParam::of(100.0L)) ==
          doctest::Approx(4.0).epsilon(1e-6));
    // always within [1, 2^n]
    Rng rng(73);
    for (int trial = 0; trial < 6; ++trial) {
        Basis B = gen_basis(2, 4, rng);
        RatVec t = uniform_target(B, rng);
        real_t m = MassOracle(B).m_target(t, GaussianParam::of(0.7L + 2 * rng.uniform01()));
        CHECK(m >= 1 - 1e-9L);
        CHECK(m <= 4 + 1e-9L);
    }
}

TEST_CASE("mass is nondecreasing in s") {
    Rng rng(79);
    Basis B = gen_basis(2, 4, rng);
    RatVec t = uniform_target(B, rng);
    MassOracle o(B);
    real_t prev = -1e30L;
    for (real_t s = 0.5L; s < 4; s += 0.25L) {
        real_t cur = o.mass(t, GaussianParam::of(s)).log_mass;
        CHECK(cur >= prev - 1e-11L);
        prev = cur;
    }
}

TEST_CASE("banaszczyk parameter-scaling bound rho_s(L) <= s^n rho_1(L)") {
    Rng rng(83);
    for (int trial = 0; trial < 6; ++trial) {
        int n = 1 + (int)(trial % 3);
        Basis B = gen_basis(n, 3, rng);
        MassOracle o(B);
        real_t base = o.centered_mass(GaussianParam::of(1.0L)).log_mass;
        for (real_t s : {1.3L, 2.0L, 3.5L}) {
            real_t lhs = o.centered_mass(GaussianParam::of(s)).log_mass;
            CHECK(lhs <= n * std::log(s) + base + 1e-10L);
        }
    }
}

TEST_CASE("mass oracle enforces the desk-scale dimension cap") {
    RatMat m(13, RatVec(13, Rat(0)));
    for (int i = 0; i < 13; ++i) m[i][i] = 1;
    Basis B(m);
    CHECK_THROWS_AS(MassOracle{B}, precondition_error);
}
