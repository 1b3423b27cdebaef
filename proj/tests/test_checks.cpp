#include <doctest.h>

#include "latgauss/checks.hpp"
#include "latgauss/instances.hpp"

using namespace latgauss;

namespace {

RatVec uniform_target(const Basis& B, Rng& rng) {
    const long denom = 1L << 20;
    RatVec t(B.n(), Rat(0));
    for (int i = 0; i < B.n(); ++i)
        axpy(t, Rat((long)rng.below(denom), denom), B.vectors[i]);
    return t;
}

}  // namespace

TEST_CASE("rs identity at x = y = 0 and on shifted 1-D instances") {
    Basis Z1(RatMat{{Rat(1)}});
    MassOracle o(Z1);
    GaussianParam s = GaussianParam::of(1.0L);
    CHECK(check_rs_identity(o, RatVec{Rat(0)}, RatVec{Rat(0)}, s).residual <= 3e-12L);
    CHECK(check_rs_identity(o, RatVec{Rat(3, 10)}, RatVec{Rat(7, 10)}, s).residual <= 1e-9L);
}

TEST_CASE("rs identity on random 2-D instances") {
    Rng rng(101);
    for (int trial = 0; trial < 15; ++trial) {
        Basis B = gen_basis(2, 4, rng);
        MassOracle o(B);
        RatVec x = uniform_target(B, rng), y = uniform_target(B, rng);
        GaussianParam s = GaussianParam::of(0.7L + 2 * rng.uniform01());
        CHECK(check_rs_identity(o, x, y, s).residual <= 1e-9L);
    }
}

TEST_CASE("rs-Hoelder inequality margins") {
    Basis Z1(RatMat{{Rat(1)}});
    MassOracle o(Z1);
    CHECK(check_rs_holder(o, RatVec{Rat(0)}, GaussianParam::of(1.0L)).margin >= -1e-12L);
    // single-point limit: margin tends to zero from above
    HolderCheck tiny = check_rs_holder(o, RatVec{Rat(1, 5)}, GaussianParam::of(0.05L));
    CHECK(tiny.margin >= -1e-12L);
    CHECK(tiny.margin <= 1e-6L);

    Rng rng(103);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + (int)(trial % 2);
        Basis B = gen_basis(n, 4, rng);
        MassOracle ob(B);
        RatVec t = uniform_target(B, rng);
        GaussianParam s = GaussianParam::of(0.7L + 2 * rng.uniform01());
        CHECK(check_rs_holder(ob, t, s).margin >= -1e-9L);
    }
}

TEST_CASE("coset ladder on Z") {
    Basis Z1(RatMat{{Rat(1)}});
    MassOracle o(Z1);
    LadderTrace lt = coset_ladder(o, RatVec{Rat(0)}, GaussianParam::of(4.0L), 4);
    CHECK(lt.chosen_i >= 1);
    CHECK(lt.chosen_i <= 4);
    CHECK(lt.S[lt.chosen_i - 1] <= lt.qualify_bound * (1 + 1e-9L));
    // t = 0 specialization: y = 0, so the sandwich lower bound is exactly 1
    for (int i = 0; i < 4; ++i) {
        CHECK(lt.sandwich[i] >= 1 - 1e-9L);
        CHECK(lt.sandwich[i] <= lt.S[i] * (1 + 1e-9L));
    }
}

TEST_CASE("coset ladder bounds on random 2-D instances") {
    Rng rng(107);
    for (int trial = 0; trial < 6; ++trial) {
        Basis B = gen_basis(2, 4, rng);
        MassOracle o(B);
        RatVec t = uniform_target(B, rng);
        GramSchmidt fgs = to_float_gs(rational_gram_schmidt(B));
        GaussianParam s = GaussianParam::of((1.5L + 2 * rng.uniform01()) * fgs.max_gs_norm());
        LadderTrace lt = coset_ladder(o, t, s, 6);
        CHECK(lt.chosen_i >= 1);
        real_t quarter = std::exp2(2.0L / 4);
        for (int i = 0; i < 6; ++i) {
            CHECK(lt.S[i] >= 1 - 1e-9L);
            CHECK(lt.S[i] <= quarter * (1 + 1e-9L));
            CHECK(lt.sandwich[i] >= 1 - 1e-9L);
            CHECK(lt.sandwich[i] <= lt.S[i] * (1 + 1e-9L));
        }
    }
}

TEST_CASE("coset ladder rejects ell < 1") {
    Basis Z1(RatMat{{Rat(1)}});
    MassOracle o(Z1);
    CHECK_THROWS_AS(coset_ladder(o, RatVec{Rat(0)}, GaussianParam::of(2.0L), 0),
                    precondition_error);
}
