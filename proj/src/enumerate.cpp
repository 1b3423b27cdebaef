#include "latgauss/enumerate.hpp"

#include <algorithm>
#include <cmath>

#include "latgauss/detail/enum_core.hpp"

namespace latgauss {

namespace {

using detail::EnumCore;

// Relative slack applied to floating pruning bounds so that exact ties and
// float roundoff never drop a true optimum.
constexpr real_t kSlack = 1e-9L;

std::vector<real_t> gs_coords(const RationalGS& gs, const RatVec& t) {
    std::vector<real_t> tc(gs.rank());
    for (int i = 0; i < gs.rank(); ++i)
        tc[i] = to_real(dot(t, gs.gs[i]) / gs.gs_norm2[i]);
    return tc;
}

Rat perp_norm2(const RationalGS& gs, const RatVec& t) {
    RatVec res = t;
    for (int i = 0; i < gs.rank(); ++i) {
        Rat c = dot(res, gs.gs[i]) / gs.gs_norm2[i];
        axpy(res, -c, gs.gs[i]);
    }
    return norm2(res);
}

bool lex_less(const std::vector<Int>& a, const std::vector<Int>& b) {
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

std::vector<Int> to_int_vec(const std::vector<long long>& v) {
    std::vector<Int> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = static_cast<long>(v[i]);
    return out;
}

// Keeps the exact-rational minimum with lexicographic coefficient tie-break.
struct BestSearch {
    const Lattice* L;
    const RatVec* t;
    bool skip_zero;

    Rat best2;
    bool have_best = false;
    std::vector<Int> best_coeffs;

    void offer(const std::vector<long long>& cf) {
        if (skip_zero &&
            std::all_of(cf.begin(), cf.end(), [](long long z) { return z == 0; }))
            return;
        RatVec v = L->vector_of(cf);
        if (t) v = sub(v, *t);
        Rat d2 = norm2(v);
        std::vector<Int> ic = to_int_vec(cf);
        if (!have_best || d2 < best2 || (d2 == best2 && lex_less(ic, best_coeffs))) {
            best2 = d2;
            best_coeffs = std::move(ic);
            have_best = true;
        }
    }
};

}  // namespace

void enumerate_ball_float(const GramSchmidt& fgs, const std::vector<real_t>& target_gs_coords,
                          real_t perp2, real_t radius2, const BallVisitor& visit) {
    EnumCore core;
    core.g = &fgs;
    core.tc = target_gs_coords;
    core.perp2 = perp2;
    core.limit = radius2;
    core.run([&](const std::vector<long long>& cf, real_t d2) { visit(cf, d2); });
}

void enumerate_ball(const Lattice& L, const RationalGS& gs, const RatVec& t,
                    real_t radius2, const BallVisitor& visit) {
    GramSchmidt fgs = to_float_gs(gs);
    enumerate_ball_float(fgs, gs_coords(gs, t), to_real(perp_norm2(gs, t)),
                         radius2 * (1 + kSlack), visit);
}

uint64_t count_ball(const Lattice& L, const RationalGS& gs, const RatVec& t, real_t radius2) {
    uint64_t n = 0;
    enumerate_ball(L, gs, t, radius2, [&](const std::vector<long long>&, real_t) { ++n; });
    return n;
}

SvpResult svp_enum(const Lattice& L, const RationalGS& gs) {
    GramSchmidt fgs = to_float_gs(gs);
    const int r = L.rank();

    real_t init = to_real(norm2(L.vectors[0]));
    for (int i = 1; i < r; ++i) init = std::min(init, to_real(norm2(L.vectors[i])));

    BestSearch search{&L, nullptr, true};
    EnumCore core;
    core.g = &fgs;
    core.tc.assign(r, 0.0L);
    core.limit = init * (1 + kSlack);
    core.run([&](const std::vector<long long>& cf, real_t) {
        search.offer(cf);
        if (search.have_best)
            core.limit = std::min(core.limit, to_real(search.best2) * (1 + 2 * kSlack));
    });
    if (!search.have_best) throw degenerate_basis_error("svp found no vector");
    SvpResult out;
    out.coeffs = search.best_coeffs;
    out.vector = L.vector_of(out.coeffs);
    out.norm2 = search.best2;
    return out;
}

SvpResult svp_enum(const Basis& B) {
    return svp_enum(static_cast<const Lattice&>(B), rational_gram_schmidt(B));
}

CvpResult cvp_enum(const Lattice& L, const RationalGS& gs, const RatVec& t,
                   bool require_in_span) {
    if (require_in_span && !coords_in_span(L, gs, t))
        throw precondition_error("target not in span");
    GramSchmidt fgs = to_float_gs(gs);

    std::vector<Int> babai = babai_nearest_plane(L, gs, t);
    Rat babai2 = norm2(sub(L.vector_of(babai), t));

    BestSearch search{&L, &t, false};
    search.best2 = babai2;
    search.best_coeffs = babai;
    search.have_best = true;

    EnumCore core;
    core.g = &fgs;
    core.tc = gs_coords(gs, t);
    core.perp2 = to_real(perp_norm2(gs, t));
    core.limit = to_real(babai2) * (1 + 2 * kSlack) + 1e-300L;
    core.run([&](const std::vector<long long>& cf, real_t) {
        search.offer(cf);
        core.limit = std::min(core.limit, to_real(search.best2) * (1 + 2 * kSlack) + 1e-300L);
    });
    CvpResult out;
    out.coeffs = search.best_coeffs;
    out.vector = L.vector_of(out.coeffs);
    out.dist2 = search.best2;
    return out;
}

CvpResult cvp_enum(const Basis& B, const RatVec& t) {
    return cvp_enum(static_cast<const Lattice&>(B), rational_gram_schmidt(B), t, true);
}

}  // namespace latgauss
