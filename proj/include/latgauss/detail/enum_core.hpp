#ifndef LATGAUSS_DETAIL_ENUM_CORE_HPP
#define LATGAUSS_DETAIL_ENUM_CORE_HPP

#include <cmath>
#include <vector>

#include "latgauss/lattice.hpp"

namespace latgauss::detail {

// Depth-first enumeration over GS data with proximity-ordered children and a
// dynamically shrinkable budget. limit is the total squared-distance budget
// including the off-span offset perp2; visitors may lower `limit` while the
// search runs.
struct EnumCore {
    const GramSchmidt* g = nullptr;
    std::vector<real_t> tc;
    real_t perp2 = 0;
    real_t limit = 0;

    int r = 0;
    std::vector<long long> x;
    std::vector<real_t> partial;

    template <typename Visit>
    void run(Visit&& visit) {
        r = g->rank();
        x.assign(r, 0);
        partial.assign(r + 1, 0);
        if (limit < perp2 || r == 0) return;
        descend(r - 1, visit);
    }

    template <typename Visit>
    void descend(int i, Visit&& visit) {
        real_t c = tc[i];
        for (int j = i + 1; j < r; ++j) c -= g->mu[j][i] * x[j];
        long long mid = static_cast<long long>(std::floor(c + 0.5L));
        long long lo = mid - 1, hi = mid + 1;
        bool lo_open = true, hi_open = true;

        auto step = [&](long long v) -> bool {
            real_t d = static_cast<real_t>(v) - c;
            real_t term = d * d * g->gs_norm2[i];
            if (partial[i + 1] + term + perp2 > limit) return false;
            x[i] = v;
            partial[i] = partial[i + 1] + term;
            if (i == 0) {
                visit(x, partial[0] + perp2);
            } else {
                descend(i - 1, visit);
            }
            return true;
        };

        if (!step(mid)) return;
        while (lo_open || hi_open) {
            bool take_hi;
            if (!lo_open) take_hi = true;
            else if (!hi_open) take_hi = false;
            else take_hi = (static_cast<real_t>(hi) - c) <= (c - static_cast<real_t>(lo));
            if (take_hi) {
                if (step(hi)) ++hi; else hi_open = false;
            } else {
                if (step(lo)) --lo; else lo_open = false;
            }
        }
    }
};

}  // namespace latgauss::detail

#endif
