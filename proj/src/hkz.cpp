#include "latgauss/hkz.hpp"

#include <algorithm>
#include <cmath>

#include "latgauss/detail/enum_core.hpp"

namespace latgauss {

namespace {

// SVP over the lattice projected orthogonally to the first `lo` rows, driven
// by the GS data of the full working matrix. Returns the coefficient vector
// (length rank-lo) of the shortest projected vector and its exact norm^2.
struct ProjSvp {
    std::vector<Int> coeffs;
    Rat norm2;
};

ProjSvp svp_on_projection(const RationalGS& gs, int lo) {
    const int r = gs.rank();
    const int m = r - lo;

    GramSchmidt sub;
    sub.gs_norm2.resize(m);
    sub.gs_norms.resize(m);
    sub.mu.assign(m, std::vector<real_t>(m, 0.0L));
    for (int i = 0; i < m; ++i) {
        sub.gs_norm2[i] = to_real(gs.gs_norm2[lo + i]);
        sub.gs_norms[i] = std::sqrt(sub.gs_norm2[i]);
        for (int j = 0; j <= i; ++j) sub.mu[i][j] = to_real(gs.mu[lo + i][lo + j]);
    }

    auto exact_norm2 = [&](const std::vector<long long>& x) {
        // ||sum_j x_j pi(b_{lo+j})||^2 = sum_k (sum_j x_j mu_{lo+j,lo+k})^2 |gs_k|^2
        Rat acc = 0;
        for (int k = 0; k < m; ++k) {
            Rat c = 0;
            for (int j = k; j < m; ++j)
                if (x[j] != 0) c += Rat(static_cast<long>(x[j])) * gs.mu[lo + j][lo + k];
            acc += c * c * gs.gs_norm2[lo + k];
        }
        return acc;
    };

    real_t init = sub.gs_norm2[0];
    for (int i = 0; i < m; ++i) {
        // row norms of the projected generators
        real_t row = 0;
        for (int k = 0; k <= i; ++k) {
            real_t mu = sub.mu[i][k];
            row += mu * mu * sub.gs_norm2[k];
        }
        init = std::min(init, row);
    }

    struct {
        bool have = false;
        Rat best2;
        std::vector<Int> coeffs;
    } best;

    constexpr real_t kSlack = 1e-9L;

    detail::EnumCore core;
    core.g = &sub;
    core.tc.assign(m, 0.0L);
    core.limit = init * (1 + kSlack);

    auto lex_less = [](const std::vector<Int>& a, const std::vector<Int>& b) {
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] < b[i]) return true;
            if (a[i] > b[i]) return false;
        }
        return false;
    };

    core.run([&](const std::vector<long long>& x, real_t) {
        if (std::all_of(x.begin(), x.end(), [](long long v) { return v == 0; })) return;
        Rat d2 = exact_norm2(x);
        std::vector<Int> ic(x.size());
        for (size_t i = 0; i < x.size(); ++i) ic[i] = static_cast<long>(x[i]);
        if (!best.have || d2 < best.best2 || (d2 == best.best2 && lex_less(ic, best.coeffs))) {
            best.best2 = d2;
            best.coeffs = std::move(ic);
            best.have = true;
            core.limit = std::min(core.limit, to_real(best.best2) * (1 + 2 * kSlack));
        }
    });
    if (!best.have) throw degenerate_basis_error("projected svp found no vector");
    return {best.coeffs, best.best2};
}

void divide_out_gcd(std::vector<Int>& x) {
    Int g = 0;
    for (const auto& v : x) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g > 1)
        for (auto& v : x) v /= g;
}

}  // namespace

std::vector<std::vector<Int>> complete_to_unimodular(const std::vector<Int>& x_in) {
    const int m = static_cast<int>(x_in.size());
    std::vector<Int> x = x_in;
    std::vector<std::vector<Int>> M(m, std::vector<Int>(m, 0));
    for (int i = 0; i < m; ++i) M[i][i] = 1;

    // Column ops reduce x to e_1; mirrored row ops keep M = C^{-1}, whose
    // first row is then the original x.
    auto nonzeros = [&]() {
        int c = 0;
        for (const auto& v : x) if (v != 0) ++c;
        return c;
    };
    while (true) {
        int p = -1;
        for (int i = 0; i < m; ++i) {
            if (x[i] == 0) continue;
            if (p < 0 || cmp(abs(x[i]), abs(x[p])) < 0) p = i;
        }
        if (p < 0) throw error("complete_to_unimodular: zero vector");
        if (p != 0) {
            std::swap(x[0], x[p]);
            std::swap(M[0], M[p]);
        }
        if (x[0] < 0) {
            x[0] = -x[0];
            for (auto& v : M[0]) v = -v;
        }
        if (nonzeros() == 1) break;
        for (int j = 1; j < m; ++j) {
            if (x[j] == 0) continue;
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), x[j].get_mpz_t(), x[0].get_mpz_t());
            if (q != 0) {
                // x[j] += (-q) x[0]  =>  M.row(0) += q * M.row(j)
                x[j] -= q * x[0];
                for (int k = 0; k < m; ++k) M[0][k] += q * M[j][k];
            }
        }
    }
    if (x[0] != 1) throw error("complete_to_unimodular: gcd != 1");
    return M;
}

HKZData hkz_reduce(const Lattice& L) {
    const int r = L.rank();
    RatMat work = L.vectors;

    for (int i = 0; i < r; ++i) {
        Lattice cur{work};
        RationalGS gs = rational_gram_schmidt(cur);
        ProjSvp sv = svp_on_projection(gs, i);
        if (gs.gs_norm2[i] == sv.norm2) continue;  // already minimal, keep b_i

        std::vector<Int> x = sv.coeffs;
        divide_out_gcd(x);  // shortest vector always has gcd 1; cheap safeguard
        auto U = complete_to_unimodular(x);
        const int m = r - i;
        RatMat fresh(m, RatVec(L.ambient(), Rat(0)));
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                if (U[a][b] != 0) axpy(fresh[a], Rat(U[a][b]), work[i + b]);
        for (int a = 0; a < m; ++a) work[i + a] = std::move(fresh[a]);
    }

    // Size reduction: |mu_{i,j}| <= 1/2. Leaves GS vectors unchanged.
    Lattice out{work};
    RationalGS gs = rational_gram_schmidt(out);
    for (int i = 1; i < r; ++i) {
        for (int j = i - 1; j >= 0; --j) {
            Int q = round_nearest(gs.mu[i][j]);
            if (q != 0) {
                axpy(out.vectors[i], -Rat(q), out.vectors[j]);
                for (int k = 0; k <= j; ++k) gs.mu[i][k] -= Rat(q) * gs.mu[j][k];
            }
        }
    }
    gs = rational_gram_schmidt(out);
    return {out, gs};
}

HKZBasis hkz_basis(const Basis& B) {
    HKZData d = hkz_reduce(B);
    HKZBasis out;
    out.basis = Basis(d.lattice.vectors);
    out.gamma = 1.0;
    return out;
}

}  // namespace latgauss
