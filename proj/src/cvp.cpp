#include "latgauss/cvp.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "latgauss/detail/enum_core.hpp"

namespace latgauss {

namespace {

int default_f_cluster(int n) {
    return std::max(1, static_cast<int>(std::ceil(std::cbrt(static_cast<double>(n)))));
}

Rat default_alpha(int n) { return Rat(1, 10L * n * n * n); }

uint64_t saturating_pow(uint64_t base, int e) {
    unsigned __int128 acc = 1;
    for (int i = 0; i < e; ++i) {
        acc *= base;
        if (acc > (static_cast<unsigned __int128>(1) << 62)) return uint64_t{1} << 62;
    }
    return static_cast<uint64_t>(acc);
}

bool lex_less_int(const std::vector<Int>& a, const std::vector<Int>& b) {
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

bool lex_less_rat(const RatVec& a, const RatVec& b) {
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

uint64_t suffix_hash(const std::vector<Int>& coeffs, int from) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (size_t i = from; i < coeffs.size(); ++i) {
        long v = coeffs[i].get_si();
        h ^= static_cast<uint64_t>(v);
        h *= 0x100000001b3ULL;
    }
    return h;
}

struct CoreCandidates {
    std::vector<std::vector<Int>> coeffs;  // wrt the HKZ basis handed in
    std::vector<Rat> dist2;
};

CoreCandidates ccvp_core(const HKZData& hkz, const RatVec& t, const CCVPConfig& cfg,
                         uint64_t seed, CcvpInstrumentation* instr) {
    const Lattice& L = hkz.lattice;
    const int n = L.rank();
    const int f = cfg.f_cluster > 0 ? cfg.f_cluster : default_f_cluster(n);
    Rat alpha = cfg.alpha > 0 ? Rat(mpq_class(cfg.alpha)) : default_alpha(n);

    DistanceEstimate est = cfg.oracle_estimate
                               ? distance_estimate_oracle(L, hkz.gs, t)
                               : distance_estimate_witness(hkz, t);

    CoreCandidates out;
    std::set<std::vector<Int>> seen;
    auto push = [&](std::vector<Int> c) {
        if (!seen.insert(c).second) return;
        Rat d2 = norm2(sub(L.vector_of(c), t));
        out.coeffs.push_back(std::move(c));
        out.dist2.push_back(std::move(d2));
    };

    if (est.upper == 0) {
        auto coords = coords_in_span(L, hkz.gs, t);
        std::vector<Int> c(n);
        for (int i = 0; i < n; ++i) c[i] = (*coords)[i].get_num();
        push(std::move(c));
    } else {
        const int lad = cfg.ladder_ell > 0
                            ? cfg.ladder_ell
                            : std::max(4, static_cast<int>(std::ceil(
                                              std::log2(10.0 * static_cast<double>(f)))));
        uint64_t runs_formula = static_cast<uint64_t>(n) * n *
                                static_cast<uint64_t>(std::ceil(
                                    std::exp2(static_cast<double>(n) / lad)));
        const uint64_t runs = std::min<uint64_t>(runs_formula,
                                                 static_cast<uint64_t>(cfg.batch_runs_cap));

        real_t n3f = static_cast<real_t>(n) * n * n * f;
        GaussianParam s_top = GaussianParam::of(est.lower / n3f);

        DGSRequest req;
        req.lattice = &L;
        req.shift = t;
        req.f = 4 * n3f * std::exp2(static_cast<real_t>(lad));
        DgsOptions dopts;
        dopts.enforce_radius = false;
        dopts.oracle_estimate = cfg.oracle_estimate;
        PipelineConfig pcfg{cfg.ell, cfg.kappa};

        for (int i = 0; i <= lad; ++i) {
            req.s = s_top.raised(-i);
            for (uint64_t run = 0; run < runs; ++run) {
                Rng rng = Rng::substream(seed, static_cast<uint64_t>(i) * 4096 + run);
                try {
                    DgsResult res = dgs_solve(req, pcfg, cfg.dgs_M, rng, dopts, &hkz, est);
                    for (size_t j = 0; j < res.batch.count(); ++j) {
                        std::vector<Int> c(n);
                        for (int d = 0; d < n; ++d)
                            c[d] = static_cast<long>(res.batch.row(j)[d]);
                        push(std::move(c));
                    }
                } catch (const error&) {
                    if (instr) ++instr->starved_runs;
                }
            }
        }
    }
    if (out.coeffs.empty()) throw error("solver starved");

    std::optional<CosetLabel> closest_label;
    if (instr) {
        instr->pre_prune = out.coeffs.size();
        CvpResult exact = cvp_enum(L, hkz.gs, t, false);
        closest_label = label_of_coeffs(exact.coeffs);
        for (auto& c : out.coeffs)
            if (label_of_coeffs(c) == *closest_label) instr->closest_coset_pre = true;
    }

    // prune to (1+alpha)^2-approximate vectors, then truncate to p_cap
    Rat dmin = out.dist2[0];
    for (auto& d : out.dist2) dmin = std::min(dmin, d);
    Rat cutoff = dmin * (1 + alpha) * (1 + alpha);
    std::vector<size_t> order;
    for (size_t i = 0; i < out.coeffs.size(); ++i)
        if (out.dist2[i] < cutoff || out.dist2[i] == dmin) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (out.dist2[a] != out.dist2[b]) return out.dist2[a] < out.dist2[b];
        return lex_less_int(out.coeffs[a], out.coeffs[b]);
    });
    if (order.size() > cfg.p_cap) order.resize(cfg.p_cap);

    CoreCandidates pruned;
    for (size_t i : order) {
        pruned.coeffs.push_back(out.coeffs[i]);
        pruned.dist2.push_back(out.dist2[i]);
    }
    if (instr) {
        instr->post_prune = pruned.coeffs.size();
        for (auto& c : pruned.coeffs)
            if (label_of_coeffs(c) == *closest_label) instr->closest_coset_post = true;
    }
    return pruned;
}

struct RecurseResult {
    RatVec vector;  // lattice vector, ambient
    Rat dist2;
};

RecurseResult cvp_recurse(const Lattice& view, const RatVec& t, const CCVPConfig& cfg,
                          uint64_t seed, CensusTable* census) {
    const int r = view.rank();
    if (census) ++(*census)[r];
    if (r == 0) return {RatVec(t.size(), Rat(0)), norm2(t)};
    if (r == 1) {
        // one-dimensional instance: rounding with the lexicographic tie-break
        const RatVec& b = view.vectors[0];
        Rat c = dot(t, b) / norm2(b);
        Int fl;
        mpz_fdiv_q(fl.get_mpz_t(), c.get_num().get_mpz_t(), c.get_den().get_mpz_t());
        RecurseResult best;
        bool have = false;
        for (Int z = fl; z <= fl + 1; ++z) {
            RatVec v(t.size(), Rat(0));
            axpy(v, Rat(z), b);
            Rat d2 = norm2(sub(v, t));
            if (!have || d2 < best.dist2) {
                best = {v, d2};
                have = true;
            }
        }
        return best;
    }

    HKZData hkz = hkz_reduce(view);
    uint64_t s1 = seed ^ 0x9e3779b97f4a7c15ULL;
    CoreCandidates cand = ccvp_core(hkz, t, cfg, splitmix64(s1), nullptr);
    const int f = cfg.f_cluster > 0 ? cfg.f_cluster : default_f_cluster(r);
    GoodIndex gi = good_index(hkz, f);
    const int k = gi.k;

    // group by coset of L' = L(b_1..b_{k-1}): key = coefficient suffix
    std::vector<std::vector<Int>> reps;
    std::vector<std::vector<Int>> rep_keys;
    for (auto& c : cand.coeffs) {
        std::vector<Int> key(c.begin() + (k - 1), c.end());
        bool found = false;
        for (auto& kk : rep_keys)
            if (kk == key) { found = true; break; }
        if (!found) {
            rep_keys.push_back(key);
            reps.push_back(c);
        }
    }

    Lattice prefix{RatMat(hkz.lattice.vectors.begin(), hkz.lattice.vectors.begin() + (k - 1))};
    RecurseResult best;
    bool have = false;
    for (size_t ci = 0; ci < reps.size(); ++ci) {
        RatVec yc = hkz.lattice.vector_of(reps[ci]);
        uint64_t child = seed ^ (0xc2b2ae3d27d4eb4fULL + suffix_hash(reps[ci], k - 1));
        RecurseResult rec = cvp_recurse(prefix, sub(t, yc), cfg, splitmix64(child), census);
        RatVec total = add(rec.vector, yc);
        if (!have || rec.dist2 < best.dist2 ||
            (rec.dist2 == best.dist2 && lex_less_rat(total, best.vector))) {
            best = {total, rec.dist2};
            have = true;
        }
    }
    if (!have) throw error("solver starved");
    return best;
}

}  // namespace

bool cluster_test(const Basis& B, const RatVec& t, const RatVec& w1, const RatVec& w2,
                  const Rat& r1_sq, const Rat& r2_sq) {
    RationalGS gs = rational_gram_schmidt(B);
    CosetLabel l1 = coset_label(B, gs, add(w1, t));
    CosetLabel l2 = coset_label(B, gs, add(w2, t));
    if (!(l1 == l2)) throw precondition_error("cluster_test: labels differ");
    return norm2(sub(w1, w2)) < 2 * (r1_sq + r2_sq);
}

GoodIndex good_index(const HKZData& hkz, int f_cluster) {
    const int n = hkz.lattice.rank();
    const int f = f_cluster > 0 ? f_cluster : default_f_cluster(n);
    const RationalGS& gs = hkz.gs;

    Rat R2 = gs.gs_norm2[0];
    for (auto& q : gs.gs_norm2) R2 = std::max(R2, q);

    // m_j = smallest index i with ||gs_i||^2 >= R^2 / n^{2j} (1-based)
    auto m_of = [&](int j) {
        Int njpow = 1;
        for (int a = 0; a < 2 * j; ++a) njpow *= n;
        for (int i = 0; i < n; ++i)
            if (gs.gs_norm2[i] * njpow >= R2) return i + 1;
        return n;  // unreachable for gamma = 1
    };
    std::vector<int> m(2 * f);
    for (int j = 0; j < 2 * f; ++j) m[j] = m_of(j);

    GoodIndex out;
    bool found = false;
    for (int j = 1; j <= f && j < 2 * f; ++j) {
        if (m[j] == m[j - 1]) {
            out.k = m[j];
            out.window_ell = out.k;
            out.shift_bound = saturating_pow(2, n - out.k + 1);
            out.case_id = 1;
            found = true;
            break;
        }
    }
    if (!found) {
        for (int j = f; j < 2 * f; ++j) {
            if ((m[j - 1] - m[j]) * static_cast<long>(f) < n) {
                out.k = m[j];
                out.window_ell = m[j - 1];
                uint64_t ball = saturating_pow(static_cast<uint64_t>(2 * n),
                                               out.window_ell - out.k);
                uint64_t cnt = ball > (uint64_t{1} << 61) ? (uint64_t{1} << 62) : 2 * ball - 1;
                uint64_t shifts = saturating_pow(2, n - out.k + 1);
                unsigned __int128 b =
                    static_cast<unsigned __int128>(shifts) * cnt;
                out.shift_bound =
                    b > (static_cast<unsigned __int128>(1) << 62) ? (uint64_t{1} << 62)
                                                                  : static_cast<uint64_t>(b);
                out.case_id = 2;
                found = true;
                break;
            }
        }
    }
    if (!found) throw error("good_index: no qualifying index (internal)");

    // certification via the covering-radius bound: gs_k >= (2/sqrt(n)) U / n^{2f-1}
    // implies the lemma's gs_k >= gamma mu(L) / n^{2f}
    real_t U = covering_radius_upper(to_float_gs(gs));
    real_t lhs = std::sqrt(to_real(gs.gs_norm2[out.k - 1]));
    real_t rhs = (2.0L / std::sqrt(static_cast<real_t>(n))) * U /
                 std::pow(static_cast<real_t>(n), 2.0L * f - 1);
    if (lhs < rhs * (1 - 1e-9L)) throw error("good_index: covering certification failed");
    return out;
}

ShiftCountProbe sparse_shift_count(const HKZData& hkz, const RatVec& t, int k, int window_ell,
                                   real_t s_param) {
    const Lattice& L = hkz.lattice;
    const int n = L.rank();
    if (k < 1 || k > n || window_ell < k || window_ell > n + 1)
        throw precondition_error("sparse_shift_count: bad indices");

    ShiftCountProbe out;
    Rat s2 = Rat(mpq_class(static_cast<double>(s_param)));
    s2 = s2 * s2;

    Rat cap = s2 * hkz.gs.gs_norm2[k - 1];
    if (window_ell <= n) cap = std::min(cap, hkz.gs.gs_norm2[window_ell - 1]);
    Rat prefix_sum = 0;
    for (int i = 0; i < k - 1; ++i) prefix_sum += hkz.gs.gs_norm2[i];
    out.r_sq = cap - Rat(k - 1, 2) * prefix_sum;
    if (out.r_sq <= 0) {
        out.condition_ok = false;
        return out;
    }
    out.condition_ok = true;

    Rat dist2 = cvp_enum(L, hkz.gs, t, false).dist2;
    Rat limit2 = dist2 + out.r_sq;

    // enumerate coefficient suffixes whose projection falls inside the ball,
    // then test dist(t, L' + w)^2 < dist^2 + r^2 exactly
    GramSchmidt fgs = to_float_gs(hkz.gs);
    GramSchmidt tailgs;
    const int m = n - (k - 1);
    tailgs.gs_norm2.assign(m, 0);
    tailgs.gs_norms.assign(m, 0);
    tailgs.mu.assign(m, std::vector<real_t>(m, 0));
    for (int i = 0; i < m; ++i) {
        tailgs.gs_norm2[i] = fgs.gs_norm2[k - 1 + i];
        tailgs.gs_norms[i] = fgs.gs_norms[k - 1 + i];
        for (int j = 0; j <= i; ++j) tailgs.mu[i][j] = fgs.mu[k - 1 + i][k - 1 + j];
    }
    std::vector<real_t> tc(m);
    for (int i = 0; i < m; ++i)
        tc[i] = to_real(dot(t, hkz.gs.gs[k - 1 + i]) / hkz.gs.gs_norm2[k - 1 + i]);

    Lattice prefix{RatMat(L.vectors.begin(), L.vectors.begin() + (k - 1))};
    RationalGS prefixgs;
    if (k > 1) prefixgs = rational_gram_schmidt(prefix);

    uint64_t count = 0;
    detail::EnumCore core;
    core.g = &tailgs;
    core.tc = tc;
    core.limit = to_real(limit2) * (1 + 1e-9L);
    core.run([&](const std::vector<long long>& suffix, real_t) {
        RatVec w(L.ambient(), Rat(0));
        for (int j = 0; j < m; ++j)
            if (suffix[j] != 0) axpy(w, Rat(static_cast<long>(suffix[j])), L.vectors[k - 1 + j]);
        Rat d2;
        if (k == 1) {
            d2 = norm2(sub(w, t));
        } else {
            d2 = cvp_enum(prefix, prefixgs, sub(t, w), false).dist2;
        }
        if (d2 < limit2) ++count;
    });
    out.count = count;

    int sc = static_cast<int>(std::ceil(2 * static_cast<double>(s_param)));
    uint64_t ball = saturating_pow(static_cast<uint64_t>(sc), window_ell - k);
    uint64_t cnt = ball > (uint64_t{1} << 61) ? (uint64_t{1} << 62) : 2 * ball - 1;
    unsigned __int128 b = static_cast<unsigned __int128>(saturating_pow(2, n - k + 1)) * cnt;
    out.bound = b > (static_cast<unsigned __int128>(1) << 62) ? (uint64_t{1} << 62)
                                                              : static_cast<uint64_t>(b);
    return out;
}

CandidateSet ccvp_solve(const Basis& B, const RatVec& t, const CCVPConfig& cfg, uint64_t seed,
                        CcvpInstrumentation* instr) {
    HKZData hkz = hkz_reduce(B);
    CoreCandidates core = ccvp_core(hkz, t, cfg, seed, instr);
    CandidateSet out;
    // convert HKZ coordinates back to the caller's basis
    RationalGS bgs = rational_gram_schmidt(B);
    for (size_t i = 0; i < core.coeffs.size(); ++i) {
        RatVec v = hkz.lattice.vector_of(core.coeffs[i]);
        auto coords = coords_in_span(B, bgs, v);
        std::vector<Int> c(B.n());
        for (int j = 0; j < B.n(); ++j) c[j] = (*coords)[j].get_num();
        out.labels.push_back(label_of_coeffs(c));
        out.coeffs.push_back(std::move(c));
        out.dist2.push_back(core.dist2[i]);
    }
    return out;
}

CvpOutcome exact_cvp_once(const Basis& B, const RatVec& t, const CCVPConfig& cfg, uint64_t seed,
                          CensusTable* census) {
    RecurseResult r = cvp_recurse(B, t, cfg, seed, census);
    RationalGS gs = rational_gram_schmidt(B);
    auto coords = coords_in_span(B, gs, r.vector);
    CvpOutcome out;
    out.coeffs.resize(B.n());
    for (int i = 0; i < B.n(); ++i) out.coeffs[i] = (*coords)[i].get_num();
    out.vector = r.vector;
    out.dist2 = r.dist2;
    return out;
}

CvpOutcome exact_cvp(const Basis& B, const RatVec& t, const CCVPConfig& cfg, uint64_t seed,
                     CensusTable* census) {
    CvpOutcome best = exact_cvp_once(B, t, cfg, splitmix64(seed), census);
    for (int rep = 1; rep < cfg.rmax; ++rep) {
        uint64_t s = seed + 0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(rep);
        CvpOutcome cur = exact_cvp_once(B, t, cfg, splitmix64(s), census);
        if (cur.dist2 == best.dist2 && rep >= 1) {
            if (lex_less_int(cur.coeffs, best.coeffs)) best = cur;
            return best;  // two agreeing runs
        }
        if (cur.dist2 < best.dist2) best = cur;
    }
    return best;
}

CensusTable recursion_census(const Basis& B, const RatVec& t, const CCVPConfig& cfg,
                             uint64_t seed) {
    CensusTable census;
    exact_cvp_once(B, t, cfg, seed, &census);
    return census;
}

}  // namespace latgauss
