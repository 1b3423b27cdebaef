#include "latgauss/dgs.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "latgauss/stream_pipeline.hpp"

namespace latgauss {

namespace {

real_t init_radius(const GaussianParam& s_hat, int n, const DgsConfig& cfg) {
    return cfg.init_radius_c * s_hat.value() /
           std::sqrt(std::log(static_cast<real_t>(n + 2)));
}

int prefix_under(const RationalGS& gs, real_t r) {
    int k = 0;
    const real_t r2 = r * r;
    for (int i = 0; i < gs.rank(); ++i) {
        if (to_real(gs.gs_norm2[i]) <= r2)
            ++k;
        else
            break;
    }
    return k;
}

bool klein_ok_prefix(const HKZData& hkz, int k, const GaussianParam& s_hat, real_t klein_factor) {
    if (k <= 1) return true;  // empty or one-dimensional prefix is exact
    real_t maxgs = 0;
    for (int i = 0; i < k; ++i) maxgs = std::max(maxgs, std::sqrt(to_real(hkz.gs.gs_norm2[i])));
    return s_hat.value() >=
           klein_factor * std::sqrt(std::log(static_cast<real_t>(k + 2))) * maxgs;
}

}  // namespace

DistanceEstimate distance_estimate_oracle(const Lattice& L, const RationalGS& gs,
                                          const RatVec& t) {
    CvpResult r = cvp_enum(L, gs, t, false);
    real_t d = std::sqrt(to_real(r.dist2));
    return {d, d};
}

DistanceEstimate distance_estimate_witness(const HKZData& hkz, const RatVec& t) {
    const Lattice& L = hkz.lattice;
    const int n = L.rank();
    Rat best2 = norm2(sub(L.vector_of(babai_nearest_plane(L, hkz.gs, t)), t));

    // anchored prefix sweep: exact CVP on the projected tail (rank n-k),
    // Babai on the prefix
    for (int k = n - 1; k >= 1; --k) {
        // projected tail basis pi_k(b_j) for j > k, expressed in ambient coords
        RatMat tail;
        for (int j = k; j < n; ++j) {
            RatVec v(L.ambient(), Rat(0));
            for (int i = k; i <= j; ++i) axpy(v, hkz.gs.mu[j][i], hkz.gs.gs[i]);
            tail.push_back(std::move(v));
        }
        Lattice M{tail};
        RationalGS mgs = rational_gram_schmidt(M);
        CvpResult proj = cvp_enum(M, mgs, t, false);
        // lift: w = sum a_j b_j + babai of the prefix remainder
        RatVec w(L.ambient(), Rat(0));
        for (int j = 0; j < n - k; ++j) axpy(w, Rat(proj.coeffs[j]), L.vectors[k + j]);
        Lattice P{RatMat(L.vectors.begin(), L.vectors.begin() + k)};
        RationalGS pgs = rational_gram_schmidt(P);
        auto pb = babai_nearest_plane(P, pgs, sub(t, w));
        axpy(w, Rat(1), P.vector_of(pb));
        // w is a lattice vector; its distance bounds dist from above
        Rat d2 = norm2(sub(w, t));
        if (d2 < best2) best2 = d2;
    }
    real_t up = std::sqrt(to_real(best2));
    return {up / 2, up};
}

SublatticeSplit shifted_sublattice(const HKZData& hkz, const RatVec& t, real_t r, real_t u,
                                   const DistanceEstimate& est, bool enforce_radius) {
    est.validate();
    const Lattice& L = hkz.lattice;
    const int n = L.rank();

    SublatticeSplit out;
    out.radius = r;
    out.enum_param_u = u;
    const int k = prefix_under(hkz.gs, r);
    out.k_index = k + 1;
    out.sub_basis = Lattice{RatMat(L.vectors.begin(), L.vectors.begin() + k)};
    if (k > 0) out.sub_gs = rational_gram_schmidt(out.sub_basis);

    // gamma = u^{n/u} collapses to 1: exact HKZ
    out.radius_precondition_ok =
        r >= (1 + std::sqrt(static_cast<real_t>(n))) * est.upper - 1e-18L;
    if (k == n) {
        out.anchor_coeffs.assign(n, Int(0));
        out.anchor.assign(L.ambient(), Rat(0));
        out.lift_suffix.clear();
        return out;  // trivial split, anchor irrelevant
    }
    if (enforce_radius && !out.radius_precondition_ok)
        throw precondition_error("radius too small");

    // anchor: exact closest vector in the projected lattice pi_k(L)
    RatMat tail;
    for (int j = k; j < n; ++j) {
        RatVec v(L.ambient(), Rat(0));
        for (int i = k; i <= j; ++i) axpy(v, hkz.gs.mu[j][i], hkz.gs.gs[i]);
        tail.push_back(std::move(v));
    }
    Lattice M{tail};
    RationalGS mgs = rational_gram_schmidt(M);
    CvpResult proj = cvp_enum(M, mgs, t, false);

    out.lift_suffix = proj.coeffs;
    out.anchor_coeffs.assign(n, Int(0));
    for (int j = 0; j < n - k; ++j) out.anchor_coeffs[k + j] = -proj.coeffs[j];
    std::vector<Int> ac = out.anchor_coeffs;
    out.anchor = L.vector_of(ac);
    return out;
}

SublatticeSplit shifted_sublattice(const Basis& B, const RatVec& t, real_t r, real_t u) {
    HKZData hkz = hkz_reduce(B);
    DistanceEstimate est = distance_estimate_oracle(hkz.lattice, hkz.gs, t);
    return shifted_sublattice(hkz, t, r, u, est, true);
}

int derive_ell(const HKZData& hkz, const RatVec& t, const GaussianParam& s, int min_ell,
               const DgsConfig& cfg, const DistanceEstimate& est, bool enforce_radius) {
    const int n = hkz.lattice.rank();
    if (n == 1) return min_ell;  // 1-D sampling is exact at any parameter
    const real_t spread = cfg.support_c * s.value() * std::sqrt(static_cast<real_t>(n));
    for (int ell = min_ell; ell <= min_ell + cfg.ell_cap; ++ell) {
        GaussianParam s_hat = s.raised(ell);
        real_t r = init_radius(s_hat, n, cfg);
        int k = prefix_under(hkz.gs, r);
        if (!klein_ok_prefix(hkz, k, s_hat, cfg.klein_factor)) continue;
        if (enforce_radius && k < n &&
            r < (1 + std::sqrt(static_cast<real_t>(n))) * est.upper)
            continue;
        // the split must capture the effective support of D_{L-t,s}: either
        // the whole basis, or a radius covering dist + spread
        if (k < n && r < est.upper + spread) continue;
        return ell;
    }
    throw precondition_error("no feasible step count for dgs (radius/Klein preconditions)");
}

// Largest stage count the sample budget can feed: the two-halves square
// sampler consumes roughly a factor 8 per stage.
int affordable_ell(uint64_t M, int min_ell, uint64_t starve_margin) {
    int ell = 0;
    real_t budget = static_cast<real_t>(M) / static_cast<real_t>(std::max<uint64_t>(starve_margin, 1));
    while (budget >= 8.0L && ell < 64) {
        budget /= 8.0L;
        ++ell;
    }
    return std::max(ell, min_ell);
}

InitSamples init_samples(const HKZData& hkz, const RatVec& t, uint64_t M,
                         const GaussianParam& s_hat, real_t u, Rng& rng, const DgsConfig& cfg,
                         const std::optional<DistanceEstimate>& est_opt, bool enforce_radius) {
    const Lattice& L = hkz.lattice;
    const int n = L.rank();
    DistanceEstimate est =
        est_opt ? *est_opt : distance_estimate_witness(hkz, t);

    real_t r = n == 1 ? std::sqrt(to_real(hkz.gs.gs_norm2[0])) + 1 : init_radius(s_hat, n, cfg);
    SublatticeSplit split = shifted_sublattice(hkz, t, r, u, est, enforce_radius);
    const int k = split.sub_rank();

    InitSamples out;
    out.batch.lattice = &hkz.lattice;
    out.batch.shift = t;
    out.batch.s = s_hat;
    out.batch.dim = n;
    out.batch.data.reserve(M * n);

    std::vector<coeff_t> row(n, 0);
    for (int j = 0; j < n - k; ++j) {
        if (split.lift_suffix.empty()) break;
        row[k + j] = static_cast<coeff_t>(split.lift_suffix[j].get_si());
    }

    if (k == 0) {
        for (uint64_t i = 0; i < M; ++i) out.batch.push_row(row.data());
    } else {
        if (!klein_ok_prefix(hkz, k, s_hat, cfg.klein_factor) && k >= 2)
            throw precondition_error("parameter too small for Klein");
        RatVec target = add(split.anchor, t);  // y + t
        KleinSampler ks(split.sub_basis, split.sub_gs, target, s_hat, cfg.klein_factor,
                        /*enforce=*/false);
        for (uint64_t i = 0; i < M; ++i) {
            ks.draw_into(rng, row.data());
            out.batch.push_row(row.data());
        }
    }
    out.split = std::move(split);
    return out;
}

DgsResult dgs_solve(const DGSRequest& req, const PipelineConfig& cfg, uint64_t M_override,
                    Rng& rng, const DgsOptions& opts, const HKZData* hkz_hint,
                    const std::optional<DistanceEstimate>& est_hint) {
    cfg.validate();
    if (!req.lattice) throw precondition_error("dgs request without lattice");
    HKZData local;
    const HKZData* hkz = hkz_hint;
    if (!hkz) {
        local = hkz_reduce(*req.lattice);
        hkz = &local;
    }
    const int n = hkz->lattice.rank();

    DistanceEstimate est;
    if (est_hint)
        est = *est_hint;
    else if (opts.oracle_estimate)
        est = distance_estimate_oracle(hkz->lattice, hkz->gs, req.shift);
    else
        est = distance_estimate_witness(*hkz, req.shift);

    // sigma precondition: s > dist / f
    if (req.f > 0 && req.s.value() * req.f < est.upper)
        throw precondition_error("parameter below the sigma floor dist/f");

    DgsResult out;
    out.ell_eff = derive_ell(*hkz, req.shift, req.s, cfg.ell, opts.cfg, est,
                             opts.enforce_radius);
    if (M_override > 0)
        out.ell_eff = std::min(out.ell_eff,
                               affordable_ell(M_override, cfg.ell, opts.cfg.starve_margin));
    out.s_hat = req.s.raised(out.ell_eff);

    uint64_t M = M_override;
    if (M == 0) {
        PipelineConfig eff{out.ell_eff, cfg.kappa};
        real_t lg = strict_input_log2(eff, n) + 1;  // two strictly sized halves
        if (lg > 62) throw precondition_error("strict dgs input size exceeds 2^62");
        M = static_cast<uint64_t>(std::ceil(std::exp2(lg)));
    }

    PipelineConfig eff_cfg{out.ell_eff, cfg.kappa};
    PipelineOptions popts;
    popts.strict = opts.strict;
    popts.verify = false;  // final verification handled below on the full batch

    const uint64_t half = M / 2;
    if (M >= opts.cfg.stream_threshold && n <= 20) {
        // streamed halves: per-thread Klein sources over deterministic chunks
        InitSamples probe = init_samples(*hkz, req.shift, 0, out.s_hat, 2.0L, rng, opts.cfg,
                                         est, opts.enforce_radius);
        out.split = probe.split;
        const SublatticeSplit& split = out.split;
        const int k = split.sub_rank();
        RatVec target = add(split.anchor, req.shift);

        struct KleinSource : RowSource {
            const SublatticeSplit* split;
            const HKZData* hkz;
            RatVec target;
            GaussianParam s_hat;
            real_t kf;
            uint64_t seed;
            int n, k;
            std::vector<coeff_t> suffix_row;
            std::unique_ptr<KleinSampler> ks;

            void fill(uint64_t chunk, uint32_t count, coeff_t* outp) override {
                Rng r = Rng::substream(seed, chunk);
                for (uint32_t i = 0; i < count; ++i) {
                    coeff_t* row = outp + size_t{i} * n;
                    std::copy(suffix_row.begin(), suffix_row.end(), row);
                    if (ks) ks->draw_into(r, row);
                }
            }
        };
        uint64_t stream_seed = rng.next_u64();
        auto factory = [&, stream_seed]() -> std::unique_ptr<RowSource> {
            auto src = std::make_unique<KleinSource>();
            src->split = &split;
            src->hkz = hkz;
            src->target = target;
            src->s_hat = out.s_hat;
            src->kf = opts.cfg.klein_factor;
            src->seed = stream_seed;
            src->n = n;
            src->k = k;
            src->suffix_row.assign(n, 0);
            for (int j = 0; j < n - k && !split.lift_suffix.empty(); ++j)
                src->suffix_row[k + j] = static_cast<coeff_t>(split.lift_suffix[j].get_si());
            if (k > 0)
                src->ks = std::make_unique<KleinSampler>(split.sub_basis, split.sub_gs, target,
                                                         out.s_hat, opts.cfg.klein_factor,
                                                         false);
            return src;
        };
        uint64_t seed_a = rng.next_u64(), seed_b = rng.next_u64();
        StreamResult ra = pipeline_streamed(hkz->lattice, req.shift, out.s_hat, out.ell_eff,
                                            cfg.kappa, half, n, factory, seed_a, opts.cfg.threads);
        // second half regenerates from chunk indices offset by the half count
        struct OffsetSource : RowSource {
            std::unique_ptr<RowSource> inner;
            uint64_t offset;
            void fill(uint64_t chunk, uint32_t count, coeff_t* outp) override {
                inner->fill(chunk + offset, count, outp);
            }
        };
        auto factory_b = [&, stream_seed]() -> std::unique_ptr<RowSource> {
            auto o = std::make_unique<OffsetSource>();
            o->inner = factory();
            o->offset = uint64_t{1} << 40;
            return o;
        };
        StreamResult rb = pipeline_streamed(hkz->lattice, req.shift, out.s_hat, out.ell_eff,
                                            cfg.kappa, M - half, n, factory_b, seed_b,
                                            opts.cfg.threads);
        out.batch = std::move(ra.final);
        out.batch.data.insert(out.batch.data.end(), rb.final.data.begin(), rb.final.data.end());
        for (auto& e : rb.final.sd_ledger) out.batch.sd_ledger.push_back(e);
        out.batch.sd_budget += rb.final.sd_budget;
        for (auto& st : ra.stages) out.report.stages.push_back(st);
        for (auto& st : rb.stages) out.report.stages.push_back(st);
    } else {
        InitSamples init = init_samples(*hkz, req.shift, M, out.s_hat, 2.0L, rng, opts.cfg,
                                        est, opts.enforce_radius);
        out.split = init.split;
        SampleBatch first = init.batch, second = init.batch;
        first.data.resize(half * n);
        second.data.erase(second.data.begin(), second.data.begin() + half * n);
        PipelineReport rep_a, rep_b;
        SampleBatch outa = pipeline(first, eff_cfg, popts, rng, &rep_a);
        SampleBatch outb = pipeline(second, eff_cfg, popts, rng, &rep_b);
        out.batch = std::move(outa);
        out.batch.data.insert(out.batch.data.end(), outb.data.begin(), outb.data.end());
        for (auto& e : outb.sd_ledger) out.batch.sd_ledger.push_back(e);
        out.batch.sd_budget += outb.sd_budget;
        for (auto& st : rep_a.stages) out.report.stages.push_back(st);
        for (auto& st : rep_b.stages) out.report.stages.push_back(st);
        out.report.starved = rep_a.starved || rep_b.starved;
    }

    // landing parameter is exactly s
    if (!(out.batch.s == req.s)) throw error("dgs: parameter bookkeeping drifted");

    if (opts.verify && n <= kDeskDimCap) {
        MassOracle oracle(hkz->lattice, hkz->gs);
        out.m_target = oracle.m_target(req.shift, req.s, opts.mass_eps);
        out.shortfall = static_cast<real_t>(out.batch.count()) < out.m_target;
        if (out.shortfall && opts.strict) throw error("pipeline starved");
        if (out.batch.count() >= 1000) {
            ExactSampler ex(hkz->lattice, hkz->gs, req.shift, req.s);
            std::map<std::vector<coeff_t>, uint64_t> obs;
            for (size_t i = 0; i < out.batch.count(); ++i) {
                std::vector<coeff_t> key(out.batch.row(i), out.batch.row(i) + n);
                ++obs[key];
            }
            real_t tv = 0;
            const real_t N = static_cast<real_t>(out.batch.count());
            std::map<std::vector<coeff_t>, real_t> expd;
            for (size_t j = 0; j < ex.support_size(); ++j)
                expd[std::vector<coeff_t>(ex.coeffs(j), ex.coeffs(j) + n)] = ex.prob(j);
            for (auto& [key, p] : expd) {
                auto it = obs.find(key);
                real_t f = it == obs.end() ? 0.0L : static_cast<real_t>(it->second) / N;
                tv += std::fabs(f - p);
            }
            for (auto& [key, c] : obs)
                if (!expd.count(key)) tv += static_cast<real_t>(c) / N;
            out.tv = tv / 2;
        }
    }
    return out;
}

ApproxCvpResult approx_cvp(const Basis& B, const RatVec& t, real_t f, Rng& rng,
                           const DgsOptions& opts, uint64_t M_override) {
    HKZData hkz = hkz_reduce(B);
    const int n = B.n();
    DistanceEstimate est = opts.oracle_estimate
                               ? distance_estimate_oracle(hkz.lattice, hkz.gs, t)
                               : distance_estimate_witness(hkz, t);

    if (est.upper == 0) {
        // t is a lattice point
        auto coords = coords_in_span(B, hkz.gs, t);
        std::vector<Int> c;
        for (auto& q : *coords) c.push_back(q.get_num());
        return {c, B.vector_of(c), Rat(0)};
    }

    DGSRequest req;
    req.lattice = &hkz.lattice;
    req.shift = t;
    req.s = GaussianParam::of(est.lower / (n * f));
    req.f = 2 * n * f * (est.upper / est.lower);  // generous sigma budget
    PipelineConfig pcfg{2, 4.0};
    uint64_t M = M_override ? M_override : std::max<uint64_t>(4096, uint64_t{256} << n);
    DgsResult res = dgs_solve(req, pcfg, M, rng, opts, &hkz, est);
    if (res.batch.count() == 0) throw error("solver starved");

    // closest sample + t, exact comparison
    Rat best2;
    std::vector<Int> best;
    bool have = false;
    for (size_t i = 0; i < res.batch.count(); ++i) {
        std::vector<Int> c(n);
        for (int j = 0; j < n; ++j) c[j] = static_cast<long>(res.batch.row(i)[j]);
        Rat d2 = norm2(sub(hkz.lattice.vector_of(c), t));
        if (!have || d2 < best2) {
            best2 = d2;
            best = c;
            have = true;
        }
    }
    return {best, hkz.lattice.vector_of(best), best2};
}

}  // namespace latgauss
