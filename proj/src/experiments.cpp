#include "latgauss/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "latgauss/checks.hpp"
#include "latgauss/stream_pipeline.hpp"

namespace latgauss {

void ExperimentSpec::validate() const {
    if (trials < 1) throw precondition_error("experiment: trials must be >= 1");
    for (int d : dims)
        if (d < 1 || d > 20) throw precondition_error("experiment: dimension outside desk scale");
}

std::string ReportRecord::line() const {
    std::ostringstream ss;
    ss << "experiment=" << experiment << " instance=" << std::hex << instance_hash << std::dec
       << " metric=" << metric << " value=" << value << " tol=" << tolerance
       << " pass=" << (pass ? 1 : 0);
    return ss.str();
}

namespace suites {

namespace {

RatVec uniform_target(const Basis& B, Rng& rng) {
    const long denom = 1L << 20;
    RatVec t(B.n(), Rat(0));
    for (int i = 0; i < B.n(); ++i)
        axpy(t, Rat(static_cast<long>(rng.below(denom)), denom), B.vectors[i]);
    return t;
}

struct ExactSource : RowSource {
    const ExactSampler* sampler;
    uint64_t base_seed;
    int dim;
    void fill(uint64_t chunk, uint32_t count, coeff_t* out) override {
        Rng rng = Rng::substream(base_seed, chunk);
        for (uint32_t i = 0; i < count; ++i)
            sampler->draw_into(rng, out + size_t{i} * dim);
    }
};

std::map<std::vector<int>, double> expected_map(const ExactSampler& ex) {
    std::map<std::vector<int>, double> m;
    for (size_t j = 0; j < ex.support_size(); ++j) {
        std::vector<int> key(ex.coeffs(j), ex.coeffs(j) + ex.dim());
        m[key] = static_cast<double>(ex.prob(j));
    }
    return m;
}

std::map<std::vector<int>, uint64_t> observed_map(const SampleBatch& b) {
    std::map<std::vector<int>, uint64_t> m;
    for (size_t i = 0; i < b.count(); ++i)
        ++m[std::vector<int>(b.row(i), b.row(i) + b.dim)];
    return m;
}

double tv_of(const std::map<std::vector<int>, uint64_t>& obs,
             const std::map<std::vector<int>, double>& expd, uint64_t N) {
    double tv = 0;
    for (auto& [k, p] : expd) {
        auto it = obs.find(k);
        double f = it == obs.end() ? 0.0 : static_cast<double>(it->second) / N;
        tv += std::fabs(f - p);
    }
    for (auto& [k, c] : obs)
        if (!expd.count(k)) tv += static_cast<double>(c) / N;
    return tv / 2;
}

}  // namespace

CriterionResult c1_cvp_equivalence(uint64_t seed, int threads, int trials_per_dim,
                                   std::vector<int> dims) {
    (void)threads;
    CriterionResult out;
    out.name = "exact-cvp oracle equivalence";
    auto t0 = std::chrono::steady_clock::now();

    CCVPConfig cfg;
    cfg.oracle_estimate = false;
    bool all_pass = true;
    uint64_t singles = 0, amps = 0, total = 0;
    for (int n : dims) {
        uint64_t good_single = 0, good_amp = 0;
        for (int trial = 0; trial < trials_per_dim; ++trial) {
            TargetMode mode = static_cast<TargetMode>(trial % 3);
            uint64_t iseed = mix64(seed) ^ (static_cast<uint64_t>(n) << 32) ^
                             static_cast<uint64_t>(trial);
            Instance inst = gen_instance(n, 10, iseed, mode);
            CvpResult oracle = cvp_enum(inst.basis, inst.target);
            CvpOutcome single = exact_cvp_once(inst.basis, inst.target, cfg, iseed ^ 0x5151);
            if (single.dist2 == oracle.dist2) ++good_single;
            CvpOutcome amp = exact_cvp(inst.basis, inst.target, cfg, iseed ^ 0xA0A0);
            if (amp.dist2 == oracle.dist2) ++good_amp;
        }
        singles += good_single;
        amps += good_amp;
        total += trials_per_dim;
        double rate = static_cast<double>(good_single) / trials_per_dim;
        double arate = static_cast<double>(good_amp) / trials_per_dim;
        ReportRecord r1{"cvp-equivalence", static_cast<uint64_t>(n), "single_run_rate", rate,
                        0.99, rate >= 0.99};
        ReportRecord r2{"cvp-equivalence", static_cast<uint64_t>(n), "amplified_rate", arate,
                        1.0, arate == 1.0};
        all_pass = all_pass && r1.pass && r2.pass;
        out.records.push_back(r1);
        out.records.push_back(r2);
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ReportRecord rt{"cvp-equivalence", 0, "runtime_seconds", secs, 1800, secs < 1800};
    all_pass = all_pass && rt.pass;
    out.records.push_back(rt);
    out.pass = all_pass;
    std::ostringstream ss;
    ss << "single " << singles << "/" << total << ", amplified " << amps << "/" << total << ", "
       << static_cast<int>(secs) << "s";
    out.summary = ss.str();
    return out;
}

CriterionResult c2_combiner_identity(uint64_t seed, uint64_t pairs_target) {
    CriterionResult out;
    out.name = "combiner distribution identity";
    const int kInstances = 6;
    const double p_floor = 0.001 / kInstances;  // Bonferroni across the suite
    bool all = true;

    for (int inst = 0; inst < kInstances; ++inst) {
        Rng gen_rng(mix64(seed) + inst);
        Basis B = inst == 0 ? Basis(RatMat{{Rat(1)}}) : gen_basis(2, 10, gen_rng);
        Rng rng = Rng::substream(seed, 0xC2 + inst);
        RatVec t = inst == 0 ? RatVec{Rat(0)} : uniform_target(B, rng);
        RationalGS gs = rational_gram_schmidt(B);
        GramSchmidt fgs = to_float_gs(gs);
        GaussianParam s =
            inst == 0 ? GaussianParam::of(2.0L) : GaussianParam::of(2.0L * fgs.max_gs_norm());

        ExactSampler src(B, gs, t, s);
        SampleBatch batch;
        batch.lattice = &B;
        batch.shift = t;
        batch.s = s;
        batch.dim = B.n();
        uint64_t M = pairs_target * 11;  // two-halves combiner emits ~M/8.5 pairs
        batch.data.resize(M * B.n());
        for (uint64_t i = 0; i < M; ++i) src.draw_into(rng, batch.row(i));

        SampleBatch combined = combine_once(batch, 4.0, rng);
        uint64_t pairs = combined.count();

        ExactSampler ref(B, gs, t, s.halved());
        auto obs = observed_map(combined);
        auto expd = expected_map(ref);
        std::map<std::vector<int>, uint64_t> obs_i(obs.begin(), obs.end());
        Chi2Tv stat = chi2_tv(obs_i, expd);

        uint64_t h = instance_hash(B, t);
        ReportRecord rp{"combiner-audit", h, "pairs", static_cast<double>(pairs),
                        static_cast<double>(pairs_target), pairs >= pairs_target};
        ReportRecord rtv{"combiner-audit", h, "tv", stat.tv, 0.02, stat.tv <= 0.02};
        ReportRecord rchi{"combiner-audit", h, "chi2_p", stat.p_value, p_floor,
                          stat.p_value > p_floor};
        all = all && rp.pass && rtv.pass && rchi.pass;
        out.records.push_back(rp);
        out.records.push_back(rtv);
        out.records.push_back(rchi);
    }
    out.pass = all;
    out.summary = all ? "TV and chi2 within bounds on Z and 5 random 2-D instances"
                      : "distribution mismatch";
    return out;
}

CriterionResult c3_pipeline_count(uint64_t seed, int threads, int runs, std::vector<int> ells) {
    CriterionResult out;
    out.name = "pipeline count law (strict sizing)";
    Instance inst = gen_instance(2, 10, mix64(seed) ^ 0xC3C3);
    const Basis& B = inst.basis;
    RationalGS gs = rational_gram_schmidt(B);
    GramSchmidt fgs = to_float_gs(gs);
    GaussianParam s = GaussianParam::of(1.2L * fgs.max_gs_norm());
    MassOracle oracle(B, gs);
    uint64_t h = instance_hash(B, inst.target);
    bool all = true;

    for (int ell : ells) {
        GaussianParam s_hat = s.raised(ell);
        ExactSampler src(B, gs, inst.target, s_hat);
        real_t m_tgt = oracle.m_target(inst.target, s, 1e-9L);
        PipelineConfig cfg{ell, 4.0};
        real_t mlog2 = strict_input_log2(cfg, 2);
        uint64_t M = static_cast<uint64_t>(std::ceil(std::exp2(mlog2)));

        int ok = 0;
        auto t0 = std::chrono::steady_clock::now();
        for (int run = 0; run < runs; ++run) {
            uint64_t rseed = mix64(seed) ^ (static_cast<uint64_t>(ell) << 40) ^
                             static_cast<uint64_t>(run);
            SourceFactory factory = [&]() -> std::unique_ptr<RowSource> {
                auto sp = std::make_unique<ExactSource>();
                sp->sampler = &src;
                sp->base_seed = rseed ^ 0xE0E0;
                sp->dim = 2;
                return sp;
            };
            StreamResult res = pipeline_streamed(B, inst.target, s_hat, ell, 4.0, M, 2,
                                                 factory, rseed, threads);
            if (static_cast<real_t>(res.final.count()) >= m_tgt) ++ok;
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        double rate = static_cast<double>(ok) / runs;
        ReportRecord r{"pipeline-count", h ^ static_cast<uint64_t>(ell), "count_law_rate", rate,
                       0.95, rate >= 0.95};
        ReportRecord rs{"pipeline-count", h ^ static_cast<uint64_t>(ell), "seconds", secs, 0,
                        true};
        all = all && r.pass;
        out.records.push_back(r);
        out.records.push_back(rs);
    }
    out.pass = all;
    out.summary = all ? "final counts meet m_target under strict sizing" : "count shortfall";
    return out;
}

CriterionResult c4_identity_suite(uint64_t seed, int instances) {
    CriterionResult out;
    out.name = "rho_s product identity";
    double worst = 0;
    int fails = 0;
    for (int i = 0; i < instances; ++i) {
        int n = 1 + (i % 3);
        Rng rng = Rng::substream(seed, 0xC4000 + i);
        Basis B = gen_basis(n, 4, rng);
        RatVec x = uniform_target(B, rng);
        RatVec y = uniform_target(B, rng);
        GaussianParam s = GaussianParam::of(0.6L + 2.4L * rng.uniform01());
        MassOracle oracle(B);
        IdentityCheck ic = check_rs_identity(oracle, x, y, s, 1e-12L);
        worst = std::max(worst, static_cast<double>(ic.residual));
        if (ic.residual > 3e-12L) ++fails;
    }
    ReportRecord r{"identity-suite", 0, "max_residual", worst, 3e-12, fails == 0};
    out.records.push_back(r);
    out.pass = fails == 0;
    std::ostringstream ss;
    ss << "max residual " << worst << " over " << instances << " instances";
    out.summary = ss.str();
    return out;
}

CriterionResult c5_holder_ladder(uint64_t seed, int holder_instances, int ladder_instances) {
    CriterionResult out;
    out.name = "Hoelder inequality and coset-mass ladder";
    double worst_margin = 1;
    int fails = 0;
    for (int i = 0; i < holder_instances; ++i) {
        int n = 1 + (i % 3);
        Rng rng = Rng::substream(seed, 0xC5000 + i);
        Basis B = gen_basis(n, 4, rng);
        RatVec t = uniform_target(B, rng);
        GaussianParam s = GaussianParam::of(0.6L + 2.4L * rng.uniform01());
        MassOracle oracle(B);
        HolderCheck hc = check_rs_holder(oracle, t, s, 1e-12L);
        worst_margin = std::min(worst_margin, static_cast<double>(hc.margin));
        if (hc.margin < -1e-9L) ++fails;
    }
    ReportRecord rh{"ladder-suite", 0, "min_holder_margin", worst_margin, -1e-9, fails == 0};
    out.records.push_back(rh);

    int lfails = 0;
    double worst_s = 0;
    for (int i = 0; i < ladder_instances; ++i) {
        int n = 1 + (i % 3);
        int ell = 2 + (i % 5);
        Rng rng = Rng::substream(seed, 0xC5900 + i);
        Basis B = gen_basis(n, 4, rng);
        RatVec t = uniform_target(B, rng);
        GramSchmidt fgs = gram_schmidt(B);
        GaussianParam s = GaussianParam::of((1.0L + 3.0L * rng.uniform01()) * fgs.max_gs_norm());
        MassOracle oracle(B);
        try {
            LadderTrace lt = coset_ladder(oracle, t, s, ell, 1e-12L);
            bool okay = lt.chosen_i >= 1 && lt.chosen_i <= ell;
            real_t quarter = std::exp2(static_cast<real_t>(n) / 4);
            for (int j = 0; j < ell; ++j) {
                okay = okay && lt.S[j] >= 1 - 1e-9L && lt.S[j] <= quarter * (1 + 1e-9L);
                okay = okay && lt.sandwich[j] >= 1 - 1e-9L &&
                       lt.sandwich[j] <= lt.S[j] * (1 + 1e-9L);
                worst_s = std::max(worst_s, static_cast<double>(lt.S[j] / quarter));
            }
            okay = okay && lt.S[lt.chosen_i - 1] <= lt.qualify_bound * (1 + 1e-9L);
            if (!okay) ++lfails;
        } catch (const error&) {
            ++lfails;
        }
    }
    ReportRecord rl{"ladder-suite", 1, "ladder_failures", static_cast<double>(lfails), 0,
                    lfails == 0};
    out.records.push_back(rl);
    out.pass = fails == 0 && lfails == 0;
    std::ostringstream ss;
    ss << "min margin " << worst_margin << ", ladder failures " << lfails;
    out.summary = ss.str();
    return out;
}

CriterionResult c6_clustering(uint64_t seed, uint64_t pairs_target) {
    CriterionResult out;
    out.name = "clustering and sparse-projection audit";
    uint64_t pairs = 0, proj_pairs = 0, cluster_viol = 0, project_viol = 0;
    int inst_count = 0;
    for (int i = 0; i < 400 && pairs < pairs_target * 2; ++i) {
        int n = 2 + (i % 3);
        TargetMode mode = (i % 2) ? TargetMode::kDeepHole : TargetMode::kUniform;
        Instance inst = gen_instance(n, 2 + (i % 2), mix64(seed) ^ (0xC6000 + i), mode);
        HKZData hkz = hkz_reduce(inst.basis);
        ++inst_count;
        Rat dist2 = cvp_enum(hkz.lattice, hkz.gs, inst.target, false).dist2;

        // windows from the HKZ data: the clustering audit uses the
        // covering-radius-scale window sum ||gs_i||^2; the projection audit
        // uses the max GS norm window required by its hypothesis
        int kidx = 1;
        for (int j = 0; j < n; ++j)
            if (hkz.gs.gs_norm2[j] > hkz.gs.gs_norm2[kidx - 1]) kidx = j + 1;
        Rat rp2 = hkz.gs.gs_norm2[kidx - 1];
        Rat r2 = 0;
        for (int j = 0; j < n; ++j) r2 += hkz.gs.gs_norm2[j];
        Rat limit = dist2 + r2;
        Rat limit_proj = dist2 + rp2;

        // enumerate approximate closest vectors, group by coset of 2L
        std::map<uint64_t, std::vector<std::vector<Int>>> groups;
        uint64_t points = 0;
        enumerate_ball(hkz.lattice, hkz.gs, inst.target, to_real(limit) * (1 + 1e-9L),
                       [&](const std::vector<long long>& cf, real_t) {
                           if (points > 20000) return;
                           std::vector<Int> c(cf.size());
                           for (size_t j = 0; j < cf.size(); ++j)
                               c[j] = static_cast<long>(cf[j]);
                           Rat d2 = norm2(sub(hkz.lattice.vector_of(c), inst.target));
                           if (!(d2 < limit)) return;
                           ++points;
                           groups[label_of_coeffs(c).key()].push_back(std::move(c));
                       });
        if (points > 20000) continue;

        uint64_t inst_pairs = 0;
        for (auto& [key, vecs] : groups) {
            for (size_t a = 0; a < vecs.size() && pairs < pairs_target * 2 &&
                               inst_pairs < 2000;
                 ++a) {
                for (size_t b = a + 1; b < vecs.size(); ++b) {
                    ++inst_pairs;
                    RatVec w1 = sub(hkz.lattice.vector_of(vecs[a]), inst.target);
                    RatVec w2 = sub(hkz.lattice.vector_of(vecs[b]), inst.target);
                    ++pairs;
                    if (!(norm2(sub(w1, w2)) < 2 * (r2 + r2))) ++cluster_viol;
                    // sparse projection under its tighter hypothesis:
                    // ||w_i||^2 < dist^2 + ||gs_k||^2 forces w1 - w2 into the
                    // prefix sublattice below kidx
                    if (norm2(w1) < limit_proj && norm2(w2) < limit_proj) {
                        ++proj_pairs;
                        bool in_prefix = true;
                        for (int j = kidx - 1; j < n; ++j)
                            if (vecs[a][j] != vecs[b][j]) in_prefix = false;
                        if (!in_prefix) ++project_viol;
                    }
                }
            }
        }
    }
    ReportRecord rp{"clustering", 0, "pairs", static_cast<double>(pairs),
                    static_cast<double>(pairs_target), pairs >= pairs_target};
    ReportRecord rc{"clustering", 0, "cluster_violations", static_cast<double>(cluster_viol), 0,
                    cluster_viol == 0};
    ReportRecord rj{"clustering", 0, "projection_violations", static_cast<double>(project_viol),
                    0, project_viol == 0};
    out.records = {rp, rc, rj};
    out.pass = rp.pass && rc.pass && rj.pass;
    std::ostringstream ss;
    ss << pairs << " cluster pairs (" << proj_pairs << " projection pairs) over " << inst_count
       << " instances, " << cluster_viol << "+" << project_viol << " violations";
    out.summary = ss.str();
    return out;
}

CriterionResult c7_klein_audit(uint64_t seed, uint64_t draws) {
    CriterionResult out;
    out.name = "Klein sampler audit";
    bool all = true;
    for (int inst = 0; inst < 3; ++inst) {
        Basis B = [&]() {
            if (inst == 0) return Basis(RatMat{{Rat(1), Rat(0)}, {Rat(0), Rat(1)}});
            if (inst == 2) return Basis(RatMat{{Rat(1), Rat(0)}, {Rat(0), Rat(100)}});
            Rng g = Rng::substream(seed, 0xC7);
            return gen_basis(2, 10, g);
        }();
        Rng rng = Rng::substream(seed, 0xC70 + inst);
        RatVec t = uniform_target(B, rng);
        RationalGS gs = rational_gram_schmidt(B);
        GramSchmidt fgs = to_float_gs(gs);
        real_t floor = 4.0L * std::sqrt(std::log(4.0L)) * fgs.max_gs_norm();
        GaussianParam s = GaussianParam::of(floor * 1.01L);

        ExactSampler ex(B, gs, t, s);
        KleinSampler ks(B, gs, t, s, 4.0L, true);

        std::map<std::vector<int>, uint64_t> obs;
        for (uint64_t i = 0; i < draws; ++i) {
            auto v = ks.draw(rng);
            ++obs[std::vector<int>(v.begin(), v.end())];
        }
        auto expd = expected_map(ex);
        double tv = tv_of(obs, expd, draws);
        // noise floor: the exact sampler against its own probabilities
        std::map<std::vector<int>, uint64_t> obs2;
        for (uint64_t i = 0; i < draws; ++i) {
            auto v = ex.draw(rng);
            ++obs2[std::vector<int>(v.begin(), v.end())];
        }
        double tv_floor = tv_of(obs2, expd, draws);
        Chi2Tv chi = chi2_tv(obs, expd);

        uint64_t h = instance_hash(B, t);
        ReportRecord rtv{"sample-audit", h, "tv", tv, 0.02, tv <= 0.02};
        ReportRecord rfl{"sample-audit", h, "tv_noise_floor", tv_floor, 0.02, true};
        ReportRecord rchi{"sample-audit", h, "chi2_p", chi.p_value, 0.001 / 3,
                          chi.p_value > 0.001 / 3};
        all = all && rtv.pass;
        out.records.push_back(rtv);
        out.records.push_back(rfl);
        out.records.push_back(rchi);
    }
    out.pass = all;
    out.summary = all ? "all instances within TV budget"
                      : "TV above 0.02 (see tv_noise_floor records; the full-support TV at "
                        "1e5 draws carries an irreducible sampling-noise floor on wide supports)";
    return out;
}

CriterionResult c8_tail_bounds(uint64_t seed, int instances, uint64_t draws) {
    CriterionResult out;
    out.name = "Gaussian tail bounds";
    int fails = 0;
    for (int i = 0; i < instances; ++i) {
        int n = 1 + (i % 3);
        Rng rng = Rng::substream(seed, 0xC8000 + i);
        Basis B = gen_basis(n, 5, rng);
        RatVec t = uniform_target(B, rng);
        RationalGS gs = rational_gram_schmidt(B);
        real_t dist = std::sqrt(to_real(cvp_enum(B, gs, t, false).dist2));
        real_t sqn = std::sqrt(static_cast<real_t>(n));
        real_t sval = std::max(dist / (0.8L * sqn), 0.5L);
        GaussianParam s = GaussianParam::of(sval);
        real_t alpha = dist / (sqn * sval);

        // smallest grid r with a meaningful analytic bound
        real_t r = 0, bound = 1;
        for (real_t rr = 0.8L; rr <= 6.0L; rr += 0.1L) {
            real_t b = std::exp(kPi * n * alpha * alpha) *
                       std::pow(std::sqrt(2 * kPi * 2.718281828459045L * rr * rr) *
                                    std::exp(-kPi * rr * rr),
                                static_cast<real_t>(n));
            if (b <= 0.2L) {
                r = rr;
                bound = b;
                break;
            }
        }
        if (r == 0) continue;

        ExactSampler ex(B, gs, t, s);
        uint64_t exceed = 0, exceed3 = 0;
        real_t thr2 = r * sval * sqn * (r * sval * sqn);
        real_t thr3 = dist * dist + 2 * (sval * n) * (sval * n);
        for (uint64_t d = 0; d < draws; ++d) {
            size_t idx = ex.draw_index(rng);
            if (ex.dist2(idx) >= thr2) ++exceed;
            if (ex.dist2(idx) >= thr3) ++exceed3;
        }
        double sf = binomial_sf(exceed, draws, static_cast<double>(bound));
        double bound3 = std::exp(-3.0 * n * n);
        double sf3 = binomial_sf(exceed3, draws, bound3);
        if (sf < 0.01 || sf3 < 0.01) ++fails;
    }
    ReportRecord r{"tail-bounds", 0, "binomial_test_failures", static_cast<double>(fails), 0,
                   fails == 0};
    out.records.push_back(r);
    out.pass = fails == 0;
    std::ostringstream ss;
    ss << fails << " binomial rejections over " << instances << " instances";
    out.summary = ss.str();
    return out;
}

CriterionResult c9_shift_count(uint64_t seed, int instances) {
    CriterionResult out;
    out.name = "sparse shift-count bound";
    int collected = 0, violations = 0;
    for (int i = 0; i < instances * 20 && collected < instances; ++i) {
        Instance inst = gen_instance(3, 10, mix64(seed) ^ (0xC9000 + i));
        HKZData hkz = hkz_reduce(inst.basis);
        bool used = false;
        for (auto [k, ell] : std::vector<std::pair<int, int>>{{2, 3}, {3, 4}, {2, 4}, {1, 3}}) {
            ShiftCountProbe pr = sparse_shift_count(hkz, inst.target, k, ell, 3.0L);
            if (!pr.condition_ok) continue;
            used = true;
            if (pr.count > pr.bound) ++violations;
            break;
        }
        if (used) ++collected;
    }
    ReportRecord rc{"shift-count", 0, "instances", static_cast<double>(collected),
                    static_cast<double>(instances), collected >= instances};
    ReportRecord rv{"shift-count", 0, "violations", static_cast<double>(violations), 0,
                    violations == 0};
    out.records = {rc, rv};
    out.pass = rc.pass && rv.pass;
    std::ostringstream ss;
    ss << collected << " qualifying instances, " << violations << " violations";
    out.summary = ss.str();
    return out;
}

CriterionResult c10_bench(uint64_t seed, int threads, std::vector<int> dims) {
    CriterionResult out;
    out.name = "soft scaling benchmark";
    out.blocking = false;

    std::vector<double> xs, ys;
    for (int n : dims) {
        RatMat id(n, RatVec(n, Rat(0)));
        for (int i = 0; i < n; ++i) id[i][i] = 1;
        Basis B(id);
        Rng rng = Rng::substream(seed, 0xCA0 + n);
        const long denom = 1L << 20;
        RatVec t(n);
        for (int i = 0; i < n; ++i) t[i] = Rat(static_cast<long>(rng.below(denom)), denom);

        real_t floor = 4.0L * std::sqrt(std::log(static_cast<real_t>(n + 2)));
        DGSRequest req;
        req.lattice = &B;
        req.shift = t;
        req.s = GaussianParam::of(floor * 1.01L / 2);
        req.f = 0;
        DgsOptions opts;
        opts.oracle_estimate = false;
        opts.enforce_radius = false;
        opts.cfg.threads = threads;
        PipelineConfig cfg{2, 4.0};

        auto t0 = std::chrono::steady_clock::now();
        DgsResult res = dgs_solve(req, cfg, 0, rng, opts);  // strict auto-sizing
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        xs.push_back(n);
        ys.push_back(std::log2(secs));
        ReportRecord r{"bench", static_cast<uint64_t>(n), "log2_seconds", std::log2(secs), 0,
                       true};
        ReportRecord rc{"bench", static_cast<uint64_t>(n), "final_count",
                        static_cast<double>(res.batch.count()), 1, res.batch.count() >= 1};
        out.records.push_back(r);
        out.records.push_back(rc);
    }
    // least-squares slope
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
    mx /= xs.size();
    my /= ys.size();
    double num = 0, den = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    double slope = num / den;
    bool ok = slope >= 0.65 && slope <= 1.35;
    ReportRecord rs{"bench", 0, "log2_time_slope", slope, 0.35, ok};
    out.records.push_back(rs);
    out.pass = ok;
    std::ostringstream ss;
    ss << "slope " << slope << " per unit n (non-blocking)";
    out.summary = ss.str();
    return out;
}

}  // namespace suites

std::vector<ReportRecord> run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    using namespace suites;
    CriterionResult res;
    if (spec.kind == "cvp-equivalence") {
        res = c1_cvp_equivalence(spec.seed, spec.threads, spec.trials,
                                 spec.dims.empty() ? std::vector<int>{2, 3, 4, 5, 6, 7, 8}
                                                   : spec.dims);
    } else if (spec.kind == "combiner-audit") {
        res = c2_combiner_identity(spec.seed);
    } else if (spec.kind == "identity-suite") {
        res = c4_identity_suite(spec.seed, spec.trials);
    } else if (spec.kind == "ladder-suite") {
        res = c5_holder_ladder(spec.seed, spec.trials, spec.trials / 2);
    } else if (spec.kind == "sample-audit") {
        res = c7_klein_audit(spec.seed);
    } else if (spec.kind == "census") {
        CCVPConfig cfg;
        cfg.oracle_estimate = false;
        for (int trial = 0; trial < spec.trials; ++trial) {
            for (int n : spec.dims) {
                Instance inst = gen_instance(n, 10, mix64(spec.seed) + trial * 97 + n);
                CensusTable census =
                    recursion_census(inst.basis, inst.target, cfg, spec.seed + trial);
                for (auto& [rank, calls] : census) {
                    double envelope = 4.0 * n * n * std::exp2(static_cast<double>(n - rank));
                    res.records.push_back({"census", instance_hash(inst.basis, inst.target),
                                           "rank" + std::to_string(rank) + "_calls",
                                           static_cast<double>(calls), envelope,
                                           static_cast<double>(calls) <= envelope});
                }
            }
        }
        return res.records;
    } else if (spec.kind == "bench") {
        res = c10_bench(spec.seed, spec.threads,
                        spec.dims.empty() ? std::vector<int>{4, 5, 6, 7, 8, 9, 10} : spec.dims);
    } else {
        throw precondition_error("unknown experiment kind: " + spec.kind);
    }
    return res.records;
}

}  // namespace latgauss
