// latgauss: discrete Gaussian sampling over shifted lattices and exact CVP,
// with verification suites and a scaling benchmark.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "latgauss/experiments.hpp"

using namespace latgauss;

namespace {

RatVec parse_target(const std::string& str, int n) {
    std::istringstream ss(str);
    RatVec t;
    std::string tok;
    while (ss >> tok) t.push_back(parse_rational(tok));
    if (static_cast<int>(t.size()) != n) throw error("target has wrong length");
    return t;
}

struct Loaded {
    Basis basis;
    RatVec target;
};

Loaded load(const std::string& path, const std::string& target_str) {
    BasisFile bf = read_basis_file(path);
    Loaded out{bf.basis, {}};
    if (!target_str.empty())
        out.target = parse_target(target_str, bf.basis.n());
    else if (bf.target)
        out.target = *bf.target;
    else
        out.target = RatVec(bf.basis.n(), Rat(0));
    return out;
}

void emit_records(const std::vector<ReportRecord>& records, const std::string& out_path) {
    for (const auto& r : records) std::cout << r.line() << "\n";
    if (!out_path.empty()) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : records) {
            j.push_back({{"experiment", r.experiment},
                         {"instance", r.instance_hash},
                         {"metric", r.metric},
                         {"value", r.value},
                         {"tolerance", r.tolerance},
                         {"pass", r.pass}});
        }
        std::ofstream f(out_path);
        f << j.dump(2) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice discrete Gaussian sampling and exact CVP"};
    app.require_subcommand(1);

    uint64_t seed = 1;
    int threads = 1;
    bool strict = false;
    std::string out_path;
    app.add_option("--seed", seed, "root seed");
    app.add_option("--threads", threads, "worker threads");
    app.add_flag("--strict", strict, "strict sizing / strict starvation errors");
    app.add_option("--out", out_path, "machine-readable summary path (JSON)");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random instance");
    int gen_n = 3, gen_bound = 10;
    std::string gen_mode = "uniform";
    gen->add_option("--n", gen_n, "dimension");
    gen->add_option("--bound", gen_bound, "entry bound");
    gen->add_option("--mode", gen_mode, "target mode: uniform|near|deephole");
    gen->callback([&]() {
        TargetMode mode = gen_mode == "near"       ? TargetMode::kNearLattice
                          : gen_mode == "deephole" ? TargetMode::kDeepHole
                                                   : TargetMode::kUniform;
        Instance inst = gen_instance(gen_n, gen_bound, seed, mode);
        write_basis_file(std::cout, inst.basis, &inst.target);
    });

    // hkz
    auto* hkz_cmd = app.add_subcommand("hkz", "HKZ-reduce a basis");
    std::string hkz_file;
    hkz_cmd->add_option("--basis", hkz_file, "basis file")->required();
    hkz_cmd->callback([&]() {
        BasisFile bf = read_basis_file(hkz_file);
        HKZBasis h = hkz_basis(bf.basis);
        write_basis_file(std::cout, h.basis, bf.target ? &*bf.target : nullptr);
    });

    // sample
    auto* sample = app.add_subcommand("sample", "sample D_{L-t,s}");
    std::string s_file, s_target;
    double s_param = 1.0;
    int s_ell = 2;
    double s_kappa = 4;
    uint64_t s_count = 10000;
    bool s_verify = false, s_audit = false;
    sample->add_option("--basis", s_file)->required();
    sample->add_option("--target", s_target, "space-separated rationals");
    sample->add_option("--s", s_param)->required();
    sample->add_option("--ell", s_ell);
    sample->add_option("--kappa", s_kappa);
    sample->add_option("--count", s_count, "input batch size M");
    sample->add_flag("--verify", s_verify);
    sample->add_flag("--audit", s_audit, "tab-separated (vector, label, weight) rows");
    sample->callback([&]() {
        Loaded in = load(s_file, s_target);
        DGSRequest req;
        req.lattice = &in.basis;
        req.shift = in.target;
        req.s = GaussianParam::of(static_cast<real_t>(s_param));
        DgsOptions opts;
        opts.strict = strict;
        opts.verify = s_verify;
        opts.oracle_estimate = false;
        opts.cfg.threads = threads;
        Rng rng(seed);
        DgsResult res = dgs_solve(req, PipelineConfig{s_ell, s_kappa},
                                  strict ? 0 : s_count, rng, opts);
        for (size_t i = 0; i < res.batch.count(); ++i) {
            RatVec v = res.batch.sample_vector(i);
            if (s_audit) {
                RatVec lat = add(v, in.target);
                std::vector<real_t> x(v.size());
                for (size_t j = 0; j < v.size(); ++j) x[j] = to_real(v[j]);
                for (size_t j = 0; j < v.size(); ++j)
                    std::cout << (j ? " " : "") << format_rational(v[j]);
                std::cout << "\t" << coset_label(in.basis, lat).key() << "\t"
                          << static_cast<double>(rho(req.s, x)) << "\n";
            } else {
                for (size_t j = 0; j < v.size(); ++j)
                    std::cout << (j ? " " : "") << format_rational(v[j]);
                std::cout << "\n";
            }
        }
        if (s_verify) {
            for (auto& st : res.report.stages) std::cerr << st.line() << "\n";
            MassOracle oracle(in.basis);
            MassEstimate m = oracle.mass(in.target, req.s, 1e-9L);
            std::cerr << "mass log=" << static_cast<double>(m.log_mass)
                      << " relerr=" << static_cast<double>(m.rel_err) << "\n";
            std::cerr << "ell_eff=" << res.ell_eff << " count=" << res.batch.count()
                      << " m_target=" << static_cast<double>(res.m_target)
                      << " tv=" << static_cast<double>(res.tv) << "\n";
        }
    });

    // cvp
    auto* cvp = app.add_subcommand("cvp", "exact CVP");
    std::string c_file, c_target;
    bool c_oracle = false, c_census = false;
    double c_alpha = 0, c_f = 0, c_p = 0;
    cvp->add_option("--basis", c_file)->required();
    cvp->add_option("--target", c_target);
    cvp->add_flag("--oracle", c_oracle, "enumeration-oracle distance estimate");
    cvp->add_flag("--census", c_census, "append per-rank call counts");
    cvp->add_option("--alpha", c_alpha);
    cvp->add_option("--f", c_f, "good-index knob f");
    cvp->add_option("--p", c_p, "candidate cap p");
    cvp->callback([&]() {
        Loaded in = load(c_file, c_target);
        CCVPConfig cfg;
        cfg.oracle_estimate = c_oracle;
        if (c_alpha > 0) cfg.alpha = c_alpha;
        if (c_f > 0) cfg.f_cluster = static_cast<int>(c_f);
        if (c_p > 0) cfg.p_cap = static_cast<uint64_t>(c_p);
        CensusTable census;
        CvpOutcome res = exact_cvp(in.basis, in.target, cfg, seed,
                                   c_census ? &census : nullptr);
        std::cout << "distance=" << std::sqrt(static_cast<double>(to_real(res.dist2)))
                  << " witness=";
        for (size_t i = 0; i < res.coeffs.size(); ++i)
            std::cout << (i ? " " : "") << res.coeffs[i].get_str();
        std::cout << "\n";
        if (c_census)
            for (auto& [rank, calls] : census)
                std::cout << "rank=" << rank << " calls=" << calls << "\n";
    });

    // approx-cvp
    auto* acvp = app.add_subcommand("approx-cvp", "(1+1/f)-approximate CVP");
    std::string a_file, a_target;
    double a_f = 100;
    acvp->add_option("--basis", a_file)->required();
    acvp->add_option("--target", a_target);
    acvp->add_option("--f", a_f, "approximation budget f");
    acvp->callback([&]() {
        Loaded in = load(a_file, a_target);
        DgsOptions opts;
        opts.oracle_estimate = false;
        opts.cfg.threads = threads;
        Rng rng(seed);
        ApproxCvpResult res = approx_cvp(in.basis, in.target, static_cast<real_t>(a_f), rng, opts);
        std::cout << "distance=" << std::sqrt(static_cast<double>(to_real(res.dist2)))
                  << " witness=";
        for (size_t i = 0; i < res.coeffs.size(); ++i)
            std::cout << (i ? " " : "") << res.coeffs[i].get_str();
        std::cout << "\n";
    });

    // verify
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string v_suite;
    std::vector<int> v_dims;
    int v_trials = 100;
    verify->add_option("suite", v_suite,
                       "identity-suite|ladder-suite|combiner-audit|sample-audit|"
                       "cvp-equivalence|census|bench")
        ->required();
    verify->add_option("--dims", v_dims);
    verify->add_option("--trials", v_trials);
    verify->callback([&]() {
        ExperimentSpec spec;
        spec.kind = v_suite;
        spec.dims = v_dims;
        spec.trials = v_trials;
        spec.seed = seed;
        spec.threads = threads;
        spec.strict = strict;
        auto records = run_experiment(spec);
        emit_records(records, out_path);
        for (auto& r : records)
            if (!r.pass) std::exit(1);
    });

    // bench
    auto* bench = app.add_subcommand("bench", "soft scaling benchmark");
    std::vector<int> b_dims{4, 5, 6, 7, 8, 9, 10};
    bench->add_option("--dims", b_dims);
    bench->callback([&]() {
        auto res = suites::c10_bench(seed, threads, b_dims);
        emit_records(res.records, out_path);
        std::cout << "# " << res.summary << "\n";
    });

    try {
        CLI11_PARSE(app, argc, argv);
    } catch (const latgauss::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
