#include "latgauss/combiner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace latgauss {

std::string StageRecord::line() const {
    std::ostringstream ss;
    ss << "stage=" << stage << " s=" << static_cast<double>(s_value) << " in=" << in
       << " out=" << out;
    if (!std::isnan(static_cast<double>(m_target))) ss << " m_target=" << static_cast<double>(m_target);
    return ss.str();
}

real_t strict_input_log2(const PipelineConfig& cfg, int n) {
    return (cfg.ell + 1) * std::log2(32.0L * static_cast<real_t>(cfg.kappa)) + n;
}

std::vector<std::pair<uint32_t, uint32_t>> square_select(const std::vector<uint64_t>& labels,
                                                         Rng& rng) {
    const size_t M = labels.size();
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    if (M < 2) return pairs;
    const size_t half = M / 2;

    std::unordered_map<uint64_t, uint64_t> counts;
    uint64_t maxc = 0;
    for (size_t i = 0; i < half; ++i) {
        uint64_t c = ++counts[labels[i]];
        maxc = std::max(maxc, c);
    }
    if (maxc == 0) return pairs;

    // accept with probability count(l)/(2 maxc), exactly via 128-bit compare
    std::unordered_map<uint64_t, uint32_t> pending;
    const unsigned __int128 denom = static_cast<unsigned __int128>(2) * maxc;
    for (size_t i = half; i < M; ++i) {
        auto it = counts.find(labels[i]);
        uint64_t c = (it == counts.end()) ? 0 : it->second;
        if (c == 0) continue;
        unsigned __int128 lhs = static_cast<unsigned __int128>(rng.next_u64()) * denom;
        unsigned __int128 rhs = static_cast<unsigned __int128>(c) << 64;
        if (lhs >= rhs) continue;
        auto p = pending.find(labels[i]);
        if (p == pending.end()) {
            pending.emplace(labels[i], static_cast<uint32_t>(i));
        } else {
            pairs.emplace_back(p->second, static_cast<uint32_t>(i));
            pending.erase(p);
        }
    }
    return pairs;
}

std::vector<CosetLabel> square_sampler(const std::vector<CosetLabel>& labels, double kappa,
                                       Rng& rng) {
    if (labels.empty()) throw precondition_error("square_sampler: empty input");
    if (kappa < 2) throw precondition_error("square_sampler: kappa must be >= 2");
    std::vector<uint64_t> keys(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) keys[i] = labels[i].key();
    auto pairs = square_select(keys, rng);
    std::vector<CosetLabel> out;
    out.reserve(pairs.size());
    for (auto& p : pairs) out.push_back(labels[p.first]);
    return out;
}

SampleBatch combine_once(const SampleBatch& batch, double kappa, Rng& rng) {
    if (batch.count() == 0) throw precondition_error("combine_once: empty batch");
    const size_t M = batch.count();
    std::vector<uint64_t> keys(M);
    for (size_t i = 0; i < M; ++i) keys[i] = batch.label_key(i);
    auto pairs = square_select(keys, rng);

    SampleBatch out;
    out.lattice = batch.lattice;
    out.shift = batch.shift;
    out.s = batch.s.halved();
    out.dim = batch.dim;
    out.sd_ledger = batch.sd_ledger;
    out.sd_budget = batch.sd_budget;
    out.data.reserve(pairs.size() * batch.dim);
    std::vector<coeff_t> avg(batch.dim);
    for (auto& p : pairs) {
        const coeff_t* a = batch.row(p.first);
        const coeff_t* b = batch.row(p.second);
        for (int j = 0; j < batch.dim; ++j) {
            coeff_t sum = a[j] + b[j];
            if (sum & 1) throw error("combine_once: pairing produced a half-integer average");
            avg[j] = sum / 2;
        }
        out.push_row(avg.data());
    }
    out.note_stage(M, kappa);
    return out;
}

SampleBatch pipeline(const SampleBatch& batch, const PipelineConfig& cfg,
                     const PipelineOptions& opts, Rng& rng, PipelineReport* report) {
    cfg.validate();
    if (opts.strict) {
        real_t need = strict_input_log2(cfg, batch.dim);
        real_t have = batch.count() ? std::log2(static_cast<real_t>(batch.count())) : -1;
        if (have < need - 1e-9L)
            throw precondition_error("pipeline input below strict size");
    }

    std::optional<MassOracle> oracle;
    if (opts.verify && batch.lattice)
        oracle.emplace(*batch.lattice, rational_gram_schmidt(*batch.lattice));

    SampleBatch cur = batch;
    PipelineReport rep;
    for (int stage = 0; stage < cfg.ell; ++stage) {
        uint64_t in = cur.count();
        if (in == 0) {
            rep.starved = true;
            if (opts.strict) throw error("pipeline starved");
            cur.s = cur.s.halved();
            cur.note_stage(0, cfg.kappa);
        } else {
            cur = combine_once(cur, cfg.kappa, rng);
        }
        StageRecord rec;
        rec.stage = stage;
        rec.s_value = cur.s.value();
        rec.in = in;
        rec.out = cur.count();
        rec.m_target = std::nan("");
        if (oracle) rec.m_target = oracle->m_target(cur.shift, cur.s, opts.mass_eps);
        rep.stages.push_back(rec);
    }
    if (oracle) {
        rep.final_m_target = oracle->m_target(cur.shift, cur.s, opts.mass_eps);
        rep.shortfall = static_cast<real_t>(cur.count()) < rep.final_m_target;
        if (rep.shortfall && opts.strict) throw error("pipeline starved");
    }
    if (report) *report = rep;
    return cur;
}

}  // namespace latgauss
