#ifndef LATGAUSS_COMBINER_HPP
#define LATGAUSS_COMBINER_HPP

#include <optional>
#include <string>

#include "latgauss/batch.hpp"
#include "latgauss/rng.hpp"

namespace latgauss {

struct PipelineConfig {
    int ell = 0;       // step parameter
    double kappa = 4;  // confidence parameter, >= 2

    void validate() const {
        if (ell < 0) throw precondition_error("pipeline ell must be >= 0");
        if (kappa < 2) throw precondition_error("pipeline kappa must be >= 2");
    }
};

struct PipelineOptions {
    bool strict = false;   // enforce the (32 kappa)^{ell+1} 2^n input size and
                           // treat starvation as an error
    bool verify = false;   // compute per-stage records and m_target
    real_t mass_eps = 1e-9L;
};

struct StageRecord {
    int stage;
    real_t s_value;
    uint64_t in;
    uint64_t out;
    real_t m_target;  // NaN unless verify
    std::string line() const;
};

struct PipelineReport {
    std::vector<StageRecord> stages;
    bool starved = false;
    bool shortfall = false;     // verify mode: final count below m_target
    real_t final_m_target = 0;  // verify mode only
};

// log2 of the strict input size (32 kappa)^{ell+1} * 2^n.
real_t strict_input_log2(const PipelineConfig& cfg, int n);

// Square-sampler pair selection: positional halves, acceptance
// p_hat(label)/(2 max p_hat) estimated from the first half, consecutive
// accepted second-half elements paired per label. Returned index pairs point
// into the input sequence.
std::vector<std::pair<uint32_t, uint32_t>> square_select(const std::vector<uint64_t>& labels,
                                                         Rng& rng);

// Spec surface: input labels, output one label per selected pair. Each label
// appears at most floor(count/2) times in the output; on i.i.d. inputs with
// label probabilities p_i the output is approximately i.i.d. proportional to
// p_i^2. kappa enters the contracts, not the mechanics.
std::vector<CosetLabel> square_sampler(const std::vector<CosetLabel>& labels, double kappa,
                                       Rng& rng);

// One combiner stage: bucket by coset of 2L, select pairs, emit averages
// (same coset mod 2L makes the average a lattice point); parameter drops to
// s/sqrt(2).
SampleBatch combine_once(const SampleBatch& batch, double kappa, Rng& rng);

// ell combiner stages; final parameter 2^{-ell/2} s exactly.
SampleBatch pipeline(const SampleBatch& batch, const PipelineConfig& cfg,
                     const PipelineOptions& opts, Rng& rng, PipelineReport* report = nullptr);

}  // namespace latgauss

#endif
