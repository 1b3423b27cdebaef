#ifndef LATGAUSS_STREAM_PIPELINE_HPP
#define LATGAUSS_STREAM_PIPELINE_HPP

#include <functional>
#include <memory>

#include "latgauss/combiner.hpp"

namespace latgauss {

// Row generator for the streamed pipeline; one instance per worker thread.
// fill() must be deterministic in (chunk_index), independent of thread count.
struct RowSource {
    virtual ~RowSource() = default;
    virtual void fill(uint64_t chunk_index, uint32_t count, coeff_t* out) = 0;
};

using SourceFactory = std::function<std::unique_ptr<RowSource>()>;

struct StreamResult {
    SampleBatch final;
    std::vector<StageRecord> stages;
};

// Combiner pipeline over a generated input stream of M rows. Stage 0 splits
// the stream into positional halves (counts from the first half, acceptance
// and pairing over the second); later stages assign alternating emissions to
// the estimate/acceptance halves so only half of each stage's traffic is
// buffered. Output is identical for any thread count.
StreamResult pipeline_streamed(const Lattice& L, const RatVec& shift, const GaussianParam& s0,
                               int ell, double kappa, uint64_t M, int dim,
                               const SourceFactory& make_source, uint64_t seed, int threads);

}  // namespace latgauss

#endif
