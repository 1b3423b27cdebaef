#ifndef LATGAUSS_BATCH_HPP
#define LATGAUSS_BATCH_HPP

#include <cmath>
#include <vector>

#include "latgauss/coset.hpp"
#include "latgauss/gaussian.hpp"

namespace latgauss {

// One combiner-stage statistical-distance ledger entry (constants C1, C2 of
// the stage bound M exp(C1 n - C2 kappa) are unknown; entries record the
// triple, the scalar budget uses the nominal C1 = C2 = 1).
struct SdLedgerEntry {
    uint64_t M;
    int n;
    double kappa;
};

// Tagged list of lattice coordinate vectors; the sample is B^T c - t, so
// membership in L - t is exact by construction. Flat row-major storage.
struct SampleBatch {
    const Lattice* lattice = nullptr;
    RatVec shift;  // t
    GaussianParam s;
    int dim = 0;
    std::vector<coeff_t> data;
    std::vector<SdLedgerEntry> sd_ledger;
    double sd_budget = 0;

    size_t count() const { return dim == 0 ? 0 : data.size() / dim; }
    const coeff_t* row(size_t i) const { return data.data() + i * dim; }
    coeff_t* row(size_t i) { return data.data() + i * dim; }
    void push_row(const coeff_t* r) { data.insert(data.end(), r, r + dim); }

    uint64_t label_key(size_t i) const {
        const coeff_t* r = row(i);
        uint64_t k = 0;
        for (int j = 0; j < dim; ++j) k |= static_cast<uint64_t>(r[j] & 1) << j;
        return k;
    }

    void note_stage(uint64_t M, double kappa) {
        sd_ledger.push_back({M, dim, kappa});
        sd_budget += static_cast<double>(M) * std::exp(static_cast<double>(dim) - kappa);
    }

    // ambient-coordinate sample i (exact rationals): B^T c - t
    RatVec sample_vector(size_t i) const {
        std::vector<long long> c(dim);
        const coeff_t* r = row(i);
        for (int j = 0; j < dim; ++j) c[j] = r[j];
        RatVec v = lattice->vector_of(c);
        return sub(v, shift);
    }
};

}  // namespace latgauss

#endif
