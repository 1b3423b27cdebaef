#include "latgauss/stream_pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <thread>

namespace latgauss {

namespace {

constexpr uint32_t kChunk = 1u << 19;

// Buffer that stores rows as int16 while every entry fits, halving the peak
// memory of the large stage-1 holdback.
struct RowBuffer {
    int dim = 1;
    bool narrow = true;
    std::vector<int16_t> v16;
    std::vector<int32_t> v32;

    size_t rows() const { return (narrow ? v16.size() : v32.size()) / dim; }
    void push(const coeff_t* r) {
        if (narrow) {
            bool fits = true;
            for (int j = 0; j < dim; ++j)
                if (r[j] > 32000 || r[j] < -32000) { fits = false; break; }
            if (!fits) widen();
        }
        if (narrow)
            for (int j = 0; j < dim; ++j) v16.push_back(static_cast<int16_t>(r[j]));
        else
            for (int j = 0; j < dim; ++j) v32.push_back(r[j]);
    }
    void widen() {
        v32.reserve(v16.size());
        for (int16_t v : v16) v32.push_back(v);
        std::vector<int16_t>().swap(v16);
        narrow = false;
    }
    void get(size_t i, coeff_t* out) const {
        if (narrow)
            for (int j = 0; j < dim; ++j) out[j] = v16[i * dim + j];
        else
            for (int j = 0; j < dim; ++j) out[j] = v32[i * dim + j];
    }
    void release() {
        std::vector<int16_t>().swap(v16);
        std::vector<int32_t>().swap(v32);
    }
};

uint64_t row_label(const coeff_t* r, int dim) {
    uint64_t k = 0;
    for (int j = 0; j < dim; ++j) k |= static_cast<uint64_t>(r[j] & 1) << j;
    return k;
}

// Per-label slot table pairing consecutive accepted rows.
struct Pairer {
    int dim;
    std::vector<coeff_t> slot;
    std::vector<uint8_t> full;
    Pairer(int d, size_t labels) : dim(d), slot(labels * d), full(labels, 0) {}

    bool offer(uint64_t label, const coeff_t* r, coeff_t* avg) {
        coeff_t* s = slot.data() + label * dim;
        if (full[label]) {
            for (int j = 0; j < dim; ++j) {
                coeff_t sum = s[j] + r[j];
                if (sum & 1) throw error("stream pipeline: parity mismatch in pairing");
                avg[j] = sum / 2;
            }
            full[label] = 0;
            return true;
        }
        std::memcpy(s, r, sizeof(coeff_t) * dim);
        full[label] = 1;
        return false;
    }
};

// Input-side state of combiner stage d (d = 1..ell-1): alternating emissions
// feed the label counts (estimate half) or the holdback buffer (acceptance
// half).
struct StageState {
    uint64_t in = 0;
    uint64_t parity = 0;
    std::vector<uint64_t> even_counts;
    RowBuffer odd;
};

}  // namespace

StreamResult pipeline_streamed(const Lattice& L, const RatVec& shift, const GaussianParam& s0,
                               int ell, double kappa, uint64_t M, int dim,
                               const SourceFactory& make_source, uint64_t seed, int threads) {
    if (dim > 20) throw precondition_error("stream pipeline: dimension cap is 20");
    if (threads < 1) threads = 1;
    const size_t nlabels = size_t{1} << dim;

    StreamResult res;
    res.final.lattice = &L;
    res.final.shift = shift;
    res.final.s = s0.raised(-ell);
    res.final.dim = dim;

    if (ell == 0) {
        auto src = make_source();
        std::vector<coeff_t> buf(size_t{kChunk} * dim);
        uint64_t done = 0, chunk = 0;
        while (done < M) {
            uint32_t cnt = static_cast<uint32_t>(std::min<uint64_t>(kChunk, M - done));
            src->fill(chunk, cnt, buf.data());
            res.final.data.insert(res.final.data.end(), buf.data(),
                                  buf.data() + size_t{cnt} * dim);
            done += cnt;
            ++chunk;
        }
        res.final.note_stage(M, kappa);
        return res;
    }

    // destinations 1..ell-1 are later stages; destination ell is the output
    std::vector<StageState> dest(ell);
    for (int d = 1; d < ell; ++d) {
        dest[d].even_counts.assign(nlabels, 0);
        dest[d].odd.dim = dim;
    }

    auto emit = [&](int d, const coeff_t* r) {
        if (d >= ell) {
            res.final.push_row(r);
            return;
        }
        StageState& st = dest[d];
        ++st.in;
        if ((st.parity++ & 1) == 0)
            ++st.even_counts[row_label(r, dim)];
        else
            st.odd.push(r);
    };

    // ---- stage 0 over the generated stream, positional halves ----
    const uint64_t half = M / 2;
    const uint64_t total_chunks = (M + kChunk - 1) / kChunk;
    auto chunk_range = [&](uint64_t c) {
        uint64_t b = c * kChunk;
        return std::pair<uint64_t, uint64_t>(b, std::min<uint64_t>(b + kChunk, M));
    };

    std::vector<uint64_t> counts0(nlabels, 0);
    {
        // phase A: label counts over indices [0, half)
        uint64_t a_chunks = (half + kChunk - 1) / kChunk;
        std::atomic<uint64_t> next{0};
        std::vector<std::vector<uint64_t>> parts(threads, std::vector<uint64_t>(nlabels, 0));
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&, w]() {
                auto src = make_source();
                std::vector<coeff_t> buf(size_t{kChunk} * dim);
                for (;;) {
                    uint64_t c = next.fetch_add(1);
                    if (c >= a_chunks) break;
                    auto [b, e] = chunk_range(c);
                    src->fill(c, static_cast<uint32_t>(e - b), buf.data());
                    uint64_t hi = std::min(e, half);
                    for (uint64_t i = b; i < hi; ++i)
                        ++parts[w][row_label(buf.data() + (i - b) * dim, dim)];
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& p : parts)
            for (size_t k = 0; k < nlabels; ++k) counts0[k] += p[k];
    }
    uint64_t maxc0 = 0;
    for (uint64_t c : counts0) maxc0 = std::max(maxc0, c);

    {
        // phase B: acceptance + pairing over [half, M), windowed parallel
        // chunks merged in order
        const uint64_t first_b = half / kChunk;
        const unsigned __int128 denom =
            static_cast<unsigned __int128>(2) * std::max<uint64_t>(maxc0, 1);
        const uint64_t window = static_cast<uint64_t>(threads) * 2;
        Pairer leftover(dim, nlabels);
        std::vector<coeff_t> avg(dim);

        for (uint64_t w0 = first_b; w0 < total_chunks; w0 += window) {
            const uint64_t w1 = std::min(total_chunks, w0 + window);
            std::vector<std::vector<coeff_t>> emissions(w1 - w0);
            std::vector<std::vector<coeff_t>> leftovers(w1 - w0);

            std::atomic<uint64_t> next{w0};
            std::vector<std::thread> pool;
            for (int w = 0; w < threads; ++w) {
                pool.emplace_back([&]() {
                    auto src = make_source();
                    std::vector<coeff_t> buf(size_t{kChunk} * dim);
                    std::vector<coeff_t> pavg(dim);
                    for (;;) {
                        uint64_t c = next.fetch_add(1);
                        if (c >= w1) break;
                        auto [b, e] = chunk_range(c);
                        src->fill(c, static_cast<uint32_t>(e - b), buf.data());
                        Rng acc_rng = Rng::substream(seed, 0x42000000ULL + c);
                        Pairer pairer(dim, nlabels);
                        auto& em = emissions[c - w0];
                        auto& lo = leftovers[c - w0];
                        for (uint64_t i = std::max(b, half); i < e; ++i) {
                            const coeff_t* r = buf.data() + (i - b) * dim;
                            uint64_t lab = row_label(r, dim);
                            uint64_t cnt = counts0[lab];
                            uint64_t u = acc_rng.next_u64();
                            if (cnt == 0) continue;
                            if (static_cast<unsigned __int128>(u) * denom >=
                                (static_cast<unsigned __int128>(cnt) << 64))
                                continue;
                            if (pairer.offer(lab, r, pavg.data()))
                                em.insert(em.end(), pavg.data(), pavg.data() + dim);
                        }
                        for (size_t lab = 0; lab < nlabels; ++lab)
                            if (pairer.full[lab])
                                lo.insert(lo.end(), pairer.slot.data() + lab * dim,
                                          pairer.slot.data() + (lab + 1) * dim);
                    }
                });
            }
            for (auto& th : pool) th.join();

            for (uint64_t c = w0; c < w1; ++c) {
                auto& em = emissions[c - w0];
                for (size_t i = 0; i + dim <= em.size(); i += static_cast<size_t>(dim))
                    emit(1, em.data() + i);
                auto& lo = leftovers[c - w0];
                for (size_t i = 0; i + dim <= lo.size(); i += static_cast<size_t>(dim)) {
                    const coeff_t* r = lo.data() + i;
                    if (leftover.offer(row_label(r, dim), r, avg.data())) emit(1, avg.data());
                }
            }
        }
    }

    // ---- finalize stages 1..ell-1 in order ----
    for (int d = 1; d < ell; ++d) {
        StageState& st = dest[d];
        uint64_t maxc = 0;
        for (uint64_t c : st.even_counts) maxc = std::max(maxc, c);
        const unsigned __int128 denom =
            static_cast<unsigned __int128>(2) * std::max<uint64_t>(maxc, 1);
        Rng rng = Rng::substream(seed, 0x84000000ULL + static_cast<uint64_t>(d));
        Pairer pairer(dim, nlabels);
        std::vector<coeff_t> row(dim), avg(dim);
        const size_t rows = st.odd.rows();
        for (size_t i = 0; i < rows; ++i) {
            st.odd.get(i, row.data());
            uint64_t lab = row_label(row.data(), dim);
            uint64_t cnt = st.even_counts[lab];
            if (cnt == 0) continue;
            if (static_cast<unsigned __int128>(rng.next_u64()) * denom >=
                (static_cast<unsigned __int128>(cnt) << 64))
                continue;
            if (pairer.offer(lab, row.data(), avg.data())) emit(d + 1, avg.data());
        }
        st.odd.release();
        st.even_counts.clear();
        st.even_counts.shrink_to_fit();
    }

    for (int si = 0; si < ell; ++si) {
        StageRecord rec;
        rec.stage = si;
        rec.s_value = s0.raised(-(si + 1)).value();
        rec.in = si == 0 ? M : dest[si].in;
        rec.out = si + 1 < ell ? dest[si + 1].in : res.final.count();
        rec.m_target = std::nan("");
        res.stages.push_back(rec);
    }
    res.final.note_stage(M, kappa);
    return res;
}

}  // namespace latgauss
