#ifndef LATGAUSS_CVP_HPP
#define LATGAUSS_CVP_HPP

#include <map>

#include "latgauss/dgs.hpp"

namespace latgauss {

struct CCVPConfig {
    double alpha = 0;        // additive error; 0 -> 1/(10 n^3)
    uint64_t p_cap = 1u << 16;  // output-size bound p
    int f_cluster = 0;       // good-index knob; 0 -> max(1, ceil(n^{1/3}))
    double delta = 2.0 / 3;  // recursion exponent (ledger)
    double kappa = 4;        // pipeline knobs for the inner sampler
    int ell = 2;

    // desk-scale schedule knobs
    int ladder_ell = 0;        // 0 -> max(4, ceil(log2(10 f)))
    int batch_runs_cap = 4;    // caps n^2 ceil(2^{n/ell}) runs per parameter
    uint64_t dgs_M = 8192;     // per-run sample budget
    bool oracle_estimate = true;
    int rmax = 5;              // amplification reruns
};

struct CandidateSet {
    std::vector<std::vector<Int>> coeffs;  // lattice vectors, basis coords
    std::vector<Rat> dist2;
    std::vector<CosetLabel> labels;

    size_t size() const { return coeffs.size(); }
};

// Testable form of the clustering lemma: same-coset approximate closest
// vectors are close. w1, w2 in L - t with equal labels mod 2L; returns
// ||w1 - w2||^2 < 2 (r1^2 + r2^2), all exact.
bool cluster_test(const Basis& B, const RatVec& t, const RatVec& w1, const RatVec& w2,
                  const Rat& r1_sq, const Rat& r2_sq);

// Good-index selection over an exact HKZ basis: either a repeated threshold
// index (bound 2^{n-k+1}) or a pigeonhole window [k, window_ell) with bound
// 2^{n-k+1} (2 ceil(2n)^{window_ell - k} - 1).
struct GoodIndex {
    int k = 1;                 // 1-based; sublattice is b_1..b_{k-1}
    int window_ell = 1;        // lemma's ell (1-based index, k <= window_ell <= n+1)
    uint64_t shift_bound = 0;
    int case_id = 1;           // 1 = repeated m_j, 2 = pigeonhole window
};
GoodIndex good_index(const HKZData& hkz, int f_cluster);

// Exhaustive count of shifts c of L' = L(b_1..b_{k-1}) with
// dist(t,c)^2 < dist(t,L)^2 + r^2, where r is the largest radius satisfying
// the sparse-projection condition; compared against the formula bound.
struct ShiftCountProbe {
    bool condition_ok = false;
    Rat r_sq;
    uint64_t count = 0;
    uint64_t bound = 0;
};
ShiftCountProbe sparse_shift_count(const HKZData& hkz, const RatVec& t, int k, int window_ell,
                                   real_t s_param);

struct CcvpInstrumentation {
    uint64_t pre_prune = 0;
    uint64_t post_prune = 0;
    bool closest_coset_pre = false;   // some candidate shares the closest
    bool closest_coset_post = false;  // vector's coset mod 2L
    uint64_t starved_runs = 0;
};

// Candidate collection: distance bracket, descending parameter ladder
// s_i = 2^{-i/2} d_tilde/(n^3 f), repeated dgs runs per parameter, candidates
// pruned to (1+alpha)^2-approximate vectors and truncated to p_cap.
CandidateSet ccvp_solve(const Basis& B, const RatVec& t, const CCVPConfig& cfg, uint64_t seed,
                        CcvpInstrumentation* instr = nullptr);

struct CvpOutcome {
    std::vector<Int> coeffs;
    RatVec vector;
    Rat dist2;
};

using CensusTable = std::map<int, uint64_t>;  // rank -> recursive call count

// Exact CVP via the recursive reduction: HKZ, candidates, good index, group
// by coset of the prefix sublattice, recurse on each occupied shift, keep the
// closest. Monte Carlo; amplified by rmax reruns keeping the best.
CvpOutcome exact_cvp(const Basis& B, const RatVec& t, const CCVPConfig& cfg, uint64_t seed,
                     CensusTable* census = nullptr);
// single run, no amplification
CvpOutcome exact_cvp_once(const Basis& B, const RatVec& t, const CCVPConfig& cfg, uint64_t seed,
                          CensusTable* census = nullptr);

CensusTable recursion_census(const Basis& B, const RatVec& t, const CCVPConfig& cfg,
                             uint64_t seed);

}  // namespace latgauss

#endif
