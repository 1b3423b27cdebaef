#ifndef LATGAUSS_DGS_HPP
#define LATGAUSS_DGS_HPP

#include <optional>

#include "latgauss/combiner.hpp"
#include "latgauss/hkz.hpp"
#include "latgauss/samplers.hpp"

namespace latgauss {

// Factor-2 distance bracket: lower <= dist(t, L) <= upper <= 2 lower (the
// witness-mode lower half is a Monte-Carlo claim; upper is always witnessed
// by a concrete lattice vector).
struct DistanceEstimate {
    real_t lower = 0;
    real_t upper = 0;

    void validate() const {
        if (lower < 0 || upper < lower || upper > 2 * lower + 1e-18L)
            throw precondition_error("distance estimate is not a factor-2 bracket");
    }
};

DistanceEstimate distance_estimate_oracle(const Lattice& L, const RationalGS& gs,
                                          const RatVec& t);
// Babai bound refined by anchored prefix splits (projected CVP on the tail,
// Babai on the prefix); never calls full-rank CVP.
DistanceEstimate distance_estimate_witness(const HKZData& hkz, const RatVec& t);

struct SublatticeSplit {
    int k_index = 1;        // rank(sub_basis) + 1, in [1, n+1]
    Lattice sub_basis;      // prefix b_1..b_{k_index-1} of the HKZ basis
    RationalGS sub_gs;
    std::vector<Int> anchor_coeffs;  // y in full HKZ-basis coordinates
    RatVec anchor;                   // y, ambient
    std::vector<Int> lift_suffix;    // a: samples lift to (c', a)
    real_t radius = 0;
    real_t enum_param_u = 2;         // vestigial at desk scale
    bool radius_precondition_ok = true;

    int sub_rank() const { return k_index - 1; }
};

// Splits off the maximal HKZ prefix with ||gs_i|| <= r and anchors the
// remaining coordinates at the exact closest vector of the projected lattice;
// every vector of L - t shorter than r - dist(t, L) then lies in
// L' - y - t. With enforce_radius the call fails when
// r < u^{n/u} (1 + sqrt(n) u^{n/u}) dist (gamma = u^{n/u} = 1 for exact HKZ)
// and the split is proper; the exact anchor makes the containment hold
// unconditionally, so internal callers may disable the check.
SublatticeSplit shifted_sublattice(const HKZData& hkz, const RatVec& t, real_t r, real_t u,
                                   const DistanceEstimate& est, bool enforce_radius = true);
SublatticeSplit shifted_sublattice(const Basis& B, const RatVec& t, real_t r, real_t u);

struct DgsConfig {
    real_t klein_factor = 4.0L;
    real_t init_radius_c = 0.25L;  // r = C s_hat / sqrt(log(n+2))
    real_t support_c = 2.0L;       // split must cover dist + support_c s sqrt(n)
    int ell_cap = 48;
    uint64_t starve_margin = 64;   // budget cap: 8^ell <= M / margin
    uint64_t stream_threshold = uint64_t{1} << 22;
    int threads = 1;
};

struct InitSamples {
    SublatticeSplit split;
    SampleBatch batch;  // full lattice coordinates over (L, t)
};

// Shifted-sublattice initialization followed by M Klein draws at parameter
// s_hat from D_{L' - y - t, s_hat}, lifted to full coordinates.
InitSamples init_samples(const HKZData& hkz, const RatVec& t, uint64_t M,
                         const GaussianParam& s_hat, real_t u, Rng& rng,
                         const DgsConfig& cfg = {},
                         const std::optional<DistanceEstimate>& est = std::nullopt,
                         bool enforce_radius = false);

struct DGSRequest {
    const Lattice* lattice = nullptr;
    RatVec shift;
    GaussianParam s;
    real_t f = 0;     // approximation-budget knob: requires s f >= dist
    real_t eps = 0;   // target statistical distance (ledger only)
};

struct DgsOptions {
    bool strict = false;
    bool verify = false;
    bool oracle_estimate = true;
    bool enforce_radius = false;
    DgsConfig cfg;
    real_t tv_tol = 0.03L;
    real_t mass_eps = 1e-9L;
};

struct DgsResult {
    SampleBatch batch;
    int ell_eff = 0;
    GaussianParam s_hat;
    SublatticeSplit split;
    PipelineReport report;
    // verify mode
    real_t m_target = 0;
    real_t tv = -1;
    bool shortfall = false;
};

// End-to-end sampler: s_hat = 2^{ell/2} s with ell the smallest step count
// >= cfg.ell making the split's Klein precondition hold, Klein-initialized
// halves pushed through the combiner pipeline, concatenated. The landing
// parameter equals s bit-exactly.
DgsResult dgs_solve(const DGSRequest& req, const PipelineConfig& cfg, uint64_t M_override,
                    Rng& rng, const DgsOptions& opts,
                    const HKZData* hkz_hint = nullptr,
                    const std::optional<DistanceEstimate>& est_hint = std::nullopt);

// Derivation helper: smallest ell >= min_ell whose split passes the Klein
// precondition and captures the effective support of D_{L-t,s} (and, when
// enforce_radius, the radius precondition).
int derive_ell(const HKZData& hkz, const RatVec& t, const GaussianParam& s, int min_ell,
               const DgsConfig& cfg, const DistanceEstimate& est, bool enforce_radius);
int affordable_ell(uint64_t M, int min_ell, uint64_t starve_margin);

struct ApproxCvpResult {
    std::vector<Int> coeffs;
    RatVec vector;
    Rat dist2;
};

// (1 + 1/f)-CVP via sampling: distance bracket, dgs_solve at s ~ d/(n f),
// closest output sample returned as a lattice vector.
ApproxCvpResult approx_cvp(const Basis& B, const RatVec& t, real_t f, Rng& rng,
                           const DgsOptions& opts = {}, uint64_t M_override = 0);

}  // namespace latgauss

#endif
