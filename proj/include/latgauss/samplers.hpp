#ifndef LATGAUSS_SAMPLERS_HPP
#define LATGAUSS_SAMPLERS_HPP

#include <unordered_map>
#include <vector>

#include "latgauss/gaussian.hpp"
#include "latgauss/rng.hpp"

namespace latgauss {

// Integer k with probability proportional to rho_s(k - center), restricted to
// the window |k - center| <= 10 s + 1 (truncated tail < 2^-100 of the mass).
// Small windows use an exact inverse-CDF table; large windows use exact
// rejection from a slightly widened continuous Gaussian. Both realize the
// same window-truncated distribution.
long long sample_1d(real_t center, real_t s, Rng& rng);

// O(1) sampling from a fixed finite distribution (Vose alias method); the
// realized distribution equals the normalized weight vector up to float
// rounding, like a CDF table.
class AliasTable {
  public:
    AliasTable() = default;
    explicit AliasTable(const std::vector<real_t>& weights);
    size_t draw(Rng& rng) const {
        size_t i = static_cast<size_t>(rng.below(cut_.size()));
        return rng.uniform01() < cut_[i] ? i : alias_[i];
    }
    size_t size() const { return cut_.size(); }

  private:
    std::vector<real_t> cut_;
    std::vector<uint32_t> alias_;
};

// Cached table sampler for one (center, s).
class Gauss1D {
  public:
    Gauss1D() = default;
    Gauss1D(real_t center, real_t s);
    long long draw(Rng& rng) const;
    bool table_mode() const { return table_.size() > 0; }

    real_t center = 0, s = 1;

  private:
    long long kmin_ = 0;
    AliasTable table_;
};

// Randomized nearest-plane sampler for D_{L - t, s}: coefficient i drawn by a
// 1-D Gaussian with parameter s/||gs_i|| around the Babai center. Requires
// s >= klein_factor sqrt(log(n+2)) max||gs_i|| for n >= 2; in one dimension
// the sampler is the exact 1-D inverse CDF and needs no floor.
class KleinSampler {
  public:
    KleinSampler(const Lattice& L, const RationalGS& gs, const RatVec& t,
                 const GaussianParam& s, real_t klein_factor = 4.0L,
                 bool enforce_precondition = true);

    // coefficients of the sampled lattice vector v; the sample is v - t
    std::vector<coeff_t> draw(Rng& rng);
    void draw_into(Rng& rng, coeff_t* out);

    int rank() const { return n_; }
    static bool precondition_holds(const GramSchmidt& fgs, real_t s_value, real_t klein_factor);

  private:
    int n_;
    bool diagonal_ = false;  // all mu off-diagonals zero: fixed centers
    std::vector<std::vector<real_t>> mu_;
    std::vector<real_t> tc_;
    std::vector<real_t> s_i_;
    std::vector<real_t> adj_;
    std::vector<std::unordered_map<uint64_t, Gauss1D>> memo_;
    std::vector<Gauss1D> fixed_;
    std::vector<uint64_t> last_key_;
    std::vector<const Gauss1D*> last_tab_;
    std::vector<bool> cacheable_;
};

// Ground-truth sampler: exact inverse CDF over the enumerated support that
// carries all but support_eps of the mass.
class ExactSampler {
  public:
    ExactSampler(const Lattice& L, const RationalGS& gs, const RatVec& t,
                 const GaussianParam& s, real_t support_eps = 1e-18L);

    size_t draw_index(Rng& rng) const;
    const coeff_t* coeffs(size_t idx) const { return points_.data() + idx * dim_; }
    std::vector<coeff_t> draw(Rng& rng) const;
    void draw_into(Rng& rng, coeff_t* out) const;

    size_t support_size() const { return cdf_.size(); }
    int dim() const { return dim_; }
    // probability of support point idx (support-conditional)
    real_t prob(size_t idx) const;
    real_t dist2(size_t idx) const { return dist2_[idx]; }

  private:
    int dim_;
    std::vector<coeff_t> points_;  // flat row-major
    std::vector<real_t> cdf_;      // cumulative weights (for probabilities)
    std::vector<real_t> dist2_;
    AliasTable table_;
};

}  // namespace latgauss

#endif
