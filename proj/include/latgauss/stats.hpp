#ifndef LATGAUSS_STATS_HPP
#define LATGAUSS_STATS_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "latgauss/common.hpp"

namespace latgauss {

// Pearson chi^2 with cells of expected mass >= 5/N pooled into a rest cell,
// plus total-variation distance over the full enumerated support.
struct Chi2Tv {
    double chi2 = 0;
    double p_value = 1;
    int dof = 0;
    double tv = 0;
};

template <typename Key>
struct Distribution {
    std::map<Key, uint64_t> observed;
    std::map<Key, double> expected;  // probabilities, must sum to ~1
};

Chi2Tv chi2_tv(const std::map<std::vector<int>, uint64_t>& observed,
               const std::map<std::vector<int>, double>& expected);

// scalar-keyed convenience
Chi2Tv chi2_tv(const std::map<long long, uint64_t>& observed,
               const std::map<long long, double>& expected);

double chi2_sf(double stat, int dof);  // survival function

// One-sided binomial test: probability of >= observed successes under
// Binomial(n, p); small values reject "true rate <= p".
double binomial_sf(uint64_t observed, uint64_t n, double p);

// Kolmogorov-Smirnov statistic of a sample against U[0,1].
double ks_uniform(std::vector<double> values);

}  // namespace latgauss

#endif
