#include "latgauss/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>

namespace latgauss {

namespace {

template <typename Key>
Chi2Tv chi2_tv_impl(const std::map<Key, uint64_t>& observed,
                    const std::map<Key, double>& expected) {
    double psum = 0;
    for (auto& [k, p] : expected) psum += p;
    if (std::fabs(psum - 1.0) > 1e-9)
        throw precondition_error("chi2_tv: expected probabilities must sum to 1");
    uint64_t N = 0;
    for (auto& [k, c] : observed) N += c;
    if (N < 1000) throw precondition_error("chi2_tv: need at least 1000 observations");

    // support mismatch: observed keys outside the expected support are only
    // tolerated as TV mass, not silently dropped from chi^2
    const double thresh = 5.0 / static_cast<double>(N);
    double chi2 = 0;
    double pooled_p = 0;
    uint64_t pooled_o = 0;
    int cells = 0;
    for (auto& [k, p] : expected) {
        auto it = observed.find(k);
        uint64_t o = it == observed.end() ? 0 : it->second;
        if (p >= thresh) {
            double e = p * static_cast<double>(N);
            chi2 += (static_cast<double>(o) - e) * (static_cast<double>(o) - e) / e;
            ++cells;
        } else {
            pooled_p += p;
            pooled_o += o;
        }
    }
    uint64_t stray = 0;
    for (auto& [k, c] : observed)
        if (!expected.count(k)) stray += c;
    pooled_o += stray;
    if (pooled_p > 0 || pooled_o > 0) {
        double e = pooled_p * static_cast<double>(N);
        if (e > 0) {
            chi2 += (static_cast<double>(pooled_o) - e) * (static_cast<double>(pooled_o) - e) / e;
            ++cells;
        } else if (pooled_o > 0) {
            chi2 = std::numeric_limits<double>::infinity();
            ++cells;
        }
    }

    Chi2Tv out;
    out.chi2 = chi2;
    out.dof = std::max(1, cells - 1);
    out.p_value = chi2_sf(chi2, out.dof);

    double tv = 0;
    for (auto& [k, p] : expected) {
        auto it = observed.find(k);
        double f = it == observed.end() ? 0.0 : static_cast<double>(it->second) / N;
        tv += std::fabs(f - p);
    }
    tv += static_cast<double>(stray) / N;
    out.tv = tv / 2;
    return out;
}

}  // namespace

Chi2Tv chi2_tv(const std::map<std::vector<int>, uint64_t>& observed,
               const std::map<std::vector<int>, double>& expected) {
    return chi2_tv_impl(observed, expected);
}

Chi2Tv chi2_tv(const std::map<long long, uint64_t>& observed,
               const std::map<long long, double>& expected) {
    return chi2_tv_impl(observed, expected);
}

double chi2_sf(double stat, int dof) {
    if (!std::isfinite(stat)) return 0;
    if (stat <= 0) return 1;
    boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, stat));
}

double binomial_sf(uint64_t observed, uint64_t n, double p) {
    if (observed == 0) return 1;
    boost::math::binomial dist(static_cast<double>(n), std::min(1.0, std::max(0.0, p)));
    // P[X >= observed]
    return boost::math::cdf(boost::math::complement(dist, static_cast<double>(observed) - 1));
}

double ks_uniform(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0;
    for (size_t i = 0; i < values.size(); ++i) {
        double lo = static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::fabs(values[i] - lo));
        d = std::max(d, std::fabs(values[i] - hi));
    }
    return d;
}

}  // namespace latgauss
