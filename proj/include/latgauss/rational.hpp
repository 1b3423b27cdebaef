#ifndef LATGAUSS_RATIONAL_HPP
#define LATGAUSS_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

#include "latgauss/common.hpp"

namespace latgauss {

using Rat = mpq_class;
using Int = mpz_class;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

inline real_t to_real(const Rat& q) {
    // mpq -> long double via separate numerator/denominator conversion keeps
    // the full 64-bit mantissa.
    mpf_class f(q, 128);
    return static_cast<real_t>(f.get_d()) +
           static_cast<real_t>(mpf_class(f - f.get_d()).get_d());
}

inline Rat dot(const RatVec& a, const RatVec& b) {
    Rat acc = 0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

inline Rat norm2(const RatVec& a) { return dot(a, a); }

inline RatVec sub(const RatVec& a, const RatVec& b) {
    RatVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline RatVec add(const RatVec& a, const RatVec& b) {
    RatVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline void axpy(RatVec& y, const Rat& c, const RatVec& x) {
    for (size_t i = 0; i < y.size(); ++i) y[i] += c * x[i];
}

// Nearest integer, ties toward the smaller integer (matches the coefficient
// tie-break used by the enumeration oracles).
inline Int round_nearest(const Rat& q) {
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    Rat frac = q - Rat(fl);
    if (frac * 2 > 1) return fl + 1;
    return fl;
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

// Parses "p", "-p" or "p/q"; throws on malformed input.
inline Rat parse_rational(const std::string& s) {
    try {
        Rat q(s);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw error("bad rational: '" + s + "'");
    }
}

inline std::string format_rational(const Rat& q) {
    return q.get_str();
}

}  // namespace latgauss

#endif
