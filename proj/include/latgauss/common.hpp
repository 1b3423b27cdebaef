#ifndef LATGAUSS_COMMON_HPP
#define LATGAUSS_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace latgauss {

// High-precision float for norms, masses and sampler internals (>= 64-bit
// mantissa on x86).
using real_t = long double;

// Storage type for lattice coordinate vectors in sample batches.
using coeff_t = int32_t;

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct degenerate_basis_error : error {
    explicit degenerate_basis_error(const std::string& msg = "degenerate basis") : error(msg) {}
};

struct precondition_error : error {
    explicit precondition_error(const std::string& msg) : error(msg) {}
};

struct convergence_error : error {
    explicit convergence_error(const std::string& msg) : error(msg) {}
};

inline constexpr real_t kPi = 3.14159265358979323846264338327950288L;

// Reconstruction tolerance for floating Gram-Schmidt checks.
inline constexpr real_t kGsEps = 1e-9L;

// Default relative-error target for certified Gaussian masses.
inline constexpr real_t kDefaultMassEps = 1e-12L;

// Dimension cap for exhaustive-enumeration oracles (mass, exact sampler).
inline constexpr int kDeskDimCap = 12;

}  // namespace latgauss

#endif
