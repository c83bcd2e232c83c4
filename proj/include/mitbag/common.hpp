#ifndef MITBAG_COMMON_HPP
#define MITBAG_COMMON_HPP

#include <complex>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace mitbag {

using cplx = std::complex<double>;

/// Numerical failure that is not a usage error (e.g. iteration budget exceeded).
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A verification contract evaluated at runtime came out false.
struct verification_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846264338327950288;

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> x(n);
    if (n == 1) {
        x[0] = a;
        return x;
    }
    const double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) x[i] = a + h * static_cast<double>(i);
    x.back() = b;
    return x;
}

/// FNV-1a over the raw bytes of a double sequence. Used to stamp reports so a
/// failing run can be reproduced from its inputs.
inline std::uint64_t fnv1a_hash(const std::vector<double>& values) {
    std::uint64_t h = 1469598103934665603ull;
    for (double v : values) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffu;
            h *= 1099511628211ull;
        }
    }
    return h;
}

}  // namespace mitbag

#endif
