#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace stochtop {

inline constexpr const char* kVersion = "0.1.0";

/// Thrown when an argument is outside an operation's domain.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a computation would leave the valid Euclidean chart of a
/// flat manifold (cluster diameter or radius at or above the injectivity
/// scale).
struct ChartError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a radius coincides with a critical value and a count at that
/// radius would be ambiguous.  Callers re-jitter the radius.
struct NonGenericRadius : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fixed-capacity coordinate vector; only the first `dim` entries are used.
using Vec3 = std::array<double, 3>;

inline Vec3 vsub(const Vec3& a, const Vec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec3 vadd(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Vec3 vscale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

inline double vdot(const Vec3& a, const Vec3& b, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += a[i] * b[i];
    return s;
}

inline double vnorm2(const Vec3& a, int dim) { return vdot(a, a, dim); }

inline double vnorm(const Vec3& a, int dim) { return std::sqrt(vnorm2(a, dim)); }

inline double vdist(const Vec3& a, const Vec3& b, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace stochtop
