#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace abelfuchs {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Bad input: outside the domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// xi too close to a half-lattice point of the dual lattice.
struct SpinProximityError : DomainError {
    using DomainError::DomainError;
};

struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, cplx last_iterate)
        : std::runtime_error(what), last(last_iterate) {}
    cplx last;
};

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Coordinates (s, t) of z in the real basis (e1, e2): z = s e1 + t e2.
struct BasisCoords {
    double s;
    double t;
};

inline BasisCoords basis_coords(cplx z, cplx e1, cplx e2)
{
    double det = std::imag(std::conj(e1) * e2);
    return {std::imag(z * std::conj(e2)) / std::imag(e1 * std::conj(e2)),
            std::imag(std::conj(e1) * z) / det};
}

// Representative of z modulo span(e1, e2) with coordinates in [-1/2, 1/2).
inline cplx reduce_centered(cplx z, cplx e1, cplx e2)
{
    auto [s, t] = basis_coords(z, e1, e2);
    return z - std::floor(s + 0.5) * e1 - std::floor(t + 0.5) * e2;
}

} // namespace abelfuchs
