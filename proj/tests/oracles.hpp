#pragma once

// Reference values computed by routes independent of the library.

#include <cmath>
#include <complex>
#include <random>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;
inline const cplx I{0.0, 1.0};

// Jacobi triple product: θ_1(z|τ) = 2 q^{1/4} sin z Π (1-q^{2n})(1 - 2 q^{2n} cos 2z + q^{4n}), q = e^{iπτ}
inline cplx theta1_product(cplx z, cplx tau)
{
    const cplx q = std::exp(I * pi * tau);
    const cplx q14 = std::exp(I * pi * tau / 4.0);
    cplx p = 2.0 * q14 * std::sin(z);
    cplx q2n = 1.0;
    for (int n = 1; n < 200; ++n) {
        q2n *= q * q;
        p *= (1.0 - q2n) * (1.0 - 2.0 * q2n * std::cos(2.0 * z) + q2n * q2n);
        if (std::abs(q2n) < 1e-18)
            break;
    }
    return p;
}

// ϑ(w) = θ_1(πw|τ) e^{πiw}
inline cplx theta_shifted(cplx w, cplx tau) { return theta1_product(pi * w, tau) * std::exp(I * pi * w); }

// Lambert series: ℘(z) = (2πi)² [Σ_n q^n u/(1-q^n u)² + 1/12 - 2 Σ_{n≥1} q^n/(1-q^n)²],
// u = e^{2πiz}, q = e^{2πiτ}; likewise ℘'.
struct Wp {
    cplx wp, dwp;
};
inline Wp weierstrass_lambert(cplx z, cplx tau)
{
    // reduce Im z into [0, Im τ) so the two half-sums converge evenly
    const double k = std::floor(z.imag() / tau.imag());
    z -= k * tau;
    const cplx u = std::exp(2.0 * pi * I * z), q = std::exp(2.0 * pi * I * tau);
    cplx s = u / ((1.0 - u) * (1.0 - u)), ds = u * (1.0 + u) / std::pow(1.0 - u, 3);
    cplx c = 0.0;
    cplx qn = 1.0;
    for (int n = 1; n < 400; ++n) {
        qn *= q;
        const cplx a = qn * u, b = qn / u;
        s += a / ((1.0 - a) * (1.0 - a)) + b / ((1.0 - b) * (1.0 - b));
        ds += a * (1.0 + a) / std::pow(1.0 - a, 3) - b * (1.0 + b) / std::pow(1.0 - b, 3);
        c += qn / ((1.0 - qn) * (1.0 - qn));
        if (std::abs(qn) < 1e-20)
            break;
    }
    const cplx f = (2.0 * pi * I) * (2.0 * pi * I);
    return {f * (s + 1.0 / 12.0 - 2.0 * c), f * (2.0 * pi * I) * ds};
}

inline double uniform(std::mt19937_64& g, double a, double b)
{
    return std::uniform_real_distribution<double>(a, b)(g);
}

} // namespace oracle
