#pragma once

#include <array>
#include <vector>

#include "abelfuchs/types.hpp"

namespace abelfuchs {

// Period lattice Γ = span(1, τ) and its dual Λ = span(π/Im τ, πτ/Im τ).
class Lattice {
public:
    explicit Lattice(cplx tau);

    cplx tau() const { return tau_; }
    cplx nome() const { return q_; }
    cplx lambda_one() const { return pi / tau_.imag(); }
    cplx lambda_tau() const { return pi * tau_ / tau_.imag(); }
    // 2πi/(τ - τ̄), the factor taking x to ξ
    double xi_scale() const { return pi / tau_.imag(); }

    cplx reduce(cplx w) const { return reduce_centered(w, 1.0, tau_); }
    cplx reduce_dual(cplx xi) const { return reduce_centered(xi, lambda_one(), lambda_tau()); }
    // Distance from w to the nearest point of Γ.
    double distance_to_lattice(cplx w) const;
    // Shortest nonzero vector of Λ.
    double min_dual_period() const;

    // Derivatives ϑ(0)..ϑ'''(0); ϑ'(0) is the one the formulas use.
    const std::array<cplx, 4>& theta_at_zero() const { return theta0_; }
    // Additive constant making ℘ = -(log ϑ)'' + c have zero constant term at 0.
    cplx wp_shift() const { return wp_shift_; }

    // q^{(k+1/2)^2} for k = -kmax-1 .. kmax, indexed by k + kmax + 1.
    const std::vector<cplx>& series_weights() const { return weights_; }
    int series_half_width() const { return kmax_; }

private:
    cplx tau_;
    cplx q_;
    int kmax_ = 0;
    std::vector<cplx> weights_;
    std::array<cplx, 4> theta0_{};
    cplx wp_shift_;
};

// ϑ(w) = θ_1(πw|τ) e^{πiw} and its first three derivatives.
// Satisfies ϑ(w+1) = ϑ(w), ϑ(w+τ) = -ϑ(w) e^{-2πiw}.
std::array<cplx, 4> theta_jet(cplx w, const Lattice& lat);
cplx theta_eval(cplx w, const Lattice& lat, int order = 0);
// Value only; skips the derivative sums.
cplx theta_value(cplx w, const Lattice& lat);

// t_x(w) = ϑ(w-x)/ϑ(w) · exp(2πi/(τ̄-τ) · x (w - w̄)), doubly periodic in w.
cplx t_section(cplx x, cplx w, const Lattice& lat);

struct WpValue {
    cplx wp;
    cplx dwp;
};
WpValue wp_eval(cplx w, const Lattice& lat);

struct CurveData {
    Lattice lattice;
    std::array<cplx, 4> half_points; // w_0 = 0, w_1 = 1/2, w_2 = (1+τ)/2, w_3 = τ/2
    std::array<cplx, 3> p;           // ℘(w_1), ℘(w_2), ℘(w_3)
    cplx m;
    cplx sqrt_p12;
    cplx g2;
    cplx g3;
};

CurveData curve_from_tau(const Lattice& lat);
Lattice tau_from_m(cplx m);

struct CurvePoint {
    cplx z;
    cplx y;
};
// z = (℘ - p_2)/(p_1 - p_2), y = ℘'/(2 sqrt_p12^3), so y^2 = z(z-1)(z-m).
CurvePoint curve_coords(cplx w, const CurveData& curve);
// Inverse of curve_coords, reduced to the centered fundamental cell.
cplx abel_invert(cplx z, cplx y, const CurveData& curve);

} // namespace abelfuchs
