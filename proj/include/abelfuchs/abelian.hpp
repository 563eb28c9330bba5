#pragma once

#include <array>
#include <string>

#include "abelfuchs/elliptic.hpp"
#include "abelfuchs/fuchsian.hpp"
#include "abelfuchs/monodromy.hpp"

namespace abelfuchs {

// Residue sign at w_0 relative to w_1..w_3 in the eigen-section frame; the
// closed form for the β coefficients needs it to reproduce the sphere data.
inline constexpr std::array<double, 4> residue_sign{-1.0, 1.0, 1.0, 1.0};
// Sign of dα/dλ relative to 2 v sqrt(p_1 - p_2).
inline constexpr double slope_sign = 1.0;

// (z⁺, y⁺) = ((m - mu)/(m - u), m(m-1)v/(u-m)^2)
CurvePoint u_to_curve_point(cplx u, cplx v, cplx m);

struct UV {
    cplx u;
    cplx v;
};
// u = m(1-z)/(m-z), v = m(m-1)y/(z-m)^2
UV curve_point_to_u(cplx z, cplx y, cplx m);

// v = sign · sqrt(u(u-1)(u-m)) on the principal branch.
cplx v_branch(cplx u, cplx m, int sign);

inline cplx x_to_xi(cplx x, const Lattice& lat) { return lat.xi_scale() * x; }
inline cplx xi_to_x(cplx xi, const Lattice& lat) { return xi / lat.xi_scale(); }

// ξ = (2πi/(τ-τ̄)) x with x the Abel image of the curve point of (u, v),
// reduced into the cell of Λ centered at 0.
cplx u_to_xi(cplx u, int sign, const CurveData& curve);

// γ_0 = 0, γ_1 = λ_1/2 (u=0), γ_2 = (λ_1+λ_τ)/2 (u=1), γ_3 = λ_τ/2 (u=∞).
std::array<cplx, 4> spin_points(const Lattice& lat);
double spin_exclusion_radius(const Lattice& lat);
// Distance from ξ to (1/2)Λ, and the class of the nearest point.
double spin_distance(cplx xi, const Lattice& lat, int* nearest_class = nullptr);

struct SpinPoint {
    int gamma_class;
    cplx gamma;
    double mu;
    std::string u_value;
};
SpinPoint spin_mu(const Weights& w, int gamma_class, const Lattice* lat = nullptr);
std::array<double, 4> spin_mus(const Weights& w);

struct BetaCoefficients {
    std::array<cplx, 4> plus;  // α_i^+
    std::array<cplx, 4> minus; // α_i^-
    // residues of β^± at w_i: α_i^± times the residue of t_{∓2x}
    std::array<cplx, 4> res_plus;
    std::array<cplx, 4> res_minus;
};
BetaCoefficients beta_coefficients(const Weights& w, cplx xi, const CurveData& curve);

struct AbelianConnection {
    CurveData curve;
    Weights weights;
    cplx alpha;
    cplx xi;
    BetaCoefficients beta;
};
// Rejects ξ within the spin-exclusion radius (or a caller-supplied one) of (1/2)Λ.
AbelianConnection make_abelian_connection(const CurveData& curve, const Weights& w, cplx alpha, cplx xi,
                                          double exclusion_radius = -1.0);

// β^± at a point, evaluated from the theta series.
struct BetaValue {
    cplx plus;
    cplx minus;
};
BetaValue beta_field(const AbelianConnection& conn, cplx w);

// Coefficient of (w - w_i)^{-2} in β⁺β⁻ (a meromorphic function: the
// exponential factors combine to constants), by the trapezoid rule on a circle.
cplx quadratic_residue(const AbelianConnection& conn, int i, int points = 256);

// dw part [[α, β⁻],[β⁺, -α]], dw̄ part diag(-ξ, ξ).
FormCoeffs abelian_connection_form(const AbelianConnection& conn, cplx w);

cplx higgs_alpha_slope(cplx u, cplx v, const CurveData& curve);

struct TorusLoops {
    cplx base_point;
    Path a_cycle;
    Path b_cycle;
    std::array<Path, 4> tails;   // base point to the circle around w_i
    std::array<Path, 4> circles;
    double clearance;
};
// Base point (1+τ)/4; A: p -> p+1, B: p -> p+τ; lassos to the four w_i.
TorusLoops torus_loops(const CurveData& curve, double radius = -1.0);

MonodromyRep torus_monodromy(const AbelianConnection& conn, double clearance = -1.0,
                             const TransportOptions& opt = {});

// M_A and M_B for several values of α at fixed ξ, on shared steps.
struct CycleMonodromy {
    std::vector<Mat2> a;
    std::vector<Mat2> b;
};
CycleMonodromy torus_cycles(const AbelianConnection& conn, std::span<const cplx> alphas,
                            const TransportOptions& opt = {});

} // namespace abelfuchs
