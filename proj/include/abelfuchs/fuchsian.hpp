#pragma once

#include <array>

#include "abelfuchs/types.hpp"

namespace abelfuchs {

// Local weights ρ_0..ρ_3 at the punctures (z_0, z_1, z_2, z_3) = (∞, 1, 0, m).
struct Weights {
    std::array<double, 4> rho{};

    Weights() = default;
    explicit Weights(std::array<double, 4> r);

    double operator[](int i) const { return rho[i]; }
    double sum() const { return rho[0] + rho[1] + rho[2] + rho[3]; }
    // ρ = ρ_0 - ρ_1 - ρ_2 - ρ_3
    double rho_offset() const { return rho[0] - rho[1] - rho[2] - rho[3]; }
    // ρ̂_i = 2ρ_i - 1/2, the residue eigenvalue on the torus
    double hat(int i) const { return 2.0 * rho[i] - 0.5; }
};

using MatrixQuad = std::array<Mat2, 4>;

// A^u_0..A^u_3 with A^u_0 = -A^u_1 - A^u_2 - A^u_3.
MatrixQuad residue_matrices(const Weights& w, cplx u);

struct HiggsField {
    MatrixQuad psi;
    cplx u;
};
HiggsField higgs_matrices(cplx u);

struct FuchsianSystem {
    Weights weights;
    cplx m;
    cplx u;
    cplx lambda;
    MatrixQuad A; // A^u_i + λΨ_i
};
FuchsianSystem make_system(const Weights& w, cplx m, cplx u, cplx lambda);

// dz-coefficient A_1/(z-1) + A_2/z + A_3/(z-m).
Mat2 connection_form(const FuchsianSystem& sys, cplx z);

// Unit norm, larger-modulus component real positive.
Vec2 normalize_projective(const Vec2& v);
bool same_projective(const Vec2& a, const Vec2& b, double tol);
// Xratio(a,b;c,d) = [a,b][d,c] / ([a,d][b,c]), [p,q] = p_0 q_1 - p_1 q_0.
cplx cross_ratio(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

struct Eigenlines {
    std::array<Vec2, 4> lines;
    cplx cross_ratio;
};
// Eigenlines of the positive eigenvalues ρ_i: [1:0], [1:1], [0:1], [u:1].
Eigenlines eigenlines(cplx u);

// c with det Ψ = c dz^2 / (z(z-1)(z-m)).
cplx higgs_determinant(cplx u, cplx m);

struct EigenSections {
    Vec2 plus;
    Vec2 minus;
};
// s± = ((m-1)uz ∓ vy, -uz + m(u+z-1)); eigenvalues of Ψ(z) are ∓v/y.
EigenSections eigen_sections(cplx u, cplx v, cplx z, cplx y, cplx m);

} // namespace abelfuchs
