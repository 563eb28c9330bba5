#pragma once

#include <optional>
#include <string>
#include <vector>

#include "abelfuchs/abelian.hpp"

namespace abelfuchs {

enum class SolveStatus { converged, diverged, sl2r, no_form, spin };
const char* to_string(SolveStatus s);

struct MSSample {
    cplx xi;
    cplx alpha;
    double residual = 0.0;
    std::optional<HermitianForm> hermitian_witness;
    bool converged = false;
    bool irreducible = false;
    SolveStatus status = SolveStatus::diverged;
    int iterations = 0;
};

struct SolveOptions {
    TransportOptions transport;
    double newton_tol = 1e-11;
    int max_iter = 40;
    double fd_step = 1e-6;
    double exclusion_radius = -1.0; // default: spin_exclusion_radius
};

// (Σμ)ξ + (1-Σμ)ξ̄ + Σ (μ_i/2)(L(x - w_i) - L(-x - w_i)),  L = ϑ'/ϑ, x = ξ (Im τ)/π
cplx seed_from_spin_expansion(const Weights& w, const CurveData& curve, cplx xi);
// Only the theta terms (holomorphic in ξ away from the spin points).
cplx spin_pole_part(const Weights& w, const CurveData& curve, cplx xi);

MSSample solve_alpha_ms(const Weights& w, const CurveData& curve, cplx xi, cplx seed, const SolveOptions& opt = {});

struct MSGrid {
    MSGrid(const Weights& w, const CurveData& c) : weights(w), curve(c) {}
    Weights weights;
    CurveData curve;
    int N = 0;
    double exclusion_radius = 0.0;
    // (N+1)^2 samples, index j*(N+1)+k, ξ = (-1/2 + j/N) λ_1 + (-1/2 + k/N) λ_τ
    std::vector<MSSample> samples;
    std::vector<char> excluded;
    std::vector<int> solve_order;
    int anchor = -1;
    int converged_count = 0;
    int attempted_count = 0;
    double rtol = 0.0;
    std::string loop_convention;

    int index(int j, int k) const { return j * (N + 1) + k; }
    cplx xi_at(int j, int k) const;
    double convergence_ratio() const { return attempted_count ? double(converged_count) / attempted_count : 0.0; }
    bool usable(int j, int k) const { return !excluded[index(j, k)] && samples[index(j, k)].converged; }
};

struct GridOptions {
    SolveOptions solve;
    bool parallel = true;
};

// Anchor = the sample farthest from the spin points; then Chebyshev rings
// around it, each sample seeded by its nearest converged sample from earlier
// rings. Samples within a ring are independent and may run concurrently.
MSGrid ms_grid(const Weights& w, const CurveData& curve, int N, double exclusion_radius,
               const GridOptions& opt = {});
// Same schedule, one sample at a time.
MSGrid ms_grid_serial(const Weights& w, const CurveData& curve, int N, double exclusion_radius,
                      const GridOptions& opt = {});

struct SymmetryReport {
    double shift_one = 0.0;   // |α(ξ+λ_1) - α(ξ) - λ_1|
    double shift_tau = 0.0;   // |α(ξ+λ_τ) - α(ξ) - conj(λ_τ)|
    double oddness = 0.0;     // |α(-ξ) + α(ξ)|
    double remainder_period = 0.0; // periodicity of α - seed
    int pairs = 0;
};
SymmetryReport verify_section_symmetries(const MSGrid& grid);

struct SphereSolve {
    cplx lambda;
    MonodromyRep rep;
    double residual = 0.0;
    std::optional<HermitianForm> witness;
    bool converged = false;
    int iterations = 0;
};
// Gauss-Newton in λ on Im tr(M_0 M_1) = Im tr(M_0 M_2) = Im tr(M_1 M_2) = 0.
SphereSolve sphere_side_solve(const Weights& w, cplx m, cplx u, cplx seed_lambda, const SolveOptions& opt = {});
// Grid search over |Re λ|,|Im λ| ≤ half_width for local minima of the
// trace defect (|Im t| + excess of |Re t| over 2), then Newton from the best
// few until one certifies a positive form. SL(2,R) points also have real traces.
SphereSolve sphere_ms_search(const Weights& w, cplx m, cplx u, const SolveOptions& opt = {}, double half_width = 0.6,
                             int n = 25, int starts = 6);

struct SpinResidueFit {
    int gamma_class = 0;
    cplx coefficient;   // c in α ≈ c/(ξ-γ) + ...
    cplx expected;      // (π/Im τ) μ_γ
    double fit_residual = 0.0;
    int samples = 0;
};
// Solves α^MS on rays ξ = γ + ε e^{iφ} (continuation inward) and least-squares
// fits c/ζ + a_0 + a_1 ζ + b_1 ζ̄ + a_2 ζ² + c_11 ζζ̄ + b_2 ζ̄².
SpinResidueFit fit_spin_residue(const Weights& w, const CurveData& curve, int gamma_class,
                                const SolveOptions& opt = {}, int rays = 8, int radii = 5);

} // namespace abelfuchs
