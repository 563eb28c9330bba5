#pragma once

#include <vector>

#include "abelfuchs/ms_section.hpp"

namespace abelfuchs {

// |∫ dw∧dw̄| over the unit cell, 2 Im τ.
double darboux_pairing(const CurveData& curve);
// |∫ dξ∧dξ̄| over the Λ-cell, 2π²/Im τ (twice the Euclidean area).
double dual_cell_measure(const Lattice& lat);
inline constexpr double covering_factor = 0.5;
// 2π²(1 - Σμ); rejects weights failing the Biswas conditions.
double witten_closed_form(const Weights& w);

struct DensityField {
    int N = 0;
    // (N+1)^2 values, same indexing as MSGrid; NaN where unavailable
    std::vector<double> density;
    std::vector<double> raw;  // ∂_ξ̄ α by differences of α itself
    double max_imag = 0.0;    // largest |Im ∂_ξ̄ α|
    int available = 0;
};

// ∂_ξ̄ α^MS on the grid: central differences in the lattice coordinates
// (periodic across the cell edges), one-sided next to excluded or failed
// samples. The spin-pole part (theta terms of the seed) is subtracted before
// differencing and its exact ∂_ξ̄, which is zero, added back; `raw` skips the
// subtraction.
DensityField kahler_density(const MSGrid& grid, bool parallel = true);
DensityField kahler_density_serial(const MSGrid& grid);

struct VolumeReport {
    Weights weights;
    cplx tau;
    double exclusion_radius = 0.0;
    double quadrature_value = 0.0;   // disks filled by extrapolation in excluded area
    double punctured_mean_value = 0.0;
    double raw_value = 0.0;          // same extrapolation on the raw density
    double closed_form = 0.0;
    double rel_error = 0.0;
    double excluded_fraction = 0.0;
    double convergence_ratio = 0.0;
    double max_density_imag = 0.0;
    double density_periodicity = 0.0;
    int N = 0;
};

// Cell mean of the density by the trapezoid rule. The sum over samples with
// spin distance ≥ r is I(r) = I_0 - a(r)·d̄ + ..., with a(r) the area left
// out; two radii (r and 1.5 r) eliminate d̄.
double mean_density(const MSGrid& grid, const std::vector<double>& density, double* punctured_mean = nullptr,
                    bool parallel = true);
// ½ · darboux_pairing · dual_cell_measure · mean density
VolumeReport symplectic_volume(const MSGrid& grid, bool parallel = true);

struct ConvergenceRow {
    int N;
    double exclusion_radius;
    double quadrature_value;
    double rel_error;
    double convergence_ratio;
};
// One grid per N, exclusion radius = radius_cells grid spacings.
std::vector<ConvergenceRow> convergence_table(const Weights& w, const CurveData& curve, const std::vector<int>& Ns,
                                              double radius_cells, const GridOptions& opt = {});
// Grid spacing along the shorter generator of Λ.
double grid_cell(const Lattice& lat, int N);

} // namespace abelfuchs
