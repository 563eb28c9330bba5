#include "abelfuchs/volume.hpp"

#include "abelfuchs/stability.hpp"

#include <cmath>
#include <limits>

namespace abelfuchs {

double darboux_pairing(const CurveData& curve) { return 2.0 * curve.lattice.tau().imag(); }

double dual_cell_measure(const Lattice& lat) { return 2.0 * pi * pi / lat.tau().imag(); }

double grid_cell(const Lattice& lat, int N)
{
    return std::min(std::abs(lat.lambda_one()), std::abs(lat.lambda_tau())) / N;
}

double witten_closed_form(const Weights& w)
{
    if (!biswas_admissible(w))
        throw DomainError("witten_closed_form: weights fail the Biswas conditions");
    const auto mu = spin_mus(w);
    return 2.0 * pi * pi * (1.0 - (mu[0] + mu[1] + mu[2] + mu[3]));
}

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// derivative along one lattice direction from the values at offsets -2..2
// (h = 1/N); returns NaN if no stencil fits
cplx directional(const std::array<cplx, 5>& v, const std::array<bool, 5>& ok, double N)
{
    if (ok[1] && ok[3])
        return (v[3] - v[1]) * (0.5 * N);
    if (ok[3] && ok[4])
        return (-3.0 * v[2] + 4.0 * v[3] - v[4]) * (0.5 * N);
    if (ok[1] && ok[0])
        return (3.0 * v[2] - 4.0 * v[1] + v[0]) * (0.5 * N);
    return {nan, nan};
}

DensityField density_impl(const MSGrid& g, bool parallel)
{
    const int N = g.N, n1 = N + 1, total = n1 * n1;
    const Lattice& lat = g.curve.lattice;
    const cplx l1 = lat.lambda_one(), lt = lat.lambda_tau();
    const cplx denom = lt * std::conj(l1) - l1 * std::conj(lt);
    const auto mu = spin_mus(g.weights);
    const double flat = 1.0 - (mu[0] + mu[1] + mu[2] + mu[3]);

    std::vector<cplx> f(total, 0.0), a(total, 0.0);
    std::vector<char> ok(total, 0);
    for (int i = 0; i < total; ++i) {
        ok[i] = !g.excluded[i] && g.samples[i].converged;
        if (ok[i]) {
            a[i] = g.samples[i].alpha;
            f[i] = a[i] - seed_from_spin_expansion(g.weights, g.curve, g.samples[i].xi);
        }
    }

    DensityField d;
    d.N = N;
    d.density.assign(total, nan);
    d.raw.assign(total, nan);
    std::vector<double> imag(total, 0.0);

    // the grid covers the torus: indices wrap, α picking up its period shifts
    auto value = [&](const std::vector<cplx>& v, bool is_alpha, int j, int k, cplx& out) {
        cplx shift = 0.0;
        if (j < 0) {
            j += N;
            shift -= l1;
        } else if (j > N) {
            j -= N;
            shift += l1;
        }
        if (k < 0) {
            k += N;
            shift -= std::conj(lt);
        } else if (k > N) {
            k -= N;
            shift += std::conj(lt);
        }
        const int i = g.index(j, k);
        if (!ok[i])
            return false;
        out = v[i] + (is_alpha ? shift : cplx(0.0));
        return true;
    };
    auto dbar = [&](const std::vector<cplx>& v, bool is_alpha, int j, int k) {
        std::array<cplx, 5> vs, vt;
        std::array<bool, 5> os, ot;
        for (int o = -2; o <= 2; ++o) {
            os[o + 2] = value(v, is_alpha, j + o, k, vs[o + 2]);
            ot[o + 2] = value(v, is_alpha, j, k + o, vt[o + 2]);
        }
        const cplx ds = directional(vs, os, N), dt = directional(vt, ot, N);
        return (lt * ds - l1 * dt) / denom;
    };

    auto work = [&](int i) {
        if (!ok[i])
            return;
        const int j = i / n1, k = i % n1;
        const cplx df = dbar(f, false, j, k);
        if (!finite(df))
            return;
        d.density[i] = flat + df.real();
        imag[i] = std::abs(df.imag());
        d.raw[i] = dbar(a, true, j, k).real();
    };
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < total; ++i)
            work(i);
    } else {
        for (int i = 0; i < total; ++i)
            work(i);
    }
    for (int i = 0; i < total; ++i)
        if (std::isfinite(d.density[i])) {
            ++d.available;
            d.max_imag = std::max(d.max_imag, imag[i]);
        }
    return d;
}

} // namespace

DensityField kahler_density(const MSGrid& grid, bool parallel) { return density_impl(grid, parallel); }

DensityField kahler_density_serial(const MSGrid& grid) { return density_impl(grid, false); }

double mean_density(const MSGrid& g, const std::vector<double>& density, double* punctured_mean, bool parallel)
{
    const int N = g.N, n1 = N + 1, total = n1 * n1;
    const Lattice& lat = g.curve.lattice;
    // work in units of the cell
    const double area = 1.0;
    const double dA = 1.0 / (double(N) * N);
    const double r1 = g.exclusion_radius, r2 = 1.5 * g.exclusion_radius;

    double i1 = 0.0, i2 = 0.0, kept1 = 0.0, kept2 = 0.0;
    auto body = [&](int i, double& s1, double& s2, double& m1, double& m2) {
        if (!std::isfinite(density[i]))
            return;
        const int j = i / n1, k = i % n1;
        const double wt = ((j == 0 || j == N) ? 0.5 : 1.0) * ((k == 0 || k == N) ? 0.5 : 1.0) * dA;
        const double dist = spin_distance(g.samples[i].xi, lat);
        if (dist >= r1) {
            s1 += wt * density[i];
            m1 += wt;
        }
        if (dist >= r2) {
            s2 += wt * density[i];
            m2 += wt;
        }
    };
    if (parallel) {
#pragma omp parallel for schedule(static) reduction(+ : i1, i2, kept1, kept2)
        for (int i = 0; i < total; ++i)
            body(i, i1, i2, kept1, kept2);
    } else {
        for (int i = 0; i < total; ++i)
            body(i, i1, i2, kept1, kept2);
    }
    if (kept1 <= 0.0)
        throw DomainError("mean_density: no usable samples");
    if (punctured_mean)
        *punctured_mean = i1 / kept1 * area;
    const double a1 = area - kept1, a2 = area - kept2;
    if (a2 - a1 < 1e-3 * area / (double(N) * N) || kept2 <= 0.0)
        return i1 / kept1 * area;
    return (a2 * i1 - a1 * i2) / (a2 - a1);
}

VolumeReport symplectic_volume(const MSGrid& g, bool parallel)
{
    const DensityField d = kahler_density(g, parallel);
    const Lattice& lat = g.curve.lattice;
    const double norm = covering_factor * darboux_pairing(g.curve) * dual_cell_measure(lat);
    VolumeReport r;
    r.weights = g.weights;
    r.tau = lat.tau();
    r.exclusion_radius = g.exclusion_radius;
    r.N = g.N;
    double pm = 0.0;
    r.quadrature_value = norm * mean_density(g, d.density, &pm, parallel);
    r.punctured_mean_value = norm * pm;
    r.raw_value = norm * mean_density(g, d.raw, nullptr, parallel);
    r.closed_form = witten_closed_form(g.weights);
    r.rel_error = r.closed_form != 0.0 ? std::abs(r.quadrature_value - r.closed_form) / std::abs(r.closed_form)
                                       : std::abs(r.quadrature_value);
    r.convergence_ratio = g.convergence_ratio();
    r.max_density_imag = d.max_imag;

    int excluded = 0;
    for (char e : g.excluded)
        excluded += e;
    r.excluded_fraction = double(excluded) / double(g.excluded.size());

    const int N = g.N;
    for (int k = 0; k <= N; ++k) {
        const double a = d.density[g.index(0, k)], b = d.density[g.index(N, k)];
        if (std::isfinite(a) && std::isfinite(b))
            r.density_periodicity = std::max(r.density_periodicity, std::abs(a - b));
    }
    for (int j = 0; j <= N; ++j) {
        const double a = d.density[g.index(j, 0)], b = d.density[g.index(j, N)];
        if (std::isfinite(a) && std::isfinite(b))
            r.density_periodicity = std::max(r.density_periodicity, std::abs(a - b));
    }
    return r;
}

std::vector<ConvergenceRow> convergence_table(const Weights& w, const CurveData& curve, const std::vector<int>& Ns,
                                              double radius_cells, const GridOptions& opt)
{
    std::vector<ConvergenceRow> rows;
    for (int N : Ns) {
        const double r = radius_cells * grid_cell(curve.lattice, N);
        const MSGrid g = ms_grid(w, curve, N, r, opt);
        const VolumeReport v = symplectic_volume(g, opt.parallel);
        rows.push_back({N, r, v.quadrature_value, v.rel_error, v.convergence_ratio});
    }
    return rows;
}

} // namespace abelfuchs
