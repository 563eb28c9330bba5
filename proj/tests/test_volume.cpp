#include <doctest.h>

#include <cstring>

#include "abelfuchs/stability.hpp"
#include "abelfuchs/volume.hpp"
#include "oracles.hpp"

using namespace abelfuchs;

namespace {

const Weights generic({0.3, 0.25, 0.2, 0.15});

double mu_sum(const std::array<double, 4>& r)
{
    return std::abs(1.0 - r[0] - r[1] - r[2] - r[3]) + std::abs(r[0] + r[1] - r[2] - r[3]) +
           std::abs(r[0] + r[2] - r[1] - r[3]) + std::abs(r[0] - r[1] - r[2] + r[3]);
}

} // namespace

TEST_CASE("closed form")
{
    const double pi2 = oracle::pi * oracle::pi;
    CHECK(witten_closed_form(Weights({0.2, 0.2, 0.2, 0.2})) == doctest::Approx(1.6 * pi2).epsilon(1e-14));
    CHECK(witten_closed_form(Weights({0.25, 0.25, 0.25, 0.25})) == doctest::Approx(2.0 * pi2).epsilon(1e-14));
    CHECK(witten_closed_form(generic) == doctest::Approx(1.2 * pi2).epsilon(1e-14));
    std::mt19937_64 rng(8);
    int rejected = 0;
    for (int t = 0; t < 300; ++t) {
        const std::array<double, 4> r{oracle::uniform(rng, 0.01, 0.49), oracle::uniform(rng, 0.01, 0.49),
                                      oracle::uniform(rng, 0.01, 0.49), oracle::uniform(rng, 0.01, 0.49)};
        const Weights w(r);
        if (biswas_admissible(w)) {
            CHECK(witten_closed_form(w) == doctest::Approx(2.0 * pi2 * (1.0 - mu_sum(r))).epsilon(1e-13));
            CHECK(witten_closed_form(w) > 0.0);
        } else {
            CHECK_THROWS_AS(witten_closed_form(w), DomainError);
            ++rejected;
        }
    }
    CHECK(rejected > 0);
}

TEST_CASE("measure factors")
{
    for (cplx tau : {cplx(0.0, 1.0), cplx(0.15, 0.9), cplx(-0.4, 2.3)}) {
        const CurveData c = curve_from_tau(Lattice(tau));
        CHECK(darboux_pairing(c) == doctest::Approx(2.0 * tau.imag()));
        // twice the Euclidean area spanned by λ_1, λ_τ
        const cplx a = c.lattice.lambda_one(), b = c.lattice.lambda_tau();
        CHECK(dual_cell_measure(c.lattice) == doctest::Approx(2.0 * std::abs((std::conj(a) * b).imag())));
        CHECK(covering_factor * darboux_pairing(c) * dual_cell_measure(c.lattice) ==
              doctest::Approx(2.0 * oracle::pi * oracle::pi));
    }
}

TEST_CASE("mean density of synthetic fields")
{
    const CurveData c = curve_from_tau(tau_from_m(2.5));
    MSGrid g(generic, c);
    g.N = 16;
    g.exclusion_radius = 2.0 * grid_cell(c.lattice, 16);
    const int n = (g.N + 1) * (g.N + 1);
    g.samples.resize(n);
    g.excluded.assign(n, 0);
    for (int j = 0; j <= g.N; ++j)
        for (int k = 0; k <= g.N; ++k) {
            auto& s = g.samples[g.index(j, k)];
            s.xi = g.xi_at(j, k);
            s.converged = true;
            g.excluded[g.index(j, k)] = spin_distance(s.xi, c.lattice) < g.exclusion_radius;
        }
    std::vector<double> one(n, 1.0), wave(n);
    for (int j = 0; j <= g.N; ++j)
        for (int k = 0; k <= g.N; ++k)
            wave[g.index(j, k)] = 3.0 + std::cos(2.0 * oracle::pi * j / g.N) * std::sin(2.0 * oracle::pi * k / g.N);
    double pm = 0.0;
    CHECK(mean_density(g, one, &pm) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(pm == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(mean_density(g, wave) == doctest::Approx(3.0).epsilon(1e-2));
    CHECK(mean_density(g, wave, nullptr, false) == doctest::Approx(mean_density(g, wave, nullptr, true)).epsilon(1e-13));
}

TEST_CASE("symmetric weights give 2 pi squared")
{
    const CurveData c = curve_from_tau(tau_from_m(2.5));
    const MSGrid g = ms_grid(Weights({0.25, 0.25, 0.25, 0.25}), c, 16, 2.0 * grid_cell(c.lattice, 16));
    const VolumeReport r = symplectic_volume(g);
    CHECK(r.quadrature_value == doctest::Approx(2.0 * oracle::pi * oracle::pi).epsilon(1e-3));
    CHECK(r.rel_error < 1e-3);
    const DensityField d = kahler_density(g);
    for (double v : d.density)
        if (!std::isnan(v))
            CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("density is positive and independent of the thread schedule")
{
    const CurveData c = curve_from_tau(tau_from_m(-1.0));
    const MSGrid g = ms_grid(generic, c, 16, 2.0 * grid_cell(c.lattice, 16));
    const DensityField a = kahler_density(g);
    const DensityField b = kahler_density_serial(g);
    CHECK(a.available > 200);
    CHECK(a.available == b.available);
    for (std::size_t i = 0; i < a.density.size(); ++i) {
        if (std::isnan(a.density[i])) {
            CHECK(std::isnan(b.density[i]));
            continue;
        }
        CHECK(std::memcmp(&a.density[i], &b.density[i], sizeof(double)) == 0);
        CHECK(a.density[i] > 0.0);
    }
    const VolumeReport r = symplectic_volume(g);
    CHECK(r.density_periodicity < 1e-8);
    CHECK(r.rel_error < 0.1);
}

TEST_CASE("quadrature converges under refinement")
{
    const CurveData c = curve_from_tau(tau_from_m(-1.0));
    const auto rows = convergence_table(generic, c, {12, 16, 24}, 2.0);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        CHECK(row.convergence_ratio >= 0.95);
        CHECK(row.exclusion_radius == doctest::Approx(2.0 * grid_cell(c.lattice, row.N)));
    }
    CHECK(rows[2].rel_error < rows[0].rel_error);
    CHECK(rows[2].rel_error < 0.03);
}
