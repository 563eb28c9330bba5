#include "abelfuchs/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "abelfuchs/ms_section.hpp"
#include "abelfuchs/stability.hpp"

namespace abelfuchs {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& g, double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }

cplx random_tau(Rng& g) { return {uniform(g, -0.5, 0.5), uniform(g, 0.6, 1.5)}; }

Weights random_weights(Rng& g)
{
    return Weights({uniform(g, 0.05, 0.45), uniform(g, 0.05, 0.45), uniform(g, 0.05, 0.45), uniform(g, 0.05, 0.45)});
}

cplx random_u(Rng& g, cplx m)
{
    for (;;) {
        cplx u{uniform(g, -1.0, 2.0), uniform(g, -1.0, 1.0)};
        if (std::abs(u) > 0.2 && std::abs(u - 1.0) > 0.2 && std::abs(u - m) > 0.2)
            return u;
    }
}

struct Suite {
    const char* name;
    double tol;
    std::function<void(Rng&, SuiteResult&)> run;
};

void note_max(SuiteResult& r, double v)
{
    r.max_residual = std::max(r.max_residual, std::isfinite(v) ? v : 1e300);
    ++r.cases;
}

const std::vector<Suite>& suites()
{
    static const std::vector<Suite> s = {
        {"theta_quasi_periodicity", 1e-10,
         [](Rng& g, SuiteResult& r) {
             for (int n = 0; n < 200; ++n) {
                 const Lattice lat(random_tau(g));
                 const cplx w{uniform(g, -1, 1), uniform(g, -1, 1)};
                 const cplx t = theta_value(w, lat), t1 = theta_value(w + 1.0, lat);
                 const cplx tt = theta_value(w + lat.tau(), lat), rhs = -t * std::exp(-2.0 * pi * I * w);
                 note_max(r, std::abs(t1 - t) / std::max(std::abs(t), std::abs(t1)));
                 note_max(r, std::abs(tt - rhs) / std::max(std::abs(tt), std::abs(rhs)));
             }
         }},
        {"wp_ode", 1e-10,
         [](Rng& g, SuiteResult& r) {
             for (int n = 0; n < 200; ++n) {
                 const CurveData c = curve_from_tau(Lattice(random_tau(g)));
                 const cplx w{uniform(g, -0.5, 0.5), uniform(g, -0.5, 0.5)};
                 if (c.lattice.distance_to_lattice(w) < 0.05)
                     continue;
                 const auto [p, dp] = wp_eval(w, c.lattice);
                 const cplx rhs = 4.0 * p * p * p - c.g2 * p - c.g3;
                 note_max(r, std::abs(dp * dp - rhs) / std::max({std::abs(dp * dp), std::abs(4.0 * p * p * p), 1.0}));
             }
         }},
        {"tau_m_roundtrip", 1e-10,
         [](Rng& g, SuiteResult& r) {
             for (int n = 0; n < 40; ++n) {
                 const cplx m{uniform(g, -3, 3), uniform(g, -3, 3)};
                 if (std::abs(m) < 0.1 || std::abs(m - 1.0) < 0.1)
                     continue;
                 const CurveData c = curve_from_tau(tau_from_m(m));
                 note_max(r, std::abs(c.m - m) / std::max(1.0, std::abs(m)));
             }
         }},
        {"abel_roundtrip", 1e-9,
         [](Rng& g, SuiteResult& r) {
             for (int n = 0; n < 40; ++n) {
                 const CurveData c = curve_from_tau(Lattice(random_tau(g)));
                 const cplx w = c.lattice.reduce({uniform(g, -0.5, 0.5), uniform(g, -0.5, 0.5)});
                 if (c.lattice.distance_to_lattice(2.0 * w) < 0.05)
                     continue;
                 const auto [z, y] = curve_coords(w, c);
                 const cplx back = abel_invert(z, y, c);
                 note_max(r, c.lattice.distance_to_lattice(back - w));
             }
         }},
        {"stability_consistency", 0.0,
         [](Rng& g, SuiteResult& r) {
             // generic u is stable exactly when the Biswas conditions hold
             for (int n = 0; n < 300; ++n) {
                 const Weights w = random_weights(g);
                 const cplx m = 2.5, u{0.4, 0.3};
                 const bool stable = classify_parabolic_structure(w, u, m).verdict == Verdict::stable;
                 const double pdeg = classify_parabolic_structure(w, u, m).max_pdeg;
                 if (std::abs(pdeg) < 1e-9)
                     continue;
                 note_max(r, stable == biswas_admissible(w) ? 0.0 : 1.0);
             }
         }},
        {"sphere_local_monodromy", 1e-7,
         [](Rng& g, SuiteResult& r) {
             for (int n = 0; n < 4; ++n) {
                 const Weights w = random_weights(g);
                 const cplx m{uniform(g, 1.5, 3.0), uniform(g, -0.5, 0.5)};
                 const cplx u = random_u(g, m), lambda{uniform(g, -0.5, 0.5), uniform(g, -0.5, 0.5)};
                 const MonodromyRep rep = sphere_monodromy(make_system(w, m, u, lambda));
                 for (int i = 0; i < 4; ++i)
                     note_max(r, std::abs(rep.generators[i].trace() - 2.0 * std::cos(2.0 * pi * w[i])));
                 note_max(r, rep.relation_defect);
             }
         }},
        {"torus_local_monodromy", 1e-6,
         [](Rng& g, SuiteResult& r) {
             for (int n = 0; n < 3; ++n) {
                 const Weights w = random_weights(g);
                 const CurveData c = curve_from_tau(Lattice(random_tau(g)));
                 const cplx xi = 0.3 * c.lattice.lambda_one() + 0.2 * c.lattice.lambda_tau();
                 const auto conn = make_abelian_connection(c, w, {uniform(g, -1, 1), uniform(g, -1, 1)}, xi);
                 const MonodromyRep rep = torus_monodromy(conn);
                 for (int i = 0; i < 4; ++i)
                     note_max(r, std::abs(rep.generators[2 + i].trace() - 2.0 * std::cos(2.0 * pi * w.hat(i))));
             }
         }},
        {"quadratic_residues", 1e-9,
         [](Rng& g, SuiteResult& r) {
             for (int n = 0; n < 10; ++n) {
                 const Weights w = random_weights(g);
                 const CurveData c = curve_from_tau(Lattice(random_tau(g)));
                 const cplx xi = uniform(g, 0.1, 0.4) * c.lattice.lambda_one() +
                                 uniform(g, 0.1, 0.4) * c.lattice.lambda_tau();
                 const auto conn = make_abelian_connection(c, w, 0.0, xi);
                 for (int i = 0; i < 4; ++i) {
                     const double h = w.hat(i);
                     note_max(r, std::abs(quadratic_residue(conn, i) - h * h) / std::max(h * h, 1e-3));
                 }
             }
         }},
        {"ms_symmetric_case", 1e-10,
         [](Rng& g, SuiteResult& r) {
             const Weights w({0.25, 0.25, 0.25, 0.25});
             const CurveData c = curve_from_tau(tau_from_m(2.5));
             for (int n = 0; n < 3; ++n) {
                 const cplx xi = uniform(g, 0.05, 0.45) * c.lattice.lambda_one() +
                                 uniform(g, 0.05, 0.45) * c.lattice.lambda_tau();
                 const MSSample s = solve_alpha_ms(w, c, xi, seed_from_spin_expansion(w, c, xi));
                 note_max(r, s.converged ? std::abs(s.alpha - std::conj(xi)) : 1.0);
             }
         }},
        {"ms_oddness", 1e-8,
         [](Rng& g, SuiteResult& r) {
             const Weights w({0.3, 0.25, 0.2, 0.15});
             const CurveData c = curve_from_tau(tau_from_m(2.5));
             for (int n = 0; n < 2; ++n) {
                 const cplx xi = uniform(g, 0.1, 0.4) * c.lattice.lambda_one() +
                                 uniform(g, 0.1, 0.4) * c.lattice.lambda_tau();
                 const MSSample a = solve_alpha_ms(w, c, xi, seed_from_spin_expansion(w, c, xi));
                 const MSSample b = solve_alpha_ms(w, c, -xi, seed_from_spin_expansion(w, c, -xi));
                 note_max(r, a.converged && b.converged ? std::abs(a.alpha + b.alpha) : 1.0);
             }
         }},
    };
    return s;
}

} // namespace

std::vector<std::string> selftest_suite_names()
{
    std::vector<std::string> names;
    for (const auto& s : suites())
        names.push_back(s.name);
    return names;
}

std::vector<SuiteResult> run_selftests(std::uint64_t seed, const std::vector<std::string>& only)
{
    std::vector<SuiteResult> out;
    for (size_t k = 0; k < suites().size(); ++k) {
        const Suite& s = suites()[k];
        if (!only.empty() && std::find(only.begin(), only.end(), s.name) == only.end())
            continue;
        Rng g(seed + 7919 * k);
        SuiteResult r;
        r.name = s.name;
        r.tolerance = s.tol;
        try {
            s.run(g, r);
            r.passed = r.cases > 0 && r.max_residual <= s.tol;
        } catch (const std::exception& e) {
            r.passed = false;
            r.note = e.what();
        }
        out.push_back(r);
    }
    return out;
}

} // namespace abelfuchs
