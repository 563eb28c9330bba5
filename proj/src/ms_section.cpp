#include "abelfuchs/ms_section.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace abelfuchs {

const char* to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::diverged: return "diverged";
    case SolveStatus::sl2r: return "sl2r";
    case SolveStatus::no_form: return "no_form";
    case SolveStatus::spin: return "spin";
    }
    return "?";
}

cplx spin_pole_part(const Weights& w, const CurveData& curve, cplx xi)
{
    const Lattice& lat = curve.lattice;
    const cplx x = xi_to_x(xi, lat);
    const auto mu = spin_mus(w);
    cplx s = 0.0;
    for (int i = 0; i < 4; ++i) {
        if (mu[i] == 0.0)
            continue;
        const auto a = theta_jet(x - curve.half_points[i], lat);
        const auto b = theta_jet(-x - curve.half_points[i], lat);
        s += 0.5 * mu[i] * (a[1] / a[0] - b[1] / b[0]);
    }
    return s;
}

cplx seed_from_spin_expansion(const Weights& w, const CurveData& curve, cplx xi)
{
    if (!finite(xi))
        throw DomainError("seed_from_spin_expansion: non-finite xi");
    const auto mu = spin_mus(w);
    const double total = mu[0] + mu[1] + mu[2] + mu[3];
    return total * xi + (1.0 - total) * std::conj(xi) + spin_pole_part(w, curve, xi);
}

namespace {

struct TraceEval {
    // tr M_A, tr M_B, tr M_A M_B at α and their α-derivatives
    std::array<cplx, 3> t;
    std::array<cplx, 3> d;
};

TraceEval eval_traces(const AbelianConnection& conn, cplx alpha, double h, const TransportOptions& opt)
{
    const cplx shifts[3] = {alpha - h, alpha, alpha + h};
    const auto cyc = torus_cycles(conn, shifts, opt);
    TraceEval e;
    std::array<cplx, 3> tr[3];
    for (int k = 0; k < 3; ++k)
        tr[k] = {cyc.a[k].trace(), cyc.b[k].trace(), (cyc.a[k] * cyc.b[k]).trace()};
    for (int q = 0; q < 3; ++q) {
        e.t[q] = tr[1][q];
        e.d[q] = (tr[2][q] - tr[0][q]) / (2.0 * h);
    }
    return e;
}

double trace_norm(const TraceEval& e) { return std::hypot(e.t[0].imag(), e.t[1].imag(), e.t[2].imag()); }

} // namespace

MSSample solve_alpha_ms(const Weights& w, const CurveData& curve, cplx xi, cplx seed, const SolveOptions& opt)
{
    MSSample s;
    s.xi = xi;
    s.alpha = seed;
    if (!finite(seed))
        throw DomainError("solve_alpha_ms: non-finite seed");
    AbelianConnection conn = make_abelian_connection(curve, w, 0.0, xi, opt.exclusion_radius);

    cplx alpha = seed;
    cplx prev_alpha = seed, prev_step = 0.0;
    double prev_norm = std::numeric_limits<double>::infinity();
    double damping = 1.0;
    bool done = false;
    for (int it = 0; it < opt.max_iter; ++it) {
        s.iterations = it + 1;
        const double h = opt.fd_step * std::max(1.0, std::abs(alpha));
        TraceEval e;
        try {
            e = eval_traces(conn, alpha, h, opt.transport);
        } catch (const IntegrationError&) {
            e.t.fill(cplx(0.0, std::numeric_limits<double>::infinity()));
        }
        double norm = trace_norm(e);
        if (!std::isfinite(norm) || (norm > prev_norm && it > 0)) {
            // backtrack along the previous step
            damping *= 0.5;
            if (damping < 1.0 / 256.0)
                break;
            alpha = prev_alpha + damping * prev_step;
            continue;
        }
        const double scale = std::max({1.0, std::abs(e.t[0]), std::abs(e.t[1]), std::abs(e.t[2])});
        if (norm <= opt.newton_tol * scale) {
            done = true;
            break;
        }
        // Gauss-Newton on Im tr M_A = Im tr M_B = Im tr M_A M_B = 0; the third
        // condition follows from the first two except on lines where a real
        // symmetry makes them degenerate
        Eigen::Matrix<double, 3, 2> J;
        Eigen::Vector3d F;
        for (int q = 0; q < 3; ++q) {
            J(q, 0) = e.d[q].imag();
            J(q, 1) = e.d[q].real();
            F(q) = e.t[q].imag();
        }
        const Eigen::Vector2d d = J.colPivHouseholderQr().solve(-F);
        if (!d.allFinite())
            break;
        cplx step(d(0), d(1));
        // cap the step at the size of a dual period
        const double cap = 0.5 * curve.lattice.min_dual_period();
        if (std::abs(step) > cap)
            step *= cap / std::abs(step);
        prev_alpha = alpha;
        prev_step = step;
        prev_norm = norm;
        damping = 1.0;
        alpha += step;
        if (std::abs(step) <= 1e-14 * (1.0 + std::abs(alpha))) {
            done = true;
            break;
        }
    }
    s.alpha = alpha;
    (void)done;

    conn.alpha = alpha;
    MonodromyRep rep;
    try {
        rep = torus_monodromy(conn, -1.0, opt.transport);
    } catch (const IntegrationError&) {
        s.residual = std::numeric_limits<double>::infinity();
        s.status = SolveStatus::diverged;
        return s;
    }
    s.residual = unitarizability_residual(rep);
    if (trace_residual(rep) >= 1e-6 || !std::isfinite(s.residual)) {
        s.status = SolveStatus::diverged;
        return s;
    }
    s.hermitian_witness = invariant_hermitian_form(rep);
    s.irreducible = is_irreducible(rep);
    if (!s.hermitian_witness) {
        s.status = SolveStatus::no_form;
    } else if (s.hermitian_witness->definiteness != Definiteness::positive) {
        s.status = SolveStatus::sl2r;
    } else if (s.residual < 1e-6) {
        s.status = SolveStatus::converged;
        s.converged = true;
    }
    return s;
}

cplx MSGrid::xi_at(int j, int k) const
{
    const auto& lat = curve.lattice;
    return (-0.5 + double(j) / N) * lat.lambda_one() + (-0.5 + double(k) / N) * lat.lambda_tau();
}

namespace {

MSGrid grid_solve(const Weights& w, const CurveData& curve, int N, double exclusion_radius, const GridOptions& opt,
                  bool parallel)
{
    if (N < 8)
        throw DomainError("ms_grid: N must be at least 8");
    if (!(exclusion_radius > 0.0))
        throw DomainError("ms_grid: exclusion radius must be positive");
    MSGrid g(w, curve);
    g.N = N;
    g.exclusion_radius = exclusion_radius;
    g.rtol = opt.solve.transport.rtol;
    g.loop_convention = "base (1+tau)/4; A: p->p+1; B: p->p+tau; lassos with radius 0.2*min half-period";
    const int n1 = N + 1, total = n1 * n1;
    g.samples.resize(total);
    g.excluded.assign(total, 0);

    SolveOptions so = opt.solve;
    so.exclusion_radius = std::min(exclusion_radius, spin_exclusion_radius(curve.lattice));
    if (so.exclusion_radius <= 0.0)
        so.exclusion_radius = exclusion_radius;

    std::vector<double> dist(total);
    for (int j = 0; j < n1; ++j)
        for (int k = 0; k < n1; ++k) {
            const int i = g.index(j, k);
            g.samples[i].xi = g.xi_at(j, k);
            g.samples[i].status = SolveStatus::diverged;
            dist[i] = spin_distance(g.samples[i].xi, curve.lattice);
            if (dist[i] < exclusion_radius) {
                g.excluded[i] = 1;
                g.samples[i].status = SolveStatus::spin;
            }
        }

    std::vector<int> anchors;
    for (int i = 0; i < total; ++i)
        if (!g.excluded[i])
            anchors.push_back(i);
    if (anchors.empty())
        throw DomainError("ms_grid: every sample is inside an exclusion disk");
    std::stable_sort(anchors.begin(), anchors.end(), [&](int a, int b) { return dist[a] > dist[b]; });

    std::vector<char> solved(total, 0);
    auto solve_at = [&](int i, cplx seed) {
        MSSample s;
        try {
            s = solve_alpha_ms(w, curve, g.samples[i].xi, seed, so);
        } catch (const SpinProximityError&) {
            s.xi = g.samples[i].xi;
            s.alpha = seed;
            s.status = SolveStatus::spin;
        }
        return s;
    };

    int anchor = -1;
    for (size_t a = 0; a < anchors.size() && a < 10; ++a) {
        const int i = anchors[a];
        MSSample s = solve_at(i, seed_from_spin_expansion(w, curve, g.samples[i].xi));
        g.samples[i] = s;
        ++g.attempted_count;
        if (s.converged) {
            anchor = i;
            break;
        }
    }
    if (anchor < 0)
        throw ConvergenceError("ms_grid: no anchor sample converged", g.samples[anchors[0]].alpha);
    g.anchor = anchor;
    solved[anchor] = 1;
    g.solve_order.push_back(anchor);

    const int aj = anchor / n1, ak = anchor % n1;
    const int max_ring = std::max({aj, ak, N - aj, N - ak});
    for (int r = 1; r <= max_ring; ++r) {
        std::vector<int> ring;
        for (int j = std::max(0, aj - r); j <= std::min(N, aj + r); ++j)
            for (int k = std::max(0, ak - r); k <= std::min(N, ak + r); ++k)
                if (std::max(std::abs(j - aj), std::abs(k - ak)) == r && !g.excluded[g.index(j, k)])
                    ring.push_back(g.index(j, k));

        std::vector<MSSample> out(ring.size());
        auto work = [&](size_t q) {
            const int i = ring[q];
            const int j = i / n1, k = i % n1;
            const cplx xi = g.samples[i].xi;
            const cplx s_here = seed_from_spin_expansion(w, curve, xi);
            // nearest converged neighbour from an earlier ring
            int best = -1;
            double bd = std::numeric_limits<double>::infinity();
            for (int rad = 1; rad <= r && best < 0; ++rad)
                for (int jj = std::max(0, j - rad); jj <= std::min(N, j + rad); ++jj)
                    for (int kk = std::max(0, k - rad); kk <= std::min(N, k + rad); ++kk) {
                        const int n = g.index(jj, kk);
                        if (!solved[n] || !g.samples[n].converged)
                            continue;
                        const double d = std::abs(g.samples[n].xi - xi);
                        if (d < bd) {
                            bd = d;
                            best = n;
                        }
                    }
            MSSample s;
            if (best >= 0) {
                const MSSample& nb = g.samples[best];
                s = solve_at(i, nb.alpha + s_here - seed_from_spin_expansion(w, curve, nb.xi));
            }
            if (!s.converged)
                s = solve_at(i, s_here);
            out[q] = s;
        };
        if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
            for (long q = 0; q < long(ring.size()); ++q)
                work(size_t(q));
        } else {
            for (size_t q = 0; q < ring.size(); ++q)
                work(q);
        }
        for (size_t q = 0; q < ring.size(); ++q) {
            g.samples[ring[q]] = out[q];
            solved[ring[q]] = 1;
            g.solve_order.push_back(ring[q]);
            ++g.attempted_count;
        }
    }
    for (int i = 0; i < total; ++i)
        if (!g.excluded[i] && g.samples[i].converged)
            ++g.converged_count;
    return g;
}

} // namespace

MSGrid ms_grid(const Weights& w, const CurveData& curve, int N, double exclusion_radius, const GridOptions& opt)
{
    return grid_solve(w, curve, N, exclusion_radius, opt, opt.parallel);
}

MSGrid ms_grid_serial(const Weights& w, const CurveData& curve, int N, double exclusion_radius,
                      const GridOptions& opt)
{
    return grid_solve(w, curve, N, exclusion_radius, opt, false);
}

SymmetryReport verify_section_symmetries(const MSGrid& g)
{
    SymmetryReport r;
    const int N = g.N;
    const auto& lat = g.curve.lattice;
    const cplx l1 = lat.lambda_one(), lt = lat.lambda_tau();
    auto rem = [&](int j, int k) {
        const auto& s = g.samples[g.index(j, k)];
        return s.alpha - seed_from_spin_expansion(g.weights, g.curve, s.xi);
    };
    for (int k = 0; k <= N; ++k) {
        if (g.usable(0, k) && g.usable(N, k)) {
            const auto &a = g.samples[g.index(0, k)], &b = g.samples[g.index(N, k)];
            r.shift_one = std::max(r.shift_one, std::abs(b.alpha - a.alpha - l1));
            r.remainder_period = std::max(r.remainder_period, std::abs(rem(N, k) - rem(0, k)));
            ++r.pairs;
        }
    }
    for (int j = 0; j <= N; ++j) {
        if (g.usable(j, 0) && g.usable(j, N)) {
            const auto &a = g.samples[g.index(j, 0)], &b = g.samples[g.index(j, N)];
            r.shift_tau = std::max(r.shift_tau, std::abs(b.alpha - a.alpha - std::conj(lt)));
            r.remainder_period = std::max(r.remainder_period, std::abs(rem(j, N) - rem(j, 0)));
            ++r.pairs;
        }
    }
    for (int j = 0; j <= N; ++j)
        for (int k = 0; k <= N; ++k)
            if (g.usable(j, k) && g.usable(N - j, N - k)) {
                r.oddness = std::max(r.oddness, std::abs(g.samples[g.index(j, k)].alpha +
                                                         g.samples[g.index(N - j, N - k)].alpha));
                ++r.pairs;
            }
    return r;
}

namespace {

struct SphereEval {
    MonodromyRep rep;
    Eigen::Vector3d r;    // Im tr(M_0M_1), Im tr(M_0M_2), Im tr(M_1M_2)
    double scale = 1.0;
};

SphereEval sphere_eval(const Weights& w, cplx m, cplx u, cplx lambda, const SolveOptions& opt)
{
    SphereLoopOptions lo;
    lo.transport = opt.transport;
    SphereEval e;
    e.rep = sphere_monodromy(make_system(w, m, u, lambda), lo);
    const auto& g = e.rep.generators;
    const cplx t[3] = {(g[0] * g[1]).trace(), (g[0] * g[2]).trace(), (g[1] * g[2]).trace()};
    for (int i = 0; i < 3; ++i) {
        e.r(i) = t[i].imag();
        e.scale = std::max(e.scale, std::abs(t[i]));
    }
    return e;
}

} // namespace

SphereSolve sphere_side_solve(const Weights& w, cplx m, cplx u, cplx seed_lambda, const SolveOptions& opt)
{
    SphereSolve out;
    cplx lambda = seed_lambda;
    SphereEval e = sphere_eval(w, m, u, lambda, opt);
    for (int it = 0; it < opt.max_iter; ++it) {
        out.iterations = it + 1;
        const double norm = e.r.norm();
        if (norm <= opt.newton_tol * e.scale)
            break;
        const double h = opt.fd_step * std::max(1.0, std::abs(lambda));
        const SphereEval p = sphere_eval(w, m, u, lambda + h, opt);
        const SphereEval q = sphere_eval(w, m, u, lambda - h, opt);
        const SphereEval pi_ = sphere_eval(w, m, u, lambda + I * h, opt);
        const SphereEval qi = sphere_eval(w, m, u, lambda - I * h, opt);
        Eigen::Matrix<double, 3, 2> J;
        J.col(0) = (p.r - q.r) / (2.0 * h);
        J.col(1) = (pi_.r - qi.r) / (2.0 * h);
        const Eigen::Vector2d d = J.colPivHouseholderQr().solve(-e.r);
        if (!d.allFinite())
            break;
        cplx step(d(0), d(1));
        double t = 1.0;
        SphereEval trial;
        for (; t > 1.0 / 256.0; t *= 0.5) {
            trial = sphere_eval(w, m, u, lambda + t * step, opt);
            if (trial.r.norm() < norm)
                break;
        }
        if (t <= 1.0 / 256.0)
            break;
        lambda += t * step;
        e = trial;
        if (std::abs(t * step) <= 1e-14 * (1.0 + std::abs(lambda)))
            break;
    }
    out.lambda = lambda;
    out.rep = e.rep;
    out.residual = unitarizability_residual(e.rep);
    out.witness = invariant_hermitian_form(e.rep);
    out.converged = out.residual < 1e-6 && out.witness && out.witness->definiteness == Definiteness::positive;
    return out;
}

SphereSolve sphere_ms_search(const Weights& w, cplx m, cplx u, const SolveOptions& opt, double half_width, int n,
                             int starts)
{
    if (n < 3 || starts < 1)
        throw DomainError("sphere_ms_search: need n >= 3 and starts >= 1");
    SolveOptions coarse = opt;
    coarse.transport.rtol = std::max(opt.transport.rtol, 1e-8);
    auto lam = [&](int a, int b) { return cplx(-half_width + 2.0 * half_width * a / (n - 1), -half_width + 2.0 * half_width * b / (n - 1)); };
    std::vector<double> f(n * n);
#pragma omp parallel for collapse(2) schedule(dynamic)
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const auto& g = sphere_eval(w, m, u, lam(a, b), coarse).rep.generators;
            double v = 0.0;
            for (const cplx t : {(g[0] * g[1]).trace(), (g[0] * g[2]).trace(), (g[1] * g[2]).trace()})
                v += std::abs(t.imag()) + std::max(0.0, std::abs(t.real()) - 2.0);
            f[a * n + b] = std::isfinite(v) ? v : 1e300;
        }
    std::vector<int> minima;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            bool low = true;
            for (int da = -1; da <= 1 && low; ++da)
                for (int db = -1; db <= 1 && low; ++db) {
                    const int x = a + da, y = b + db;
                    if ((da || db) && x >= 0 && y >= 0 && x < n && y < n && f[x * n + y] < f[a * n + b])
                        low = false;
                }
            if (low)
                minima.push_back(a * n + b);
        }
    std::sort(minima.begin(), minima.end(), [&](int x, int y) { return f[x] < f[y]; });
    SphereSolve best;
    best.residual = std::numeric_limits<double>::infinity();
    for (int i = 0; i < std::min<int>(starts, int(minima.size())); ++i) {
        SphereSolve s = sphere_side_solve(w, m, u, lam(minima[i] / n, minima[i] % n), opt);
        if (s.converged)
            return s;
        if (s.residual < best.residual)
            best = s;
    }
    return best;
}

} // namespace abelfuchs

namespace abelfuchs {

SpinResidueFit fit_spin_residue(const Weights& w, const CurveData& curve, int gamma_class, const SolveOptions& opt,
                                int rays, int radii)
{
    if (gamma_class < 0 || gamma_class > 3)
        throw DomainError("fit_spin_residue: class must be 0..3");
    if (rays < 4 || radii < 2)
        throw DomainError("fit_spin_residue: need at least 4 rays and 2 radii");
    const Lattice& lat = curve.lattice;
    const cplx gamma = spin_points(lat)[gamma_class];
    const double L = lat.min_dual_period();
    const double r_in = 0.005 * L, r_out = 0.03 * L;
    SolveOptions so = opt;
    so.exclusion_radius = 0.5 * r_in;

    std::vector<cplx> zs, as;
    for (int a = 0; a < rays; ++a) {
        const double phi = 2.0 * pi * (a + 0.5) / rays;
        const cplx dir = std::exp(I * phi);
        cplx prev_xi = 0.0, prev_alpha = 0.0;
        bool have_prev = false;
        for (int b = 0; b < radii; ++b) {
            const double eps = r_out + (r_in - r_out) * double(b) / (radii - 1);
            const cplx xi = gamma + eps * dir;
            const cplx s_here = seed_from_spin_expansion(w, curve, xi);
            cplx seed = have_prev ? prev_alpha + s_here - seed_from_spin_expansion(w, curve, prev_xi) : s_here;
            MSSample s = solve_alpha_ms(w, curve, xi, seed, so);
            if (!s.converged && have_prev)
                s = solve_alpha_ms(w, curve, xi, s_here, so);
            if (!s.converged)
                break;
            zs.push_back(eps * dir);
            as.push_back(s.alpha);
            prev_xi = xi;
            prev_alpha = s.alpha;
            have_prev = true;
        }
    }
    const int n = int(zs.size());
    constexpr int K = 7;
    if (n < 2 * K)
        throw ConvergenceError("fit_spin_residue: too few converged ray samples", cplx(n, 0));
    Eigen::MatrixXcd A(n, K);
    Eigen::VectorXcd rhs(n);
    for (int i = 0; i < n; ++i) {
        const cplx z = zs[i], zb = std::conj(z);
        A(i, 0) = 1.0 / z;
        A(i, 1) = 1.0;
        A(i, 2) = z;
        A(i, 3) = zb;
        A(i, 4) = z * z;
        A(i, 5) = z * zb;
        A(i, 6) = zb * zb;
        rhs(i) = as[i];
    }
    const Eigen::VectorXcd coef = A.colPivHouseholderQr().solve(rhs);
    SpinResidueFit f;
    f.gamma_class = gamma_class;
    f.coefficient = coef(0);
    f.expected = lat.xi_scale() * spin_mus(w)[gamma_class];
    f.fit_residual = (A * coef - rhs).cwiseAbs().maxCoeff();
    f.samples = n;
    return f;
}

} // namespace abelfuchs
