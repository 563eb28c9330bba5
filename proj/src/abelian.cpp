#include "abelfuchs/abelian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace abelfuchs {

CurvePoint u_to_curve_point(cplx u, cplx v, cplx m)
{
    if (!finite(u) || !finite(v) || !finite(m))
        throw DomainError("u_to_curve_point: non-finite input");
    if (std::abs(u - m) <= 1e-14 * (1.0 + std::abs(m)))
        throw SpinProximityError("u_to_curve_point: u = m maps to w_0");
    const cplx d = u - m;
    return {(m - m * u) / (m - u), m * (m - 1.0) * v / (d * d)};
}

UV curve_point_to_u(cplx z, cplx y, cplx m)
{
    if (!finite(z) || !finite(y) || !finite(m))
        throw DomainError("curve_point_to_u: non-finite input");
    if (std::abs(z - m) <= 1e-14 * (1.0 + std::abs(m)))
        throw DomainError("curve_point_to_u: z = m");
    const cplx d = z - m;
    return {m * (1.0 - z) / (m - z), m * (m - 1.0) * y / (d * d)};
}

cplx v_branch(cplx u, cplx m, int sign)
{
    const cplx v = std::sqrt(u * (u - 1.0) * (u - m));
    return sign >= 0 ? v : -v;
}

cplx u_to_xi(cplx u, int sign, const CurveData& curve)
{
    const cplx v = v_branch(u, curve.m, sign);
    auto [z, y] = u_to_curve_point(u, v, curve.m);
    const cplx x = abel_invert(z, y, curve);
    return curve.lattice.reduce_dual(x_to_xi(x, curve.lattice));
}

std::array<cplx, 4> spin_points(const Lattice& lat)
{
    const cplx l1 = lat.lambda_one(), lt = lat.lambda_tau();
    return {0.0, 0.5 * l1, 0.5 * (l1 + lt), 0.5 * lt};
}

double spin_exclusion_radius(const Lattice& lat) { return 0.02 * lat.min_dual_period(); }

double spin_distance(cplx xi, const Lattice& lat, int* nearest_class)
{
    const cplx l1 = lat.lambda_one(), lt = lat.lambda_tau();
    const auto g = spin_points(lat);
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < 4; ++c) {
        const cplx r = lat.reduce_dual(xi - g[c]);
        for (int a = -1; a <= 1; ++a) {
            for (int b = -1; b <= 1; ++b) {
                double d = std::abs(r - double(a) * l1 - double(b) * lt);
                if (d < best) {
                    best = d;
                    if (nearest_class)
                        *nearest_class = c;
                }
            }
        }
    }
    return best;
}

std::array<double, 4> spin_mus(const Weights& w)
{
    return {std::abs(1.0 - w.sum()),
            std::abs(w[0] + w[1] - w[2] - w[3]),
            std::abs(w[0] + w[2] - w[1] - w[3]),
            std::abs(w[0] - w[1] - w[2] + w[3])};
}

SpinPoint spin_mu(const Weights& w, int gamma_class, const Lattice* lat)
{
    if (gamma_class < 0 || gamma_class > 3)
        throw DomainError("spin_mu: class must be 0..3");
    static const char* labels[4] = {"m", "0", "1", "inf"};
    cplx g = 0.0;
    if (lat)
        g = spin_points(*lat)[gamma_class];
    return {gamma_class, g, spin_mus(w)[gamma_class], labels[gamma_class]};
}

namespace {

void check_spin(cplx xi, const Lattice& lat, double radius)
{
    if (!finite(xi))
        throw DomainError("non-finite xi");
    const double r = radius >= 0.0 ? radius : spin_exclusion_radius(lat);
    const double d = spin_distance(xi, lat);
    if (d < r || d < 1e-12)
        throw SpinProximityError("xi inside the spin-exclusion radius");
}

BetaCoefficients beta_unchecked(const Weights& w, cplx xi, const CurveData& curve)
{
    const Lattice& lat = curve.lattice;
    const cplx x = xi_to_x(xi, lat);
    const cplx th0 = lat.theta_at_zero()[1];
    const cplx tp = theta_value(2.0 * x, lat), tm = theta_value(-2.0 * x, lat);
    const double im_tau = lat.tau().imag();
    BetaCoefficients b;
    for (int i = 0; i < 4; ++i) {
        const cplx wi = curve.half_points[i];
        const cplx e = std::exp(-4.0 * pi * I * x * (wi.imag() / im_tau));
        const cplx q = theta_value(wi + x, lat) / theta_value(wi - x, lat);
        const double r = residue_sign[i] * w.hat(i);
        b.res_plus[i] = r * q / e;
        b.res_minus[i] = r * e / q;
        b.plus[i] = b.res_plus[i] * th0 / tp;
        b.minus[i] = b.res_minus[i] * th0 / tm;
    }
    return b;
}

} // namespace

BetaCoefficients beta_coefficients(const Weights& w, cplx xi, const CurveData& curve)
{
    check_spin(xi, curve.lattice, -1.0);
    return beta_unchecked(w, xi, curve);
}

AbelianConnection make_abelian_connection(const CurveData& curve, const Weights& w, cplx alpha, cplx xi,
                                          double exclusion_radius)
{
    if (!finite(alpha))
        throw DomainError("make_abelian_connection: non-finite alpha");
    check_spin(xi, curve.lattice, exclusion_radius);
    return {curve, w, alpha, xi, beta_unchecked(w, xi, curve)};
}

BetaValue beta_field(const AbelianConnection& conn, cplx w)
{
    const Lattice& lat = conn.curve.lattice;
    const cplx x2 = 2.0 * xi_to_x(conn.xi, lat);
    const double im_tau = lat.tau().imag();
    BetaValue out{0.0, 0.0};
    for (int i = 0; i < 4; ++i) {
        if (conn.beta.plus[i] == 0.0 && conn.beta.minus[i] == 0.0)
            continue;
        const cplx d = w - conn.curve.half_points[i];
        const cplx td = theta_value(d, lat);
        const cplx e = std::exp(2.0 * pi * I * x2 * (d.imag() / im_tau));
        out.plus += conn.beta.plus[i] * theta_value(d + x2, lat) / td * e;
        out.minus += conn.beta.minus[i] * theta_value(d - x2, lat) / td / e;
    }
    return out;
}

cplx quadratic_residue(const AbelianConnection& conn, int i, int points)
{
    if (i < 0 || i > 3)
        throw DomainError("quadratic_residue: index must be 0..3");
    const cplx tau = conn.curve.lattice.tau();
    const double r = 0.1 * std::min({0.5, 0.5 * std::abs(tau), 0.5 * std::abs(1.0 - tau), 0.5 * std::abs(1.0 + tau)});
    cplx acc = 0.0;
    for (int k = 0; k < points; ++k) {
        const cplx d = r * std::exp(I * (2.0 * pi * k / points));
        const auto b = beta_field(conn, conn.curve.half_points[i] + d);
        acc += d * d * b.plus * b.minus;
    }
    return acc / double(points);
}

FormCoeffs abelian_connection_form(const AbelianConnection& conn, cplx w)
{
    const Lattice& lat = conn.curve.lattice;
    if (lat.distance_to_lattice(2.0 * w) < 1e-13)
        throw DomainError("abelian_connection_form: evaluation at a pole");
    auto b = beta_field(conn, w);
    FormCoeffs f;
    f.dw << conn.alpha, b.minus, b.plus, -conn.alpha;
    f.dwbar << -conn.xi, 0.0, 0.0, conn.xi;
    return f;
}

cplx higgs_alpha_slope(cplx, cplx v, const CurveData& curve) { return slope_sign * 2.0 * v * curve.sqrt_p12; }

TorusLoops torus_loops(const CurveData& curve, double radius)
{
    const cplx tau = curve.lattice.tau();
    double half = std::numeric_limits<double>::infinity();
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b)
            if (a != 0 || b != 0)
                half = std::min(half, std::abs(0.5 * a + 0.5 * b * tau));
    const double r = radius > 0.0 ? radius : 0.2 * half;

    TorusLoops t;
    t.base_point = 0.25 * (1.0 + tau);
    const cplx p = t.base_point;
    t.a_cycle = {Segment::line(p, p + 1.0)};
    t.b_cycle = {Segment::line(p, p + tau)};
    for (int i = 0; i < 4; ++i) {
        const cplx wi = curve.half_points[i];
        const double phi = std::arg(p - wi);
        t.tails[i] = {Segment::line(p, wi + r * std::exp(I * phi))};
        t.circles[i] = {Segment::arc(wi, r, phi, phi + 2 * pi)};
    }

    std::vector<cplx> poles;
    for (int a = -2; a <= 3; ++a)
        for (int b = -2; b <= 3; ++b)
            poles.push_back(0.5 * a + 0.5 * b * tau);
    t.clearance = std::min(path_clearance(t.a_cycle, poles), path_clearance(t.b_cycle, poles));
    for (int i = 0; i < 4; ++i)
        t.clearance = std::min(t.clearance, path_clearance(t.tails[i], poles));
    if (t.clearance < 0.5 * r)
        throw DomainError("torus_loops: cycles pass too close to the poles");
    t.clearance = std::min(t.clearance, r);
    return t;
}

namespace {

Mat2 sl2_inv(const Mat2& m)
{
    Mat2 r;
    r << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return r / (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
}

} // namespace

MonodromyRep torus_monodromy(const AbelianConnection& conn, double clearance, const TransportOptions& opt)
{
    const TorusLoops loops = torus_loops(conn.curve, clearance);
    FormEvaluator form = [&conn](cplx w) { return abelian_connection_form(conn, w); };
    MonodromyRep rep;
    rep.kind = RepKind::torus;
    rep.base_point = loops.base_point;
    rep.integration_tolerance = opt.rtol;
    rep.clearance = loops.clearance;
    rep.labels = {"A", "B", "N0", "N1", "N2", "N3"};
    rep.generators.push_back(parallel_transport(form, loops.a_cycle, opt));
    rep.generators.push_back(parallel_transport(form, loops.b_cycle, opt));
    for (int i = 0; i < 4; ++i) {
        Mat2 t = parallel_transport(form, loops.tails[i], opt);
        Mat2 c = parallel_transport(form, loops.circles[i], opt);
        rep.generators.push_back(sl2_inv(t) * c * t);
    }
    return rep;
}

CycleMonodromy torus_cycles(const AbelianConnection& conn, std::span<const cplx> alphas,
                            const TransportOptions& opt)
{
    const TorusLoops loops = torus_loops(conn.curve);
    FormEvaluator form = [&conn](cplx w) {
        auto b = beta_field(conn, w);
        FormCoeffs f;
        f.dw << 0.0, b.minus, b.plus, 0.0;
        f.dwbar << -conn.xi, 0.0, 0.0, conn.xi;
        return f;
    };
    return {parallel_transport_shifted(form, loops.a_cycle, alphas, opt),
            parallel_transport_shifted(form, loops.b_cycle, alphas, opt)};
}

} // namespace abelfuchs
