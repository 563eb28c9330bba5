#include "abelfuchs/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace abelfuchs {

Segment Segment::line(cplx from, cplx to)
{
    Segment s;
    s.kind = Kind::line;
    s.a = from;
    s.b = to;
    return s;
}

Segment Segment::arc(cplx center, double radius, double theta0, double theta1)
{
    Segment s;
    s.kind = Kind::arc;
    s.center = center;
    s.radius = radius;
    s.theta0 = theta0;
    s.theta1 = theta1;
    return s;
}

cplx Segment::point(double t) const
{
    if (kind == Kind::line)
        return a + t * (b - a);
    return center + radius * std::exp(I * (theta0 + t * (theta1 - theta0)));
}

cplx Segment::velocity(double t) const
{
    if (kind == Kind::line)
        return b - a;
    const double dth = theta1 - theta0;
    return I * dth * radius * std::exp(I * (theta0 + t * dth));
}

Segment Segment::reversed() const
{
    if (kind == Kind::line)
        return line(b, a);
    return arc(center, radius, theta1, theta0);
}

Path reversed(const Path& p)
{
    Path r;
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        r.push_back(it->reversed());
    return r;
}

double path_clearance(const Path& p, std::span<const cplx> points)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : p) {
        for (int i = 0; i <= 256; ++i) {
            cplx z = s.point(i / 256.0);
            for (cplx q : points)
                best = std::min(best, std::abs(z - q));
        }
    }
    return best;
}

namespace {

// Dormand–Prince 5(4)
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

struct Stage {
    Mat2 c;   // P w' + Q conj(w')
    cplx dw;  // w'
};

Stage eval_stage(const FormEvaluator& form, const Segment& seg, double t)
{
    const cplx w = seg.point(t);
    const cplx v = seg.velocity(t);
    FormCoeffs f = form(w);
    Stage s{f.dw * v + f.dwbar * std::conj(v), v};
    if (!s.c.allFinite())
        throw IntegrationError("transport: non-finite connection coefficient");
    return s;
}

} // namespace

std::vector<Mat2> parallel_transport_shifted(const FormEvaluator& form, const Path& path,
                                             std::span<const cplx> shifts, const TransportOptions& opt)
{
    const std::size_t n = shifts.size();
    std::vector<Mat2> y(n, Mat2::Identity());
    std::vector<Mat2> yn(n), ys(n);
    std::array<std::vector<Mat2>, 7> k;
    for (auto& v : k)
        v.resize(n);

    auto rhs = [&](const Stage& st, const std::vector<Mat2>& state, std::vector<Mat2>& out) {
        for (std::size_t j = 0; j < n; ++j) {
            Mat2 a = st.c;
            a(0, 0) += shifts[j] * st.dw;
            a(1, 1) -= shifts[j] * st.dw;
            out[j].noalias() = -a * state[j];
        }
    };

    long steps = 0;
    double h = 0.05;
    for (const auto& seg : path) {
        double t = 0.0;
        rhs(eval_stage(form, seg, 0.0), y, k[0]);
        while (t < 1.0) {
            if (++steps > opt.max_steps)
                throw IntegrationError("transport: step budget exhausted");
            h = std::min(h, 1.0 - t);
            if (h < 1e-13)
                throw IntegrationError("transport: step size underflow");

            for (std::size_t j = 0; j < n; ++j)
                ys[j] = y[j] + h * (a21 * k[0][j]);
            rhs(eval_stage(form, seg, t + c2 * h), ys, k[1]);
            for (std::size_t j = 0; j < n; ++j)
                ys[j] = y[j] + h * (a31 * k[0][j] + a32 * k[1][j]);
            rhs(eval_stage(form, seg, t + c3 * h), ys, k[2]);
            for (std::size_t j = 0; j < n; ++j)
                ys[j] = y[j] + h * (a41 * k[0][j] + a42 * k[1][j] + a43 * k[2][j]);
            rhs(eval_stage(form, seg, t + c4 * h), ys, k[3]);
            for (std::size_t j = 0; j < n; ++j)
                ys[j] = y[j] + h * (a51 * k[0][j] + a52 * k[1][j] + a53 * k[2][j] + a54 * k[3][j]);
            rhs(eval_stage(form, seg, t + c5 * h), ys, k[4]);
            for (std::size_t j = 0; j < n; ++j)
                ys[j] = y[j] + h * (a61 * k[0][j] + a62 * k[1][j] + a63 * k[2][j] + a64 * k[3][j] + a65 * k[4][j]);
            rhs(eval_stage(form, seg, t + h), ys, k[5]);
            for (std::size_t j = 0; j < n; ++j)
                yn[j] = y[j] + h * (b1 * k[0][j] + b3 * k[2][j] + b4 * k[3][j] + b5 * k[4][j] + b6 * k[5][j]);
            const Stage last = eval_stage(form, seg, t + h);
            rhs(last, yn, k[6]);

            double err = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                Mat2 e = h * (e1 * k[0][j] + e3 * k[2][j] + e4 * k[3][j] + e5 * k[4][j] + e6 * k[5][j] + e7 * k[6][j]);
                double sc = opt.atol + opt.rtol * std::max(max_abs(y[j]), max_abs(yn[j]));
                err = std::max(err, max_abs(e) / sc);
            }
            if (!std::isfinite(err))
                throw IntegrationError("transport: non-finite error estimate");

            if (err <= 1.0) {
                t += h;
                std::swap(y, yn);
                std::swap(k[0], k[6]);
                h *= err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
            } else {
                h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            }
        }
    }
    return y;
}

Mat2 parallel_transport(const FormEvaluator& form, const Path& path, const TransportOptions& opt)
{
    const cplx zero = 0.0;
    return parallel_transport_shifted(form, path, std::span<const cplx>(&zero, 1), opt).front();
}

namespace {

Mat2 sl2_inverse(const Mat2& m)
{
    Mat2 r;
    r << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return r / (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
}

} // namespace

std::vector<LoopSpec> sphere_loops(cplx m, cplx base)
{
    const std::array<cplx, 3> finite_pts{1.0, 0.0, m};
    double dmin = std::min({std::abs(m), std::abs(m - 1.0), 1.0});
    const double R = std::abs(base);
    const double phi_base = std::arg(base);
    for (cplx p : finite_pts)
        if (std::abs(p) > R - 0.5 * dmin)
            throw DomainError("sphere_loops: base point too close to the punctures");
    const double r = 0.2 * dmin;

    // Parallel tails never cross, so the lassos form a standard generating set.
    auto ray_clearance = [&](double phi) {
        const cplx d = std::exp(I * phi);
        double c = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 3; ++k) {
            for (int j = 0; j < 3; ++j) {
                if (j == k)
                    continue;
                cplx rel = finite_pts[j] - finite_pts[k];
                double s = std::max(0.0, std::real(std::conj(d) * rel));
                c = std::min(c, std::abs(rel - s * d));
            }
        }
        return c;
    };
    double phi = pi / 2;
    if (ray_clearance(phi) < 0.3 * dmin) {
        double best = -1.0;
        for (int j = 1; j < 24; ++j) {
            for (int sgn : {1, -1}) {
                double cand = pi / 2 + sgn * j * pi / 24;
                double c = ray_clearance(cand);
                if (c > best + 1e-12) {
                    best = c;
                    phi = cand;
                }
            }
            if (best >= 0.3 * dmin)
                break;
        }
    }
    const cplx d = std::exp(I * phi);

    std::vector<LoopSpec> loops(4);
    loops[0] = {base, {Segment::arc(0.0, R, phi_base, phi_base - 2 * pi)}, 0};
    for (int k = 0; k < 3; ++k) {
        const cplx zk = finite_pts[k];
        const double b = std::real(std::conj(d) * zk);
        const double s = -b + std::sqrt(b * b - (std::norm(zk) - R * R));
        const cplx q = zk + s * d;
        double th = std::arg(q) - phi_base;
        th -= 2 * pi * std::floor(th / (2 * pi));
        Path tail{Segment::arc(0.0, R, phi_base, phi_base + th), Segment::line(q, zk + r * d)};
        Path loop = tail;
        loop.push_back(Segment::arc(zk, r, phi, phi + 2 * pi));
        for (const auto& sg : reversed(tail))
            loop.push_back(sg);
        loops[k + 1] = {base, loop, k + 1};
    }
    return loops;
}

MonodromyRep sphere_monodromy(const FuchsianSystem& sys, const SphereLoopOptions& opt)
{
    const cplx base = opt.base_point.value_or(cplx(2.0 + std::abs(sys.m), 0.0));
    auto loops = sphere_loops(sys.m, base);
    FormEvaluator form = [&sys](cplx z) { return FormCoeffs{connection_form(sys, z), Mat2::Zero()}; };

    MonodromyRep rep;
    rep.kind = RepKind::sphere;
    rep.base_point = base;
    rep.integration_tolerance = opt.transport.rtol;
    rep.labels = {"M0", "M1", "M2", "M3"};
    const std::array<cplx, 3> pts{1.0, 0.0, sys.m};
    rep.clearance = std::numeric_limits<double>::infinity();

    rep.generators.push_back(parallel_transport(form, loops[0].path, opt.transport));
    rep.clearance = std::min(rep.clearance, path_clearance(loops[0].path, pts));
    for (int k = 1; k < 4; ++k) {
        const Path& full = loops[k].path;
        Path tail(full.begin(), full.begin() + 2);
        Path circle(full.begin() + 2, full.begin() + 3);
        Mat2 t = parallel_transport(form, tail, opt.transport);
        Mat2 c = parallel_transport(form, circle, opt.transport);
        rep.generators.push_back(sl2_inverse(t) * c * t);
        rep.clearance = std::min(rep.clearance, path_clearance(full, pts));
    }

    std::array<int, 4> order{0, 1, 2, 3};
    rep.relation_defect = std::numeric_limits<double>::infinity();
    do {
        Mat2 p = rep.generators[order[0]] * rep.generators[order[1]] * rep.generators[order[2]]
            * rep.generators[order[3]];
        double defect = max_abs(p - Mat2::Identity());
        if (defect < rep.relation_defect) {
            rep.relation_defect = defect;
            rep.product_order = order;
        }
    } while (std::next_permutation(order.begin() + 1, order.end()));
    return rep;
}

const char* to_string(Definiteness d)
{
    switch (d) {
    case Definiteness::positive: return "positive";
    case Definiteness::negative: return "negative";
    case Definiteness::indefinite: return "indefinite";
    case Definiteness::degenerate: return "degenerate";
    }
    return "?";
}

namespace {

std::array<double, 2> hermitian_eigenvalues(const Mat2& H)
{
    const double a = H(0, 0).real(), d = H(1, 1).real();
    const double rad = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(H(0, 1)));
    return {0.5 * (a + d) - rad, 0.5 * (a + d) + rad};
}

} // namespace

Definiteness classify_hermitian(const Mat2& H, double tol)
{
    auto [lo, hi] = hermitian_eigenvalues(H);
    const double scale = std::max(std::abs(lo), std::abs(hi));
    if (scale == 0.0)
        return Definiteness::degenerate;
    if (lo > tol * scale)
        return Definiteness::positive;
    if (hi < -tol * scale)
        return Definiteness::negative;
    if (lo < -tol * scale && hi > tol * scale)
        return Definiteness::indefinite;
    return Definiteness::degenerate;
}

std::optional<HermitianForm> invariant_hermitian_form(const MonodromyRep& rep)
{
    std::array<Mat2, 4> basis;
    basis[0] << 1.0, 0.0, 0.0, 0.0;
    basis[1] << 0.0, 1.0, 1.0, 0.0;
    basis[2] << 0.0, I, -I, 0.0;
    basis[3] << 0.0, 0.0, 0.0, 1.0;

    const int ng = int(rep.generators.size());
    Eigen::MatrixXd sys(8 * ng, 4);
    for (int g = 0; g < ng; ++g) {
        const Mat2& m = rep.generators[g];
        if (!m.allFinite())
            return std::nullopt;
        const double w = 1.0 / std::max(1.0, m.squaredNorm());
        for (int k = 0; k < 4; ++k) {
            Mat2 r = m.adjoint() * basis[k] * m - basis[k];
            for (int e = 0; e < 4; ++e) {
                sys(8 * g + 2 * e, k) = w * r(e / 2, e % 2).real();
                sys(8 * g + 2 * e + 1, k) = w * r(e / 2, e % 2).imag();
            }
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys, Eigen::ComputeFullV);
    const Eigen::Vector4d s = svd.singularValues();
    const Eigen::Matrix4d V = svd.matrixV();
    const double s0 = s(0);

    Eigen::Vector4d coeff;
    int dim;
    if (s0 == 0.0) {
        coeff << 1.0, 0.0, 0.0, 1.0;
        dim = 4;
    } else if (s(3) >= 1e-8 * s0) {
        return std::nullopt;
    } else if (s(2) > 1e-4 * s0) {
        coeff = V.col(3);
        dim = 1;
    } else if (s(2) < 1e-8 * s0) {
        dim = 1;
        while (dim < 4 && s(3 - dim) < 1e-8 * s0)
            ++dim;
        const Eigen::Vector4d id(1.0, 0.0, 0.0, 1.0);
        coeff.setZero();
        for (int j = 4 - dim; j < 4; ++j)
            coeff += V.col(j).dot(id) * V.col(j);
    } else {
        return std::nullopt; // no clear gap
    }

    Mat2 H = Mat2::Zero();
    for (int k = 0; k < 4; ++k)
        H += coeff(k) * basis[k];
    Definiteness def = classify_hermitian(H);
    if (def == Definiteness::negative) {
        H = -H;
        def = Definiteness::positive;
    }
    if (def == Definiteness::positive)
        H *= 2.0 / H.trace().real();
    else
        H /= std::max(std::abs(hermitian_eigenvalues(H)[0]), std::abs(hermitian_eigenvalues(H)[1]));
    return HermitianForm{H, def, dim};
}

bool is_irreducible(const MonodromyRep& rep)
{
    constexpr double tol = 1e-8;
    auto collinear = [](const Vec2& a, const Vec2& b) {
        const double na = a.norm(), nb = b.norm();
        if (na == 0.0 || nb == 0.0)
            return true;
        return std::abs(a(0) * b(1) - a(1) * b(0)) <= tol * na * nb;
    };

    std::vector<Vec2> cands;
    for (const auto& g : rep.generators) {
        const cplx half = 0.5 * g.trace();
        Mat2 n = g - half * Mat2::Identity();
        if (max_abs(n) <= tol * std::max(1.0, max_abs(g)))
            continue;
        // eigenvectors of g are kernels of n ∓ sqrt(-det n)
        const cplx mu = std::sqrt(-n.determinant());
        for (cplx e : {mu, -mu}) {
            Mat2 k = n - e * Mat2::Identity();
            Vec2 v(-k(0, 1), k(0, 0));
            if (v.norm() < std::abs(k(1, 0)) + std::abs(k(1, 1)))
                v = Vec2(-k(1, 1), k(1, 0));
            if (v.norm() > 0.0)
                cands.push_back(v);
        }
        break;
    }
    if (cands.empty())
        return false; // all generators scalar
    for (const auto& v : cands) {
        bool common = true;
        for (const auto& g : rep.generators)
            if (!collinear(v, g * v)) {
                common = false;
                break;
            }
        if (common)
            return false;
    }
    return true;
}

double trace_residual(const MonodromyRep& rep)
{
    const auto& g = rep.generators;
    if (rep.kind == RepKind::torus)
        return std::hypot(g[0].trace().imag(), g[1].trace().imag(), (g[0] * g[1]).trace().imag());
    return std::hypot((g[0] * g[1]).trace().imag(), (g[0] * g[2]).trace().imag(), (g[1] * g[2]).trace().imag());
}

double unitarizability_residual(const MonodromyRep& rep)
{
    const double r = trace_residual(rep);
    if (r >= 1e-6)
        return r;
    auto form = invariant_hermitian_form(rep);
    if (!form)
        return r + 1.0;
    if (form->definiteness == Definiteness::positive)
        return r;
    auto ev = hermitian_eigenvalues(form->H);
    const double scale = std::max(std::abs(ev[0]), std::abs(ev[1]));
    return r + 1.0 + (scale > 0.0 ? std::min(std::abs(ev[0]), std::abs(ev[1])) / scale : 0.0);
}

} // namespace abelfuchs
