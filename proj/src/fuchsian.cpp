#include "abelfuchs/fuchsian.hpp"

#include <cmath>

namespace abelfuchs {

Weights::Weights(std::array<double, 4> r) : rho(r)
{
    for (double x : rho)
        if (!(x > 0.0 && x < 0.5))
            throw DomainError("weights must lie in (0, 1/2)");
}

MatrixQuad residue_matrices(const Weights& w, cplx u)
{
    if (!finite(u))
        throw DomainError("residue_matrices: non-finite u");
    const double r = w.rho_offset();
    const double r1 = w[1], r2 = w[2], r3 = w[3];
    MatrixQuad a;
    a[1] << -r1 - r, 2.0 * r1 + r,
            -r, r1 + r;
    a[2] << -r2, 0.0,
            r, r2;
    a[3] << -r3, 2.0 * r3 * u,
            0.0, r3;
    a[0] = -a[1] - a[2] - a[3];
    return a;
}

HiggsField higgs_matrices(cplx u)
{
    if (!finite(u))
        throw DomainError("higgs_matrices: non-finite u");
    HiggsField h;
    h.u = u;
    h.psi[1] << u, -u,
                u, -u;
    h.psi[2] << 0.0, 0.0,
                1.0 - u, 0.0;
    h.psi[3] << -u, u * u,
                -1.0, u;
    h.psi[0] = -h.psi[1] - h.psi[2] - h.psi[3];
    return h;
}

FuchsianSystem make_system(const Weights& w, cplx m, cplx u, cplx lambda)
{
    if (!finite(m) || !finite(lambda))
        throw DomainError("make_system: non-finite input");
    auto a = residue_matrices(w, u);
    auto h = higgs_matrices(u);
    FuchsianSystem s{w, m, u, lambda, {}};
    for (int i = 0; i < 4; ++i)
        s.A[i] = a[i] + lambda * h.psi[i];
    return s;
}

Mat2 connection_form(const FuchsianSystem& sys, cplx z)
{
    if (z == 0.0 || z == 1.0 || z == sys.m)
        throw DomainError("connection_form: evaluation at a puncture");
    return sys.A[1] / (z - 1.0) + sys.A[2] / z + sys.A[3] / (z - sys.m);
}

Vec2 normalize_projective(const Vec2& v)
{
    const int k = std::abs(v(0)) >= std::abs(v(1)) ? 0 : 1;
    if (std::abs(v(k)) == 0.0)
        throw DomainError("projective point with zero representative");
    const cplx phase = std::abs(v(k)) / v(k);
    Vec2 r = v * phase;
    return r / r.norm();
}

bool same_projective(const Vec2& a, const Vec2& b, double tol)
{
    const cplx det = a(0) * b(1) - a(1) * b(0);
    return std::abs(det) <= tol * a.norm() * b.norm();
}

namespace {
cplx bracket(const Vec2& p, const Vec2& q) { return p(0) * q(1) - p(1) * q(0); }
} // namespace

cplx cross_ratio(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d)
{
    return bracket(a, b) * bracket(d, c) / (bracket(a, d) * bracket(b, c));
}

Eigenlines eigenlines(cplx u)
{
    Eigenlines e;
    e.lines[0] = Vec2(1.0, 0.0);
    e.lines[1] = Vec2(1.0, 1.0);
    e.lines[2] = Vec2(0.0, 1.0);
    e.lines[3] = Vec2(u, 1.0);
    for (auto& l : e.lines)
        l = normalize_projective(l);
    e.cross_ratio = cross_ratio(e.lines[0], e.lines[1], e.lines[2], e.lines[3]);
    return e;
}

cplx higgs_determinant(cplx u, cplx m) { return u * (u - 1.0) * (m - u); }

EigenSections eigen_sections(cplx u, cplx v, cplx z, cplx y, cplx m)
{
    const cplx a = (m - 1.0) * u * z;
    const cplx b = -u * z + m * (u + z - 1.0);
    EigenSections s{Vec2(a - v * y, b), Vec2(a + v * y, b)};
    const double scale = std::abs(a) + std::abs(v * y) + std::abs(b) + 1e-300;
    if (s.plus.norm() <= 1e-14 * scale || s.minus.norm() <= 1e-14 * scale)
        throw DomainError("eigen_sections: section vanishes at this point");
    return s;
}

} // namespace abelfuchs
