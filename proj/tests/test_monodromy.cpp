#include <doctest.h>

#include "abelfuchs/monodromy.hpp"
#include "oracles.hpp"

using namespace abelfuchs;

namespace {

std::mt19937_64 rng(404);

// exp(M) for traceless 2x2 M: cosh(μ) I + sinh(μ)/μ M, μ² = -det M
Mat2 expm_traceless(const Mat2& M)
{
    const cplx mu = std::sqrt(-M.determinant());
    const cplx c = std::cosh(mu), s = std::abs(mu) < 1e-8 ? cplx(1.0) + mu * mu / 6.0 : std::sinh(mu) / mu;
    return c * Mat2::Identity() + s * M;
}

Mat2 random_su2()
{
    cplx a{oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1)};
    cplx b{oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1)};
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    a /= n;
    b /= n;
    Mat2 g;
    g << a, -std::conj(b), b, std::conj(a);
    return g;
}

} // namespace

TEST_CASE("transport of a constant form is a matrix exponential")
{
    Mat2 P;
    P << cplx(0.3, 0.1), cplx(-0.7, 0.2), cplx(0.4, 0.0), cplx(-0.3, -0.1);
    FormEvaluator form = [&](cplx) { return FormCoeffs{P, Mat2::Zero()}; };
    const cplx a{0.1, 0.2}, b{1.3, -0.4};
    const Mat2 T = parallel_transport(form, {Segment::line(a, b)});
    CHECK((T - expm_traceless(-P * (b - a))).norm() < 1e-10);

    // dw̄ part: dΦ = -(Q conj(w')) Φ
    Mat2 Q;
    Q << cplx(0.2, -0.5), 0.0, 0.0, cplx(-0.2, 0.5);
    FormEvaluator f2 = [&](cplx) { return FormCoeffs{Mat2::Zero(), Q}; };
    const Mat2 T2 = parallel_transport(f2, {Segment::line(a, b)});
    CHECK((T2 - expm_traceless(-Q * std::conj(b - a))).norm() < 1e-10);
}

TEST_CASE("shifted transports match separate transports")
{
    Mat2 P;
    P << 0.0, cplx(0.3, 0.2), cplx(-0.5, 0.1), 0.0;
    FormEvaluator form = [&](cplx w) {
        Mat2 m = P * std::exp(w);
        return FormCoeffs{m, Mat2::Zero()};
    };
    const Path path{Segment::line(0.0, {1.0, 0.5}), Segment::arc(0.5, 0.6, 0.3, 2.0)};
    const cplx shifts[] = {0.0, {0.2, -0.1}, {-1.0, 0.4}};
    const auto batch = parallel_transport_shifted(form, path, shifts);
    for (int k = 0; k < 3; ++k) {
        const cplx s = shifts[k];
        FormEvaluator fk = [&](cplx w) {
            auto f = form(w);
            f.dw(0, 0) += s;
            f.dw(1, 1) -= s;
            return f;
        };
        CHECK((batch[k] - parallel_transport(fk, path)).norm() < 1e-9);
    }
}

TEST_CASE("sphere monodromy: local conjugacy classes and the product relation")
{
    for (int n = 0; n < 5; ++n) {
        const Weights w({oracle::uniform(rng, 0.05, 0.45), oracle::uniform(rng, 0.05, 0.45),
                         oracle::uniform(rng, 0.05, 0.45), oracle::uniform(rng, 0.05, 0.45)});
        const cplx m{oracle::uniform(rng, 1.5, 3.5), oracle::uniform(rng, -1.0, 1.0)};
        const cplx u{oracle::uniform(rng, 0.2, 0.8), oracle::uniform(rng, 0.2, 0.8)};
        const cplx lambda{oracle::uniform(rng, -0.5, 0.5), oracle::uniform(rng, -0.5, 0.5)};
        const auto rep = sphere_monodromy(make_system(w, m, u, lambda));
        REQUIRE(rep.generators.size() == 4);
        for (int i = 0; i < 4; ++i) {
            CHECK(std::abs(rep.generators[i].trace() - 2.0 * std::cos(2.0 * pi * w[i])) < 1e-7);
            CHECK(std::abs(rep.generators[i].determinant() - 1.0) < 1e-9);
        }
        CHECK(rep.relation_defect < 1e-7);
    }
}

TEST_CASE("sphere loops work for real m where straight lassos would cross punctures")
{
    const auto rep = sphere_monodromy(make_system(Weights({0.3, 0.25, 0.2, 0.15}), 2.5, {0.4, 0.3}, 0.0));
    CHECK(rep.relation_defect < 1e-8);
    CHECK(rep.product_order == std::array<int, 4>{0, 3, 1, 2});
    const auto loops = sphere_loops(2.5, 4.5);
    const cplx pts[] = {1.0, 0.0, 2.5};
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j)
            if (loops[k + 1].enclosed_puncture && *loops[k + 1].enclosed_puncture != j + 1) {
                const cplx p[] = {pts[j]};
                CHECK(path_clearance(loops[k + 1].path, p) > 0.05);
            }
}

TEST_CASE("invariant Hermitian form of a unitary representation")
{
    Mat2 g;
    g << cplx(1.0, 0.3), cplx(0.5, -0.2), cplx(0.1, 0.4), cplx(0.0, 0.0);
    g(1, 1) = (1.0 + g(0, 1) * g(1, 0)) / g(0, 0);
    MonodromyRep rep;
    for (int k = 0; k < 3; ++k)
        rep.generators.push_back(g * random_su2() * g.inverse());
    const auto h = invariant_hermitian_form(rep);
    REQUIRE(h);
    CHECK(h->definiteness == Definiteness::positive);
    CHECK(h->solution_dim == 1);
    // oracle: (g g^†)^{-1} up to scale
    Mat2 ref = (g * g.adjoint()).inverse();
    ref *= 2.0 / ref.trace().real();
    CHECK((h->H - ref).norm() < 1e-8);
    CHECK(is_irreducible(rep));
    CHECK(unitarizability_residual(rep) < 1e-8);
}

TEST_CASE("SL(2,R) representations have an indefinite form")
{
    auto real_sl2 = [](double a, double b, double c) {
        Mat2 m;
        m << a, b, c, (1.0 + b * c) / a;
        return m;
    };
    MonodromyRep rep;
    rep.generators = {real_sl2(2.0, 1.0, 0.5), real_sl2(0.7, -0.3, 1.2), real_sl2(1.5, 0.2, -0.4)};
    const auto h = invariant_hermitian_form(rep);
    REQUIRE(h);
    CHECK(h->definiteness == Definiteness::indefinite);
    CHECK(unitarizability_residual(rep) >= 1.0);
}

TEST_CASE("complex traces: no form and a large residual")
{
    MonodromyRep rep;
    Mat2 a, b;
    a << cplx(1.0, 0.5), 1.0, 0.0, 1.0 / cplx(1.0, 0.5);
    b << 1.0, 0.0, cplx(0.3, 0.2), 1.0;
    rep.generators = {a, b, a * b};
    CHECK_FALSE(invariant_hermitian_form(rep));
    CHECK(trace_residual(rep) > 0.1);
}

TEST_CASE("reducible representations are flagged")
{
    MonodromyRep rep;
    Mat2 a = Mat2::Zero(), b = Mat2::Zero();
    a(0, 0) = std::exp(I * 0.3);
    a(1, 1) = std::exp(-I * 0.3);
    b(0, 0) = std::exp(I * 1.1);
    b(1, 1) = std::exp(-I * 1.1);
    rep.generators = {a, b};
    CHECK_FALSE(is_irreducible(rep));
    const auto h = invariant_hermitian_form(rep);
    REQUIRE(h);
    CHECK(h->solution_dim == 2);
    CHECK(h->definiteness == Definiteness::positive);
}

TEST_CASE("Hermitian classification")
{
    Mat2 H;
    H << 2.0, 0.0, 0.0, 1.0;
    CHECK(classify_hermitian(H) == Definiteness::positive);
    CHECK(classify_hermitian(-H) == Definiteness::negative);
    H(1, 1) = -1.0;
    CHECK(classify_hermitian(H) == Definiteness::indefinite);
    H(1, 1) = 0.0;
    CHECK(classify_hermitian(H) == Definiteness::degenerate);
}
