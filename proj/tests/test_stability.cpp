#include <doctest.h>

#include "abelfuchs/stability.hpp"
#include "oracles.hpp"
#include "stability_oracle.hpp"

using namespace abelfuchs;

namespace {
std::mt19937_64 rng(303);
}

TEST_CASE("Biswas conditions on the documented examples")
{
    CHECK(biswas_admissible(Weights({0.25, 0.25, 0.25, 0.25})));
    CHECK_FALSE(biswas_admissible(Weights({0.45, 0.45, 0.45, 0.05})));
    CHECK(biswas_admissible(Weights({0.3, 0.25, 0.2, 0.15})));
    CHECK(biswas_admissible(Weights({0.2, 0.2, 0.2, 0.2})));
}

TEST_CASE("Biswas conditions are symmetric in the weights")
{
    for (int n = 0; n < 200; ++n) {
        std::array<double, 4> r;
        for (auto& x : r)
            x = oracle::uniform(rng, 0.01, 0.49);
        const bool b = biswas_admissible(Weights(r));
        std::array<double, 4> p{r[2], r[0], r[3], r[1]};
        CHECK(biswas_admissible(Weights(p)) == b);
    }
}

TEST_CASE("strata")
{
    const cplx m = 2.5;
    CHECK(stratum_of(0.0, m) == Stratum::zero);
    CHECK(stratum_of(1.0, m) == Stratum::one);
    CHECK(stratum_of(m, m) == Stratum::m);
    CHECK(stratum_of(0.3, m, true) == Stratum::infinity);
    CHECK(stratum_of({0.4, 0.3}, m) == Stratum::generic);
}

TEST_CASE("classification agrees with brute-force pdeg maximization")
{
    const cplx m{2.5, 0.0};
    int special = 0;
    for (int n = 0; n < 500; ++n) {
        std::array<double, 4> r;
        for (auto& x : r)
            x = oracle::uniform(rng, 0.01, 0.49);
        const Weights w(r);
        const int kind = n % 5;
        cplx u{oracle::uniform(rng, -2, 3), oracle::uniform(rng, -2, 2)};
        bool inf = false;
        if (kind == 1)
            u = 0.0;
        else if (kind == 2)
            u = 1.0;
        else if (kind == 3)
            u = m;
        else if (kind == 4)
            inf = true;
        special += kind != 0;
        const auto v = classify_parabolic_structure(w, u, m, inf);
        const auto bf = oracle::max_parabolic_degree(r, u, m, inf);
        CHECK(v.max_pdeg == doctest::Approx(bf.max_pdeg).epsilon(1e-12));
        CHECK(parabolic_degree(v.witness, w) == doctest::Approx(v.max_pdeg).epsilon(1e-12));
        const Verdict expect = bf.max_pdeg > 1e-12 ? Verdict::unstable
                               : bf.max_pdeg < -1e-12 ? Verdict::stable
                                                      : Verdict::strictly_semistable;
        CHECK(v.verdict == expect);
    }
    CHECK(special == 400);
}

TEST_CASE("generic u is stable exactly for Biswas-admissible weights")
{
    for (int n = 0; n < 300; ++n) {
        std::array<double, 4> r;
        for (auto& x : r)
            x = oracle::uniform(rng, 0.01, 0.49);
        const Weights w(r);
        const auto v = classify_parabolic_structure(w, {0.4, 0.3}, 2.5);
        if (std::abs(v.max_pdeg) < 1e-9)
            continue;
        CHECK((v.verdict == Verdict::stable) == biswas_admissible(w));
    }
}

TEST_CASE("parabolic degree of a witness")
{
    const Weights w({0.3, 0.25, 0.2, 0.15});
    LineBundleSpec s{-1, {true, true, false, false}};
    CHECK(parabolic_degree(s, w) == doctest::Approx(-1 + 0.3 + 0.25 - 0.2 - 0.15));
    // symmetric weights at u = m: the degree -1 bundle through all four flags has pdeg 0
    const auto v = classify_parabolic_structure(Weights({0.25, 0.25, 0.25, 0.25}), 2.5, 2.5);
    CHECK(v.verdict == Verdict::strictly_semistable);
}
