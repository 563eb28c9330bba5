#include "abelfuchs/stability.hpp"

#include <algorithm>
#include <numeric>

namespace abelfuchs {

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::stable: return "stable";
    case Verdict::strictly_semistable: return "strictly_semistable";
    case Verdict::unstable: return "unstable";
    }
    return "?";
}

Stratum stratum_of(cplx u, cplx m, bool u_at_infinity)
{
    constexpr double tol = 1e-9;
    if (u_at_infinity)
        return Stratum::infinity;
    if (std::abs(u) < tol)
        return Stratum::zero;
    if (std::abs(u - 1.0) < tol)
        return Stratum::one;
    if (std::abs(u - m) < tol)
        return Stratum::m;
    return Stratum::generic;
}

double parabolic_degree(const LineBundleSpec& spec, const Weights& w)
{
    double d = spec.degree;
    for (int i = 0; i < 4; ++i)
        d += spec.incidence[i] ? w[i] : -w[i];
    return d;
}

bool biswas_admissible(const Weights& w)
{
    std::array<int, 4> p{0, 1, 2, 3};
    do {
        const double three = w[p[0]] + w[p[1]] + w[p[2]];
        if (!(1.0 + w[p[3]] > three && three > w[p[3]]))
            return false;
    } while (std::next_permutation(p.begin(), p.end()));
    return true;
}

std::vector<LineBundleSpec> candidate_subbundles(Stratum s)
{
    // index whose eigenline coincides with E_3
    int pair = -1;
    if (s == Stratum::zero)
        pair = 2;
    else if (s == Stratum::one)
        pair = 1;
    else if (s == Stratum::infinity)
        pair = 0;

    std::vector<LineBundleSpec> out;
    out.push_back({0, {false, false, false, false}});
    for (int i = 0; i < 4; ++i) {
        LineBundleSpec c{0, {}};
        c.incidence[i] = true;
        out.push_back(c);
    }
    if (pair >= 0) {
        LineBundleSpec c{0, {}};
        c.incidence[pair] = c.incidence[3] = true;
        out.push_back(c);
    }
    for (int mask = 0; mask < 16; ++mask) {
        const int n = __builtin_popcount(mask);
        const bool coincident = pair >= 0 && (mask >> pair & 1) && (mask >> 3 & 1);
        if ((n <= 3 && !coincident) || (n == 4 && s == Stratum::m)) {
            LineBundleSpec c{-1, {}};
            for (int i = 0; i < 4; ++i)
                c.incidence[i] = mask >> i & 1;
            out.push_back(c);
        }
    }
    return out;
}

StabilityVerdict classify_parabolic_structure(const Weights& w, cplx u, cplx m, bool u_at_infinity)
{
    const auto cands = candidate_subbundles(stratum_of(u, m, u_at_infinity));
    const LineBundleSpec* best = &cands.front();
    double best_deg = parabolic_degree(*best, w);
    for (const auto& c : cands) {
        const double d = parabolic_degree(c, w);
        if (d > best_deg) {
            best_deg = d;
            best = &c;
        }
    }
    Verdict v = Verdict::stable;
    if (std::abs(best_deg) <= 1e-12)
        v = Verdict::strictly_semistable;
    else if (best_deg > 0.0)
        v = Verdict::unstable;
    return {v, *best, best_deg};
}

} // namespace abelfuchs
