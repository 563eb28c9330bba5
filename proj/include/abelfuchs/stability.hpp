#pragma once

#include <array>
#include <vector>

#include "abelfuchs/fuchsian.hpp"

namespace abelfuchs {

struct LineBundleSpec {
    int degree = 0;
    std::array<bool, 4> incidence{};
};

enum class Verdict { stable, strictly_semistable, unstable };
const char* to_string(Verdict v);

struct StabilityVerdict {
    Verdict verdict;
    LineBundleSpec witness;
    double max_pdeg;
};

// Position of u relative to the special values where two eigenlines meet.
enum class Stratum { generic, zero, one, m, infinity };
Stratum stratum_of(cplx u, cplx m, bool u_at_infinity = false);

double parabolic_degree(const LineBundleSpec& spec, const Weights& w);
bool biswas_admissible(const Weights& w);

// Candidate subbundles of the trivial rank-2 bundle in the given stratum:
// degree 0 through one eigenline (or a coincident pair), degree -1 through
// up to three distinct eigenlines (all four when u = m).
std::vector<LineBundleSpec> candidate_subbundles(Stratum s);

StabilityVerdict classify_parabolic_structure(const Weights& w, cplx u, cplx m, bool u_at_infinity = false);

} // namespace abelfuchs
