#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace abelfuchs {

struct SuiteResult {
    std::string name;
    bool passed = false;
    double max_residual = 0.0;
    double tolerance = 0.0;
    int cases = 0;
    std::string note;
};

std::vector<std::string> selftest_suite_names();
// Runs the named suites (all when empty) with inputs drawn from `seed`.
std::vector<SuiteResult> run_selftests(std::uint64_t seed, const std::vector<std::string>& only = {});

} // namespace abelfuchs
