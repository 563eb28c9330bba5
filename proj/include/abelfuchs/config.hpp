#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>

#include "abelfuchs/elliptic.hpp"
#include "abelfuchs/fuchsian.hpp"

namespace abelfuchs {

struct ConfigError : DomainError {
    using DomainError::DomainError;
};

// Flat key = value file, '#' starts a comment. Keys:
//   weights = r0, r1, r2, r3        m = re[, im]      tau = re, im
//   N = 16                          exclusion_cells = 2   (radius in grid spacings)
//   exclusion_radius = r            (absolute; overrides exclusion_cells)
//   rtol = 1e-11   threads = 0   output_dir = .   seed = 12345   error_gate = 0.02
//   u = re, im     lambda = re, im     xi = re, im     alpha = re, im
// Environment: THREADS and OUTPUT_DIR override the file.
struct RunConfig {
    Weights weights{{0.3, 0.25, 0.2, 0.15}};
    std::optional<cplx> m;
    std::optional<cplx> tau;
    int N = 16;
    double exclusion_cells = 2.0;
    std::optional<double> exclusion_radius;
    double rtol = 1e-11;
    int threads = 0;
    std::string output_dir = ".";
    std::uint64_t seed = 12345;
    double error_gate = 0.02;
    cplx u{0.4, 0.3};
    cplx lambda{0.0, 0.0};
    std::optional<cplx> xi;
    std::optional<cplx> alpha;

    // m = 2.5 when neither m nor tau is given
    CurveData curve() const;
    double exclusion_for(const Lattice& lat) const;
    void validate() const;
};

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);
void apply_env_overrides(RunConfig& cfg);

Weights parse_weights(const std::string& text);
cplx parse_complex(const std::string& text);

} // namespace abelfuchs
