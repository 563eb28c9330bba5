#include "abelfuchs/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "abelfuchs/volume.hpp"

namespace abelfuchs {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double parse_double(const std::string& text)
{
    const std::string t = trim(text);
    double v = 0.0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty())
        throw ConfigError("not a number: '" + text + "'");
    return v;
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(item));
    return out;
}

long parse_int(const std::string& text)
{
    const std::string t = trim(text);
    long v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty())
        throw ConfigError("not an integer: '" + text + "'");
    return v;
}

} // namespace

Weights parse_weights(const std::string& text)
{
    const auto v = parse_list(text);
    if (v.size() != 4)
        throw ConfigError("weights: expected four values");
    try {
        return Weights({v[0], v[1], v[2], v[3]});
    } catch (const DomainError& e) {
        throw ConfigError(std::string("weights: ") + e.what());
    }
}

cplx parse_complex(const std::string& text)
{
    const auto v = parse_list(text);
    if (v.size() == 1)
        return {v[0], 0.0};
    if (v.size() == 2)
        return {v[0], v[1]};
    throw ConfigError("expected 're' or 're, im': '" + text + "'");
}

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value)
{
    if (key == "weights")
        cfg.weights = parse_weights(value);
    else if (key == "m")
        cfg.m = parse_complex(value);
    else if (key == "tau")
        cfg.tau = parse_complex(value);
    else if (key == "N")
        cfg.N = int(parse_int(value));
    else if (key == "exclusion_cells")
        cfg.exclusion_cells = parse_double(value);
    else if (key == "exclusion_radius")
        cfg.exclusion_radius = parse_double(value);
    else if (key == "rtol")
        cfg.rtol = parse_double(value);
    else if (key == "threads")
        cfg.threads = int(parse_int(value));
    else if (key == "output_dir")
        cfg.output_dir = trim(value);
    else if (key == "seed")
        cfg.seed = std::uint64_t(parse_int(value));
    else if (key == "error_gate")
        cfg.error_gate = parse_double(value);
    else if (key == "u")
        cfg.u = parse_complex(value);
    else if (key == "lambda")
        cfg.lambda = parse_complex(value);
    else if (key == "xi")
        cfg.xi = parse_complex(value);
    else if (key == "alpha")
        cfg.alpha = parse_complex(value);
    else
        throw ConfigError("unknown key '" + key + "'");
}

RunConfig parse_config(std::istream& in)
{
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos)
            line.erase(h);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        try {
            apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

void apply_env_overrides(RunConfig& cfg)
{
    if (const char* t = std::getenv("THREADS"); t && *t)
        cfg.threads = int(parse_int(t));
    if (const char* o = std::getenv("OUTPUT_DIR"); o && *o)
        cfg.output_dir = o;
}

void RunConfig::validate() const
{
    if (m && tau)
        throw ConfigError("give exactly one of m and tau");
    if (N < 8)
        throw ConfigError("N must be at least 8");
    if (!(rtol > 0.0 && rtol < 1e-3))
        throw ConfigError("rtol must lie in (0, 1e-3)");
    if (threads < 0)
        throw ConfigError("threads must be nonnegative");
    if (!(exclusion_cells >= 0.0) || (exclusion_radius && !(*exclusion_radius > 0.0)))
        throw ConfigError("exclusion radius must be positive");
    if (tau && !(tau->imag() > 0.0))
        throw ConfigError("tau must lie in the upper half plane");
    for (int i = 0; i < 4; ++i)
        if (!(weights[i] > 0.0 && weights[i] < 0.5))
            throw ConfigError("weights must lie in (0, 1/2)");
}

CurveData RunConfig::curve() const
{
    validate();
    try {
        if (tau)
            return curve_from_tau(Lattice(*tau));
        return curve_from_tau(tau_from_m(m.value_or(cplx(2.5, 0.0))));
    } catch (const DomainError& e) {
        throw ConfigError(std::string("curve: ") + e.what());
    }
}

double RunConfig::exclusion_for(const Lattice& lat) const
{
    if (exclusion_radius)
        return *exclusion_radius;
    const double r = exclusion_cells * grid_cell(lat, N);
    return r > 0.0 ? r : spin_exclusion_radius(lat);
}

} // namespace abelfuchs
