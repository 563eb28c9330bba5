#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <omp.h>

#include <CLI11.hpp>

#include "abelfuchs/config.hpp"
#include "abelfuchs/io.hpp"
#include "abelfuchs/selftest.hpp"

using namespace abelfuchs;

namespace {

enum Exit { ok = 0, selftest_failed = 1, config_error = 2, integration_error = 3, convergence_error = 4, gate_failed = 5 };

struct GateFailure : std::runtime_error {
    GateFailure(const std::string& what, int code) : std::runtime_error(what), code(code) {}
    int code;
};

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

std::filesystem::path output_path(const RunConfig& cfg, const std::string& name)
{
    std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_json(const std::filesystem::path& p, const Json& j)
{
    std::ofstream out(p);
    if (!out)
        throw ConfigError("cannot write " + p.string());
    out << j.dump(2) << '\n';
}

int cmd_stability(const RunConfig& cfg)
{
    const cplx m = cfg.curve().m;
    Json j;
    j["weights"] = to_json(cfg.weights);
    j["m"] = to_json(m);
    j["biswas"] = biswas_admissible(cfg.weights);
    Json special;
    special["0"] = to_json(classify_parabolic_structure(cfg.weights, 0.0, m));
    special["1"] = to_json(classify_parabolic_structure(cfg.weights, 1.0, m));
    special["m"] = to_json(classify_parabolic_structure(cfg.weights, m, m));
    special["inf"] = to_json(classify_parabolic_structure(cfg.weights, 0.0, m, true));
    j["special_u"] = special;
    j["u"] = to_json(cfg.u);
    j["at_u"] = to_json(classify_parabolic_structure(cfg.weights, cfg.u, m));
    emit(j);
    return ok;
}

int cmd_system(const RunConfig& cfg)
{
    const cplx m = cfg.curve().m;
    const FuchsianSystem sys = make_system(cfg.weights, m, cfg.u, cfg.lambda);
    const HiggsField higgs = higgs_matrices(cfg.u);
    Json j;
    j["weights"] = to_json(cfg.weights);
    j["m"] = to_json(m);
    j["u"] = to_json(cfg.u);
    j["lambda"] = to_json(cfg.lambda);
    Json res = Json::array(), psi = Json::array();
    for (int i = 0; i < 4; ++i) {
        res.push_back(to_json(sys.A[i]));
        psi.push_back(to_json(higgs.psi[i]));
    }
    j["residues"] = res;
    j["higgs"] = psi;
    j["higgs_determinant"] = to_json(higgs_determinant(cfg.u, m));
    emit(j);
    return ok;
}

int cmd_monodromy(const RunConfig& cfg)
{
    const cplx m = cfg.curve().m;
    SphereLoopOptions lo;
    lo.transport.rtol = cfg.rtol;
    const MonodromyRep rep = sphere_monodromy(make_system(cfg.weights, m, cfg.u, cfg.lambda), lo);
    Json j = to_json(rep);
    Json local = Json::array();
    for (int i = 0; i < 4; ++i)
        local.push_back(std::abs(rep.generators[i].trace() - 2.0 * std::cos(2.0 * pi * cfg.weights[i])));
    j["local_trace_errors"] = local;
    const double tres = trace_residual(rep);
    std::string status;
    if (tres >= 1e-6) {
        status = "non-unitarizable (complex trace)";
    } else if (auto h = invariant_hermitian_form(rep); !h) {
        status = "non-unitarizable (no invariant form)";
    } else if (h->definiteness == Definiteness::positive) {
        status = "unitarizable";
        j["hermitian_form"] = to_json(*h);
    } else {
        status = "non-unitarizable (indefinite form, SL(2,R) type)";
        j["hermitian_form"] = to_json(*h);
    }
    j["trace_residual"] = tres;
    j["status"] = status;
    emit(j);
    return ok;
}

int cmd_beta(const RunConfig& cfg)
{
    const CurveData curve = cfg.curve();
    const Lattice& lat = curve.lattice;
    const cplx xi = cfg.xi.value_or(0.3 * lat.lambda_one() + 0.2 * lat.lambda_tau());
    const auto conn = make_abelian_connection(curve, cfg.weights, cfg.alpha.value_or(0.0), xi);
    Json j;
    j["tau"] = to_json(lat.tau());
    j["xi"] = to_json(xi);
    Json rows = Json::array();
    for (int i = 0; i < 4; ++i) {
        Json r;
        r["w"] = to_json(curve.half_points[i]);
        r["alpha_plus"] = to_json(conn.beta.plus[i]);
        r["alpha_minus"] = to_json(conn.beta.minus[i]);
        r["residue_plus"] = to_json(conn.beta.res_plus[i]);
        r["residue_minus"] = to_json(conn.beta.res_minus[i]);
        r["quadratic_residue"] = to_json(quadratic_residue(conn, i));
        r["expected"] = cfg.weights.hat(i) * cfg.weights.hat(i);
        rows.push_back(r);
    }
    j["points"] = rows;
    j["calibration"] = calibration_metadata();
    emit(j);
    return ok;
}

MSGrid solve_grid(const RunConfig& cfg, const CurveData& curve)
{
    GridOptions go;
    go.solve.transport.rtol = cfg.rtol;
    return ms_grid(cfg.weights, curve, cfg.N, cfg.exclusion_for(curve.lattice), go);
}

int cmd_ms_grid(const RunConfig& cfg)
{
    const CurveData curve = cfg.curve();
    const MSGrid g = solve_grid(cfg, curve);
    {
        std::ofstream csv(output_path(cfg, "ms_grid.csv"));
        write_grid_csv(g, csv);
    }
    write_json(output_path(cfg, "ms_grid.json"), grid_to_json(g));
    const SymmetryReport s = verify_section_symmetries(g);
    Json j;
    j["N"] = g.N;
    j["converged"] = g.converged_count;
    j["attempted"] = g.attempted_count;
    j["symmetries"] = {{"shift_one", s.shift_one},
                       {"shift_tau", s.shift_tau},
                       {"oddness", s.oddness},
                       {"remainder_period", s.remainder_period}};
    emit(j);
    if (g.convergence_ratio() < 0.95)
        throw GateFailure("grid convergence below 95%", convergence_error);
    return ok;
}

int cmd_volume(const RunConfig& cfg)
{
    if (!biswas_admissible(cfg.weights))
        throw ConfigError("weights fail the Biswas conditions");
    const CurveData curve = cfg.curve();
    const MSGrid g = solve_grid(cfg, curve);
    const VolumeReport r = symplectic_volume(g);
    {
        std::ofstream csv(output_path(cfg, "ms_grid.csv"));
        write_grid_csv(g, csv);
    }
    write_json(output_path(cfg, "volume.json"), to_json(r));
    emit(to_json(r));
    if (g.convergence_ratio() < 0.95)
        throw GateFailure("grid convergence below 95%", convergence_error);
    if (!(r.rel_error < cfg.error_gate))
        throw GateFailure("relative error above the configured gate", gate_failed);
    return ok;
}

int cmd_selftest(const RunConfig& cfg)
{
    const auto results = run_selftests(cfg.seed);
    bool all = true;
    std::printf("%-26s %-6s %-12s %-10s %s\n", "suite", "result", "max_resid", "tol", "cases");
    for (const auto& r : results) {
        all = all && r.passed;
        std::printf("%-26s %-6s %-12.3e %-10.1e %d %s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.max_residual,
                    r.tolerance, r.cases, r.note.c_str());
    }
    return all ? ok : selftest_failed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rank-2 Fuchsian systems on the 4-punctured sphere, abelianization and the MS section"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_file;
    std::vector<std::string> sets;
    std::string weights, m, tau, u, lambda, xi;
    int N = 0, threads = -1;
    std::string outdir;
    long long seed = -1;
    app.add_option("-c,--config", config_file, "key = value config file");
    app.add_option("--set", sets, "override a config key, key=value");
    app.add_option("--weights", weights, "r0,r1,r2,r3");
    app.add_option("--m", m, "cross-ratio m (re[,im])");
    app.add_option("--tau", tau, "period tau (re,im)");
    app.add_option("--u", u, "parabolic parameter u (re[,im])");
    app.add_option("--lambda", lambda, "Higgs parameter lambda (re[,im])");
    app.add_option("--xi", xi, "Jacobian coordinate xi (re[,im])");
    app.add_option("-N", N, "grid size");
    app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)");
    app.add_option("--output-dir", outdir, "directory for reports");
    app.add_option("--seed", seed, "seed for the self-test inputs");

    const char* names[] = {"stability", "system", "monodromy", "beta", "ms-grid", "volume", "selftest"};
    for (const char* n : names)
        app.add_subcommand(n);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : config_error;
    }

    try {
        RunConfig cfg = config_file.empty() ? RunConfig{} : load_config(config_file);
        apply_env_overrides(cfg);
        auto set = [&](const char* key, const std::string& v) {
            if (!v.empty())
                apply_config_entry(cfg, key, v);
        };
        set("weights", weights);
        set("m", m);
        set("tau", tau);
        set("u", u);
        set("lambda", lambda);
        set("xi", xi);
        set("output_dir", outdir);
        if (N > 0)
            cfg.N = N;
        if (threads >= 0)
            cfg.threads = threads;
        if (seed >= 0)
            cfg.seed = std::uint64_t(seed);
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--set expects key=value");
            apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        cfg.validate();
        if (cfg.threads > 0)
            omp_set_num_threads(cfg.threads);

        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "stability")
            return cmd_stability(cfg);
        if (cmd == "system")
            return cmd_system(cfg);
        if (cmd == "monodromy")
            return cmd_monodromy(cfg);
        if (cmd == "beta")
            return cmd_beta(cfg);
        if (cmd == "ms-grid")
            return cmd_ms_grid(cfg);
        if (cmd == "volume")
            return cmd_volume(cfg);
        return cmd_selftest(cfg);
    } catch (const GateFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return config_error;
    } catch (const IntegrationError& e) {
        std::cerr << "integration error: " << e.what() << '\n';
        return integration_error;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return convergence_error;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return config_error;
    }
}
