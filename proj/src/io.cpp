#include "abelfuchs/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace abelfuchs {

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Mat2& m)
{
    return Json::array({Json::array({to_json(m(0, 0)), to_json(m(0, 1))}),
                        Json::array({to_json(m(1, 0)), to_json(m(1, 1))})});
}

Json to_json(const Weights& w) { return Json::array({w[0], w[1], w[2], w[3]}); }

Json to_json(const HermitianForm& h)
{
    Json j;
    j["H"] = to_json(h.H);
    j["definiteness"] = to_string(h.definiteness);
    j["solution_dim"] = h.solution_dim;
    return j;
}

Json to_json(const MonodromyRep& rep)
{
    Json j;
    j["kind"] = rep.kind == RepKind::sphere ? "sphere" : "torus";
    j["base_point"] = to_json(rep.base_point);
    j["integration_tolerance"] = rep.integration_tolerance;
    j["clearance"] = rep.clearance;
    Json gens = Json::array();
    for (size_t i = 0; i < rep.generators.size(); ++i) {
        Json g;
        g["label"] = i < rep.labels.size() ? rep.labels[i] : std::to_string(i);
        g["matrix"] = to_json(rep.generators[i]);
        g["trace"] = to_json(rep.generators[i].trace());
        gens.push_back(g);
    }
    j["generators"] = gens;
    if (rep.kind == RepKind::sphere) {
        j["product_order"] = rep.product_order;
        j["relation_defect"] = rep.relation_defect;
    }
    return j;
}

Json to_json(const MSSample& s)
{
    Json j;
    j["xi"] = to_json(s.xi);
    j["alpha"] = to_json(s.alpha);
    j["residual"] = std::isfinite(s.residual) ? Json(s.residual) : Json(nullptr);
    j["converged"] = s.converged;
    j["status"] = to_string(s.status);
    j["irreducible"] = s.irreducible;
    j["iterations"] = s.iterations;
    if (s.hermitian_witness)
        j["hermitian_witness"] = to_json(*s.hermitian_witness);
    return j;
}

Json calibration_metadata()
{
    Json j;
    j["theta"] = "theta_1(pi w|tau) exp(pi i w)";
    j["residue_sign"] = residue_sign;
    j["slope_sign"] = slope_sign;
    j["cycle_pairing"] = "tr M_A = -tr(M_2 M_3), tr M_B = -tr(M_1 M_2)";
    j["torus_loops"] = "base (1+tau)/4; A: p -> p+1; B: p -> p+tau";
    j["sphere_loops"] = "base 2+|m|; parallel tails; CCW lassos; infinity loop CW on |z| = 2+|m|";
    j["volume_orientation"] = "+2 pi^2 for rho = 1/4";
    return j;
}

Json to_json(const VolumeReport& r)
{
    Json j;
    j["weights"] = to_json(r.weights);
    j["tau"] = to_json(r.tau);
    j["N"] = r.N;
    j["exclusion_radius"] = r.exclusion_radius;
    j["quadrature_value"] = r.quadrature_value;
    j["closed_form"] = r.closed_form;
    j["relative_error"] = r.rel_error;
    j["punctured_mean_value"] = r.punctured_mean_value;
    j["raw_density_value"] = r.raw_value;
    j["excluded_fraction"] = r.excluded_fraction;
    j["convergence_ratio"] = r.convergence_ratio;
    j["max_density_imag"] = r.max_density_imag;
    j["density_periodicity"] = r.density_periodicity;
    j["calibration"] = calibration_metadata();
    return j;
}

Json to_json(const StabilityVerdict& v)
{
    Json j;
    j["verdict"] = to_string(v.verdict);
    j["max_parabolic_degree"] = v.max_pdeg;
    j["witness"] = {{"degree", v.witness.degree}, {"incidence", v.witness.incidence}};
    return j;
}

Json grid_to_json(const MSGrid& g)
{
    Json meta;
    meta["weights"] = to_json(g.weights);
    meta["tau"] = to_json(g.curve.lattice.tau());
    meta["m"] = to_json(g.curve.m);
    meta["N"] = g.N;
    meta["exclusion_radius"] = g.exclusion_radius;
    meta["rtol"] = g.rtol;
    meta["loop_convention"] = g.loop_convention;
    meta["anchor"] = g.anchor;
    meta["attempted"] = g.attempted_count;
    meta["converged"] = g.converged_count;
    meta["calibration"] = calibration_metadata();
    Json samples = Json::array();
    for (int j = 0; j <= g.N; ++j)
        for (int k = 0; k <= g.N; ++k) {
            const auto& s = g.samples[g.index(j, k)];
            Json o;
            o["j"] = j;
            o["k"] = k;
            o["excluded"] = bool(g.excluded[g.index(j, k)]);
            if (g.excluded[g.index(j, k)]) {
                o["xi"] = to_json(s.xi);
            } else {
                const Json sj = to_json(s);
                for (auto& [key, val] : sj.items())
                    o[key] = val;
            }
            samples.push_back(o);
        }
    Json out;
    out["metadata"] = meta;
    out["samples"] = samples;
    return out;
}

void write_grid_csv(const MSGrid& g, std::ostream& out)
{
    out << "re_xi,im_xi,re_alpha,im_alpha,residual,converged\n";
    const double nan = std::nan("");
    for (size_t i = 0; i < g.samples.size(); ++i) {
        const auto& s = g.samples[i];
        const bool ex = g.excluded[i];
        out << format_double(s.xi.real()) << ',' << format_double(s.xi.imag()) << ','
            << format_double(ex ? nan : s.alpha.real()) << ',' << format_double(ex ? nan : s.alpha.imag()) << ','
            << format_double(ex ? nan : s.residual) << ',' << (s.converged ? 1 : 0) << '\n';
    }
}

std::vector<GridCsvRow> read_grid_csv(std::istream& in)
{
    std::vector<GridCsvRow> rows;
    std::string line;
    if (!std::getline(in, line) || line.rfind("re_xi,", 0) != 0)
        throw DomainError("read_grid_csv: missing header");
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string f[6];
        for (auto& x : f)
            if (!std::getline(ss, x, ','))
                throw DomainError("read_grid_csv: short row");
        auto d = [](const std::string& t) { return std::strtod(t.c_str(), nullptr); };
        rows.push_back({{d(f[0]), d(f[1])}, {d(f[2]), d(f[3])}, d(f[4]), f[5] == "1"});
    }
    return rows;
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out)
{
    out << "N,exclusion_radius,quadrature_value,relative_error,convergence_ratio\n";
    for (const auto& r : rows)
        out << r.N << ',' << format_double(r.exclusion_radius) << ',' << format_double(r.quadrature_value) << ','
            << format_double(r.rel_error) << ',' << format_double(r.convergence_ratio) << '\n';
}

} // namespace abelfuchs
