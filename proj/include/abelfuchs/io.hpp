#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "abelfuchs/stability.hpp"
#include "abelfuchs/volume.hpp"

namespace abelfuchs {

using Json = nlohmann::ordered_json;

// %.17g
std::string format_double(double v);

Json to_json(cplx z);
Json to_json(const Mat2& m);
Json to_json(const Weights& w);
Json to_json(const MonodromyRep& rep);
Json to_json(const HermitianForm& h);
Json to_json(const MSSample& s);
Json to_json(const VolumeReport& r);
Json to_json(const StabilityVerdict& v);
Json calibration_metadata();
// metadata block plus one object per sample
Json grid_to_json(const MSGrid& g);

// Header re_xi,im_xi,re_alpha,im_alpha,residual,converged; one row per grid
// sample in index order, excluded samples with nan α.
void write_grid_csv(const MSGrid& g, std::ostream& out);

struct GridCsvRow {
    cplx xi;
    cplx alpha;
    double residual;
    bool converged;
};
std::vector<GridCsvRow> read_grid_csv(std::istream& in);

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out);

} // namespace abelfuchs
