#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abelfuchs/fuchsian.hpp"

namespace abelfuchs {

// Line segment a -> b, or circular arc center + radius e^{iθ}, θ from theta0 to theta1.
struct Segment {
    enum class Kind { line, arc } kind = Kind::line;
    cplx a, b;
    cplx center;
    double radius = 0.0;
    double theta0 = 0.0, theta1 = 0.0;

    static Segment line(cplx from, cplx to);
    static Segment arc(cplx center, double radius, double theta0, double theta1);

    cplx point(double t) const;
    cplx velocity(double t) const;
    cplx start() const { return point(0.0); }
    cplx end() const { return point(1.0); }
    Segment reversed() const;
};

using Path = std::vector<Segment>;
Path reversed(const Path& p);

struct LoopSpec {
    cplx base_point;
    Path path;
    std::optional<int> enclosed_puncture;
};

// Minimum distance from the path to the given points (sampled).
double path_clearance(const Path& p, std::span<const cplx> points);

// The connection 1-form P dw + Q dw̄ at a point.
struct FormCoeffs {
    Mat2 dw;
    Mat2 dwbar;
};
using FormEvaluator = std::function<FormCoeffs(cplx)>;

struct TransportOptions {
    double rtol = 1e-11;
    double atol = 1e-14;
    long max_steps = 2000000;
};

// Solution operator of dΦ = -AΦ along the path, Φ(start) = I.
Mat2 parallel_transport(const FormEvaluator& form, const Path& path, const TransportOptions& opt = {});

// Transports for the family of forms A + diag(s_k, -s_k) dw, integrated on a
// shared step sequence so the form is evaluated once per stage.
std::vector<Mat2> parallel_transport_shifted(const FormEvaluator& form, const Path& path,
                                             std::span<const cplx> shifts, const TransportOptions& opt = {});

enum class RepKind { sphere, torus };

struct MonodromyRep {
    RepKind kind = RepKind::sphere;
    // sphere: M_0..M_3; torus: M_A, M_B, N_0..N_3
    std::vector<Mat2> generators;
    std::vector<std::string> labels;
    cplx base_point;
    double integration_tolerance = 0.0;
    // sphere only: the ordered product M[o0]·M[o1]·M[o2]·M[o3] closest to I,
    // up to cyclic rotation (o0 = 0)
    std::array<int, 4> product_order{0, 1, 2, 3};
    double relation_defect = 0.0;
    double clearance = 0.0;
};

struct SphereLoopOptions {
    std::optional<cplx> base_point; // default 2 + |m| on the real axis
    TransportOptions transport;
};

std::vector<LoopSpec> sphere_loops(cplx m, cplx base_point);
MonodromyRep sphere_monodromy(const FuchsianSystem& sys, const SphereLoopOptions& opt = {});

enum class Definiteness { positive, negative, indefinite, degenerate };
const char* to_string(Definiteness d);

struct HermitianForm {
    Mat2 H;
    Definiteness definiteness;
    int solution_dim = 1;
};

Definiteness classify_hermitian(const Mat2& H, double tol = 1e-10);

// Solves g^† H g = H for all generators. A 1-dimensional solution space gives
// its (sign-normalized) generator; a larger one (reducible rep) the projection
// of the identity onto it.
std::optional<HermitianForm> invariant_hermitian_form(const MonodromyRep& rep);
bool is_irreducible(const MonodromyRep& rep);
double trace_residual(const MonodromyRep& rep);
double unitarizability_residual(const MonodromyRep& rep);

} // namespace abelfuchs
