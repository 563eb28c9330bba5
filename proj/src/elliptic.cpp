#include "abelfuchs/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace abelfuchs {

namespace {

// Sum of -i Σ_k (-1)^k q^{(k+1/2)^2} e^{2πi(k+1)w} and its derivatives, w already reduced.
std::array<cplx, 4> theta_series(cplx w, const std::vector<cplx>& weights, int kmax)
{
    const cplx e = std::exp(2.0 * pi * I * w);
    const cplx einv = 1.0 / e;
    std::array<cplx, 4> acc{};
    double maxmag = 0.0;

    auto add = [&](int k, cplx ek) {
        cplx term = weights[k + kmax + 1] * ek;
        if (k & 1)
            term = -term;
        const cplx f = 2.0 * pi * I * double(k + 1);
        acc[0] += term;
        acc[1] += term * f;
        acc[2] += term * f * f;
        acc[3] += term * f * f * f;
        double mag = std::abs(term);
        maxmag = std::max(maxmag, mag);
        return mag;
    };

    cplx ek = 1.0;
    for (int k = -1; k <= kmax; ++k) {
        double mag = add(k, ek);
        if (k >= 1 && mag < 1e-18 * maxmag)
            break;
        ek *= e;
    }
    ek = einv;
    for (int k = -2; k >= -kmax - 1; --k) {
        double mag = add(k, ek);
        if (k <= -3 && mag < 1e-18 * maxmag)
            break;
        ek *= einv;
    }
    for (auto& a : acc)
        a *= -I;
    return acc;
}

} // namespace

Lattice::Lattice(cplx tau) : tau_(tau)
{
    if (!finite(tau))
        throw DomainError("lattice: non-finite tau");
    if (tau.imag() <= 0.0)
        throw DomainError("lattice: Im(tau) must be positive");
    q_ = std::exp(pi * I * tau);

    // worst reduced term is exp(-π Im τ ((k+1/2)^2 - |k+1|))
    const double b = pi * tau.imag();
    kmax_ = 3;
    while (b * ((kmax_ + 0.5) * (kmax_ + 0.5) - (kmax_ + 1)) < 46.0)
        ++kmax_;
    weights_.resize(2 * kmax_ + 2);
    for (int k = -kmax_ - 1; k <= kmax_; ++k)
        weights_[k + kmax_ + 1] = std::exp(pi * I * tau * ((k + 0.5) * (k + 0.5)));

    theta0_ = theta_series(0.0, weights_, kmax_);
    const cplx a1 = theta0_[1], a2 = theta0_[2], a3 = theta0_[3];
    wp_shift_ = a3 / (3.0 * a1) - a2 * a2 / (4.0 * a1 * a1);
}

double Lattice::distance_to_lattice(cplx w) const
{
    const cplx r = reduce(w);
    double best = std::numeric_limits<double>::infinity();
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            best = std::min(best, std::abs(r - double(a) - double(b) * tau_));
    return best;
}

double Lattice::min_dual_period() const
{
    double best = std::numeric_limits<double>::infinity();
    for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b)
            if (a != 0 || b != 0)
                best = std::min(best, std::abs(double(a) * lambda_one() + double(b) * lambda_tau()));
    return best;
}

std::array<cplx, 4> theta_jet(cplx w, const Lattice& lat)
{
    if (!finite(w))
        throw DomainError("theta: non-finite argument");
    const cplx tau = lat.tau();
    const double k = std::floor(w.imag() / tau.imag() + 0.5);
    cplx wr = w - k * tau;
    wr -= std::floor(wr.real() + 0.5);
    auto jet = theta_series(wr, lat.series_weights(), lat.series_half_width());
    if (k == 0.0)
        return jet;

    // ϑ(w) = F(w) ϑ(w - kτ - l),  F = (-1)^k exp(-2πikw + πik(k+1)τ)
    cplx f = std::exp(-2.0 * pi * I * k * w + pi * I * k * (k + 1.0) * tau);
    if (std::fmod(std::abs(k), 2.0) == 1.0)
        f = -f;
    const cplx g = -2.0 * pi * I * k;
    const cplx g2 = g * g, g3 = g2 * g;
    return {f * jet[0],
            f * (jet[1] + g * jet[0]),
            f * (jet[2] + 2.0 * g * jet[1] + g2 * jet[0]),
            f * (jet[3] + 3.0 * g * jet[2] + 3.0 * g2 * jet[1] + g3 * jet[0])};
}

cplx theta_value(cplx w, const Lattice& lat)
{
    const cplx tau = lat.tau();
    const double k = std::floor(w.imag() / tau.imag() + 0.5);
    cplx wr = w - k * tau;
    wr -= std::floor(wr.real() + 0.5);

    const auto& weights = lat.series_weights();
    const int kmax = lat.series_half_width();
    const cplx e = std::exp(2.0 * pi * I * wr);
    const cplx einv = 1.0 / e;
    cplx acc = -weights[kmax]; // k = -1
    double maxmag = std::abs(acc);
    cplx ek = e;
    for (int j = 0; j <= kmax; ++j) {
        cplx term = weights[j + kmax + 1] * ek;
        acc += (j & 1) ? -term : term;
        double mag = std::abs(term);
        maxmag = std::max(maxmag, mag);
        if (j >= 1 && mag < 1e-18 * maxmag)
            break;
        ek *= e;
    }
    ek = einv;
    for (int j = -2; j >= -kmax - 1; --j) {
        cplx term = weights[j + kmax + 1] * ek;
        acc += (j & 1) ? -term : term;
        double mag = std::abs(term);
        if (j <= -3 && mag < 1e-18 * maxmag)
            break;
        ek *= einv;
    }
    acc *= -I;
    if (k == 0.0)
        return acc;
    cplx f = std::exp(-2.0 * pi * I * k * w + pi * I * k * (k + 1.0) * tau);
    return std::fmod(std::abs(k), 2.0) == 1.0 ? -f * acc : f * acc;
}

cplx theta_eval(cplx w, const Lattice& lat, int order)
{
    if (order < 0 || order > 3)
        throw DomainError("theta: derivative order must be 0..3");
    return theta_jet(w, lat)[order];
}

cplx t_section(cplx x, cplx w, const Lattice& lat)
{
    if (!finite(x) || !finite(w))
        throw DomainError("t_section: non-finite input");
    if (lat.distance_to_lattice(x) < 1e-12)
        throw SpinProximityError("t_section: x in the period lattice");
    if (lat.distance_to_lattice(w) < 1e-14)
        throw DomainError("t_section: pole at a lattice point");
    const double im_tau = lat.tau().imag();
    return theta_jet(w - x, lat)[0] / theta_jet(w, lat)[0]
        * std::exp(-2.0 * pi * I * x * (w.imag() / im_tau));
}

WpValue wp_eval(cplx w, const Lattice& lat)
{
    if (!finite(w))
        throw DomainError("wp: non-finite argument");
    if (lat.distance_to_lattice(w) < 1e-12)
        throw DomainError("wp: pole at a lattice point");
    const cplx r = lat.reduce(w);
    auto j = theta_jet(r, lat);
    const cplx l = j[1] / j[0];
    const cplx d2 = j[2] / j[0];
    const cplx d3 = j[3] / j[0];
    return {l * l - d2 + lat.wp_shift(), -(d3 - 3.0 * l * d2 + 2.0 * l * l * l)};
}

CurveData curve_from_tau(const Lattice& lat)
{
    const cplx tau = lat.tau();
    CurveData c{lat, {0.0, 0.5, 0.5 * (1.0 + tau), 0.5 * tau}, {}, {}, {}, {}, {}};
    for (int i = 0; i < 3; ++i)
        c.p[i] = wp_eval(c.half_points[i + 1], lat).wp;
    const cplx p12 = c.p[0] - c.p[1];
    c.m = (c.p[2] - c.p[1]) / p12;
    c.sqrt_p12 = std::sqrt(p12);
    c.g2 = 2.0 * (c.p[0] * c.p[0] + c.p[1] * c.p[1] + c.p[2] * c.p[2]);
    c.g3 = 4.0 * c.p[0] * c.p[1] * c.p[2];
    if (!finite(c.m) || !finite(c.g2) || !finite(c.g3))
        throw DomainError("curve_from_tau: non-finite half-period data");
    return c;
}

namespace {

cplx agm(cplx a, cplx b)
{
    for (int it = 0; it < 100; ++it) {
        cplx an = 0.5 * (a + b);
        cplx g = std::sqrt(a * b);
        if (std::abs(an - g) > std::abs(an + g))
            g = -g;
        a = an;
        b = g;
        if (std::abs(a - b) <= 1e-16 * std::abs(a))
            break;
    }
    return a;
}

// Move τ into the fundamental domain of Γ(2): |Re τ| ≤ 1, |τ ± 1/2| ≥ 1/2.
cplx reduce_gamma2(cplx tau)
{
    for (int it = 0; it < 200; ++it) {
        tau -= 2.0 * std::floor(0.5 * (tau.real() + 1.0));
        if (std::abs(tau + 0.5) < 0.5)
            tau = tau / (2.0 * tau + 1.0);
        else if (std::abs(tau - 0.5) < 0.5)
            tau = tau / (1.0 - 2.0 * tau);
        else
            break;
    }
    return tau;
}

double m_mismatch(cplx tau, cplx m)
{
    try {
        return std::abs(curve_from_tau(Lattice(tau)).m - m);
    } catch (const DomainError&) {
        return std::numeric_limits<double>::infinity();
    }
}

cplx polish_tau(cplx tau, cplx m)
{
    for (int it = 0; it < 60; ++it) {
        const cplx f = curve_from_tau(Lattice(tau)).m - m;
        if (std::abs(f) < 1e-15 * (1.0 + std::abs(m)))
            break;
        const double h = 1e-6 * std::max(1.0, std::abs(tau));
        const cplx df = (curve_from_tau(Lattice(tau + h)).m - curve_from_tau(Lattice(tau - h)).m) / (2.0 * h);
        cplx step = f / df;
        double scale = 1.0;
        while ((tau - scale * step).imag() <= 0.0 && scale > 1e-6)
            scale *= 0.5;
        tau -= scale * step;
        if (std::abs(step) * scale < 1e-16 * std::abs(tau))
            break;
    }
    return tau;
}

} // namespace

Lattice tau_from_m(cplx m)
{
    if (!finite(m))
        throw DomainError("tau_from_m: non-finite m");
    if (std::abs(m) < 1e-12 || std::abs(m - 1.0) < 1e-12)
        throw DomainError("tau_from_m: m must avoid 0 and 1");

    const double tol = 1e-11 * std::max(1.0, std::abs(m));
    const cplx lam = m / (m - 1.0);
    cplx tau = I * agm(1.0, std::sqrt(1.0 - lam)) / agm(1.0, std::sqrt(lam));
    if (finite(tau) && tau.imag() > 0.0) {
        tau = reduce_gamma2(polish_tau(reduce_gamma2(tau), m));
        if (tau.imag() > 0.0 && m_mismatch(tau, m) < tol)
            return Lattice(tau);
    }

    // fallback: coarse search over the Γ(2) domain
    double best = std::numeric_limits<double>::infinity();
    cplx best_tau = I;
    for (int a = 0; a <= 40; ++a) {
        for (int b = 0; b <= 40; ++b) {
            cplx t(-1.0 + a / 20.0, 0.05 * std::pow(80.0, b / 40.0));
            if (std::abs(t + 0.5) < 0.5 || std::abs(t - 0.5) < 0.5)
                continue;
            double d = m_mismatch(t, m);
            if (d < best) {
                best = d;
                best_tau = t;
            }
        }
    }
    tau = reduce_gamma2(polish_tau(best_tau, m));
    if (!(tau.imag() > 0.0) || !(m_mismatch(tau, m) < tol))
        throw ConvergenceError("tau_from_m: period computation did not converge", tau);
    return Lattice(tau);
}

CurvePoint curve_coords(cplx w, const CurveData& curve)
{
    auto [wp, dwp] = wp_eval(w, curve.lattice);
    const cplx s = curve.sqrt_p12;
    return {(wp - curve.p[1]) / (curve.p[0] - curve.p[1]), dwp / (2.0 * s * s * s)};
}

cplx abel_invert(cplx z, cplx y, const CurveData& curve)
{
    if (!finite(z) || !finite(y))
        throw DomainError("abel_invert: non-finite input");
    const double scale = std::max(1.0, std::pow(std::abs(z), 1.5));
    if (std::abs(y * y - z * (z - 1.0) * (z - curve.m)) > 1e-8 * scale * scale)
        throw DomainError("abel_invert: point is not on the curve");

    const Lattice& lat = curve.lattice;
    const cplx tau = lat.tau();
    const cplx s3 = curve.sqrt_p12 * curve.sqrt_p12 * curve.sqrt_p12;
    const cplx P = curve.p[1] + z * (curve.p[0] - curve.p[1]);
    const cplx Q = 2.0 * s3 * y;

    auto mismatch = [&](cplx w) {
        auto v = wp_eval(w, lat);
        return std::abs(v.wp - P) / (1.0 + std::abs(v.wp) + std::abs(P))
            + std::abs(v.dwp - Q) / (1.0 + std::abs(v.dwp) + std::abs(Q));
    };

    constexpr int n = 16;
    cplx w = 0.25;
    double best = std::numeric_limits<double>::infinity();
    const double pmax = std::max({std::abs(curve.p[0]), std::abs(curve.p[1]), std::abs(curve.p[2]), 1.0});
    if (std::abs(P) > 1e4 * pmax) {
        // near the pole ℘ ≈ 1/w²; Newton on 1/℘ behaves like w² there
        w = 1.0 / std::sqrt(P);
        for (int it = 0; it < 40; ++it) {
            auto v = wp_eval(w, lat);
            const cplx step = (1.0 / v.wp - 1.0 / P) / (-v.dwp / (v.wp * v.wp));
            w -= step;
            if (std::abs(step) < 1e-16 * std::abs(w))
                break;
        }
        best = 0.0;
    }
    for (int a = 0; a < n && best > 0.0; ++a) {
        for (int b = 0; b < n; ++b) {
            cplx c = (-0.5 + (a + 0.5) / n) + (-0.5 + (b + 0.5) / n) * tau;
            double d = mismatch(c);
            if (d < best) {
                best = d;
                w = c;
            }
        }
    }

    // Newton on ℘ = P; linear near branch points, so finish on ℘' = Q there
    for (int it = 0; it < 80; ++it) {
        auto v = wp_eval(w, lat);
        if (std::abs(v.dwp) == 0.0)
            break;
        cplx step = (v.wp - P) / v.dwp;
        w -= step;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(w)))
            break;
    }
    if (std::abs(wp_eval(w, lat).dwp + Q) < std::abs(wp_eval(w, lat).dwp - Q))
        w = -w;
    cplx wb = w;
    for (int it = 0; it < 8; ++it) {
        auto v = wp_eval(wb, lat);
        cplx d2 = 6.0 * v.wp * v.wp - 0.5 * curve.g2;
        if (std::abs(d2) == 0.0)
            break;
        wb -= (v.dwp - Q) / d2;
    }
    if (finite(wb) && mismatch(wb) < mismatch(w))
        w = wb;

    w = lat.reduce(w);
    auto back = curve_coords(w, curve);
    const double ztol = 1e-8 * std::max(1.0, std::abs(z));
    const double ytol = 1e-8 * scale;
    if (std::abs(back.z - z) > ztol || std::abs(back.y - y) > ytol)
        throw ConvergenceError("abel_invert: Newton did not converge", w);
    return w;
}

} // namespace abelfuchs
