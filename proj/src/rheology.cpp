#include "thinfilm/rheology.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace thinfilm {

namespace {

void check_exponent(double exponent, double delta) {
    if (!std::isfinite(exponent) || exponent <= 1.0) {
        throw std::invalid_argument("flux exponent must be > 1, got " + std::to_string(exponent));
    }
    if (!std::isfinite(delta) || delta < 0.0) {
        throw std::invalid_argument("regularization delta must be >= 0");
    }
}

}  // namespace

double dual_exponent(double p) {
    if (!std::isfinite(p) || p <= 1.0) {
        throw std::invalid_argument("dual_exponent: p must be > 1, got " + std::to_string(p));
    }
    return p / (p - 1.0);
}

double frobenius(const SymTensor3& t) { return std::sqrt(contract(t, t)); }

double contract(const SymTensor3& a, const SymTensor3& b) {
    return a.xx * b.xx + a.yy * b.yy + a.zz * b.zz + 2.0 * (a.xy * b.xy + a.xz * b.xz + a.yz * b.yz);
}

PowerLawFluid::PowerLawFluid(double p, double mu, double delta_reg) : p_(p), mu_(mu), delta_reg_(delta_reg) {
    if (!std::isfinite(p) || p < kMinFlowIndex) {
        throw std::invalid_argument("flow index p must satisfy p >= 9/5, got " + std::to_string(p));
    }
    if (!std::isfinite(mu) || mu <= 0.0) {
        throw std::invalid_argument("consistency mu must be > 0");
    }
    if (!std::isfinite(delta_reg) || delta_reg < 0.0) {
        throw std::invalid_argument("delta_reg must be >= 0");
    }
    if (delta_reg == 0.0 && p != 2.0) {
        throw std::invalid_argument("delta_reg = 0 is only allowed for p = 2");
    }
    p_dual_ = dual_exponent(p);
}

double flux_coefficient(double s, double exponent, double delta) {
    if (exponent == 2.0) return 1.0;
    const double s2 = s * s + delta * delta;
    if (s2 == 0.0) {
        // Monotone extension at the origin; the flux itself vanishes there.
        return 0.0;
    }
    return std::pow(s2, 0.5 * (exponent - 2.0));
}

Vec2 s_flux(const Vec2& xi, double exponent, double delta) {
    check_exponent(exponent, delta);
    if (!is_finite(xi)) throw std::invalid_argument("s_flux: non-finite input");
    return flux_coefficient(norm(xi), exponent, delta) * xi;
}

SymTensor3 s_flux(const SymTensor3& xi, double exponent, double delta) {
    check_exponent(exponent, delta);
    for (double v : {xi.xx, xi.yy, xi.zz, xi.xy, xi.xz, xi.yz}) {
        if (!std::isfinite(v)) throw std::invalid_argument("s_flux: non-finite input");
    }
    const double c = flux_coefficient(frobenius(xi), exponent, delta);
    return {c * xi.xx, c * xi.yy, c * xi.zz, c * xi.xy, c * xi.xz, c * xi.yz};
}

std::vector<double> delta_schedule(double start, double final) {
    std::vector<double> levels;
    if (!(final > 0.0)) return {final};
    for (double d = start; d > final * 1.000001; d *= 0.1) levels.push_back(d);
    levels.push_back(final);
    return levels;
}

}  // namespace thinfilm
