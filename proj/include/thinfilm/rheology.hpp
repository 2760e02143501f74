#pragma once

/**
 * @file rheology.hpp
 * @brief Power-law constitutive law and the p-Laplace flux map.
 *
 * The viscous stress of a power-law fluid is
 *   sigma = mu |D|^{p-2} D,
 * with D the symmetric rate of strain and |D| its Frobenius norm. All solvers
 * use the regularized flux map
 *   S_delta(xi) = (|xi|^2 + delta^2)^{(q-2)/2} xi,
 * which reduces to |xi|^{q-2} xi for delta = 0.
 */

#include <vector>

#include "thinfilm/vec2.hpp"

namespace thinfilm {

/// Smallest admissible flow index.
inline constexpr double kMinFlowIndex = 9.0 / 5.0;

/// Default relative regularization used at the end of delta-continuation.
inline constexpr double kDefaultDeltaReg = 1e-8;

/// Conjugate exponent p/(p-1). Throws std::invalid_argument for p <= 1.
double dual_exponent(double p);

/// Symmetric 3x3 tensor stored by its six independent components.
struct SymTensor3 {
    double xx = 0.0, yy = 0.0, zz = 0.0;
    double xy = 0.0, xz = 0.0, yz = 0.0;

    friend bool operator==(const SymTensor3&, const SymTensor3&) = default;
};

/// Frobenius norm (off-diagonal entries counted twice).
double frobenius(const SymTensor3& t);
/// Double contraction a:b.
double contract(const SymTensor3& a, const SymTensor3& b);

/**
 * @brief Power-law fluid: flow index p, consistency mu and the relative
 * regularization scale used by the solvers.
 */
class PowerLawFluid {
public:
    /// Validates 9/5 <= p, mu > 0, delta_reg >= 0 (zero only when p = 2).
    PowerLawFluid(double p, double mu = 1.0, double delta_reg = kDefaultDeltaReg);

    double p() const { return p_; }
    double mu() const { return mu_; }
    double p_dual() const { return p_dual_; }
    double delta_reg() const { return delta_reg_; }
    bool newtonian() const { return p_ == 2.0; }

    /// Same fluid with unit consistency; cell problems are solved this way.
    PowerLawFluid with_unit_consistency() const { return PowerLawFluid(p_, 1.0, delta_reg_); }

private:
    double p_;
    double mu_;
    double p_dual_;
    double delta_reg_;
};

/// Regularized coefficient (s^2 + delta^2)^{(exponent-2)/2} for s = |xi|.
/// For delta = 0 and s = 0 the coefficient is taken as 0 when exponent < 2.
double flux_coefficient(double s, double exponent, double delta);

/// Regularized p-Laplace flux map on 2-vectors.
Vec2 s_flux(const Vec2& xi, double exponent, double delta = 0.0);
/// Regularized p-Laplace flux map on symmetric tensors (Frobenius norm).
SymTensor3 s_flux(const SymTensor3& xi, double exponent, double delta = 0.0);

/// Decreasing continuation levels start, start/10, ... ending exactly at
/// final. A single level is returned when final >= start.
std::vector<double> delta_schedule(double start, double final);

}  // namespace thinfilm
