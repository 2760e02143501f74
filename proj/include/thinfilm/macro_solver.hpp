#pragma once

/**
 * @file macro_solver.hpp
 * @brief Macroscopic nonlinear Reynolds problem on a rectangle.
 *
 * Finds the zero-mean pressure P with
 *   div V = 0,  V = A(f - grad P)  in omega,   V . n = 0  on the boundary,
 * for a mobility law A. Pressure lives at cell centers, fluxes on faces.
 * At an x-face the normal component of grad P is the face difference and the
 * transverse component averages the central differences of the two adjacent
 * cells (one-sided next to the boundary); y-faces are symmetric. Boundary
 * faces carry zero flux.
 */

#include <string>
#include <vector>

#include "thinfilm/geometry.hpp"
#include "thinfilm/grid.hpp"
#include "thinfilm/mobility.hpp"
#include "thinfilm/vec2.hpp"

namespace thinfilm {

enum class ForceKind { constant, gradient_of, rotational, custom };
enum class Potential { sin_x, sin_cos };

std::string to_string(ForceKind kind);
ForceKind force_kind_from_string(const std::string& name);
std::string to_string(Potential potential);
Potential potential_from_string(const std::string& name);

/// Force field sampled on the faces of a macro grid.
struct FaceForce {
    Field2 x_faces_1, x_faces_2;  ///< (nx+1) x ny, both components at x-faces
    Field2 y_faces_1, y_faces_2;  ///< nx x (ny+1)
    Field2 cell_1, cell_2;        ///< nx x ny, at cell centers
};

class ForceField {
public:
    static ForceField constant(const Vec2& value);
    /// Gradient of phi = sin(2 pi x/L1) or sin(2 pi x/L1) cos(2 pi y/L2).
    static ForceField gradient_of(Potential potential);
    /// f = omega (-(y - L2/2), x - L1/2).
    static ForceField rotational(double omega);
    /// Cell-centered samples on the solve grid.
    static ForceField custom(Field2 f1, Field2 f2);
    /// Reads rows `f1,f2` over cell centers, x fastest, after a header line.
    static ForceField load_csv(const std::string& path, int nx, int ny);

    ForceKind kind() const { return kind_; }
    Potential potential() const { return potential_; }
    Vec2 constant_value() const { return value_; }
    double omega() const { return omega_; }

    /// Potential at (x, y) for gradient_of forces.
    double potential_at(const MacroDomain& domain, double x, double y) const;

    /// Samples on the domain's grid. gradient_of uses the discrete gradient
    /// of phi at cell centers, so that P = phi - mean(phi) is an exact
    /// discrete solution.
    FaceForce sample(const MacroDomain& domain) const;

private:
    ForceKind kind_ = ForceKind::constant;
    Potential potential_ = Potential::sin_x;
    Vec2 value_{};
    double omega_ = 0.0;
    Field2 f1_, f2_;
};

struct MacroOptions {
    double relax = 0.7;
    double delta_start = 1e-2;  ///< relative to max |f|
    double delta_final = 1e-8;  ///< relative to max |f|
    double inner_tol = 1e-12;
    int inner_max_iter = 50000;
    int stagnation_window = 50;
    double stagnation_drop = 1e-3;
};

struct MacroSolution {
    MacroDomain domain;
    Field2 pressure;  ///< zero mean
    Field2 flux_x;    ///< (nx+1) x ny; columns 0 and nx are zero
    Field2 flux_y;    ///< nx x (ny+1); rows 0 and ny are zero
    FaceForce force;
    std::vector<double> residual_history;
    std::size_t continuation_end = 0;  ///< history index where the final delta level starts
    double residual = 0.0;             ///< max |div V| * max(L1, L2) / flux_scale
    double flux_scale = 0.0;           ///< |A(max|f| e1)|
    double mass_balance = 0.0;         ///< sum over cells of div V * dx * dy
    double max_divergence = 0.0;       ///< max |div V| over cells
    int iterations = 0;

    Vec2 cell_flux(int i, int j) const;
};

/// Discrete divergence of face fluxes.
Field2 flux_divergence(const Field2& flux_x, const Field2& flux_y, double dx, double dy);

/// Throws SolverError on non-convergence or stagnation.
MacroSolution solve_macro(const MacroDomain& domain, const MobilityLaw& law, const ForceField& force,
                          double tol = 1e-8, int max_iter = 500, const MacroOptions& options = {});

/// Film velocity at height y3 of the flat profile driven by G:
///   (2^{p'/2} / (p' mu^{p'-1})) ((h/2)^{p'} - |h/2 - y3|^{p'}) |G|^{p'-2} G.
Vec2 velocity_profile(const Vec2& G, double h, const PowerLawFluid& fluid, double y3);

/// Cell velocity of the Reynolds-roughness corrector at a point with local
/// height h and gradient grad_pi, at unit consistency. Carries a minus sign:
///   -(2^{p'/2} / p') ((h/2)^{p'} - |h/2 - y3|^{p'}) |xi + grad_pi|^{p'-2} (xi + grad_pi).
Vec2 cell_velocity_profile_2d(double h, const Vec2& grad_pi, const Vec2& xi, const PowerLawFluid& fluid, double y3);

/// CSV `x,y,P,Vx,Vy` over cell centers, x fastest, face fluxes averaged to centers.
void write_field_csv(const MacroSolution& solution, const std::string& path);
/// Legacy-VTK structured points with P and (Vx, Vy, 0).
void write_field_vtk(const MacroSolution& solution, const std::string& path);

}  // namespace thinfilm
