#pragma once

/**
 * @file cell_stokes3d.hpp
 * @brief Periodic nonlinear (p-)Stokes cell problem and the mobility A^lambda.
 *
 * Solves, on the box Y' x (0, h_max),
 *   -div_l S(D_l[w]) + grad_l pi = (xi, 0),   div_l w = 0,
 * with w = 0 at y3 = 0, h_max, Y'-periodic in y', and the region above h(y')
 * removed by Brinkman penalization (w / kappa). The anisotropic operators
 * scale horizontal derivatives by lambda, which is discretized as a
 * horizontal grid spacing of (1/n)/lambda.
 *
 * Discretization: MAC grid. u, v live on x- and y-faces at mid-height of a
 * cell layer, w on horizontal faces; pressure at cell centers. The viscous
 * form sum_s W_s nu_s D_s(w) D_s(phi) runs over diagonal strain samples at
 * cell centers and shear samples on cell edges (half weight on the walls),
 * so the assembled operator is symmetric positive definite. Above the last
 * fluid u (or v) dof of a column, the shear sample measures the distance to
 * the wall at h rather than to the next grid dof, so the no-slip wall is not
 * rounded to the grid.
 *
 * Solver: frozen-viscosity Picard iteration; each linearized Stokes problem
 * is solved by augmented-Lagrangian Uzawa iteration with a sparse Cholesky
 * factorization of A + r V D^T D.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "thinfilm/geometry.hpp"
#include "thinfilm/mobility.hpp"
#include "thinfilm/rheology.hpp"
#include "thinfilm/vec2.hpp"

namespace thinfilm {

struct Cell3DOptions {
    double kappa = 1e-6;        ///< Brinkman penalization parameter
    double relax = 0.0;         ///< Picard relaxation; <= 0 selects min(1, 2/p) (unused for p = 2)
    double delta_start = 1e-2;  ///< first delta-continuation level, relative to the strain scale
    int uzawa_max_iter = 60;
    double augmentation = 100.0;  ///< target Uzawa contraction 1/(1 + r sigma) in the solid
};

struct Cell3DSolution {
    Vec2 xi;
    double lambda = 1.0;
    int n = 0;
    int nz = 0;
    double height = 0.0;  ///< box height h_max
    std::vector<double> u;  ///< (i, j, k) -> i + n (j + n k), on faces x_i + 1/(2n)
    std::vector<double> v;  ///< on faces y_j + 1/(2n)
    std::vector<double> w;  ///< (i, j, k) for k = 0..nz, walls included (zero)
    std::vector<double> pi_cell;
    std::vector<std::uint8_t> solid_mask;  ///< per pressure cell: center above h
    Vec2 mobility;               ///< integral of w' over fluid dofs
    double vertical_flux = 0.0;  ///< integral of w3 over fluid dofs
    double residual = 0.0;
    int iterations = 0;
    std::vector<double> residual_history;
    double max_divergence = 0.0;        ///< max |div_l w| * h_ref / max |w| over fluid cells
    double solid_velocity_ratio = 0.0;  ///< max |w| on solid dofs / max |w|

    double u_at(int i, int j, int k) const { return u[idx(i, j, k)]; }
    double v_at(int i, int j, int k) const { return v[idx(i, j, k)]; }
    double w_at(int i, int j, int k) const { return w[idx(i, j, k)]; }
    double pi_at(int i, int j, int k) const { return pi_cell[idx(i, j, k)]; }
    std::size_t idx(int i, int j, int k) const {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(n) * (j + static_cast<std::size_t>(n) * k);
    }
};

/**
 * @brief Solves the 3D cell problem for forcing xi.
 *
 * The cell problem carries no consistency; the fluid's mu is ignored. Throws
 * std::invalid_argument for lambda <= 0 or grids below 8, SolverError when
 * the residual stays above tol after max_iter Picard iterations.
 */
Cell3DSolution solve_cell3d(const RoughnessProfile& profile, double lambda, const Vec2& xi,
                            const PowerLawFluid& fluid, int n, int nz, double tol = 1e-7, int max_iter = 200,
                            const Cell3DOptions& options = {});

/// A^lambda sampled at table_size uniform unit directions.
MobilityTable mobility_a_lambda(const RoughnessProfile& profile, double lambda, const PowerLawFluid& fluid,
                                int table_size, int n, int nz, double tol = 1e-7, int max_iter = 200,
                                int workers = 1, const Cell3DOptions& options = {});

/// Legacy-VTK ASCII structured-points dump at cell centers: velocity
/// (face-averaged), pressure and the solid mask.
void write_cell3d_vtk(const Cell3DSolution& solution, const std::string& path);

}  // namespace thinfilm
