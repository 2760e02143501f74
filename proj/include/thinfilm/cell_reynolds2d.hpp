#pragma once

/**
 * @file cell_reynolds2d.hpp
 * @brief Periodic nonlinear Reynolds cell problem on Y' and the mobility A^0.
 *
 * Finds the zero-mean periodic corrector pi with
 *   div( h^{p'+1} |xi + grad pi|^{p'-2} (xi + grad pi) ) = 0  on Y',
 * and returns A^0(xi) as the cell average of that flux. The outer Reynolds
 * factor 1/(2^{p'/2}(p'+1)) and consistency scaling are applied by
 * MobilityLaw, not here.
 *
 * Discretization: corrector at the sample points of sample_h, fluxes on cell
 * faces. The face height is the mean of the two adjacent samples; the normal
 * gradient is the face difference, the transverse one averages the central
 * differences of the two neighbours.
 */

#include <vector>

#include "thinfilm/geometry.hpp"
#include "thinfilm/mobility.hpp"
#include "thinfilm/rheology.hpp"
#include "thinfilm/vec2.hpp"

namespace thinfilm {

struct Cell2DOptions {
    double relax = 0.7;          ///< under-relaxation of the Picard update, in (0, 1]
    double delta_start = 1e-2;   ///< first level of the delta-continuation (relative to |xi|)
    double inner_tol = 1e-10;    ///< relative tolerance of the linear CG solves
    int inner_max_iter = 20000;
};

struct Cell2DSolution {
    Vec2 xi;
    Field2 pi;
    Vec2 mobility;          ///< unscaled A^0(xi)
    double residual = 0.0;  ///< max |div q| * cell width / |A^0|
    int iterations = 0;
    std::vector<double> residual_history;
    Field2 flux_x;  ///< normal flux on the face between samples i and i+1
    Field2 flux_y;  ///< normal flux on the face between samples j and j+1
};

/**
 * @brief Solves the cell problem for forcing xi on an n x n grid.
 *
 * Frozen-coefficient Picard iteration in defect-correction form with
 * backtracking on the relaxation factor and delta-continuation from
 * delta_start down to fluid.delta_reg. Throws SolverError when the residual
 * does not reach tol within max_iter iterations.
 */
Cell2DSolution solve_cell2d(const RoughnessProfile& profile, const Vec2& xi, const PowerLawFluid& fluid, int n,
                            double tol = 1e-8, int max_iter = 500, const Cell2DOptions& options = {});

/// A^0 sampled at table_size uniform unit directions, solved in parallel.
MobilityTable mobility_a0(const RoughnessProfile& profile, const PowerLawFluid& fluid, int table_size, int n,
                          double tol = 1e-8, int max_iter = 500, int workers = 1, const Cell2DOptions& options = {});

}  // namespace thinfilm
