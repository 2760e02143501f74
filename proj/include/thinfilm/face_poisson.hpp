#pragma once

#include "thinfilm/grid.hpp"

namespace thinfilm {

enum class Boundary2D { periodic, no_flux };

/**
 * @brief Face coefficients of the conservative 5-point operator
 *   (L e)_ij = sum_faces c_f (e_nb - e_ij) / h^2.
 *
 * Periodic grids store cx(i, j) on the face between cells i and i+1 (mod nx)
 * and cy(i, j) between j and j+1. No-flux grids store (nx+1) x ny and
 * nx x (ny+1) face arrays whose boundary entries are ignored.
 */
struct FaceCoefficients {
    Field2 cx;
    Field2 cy;
};

struct FacePoissonResult {
    Field2 solution;
    int iterations = 0;
    double relative_error = 0.0;
};

/// Solves -L e = rhs for the zero-mean e with Jacobi-preconditioned CG. The
/// rhs is projected onto zero mean first, which makes the singular system
/// consistent.
FacePoissonResult solve_face_poisson(const FaceCoefficients& coeff, const Field2& rhs, Boundary2D boundary,
                                     double hx, double hy, double rel_tol, int max_iter);

}  // namespace thinfilm
