#include "thinfilm/face_poisson.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <vector>

namespace thinfilm {

FacePoissonResult solve_face_poisson(const FaceCoefficients& coeff, const Field2& rhs, Boundary2D boundary,
                                     double hx, double hy, double rel_tol, int max_iter) {
    const int nx = rhs.nx();
    const int ny = rhs.ny();
    const bool periodic = boundary == Boundary2D::periodic;
    const double wx = 1.0 / (hx * hx);
    const double wy = 1.0 / (hy * hy);

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(5) * rhs.size());
    auto couple = [&](std::size_t a, std::size_t b, double c) {
        triplets.emplace_back(a, a, c);
        triplets.emplace_back(b, b, c);
        triplets.emplace_back(a, b, -c);
        triplets.emplace_back(b, a, -c);
    };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t a = rhs.index(i, j);
            if (periodic) {
                couple(a, rhs.index((i + 1) % nx, j), wx * coeff.cx(i, j));
                couple(a, rhs.index(i, (j + 1) % ny), wy * coeff.cy(i, j));
            } else {
                if (i + 1 < nx) couple(a, rhs.index(i + 1, j), wx * coeff.cx(i + 1, j));
                if (j + 1 < ny) couple(a, rhs.index(i, j + 1), wy * coeff.cy(i, j + 1));
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(rhs.size());
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(triplets.begin(), triplets.end());

    Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.values().data(), n);
    b.array() -= b.mean();

    FacePoissonResult result;
    result.solution = Field2(nx, ny);
    if (b.lpNorm<Eigen::Infinity>() == 0.0) return result;

    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(rel_tol);
    cg.setMaxIterations(max_iter);
    cg.compute(A);
    Eigen::VectorXd x = cg.solve(b);
    x.array() -= x.mean();
    Eigen::Map<Eigen::VectorXd>(result.solution.values().data(), n) = x;
    result.iterations = static_cast<int>(cg.iterations());
    result.relative_error = cg.error();
    return result;
}

}  // namespace thinfilm
