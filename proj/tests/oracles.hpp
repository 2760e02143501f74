#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the solvers it checks.

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// Composite Simpson rule with `intervals` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals = 1024) {
    const double h = (b - a) / intervals;
    double sum = f(a) + f(b);
    for (int k = 1; k < intervals; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    return sum * h / 3.0;
}

/// One-dimensional cell flux for a ridge h(y1): the flux is constant in y1,
/// the monotone law is inverted pointwise and periodicity closes the system:
///   q = ( int h^{-(p'+1)(p-1)} dy1 )^{-(p'-1)}  for |xi| = 1.
inline double ridge_cell_flux(const std::function<double(double)>& h, double p) {
    const double pd = p / (p - 1.0);
    const double integral = simpson([&](double y) { return std::pow(h(y), -(pd + 1.0) * (p - 1.0)); }, -0.5, 0.5);
    return std::pow(integral, -(pd - 1.0));
}

inline double ridge(double y, double base, double amplitude) {
    return base + amplitude * std::cos(2.0 * std::numbers::pi * y);
}

/// Closed-form film flux factor h^{p'+1} / (2^{p'/2} (p'+1)), written out
/// from the Poiseuille profile integral.
inline double film_flux(double h, double p, double mu = 1.0) {
    const double pd = p / (p - 1.0);
    return std::pow(h, pd + 1.0) / (std::pow(2.0, pd / 2.0) * (pd + 1.0) * std::pow(mu, pd - 1.0));
}

/// Integral over [0, h] of a profile with a kink at h/2. Each half is mapped
/// by s = (h/2) u^2 (s the distance from h/2) and integrated with Simpson;
/// `intervals` counts both halves together.
inline double kinked_profile_integral(const std::function<double(double)>& f, double h, int intervals = 1024) {
    const double half = 0.5 * h;
    auto side = [&](double sign) {
        return simpson([&](double u) { return f(half + sign * half * u * u) * 2.0 * half * u; }, 0.0, 1.0,
                       intervals / 2);
    };
    return side(-1.0) + side(1.0);
}

/// Direct solve of the linear no-flux problem
///   div( c (f - grad P) ) = 0  on an nx x ny cell grid,
/// with face-normal force components fx ((nx+1) x ny, x fastest) and
/// fy (nx x (ny+1)). One pressure is pinned, then the mean is removed.
inline std::vector<double> linear_neumann(int nx, int ny, double dx, double dy, double c,
                                          const std::vector<double>& fx, const std::vector<double>& fy) {
    const int n = nx * ny;
    auto id = [nx](int i, int j) { return i + nx * j; };
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int row = id(i, j);
            if (row == 0) {
                trip.emplace_back(0, 0, 1.0);
                continue;
            }
            // Outgoing flux c (f_n - dP/dn) through each interior face.
            if (i + 1 < nx) {
                trip.emplace_back(row, row, c / (dx * dx));
                trip.emplace_back(row, id(i + 1, j), -c / (dx * dx));
                rhs[row] -= c * fx[(i + 1) + (nx + 1) * j] / dx;
            }
            if (i > 0) {
                trip.emplace_back(row, row, c / (dx * dx));
                trip.emplace_back(row, id(i - 1, j), -c / (dx * dx));
                rhs[row] += c * fx[i + (nx + 1) * j] / dx;
            }
            if (j + 1 < ny) {
                trip.emplace_back(row, row, c / (dy * dy));
                trip.emplace_back(row, id(i, j + 1), -c / (dy * dy));
                rhs[row] -= c * fy[i + nx * (j + 1)] / dy;
            }
            if (j > 0) {
                trip.emplace_back(row, row, c / (dy * dy));
                trip.emplace_back(row, id(i, j - 1), -c / (dy * dy));
                rhs[row] += c * fy[i + nx * j] / dy;
            }
        }
    }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    Eigen::VectorXd P = lu.solve(rhs);
    P.array() -= P.mean();
    return {P.data(), P.data() + n};
}

/// Normal components of the rotational force omega (-(y - L2/2), x - L1/2)
/// at face midpoints, in the layout taken by linear_neumann.
inline void rotational_face_force(int nx, int ny, double L1, double L2, double omega, std::vector<double>& fx,
                                  std::vector<double>& fy) {
    const double dx = L1 / nx, dy = L2 / ny;
    fx.assign(static_cast<std::size_t>(nx + 1) * ny, 0.0);
    fy.assign(static_cast<std::size_t>(nx) * (ny + 1), 0.0);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i <= nx; ++i) fx[i + (nx + 1) * j] = -omega * ((j + 0.5) * dy - 0.5 * L2);
    }
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i < nx; ++i) fy[i + nx * j] = omega * ((i + 0.5) * dx - 0.5 * L1);
    }
}

}  // namespace oracle
