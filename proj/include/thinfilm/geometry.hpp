#pragma once

/**
 * @file geometry.hpp
 * @brief Periodic roughness profiles on the unit cell and the rectangular
 * macroscopic domain.
 *
 * The cell Y' = (-1/2, 1/2)^2 is sampled at y_i = -1/2 + i/n, i = 0..n-1,
 * so that an n-grid tiles the torus without a duplicated seam. Builtin
 * profiles are
 *   flat:     h = base
 *   ridge_x1: h = base + amplitude cos(2 pi y1)
 *   ridge_x2: h = base + amplitude cos(2 pi y2)
 *   eggbox:   h = base + amplitude cos(2 pi y1) cos(2 pi y2)
 */

#include <string>
#include <utility>

#include "thinfilm/grid.hpp"

namespace thinfilm {

enum class RoughnessKind { flat, ridge_x1, ridge_x2, eggbox, custom_grid };

std::string to_string(RoughnessKind kind);
RoughnessKind roughness_kind_from_string(const std::string& name);

/// Periodic height function h on the unit cell, strictly positive.
class RoughnessProfile {
public:
    static RoughnessProfile flat(double base);
    static RoughnessProfile ridge_x1(double base, double amplitude);
    static RoughnessProfile ridge_x2(double base, double amplitude);
    static RoughnessProfile eggbox(double base, double amplitude);
    /// Square grid of samples at y_i = -1/2 + i/n; all entries must be > 0.
    static RoughnessProfile custom(Field2 samples);
    /// Loads an n x n grid of comma-separated positive reals.
    static RoughnessProfile load_csv(const std::string& path);

    RoughnessKind kind() const { return kind_; }
    double base() const { return base_; }
    double amplitude() const { return amplitude_; }
    const Field2& samples() const { return samples_; }

    /// h at an arbitrary point; periodic. Custom grids use bilinear interpolation.
    double operator()(double y1, double y2) const;

    double h_min() const { return extrema_.first; }
    double h_max() const { return extrema_.second; }

private:
    RoughnessProfile(RoughnessKind kind, double base, double amplitude);

    double builtin_value(double c1, double c2) const;

    RoughnessKind kind_;
    double base_;
    double amplitude_;
    Field2 samples_;
    std::pair<double, double> extrema_;

    friend Field2 sample_h(const RoughnessProfile&, int, int, int);
};

/**
 * @brief Samples h on the n x n cell grid.
 *
 * Builtins are evaluated from the integer grid phase, so shifting by whole
 * cells (shift1, shift2) rolls the grid exactly and a shift of n reproduces
 * it bit-for-bit. Custom grids are resampled by periodic bilinear
 * interpolation unless n matches the stored size.
 */
Field2 sample_h(const RoughnessProfile& profile, int n, int shift1 = 0, int shift2 = 0);

/// (h_min, h_max): analytic for builtins, grid extrema for custom profiles.
std::pair<double, double> extrema_h(const RoughnessProfile& profile);

/// Coordinate of sample i on an n-grid of the unit cell.
inline double cell_coordinate(int i, int n) { return -0.5 + static_cast<double>(i) / static_cast<double>(n); }

/// Rectangle [0, L1] x [0, L2] with a uniform cell-centered grid.
struct MacroDomain {
    double L1 = 1.0;
    double L2 = 1.0;
    int nx = 64;
    int ny = 64;

    /// Throws std::invalid_argument unless L1, L2 > 0 and nx, ny >= 4.
    void validate() const;
    double dx() const { return L1 / nx; }
    double dy() const { return L2 / ny; }
    double x(int i) const { return (i + 0.5) * dx(); }
    double y(int j) const { return (j + 0.5) * dy(); }
};

}  // namespace thinfilm
