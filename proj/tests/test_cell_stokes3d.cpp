#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "thinfilm/cell_reynolds2d.hpp"
#include "thinfilm/cell_stokes3d.hpp"
#include "thinfilm/errors.hpp"

using namespace thinfilm;

namespace {

double flat_mobility(double h, double p) {
    const double q = dual_exponent(p);
    return std::pow(h, q + 1.0) / (std::pow(2.0, 0.5 * q) * (q + 1.0));
}

double mean(const std::vector<double>& v, const std::vector<std::uint8_t>& solid) {
    double s = 0.0;
    int count = 0;
    for (std::size_t a = 0; a < v.size(); ++a) {
        if (!solid[a]) {
            s += v[a];
            ++count;
        }
    }
    return s / count;
}

}  // namespace

TEST_CASE("flat cell matches the film flux") {
    for (double p : {9.0 / 5.0, 2.0, 3.0}) {
        for (double lambda : {0.5, 2.0}) {
            const auto sol = solve_cell3d(RoughnessProfile::flat(1.0), lambda, {1, 0}, PowerLawFluid(p), 12, 12);
            CHECK(sol.mobility.x == doctest::Approx(flat_mobility(1.0, p)).epsilon(0.05));
            CHECK(std::abs(sol.mobility.y) <= 1e-12);
        }
    }
    const auto sol = solve_cell3d(RoughnessProfile::flat(1.0), 1.0, {1, 0}, PowerLawFluid(2.0), 12, 12);
    CHECK(sol.mobility.x == doctest::Approx(1.0 / 6.0).epsilon(0.05));
    const auto thick = solve_cell3d(RoughnessProfile::flat(2.0), 1.0, {0, 1}, PowerLawFluid(2.5), 12, 12);
    CHECK(thick.mobility.y == doctest::Approx(flat_mobility(2.0, 2.5)).epsilon(0.05));
}

TEST_CASE("flat cell error shrinks under refinement") {
    double previous = 1.0;
    for (int n : {8, 16}) {
        const auto sol = solve_cell3d(RoughnessProfile::flat(1.0), 1.0, {1, 0}, PowerLawFluid(2.0), n, n);
        const double err = std::abs(sol.mobility.x - 1.0 / 6.0);
        CHECK(err < 0.5 * previous);
        previous = err;
    }
}

TEST_CASE("zero forcing short-circuits") {
    const auto sol = solve_cell3d(RoughnessProfile::eggbox(1.0, 0.3), 1.0, {0, 0}, PowerLawFluid(3.0), 8, 8);
    CHECK(sol.mobility == Vec2{0, 0});
    CHECK(sol.iterations == 0);
    for (double w : sol.u) CHECK(w == 0.0);
}

TEST_CASE("linear case converges in one outer iteration") {
    const auto sol = solve_cell3d(RoughnessProfile::ridge_x1(1.0, 0.5), 1.0, {1, 0}, PowerLawFluid(2.0), 12, 12);
    CHECK(sol.iterations == 1);
    Cell3DOptions stiffer;
    stiffer.kappa = 0.5e-6;
    const auto half = solve_cell3d(RoughnessProfile::ridge_x1(1.0, 0.5), 1.0, {1, 0}, PowerLawFluid(2.0), 12, 12,
                                   1e-7, 200, stiffer);
    CHECK(std::abs(half.mobility.x / sol.mobility.x - 1.0) < 1e-3);
}

TEST_CASE("returned iterate satisfies the cell invariants") {
    const auto profile = RoughnessProfile::eggbox(1.0, 0.3);
    for (double p : {2.0, 3.0}) {
        const auto sol = solve_cell3d(profile, 1.0, {0.6, 0.8}, PowerLawFluid(p), 12, 12);
        CHECK(sol.residual <= 1e-7);
        CHECK(sol.max_divergence <= 1e-7);
        CHECK(sol.solid_velocity_ratio <= 1e-3);
        CHECK(std::abs(sol.vertical_flux) <= 1e-7 * norm(sol.mobility));
        CHECK(std::abs(mean(sol.pi_cell, sol.solid_mask)) <= 1e-12);
        CHECK(dot(sol.mobility, sol.xi) > 0.0);
        for (int j = 0; j < sol.n; ++j) {
            for (int i = 0; i < sol.n; ++i) {
                CHECK(sol.w_at(i, j, 0) == 0.0);
                CHECK(sol.w_at(i, j, sol.nz) == 0.0);
            }
        }
    }
}

TEST_CASE("homogeneity in the forcing") {
    const auto profile = RoughnessProfile::ridge_x1(1.0, 0.5);
    for (double p : {2.5, 3.0}) {
        const PowerLawFluid fluid(p);
        const Vec2 xi{0.8, 0.6};
        const auto base = solve_cell3d(profile, 1.0, xi, fluid, 8, 8, 1e-8);
        for (double t : {0.5, 2.0}) {
            const auto scaled = solve_cell3d(profile, 1.0, t * xi, fluid, 8, 8, 1e-8);
            const Vec2 expected = std::pow(t, fluid.p_dual() - 1.0) * base.mobility;
            CHECK(norm(scaled.mobility - expected) <= 1e-5 * norm(expected));
        }
    }
}

TEST_CASE("monotone and coercive on random pairs") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    const auto profile = RoughnessProfile::eggbox(1.0, 0.3);
    const PowerLawFluid fluid(2.5);
    for (int trial = 0; trial < 4; ++trial) {
        const Vec2 a{coord(rng), coord(rng)};
        const Vec2 b{coord(rng), coord(rng)};
        const Vec2 fa = solve_cell3d(profile, 1.0, a, fluid, 8, 8).mobility;
        const Vec2 fb = solve_cell3d(profile, 1.0, b, fluid, 8, 8).mobility;
        CHECK(dot(fa - fb, a - b) >= -1e-8);
        CHECK(dot(fa, a) > 0.0);
    }
}

TEST_CASE("eggbox is quarter-turn equivariant") {
    const auto profile = RoughnessProfile::eggbox(1.0, 0.3);
    const Vec2 xi{0.9, 0.3};
    const auto a = solve_cell3d(profile, 1.0, xi, PowerLawFluid(3.0), 8, 8, 1e-8);
    const auto b = solve_cell3d(profile, 1.0, rotate90(xi), PowerLawFluid(3.0), 8, 8, 1e-8);
    CHECK(norm(b.mobility - rotate90(a.mobility)) <= 1e-6 * norm(a.mobility));
}

TEST_CASE("direction tables") {
    const auto flat = mobility_a_lambda(RoughnessProfile::flat(1.0), 1.0, PowerLawFluid(2.0), 4, 12, 12);
    REQUIRE(flat.size() == 4);
    CHECK(flat.source == TableSource::cell3d);
    CHECK(flat.lambda == 1.0);
    const Vec2 expected[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int k = 0; k < 4; ++k) {
        CHECK(norm(flat.values[k] - (1.0 / 6.0) * expected[k]) <= 0.05 / 6.0);
    }
    const auto egg = mobility_a_lambda(RoughnessProfile::eggbox(1.0, 0.3), 1.0, PowerLawFluid(2.5), 8, 8, 8, 1e-8,
                                       200, 4);
    for (int k = 0; k < 4; ++k) {
        CHECK(norm(egg.values[k] + egg.values[k + 4]) <= 1e-6 * norm(egg.values[k]));
        CHECK(norm(egg.values[(k + 2) % 8] - rotate90(egg.values[k])) <= 1e-6 * norm(egg.values[k]));
    }
}

TEST_CASE("wall sits at h between grid layers") {
    // A staircase wall would jump with the grid; the placed wall keeps the
    // thin-gap mobility consistent across resolutions.
    const auto profile = RoughnessProfile::ridge_x1(1.0, 0.5);
    const PowerLawFluid fluid(2.0);
    const double a16 = solve_cell3d(profile, 0.1, {1, 0}, fluid, 16, 16).mobility.x;
    const double a20 = solve_cell3d(profile, 0.1, {1, 0}, fluid, 20, 20).mobility.x;
    CHECK(std::abs(a16 - a20) <= 0.01 * a20);
}

TEST_CASE("small lambda approaches the scaled Reynolds-roughness mobility") {
    const auto profile = RoughnessProfile::ridge_x1(1.0, 0.5);
    const PowerLawFluid fluid(2.0);
    const double reynolds = solve_cell2d(profile, {1, 0}, fluid, 64).mobility.x / 6.0;
    double previous_gap = 1.0;
    for (double lambda : {1.0, 0.3, 0.1}) {
        const double gap =
            std::abs(solve_cell3d(profile, lambda, {1, 0}, fluid, 16, 16).mobility.x - reynolds) / reynolds;
        CHECK(gap < previous_gap);
        previous_gap = gap;
    }
    const double gap = std::abs(solve_cell3d(profile, 0.05, {1, 0}, fluid, 16, 16).mobility.x - reynolds) / reynolds;
    CHECK(gap < 0.1);
}

TEST_CASE("weak penalization leaks into the solid") {
    Cell3DOptions weak;
    weak.kappa = 1e-1;
    const auto sol =
        solve_cell3d(RoughnessProfile::ridge_x1(1.0, 0.5), 1.0, {1, 0}, PowerLawFluid(2.0), 8, 8, 1e-7, 200, weak);
    CHECK(sol.solid_velocity_ratio > 1e-3);
}

TEST_CASE("argument errors") {
    const auto flat = RoughnessProfile::flat(1.0);
    const PowerLawFluid fluid(2.0);
    CHECK_THROWS_AS(solve_cell3d(flat, 0.0, {1, 0}, fluid, 8, 8), std::invalid_argument);
    CHECK_THROWS_AS(solve_cell3d(flat, -1.0, {1, 0}, fluid, 8, 8), std::invalid_argument);
    CHECK_THROWS_AS(solve_cell3d(flat, 1.0, {1, 0}, fluid, 4, 8), std::invalid_argument);
    CHECK_THROWS_AS(solve_cell3d(flat, 1.0, {1, 0}, fluid, 8, 4), std::invalid_argument);
    CHECK_THROWS_AS(solve_cell3d(flat, 1.0, {NAN, 0}, fluid, 8, 8), std::invalid_argument);
    CHECK_THROWS_AS(mobility_a_lambda(flat, 1.0, fluid, 2, 8, 8), std::invalid_argument);
    CHECK_THROWS_AS(solve_cell3d(RoughnessProfile::eggbox(1.0, 0.3), 1.0, {1, 0}, PowerLawFluid(3.0), 8, 8, 1e-7, 1),
                    SolverError);
}

TEST_CASE("VTK dump") {
    const auto sol = solve_cell3d(RoughnessProfile::eggbox(1.0, 0.3), 1.0, {1, 0}, PowerLawFluid(2.0), 8, 8);
    const auto path = std::filesystem::temp_directory_path() / "thinfilm_cell3d_test.vtk";
    write_cell3d_vtk(sol, path.string());
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# vtk DataFile Version 3.0");
    int lines = 1;
    while (std::getline(in, line)) ++lines;
    // header (8) + velocity, pressure and mask blocks with their headers
    CHECK(lines == 8 + 1 + 512 + 2 + 512 + 2 + 512);
    std::filesystem::remove(path);
}
