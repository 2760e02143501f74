#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "thinfilm/cell_reynolds2d.hpp"
#include "thinfilm/errors.hpp"
#include "thinfilm/macro_solver.hpp"

using namespace thinfilm;

namespace {

double max_abs(const Field2& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

double max_flux(const MacroSolution& s) { return std::max(max_abs(s.flux_x), max_abs(s.flux_y)); }

void check_solution_invariants(const MacroSolution& s) {
    const int nx = s.domain.nx;
    const int ny = s.domain.ny;
    CHECK(std::abs(s.pressure.mean()) <= 1e-12);
    CHECK(std::abs(s.mass_balance) <= 1e-13);
    for (int j = 0; j < ny; ++j) {
        CHECK(s.flux_x(0, j) == 0.0);
        CHECK(s.flux_x(nx, j) == 0.0);
    }
    for (int i = 0; i < nx; ++i) {
        CHECK(s.flux_y(i, 0) == 0.0);
        CHECK(s.flux_y(i, ny) == 0.0);
    }
    const Field2 div = flux_divergence(s.flux_x, s.flux_y, s.domain.dx(), s.domain.dy());
    const double length = std::max(s.domain.L1, s.domain.L2);
    CHECK(max_abs(div) * length / s.flux_scale <= s.residual * (1.0 + 1e-12));
    for (std::size_t k = s.continuation_end + 1; k < s.residual_history.size(); ++k) {
        CHECK(s.residual_history[k] <= s.residual_history[k - 1]);
    }
}

}  // namespace

TEST_CASE("constant force is balanced by a linear pressure") {
    const MacroDomain domain{2.0, 1.0, 32, 16};
    for (double p : {2.0, 3.0}) {
        const auto law = MobilityLaw::flat_cell(1.0, PowerLawFluid(p));
        const auto s = solve_macro(domain, law, ForceField::constant({1.0, -0.5}), 1e-9);
        for (int j = 0; j < domain.ny; ++j) {
            for (int i = 0; i < domain.nx; ++i) {
                const double expected = (domain.x(i) - 1.0) - 0.5 * (domain.y(j) - 0.5);
                CHECK(std::abs(s.pressure(i, j) - expected) <= 1e-9);
            }
        }
        CHECK(max_flux(s) <= 1e-10);
        check_solution_invariants(s);
    }
}

TEST_CASE("gradient forces leave no flow") {
    const MacroDomain domain{1.0, 1.0, 64, 64};
    for (Potential potential : {Potential::sin_x, Potential::sin_cos}) {
        const ForceField force = ForceField::gradient_of(potential);
        Field2 phi(domain.nx, domain.ny);
        for (int j = 0; j < domain.ny; ++j) {
            for (int i = 0; i < domain.nx; ++i) {
                const double x = domain.x(i), y = domain.y(j);
                phi(i, j) = potential == Potential::sin_x
                                ? std::sin(2.0 * std::numbers::pi * x)
                                : std::sin(2.0 * std::numbers::pi * x) * std::cos(2.0 * std::numbers::pi * y);
            }
        }
        phi.subtract_mean();
        for (double p : {2.0, 3.0}) {
            const auto s = solve_macro(domain, MobilityLaw::high_frequency(0.8, PowerLawFluid(p)), force, 1e-9);
            double err = 0.0;
            for (std::size_t k = 0; k < phi.size(); ++k) err = std::max(err, std::abs(s.pressure.values()[k] - phi.values()[k]));
            CHECK(err <= 1e-8);
            CHECK(max_flux(s) <= 1e-10);
            check_solution_invariants(s);
        }
    }
}

TEST_CASE("linear case matches a direct Neumann solve") {
    for (const MacroDomain& domain : {MacroDomain{1.0, 1.0, 64, 64}, MacroDomain{1.5, 1.0, 48, 32}}) {
        const PowerLawFluid fluid(2.0, 1.5);
        const auto law = MobilityLaw::flat_cell(0.9, fluid);
        const auto s = solve_macro(domain, law, ForceField::rotational(1.0));
        std::vector<double> fx, fy;
        oracle::rotational_face_force(domain.nx, domain.ny, domain.L1, domain.L2, 1.0, fx, fy);
        const double c = std::pow(0.9, 3.0) / 6.0 / 1.5;
        const std::vector<double> expected =
            oracle::linear_neumann(domain.nx, domain.ny, domain.dx(), domain.dy(), c, fx, fy);
        double diff = 0.0, ref = 0.0;
        for (std::size_t k = 0; k < expected.size(); ++k) {
            diff += std::pow(s.pressure.values()[k] - expected[k], 2);
            ref += expected[k] * expected[k];
        }
        CHECK(std::sqrt(diff / ref) <= 1e-8);
        CHECK(s.iterations == 1);
        check_solution_invariants(s);
    }
}

TEST_CASE("nonlinear rotational flow converges for every law") {
    const MacroDomain domain{1.0, 1.0, 32, 32};
    for (double p : {9.0 / 5.0, 3.0}) {
        const PowerLawFluid fluid(p);
        std::vector<MobilityLaw> laws{MobilityLaw::high_frequency(0.7, fluid), MobilityLaw::flat_cell(1.0, fluid)};
        laws.push_back(MobilityLaw::from_table(mobility_a0(RoughnessProfile::eggbox(1.0, 0.3), fluid, 16, 16), fluid));
        for (const MobilityLaw& law : laws) {
            const auto s = solve_macro(domain, law, ForceField::rotational(1.0));
            CHECK(s.residual <= 1e-8);
            CHECK(max_flux(s) > 1e-3);
            check_solution_invariants(s);
        }
    }
}

TEST_CASE("anisotropic table law") {
    MobilityTable table;
    table.directions = table_directions(16);
    for (const Vec2& d : table.directions) table.values.push_back({2.0 * d.x + 0.5 * d.y, 0.5 * d.x + d.y});
    table.p_dual = 2.0;
    table.source = TableSource::cell3d;
    const auto law = MobilityLaw::from_table(table, PowerLawFluid(2.0));
    const auto s = solve_macro({1.0, 1.0, 32, 32}, law, ForceField::rotational(2.0));
    CHECK(s.residual <= 1e-8);
    CHECK(s.iterations > 1);
    check_solution_invariants(s);
}

TEST_CASE("custom grid force equals the sampled constant force") {
    const MacroDomain domain{1.0, 2.0, 16, 24};
    const auto law = MobilityLaw::flat_cell(1.0, PowerLawFluid(2.5));
    const auto a = solve_macro(domain, law, ForceField::constant({0.3, 0.7}));
    const auto b =
        solve_macro(domain, law, ForceField::custom(Field2(domain.nx, domain.ny, 0.3), Field2(domain.nx, domain.ny, 0.7)));
    for (std::size_t k = 0; k < a.pressure.size(); ++k) {
        CHECK(std::abs(a.pressure.values()[k] - b.pressure.values()[k]) <= 1e-10);
    }
    CHECK_THROWS_AS(solve_macro({1.0, 1.0, 8, 8}, law, ForceField::custom(Field2(4, 4), Field2(4, 4))),
                    std::invalid_argument);
}

TEST_CASE("zero force returns the trivial solution") {
    const auto s = solve_macro({1.0, 1.0, 8, 8}, MobilityLaw::flat_cell(1.0, PowerLawFluid(3.0)),
                               ForceField::rotational(0.0));
    CHECK(s.iterations == 0);
    CHECK(max_abs(s.pressure) == 0.0);
    CHECK(max_flux(s) == 0.0);
}

TEST_CASE("non-convergence carries the residual history") {
    const auto law = MobilityLaw::flat_cell(1.0, PowerLawFluid(3.0));
    try {
        solve_macro({1.0, 1.0, 16, 16}, law, ForceField::rotational(1.0), 1e-8, 3);
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        CHECK(e.residual_history().size() >= 3);
    }
    CHECK_THROWS_AS(solve_macro({1.0, 1.0, 16, 16}, law, ForceField::rotational(1.0), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_macro({1.0, 1.0, 2, 16}, law, ForceField::rotational(1.0)), std::invalid_argument);
}

TEST_CASE("velocity profile examples") {
    const PowerLawFluid newtonian(2.0);
    const Vec2 v = velocity_profile({1, 0}, 1.0, newtonian, 0.5);
    CHECK(v.x == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(v.y == 0.0);
    CHECK(velocity_profile({1, 2}, 1.3, PowerLawFluid(3.0), 0.0) == Vec2{0, 0});
    CHECK(norm(velocity_profile({1, 2}, 1.3, PowerLawFluid(3.0), 1.3)) <= 1e-15);
    CHECK_THROWS_AS(velocity_profile({1, 0}, 1.0, newtonian, 1.01), std::invalid_argument);
    CHECK_THROWS_AS(velocity_profile({1, 0}, 1.0, newtonian, -0.01), std::invalid_argument);
    CHECK_THROWS_AS(velocity_profile({1, 0}, 0.0, newtonian, 0.0), std::invalid_argument);
}

TEST_CASE("profile integrates to the film flux") {
    for (double p : {2.0, 2.5, 3.0}) {
        for (double h : {0.5, 1.0, 2.0}) {
            const PowerLawFluid fluid(p, 1.3);
            const Vec2 G{0.6, -1.1};
            const Vec2 flux = eval_mobility(MobilityLaw::high_frequency(h, fluid), G);
            const double ix = oracle::kinked_profile_integral(
                [&](double y) { return velocity_profile(G, h, fluid, y).x; }, h);
            const double iy = oracle::kinked_profile_integral(
                [&](double y) { return velocity_profile(G, h, fluid, y).y; }, h);
            CHECK(std::abs(ix - flux.x) <= 1e-10 * std::abs(flux.x));
            CHECK(std::abs(iy - flux.y) <= 1e-10 * std::abs(flux.y));
            // Plain Simpson over [0, h] resolves the mid-height kink less well.
            const double plain = oracle::simpson([&](double y) { return velocity_profile(G, h, fluid, y).x; }, 0.0, h);
            CHECK(std::abs(plain - flux.x) <= 1e-8 * std::abs(flux.x));
        }
    }
}

TEST_CASE("Reynolds-roughness cell velocity") {
    const PowerLawFluid fluid(2.5, 3.0);
    const PowerLawFluid unit(2.5, 1.0);
    const Vec2 xi{0.4, 0.9};
    for (double y : {0.0, 0.3, 0.7, 1.2}) {
        CHECK(norm(cell_velocity_profile_2d(1.2, {0, 0}, xi, fluid, y) + velocity_profile(xi, 1.2, unit, y)) <= 1e-15);
    }
    const Vec2 g{0.3, -0.2};
    const Vec2 total = xi + g;
    const double q = fluid.p_dual();
    const double integral =
        oracle::kinked_profile_integral([&](double y) { return cell_velocity_profile_2d(1.2, g, xi, fluid, y).x; }, 1.2);
    const double expected = -oracle::film_flux(1.2, 2.5) * std::pow(norm(total), q - 2.0) * total.x;
    CHECK(integral == doctest::Approx(expected).epsilon(1e-10));
    CHECK(norm(cell_velocity_profile_2d(1.0, {0, 0}, {1, 0}, PowerLawFluid(2.0), 0.5)) == doctest::Approx(0.25));
}

TEST_CASE("field output") {
    const MacroDomain domain{1.0, 1.0, 8, 6};
    const auto s = solve_macro(domain, MobilityLaw::flat_cell(1.0, PowerLawFluid(2.0)), ForceField::rotational(1.0));
    const auto dir = std::filesystem::temp_directory_path();
    const auto csv = dir / "thinfilm_macro_test.csv";
    const auto vtk = dir / "thinfilm_macro_test.vtk";
    write_field_csv(s, csv.string());
    write_field_vtk(s, vtk.string());
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,y,P,Vx,Vy");
    std::getline(in, line);
    CHECK(line.rfind("6.25000000000e-02,8.33333333333e-02,", 0) == 0);
    int rows = 1;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 48);
    std::ifstream v(vtk);
    std::getline(v, line);
    CHECK(line == "# vtk DataFile Version 3.0");
    std::filesystem::remove(csv);
    std::filesystem::remove(vtk);
}

TEST_CASE("force kinds round-trip through their names") {
    for (ForceKind k : {ForceKind::constant, ForceKind::gradient_of, ForceKind::rotational, ForceKind::custom}) {
        CHECK(force_kind_from_string(to_string(k)) == k);
    }
    CHECK(potential_from_string("sin_cos") == Potential::sin_cos);
    CHECK_THROWS_AS(force_kind_from_string("gravity"), std::invalid_argument);
    CHECK_THROWS_AS(ForceField::constant({NAN, 0}), std::invalid_argument);
}
