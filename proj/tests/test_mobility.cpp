#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "thinfilm/cell_reynolds2d.hpp"
#include "thinfilm/mobility.hpp"

using namespace thinfilm;

namespace {

MobilityTable synthetic_table(int size, double p_dual) {
    // Smooth anisotropic response A(d) = M d with M symmetric positive definite.
    MobilityTable t;
    t.directions = table_directions(size);
    for (const Vec2& d : t.directions) t.values.push_back({2.0 * d.x + 0.5 * d.y, 0.5 * d.x + d.y});
    t.residuals.assign(size, 1e-9);
    t.iterations.assign(size, 7);
    t.p_dual = p_dual;
    t.source = TableSource::cell3d;
    return t;
}

std::vector<MobilityLaw> sample_laws(const PowerLawFluid& fluid) {
    std::vector<MobilityLaw> laws;
    laws.push_back(MobilityLaw::high_frequency(0.7, fluid));
    laws.push_back(MobilityLaw::flat_cell(1.3, fluid));
    laws.push_back(MobilityLaw::from_table(synthetic_table(16, fluid.p_dual()), fluid));
    return laws;
}

}  // namespace

TEST_CASE("closed-form examples") {
    CHECK(eval_mobility(MobilityLaw::high_frequency(1.0, PowerLawFluid(2.0)), {1, 0}).x ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    const Vec2 v = eval_mobility(MobilityLaw::high_frequency(1.0, PowerLawFluid(3.0)), {1, 0});
    CHECK(v.x == doctest::Approx(1.0 / (std::pow(2.0, 0.75) * 2.5)).epsilon(1e-15));
    CHECK(v.x == doctest::Approx(0.23784).epsilon(1e-5));
    CHECK(v.y == 0.0);
    CHECK(poiseuille_factor(2.0, 2.0) == doctest::Approx(8.0 / 6.0));
}

TEST_CASE("zero and oddness for every variant") {
    for (double p : {9.0 / 5.0, 2.0, 3.0}) {
        for (const MobilityLaw& law : sample_laws(PowerLawFluid(p))) {
            CHECK(eval_mobility(law, {0, 0}) == Vec2{0, 0});
            std::mt19937_64 rng(42);
            std::uniform_real_distribution<double> coord(-3.0, 3.0);
            for (int k = 0; k < 50; ++k) {
                const Vec2 g{coord(rng), coord(rng)};
                const Vec2 a = eval_mobility(law, g);
                const Vec2 b = eval_mobility(law, -1.0 * g);
                CHECK(norm(a + b) <= 1e-13 * norm(a));
            }
        }
    }
}

TEST_CASE("homogeneity of degree p'-1") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (double p : {9.0 / 5.0, 2.5, 3.0}) {
        const PowerLawFluid fluid(p);
        for (const MobilityLaw& law : sample_laws(fluid)) {
            for (int k = 0; k < 20; ++k) {
                const Vec2 g{coord(rng), coord(rng)};
                for (double t : {0.5, 2.0, 10.0}) {
                    const Vec2 expected = std::pow(t, fluid.p_dual() - 1.0) * eval_mobility(law, g);
                    CHECK(norm(eval_mobility(law, t * g) - expected) <= 1e-12 * norm(expected));
                }
            }
        }
    }
}

TEST_CASE("monotone on seeded random pairs") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (double p : {9.0 / 5.0, 2.0, 3.0}) {
        for (const MobilityLaw& law : sample_laws(PowerLawFluid(p))) {
            for (int k = 0; k < 100; ++k) {
                const Vec2 a{coord(rng), coord(rng)};
                const Vec2 b{coord(rng), coord(rng)};
                CHECK(dot(eval_mobility(law, a) - eval_mobility(law, b), a - b) >= -1e-8);
            }
        }
    }
}

TEST_CASE("regularized evaluation") {
    const auto law = MobilityLaw::high_frequency(1.0, PowerLawFluid(3.0));
    CHECK(law.eval({1, 0}, 0.0) == eval_mobility(law, {1, 0}));
    const Vec2 g{0.3, -0.4};
    CHECK(norm(law.eval(g, 1e-12) - eval_mobility(law, g)) <= 1e-14);
    const double c = law.secant_coefficient(g, 0.0);
    CHECK(norm(c * g - eval_mobility(law, g)) <= 1e-15);
    CHECK(law.secant_coefficient({0, 0}, 1e-3) > 0.0);
}

TEST_CASE("consistency scaling switch") {
    const PowerLawFluid fluid(3.0, 2.0);
    const double q = fluid.p_dual();
    const double base = poiseuille_factor(1.0, q);
    CHECK(eval_mobility(MobilityLaw::high_frequency(1.0, fluid), {1, 0}).x ==
          doctest::Approx(base * std::pow(2.0, -(q - 1.0))));
    CHECK(eval_mobility(MobilityLaw::flat_cell(1.0, fluid), {1, 0}).x ==
          doctest::Approx(base * std::pow(2.0, -(q - 1.0))));
    CHECK(eval_mobility(MobilityLaw::flat_cell(1.0, fluid, MuScaling::plain), {1, 0}).x == doctest::Approx(base / 2.0));
    // Both readings coincide for Newtonian fluids.
    const PowerLawFluid newtonian(2.0, 3.0);
    CHECK(eval_mobility(MobilityLaw::flat_cell(1.0, newtonian, MuScaling::plain), {1, 0}).x ==
          doctest::Approx(eval_mobility(MobilityLaw::flat_cell(1.0, newtonian), {1, 0}).x).epsilon(1e-15));
    CHECK(mu_scaling_from_string("plain") == MuScaling::plain);
    CHECK(to_string(MuScaling::dual_power) == "dual_power");
    CHECK_THROWS_AS(mu_scaling_from_string("linear"), std::invalid_argument);
}

TEST_CASE("table interpolation reproduces its samples and smooth responses") {
    const PowerLawFluid fluid(2.0);
    const MobilityTable table = synthetic_table(32, fluid.p_dual());
    const auto law = MobilityLaw::from_table(table, fluid, MuScaling::plain);
    for (std::size_t k = 0; k < table.size(); ++k) {
        CHECK(norm(law.unit_response(table.directions[k]) - table.values[k]) <= 1e-14);
    }
    for (double theta : {0.1, 1.0, 2.5, 4.0}) {
        const Vec2 d{std::cos(theta), std::sin(theta)};
        const Vec2 exact{2.0 * d.x + 0.5 * d.y, 0.5 * d.x + d.y};
        CHECK(norm(law.unit_response(d) - exact) <= 1e-4);
    }
    CHECK(law.is_table());
    CHECK(law.name() == "Table(cell3d)");
}

TEST_CASE("flat cell2d table agrees with the flat-cell law") {
    for (double p : {2.0, 3.0}) {
        const PowerLawFluid fluid(p);
        const MobilityTable table = mobility_a0(RoughnessProfile::flat(1.0), fluid, 16, 16);
        const auto tabulated = MobilityLaw::from_table(table, fluid);
        const auto flat = MobilityLaw::flat_cell(1.0, fluid);
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> coord(-2.0, 2.0);
        for (const Vec2& d : table.directions) {
            CHECK(norm(eval_mobility(tabulated, d) - eval_mobility(flat, d)) <= 1e-8);
        }
        for (int k = 0; k < 10; ++k) {
            const Vec2 g{coord(rng), coord(rng)};
            CHECK(norm(eval_mobility(tabulated, g) - eval_mobility(flat, g)) <= 1e-3 * norm(eval_mobility(flat, g)));
        }
    }
}

TEST_CASE("table CSV round trip") {
    MobilityTable table = synthetic_table(8, 1.5);
    table.values[3] = {1.0 / 3.0, -2.0 / 7.0};
    std::stringstream buffer;
    save_table_csv(table, buffer);
    const std::string text = buffer.str();
    CHECK(text.rfind("theta,A1,A2,residual,iters\n", 0) == 0);
    CHECK(text.find("3.33333333333e-01") != std::string::npos);
    const MobilityTable loaded = load_table_csv(buffer, 1.5, TableSource::cell3d, 0.5);
    REQUIRE(loaded.size() == 8);
    CHECK(loaded.source == TableSource::cell3d);
    CHECK(loaded.lambda == 0.5);
    CHECK(loaded.iterations[0] == 7);
    for (std::size_t k = 0; k < 8; ++k) {
        CHECK(norm(loaded.values[k] - table.values[k]) <= 1e-11 * norm(table.values[k]));
        CHECK(norm(loaded.directions[k] - table.directions[k]) == 0.0);
    }
    std::stringstream again;
    save_table_csv(loaded, again);
    CHECK(again.str() == text);
}

TEST_CASE("table loading errors") {
    std::stringstream no_header("0,1,0,0,1\n");
    CHECK_THROWS_AS(load_table_csv(no_header, 2.0, TableSource::cell2d), std::invalid_argument);
    std::stringstream empty("theta,A1,A2,residual,iters\n");
    CHECK_THROWS_AS(load_table_csv(empty, 2.0, TableSource::cell2d), std::invalid_argument);
    std::stringstream columns("theta,A1,A2,residual,iters\n0,1,0\n");
    CHECK_THROWS_AS(load_table_csv(columns, 2.0, TableSource::cell2d), std::invalid_argument);
    std::stringstream spacing("theta,A1,A2,residual,iters\n0,1,0,0,1\n1,0,1,0,1\n");
    CHECK_THROWS_AS(load_table_csv(spacing, 2.0, TableSource::cell2d), std::invalid_argument);
    CHECK_THROWS_AS(MobilityLaw::from_table(synthetic_table(8, 1.5), PowerLawFluid(2.0)), std::invalid_argument);
    CHECK_THROWS_AS(MobilityLaw::from_table(MobilityTable{}, PowerLawFluid(2.0)), std::invalid_argument);
    CHECK_THROWS_AS(MobilityLaw::high_frequency(0.0, PowerLawFluid(2.0)), std::invalid_argument);
    CHECK_THROWS_AS(eval_mobility(MobilityLaw::flat_cell(1.0, PowerLawFluid(2.0)), {NAN, 0}), std::invalid_argument);
}

TEST_CASE("regime classification") {
    const Regime stokes = regime_classify(1e-2, 1e-2);
    CHECK(stokes.kind == RegimeKind::stokes);
    CHECK(stokes.lambda == doctest::Approx(1.0));
    CHECK(regime_classify(1e-2, 1e-4).kind == RegimeKind::reynolds_roughness);
    CHECK(regime_classify(1e-4, 1e-2).kind == RegimeKind::high_frequency);
    CHECK(regime_classify(1.0, 5.0).kind == RegimeKind::stokes);
    CHECK(regime_classify(1.0, 5.0, 4.0).kind == RegimeKind::high_frequency);
    CHECK(to_string(RegimeKind::reynolds_roughness) == "ReynoldsRoughness");
    CHECK_THROWS_AS(regime_classify(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(regime_classify(1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(regime_classify(1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("table directions are uniform and exact at the compass points") {
    const auto dirs = table_directions(8);
    CHECK(dirs[0] == Vec2{1, 0});
    CHECK(dirs[2] == Vec2{0, 1});
    CHECK(dirs[4] == Vec2{-1, 0});
    CHECK(dirs[6] == Vec2{0, -1});
    for (const Vec2& d : dirs) CHECK(norm(d) == doctest::Approx(1.0).epsilon(1e-15));
}
