#include "thinfilm/validate.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "thinfilm/cell_reynolds2d.hpp"
#include "thinfilm/cell_stokes3d.hpp"
#include "thinfilm/macro_solver.hpp"
#include "thinfilm/mobility.hpp"
#include "thinfilm/run.hpp"

namespace thinfilm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
    const double h = (b - a) / intervals;
    double sum = f(a) + f(b);
    for (int k = 1; k < intervals; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    return sum * h / 3.0;
}

// Profile integral over [0, h]; each half is graded towards the kink at h/2.
double graded_profile_integral(const std::function<double(double)>& f, double h) {
    const double half = 0.5 * h;
    double total = 0.0;
    for (double sign : {-1.0, 1.0}) {
        total += simpson([&](double u) { return f(half + sign * half * u * u) * 2.0 * half * u; }, 0.0, 1.0, 512);
    }
    return total;
}

// Direct sparse solve of div(c (f - grad P)) = 0 with no-flux walls, using
// only face-normal force components.
std::vector<double> direct_linear_neumann(const MacroDomain& d, double c, const std::function<double(int, int)>& fx,
                                          const std::function<double(int, int)>& fy) {
    const int nx = d.nx, ny = d.ny, n = nx * ny;
    const double ax = c / (d.dx() * d.dx()), ay = c / (d.dy() * d.dy());
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
            auto link = [&](int other, double a) {
                trip.emplace_back(row, row, a);
                trip.emplace_back(row, other, -a);
            };
            if (i + 1 < nx) { link(id(i + 1, j), ax); rhs[row] -= c * fx(i + 1, j) / d.dx(); }
            if (i > 0) { link(id(i - 1, j), ax); rhs[row] += c * fx(i, j) / d.dx(); }
            if (j + 1 < ny) { link(id(i, j + 1), ay); rhs[row] -= c * fy(i, j + 1) / d.dy(); }
            if (j > 0) { link(id(i, j - 1), ay); rhs[row] += c * fy(i, j) / d.dy(); }
        }
    }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
    Eigen::VectorXd P = lu.solve(rhs);
    P.array() -= P.mean();
    return {P.data(), P.data() + n};
}

double relative_error(const Vec2& got, const Vec2& want) { return norm(got - want) / norm(want); }

double max_abs_flux(const MacroSolution& s) {
    double m = 0.0;
    for (double v : s.flux_x.values()) m = std::max(m, std::abs(v));
    for (double v : s.flux_y.values()) m = std::max(m, std::abs(v));
    return m;
}

// Largest |mass balance| and boundary-normal flux of a solution.
double balance_defect(const MacroSolution& s) {
    double m = std::abs(s.mass_balance);
    const int nx = s.domain.nx, ny = s.domain.ny;
    for (int j = 0; j < ny; ++j) m = std::max({m, std::abs(s.flux_x(0, j)), std::abs(s.flux_x(nx, j))});
    for (int i = 0; i < nx; ++i) m = std::max({m, std::abs(s.flux_y(i, 0)), std::abs(s.flux_y(i, ny))});
    return m;
}

class Suite {
public:
    void add(const std::string& name, double measured, double bound) {
        checks_.push_back({name, measured, bound, measured <= bound});
    }

    /// Runs body; a SolverError or invalid argument turns every named check into a FAIL.
    void guarded(const std::vector<std::pair<std::string, double>>& names, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception&) {
            for (const auto& [name, bound] : names) add(name, kNaN, bound);
        }
    }

    std::vector<ValidationCheck> take() { return std::move(checks_); }

private:
    std::vector<ValidationCheck> checks_;
};

}  // namespace

std::string format_check(const ValidationCheck& check) {
    char line[256];
    std::snprintf(line, sizeof line, "%s %.6e %.6e %s", check.name.c_str(), check.measured, check.bound,
                  check.pass ? "PASS" : "FAIL");
    return line;
}

std::vector<ValidationCheck> run_validation(const RunConfig& config, int workers) {
    Suite suite;
    const PowerLawFluid fluid = make_fluid(config).with_unit_consistency();
    const double p = fluid.p(), pd = fluid.p_dual();
    const ValidateConfig& v = config.validate;
    const SolverConfig& s = config.solver;
    const RoughnessProfile flat = RoughnessProfile::flat(1.0);
    const RoughnessProfile ridge = RoughnessProfile::ridge_x1(1.0, 0.5);
    const MacroDomain domain = make_domain(config);
    const double cell_tol = std::min(s.cell_tol, 1e-10);

    suite.guarded({{"flat_cell2d", 1e-8}}, [&] {
        const auto sol = solve_cell2d(flat, {1.0, 0.0}, fluid, v.cell_n, cell_tol, s.cell_max_iter);
        suite.add("flat_cell2d", relative_error(sol.mobility, {1.0, 0.0}), 1e-8);
    });

    Cell3DOptions options3d;
    options3d.kappa = s.kappa;
    suite.guarded({{"flat_cell3d", 5e-2}}, [&] {
        const auto sol = solve_cell3d(flat, config.regime.lambda, {1.0, 0.0}, fluid, v.cell3d_n, v.cell3d_n,
                                      s.cell3d_tol, s.cell3d_max_iter, options3d);
        suite.add("flat_cell3d", relative_error(sol.mobility, {poiseuille_factor(1.0, pd), 0.0}), 5e-2);
    });

    suite.guarded({{"harmonic_mean", 5e-3}}, [&] {
        const double integral = simpson(
            [&](double y) {
                return std::pow(1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * y), -(pd + 1.0) * (p - 1.0));
            },
            -0.5, 0.5, 1024);
        const double expected = std::pow(integral, -(pd - 1.0));
        const auto sol = solve_cell2d(ridge, {1.0, 0.0}, fluid, v.cell_n, cell_tol, s.cell_max_iter);
        suite.add("harmonic_mean", relative_error(sol.mobility, {expected, 0.0}), 5e-3);
    });

    {
        const MobilityLaw laws[] = {MobilityLaw::high_frequency(0.5, fluid), MobilityLaw::flat_cell(1.0, fluid)};
        double worst = 0.0;
        for (const MobilityLaw& law : laws) {
            for (const Vec2 xi : {Vec2{1.0, 0.0}, Vec2{0.3, -0.7}, Vec2{-2.0, 1.5}}) {
                for (double t : {0.5, 2.0, 10.0}) {
                    const Vec2 scaled = std::pow(t, pd - 1.0) * eval_mobility(law, xi);
                    worst = std::max(worst, relative_error(eval_mobility(law, t * xi), scaled));
                }
            }
        }
        suite.add("homogeneity_closed_form", worst, 1e-12);
    }

    suite.guarded({{"homogeneity_cell2d", 1e-5}}, [&] {
        const Vec2 xi{0.6, 0.8};
        const Vec2 base = solve_cell2d(ridge, xi, fluid, v.cell_n, cell_tol, s.cell_max_iter).mobility;
        double worst = 0.0;
        for (double t : {0.5, 2.0, 10.0}) {
            const Vec2 got = solve_cell2d(ridge, t * xi, fluid, v.cell_n, cell_tol, s.cell_max_iter).mobility;
            worst = std::max(worst, relative_error(got, std::pow(t, pd - 1.0) * base));
        }
        suite.add("homogeneity_cell2d", worst, 1e-5);
    });

    suite.guarded({{"monotonicity", 1e-8}}, [&] {
        std::vector<MobilityLaw> laws{MobilityLaw::high_frequency(0.5, fluid), MobilityLaw::flat_cell(1.0, fluid)};
        laws.push_back(MobilityLaw::from_table(
            mobility_a0(ridge, fluid, s.table_size, std::min(v.cell_n, 32), cell_tol, s.cell_max_iter, workers),
            fluid));
        std::mt19937_64 rng(static_cast<std::uint64_t>(v.seed));
        std::uniform_real_distribution<double> coord(-2.0, 2.0);
        double violation = 0.0;
        for (const MobilityLaw& law : laws) {
            for (int k = 0; k < v.pairs; ++k) {
                const Vec2 a{coord(rng), coord(rng)};
                const Vec2 b{coord(rng), coord(rng)};
                violation = std::max(violation, -dot(eval_mobility(law, a) - eval_mobility(law, b), a - b));
            }
        }
        suite.add("monotonicity", violation, 1e-8);
    });

    {
        double worst = 0.0;
        for (double h : {0.5, 1.0, 2.0}) {
            const MobilityLaw law = MobilityLaw::high_frequency(h, fluid);
            const double flux = graded_profile_integral(
                [&](double y3) { return velocity_profile({1.0, 0.0}, h, fluid, y3).x; }, h);
            const double expected = eval_mobility(law, {1.0, 0.0}).x;
            worst = std::max(worst, std::abs(flux - expected) / expected);
        }
        suite.add("profile_integral", worst, 1e-10);
    }

    suite.guarded({{"cell3d_no_slip", 1e-3}, {"cell3d_divergence", s.cell3d_tol}}, [&] {
        const auto sol = solve_cell3d(ridge, config.regime.lambda, {1.0, 0.0}, fluid, v.cell3d_n, v.cell3d_n,
                                      s.cell3d_tol, s.cell3d_max_iter, options3d);
        suite.add("cell3d_no_slip", sol.solid_velocity_ratio, 1e-3);
        suite.add("cell3d_divergence", sol.max_divergence, s.cell3d_tol);
    });

    double balance = 0.0;
    suite.guarded({{"linear_oracle", 1e-8}}, [&] {
        const PowerLawFluid newtonian(2.0, 1.0, 0.0);
        const MobilityLaw law = MobilityLaw::high_frequency(1.0, newtonian);
        const double omega = 1.0;
        const auto sol = solve_macro(domain, law, ForceField::rotational(omega), std::min(s.tol, 1e-10), s.max_iter);
        balance = std::max(balance, balance_defect(sol));
        const double c = eval_mobility(law, {1.0, 0.0}).x;
        const auto expected = direct_linear_neumann(
            domain, c, [&](int, int j) { return -omega * (domain.y(j) - 0.5 * domain.L2); },
            [&](int i, int) { return omega * (domain.x(i) - 0.5 * domain.L1); });
        double diff = 0.0, ref = 0.0;
        for (std::size_t k = 0; k < expected.size(); ++k) {
            diff += std::pow(sol.pressure.values()[k] - expected[k], 2);
            ref += expected[k] * expected[k];
        }
        suite.add("linear_oracle", std::sqrt(diff / ref), 1e-8);
    });

    suite.guarded({{"conservative_null_flux", 1e-10}, {"conservative_null_pressure", 1e-8}}, [&] {
        const MobilityLaw law = MobilityLaw::high_frequency(1.0, fluid);
        const ForceField force = ForceField::gradient_of(Potential::sin_cos);
        const auto sol = solve_macro(domain, law, force, std::min(s.tol, 1e-9), s.max_iter);
        balance = std::max(balance, balance_defect(sol));
        double mean_phi = 0.0;
        for (int j = 0; j < domain.ny; ++j) {
            for (int i = 0; i < domain.nx; ++i) mean_phi += force.potential_at(domain, domain.x(i), domain.y(j));
        }
        mean_phi /= domain.nx * domain.ny;
        double error = 0.0;
        for (int j = 0; j < domain.ny; ++j) {
            for (int i = 0; i < domain.nx; ++i) {
                const double phi = force.potential_at(domain, domain.x(i), domain.y(j)) - mean_phi;
                error = std::max(error, std::abs(sol.pressure(i, j) - phi));
            }
        }
        suite.add("conservative_null_flux", max_abs_flux(sol), 1e-10);
        suite.add("conservative_null_pressure", error, 1e-8);
    });

    suite.add("mass_balance", balance, 1e-13);
    return suite.take();
}

}  // namespace thinfilm
