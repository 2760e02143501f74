// thinfilm: cell tables, macroscopic solves, velocity profiles and the
// validation suite for power-law thin films over rough surfaces.
//
// Exit codes: 0 success, 2 configuration error, 3 solver non-convergence,
// 4 validation failure, 1 anything else.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "thinfilm/cell_stokes3d.hpp"
#include "thinfilm/config.hpp"
#include "thinfilm/errors.hpp"
#include "thinfilm/macro_solver.hpp"
#include "thinfilm/parallel.hpp"
#include "thinfilm/run.hpp"
#include "thinfilm/validate.hpp"

namespace fs = std::filesystem;
using namespace thinfilm;

namespace {

enum Exit { ok = 0, other = 1, config_error = 2, solver_error = 3, validation_failed = 4 };

struct Context {
    RunConfig config;
    fs::path out;
    int workers = 1;
};

std::ofstream open_output(const fs::path& path) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write '" + path.string() + "'");
    return file;
}

// Echo to stdout and to the run log.
class Log {
public:
    explicit Log(const fs::path& path) : file_(open_output(path)) {}
    void line(const std::string& text) {
        std::cout << text << '\n';
        file_ << text << '\n';
    }
    std::ostream& file() { return file_; }

private:
    std::ofstream file_;
};

std::string format(const char* fmt, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, value);
    return buf;
}

int cmd_cell(const Context& ctx, bool three_d) {
    const std::string name = three_d ? "cell3d" : "cell2d";
    Log log(ctx.out / (name + ".log"));
    log.line(name + ": roughness " + ctx.config.roughness.kind + ", p = " + format("%.6g", ctx.config.fluid.p) +
             ", table_size = " + std::to_string(ctx.config.solver.table_size));
    const MobilityTable table = three_d ? build_cell3d_table(ctx.config, ctx.workers)
                                        : build_cell2d_table(ctx.config, ctx.workers);
    log_table(table, log.file());
    const fs::path csv = ctx.out / ("table_" + name + ".csv");
    save_table_csv(table, csv.string());
    if (three_d && ctx.config.output.vtk) {
        const SolverConfig& s = ctx.config.solver;
        Cell3DOptions options;
        options.kappa = s.kappa;
        const Regime regime = resolve_regime(ctx.config);
        const double lambda = regime.kind == RegimeKind::stokes ? regime.lambda : ctx.config.regime.lambda;
        const auto sol = solve_cell3d(make_profile(ctx.config), lambda, {1.0, 0.0}, make_fluid(ctx.config),
                                      s.cell3d_n, s.cell3d_nz, s.cell3d_tol, s.cell3d_max_iter, options);
        write_cell3d_vtk(sol, (ctx.out / "cell3d.vtk").string());
    }
    const double worst = *std::max_element(table.residuals.begin(), table.residuals.end());
    log.line("max residual " + format("%.3e", worst));
    log.line("wrote " + csv.string());
    return ok;
}

int cmd_solve(const Context& ctx) {
    const RunConfig& c = ctx.config;
    Log log(ctx.out / "solve.log");
    const BuiltLaw built = build_law(c, ctx.workers, &log.file());
    if (built.table) save_table_csv(*built.table, (ctx.out / "table_used.csv").string());

    MacroOptions options;
    options.relax = c.solver.relax;
    const MacroSolution sol = solve_macro(make_domain(c), built.law, make_force(c), c.solver.tol, c.solver.max_iter,
                                          options);
    write_field_csv(sol, (ctx.out / "field.csv").string());
    if (c.output.vtk) write_field_vtk(sol, (ctx.out / "field.vtk").string());

    double max_v = 0.0, boundary = 0.0;
    for (int j = 0; j < sol.domain.ny; ++j) {
        for (int i = 0; i < sol.domain.nx; ++i) max_v = std::max(max_v, norm(sol.cell_flux(i, j)));
        boundary = std::max({boundary, std::abs(sol.flux_x(0, j)), std::abs(sol.flux_x(sol.domain.nx, j))});
    }
    for (int i = 0; i < sol.domain.nx; ++i) {
        boundary = std::max({boundary, std::abs(sol.flux_y(i, 0)), std::abs(sol.flux_y(i, sol.domain.ny))});
    }

    std::ostringstream summary;
    summary << "regime=" << to_string(built.regime.kind) << '\n'
            << "law=" << built.law.name() << '\n'
            << "force=" << c.force.kind << '\n'
            << "residual=" << format("%.6e", sol.residual) << '\n'
            << "tol=" << format("%.6e", c.solver.tol) << '\n'
            << "iterations=" << sol.iterations << '\n'
            << "max|V|=" << format("%.6e", max_v) << '\n'
            << "mass_balance=" << format("%.6e", sol.mass_balance) << '\n'
            << "max_boundary_flux=" << format("%.6e", boundary) << '\n';
    open_output(ctx.out / "summary.txt") << summary.str();
    std::istringstream lines(summary.str());
    for (std::string line; std::getline(lines, line);) log.line(line);
    return ok;
}

int cmd_profile(const Context& ctx) {
    const RunConfig& c = ctx.config;
    const PowerLawFluid fluid = make_fluid(c);
    const double h = c.profile.h > 0.0 ? c.profile.h : make_profile(c).h_min();
    const Vec2 G{c.profile.g1, c.profile.g2};
    std::ofstream csv = open_output(ctx.out / "profile.csv");
    csv << "y3,v1,v2\n";
    char row[128];
    for (int k = 0; k < c.profile.samples; ++k) {
        const double y3 = h * k / (c.profile.samples - 1);
        const Vec2 v = velocity_profile(G, h, fluid, y3);
        std::snprintf(row, sizeof row, "%.11e,%.11e,%.11e\n", y3, v.x, v.y);
        csv << row;
    }
    std::cout << "profile: h = " << format("%.6g", h) << ", " << c.profile.samples << " samples, wrote "
              << (ctx.out / "profile.csv").string() << '\n';
    return ok;
}

int cmd_validate(const Context& ctx) {
    Log log(ctx.out / "validate.txt");
    bool all = true;
    for (const ValidationCheck& check : run_validation(ctx.config, ctx.workers)) {
        log.line(format_check(check));
        all = all && check.pass;
    }
    return all ? ok : validation_failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Power-law thin-film lubrication over rough surfaces"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    int workers = default_workers();
    std::optional<int> seed;
    app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
    app.add_option("--workers", workers, "worker threads for direction tables")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "seed for randomized checks (overrides [validate] seed)");

    auto* cell2d = app.add_subcommand("cell2d", "mobility table from the 2D Reynolds cell problem");
    auto* cell3d = app.add_subcommand("cell3d", "mobility table from the 3D Stokes cell problem");
    auto* solve = app.add_subcommand("solve", "macroscopic pressure and flux");
    auto* profile = app.add_subcommand("profile", "velocity profile across the film");
    auto* validate = app.add_subcommand("validate", "oracle and property checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        Context ctx;
        if (config_path.empty()) {
            ctx.config.check();
        } else {
            ctx.config = load_config(config_path);
        }
        if (!out_dir.empty()) ctx.config.output.dir = out_dir;
        if (seed) ctx.config.validate.seed = *seed;
        ctx.out = ctx.config.output.dir;
        ctx.workers = workers;
        fs::create_directories(ctx.out);

        if (*cell2d) return cmd_cell(ctx, false);
        if (*cell3d) return cmd_cell(ctx, true);
        if (*solve) return cmd_solve(ctx);
        if (*profile) return cmd_profile(ctx);
        if (*validate) return cmd_validate(ctx);
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return solver_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return other;
    }
    return other;
}
