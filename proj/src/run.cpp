#include "thinfilm/run.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "thinfilm/cell_reynolds2d.hpp"
#include "thinfilm/cell_stokes3d.hpp"

namespace thinfilm {

PowerLawFluid make_fluid(const RunConfig& config) {
    return PowerLawFluid(config.fluid.p, config.fluid.mu, config.fluid.delta_reg);
}

RoughnessProfile make_profile(const RunConfig& config) {
    const RoughnessConfig& r = config.roughness;
    switch (roughness_kind_from_string(r.kind)) {
        case RoughnessKind::flat: return RoughnessProfile::flat(r.base);
        case RoughnessKind::ridge_x1: return RoughnessProfile::ridge_x1(r.base, r.amplitude);
        case RoughnessKind::ridge_x2: return RoughnessProfile::ridge_x2(r.base, r.amplitude);
        case RoughnessKind::eggbox: return RoughnessProfile::eggbox(r.base, r.amplitude);
        case RoughnessKind::custom_grid: return RoughnessProfile::load_csv(r.file);
    }
    throw std::logic_error("unhandled roughness kind");
}

MacroDomain make_domain(const RunConfig& config) {
    return {config.domain.L1, config.domain.L2, config.domain.nx, config.domain.ny};
}

ForceField make_force(const RunConfig& config) {
    const ForceConfig& f = config.force;
    switch (force_kind_from_string(f.kind)) {
        case ForceKind::constant: return ForceField::constant({f.c1, f.c2});
        case ForceKind::gradient_of: return ForceField::gradient_of(potential_from_string(f.potential));
        case ForceKind::rotational: return ForceField::rotational(f.omega);
        case ForceKind::custom: return ForceField::load_csv(f.file, config.domain.nx, config.domain.ny);
    }
    throw std::logic_error("unhandled force kind");
}

Regime resolve_regime(const RunConfig& config) {
    const std::string& mode = config.regime.mode;
    if (mode == "auto") return regime_classify(config.regime.eps, config.regime.eta, config.regime.threshold);
    if (mode == "stokes") return {RegimeKind::stokes, config.regime.lambda};
    if (mode == "reynolds") return {RegimeKind::reynolds_roughness, 0.0};
    return {RegimeKind::high_frequency, 0.0};
}

MobilityTable build_cell2d_table(const RunConfig& config, int workers) {
    const SolverConfig& s = config.solver;
    return mobility_a0(make_profile(config), make_fluid(config), s.table_size, s.cell_n, s.cell_tol, s.cell_max_iter,
                       workers);
}

MobilityTable build_cell3d_table(const RunConfig& config, int workers) {
    const SolverConfig& s = config.solver;
    const Regime regime = resolve_regime(config);
    const double lambda = regime.kind == RegimeKind::stokes ? regime.lambda : config.regime.lambda;
    Cell3DOptions options;
    options.kappa = s.kappa;
    return mobility_a_lambda(make_profile(config), lambda, make_fluid(config), s.table_size, s.cell3d_n, s.cell3d_nz,
                             s.cell3d_tol, s.cell3d_max_iter, workers, options);
}

void log_table(const MobilityTable& table, std::ostream& log) {
    char line[200];
    for (std::size_t k = 0; k < table.size(); ++k) {
        const Vec2& d = table.directions[k];
        std::snprintf(line, sizeof line, "direction %zu theta=%.6f A=(%.6e, %.6e) residual=%.3e iterations=%d\n", k,
                      std::atan2(d.y, d.x), table.values[k].x, table.values[k].y, table.residuals[k],
                      table.iterations[k]);
        log << line;
    }
}

BuiltLaw build_law(const RunConfig& config, int workers, std::ostream* log) {
    const PowerLawFluid fluid = make_fluid(config);
    const RoughnessProfile profile = make_profile(config);
    const MuScaling scaling = mu_scaling_from_string(config.regime.mu_scaling);
    const Regime regime = resolve_regime(config);

    if (regime.kind == RegimeKind::high_frequency) {
        return {MobilityLaw::high_frequency(profile.h_min(), fluid), regime, std::nullopt};
    }
    if (profile.kind() == RoughnessKind::flat) {
        return {MobilityLaw::flat_cell(profile.base(), fluid, scaling), regime, std::nullopt};
    }
    const TableSource source = regime.kind == RegimeKind::stokes ? TableSource::cell3d : TableSource::cell2d;
    MobilityTable table;
    if (!config.solver.table_file.empty()) {
        table = load_table_csv(config.solver.table_file, fluid.p_dual(), source, regime.lambda);
    } else if (source == TableSource::cell2d) {
        table = build_cell2d_table(config, workers);
    } else {
        table = build_cell3d_table(config, workers);
    }
    if (log) log_table(table, *log);
    MobilityLaw law = MobilityLaw::from_table(table, fluid, scaling);
    return {std::move(law), regime, std::move(table)};
}

}  // namespace thinfilm
