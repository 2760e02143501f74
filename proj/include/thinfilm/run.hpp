#pragma once

/**
 * @file run.hpp
 * @brief Builds solver inputs (profile, regime, law, force) from a RunConfig.
 */

#include <iosfwd>
#include <optional>

#include "thinfilm/config.hpp"
#include "thinfilm/geometry.hpp"
#include "thinfilm/macro_solver.hpp"
#include "thinfilm/mobility.hpp"
#include "thinfilm/rheology.hpp"

namespace thinfilm {

PowerLawFluid make_fluid(const RunConfig& config);
RoughnessProfile make_profile(const RunConfig& config);
MacroDomain make_domain(const RunConfig& config);
ForceField make_force(const RunConfig& config);

/// Fixed mode, or the classifier result for mode = auto.
Regime resolve_regime(const RunConfig& config);

struct BuiltLaw {
    MobilityLaw law;
    Regime regime;
    std::optional<MobilityTable> table;  ///< set when a cell table was solved or loaded
};

/**
 * @brief Mobility law for the configured regime.
 *
 * HighFrequency uses h_min. Reynolds-roughness and Stokes regimes use the
 * flat closed form for flat roughness, a table file when one is configured,
 * and otherwise solve the cell problem in every table direction. Per-direction
 * residuals go to `log` when given.
 */
BuiltLaw build_law(const RunConfig& config, int workers, std::ostream* log = nullptr);

/// Cell table for the 2D Reynolds cell problem.
MobilityTable build_cell2d_table(const RunConfig& config, int workers);
/// Cell table for the 3D Stokes cell problem at the configured lambda.
MobilityTable build_cell3d_table(const RunConfig& config, int workers);

/// Writes one line per direction: index, theta, A1, A2, residual, iterations.
void log_table(const MobilityTable& table, std::ostream& log);

}  // namespace thinfilm
