#pragma once

/**
 * @file validate.hpp
 * @brief Built-in oracle and property checks, run by `thinfilm validate`.
 *
 * Every check compares a solver result against an independent reference
 * (closed form, quadrature or direct sparse solve) or a structural property.
 * Roughness, grids, kappa and the seed come from the config; the fixed test
 * geometries are a flat film and the ridge 1 + 0.5 cos(2 pi y1).
 */

#include <string>
#include <vector>

#include "thinfilm/config.hpp"

namespace thinfilm {

struct ValidationCheck {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
};

std::vector<ValidationCheck> run_validation(const RunConfig& config, int workers);

/// `name measured bound PASS|FAIL`
std::string format_check(const ValidationCheck& check);

}  // namespace thinfilm
