#pragma once

/**
 * @file config.hpp
 * @brief Run configuration: an INI file with fixed sections and keys.
 *
 * Anything outside the schema, or a value that does not parse, raises
 * ConfigError; so do settings that contradict each other.
 */

#include <iosfwd>
#include <string>

#include "thinfilm/errors.hpp"

namespace thinfilm {

struct FluidConfig {
    double p = 2.0;
    double mu = 1.0;
    double delta_reg = 1e-8;

    friend bool operator==(const FluidConfig&, const FluidConfig&) = default;
};

struct RegimeConfig {
    std::string mode = "highfreq";  ///< stokes | reynolds | highfreq | auto
    double lambda = 1.0;
    double eps = 0.0;
    double eta = 0.0;
    double threshold = 10.0;
    std::string mu_scaling = "dual_power";

    friend bool operator==(const RegimeConfig&, const RegimeConfig&) = default;
};

struct RoughnessConfig {
    std::string kind = "flat";  ///< flat | ridge_x1 | ridge_x2 | eggbox | custom_grid
    double base = 1.0;
    double amplitude = 0.0;
    std::string file;  ///< CSV grid for custom_grid

    friend bool operator==(const RoughnessConfig&, const RoughnessConfig&) = default;
};

struct DomainConfig {
    double L1 = 1.0;
    double L2 = 1.0;
    int nx = 64;
    int ny = 64;

    friend bool operator==(const DomainConfig&, const DomainConfig&) = default;
};

struct ForceConfig {
    std::string kind = "rotational";  ///< constant | gradient_of | rotational | custom
    double c1 = 1.0;
    double c2 = 0.0;
    std::string potential = "sin_cos";
    double omega = 1.0;
    std::string file;

    friend bool operator==(const ForceConfig&, const ForceConfig&) = default;
};

struct SolverConfig {
    double tol = 1e-8;
    int max_iter = 500;
    double relax = 0.7;
    double cell_tol = 1e-8;
    int cell_max_iter = 500;
    int cell_n = 32;
    double cell3d_tol = 1e-7;
    int cell3d_max_iter = 200;
    int cell3d_n = 16;
    int cell3d_nz = 16;
    double kappa = 1e-6;
    int table_size = 16;
    std::string table_file;  ///< precomputed table; skips the cell solves

    friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct OutputConfig {
    std::string dir = "out";
    bool vtk = false;

    friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct ProfileConfig {
    double g1 = 1.0;
    double g2 = 0.0;
    double h = 0.0;  ///< 0 selects h_min of the roughness
    int samples = 101;

    friend bool operator==(const ProfileConfig&, const ProfileConfig&) = default;
};

struct ValidateConfig {
    int seed = 42;
    int pairs = 100;
    int cell_n = 64;
    int cell3d_n = 12;

    friend bool operator==(const ValidateConfig&, const ValidateConfig&) = default;
};

struct RunConfig {
    FluidConfig fluid;
    RegimeConfig regime;
    RoughnessConfig roughness;
    DomainConfig domain;
    ForceConfig force;
    SolverConfig solver;
    OutputConfig output;
    ProfileConfig profile;
    ValidateConfig validate;

    /// Throws ConfigError on inconsistent settings.
    void check() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);
/// Every key with full precision; parse_config(serialize) reproduces the config.
std::string serialize_config(const RunConfig& config);

}  // namespace thinfilm
