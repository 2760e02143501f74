#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace thinfilm {

/// Raised when an iterative solver fails to reach its tolerance. Carries the
/// residual history so callers can report or inspect the failure.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), history_(std::move(history)) {}

    const std::vector<double>& residual_history() const { return history_; }

private:
    std::vector<double> history_;
};

inline std::string non_convergence_message(const std::string& solver, int iterations, double residual) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: no convergence after %d iterations (residual %.3e)", solver.c_str(), iterations,
                  residual);
    return buf;
}

/// Invalid or inconsistent run configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace thinfilm
