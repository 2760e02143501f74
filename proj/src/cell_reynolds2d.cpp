#include "thinfilm/cell_reynolds2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "thinfilm/errors.hpp"
#include "thinfilm/face_poisson.hpp"
#include "thinfilm/parallel.hpp"

namespace thinfilm {

namespace {

struct CellState {
    Field2 flux_x;
    Field2 flux_y;
    Field2 coeff_x;
    Field2 coeff_y;
    Field2 divergence;
    Vec2 mobility;
    double residual = 0.0;
};

class Cell2DProblem {
public:
    Cell2DProblem(const Field2& h, const Vec2& xi, double p_dual) : n_(h.nx()), d_(1.0 / n_), xi_(xi), q_(p_dual) {
        kx_ = Field2(n_, n_);
        ky_ = Field2(n_, n_);
        for (int j = 0; j < n_; ++j) {
            for (int i = 0; i < n_; ++i) {
                kx_(i, j) = std::pow(0.5 * (h(i, j) + h.wrapped(i + 1, j)), q_ + 1.0);
                ky_(i, j) = std::pow(0.5 * (h(i, j) + h.wrapped(i, j + 1)), q_ + 1.0);
            }
        }
    }

    CellState evaluate(const Field2& pi, double delta) const {
        CellState s{Field2(n_, n_), Field2(n_, n_), Field2(n_, n_), Field2(n_, n_), Field2(n_, n_), {}, 0.0};
        const double inv_d = 1.0 / d_;
        const double inv_4d = 0.25 / d_;
        for (int j = 0; j < n_; ++j) {
            for (int i = 0; i < n_; ++i) {
                // Face between (i, j) and (i+1, j).
                {
                    const double gx = xi_.x + (pi.wrapped(i + 1, j) - pi(i, j)) * inv_d;
                    const double gy = xi_.y + (pi.wrapped(i, j + 1) - pi.wrapped(i, j - 1) + pi.wrapped(i + 1, j + 1) -
                                               pi.wrapped(i + 1, j - 1)) *
                                                  inv_4d;
                    const double c = kx_(i, j) * flux_coefficient(std::hypot(gx, gy), q_, delta);
                    s.coeff_x(i, j) = c;
                    s.flux_x(i, j) = c * gx;
                }
                // Face between (i, j) and (i, j+1).
                {
                    const double gy = xi_.y + (pi.wrapped(i, j + 1) - pi(i, j)) * inv_d;
                    const double gx = xi_.x + (pi.wrapped(i + 1, j) - pi.wrapped(i - 1, j) + pi.wrapped(i + 1, j + 1) -
                                               pi.wrapped(i - 1, j + 1)) *
                                                  inv_4d;
                    const double c = ky_(i, j) * flux_coefficient(std::hypot(gx, gy), q_, delta);
                    s.coeff_y(i, j) = c;
                    s.flux_y(i, j) = c * gy;
                }
            }
        }
        double max_div = 0.0;
        for (int j = 0; j < n_; ++j) {
            for (int i = 0; i < n_; ++i) {
                const double div = (s.flux_x(i, j) - s.flux_x.wrapped(i - 1, j) + s.flux_y(i, j) -
                                    s.flux_y.wrapped(i, j - 1)) *
                                   inv_d;
                s.divergence(i, j) = div;
                max_div = std::max(max_div, std::abs(div));
            }
        }
        s.mobility = {s.flux_x.mean(), s.flux_y.mean()};
        const double scale = norm(s.mobility);
        s.residual = (scale > 0.0 ? max_div / scale : max_div) * d_;
        return s;
    }

    int n() const { return n_; }
    double spacing() const { return d_; }

private:
    int n_;
    double d_;
    Vec2 xi_;
    double q_;
    Field2 kx_;
    Field2 ky_;
};

}  // namespace

Cell2DSolution solve_cell2d(const RoughnessProfile& profile, const Vec2& xi, const PowerLawFluid& fluid, int n,
                            double tol, int max_iter, const Cell2DOptions& options) {
    if (n < 8) throw std::invalid_argument("solve_cell2d: n must be >= 8");
    if (!(tol > 0.0)) throw std::invalid_argument("solve_cell2d: tol must be > 0");
    if (!is_finite(xi)) throw std::invalid_argument("solve_cell2d: xi must be finite");
    if (!(options.relax > 0.0 && options.relax <= 1.0)) throw std::invalid_argument("relaxation must lie in (0, 1]");

    const Field2 h = sample_h(profile, n);
    if (h.min() <= 0.0) throw std::invalid_argument("solve_cell2d: h must be positive");

    Cell2DSolution out;
    out.xi = xi;
    out.pi = Field2(n, n);
    out.flux_x = Field2(n, n);
    out.flux_y = Field2(n, n);
    const double scale = norm(xi);
    if (scale == 0.0) return out;

    const Cell2DProblem problem(h, xi, fluid.p_dual());
    const std::vector<double> levels = fluid.p_dual() == 2.0
                                           ? std::vector<double>{0.0}
                                           : delta_schedule(options.delta_start, fluid.delta_reg());

    Field2 pi(n, n);
    int iterations = 0;
    CellState state;
    for (std::size_t level = 0; level < levels.size(); ++level) {
        const bool last = level + 1 == levels.size();
        const double delta = levels[level] * scale;
        const double level_tol = last ? tol : std::max(tol, levels[level]);
        state = problem.evaluate(pi, delta);
        out.residual_history.push_back(state.residual);
        while (state.residual > level_tol) {
            if (iterations >= max_iter) {
                throw SolverError(non_convergence_message("cell2d", iterations, state.residual),
                                  out.residual_history);
            }
            const FacePoissonResult step =
                solve_face_poisson({state.coeff_x, state.coeff_y}, state.divergence, Boundary2D::periodic,
                                   problem.spacing(), problem.spacing(), options.inner_tol, options.inner_max_iter);
            double omega = options.relax;
            Field2 trial;
            CellState next;
            for (int attempt = 0; attempt < 8; ++attempt, omega *= 0.5) {
                trial = pi;
                for (std::size_t k = 0; k < trial.size(); ++k) trial.values()[k] += omega * step.solution.values()[k];
                trial.subtract_mean();
                next = problem.evaluate(trial, delta);
                if (next.residual <= state.residual) break;
            }
            pi = std::move(trial);
            state = std::move(next);
            ++iterations;
            out.residual_history.push_back(state.residual);
        }
    }

    out.pi = std::move(pi);
    out.mobility = state.mobility;
    out.residual = state.residual;
    out.iterations = iterations;
    out.flux_x = std::move(state.flux_x);
    out.flux_y = std::move(state.flux_y);
    return out;
}

MobilityTable mobility_a0(const RoughnessProfile& profile, const PowerLawFluid& fluid, int table_size, int n,
                          double tol, int max_iter, int workers, const Cell2DOptions& options) {
    if (table_size < 4) throw std::invalid_argument("mobility_a0: table_size must be >= 4");
    MobilityTable table;
    table.directions = table_directions(table_size);
    table.values.resize(table.directions.size());
    table.residuals.resize(table.directions.size());
    table.iterations.resize(table.directions.size());
    table.p_dual = fluid.p_dual();
    table.source = TableSource::cell2d;
    parallel_for(table_size, workers, [&](int k) {
        try {
            const Cell2DSolution sol = solve_cell2d(profile, table.directions[k], fluid, n, tol, max_iter, options);
            table.values[k] = sol.mobility;
            table.residuals[k] = sol.residual;
            table.iterations[k] = sol.iterations;
        } catch (const SolverError& e) {
            throw SolverError("direction " + std::to_string(k) + ": " + e.what(), e.residual_history());
        }
    });
    return table;
}

}  // namespace thinfilm
