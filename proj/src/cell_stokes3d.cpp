#include "thinfilm/cell_stokes3d.hpp"

#include <Eigen/CholmodSupport>
#include <Eigen/SparseCore>
#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "thinfilm/errors.hpp"
#include "thinfilm/parallel.hpp"

namespace thinfilm {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Eigen::VectorXd;

/// Linear strain sample: sum of up to four weighted dofs.
struct Stencil {
    std::array<int, 4> dof{};
    std::array<double, 4> coef{};
    int count = 0;

    void add(int d, double c) {
        if (d < 0) return;  // wall value, identically zero
        dof[count] = d;
        coef[count] = c;
        ++count;
    }
    double apply(const VectorXd& x) const {
        double s = 0.0;
        for (int a = 0; a < count; ++a) s += coef[a] * x[dof[a]];
        return s;
    }
};

class StokesCell {
public:
    StokesCell(const RoughnessProfile& profile, double lambda, int n, int nz)
        : n_(n), nz_(nz), height_(profile.h_max()) {
        d_ = 1.0 / n;
        dxs_ = d_ / lambda;
        dz_ = height_ / nz;
        volume_ = d_ * d_ * dz_;
        cells_ = n * n * nz;
        n_u_ = cells_;
        n_w_ = n * n * (nz - 1);
        n_dof_ = 2 * n_u_ + n_w_;
        build_stencils();
        build_masks(profile);
    }

    int n() const { return n_; }
    int nz() const { return nz_; }
    int cells() const { return cells_; }
    int dofs() const { return n_dof_; }
    double volume() const { return volume_; }
    double height() const { return height_; }
    double dxs() const { return dxs_; }
    double dz() const { return dz_; }
    const SpMat& divergence() const { return div_; }
    const std::vector<std::uint8_t>& dof_solid() const { return dof_solid_; }
    const std::vector<std::uint8_t>& cell_solid() const { return cell_solid_; }

    int cell(int i, int j, int k) const { return wrap(i) + n_ * (wrap(j) + n_ * k); }
    int iu(int i, int j, int k) const { return cell(i, j, k); }
    int iv(int i, int j, int k) const { return n_u_ + cell(i, j, k); }
    int iw(int i, int j, int k) const {
        if (k <= 0 || k >= nz_) return -1;
        return 2 * n_u_ + wrap(i) + n_ * (wrap(j) + n_ * (k - 1));
    }
    int zedge(int i, int j, int k) const { return wrap(i) + n_ * (wrap(j) + n_ * k); }

    VectorXd forcing(const Vec2& xi) const {
        VectorXd b = VectorXd::Zero(n_dof_);
        for (int c = 0; c < cells_; ++c) {
            if (!dof_solid_[c]) b[c] = volume_ * xi.x;
            if (!dof_solid_[n_u_ + c]) b[n_u_ + c] = volume_ * xi.y;
        }
        return b;
    }

    /// Viscosities at every strain sample for the current velocity.
    struct Viscosity {
        std::vector<double> cell, xy, xz, yz;
    };

    Viscosity viscosity(const VectorXd& x, double exponent, double delta, bool frozen_value, double value) const {
        Viscosity nu;
        const std::size_t ne = static_cast<std::size_t>(n_) * n_ * (nz_ + 1);
        if (frozen_value || exponent == 2.0) {
            const double c = exponent == 2.0 ? 1.0 : value;
            nu.cell.assign(cells_, c);
            nu.xy.assign(cells_, c);
            nu.xz.assign(ne, c);
            nu.yz.assign(ne, c);
            return nu;
        }
        std::vector<double> sxy(cells_), sxz(ne), syz(ne);
        std::vector<double> e_diag(cells_), e_xy(cells_), e_xz(cells_), e_yz(cells_);
        for (int c = 0; c < cells_; ++c) {
            const double a = dxx_[c].apply(x), b = dyy_[c].apply(x), z = dzz_[c].apply(x);
            e_diag[c] = a * a + b * b + z * z;
            sxy[c] = xy_[c].apply(x);
        }
        for (std::size_t e = 0; e < ne; ++e) {
            sxz[e] = xz_[e].apply(x);
            syz[e] = yz_[e].apply(x);
        }
        for (int k = 0; k < nz_; ++k) {
            for (int j = 0; j < n_; ++j) {
                for (int i = 0; i < n_; ++i) {
                    const int c = cell(i, j, k);
                    const double mxy =
                        0.25 * (sxy[cell(i, j, k)] + sxy[cell(i - 1, j, k)] + sxy[cell(i, j - 1, k)] +
                                sxy[cell(i - 1, j - 1, k)]);
                    const double mxz = 0.25 * (sxz[zedge(i, j, k)] + sxz[zedge(i - 1, j, k)] +
                                               sxz[zedge(i, j, k + 1)] + sxz[zedge(i - 1, j, k + 1)]);
                    const double myz = 0.25 * (syz[zedge(i, j, k)] + syz[zedge(i, j - 1, k)] +
                                               syz[zedge(i, j, k + 1)] + syz[zedge(i, j - 1, k + 1)]);
                    e_xy[c] = 2.0 * mxy * mxy;
                    e_xz[c] = 2.0 * mxz * mxz;
                    e_yz[c] = 2.0 * myz * myz;
                }
            }
        }
        auto law = [&](double norm2) { return flux_coefficient(std::sqrt(norm2), exponent, delta); };
        nu.cell.resize(cells_);
        nu.xy.resize(cells_);
        nu.xz.resize(ne);
        nu.yz.resize(ne);
        for (int c = 0; c < cells_; ++c) nu.cell[c] = law(e_diag[c] + e_xy[c] + e_xz[c] + e_yz[c]);
        for (int k = 0; k < nz_; ++k) {
            for (int j = 0; j < n_; ++j) {
                for (int i = 0; i < n_; ++i) {
                    double other = 0.0;
                    for (int a = 0; a < 2; ++a) {
                        for (int b = 0; b < 2; ++b) {
                            const int c = cell(i + a, j + b, k);
                            other += 0.25 * (e_diag[c] + e_xz[c] + e_yz[c]);
                        }
                    }
                    const int c = cell(i, j, k);
                    nu.xy[c] = law(2.0 * sxy[c] * sxy[c] + other);
                }
            }
        }
        for (int k = 0; k <= nz_; ++k) {
            for (int j = 0; j < n_; ++j) {
                for (int i = 0; i < n_; ++i) {
                    double ox = 0.0, oy = 0.0;
                    int layers = 0;
                    for (int kk = k - 1; kk <= k; ++kk) {
                        if (kk < 0 || kk >= nz_) continue;
                        ++layers;
                        for (int a = 0; a < 2; ++a) {
                            const int cx = cell(i + a, j, kk);
                            const int cy = cell(i, j + a, kk);
                            ox += 0.5 * (e_diag[cx] + e_xy[cx] + e_yz[cx]);
                            oy += 0.5 * (e_diag[cy] + e_xy[cy] + e_xz[cy]);
                        }
                    }
                    const int e = zedge(i, j, k);
                    nu.xz[e] = law(2.0 * sxz[e] * sxz[e] + ox / layers);
                    nu.yz[e] = law(2.0 * syz[e] * syz[e] + oy / layers);
                }
            }
        }
        return nu;
    }

    SpMat viscous_operator(const Viscosity& nu, double kappa) const {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<std::size_t>(cells_) * 70);
        auto add = [&](const Stencil& s, double weight) {
            for (int a = 0; a < s.count; ++a) {
                for (int b = 0; b < s.count; ++b) trip.emplace_back(s.dof[a], s.dof[b], weight * s.coef[a] * s.coef[b]);
            }
        };
        for (int c = 0; c < cells_; ++c) {
            add(dxx_[c], volume_ * nu.cell[c]);
            add(dyy_[c], volume_ * nu.cell[c]);
            add(dzz_[c], volume_ * nu.cell[c]);
            add(xy_[c], 2.0 * volume_ * nu.xy[c]);
        }
        for (int k = 0; k <= nz_; ++k) {
            const double weight = (k == 0 || k == nz_) ? volume_ : 2.0 * volume_;
            for (int j = 0; j < n_; ++j) {
                for (int i = 0; i < n_; ++i) {
                    const int e = zedge(i, j, k);
                    add(xz_[e], weight * nu.xz[e]);
                    add(yz_[e], weight * nu.yz[e]);
                }
            }
        }
        for (int a = 0; a < n_dof_; ++a) trip.emplace_back(a, a, dof_solid_[a] ? volume_ / kappa : 0.0);
        SpMat A(n_dof_, n_dof_);
        A.setFromTriplets(trip.begin(), trip.end());
        return A;
    }

private:
    int wrap(int i) const { return ((i % n_) + n_) % n_; }

    void build_stencils() {
        dxx_.resize(cells_);
        dyy_.resize(cells_);
        dzz_.resize(cells_);
        xy_.resize(cells_);
        const std::size_t ne = static_cast<std::size_t>(n_) * n_ * (nz_ + 1);
        xz_.resize(ne);
        yz_.resize(ne);
        const double hx = 1.0 / dxs_;
        const double hz = 1.0 / dz_;
        std::vector<Eigen::Triplet<double>> trip;
        for (int k = 0; k < nz_; ++k) {
            for (int j = 0; j < n_; ++j) {
                for (int i = 0; i < n_; ++i) {
                    const int c = cell(i, j, k);
                    dxx_[c].add(iu(i, j, k), hx);
                    dxx_[c].add(iu(i - 1, j, k), -hx);
                    dyy_[c].add(iv(i, j, k), hx);
                    dyy_[c].add(iv(i, j - 1, k), -hx);
                    dzz_[c].add(iw(i, j, k + 1), hz);
                    dzz_[c].add(iw(i, j, k), -hz);
                    xy_[c].add(iu(i, j + 1, k), 0.5 * hx);
                    xy_[c].add(iu(i, j, k), -0.5 * hx);
                    xy_[c].add(iv(i + 1, j, k), 0.5 * hx);
                    xy_[c].add(iv(i, j, k), -0.5 * hx);
                    for (const Stencil* s : {&dxx_[c], &dyy_[c], &dzz_[c]}) {
                        for (int a = 0; a < s->count; ++a) trip.emplace_back(c, s->dof[a], s->coef[a]);
                    }
                }
            }
        }
        for (int k = 0; k <= nz_; ++k) {
            for (int j = 0; j < n_; ++j) {
                for (int i = 0; i < n_; ++i) {
                    const int e = zedge(i, j, k);
                    // Wall edges use the one-sided difference to the no-slip value.
                    if (k == 0) {
                        xz_[e].add(iu(i, j, 0), hz);
                        yz_[e].add(iv(i, j, 0), hz);
                    } else if (k == nz_) {
                        xz_[e].add(iu(i, j, nz_ - 1), -hz);
                        yz_[e].add(iv(i, j, nz_ - 1), -hz);
                    } else {
                        xz_[e].add(iu(i, j, k), 0.5 * hz);
                        xz_[e].add(iu(i, j, k - 1), -0.5 * hz);
                        yz_[e].add(iv(i, j, k), 0.5 * hz);
                        yz_[e].add(iv(i, j, k - 1), -0.5 * hz);
                    }
                    xz_[e].add(iw(i + 1, j, k), 0.5 * hx);
                    xz_[e].add(iw(i, j, k), -0.5 * hx);
                    yz_[e].add(iw(i, j + 1, k), 0.5 * hx);
                    yz_[e].add(iw(i, j, k), -0.5 * hx);
                }
            }
        }
        div_.resize(cells_, n_dof_);
        div_.setFromTriplets(trip.begin(), trip.end());
    }

    void build_masks(const RoughnessProfile& profile) {
        dof_solid_.assign(n_dof_, 0);
        cell_solid_.assign(cells_, 0);
        for (int j = 0; j < n_; ++j) {
            for (int i = 0; i < n_; ++i) {
                const double x = cell_coordinate(i, n_);
                const double y = cell_coordinate(j, n_);
                const double h_c = profile(x, y);
                const double h_u = profile(x + 0.5 * d_, y);
                const double h_v = profile(x, y + 0.5 * d_);
                for (int k = 0; k < nz_; ++k) {
                    const double zc = (k + 0.5) * dz_;
                    cell_solid_[cell(i, j, k)] = zc > h_c;
                    dof_solid_[iu(i, j, k)] = zc > h_u;
                    dof_solid_[iv(i, j, k)] = zc > h_v;
                    if (k > 0) dof_solid_[iw(i, j, k)] = k * dz_ > h_c;
                }
                place_wall(xz_, i, j, h_u, [&](int k) { return iu(i, j, k); });
                place_wall(yz_, i, j, h_v, [&](int k) { return iv(i, j, k); });
            }
        }
    }

    // Puts the no-slip wall of a horizontal velocity column at height h instead
    // of at the first solid dof. The shear sample above the last fluid dof
    // then spans the distance delta to the wall: its u/z part becomes
    // -u / delta over a layer of thickness delta, i.e. a coefficient
    // (1/2) / sqrt(delta dz) at the interior sample weight. delta = dz/2
    // reproduces the box wall and delta = dz the plain staircase.
    template <typename DofAt>
    void place_wall(std::vector<Stencil>& shear, int i, int j, double h, DofAt dof_at) {
        const int k = static_cast<int>(std::floor(h / dz_ + 0.5));  // first solid dof
        if (k < 1 || k >= nz_) return;
        const double delta = std::max(h - (k - 0.5) * dz_, 1e-2 * dz_);
        Stencil& s = shear[zedge(i, j, k)];
        Stencil patched;
        for (int a = 0; a < s.count; ++a) {
            if (s.dof[a] == dof_at(k)) continue;
            patched.add(s.dof[a], s.dof[a] == dof_at(k - 1) ? -0.5 / std::sqrt(delta * dz_) : s.coef[a]);
        }
        s = patched;
    }

    int n_, nz_;
    double height_;
    double d_ = 0.0, dxs_ = 0.0, dz_ = 0.0, volume_ = 0.0;
    int cells_ = 0, n_u_ = 0, n_w_ = 0, n_dof_ = 0;
    std::vector<Stencil> dxx_, dyy_, dzz_, xy_, xz_, yz_;
    SpMat div_;
    std::vector<std::uint8_t> dof_solid_;
    std::vector<std::uint8_t> cell_solid_;
};

/// Cholesky factor of an earlier system matrix, reused as a preconditioner
/// while the viscosity changes slowly.
class ReusedFactor {
public:
    bool valid() const { return factorized_; }

    void factorize(const SpMat& K, const std::vector<double>& history) {
        if (!analyzed_) {
            chol_.analyzePattern(K);
            analyzed_ = true;
        }
        chol_.factorize(K);
        if (chol_.info() != Eigen::Success) throw SolverError("cell3d: Cholesky factorization failed", history);
        factorized_ = true;
    }

    /// Preconditioned CG on K x = rhs starting from x. Returns the iteration
    /// count, or -1 when the stale factor is too far from K.
    int refine(const SpMat& K, const VectorXd& rhs, VectorXd& x, double rel_tol) const {
        const double target = rel_tol * rhs.lpNorm<Eigen::Infinity>();
        VectorXd res = rhs - K * x;
        if (res.lpNorm<Eigen::Infinity>() <= target) return 0;
        VectorXd z = chol_.solve(res);
        VectorXd dir = z;
        double rz = res.dot(z);
        for (int it = 1; it <= kMaxIterations; ++it) {
            const VectorXd Kd = K * dir;
            const double alpha = rz / dir.dot(Kd);
            x += alpha * dir;
            res -= alpha * Kd;
            if (res.lpNorm<Eigen::Infinity>() <= target) return it;
            z = chol_.solve(res);
            const double rz_new = res.dot(z);
            dir = z + (rz_new / rz) * dir;
            rz = rz_new;
        }
        return -1;
    }

private:
    static constexpr int kMaxIterations = 40;
    Eigen::CholmodSupernodalLLT<SpMat, Eigen::Lower> chol_;
    bool analyzed_ = false;
    bool factorized_ = false;
};

double fluid_max_abs(const VectorXd& v, const std::vector<std::uint8_t>& solid) {
    double m = 0.0;
    for (Eigen::Index a = 0; a < v.size(); ++a) {
        if (!solid[a]) m = std::max(m, std::abs(v[a]));
    }
    return m;
}

}  // namespace

Cell3DSolution solve_cell3d(const RoughnessProfile& profile, double lambda, const Vec2& xi,
                            const PowerLawFluid& fluid, int n, int nz, double tol, int max_iter,
                            const Cell3DOptions& options) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("solve_cell3d: lambda must be > 0 (use the Reynolds or high-frequency laws)");
    }
    if (n < 8 || nz < 8) throw std::invalid_argument("solve_cell3d: grids need n, nz >= 8");
    if (!(tol > 0.0)) throw std::invalid_argument("solve_cell3d: tol must be > 0");
    if (!is_finite(xi)) throw std::invalid_argument("solve_cell3d: xi must be finite");
    if (!(options.kappa > 0.0)) throw std::invalid_argument("solve_cell3d: kappa must be > 0");
    if (!(options.relax <= 1.0)) throw std::invalid_argument("solve_cell3d: relaxation must not exceed 1");

    const StokesCell cell(profile, lambda, n, nz);
    const int cells = cell.cells();
    const int dofs = cell.dofs();

    Cell3DSolution out;
    out.xi = xi;
    out.lambda = lambda;
    out.n = n;
    out.nz = nz;
    out.height = cell.height();
    out.u.assign(cells, 0.0);
    out.v.assign(cells, 0.0);
    out.w.assign(static_cast<std::size_t>(n) * n * (nz + 1), 0.0);
    out.pi_cell.assign(cells, 0.0);
    out.solid_mask = cell.cell_solid();
    const double scale = norm(xi);
    if (scale == 0.0) return out;

    const double p = fluid.p();
    const bool linear = p == 2.0;
    const double q = fluid.p_dual();
    // Wall shear rate of the flat Poiseuille profile filling the box.
    const double strain_scale = std::pow(2.0, 0.5 * q) * std::pow(0.5 * scale * cell.height(), q - 1.0);
    const double nu_scale = linear ? 1.0 : std::pow(strain_scale, p - 2.0);
    // Augmentation per pressure cell: viscous scale in the fluid, penalty scale in the solid.
    const double r_solid = std::max(nu_scale, 1.0 / (options.kappa * (4.0 / (cell.dxs() * cell.dxs()) +
                                                                      2.0 / (cell.dz() * cell.dz()))));
    VectorXd r(cell.cells());
    for (int c = 0; c < cell.cells(); ++c) {
        r[c] = options.augmentation * (cell.cell_solid()[c] ? r_solid : nu_scale);
    }
    const double h_ref = std::min(cell.dxs(), cell.dz());
    const double V = cell.volume();

    const VectorXd b = cell.forcing(xi);
    const double b_norm = b.lpNorm<Eigen::Infinity>();
    const SpMat& D = cell.divergence();
    const SpMat DtD = V * SpMat(D.transpose() * r.asDiagonal() * D);

    std::vector<std::uint8_t> cell_fluid_solid = cell.cell_solid();
    auto divergence_residual = [&](const VectorXd& x) {
        const double wmax = x.lpNorm<Eigen::Infinity>();
        if (wmax == 0.0) return 0.0;
        return fluid_max_abs(D * x, cell_fluid_solid) * h_ref / wmax;
    };

    const std::vector<double> levels =
        linear ? std::vector<double>{0.0} : delta_schedule(options.delta_start, fluid.delta_reg());

    VectorXd x = VectorXd::Zero(dofs);
    VectorXd pressure = VectorXd::Zero(cells);
    ReusedFactor factor;
    const double relax = options.relax > 0.0 ? options.relax : std::min(1.0, 2.0 / p);
    int iterations = 0;
    double residual = 1.0;

    for (std::size_t level = 0; level < levels.size(); ++level) {
        const bool last = level + 1 == levels.size();
        const double delta = levels[level] * strain_scale;
        const double level_tol = last ? tol : std::max(tol, levels[level]);
        while (true) {
            const bool cold = iterations == 0;
            const auto nu = cell.viscosity(x, p, delta, cold, nu_scale);
            const SpMat A = cell.viscous_operator(nu, options.kappa);
            if (cold) {
                residual = 1.0;
            } else {
                const VectorXd mom = A * x - V * (D.transpose() * pressure) - b;
                residual = std::max(mom.lpNorm<Eigen::Infinity>() / b_norm, divergence_residual(x));
            }
            out.residual_history.push_back(residual);
            if (residual <= level_tol) break;
            if (iterations >= max_iter) {
                throw SolverError(non_convergence_message("cell3d", iterations, residual),
                                  out.residual_history);
            }
            const SpMat K = A + DtD;
            const double inner_tol = linear ? 0.1 * tol : std::max(0.1 * tol, 0.01 * residual);
            const double cg_tol = linear ? 1e-3 * tol : std::max(1e-3 * tol, 1e-3 * residual);
            VectorXd x_new = x;
            for (int it = 0; it < options.uzawa_max_iter; ++it) {
                const VectorXd rhs = b + V * (D.transpose() * pressure);
                int cg_iters = factor.valid() ? factor.refine(K, rhs, x_new, cg_tol) : -1;
                if (cg_iters < 0) {
                    factor.factorize(K, out.residual_history);
                    cg_iters = factor.refine(K, rhs, x_new, cg_tol);
                }
                pressure -= r.cwiseProduct(D * x_new);
                if (divergence_residual(x_new) <= inner_tol) break;
            }
            const double omega = linear ? 1.0 : relax;
            x += omega * (x_new - x);
            ++iterations;
        }
    }

    // Zero-mean pressure over the fluid cells.
    double psum = 0.0;
    int pcount = 0;
    for (int c = 0; c < cells; ++c) {
        if (!cell.cell_solid()[c]) {
            psum += pressure[c];
            ++pcount;
        }
    }
    if (pcount > 0) pressure.array() -= psum / pcount;

    const auto& solid = cell.dof_solid();
    double fx = 0.0, fy = 0.0, fz = 0.0, solid_max = 0.0;
    for (int c = 0; c < cells; ++c) {
        out.u[c] = x[cell.iu(0, 0, 0) + c];
        out.v[c] = x[cell.iv(0, 0, 0) + c];
        out.pi_cell[c] = pressure[c];
        if (!solid[c]) fx += V * out.u[c];
        if (!solid[cells + c]) fy += V * out.v[c];
    }
    for (int k = 1; k < nz; ++k) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const int a = cell.iw(i, j, k);
                out.w[out.idx(i, j, k)] = x[a];
                if (!solid[a]) fz += V * x[a];
            }
        }
    }
    for (int a = 0; a < dofs; ++a) {
        if (solid[a]) solid_max = std::max(solid_max, std::abs(x[a]));
    }
    const double all_max = x.lpNorm<Eigen::Infinity>();
    out.mobility = {fx, fy};
    out.vertical_flux = fz;
    out.residual = residual;
    out.iterations = iterations;
    out.max_divergence = divergence_residual(x);
    out.solid_velocity_ratio = all_max > 0.0 ? solid_max / all_max : 0.0;
    return out;
}

MobilityTable mobility_a_lambda(const RoughnessProfile& profile, double lambda, const PowerLawFluid& fluid,
                                int table_size, int n, int nz, double tol, int max_iter, int workers,
                                const Cell3DOptions& options) {
    if (table_size < 4) throw std::invalid_argument("mobility_a_lambda: table_size must be >= 4");
    MobilityTable table;
    table.directions = table_directions(table_size);
    table.values.resize(table.directions.size());
    table.residuals.resize(table.directions.size());
    table.iterations.resize(table.directions.size());
    table.p_dual = fluid.p_dual();
    table.source = TableSource::cell3d;
    table.lambda = lambda;
    parallel_for(table_size, workers, [&](int k) {
        try {
            const Cell3DSolution sol =
                solve_cell3d(profile, lambda, table.directions[k], fluid, n, nz, tol, max_iter, options);
            table.values[k] = sol.mobility;
            table.residuals[k] = sol.residual;
            table.iterations[k] = sol.iterations;
        } catch (const SolverError& e) {
            throw SolverError("direction " + std::to_string(k) + ": " + e.what(), e.residual_history());
        }
    });
    return table;
}

void write_cell3d_vtk(const Cell3DSolution& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write VTK file '" + path + "'");
    const int n = s.n;
    const int nz = s.nz;
    const double d = 1.0 / n;
    const double dz = s.height / nz;
    out << "# vtk DataFile Version 3.0\ncell3d velocity and pressure\nASCII\nDATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << n << ' ' << n << ' ' << nz << '\n';
    out << "ORIGIN " << -0.5 << ' ' << -0.5 << ' ' << 0.5 * dz << '\n';
    out << "SPACING " << d << ' ' << d << ' ' << dz << '\n';
    out << "POINT_DATA " << static_cast<long>(n) * n * nz << '\n';
    out.precision(12);
    auto wrap = [n](int i) { return ((i % n) + n) % n; };
    out << "VECTORS velocity double\n";
    for (int k = 0; k < nz; ++k) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const double uc = 0.5 * (s.u_at(i, j, k) + s.u_at(wrap(i - 1), j, k));
                const double vc = 0.5 * (s.v_at(i, j, k) + s.v_at(i, wrap(j - 1), k));
                const double wc = 0.5 * (s.w_at(i, j, k) + s.w_at(i, j, k + 1));
                out << uc << ' ' << vc << ' ' << wc << '\n';
            }
        }
    }
    out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (double p : s.pi_cell) out << p << '\n';
    out << "SCALARS solid int 1\nLOOKUP_TABLE default\n";
    for (auto m : s.solid_mask) out << static_cast<int>(m) << '\n';
}

}  // namespace thinfilm
