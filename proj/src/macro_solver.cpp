#include "thinfilm/macro_solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "thinfilm/errors.hpp"
#include "thinfilm/face_poisson.hpp"

namespace thinfilm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Normal and transverse gradient components on interior faces.
struct FaceGradient {
    Field2 xn, xt;  // x-faces
    Field2 yn, yt;  // y-faces
};

FaceGradient face_gradient(const Field2& q, double dx, double dy) {
    const int nx = q.nx();
    const int ny = q.ny();
    Field2 cgx(nx, ny), cgy(nx, ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int il = std::max(i - 1, 0), ir = std::min(i + 1, nx - 1);
            const int jl = std::max(j - 1, 0), jr = std::min(j + 1, ny - 1);
            cgx(i, j) = (q(ir, j) - q(il, j)) / ((ir - il) * dx);
            cgy(i, j) = (q(i, jr) - q(i, jl)) / ((jr - jl) * dy);
        }
    }
    FaceGradient g{Field2(nx + 1, ny), Field2(nx + 1, ny), Field2(nx, ny + 1), Field2(nx, ny + 1)};
    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) {
            g.xn(i, j) = (q(i, j) - q(i - 1, j)) / dx;
            g.xt(i, j) = 0.5 * (cgy(i - 1, j) + cgy(i, j));
        }
    }
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            g.yn(i, j) = (q(i, j) - q(i, j - 1)) / dy;
            g.yt(i, j) = 0.5 * (cgx(i, j - 1) + cgx(i, j));
        }
    }
    return g;
}

/// Neumaier-compensated sum.
double compensated_sum(const std::vector<double>& values) {
    double sum = 0.0, c = 0.0;
    for (double v : values) {
        const double t = sum + v;
        c += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    return sum + c;
}

struct MacroState {
    Field2 flux_x, flux_y;
    Field2 coeff_x, coeff_y;
    Field2 divergence;
    double residual = 0.0;
    double max_div = 0.0;
};

class MacroProblem {
public:
    MacroProblem(const MacroDomain& domain, const MobilityLaw& law, const FaceForce& force, double flux_scale)
        : domain_(domain), law_(law), force_(force), length_(std::max(domain.L1, domain.L2)), flux_scale_(flux_scale) {}

    MacroState evaluate(const Field2& P, double delta) const {
        const int nx = domain_.nx;
        const int ny = domain_.ny;
        const FaceGradient g = face_gradient(P, domain_.dx(), domain_.dy());
        MacroState s{Field2(nx + 1, ny), Field2(nx, ny + 1), Field2(nx + 1, ny), Field2(nx, ny + 1), {}, 0.0, 0.0};
        for (int j = 0; j < ny; ++j) {
            for (int i = 1; i < nx; ++i) {
                const Vec2 G{force_.x_faces_1(i, j) - g.xn(i, j), force_.x_faces_2(i, j) - g.xt(i, j)};
                s.flux_x(i, j) = law_.eval(G, delta).x;
                s.coeff_x(i, j) = law_.secant_coefficient(G, delta);
            }
        }
        for (int j = 1; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const Vec2 G{force_.y_faces_1(i, j) - g.yt(i, j), force_.y_faces_2(i, j) - g.yn(i, j)};
                s.flux_y(i, j) = law_.eval(G, delta).y;
                s.coeff_y(i, j) = law_.secant_coefficient(G, delta);
            }
        }
        s.divergence = flux_divergence(s.flux_x, s.flux_y, domain_.dx(), domain_.dy());
        for (double d : s.divergence.values()) s.max_div = std::max(s.max_div, std::abs(d));
        s.residual = s.max_div * length_ / flux_scale_;
        return s;
    }

private:
    const MacroDomain& domain_;
    const MobilityLaw& law_;
    const FaceForce& force_;
    double length_;
    double flux_scale_;
};

double max_force(const FaceForce& f) {
    double m = 0.0;
    for (std::size_t k = 0; k < f.x_faces_1.size(); ++k) m = std::max(m, std::hypot(f.x_faces_1.values()[k], f.x_faces_2.values()[k]));
    for (std::size_t k = 0; k < f.y_faces_1.size(); ++k) m = std::max(m, std::hypot(f.y_faces_1.values()[k], f.y_faces_2.values()[k]));
    return m;
}

}  // namespace

std::string to_string(ForceKind kind) {
    switch (kind) {
        case ForceKind::constant: return "constant";
        case ForceKind::gradient_of: return "gradient_of";
        case ForceKind::rotational: return "rotational";
        case ForceKind::custom: return "custom";
    }
    return "unknown";
}

ForceKind force_kind_from_string(const std::string& name) {
    if (name == "constant") return ForceKind::constant;
    if (name == "gradient_of") return ForceKind::gradient_of;
    if (name == "rotational") return ForceKind::rotational;
    if (name == "custom") return ForceKind::custom;
    throw std::invalid_argument("unknown force kind '" + name + "' (constant, gradient_of, rotational, custom)");
}

std::string to_string(Potential potential) { return potential == Potential::sin_x ? "sin_x" : "sin_cos"; }

Potential potential_from_string(const std::string& name) {
    if (name == "sin_x") return Potential::sin_x;
    if (name == "sin_cos") return Potential::sin_cos;
    throw std::invalid_argument("unknown potential '" + name + "' (sin_x, sin_cos)");
}

ForceField ForceField::constant(const Vec2& value) {
    if (!is_finite(value)) throw std::invalid_argument("force must be finite");
    ForceField f;
    f.kind_ = ForceKind::constant;
    f.value_ = value;
    return f;
}

ForceField ForceField::gradient_of(Potential potential) {
    ForceField f;
    f.kind_ = ForceKind::gradient_of;
    f.potential_ = potential;
    return f;
}

ForceField ForceField::rotational(double omega) {
    if (!std::isfinite(omega)) throw std::invalid_argument("force must be finite");
    ForceField f;
    f.kind_ = ForceKind::rotational;
    f.omega_ = omega;
    return f;
}

ForceField ForceField::custom(Field2 f1, Field2 f2) {
    if (f1.nx() != f2.nx() || f1.ny() != f2.ny()) throw std::invalid_argument("custom force components differ in size");
    for (std::size_t k = 0; k < f1.size(); ++k) {
        if (!std::isfinite(f1.values()[k]) || !std::isfinite(f2.values()[k])) {
            throw std::invalid_argument("force must be finite");
        }
    }
    ForceField f;
    f.kind_ = ForceKind::custom;
    f.f1_ = std::move(f1);
    f.f2_ = std::move(f2);
    return f;
}

ForceField ForceField::load_csv(const std::string& path, int nx, int ny) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open force file '" + path + "'");
    std::string line;
    std::getline(in, line);
    if (line.rfind("f1,f2", 0) != 0) throw std::invalid_argument("force file '" + path + "': missing header 'f1,f2'");
    Field2 f1(nx, ny), f2(nx, ny);
    std::size_t k = 0;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (k >= f1.size()) throw std::invalid_argument("force file '" + path + "': too many rows");
        const auto comma = line.find(',');
        try {
            if (comma == std::string::npos) throw std::invalid_argument("");
            f1.values()[k] = std::stod(line.substr(0, comma));
            f2.values()[k] = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("force file '" + path + "': bad row '" + line + "'");
        }
        ++k;
    }
    if (k != f1.size()) {
        throw std::invalid_argument("force file '" + path + "': expected " + std::to_string(f1.size()) + " rows");
    }
    return custom(std::move(f1), std::move(f2));
}

double ForceField::potential_at(const MacroDomain& domain, double x, double y) const {
    const double s = std::sin(kTwoPi * x / domain.L1);
    return potential_ == Potential::sin_x ? s : s * std::cos(kTwoPi * y / domain.L2);
}

FaceForce ForceField::sample(const MacroDomain& domain) const {
    domain.validate();
    const int nx = domain.nx;
    const int ny = domain.ny;
    const double dx = domain.dx();
    const double dy = domain.dy();
    FaceForce f{Field2(nx + 1, ny), Field2(nx + 1, ny), Field2(nx, ny + 1), Field2(nx, ny + 1), Field2(nx, ny),
                Field2(nx, ny)};
    auto fill_analytic = [&](auto value) {
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i <= nx; ++i) {
                const Vec2 v = value(i * dx, domain.y(j));
                f.x_faces_1(i, j) = v.x;
                f.x_faces_2(i, j) = v.y;
            }
        }
        for (int j = 0; j <= ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const Vec2 v = value(domain.x(i), j * dy);
                f.y_faces_1(i, j) = v.x;
                f.y_faces_2(i, j) = v.y;
            }
        }
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const Vec2 v = value(domain.x(i), domain.y(j));
                f.cell_1(i, j) = v.x;
                f.cell_2(i, j) = v.y;
            }
        }
    };
    switch (kind_) {
        case ForceKind::constant:
            fill_analytic([&](double, double) { return value_; });
            break;
        case ForceKind::rotational:
            fill_analytic([&](double x, double y) {
                return Vec2{-omega_ * (y - 0.5 * domain.L2), omega_ * (x - 0.5 * domain.L1)};
            });
            break;
        case ForceKind::gradient_of: {
            Field2 phi(nx, ny);
            for (int j = 0; j < ny; ++j) {
                for (int i = 0; i < nx; ++i) phi(i, j) = potential_at(domain, domain.x(i), domain.y(j));
            }
            const FaceGradient g = face_gradient(phi, dx, dy);
            f.x_faces_1 = g.xn;
            f.x_faces_2 = g.xt;
            f.y_faces_1 = g.yt;
            f.y_faces_2 = g.yn;
            for (int j = 0; j < ny; ++j) {
                for (int i = 0; i < nx; ++i) {
                    const int il = std::max(i - 1, 0), ir = std::min(i + 1, nx - 1);
                    const int jl = std::max(j - 1, 0), jr = std::min(j + 1, ny - 1);
                    f.cell_1(i, j) = (phi(ir, j) - phi(il, j)) / ((ir - il) * dx);
                    f.cell_2(i, j) = (phi(i, jr) - phi(i, jl)) / ((jr - jl) * dy);
                }
            }
            break;
        }
        case ForceKind::custom: {
            if (f1_.nx() != nx || f1_.ny() != ny) {
                throw std::invalid_argument("custom force grid " + std::to_string(f1_.nx()) + "x" +
                                            std::to_string(f1_.ny()) + " does not match the domain grid");
            }
            f.cell_1 = f1_;
            f.cell_2 = f2_;
            for (int j = 0; j < ny; ++j) {
                for (int i = 0; i <= nx; ++i) {
                    const int l = std::max(i - 1, 0), r = std::min(i, nx - 1);
                    f.x_faces_1(i, j) = 0.5 * (f1_(l, j) + f1_(r, j));
                    f.x_faces_2(i, j) = 0.5 * (f2_(l, j) + f2_(r, j));
                }
            }
            for (int j = 0; j <= ny; ++j) {
                for (int i = 0; i < nx; ++i) {
                    const int l = std::max(j - 1, 0), r = std::min(j, ny - 1);
                    f.y_faces_1(i, j) = 0.5 * (f1_(i, l) + f1_(i, r));
                    f.y_faces_2(i, j) = 0.5 * (f2_(i, l) + f2_(i, r));
                }
            }
            break;
        }
    }
    return f;
}

Vec2 MacroSolution::cell_flux(int i, int j) const {
    return {0.5 * (flux_x(i, j) + flux_x(i + 1, j)), 0.5 * (flux_y(i, j) + flux_y(i, j + 1))};
}

Field2 flux_divergence(const Field2& flux_x, const Field2& flux_y, double dx, double dy) {
    const int nx = flux_y.nx();
    const int ny = flux_x.ny();
    Field2 div(nx, ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            div(i, j) = (flux_x(i + 1, j) - flux_x(i, j)) / dx + (flux_y(i, j + 1) - flux_y(i, j)) / dy;
        }
    }
    return div;
}

MacroSolution solve_macro(const MacroDomain& domain, const MobilityLaw& law, const ForceField& force, double tol,
                          int max_iter, const MacroOptions& options) {
    domain.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("solve_macro: tol must be > 0");
    if (!(options.relax > 0.0 && options.relax <= 1.0)) throw std::invalid_argument("relaxation must lie in (0, 1]");
    if (!(options.delta_final >= 0.0)) throw std::invalid_argument("solve_macro: delta_final must be >= 0");

    const int nx = domain.nx;
    const int ny = domain.ny;
    MacroSolution out;
    out.domain = domain;
    out.force = force.sample(domain);
    out.pressure = Field2(nx, ny);
    out.flux_x = Field2(nx + 1, ny);
    out.flux_y = Field2(nx, ny + 1);

    const double f_max = max_force(out.force);
    if (f_max == 0.0) return out;
    out.flux_scale = norm(law.eval({f_max, 0.0}));

    const bool linear = law.p_dual() == 2.0 && !law.is_table();
    const std::vector<double> levels =
        law.p_dual() == 2.0 ? std::vector<double>{0.0} : delta_schedule(options.delta_start, options.delta_final);
    const double relax = linear ? 1.0 : options.relax;
    const MacroProblem problem(domain, law, out.force, out.flux_scale);

    Field2 P(nx, ny);
    MacroState state;
    int iterations = 0;
    for (std::size_t level = 0; level < levels.size(); ++level) {
        const bool last = level + 1 == levels.size();
        const double delta = levels[level] * f_max;
        const double level_tol = last ? tol : std::max(tol, levels[level]);
        if (last) out.continuation_end = out.residual_history.size();
        state = problem.evaluate(P, delta);
        out.residual_history.push_back(state.residual);
        const std::size_t level_start = out.residual_history.size() - 1;
        while (state.residual > level_tol) {
            if (iterations >= max_iter) {
                throw SolverError(non_convergence_message("macro", iterations, state.residual), out.residual_history);
            }
            const std::size_t k = out.residual_history.size() - 1;
            if (k >= level_start + options.stagnation_window &&
                state.residual > (1.0 - options.stagnation_drop) * out.residual_history[k - options.stagnation_window]) {
                throw SolverError(non_convergence_message("macro", iterations, state.residual) +
                                      "; residual stagnated, increase the regularization (delta_reg)",
                                  out.residual_history);
            }
            Field2 rhs = state.divergence;
            for (double& v : rhs.values()) v = -v;
            const FacePoissonResult step = solve_face_poisson({state.coeff_x, state.coeff_y}, rhs, Boundary2D::no_flux,
                                                              domain.dx(), domain.dy(), options.inner_tol,
                                                              options.inner_max_iter);
            double omega = relax;
            Field2 best_P = P;
            MacroState best = state;
            for (int attempt = 0; attempt < 8; ++attempt, omega *= 0.5) {
                Field2 trial = P;
                for (std::size_t a = 0; a < trial.size(); ++a) trial.values()[a] += omega * step.solution.values()[a];
                trial.subtract_mean();
                MacroState next = problem.evaluate(trial, delta);
                if (next.residual <= best.residual) {
                    best_P = std::move(trial);
                    best = std::move(next);
                    break;
                }
            }
            P = std::move(best_P);
            state = std::move(best);
            ++iterations;
            out.residual_history.push_back(state.residual);
        }
    }

    out.pressure = std::move(P);
    out.flux_x = std::move(state.flux_x);
    out.flux_y = std::move(state.flux_y);
    out.residual = state.residual;
    out.max_divergence = state.max_div;
    out.iterations = iterations;
    std::vector<double> cell_mass;
    cell_mass.reserve(state.divergence.size());
    for (double d : state.divergence.values()) cell_mass.push_back(d * domain.dx() * domain.dy());
    out.mass_balance = compensated_sum(cell_mass);
    return out;
}

Vec2 velocity_profile(const Vec2& G, double h, const PowerLawFluid& fluid, double y3) {
    if (!(h > 0.0)) throw std::invalid_argument("velocity_profile: h must be > 0");
    if (!(y3 >= 0.0 && y3 <= h)) throw std::invalid_argument("velocity_profile: y3 must lie in [0, h]");
    if (!is_finite(G)) throw std::invalid_argument("velocity_profile: G must be finite");
    const double q = fluid.p_dual();
    const double shape = std::pow(0.5 * h, q) - std::pow(std::abs(0.5 * h - y3), q);
    const double factor = std::pow(2.0, 0.5 * q) / (q * std::pow(fluid.mu(), q - 1.0));
    return factor * shape * flux_coefficient(norm(G), q, 0.0) * G;
}

Vec2 cell_velocity_profile_2d(double h, const Vec2& grad_pi, const Vec2& xi, const PowerLawFluid& fluid, double y3) {
    const PowerLawFluid unit(fluid.p(), 1.0, fluid.delta_reg());
    return -1.0 * velocity_profile(xi + grad_pi, h, unit, y3);
}

void write_field_csv(const MacroSolution& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write field file '" + path + "'");
    out << "x,y,P,Vx,Vy\n";
    char buf[160];
    for (int j = 0; j < s.domain.ny; ++j) {
        for (int i = 0; i < s.domain.nx; ++i) {
            const Vec2 v = s.cell_flux(i, j);
            std::snprintf(buf, sizeof buf, "%.11e,%.11e,%.11e,%.11e,%.11e\n", s.domain.x(i), s.domain.y(j),
                          s.pressure(i, j), v.x, v.y);
            out << buf;
        }
    }
}

void write_field_vtk(const MacroSolution& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write VTK file '" + path + "'");
    const int nx = s.domain.nx;
    const int ny = s.domain.ny;
    out << "# vtk DataFile Version 3.0\nmacro pressure and flux\nASCII\nDATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << nx << ' ' << ny << " 1\n";
    out << "ORIGIN " << s.domain.x(0) << ' ' << s.domain.y(0) << " 0\n";
    out << "SPACING " << s.domain.dx() << ' ' << s.domain.dy() << " 1\n";
    out << "POINT_DATA " << static_cast<long>(nx) * ny << '\n';
    out.precision(12);
    out << "SCALARS P double 1\nLOOKUP_TABLE default\n";
    for (double p : s.pressure.values()) out << p << '\n';
    out << "VECTORS V double\n";
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const Vec2 v = s.cell_flux(i, j);
            out << v.x << ' ' << v.y << " 0\n";
        }
    }
}

}  // namespace thinfilm
