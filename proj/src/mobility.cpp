#include "thinfilm/mobility.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace thinfilm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double mu_factor(const PowerLawFluid& fluid, MuScaling scaling) {
    return scaling == MuScaling::dual_power ? std::pow(fluid.mu(), -(fluid.p_dual() - 1.0)) : 1.0 / fluid.mu();
}

std::string format_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

}  // namespace

std::string to_string(MuScaling scaling) { return scaling == MuScaling::dual_power ? "dual_power" : "plain"; }

MuScaling mu_scaling_from_string(const std::string& name) {
    if (name == "dual_power") return MuScaling::dual_power;
    if (name == "plain") return MuScaling::plain;
    throw std::invalid_argument("mu_scaling must be dual_power or plain, got '" + name + "'");
}

std::vector<Vec2> table_directions(int size) {
    if (size < 1) throw std::invalid_argument("table size must be positive");
    std::vector<Vec2> dirs(static_cast<std::size_t>(size));
    for (int k = 0; k < size; ++k) {
        const double theta = kTwoPi * k / size;
        dirs[k] = {std::cos(theta), std::sin(theta)};
    }
    // Exact compass directions keep symmetric tables exactly symmetric.
    for (Vec2& d : dirs) {
        if (std::abs(d.x) < 1e-15) d.x = 0.0;
        if (std::abs(d.y) < 1e-15) d.y = 0.0;
    }
    return dirs;
}

void save_table_csv(const MobilityTable& table, std::ostream& out) {
    out << "theta,A1,A2,residual,iters\n";
    const int n = static_cast<int>(table.size());
    for (int k = 0; k < n; ++k) {
        const double theta = kTwoPi * k / n;
        const double residual = k < static_cast<int>(table.residuals.size()) ? table.residuals[k] : 0.0;
        const int iters = k < static_cast<int>(table.iterations.size()) ? table.iterations[k] : 0;
        out << format_sci(theta) << ',' << format_sci(table.values[k].x) << ',' << format_sci(table.values[k].y)
            << ',' << format_sci(residual) << ',' << iters << '\n';
    }
}

void save_table_csv(const MobilityTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write table file '" + path + "'");
    save_table_csv(table, out);
}

MobilityTable load_table_csv(std::istream& in, double p_dual, TableSource source, double lambda) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("theta,A1,A2,residual,iters", 0) != 0) {
        throw std::invalid_argument("mobility table: missing header 'theta,A1,A2,residual,iters'");
    }
    MobilityTable table;
    table.p_dual = p_dual;
    table.source = source;
    table.lambda = lambda;
    std::vector<double> thetas;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 5) throw std::invalid_argument("mobility table: expected 5 columns in '" + line + "'");
        try {
            thetas.push_back(std::stod(fields[0]));
            table.values.push_back({std::stod(fields[1]), std::stod(fields[2])});
            table.residuals.push_back(std::stod(fields[3]));
            table.iterations.push_back(std::stoi(fields[4]));
        } catch (const std::exception&) {
            throw std::invalid_argument("mobility table: bad number in '" + line + "'");
        }
    }
    if (table.values.empty()) throw std::invalid_argument("mobility table is empty");
    const int n = static_cast<int>(thetas.size());
    for (int k = 0; k < n; ++k) {
        if (std::abs(thetas[k] - kTwoPi * k / n) > 1e-9) {
            throw std::invalid_argument("mobility table directions must be uniform in [0, 2 pi)");
        }
    }
    table.directions = table_directions(n);
    return table;
}

MobilityTable load_table_csv(const std::string& path, double p_dual, TableSource source, double lambda) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open table file '" + path + "'");
    return load_table_csv(in, p_dual, source, lambda);
}

PeriodicSpline::PeriodicSpline(std::vector<double> samples) : y_(std::move(samples)) {
    const int n = static_cast<int>(y_.size());
    if (n < 1) throw std::invalid_argument("spline needs at least one sample");
    step_ = kTwoPi / n;
    m_.assign(static_cast<std::size_t>(n), 0.0);
    if (n < 3) return;
    // Cyclic system m_{k-1} + 4 m_k + m_{k+1} = 6 (y_{k+1} - 2 y_k + y_{k-1}) / step^2.
    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs(n);
    for (int k = 0; k < n; ++k) {
        const int prev = (k + n - 1) % n;
        const int next = (k + 1) % n;
        system(k, k) += 4.0;
        system(k, prev) += 1.0;
        system(k, next) += 1.0;
        rhs(k) = 6.0 * (y_[next] - 2.0 * y_[k] + y_[prev]) / (step_ * step_);
    }
    const Eigen::VectorXd m = system.partialPivLu().solve(rhs);
    for (int k = 0; k < n; ++k) m_[k] = m(k);
}

double PeriodicSpline::operator()(double theta) const {
    const int n = static_cast<int>(y_.size());
    if (n == 1) return y_[0];
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    int k = static_cast<int>(std::floor(t / step_));
    if (k >= n) k = n - 1;
    const int next = (k + 1) % n;
    const double a = (t - k * step_) / step_;
    const double b = 1.0 - a;
    return b * y_[k] + a * y_[next] + ((b * b * b - b) * m_[k] + (a * a * a - a) * m_[next]) * step_ * step_ / 6.0;
}

double poiseuille_factor(double h, double p_dual) {
    return std::pow(h, p_dual + 1.0) / (std::pow(2.0, 0.5 * p_dual) * (p_dual + 1.0));
}

MobilityLaw::MobilityLaw(std::variant<HighFrequencyLaw, FlatCellLaw, TableLaw> variant, PowerLawFluid fluid,
                         double scale)
    : variant_(std::move(variant)), fluid_(fluid), scale_(scale) {}

MobilityLaw MobilityLaw::high_frequency(double h_min, const PowerLawFluid& fluid) {
    if (!(h_min > 0.0)) throw std::invalid_argument("high-frequency law needs h_min > 0");
    const double scale = poiseuille_factor(h_min, fluid.p_dual()) * mu_factor(fluid, MuScaling::dual_power);
    return {HighFrequencyLaw{h_min}, fluid, scale};
}

MobilityLaw MobilityLaw::flat_cell(double h0, const PowerLawFluid& fluid, MuScaling scaling) {
    if (!(h0 > 0.0)) throw std::invalid_argument("flat-cell law needs h0 > 0");
    const double scale = poiseuille_factor(h0, fluid.p_dual()) * mu_factor(fluid, scaling);
    return {FlatCellLaw{h0}, fluid, scale};
}

MobilityLaw MobilityLaw::from_table(MobilityTable table, const PowerLawFluid& fluid, MuScaling scaling) {
    if (table.values.empty()) throw std::invalid_argument("mobility table is empty");
    if (std::abs(table.p_dual - fluid.p_dual()) > 1e-12 * fluid.p_dual()) {
        throw std::invalid_argument("mobility table exponent does not match the fluid");
    }
    double scale = mu_factor(fluid, scaling);
    if (table.source == TableSource::cell2d) scale /= std::pow(2.0, 0.5 * fluid.p_dual()) * (fluid.p_dual() + 1.0);
    std::vector<double> a1;
    std::vector<double> a2;
    for (const Vec2& v : table.values) {
        a1.push_back(v.x);
        a2.push_back(v.y);
    }
    TableLaw law{std::move(table), PeriodicSpline(std::move(a1)), PeriodicSpline(std::move(a2))};
    return {std::move(law), fluid, scale};
}

std::string MobilityLaw::name() const {
    if (std::holds_alternative<HighFrequencyLaw>(variant_)) return "HighFrequency";
    if (std::holds_alternative<FlatCellLaw>(variant_)) return "FlatCell";
    const auto& t = std::get<TableLaw>(variant_).table;
    return t.source == TableSource::cell2d ? "Table(cell2d)" : "Table(cell3d)";
}

Vec2 MobilityLaw::unit_response(const Vec2& direction) const {
    if (const auto* t = std::get_if<TableLaw>(&variant_)) {
        const double theta = std::atan2(direction.y, direction.x);
        return scale_ * Vec2{t->a1(theta), t->a2(theta)};
    }
    return scale_ * direction;
}

Vec2 MobilityLaw::eval(const Vec2& G, double delta) const {
    if (!is_finite(G)) throw std::invalid_argument("eval_mobility: non-finite driving field");
    const double s = norm(G);
    if (s == 0.0) return {};
    const double radial = flux_coefficient(s, p_dual(), delta) * s;
    return radial * unit_response((1.0 / s) * G);
}

double MobilityLaw::secant_coefficient(const Vec2& G, double delta) const {
    const double s = norm(G);
    double projection;
    if (s == 0.0) {
        projection = 0.25 * (dot(unit_response({1, 0}), {1, 0}) + dot(unit_response({0, 1}), {0, 1}) +
                             dot(unit_response({-1, 0}), {-1, 0}) + dot(unit_response({0, -1}), {0, -1}));
    } else {
        const Vec2 d = (1.0 / s) * G;
        projection = dot(unit_response(d), d);
    }
    double radial = flux_coefficient(s, p_dual(), delta);
    if (s == 0.0 && delta == 0.0) radial = 1.0;
    return projection * radial;
}

Vec2 eval_mobility(const MobilityLaw& law, const Vec2& G) { return law.eval(G, 0.0); }

std::string to_string(RegimeKind kind) {
    switch (kind) {
        case RegimeKind::stokes: return "Stokes";
        case RegimeKind::reynolds_roughness: return "ReynoldsRoughness";
        case RegimeKind::high_frequency: return "HighFrequency";
    }
    return "unknown";
}

Regime regime_classify(double eps, double eta, double threshold) {
    if (!(eps > 0.0) || !(eta > 0.0) || !std::isfinite(eps) || !std::isfinite(eta)) {
        throw std::invalid_argument("regime_classify: eps and eta must be positive");
    }
    if (!(threshold > 1.0)) throw std::invalid_argument("regime_classify: threshold must exceed 1");
    const double ratio = eta / eps;
    if (ratio < 1.0 / threshold) return {RegimeKind::reynolds_roughness, 0.0};
    if (ratio > threshold) return {RegimeKind::high_frequency, 0.0};
    return {RegimeKind::stokes, ratio};
}

}  // namespace thinfilm
