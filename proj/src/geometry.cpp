#include "thinfilm/geometry.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace thinfilm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int wrap_index(int i, int n) { return ((i % n) + n) % n; }

}  // namespace

std::string to_string(RoughnessKind kind) {
    switch (kind) {
        case RoughnessKind::flat: return "flat";
        case RoughnessKind::ridge_x1: return "ridge_x1";
        case RoughnessKind::ridge_x2: return "ridge_x2";
        case RoughnessKind::eggbox: return "eggbox";
        case RoughnessKind::custom_grid: return "custom_grid";
    }
    return "unknown";
}

RoughnessKind roughness_kind_from_string(const std::string& name) {
    if (name == "flat") return RoughnessKind::flat;
    if (name == "ridge_x1") return RoughnessKind::ridge_x1;
    if (name == "ridge_x2") return RoughnessKind::ridge_x2;
    if (name == "eggbox") return RoughnessKind::eggbox;
    if (name == "custom_grid") return RoughnessKind::custom_grid;
    throw std::invalid_argument("unknown roughness kind '" + name + "'");
}

RoughnessProfile::RoughnessProfile(RoughnessKind kind, double base, double amplitude)
    : kind_(kind), base_(base), amplitude_(amplitude) {
    if (kind == RoughnessKind::custom_grid) return;
    if (!std::isfinite(base) || !std::isfinite(amplitude)) {
        throw std::invalid_argument("roughness parameters must be finite");
    }
    if (amplitude < 0.0) throw std::invalid_argument("roughness amplitude must be >= 0");
    if (base - amplitude <= 0.0) {
        throw std::invalid_argument("roughness must stay positive: base - amplitude > 0 required");
    }
    extrema_ = kind == RoughnessKind::flat ? std::pair{base, base} : std::pair{base - amplitude, base + amplitude};
}

RoughnessProfile RoughnessProfile::flat(double base) { return {RoughnessKind::flat, base, 0.0}; }
RoughnessProfile RoughnessProfile::ridge_x1(double base, double amplitude) {
    return {RoughnessKind::ridge_x1, base, amplitude};
}
RoughnessProfile RoughnessProfile::ridge_x2(double base, double amplitude) {
    return {RoughnessKind::ridge_x2, base, amplitude};
}
RoughnessProfile RoughnessProfile::eggbox(double base, double amplitude) {
    return {RoughnessKind::eggbox, base, amplitude};
}

RoughnessProfile RoughnessProfile::custom(Field2 samples) {
    if (samples.nx() != samples.ny() || samples.nx() < 1) {
        throw std::invalid_argument("custom roughness grid must be square and non-empty");
    }
    for (double v : samples.values()) {
        if (!std::isfinite(v) || v <= 0.0) {
            throw std::invalid_argument("custom roughness grid must contain positive finite heights");
        }
    }
    RoughnessProfile profile(RoughnessKind::custom_grid, 0.0, 0.0);
    profile.extrema_ = {samples.min(), samples.max()};
    profile.samples_ = std::move(samples);
    return profile;
}

RoughnessProfile RoughnessProfile::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open roughness file '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::invalid_argument("roughness file '" + path + "': bad number '" + cell + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    const int n = static_cast<int>(rows.size());
    Field2 grid(n, n);
    for (int j = 0; j < n; ++j) {
        if (static_cast<int>(rows[j].size()) != n) {
            throw std::invalid_argument("roughness file '" + path + "' must hold n rows of n values");
        }
        // Row j holds y2 index j, column i holds y1 index i.
        for (int i = 0; i < n; ++i) grid(i, j) = rows[j][i];
    }
    return custom(std::move(grid));
}

double RoughnessProfile::builtin_value(double c1, double c2) const {
    switch (kind_) {
        case RoughnessKind::flat: return base_;
        case RoughnessKind::ridge_x1: return base_ + amplitude_ * c1;
        case RoughnessKind::ridge_x2: return base_ + amplitude_ * c2;
        case RoughnessKind::eggbox: return base_ + amplitude_ * c1 * c2;
        case RoughnessKind::custom_grid: break;
    }
    throw std::logic_error("builtin_value called on custom profile");
}

double RoughnessProfile::operator()(double y1, double y2) const {
    if (kind_ != RoughnessKind::custom_grid) {
        return builtin_value(std::cos(kTwoPi * y1), std::cos(kTwoPi * y2));
    }
    const int m = samples_.nx();
    const double s1 = (y1 + 0.5) * m;
    const double s2 = (y2 + 0.5) * m;
    const double f1 = std::floor(s1);
    const double f2 = std::floor(s2);
    const double t1 = s1 - f1;
    const double t2 = s2 - f2;
    const int i0 = static_cast<int>(f1);
    const int j0 = static_cast<int>(f2);
    return (1 - t1) * (1 - t2) * samples_.wrapped(i0, j0) + t1 * (1 - t2) * samples_.wrapped(i0 + 1, j0) +
           (1 - t1) * t2 * samples_.wrapped(i0, j0 + 1) + t1 * t2 * samples_.wrapped(i0 + 1, j0 + 1);
}

Field2 sample_h(const RoughnessProfile& profile, int n, int shift1, int shift2) {
    if (n < 4) throw std::invalid_argument("sample_h: n must be >= 4");
    Field2 out(n, n);
    if (profile.kind() == RoughnessKind::custom_grid) {
        const Field2& s = profile.samples();
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const int ii = wrap_index(i + shift1, n);
                const int jj = wrap_index(j + shift2, n);
                out(i, j) = s.nx() == n ? s(ii, jj) : profile(cell_coordinate(ii, n), cell_coordinate(jj, n));
            }
        }
        return out;
    }
    std::vector<double> cosines(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) cosines[i] = std::cos(kTwoPi * cell_coordinate(i, n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            out(i, j) = profile.builtin_value(cosines[wrap_index(i + shift1, n)], cosines[wrap_index(j + shift2, n)]);
        }
    }
    return out;
}

std::pair<double, double> extrema_h(const RoughnessProfile& profile) { return {profile.h_min(), profile.h_max()}; }

void MacroDomain::validate() const {
    if (!(L1 > 0.0) || !(L2 > 0.0)) throw std::invalid_argument("macro domain lengths must be > 0");
    if (nx < 4 || ny < 4) throw std::invalid_argument("macro grid needs nx, ny >= 4");
}

}  // namespace thinfilm
