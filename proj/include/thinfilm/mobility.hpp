#pragma once

/**
 * @file mobility.hpp
 * @brief Effective mobility laws G = f' - grad P  ->  film flux V'.
 *
 * Three families are supported:
 *  - HighFrequency(h_min): V' = h_min^{p'+1} / (2^{p'/2} (p'+1) mu^{p'-1}) |G|^{p'-2} G
 *  - FlatCell(h0): the same closed form for a smooth film of height h0
 *  - Table: a cell-problem response sampled at unit directions and extended by
 *    (p'-1)-homogeneity, V'(G) = |G|^{p'-1} A(G/|G|).
 */

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "thinfilm/rheology.hpp"
#include "thinfilm/vec2.hpp"

namespace thinfilm {

enum class TableSource { cell2d, cell3d };

/// Consistency scaling applied to cell-problem laws (cell problems are solved
/// at unit consistency).
enum class MuScaling { dual_power, plain };

std::string to_string(MuScaling scaling);
MuScaling mu_scaling_from_string(const std::string& name);

/// Cell-problem response sampled at uniformly spaced unit directions
/// theta_k = 2 pi k / N. Values are unscaled (unit consistency, no outer
/// Reynolds factor).
struct MobilityTable {
    std::vector<Vec2> directions;
    std::vector<Vec2> values;
    std::vector<double> residuals;
    std::vector<int> iterations;
    double p_dual = 2.0;
    TableSource source = TableSource::cell2d;
    double lambda = 0.0;

    std::size_t size() const { return values.size(); }
};

/// Uniform unit directions (cos theta_k, sin theta_k).
std::vector<Vec2> table_directions(int size);

/// CSV with header `theta,A1,A2,residual,iters`, 12 significant digits.
void save_table_csv(const MobilityTable& table, std::ostream& out);
void save_table_csv(const MobilityTable& table, const std::string& path);
/// Reads the CSV written by save_table_csv. The exponent and origin are not
/// part of the file and must be supplied by the caller.
MobilityTable load_table_csv(std::istream& in, double p_dual, TableSource source, double lambda = 0.0);
MobilityTable load_table_csv(const std::string& path, double p_dual, TableSource source, double lambda = 0.0);

/// Periodic cubic spline through values sampled at theta_k = 2 pi k / N.
class PeriodicSpline {
public:
    PeriodicSpline() = default;
    explicit PeriodicSpline(std::vector<double> samples);
    double operator()(double theta) const;

private:
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives
    double step_ = 0.0;
};

struct HighFrequencyLaw {
    double h_min;
};
struct FlatCellLaw {
    double h0;
};
struct TableLaw {
    MobilityTable table;
    PeriodicSpline a1;
    PeriodicSpline a2;
};

/// Immutable, thread-safe mobility law.
class MobilityLaw {
public:
    static MobilityLaw high_frequency(double h_min, const PowerLawFluid& fluid);
    static MobilityLaw flat_cell(double h0, const PowerLawFluid& fluid, MuScaling scaling = MuScaling::dual_power);
    static MobilityLaw from_table(MobilityTable table, const PowerLawFluid& fluid,
                                  MuScaling scaling = MuScaling::dual_power);

    const PowerLawFluid& fluid() const { return fluid_; }
    double p_dual() const { return fluid_.p_dual(); }
    std::string name() const;
    bool is_table() const { return std::holds_alternative<TableLaw>(variant_); }

    /// Scaled response at a unit direction d (|d| = 1).
    Vec2 unit_response(const Vec2& direction) const;

    /// Flux for the driving field G, regularized as
    /// (|G|^2 + delta^2)^{(p'-2)/2} |G| A(G/|G|); delta = 0 gives the exact law.
    Vec2 eval(const Vec2& G, double delta = 0.0) const;

    /// Frozen scalar coefficient c with eval(G, delta) = c G for isotropic laws;
    /// for tables it is the projection A(G/|G|) . G/|G| times the radial factor.
    double secant_coefficient(const Vec2& G, double delta) const;

private:
    MobilityLaw(std::variant<HighFrequencyLaw, FlatCellLaw, TableLaw> variant, PowerLawFluid fluid, double scale);

    std::variant<HighFrequencyLaw, FlatCellLaw, TableLaw> variant_;
    PowerLawFluid fluid_;
    double scale_;  // closed-form prefactor or table scaling
};

/// Exact (unregularized) evaluation of the law.
Vec2 eval_mobility(const MobilityLaw& law, const Vec2& G);

/// Film-flux prefactor h^{p'+1} / (2^{p'/2} (p'+1)).
double poiseuille_factor(double h, double p_dual);

enum class RegimeKind { stokes, reynolds_roughness, high_frequency };

struct Regime {
    RegimeKind kind;
    double lambda = 0.0;  // set for stokes
};

std::string to_string(RegimeKind kind);

/// Classifies eta/eps against [1/threshold, threshold].
Regime regime_classify(double eps, double eta, double threshold = 10.0);

}  // namespace thinfilm
