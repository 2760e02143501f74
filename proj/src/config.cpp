#include "thinfilm/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>
#include <vector>

#include "thinfilm/geometry.hpp"
#include "thinfilm/macro_solver.hpp"
#include "thinfilm/mobility.hpp"
#include "thinfilm/rheology.hpp"

namespace thinfilm {

namespace {

struct Binding {
    const char* section;
    const char* key;
    std::variant<double*, int*, std::string*, bool*> target;
};

std::vector<Binding> bindings(RunConfig& c) {
    return {
        {"fluid", "p", &c.fluid.p},
        {"fluid", "mu", &c.fluid.mu},
        {"fluid", "delta_reg", &c.fluid.delta_reg},
        {"regime", "mode", &c.regime.mode},
        {"regime", "lambda", &c.regime.lambda},
        {"regime", "eps", &c.regime.eps},
        {"regime", "eta", &c.regime.eta},
        {"regime", "threshold", &c.regime.threshold},
        {"regime", "mu_scaling", &c.regime.mu_scaling},
        {"roughness", "kind", &c.roughness.kind},
        {"roughness", "base", &c.roughness.base},
        {"roughness", "amplitude", &c.roughness.amplitude},
        {"roughness", "file", &c.roughness.file},
        {"domain", "L1", &c.domain.L1},
        {"domain", "L2", &c.domain.L2},
        {"domain", "nx", &c.domain.nx},
        {"domain", "ny", &c.domain.ny},
        {"force", "kind", &c.force.kind},
        {"force", "c1", &c.force.c1},
        {"force", "c2", &c.force.c2},
        {"force", "potential", &c.force.potential},
        {"force", "omega", &c.force.omega},
        {"force", "file", &c.force.file},
        {"solver", "tol", &c.solver.tol},
        {"solver", "max_iter", &c.solver.max_iter},
        {"solver", "relax", &c.solver.relax},
        {"solver", "cell_tol", &c.solver.cell_tol},
        {"solver", "cell_max_iter", &c.solver.cell_max_iter},
        {"solver", "cell_n", &c.solver.cell_n},
        {"solver", "cell3d_tol", &c.solver.cell3d_tol},
        {"solver", "cell3d_max_iter", &c.solver.cell3d_max_iter},
        {"solver", "cell3d_n", &c.solver.cell3d_n},
        {"solver", "cell3d_nz", &c.solver.cell3d_nz},
        {"solver", "kappa", &c.solver.kappa},
        {"solver", "table_size", &c.solver.table_size},
        {"solver", "table_file", &c.solver.table_file},
        {"output", "dir", &c.output.dir},
        {"output", "vtk", &c.output.vtk},
        {"profile", "g1", &c.profile.g1},
        {"profile", "g2", &c.profile.g2},
        {"profile", "h", &c.profile.h},
        {"profile", "samples", &c.profile.samples},
        {"validate", "seed", &c.validate.seed},
        {"validate", "pairs", &c.validate.pairs},
        {"validate", "cell_n", &c.validate.cell_n},
        {"validate", "cell3d_n", &c.validate.cell3d_n},
    };
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Drops a `; comment` or `# comment` that starts the value or follows whitespace.
std::string strip_comment(const std::string& s) {
    for (std::size_t k = 0; k < s.size(); ++k) {
        if ((s[k] == ';' || s[k] == '#') && (k == 0 || s[k - 1] == ' ' || s[k - 1] == '\t')) return s.substr(0, k);
    }
    return s;
}

void assign(const Binding& b, const std::string& raw) {
    const std::string text = trim(strip_comment(raw));
    const std::string where = std::string("[") + b.section + "] " + b.key;
    std::visit(
        [&](auto* target) {
            using T = std::remove_pointer_t<decltype(target)>;
            if constexpr (std::is_same_v<T, std::string>) {
                *target = text;
            } else if constexpr (std::is_same_v<T, bool>) {
                if (text == "true" || text == "1" || text == "yes") {
                    *target = true;
                } else if (text == "false" || text == "0" || text == "no") {
                    *target = false;
                } else {
                    throw ConfigError(where + ": expected true or false, got '" + text + "'");
                }
            } else {
                std::size_t used = 0;
                try {
                    if constexpr (std::is_same_v<T, int>) {
                        *target = std::stoi(text, &used);
                    } else {
                        *target = std::stod(text, &used);
                    }
                } catch (const std::exception&) {
                    used = 0;
                }
                if (text.empty() || used != text.size()) {
                    throw ConfigError(where + ": expected a number, got '" + text + "'");
                }
            }
        },
        b.target);
}

std::string render(const Binding& b) {
    return std::visit(
        [](auto* target) -> std::string {
            using T = std::remove_pointer_t<decltype(target)>;
            if constexpr (std::is_same_v<T, std::string>) {
                return *target;
            } else if constexpr (std::is_same_v<T, bool>) {
                return *target ? "true" : "false";
            } else if constexpr (std::is_same_v<T, int>) {
                return std::to_string(*target);
            } else {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", *target);
                return buf;
            }
        },
        b.target);
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

}  // namespace

void RunConfig::check() const {
    try {
        PowerLawFluid(fluid.p, fluid.mu, fluid.delta_reg);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("[fluid] ") + e.what());
    }
    static const std::set<std::string> modes{"stokes", "reynolds", "highfreq", "auto"};
    require(modes.count(regime.mode) == 1, "[regime] mode must be stokes, reynolds, highfreq or auto");
    require(regime.mode != "auto" || (regime.eps > 0.0 && regime.eta > 0.0),
            "[regime] mode = auto requires eps > 0 and eta > 0");
    require(regime.mode != "stokes" || regime.lambda > 0.0, "[regime] mode = stokes requires lambda > 0");
    require(regime.threshold > 1.0, "[regime] threshold must exceed 1");
    try {
        mu_scaling_from_string(regime.mu_scaling);
        roughness_kind_from_string(roughness.kind);
        force_kind_from_string(force.kind);
        potential_from_string(force.potential);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    require(roughness.base > 0.0, "[roughness] base must be > 0");
    require(roughness.amplitude >= 0.0, "[roughness] amplitude must be >= 0");
    require(roughness.kind == "flat" || roughness.kind == "custom_grid" || roughness.base - roughness.amplitude > 0.0,
            "[roughness] base - amplitude must be > 0");
    require(roughness.kind != "custom_grid" || !roughness.file.empty(), "[roughness] kind = custom_grid requires file");
    require(domain.L1 > 0.0 && domain.L2 > 0.0, "[domain] L1 and L2 must be > 0");
    require(domain.nx >= 4 && domain.ny >= 4, "[domain] nx and ny must be >= 4");
    require(std::isfinite(force.c1) && std::isfinite(force.c2) && std::isfinite(force.omega),
            "[force] values must be finite");
    require(force.kind != "custom" || !force.file.empty(), "[force] kind = custom requires file");
    require(solver.tol > 0.0 && solver.cell_tol > 0.0 && solver.cell3d_tol > 0.0, "[solver] tolerances must be > 0");
    require(solver.max_iter > 0 && solver.cell_max_iter > 0 && solver.cell3d_max_iter > 0,
            "[solver] iteration limits must be > 0");
    require(solver.relax > 0.0 && solver.relax <= 1.0, "[solver] relax must lie in (0, 1]");
    require(solver.cell_n >= 8, "[solver] cell_n must be >= 8");
    require(solver.cell3d_n >= 8 && solver.cell3d_nz >= 8, "[solver] cell3d_n and cell3d_nz must be >= 8");
    require(solver.kappa > 0.0, "[solver] kappa must be > 0");
    require(solver.table_size >= 4, "[solver] table_size must be >= 4");
    require(!output.dir.empty(), "[output] dir must not be empty");
    require(profile.samples >= 2, "[profile] samples must be >= 2");
    require(profile.h >= 0.0, "[profile] h must be >= 0");
    require(validate.pairs >= 1, "[validate] pairs must be >= 1");
    require(validate.cell_n >= 16, "[validate] cell_n must be >= 16");
    require(validate.cell3d_n >= 8, "[validate] cell3d_n must be >= 8");
}

RunConfig parse_config(std::istream& in) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config syntax: ") + e.what());
    }
    RunConfig config;
    const std::vector<Binding> known = bindings(config);
    for (const auto& [section, keys] : tree) {
        if (keys.empty() && !keys.data().empty()) {
            throw ConfigError("config key '" + section + "' outside any section");
        }
        bool section_known = false;
        for (const Binding& b : known) section_known |= section == b.section;
        if (!section_known) throw ConfigError("unknown config section [" + section + "]");
        for (const auto& [key, value] : keys) {
            const Binding* match = nullptr;
            for (const Binding& b : known) {
                if (section == b.section && key == b.key) match = &b;
            }
            if (!match) throw ConfigError("unknown config key '" + key + "' in [" + section + "]");
            assign(*match, value.data());
        }
    }
    config.check();
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

std::string serialize_config(const RunConfig& config) {
    RunConfig copy = config;
    std::ostringstream out;
    std::string section;
    for (const Binding& b : bindings(copy)) {
        if (section != b.section) {
            if (!section.empty()) out << '\n';
            section = b.section;
            out << '[' << section << "]\n";
        }
        out << b.key << " = " << render(b) << '\n';
    }
    return out.str();
}

}  // namespace thinfilm
