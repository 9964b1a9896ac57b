#ifndef BUBBLELAB_CONFIG_HPP
#define BUBBLELAB_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bubblelab/grid.hpp"
#include "bubblelab/harness.hpp"
#include "bubblelab/params.hpp"

namespace bubblelab {

struct GridConfig {
    double r_max = 20.0;
    int N = 4000;
    std::string scheme = "uniform"; // uniform | geometric | graded
    double core_radius = 6.0;       // graded only
    double core_h = 0.005;          // graded only
    double growth = 1.015;          // graded only

    RadialGrid build() const;
};

struct ExperimentConfig {
    std::string experiment;
    ModelParams params;
    GridConfig grid;
    std::vector<double> eps_list;
    PerturbationSpec perturbation;
    std::map<std::string, double> tolerances;
    std::string output_dir = "out";
    int oracle_cells = 64;
    std::vector<double> ell_list; // riesz-check
    double v0 = 1.0;              // shoot
    double solve_tol = 1e-8;
    int max_iter = 100;
    double guess_scale = 1.1;

    double tol(const std::string& name, double fallback) const {
        auto it = tolerances.find(name);
        return it == tolerances.end() ? fallback : it->second;
    }
};

/// Names of the supported experiments.
const std::vector<std::string>& experiment_names();

/// Per-experiment defaults, merged under the config file and --set overrides.
nlohmann::json default_config(const std::string& experiment);

/// Apply a dotted-path override ("params.n=6", "eps_list=[0.2,0.1,0.05]").
void apply_override(nlohmann::json& j, const std::string& key_value);

/// Parse + validate the merged JSON against the module preconditions.
/// Throws ConfigError on anything inconsistent.
ExperimentConfig parse_config(const nlohmann::json& merged, const std::string& experiment);

/// Canonical echo of the effective config (excludes output_dir) and its hash.
nlohmann::json echo_config(const ExperimentConfig& cfg);
std::string config_hash_hex(const nlohmann::json& echo);

} // namespace bubblelab

#endif
