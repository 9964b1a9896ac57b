#include "bubblelab/config.hpp"

#include <algorithm>
#include <cstdio>

namespace bubblelab {

RadialGrid GridConfig::build() const {
    try {
        if (scheme == "uniform")
            return make_grid(r_max, N, GridScheme::Uniform);
        if (scheme == "geometric")
            return make_grid(r_max, N, GridScheme::Geometric);
        if (scheme == "graded")
            return make_graded_grid(core_radius, core_h, r_max, growth);
    } catch (const Error& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
    throw ConfigError("grid.scheme must be uniform, geometric or graded");
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {"bubble-check", "riesz-check", "shoot",
                                                   "manufacture",  "solve",       "blowup-rate",
                                                   "hypotheses",   "energy"};
    return names;
}

nlohmann::json default_config(const std::string& experiment) {
    using json = nlohmann::json;
    json j;
    j["params"] = {{"n", 6},     {"ell", 1.0},     {"Q", 24.0},     {"alpha", 0.5},
                   {"r_ball", 1.0}, {"rho", 0.5},  {"L_decay", 2.0}, {"K_quot", 30.0},
                   {"eta", 0.5}, {"sigma", 0.0},   {"delta", 0.0}};
    j["grid"] = {{"r_max", 20.0}, {"N", 4000}, {"scheme", "uniform"},
                 {"core_radius", 6.0}, {"core_h", 0.005}, {"growth", 1.015}};
    j["eps_list"] = {0.2, 0.1, 0.05, 0.025};
    j["perturbation"] = {{"amplitude", 1.0}, {"center", 1.0}, {"width", 0.5}};
    j["tolerances"] = json::object();
    j["output_dir"] = "out";
    j["oracle_cells"] = 64;
    j["ell_list"] = {0.5, 1.0, 1.5};
    j["v0"] = 1.0;
    j["solve_tol"] = 1e-8;
    j["max_iter"] = 100;
    j["guess_scale"] = 1.1;

    if (experiment == "riesz-check" || experiment == "manufacture" || experiment == "energy") {
        j["params"]["n"] = 3;
        j["params"]["Q"] = 3.0;
        j["grid"] = {{"r_max", 40.0}, {"N", 0}, {"scheme", "graded"},
                     {"core_radius", 6.0}, {"core_h", 0.005}, {"growth", 1.015}};
    } else if (experiment == "solve") {
        j["grid"] = {{"r_max", 30.0}, {"N", 0}, {"scheme", "graded"},
                     {"core_radius", 6.0}, {"core_h", 0.0075}, {"growth", 1.015}};
    } else if (experiment == "hypotheses") {
        j["params"]["rho"] = 10.0;
        j["params"]["r_ball"] = 12.0;
        j["eps_list"] = {0.2, 0.1, 0.05};
        j["grid"] = {{"r_max", 40.0}, {"N", 0}, {"scheme", "graded"},
                     {"core_radius", 6.0}, {"core_h", 0.01}, {"growth", 1.015}};
    }
    return j;
}

void apply_override(nlohmann::json& j, const std::string& key_value) {
    const auto eq = key_value.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("--set expects key=value, got: " + key_value);
    const std::string path = key_value.substr(0, eq);
    const std::string raw = key_value.substr(eq + 1);
    nlohmann::json value;
    try {
        value = nlohmann::json::parse(raw);
    } catch (...) {
        value = raw; // bare strings allowed
    }
    nlohmann::json* node = &j;
    std::size_t pos = 0;
    while (true) {
        const auto dot = path.find('.', pos);
        const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (key.empty())
            throw ConfigError("--set: empty path segment in " + path);
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        pos = dot + 1;
    }
}

namespace {

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
    if (!j.contains(key))
        return fallback;
    try {
        return j.at(key).get<T>();
    } catch (...) {
        throw ConfigError(std::string("config: bad value for ") + key);
    }
}

} // namespace

ExperimentConfig parse_config(const nlohmann::json& merged, const std::string& experiment) {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), experiment) == names.end())
        throw ConfigError("unknown experiment: " + experiment);
    if (merged.contains("experiment")) {
        const auto in_file = merged.at("experiment").get<std::string>();
        if (in_file != experiment)
            throw ConfigError("config file names experiment '" + in_file +
                              "' but the command line asked for '" + experiment + "'");
    }

    ExperimentConfig cfg;
    cfg.experiment = experiment;
    const auto p = merged.value("params", nlohmann::json::object());
    cfg.params.n = get_or(p, "n", cfg.params.n);
    cfg.params.ell = get_or(p, "ell", cfg.params.ell);
    cfg.params.Q = get_or(p, "Q", cfg.params.Q);
    cfg.params.alpha = get_or(p, "alpha", cfg.params.alpha);
    cfg.params.r_ball = get_or(p, "r_ball", cfg.params.r_ball);
    cfg.params.rho = get_or(p, "rho", cfg.params.rho);
    cfg.params.L_decay = get_or(p, "L_decay", cfg.params.L_decay);
    cfg.params.K_quot = get_or(p, "K_quot", cfg.params.K_quot);
    cfg.params.eta = get_or(p, "eta", cfg.params.eta);
    cfg.params.sigma = get_or(p, "sigma", cfg.params.sigma);
    cfg.params.delta = get_or(p, "delta", cfg.params.delta);

    const auto g = merged.value("grid", nlohmann::json::object());
    cfg.grid.r_max = get_or(g, "r_max", cfg.grid.r_max);
    cfg.grid.N = get_or(g, "N", cfg.grid.N);
    cfg.grid.scheme = get_or<std::string>(g, "scheme", cfg.grid.scheme);
    cfg.grid.core_radius = get_or(g, "core_radius", cfg.grid.core_radius);
    cfg.grid.core_h = get_or(g, "core_h", cfg.grid.core_h);
    cfg.grid.growth = get_or(g, "growth", cfg.grid.growth);

    cfg.eps_list = get_or(merged, "eps_list", cfg.eps_list);
    const auto pert = merged.value("perturbation", nlohmann::json::object());
    cfg.perturbation.amplitude = get_or(pert, "amplitude", cfg.perturbation.amplitude);
    cfg.perturbation.center = get_or(pert, "center", cfg.perturbation.center);
    cfg.perturbation.width = get_or(pert, "width", cfg.perturbation.width);
    if (merged.contains("tolerances"))
        for (const auto& [k, v] : merged.at("tolerances").items())
            cfg.tolerances[k] = v.get<double>();
    cfg.output_dir = get_or<std::string>(merged, "output_dir", cfg.output_dir);
    cfg.oracle_cells = get_or(merged, "oracle_cells", cfg.oracle_cells);
    cfg.ell_list = get_or(merged, "ell_list", cfg.ell_list);
    cfg.v0 = get_or(merged, "v0", cfg.v0);
    cfg.solve_tol = get_or(merged, "solve_tol", cfg.solve_tol);
    cfg.max_iter = get_or(merged, "max_iter", cfg.max_iter);
    cfg.guess_scale = get_or(merged, "guess_scale", cfg.guess_scale);

    // validate against module preconditions before dispatch
    try {
        cfg.params.validate();
        cfg.grid.build();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (experiment == "blowup-rate") {
        if (cfg.eps_list.size() < 3)
            throw ConfigError("blowup-rate: eps_list needs at least 3 decreasing values");
        for (std::size_t i = 0; i + 1 < cfg.eps_list.size(); ++i)
            if (!(cfg.eps_list[i] > cfg.eps_list[i + 1]) || !(cfg.eps_list.back() > 0.0))
                throw ConfigError("blowup-rate: eps_list must be positive and decreasing");
        if (!(cfg.perturbation.width > 0.0))
            throw ConfigError("blowup-rate: perturbation width must be positive");
    }
    if (experiment == "riesz-check") {
        if (cfg.oracle_cells < 4 || cfg.oracle_cells > 128)
            throw ConfigError("riesz-check: oracle_cells must be in [4,128]");
        for (double l : cfg.ell_list)
            if (!(l > 0.0) || !(l < cfg.params.n))
                throw ConfigError("riesz-check: ell_list entries must lie in (0,n)");
    }
    if (experiment == "shoot" && !(cfg.v0 > 0.0))
        throw ConfigError("shoot: v0 must be positive");
    if (experiment == "solve") {
        if (!(cfg.solve_tol > 0.0))
            throw ConfigError("solve: solve_tol must be positive");
        if (cfg.max_iter < 0)
            throw ConfigError("solve: max_iter must be >= 0");
        if (!(cfg.guess_scale > 0.0))
            throw ConfigError("solve: guess_scale must be positive");
    }
    return cfg;
}

nlohmann::json echo_config(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["experiment"] = cfg.experiment;
    j["params"] = {{"n", cfg.params.n},         {"ell", cfg.params.ell},
                   {"Q", cfg.params.Q},         {"alpha", cfg.params.alpha},
                   {"r_ball", cfg.params.r_ball}, {"rho", cfg.params.rho},
                   {"L_decay", cfg.params.L_decay}, {"K_quot", cfg.params.K_quot},
                   {"eta", cfg.params.eta},     {"sigma", cfg.params.sigma},
                   {"delta", cfg.params.delta}};
    j["grid"] = {{"r_max", cfg.grid.r_max},   {"N", cfg.grid.N},
                 {"scheme", cfg.grid.scheme}, {"core_radius", cfg.grid.core_radius},
                 {"core_h", cfg.grid.core_h}, {"growth", cfg.grid.growth}};
    j["eps_list"] = cfg.eps_list;
    j["perturbation"] = {{"amplitude", cfg.perturbation.amplitude},
                         {"center", cfg.perturbation.center},
                         {"width", cfg.perturbation.width}};
    j["tolerances"] = cfg.tolerances;
    j["oracle_cells"] = cfg.oracle_cells;
    j["ell_list"] = cfg.ell_list;
    j["v0"] = cfg.v0;
    j["solve_tol"] = cfg.solve_tol;
    j["max_iter"] = cfg.max_iter;
    j["guess_scale"] = cfg.guess_scale;
    return j;
}

std::string config_hash_hex(const nlohmann::json& echo) {
    const std::string s = echo.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace bubblelab
