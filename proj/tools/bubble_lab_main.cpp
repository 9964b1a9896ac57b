#include <cstdio>
#include <fstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bubblelab/experiments.hpp"
#include "bubblelab/version.hpp"

namespace {

nlohmann::json merge(nlohmann::json base, const nlohmann::json& over) {
    for (const auto& [k, v] : over.items()) {
        if (v.is_object() && base.contains(k) && base[k].is_object())
            base[k] = merge(base[k], v);
        else
            base[k] = v;
    }
    return base;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bubble-lab: numerical laboratory for the critical nonlocal equation"};
    app.set_version_flag("--version", bubblelab::kVersion);

    std::string experiment;
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    app.add_option("experiment", experiment, "one of: bubble-check riesz-check shoot manufacture solve blowup-rate hypotheses energy")
        ->required();
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--set", overrides, "override a config key, e.g. --set params.n=6");
    app.add_option("--out", out_dir, "output directory (overrides output_dir)");
    CLI11_PARSE(app, argc, argv);

    try {
        nlohmann::json merged = bubblelab::default_config(experiment);
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in)
                throw bubblelab::ConfigError("cannot open config file: " + config_path);
            nlohmann::json file_cfg;
            try {
                in >> file_cfg;
            } catch (const std::exception& e) {
                throw bubblelab::ConfigError(std::string("config parse error: ") + e.what());
            }
            merged = merge(merged, file_cfg);
        }
        for (const auto& kv : overrides)
            bubblelab::apply_override(merged, kv);
        if (!out_dir.empty())
            merged["output_dir"] = out_dir;

        const auto cfg = bubblelab::parse_config(merged, experiment);
        return bubblelab::run_and_emit(cfg);
    } catch (const bubblelab::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const bubblelab::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 1;
    } catch (const bubblelab::Error& e) {
        std::fprintf(stderr, "experiment failure: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
