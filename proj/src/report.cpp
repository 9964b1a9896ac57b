#include "bubblelab/report.hpp"

#include <cstdio>
#include <fstream>

#include "bubblelab/version.hpp"

namespace bubblelab {

bool Report::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass)
            return false;
    return true;
}

nlohmann::json Report::to_json() const {
    nlohmann::json j;
    j["experiment"] = experiment;
    j["config"] = config_echo;
    j["config_hash"] = config_hash;
    j["version"] = kVersion;
    j["results"] = results;
    nlohmann::json checks_j = nlohmann::json::array();
    for (const auto& c : checks) {
        checks_j.push_back({{"name", c.name},
                            {"op", c.op},
                            {"tolerance", c.tolerance},
                            {"measured", c.measured},
                            {"pass", c.pass}});
    }
    j["checks"] = checks_j;
    j["pass"] = all_pass();
    return j;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_or_throw(const std::filesystem::path& p) {
    std::ofstream out(p);
    if (!out)
        throw IoError("cannot write " + p.string());
    return out;
}

} // namespace

void emit(const Report& report, const std::map<std::string, RadialField>& curves,
          const std::vector<RateRow>& rates, const std::filesystem::path& out_dir,
          const std::vector<std::pair<std::string, double>>& timings) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec && !std::filesystem::is_directory(out_dir))
        throw IoError("cannot create output directory " + out_dir.string());

    {
        auto out = open_or_throw(out_dir / "report.json");
        out << report.to_json().dump(2) << "\n";
        if (!out)
            throw IoError("short write on report.json");
    }
    for (const auto& [name, field] : curves) {
        auto out = open_or_throw(out_dir / (name + ".csv"));
        out << "r,value\n";
        for (std::size_t i = 0; i < field.size(); ++i)
            out << fmt17(field.grid.nodes[i]) << "," << fmt17(field.values[i]) << "\n";
        if (!out)
            throw IoError("short write on " + name + ".csv");
    }
    if (!rates.empty()) {
        auto out = open_or_throw(out_dir / "rates.csv");
        out << "eps,deviation,hyp_product,a_decay_slope\n";
        for (const auto& row : rates)
            out << fmt17(row.eps) << "," << fmt17(row.deviation) << "," << fmt17(row.hyp_product)
                << "," << fmt17(row.a_decay_slope) << "\n";
    }
    if (!timings.empty()) {
        auto out = open_or_throw(out_dir / "timings.csv");
        out << "step,seconds\n";
        for (const auto& [name, sec] : timings)
            out << name << "," << fmt17(sec) << "\n";
    }
}

} // namespace bubblelab
