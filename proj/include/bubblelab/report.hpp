#ifndef BUBBLELAB_REPORT_HPP
#define BUBBLELAB_REPORT_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bubblelab/grid.hpp"

namespace bubblelab {

/// One asserted check: `op` records the comparison applied to (measured,
/// tolerance), one of "<=", ">=", "band" (|measured - 2| <= tolerance).
struct CheckResult {
    std::string name;
    std::string op;
    double tolerance = 0.0;
    double measured = 0.0;
    bool pass = false;
};

struct RateRow {
    double eps = 0.0;
    double deviation = 0.0;
    double hyp_product = 0.0;
    double a_decay_slope = 0.0;
};

struct Report {
    std::string experiment;
    nlohmann::json config_echo;
    std::string config_hash;
    nlohmann::json results;
    std::vector<CheckResult> checks;

    bool all_pass() const;
    nlohmann::json to_json() const;
};

/// Writes report.json (UTF-8, stable key order), one CSV per named curve with
/// header `r,value` (17 significant digits), and rates.csv when rows are
/// present. Wall-clock timings are written separately (timings.csv) so that
/// report.json is byte-identical across reruns of the same config.
void emit(const Report& report, const std::map<std::string, RadialField>& curves,
          const std::vector<RateRow>& rates, const std::filesystem::path& out_dir,
          const std::vector<std::pair<std::string, double>>& timings = {});

} // namespace bubblelab

#endif
