#ifndef BUBBLELAB_EXPERIMENTS_HPP
#define BUBBLELAB_EXPERIMENTS_HPP

#include "bubblelab/config.hpp"
#include "bubblelab/report.hpp"

namespace bubblelab {

struct ExperimentOutput {
    Report report;
    std::map<std::string, RadialField> curves;
    std::vector<RateRow> rates;
    std::vector<std::pair<std::string, double>> timings;
};

/// Dispatch to the named experiment. Throws on configuration problems;
/// failed checks are recorded in the report, not thrown.
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

/// run + emit; returns the process exit code (0 pass, 1 failed checks).
int run_and_emit(const ExperimentConfig& cfg);

} // namespace bubblelab

#endif
