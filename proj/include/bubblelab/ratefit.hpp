#ifndef BUBBLELAB_RATEFIT_HPP
#define BUBBLELAB_RATEFIT_HPP

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "bubblelab/errors.hpp"

namespace bubblelab {

/// Result of a least-squares line through (log x, log y).
struct RateFit {
    double slope = 0.0;
    double log_coeff = 0.0;
    double max_residual = 0.0; // max |log y_i - (log_coeff + slope log x_i)|
    int n_points = 0;

    double coeff() const { return std::exp(log_coeff); }
};

/// Fit y ~= coeff * x^slope. Throws InsufficientData for < 2 points and
/// NonPositive when any coordinate is not strictly positive.
RateFit powerlaw_fit(std::span<const std::pair<double, double>> points);

inline RateFit powerlaw_fit(const std::vector<std::pair<double, double>>& points) {
    return powerlaw_fit(std::span<const std::pair<double, double>>(points));
}

} // namespace bubblelab

#endif
