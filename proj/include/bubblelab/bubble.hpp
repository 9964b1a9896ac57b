#ifndef BUBBLELAB_BUBBLE_HPP
#define BUBBLELAB_BUBBLE_HPP

#include "bubblelab/grid.hpp"
#include "bubblelab/params.hpp"
#include "bubblelab/ratefit.hpp"

namespace bubblelab {

/// The bubble family
///   z_eps(r) = eps^{(2-n)/2} Z(r/eps),
///   Z(y)     = (1 + Q |y|^2 / (n(n-2)))^{(2-n)/2},
/// the exact radial solution of  Delta Z + Q Z^{(n+2)/(n-2)} = 0, Z(0) = 1.
struct BubbleSpec {
    int n = 6;
    double Q = 24.0;
    double eps = 1.0;

    void validate() const {
        if (n < 3 || n > 10)
            throw InvalidParams("BubbleSpec: n must be in [3,10]");
        if (!(Q > 0.0) || !(eps > 0.0))
            throw InvalidParams("BubbleSpec: Q and eps must be positive");
    }
};

double bubble_value(const BubbleSpec& spec, double r);
double bubble_derivative(const BubbleSpec& spec, double r);

/// Samples of z_eps with the exact power tail (beta = n-2).
RadialField bubble_profile(const BubbleSpec& spec, const RadialGrid& grid);

/// sup over the grid of |Delta Z + Q Z^{(n+2)/(n-2)}|; analytically zero, so
/// this is pure discretization error. Requires eps = 1.
double bubble_residual(const BubbleSpec& spec, const RadialGrid& grid);

/// sup of |Delta_m w + (n+2)/(n-2) Q Z^{4/(n-2)} w| in the angular sector m,
/// the linearization of the limit equation at Z. Requires eps = 1.
double linearized_residual(const RadialField& w, const BubbleSpec& spec, int angular_mode);

/// Scaling-mode kernel element r Z'(r) + (n-2)/2 Z(r) (m = 0 sector).
RadialField scaling_mode(const BubbleSpec& spec, const RadialGrid& grid);
/// Translation-mode kernel element Z'(r) (m = 1 sector).
RadialField translation_mode(const BubbleSpec& spec, const RadialGrid& grid);

struct ScalingCheckResult {
    RateFit fit;                  // fitted power of sup q_{z_eps} vs eps (expect -ell)
    double max_rel_mismatch = 0.0; // pointwise check of q_{z_eps} = eps^{-ell} q_Z(./eps)
};

/// Verifies the rescaling identity of the quotient over an eps family. Each
/// member is convolved on its own grid (resolutions deliberately not exact
/// rescalings of each other, so the comparison is a genuine quadrature test).
ScalingCheckResult quotient_scaling_check(const std::vector<double>& eps_list,
                                          const ModelParams& params, double y_max = 40.0,
                                          int core_points = 600);

} // namespace bubblelab

#endif
