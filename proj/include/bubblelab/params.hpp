#ifndef BUBBLELAB_PARAMS_HPP
#define BUBBLELAB_PARAMS_HPP

#include "bubblelab/errors.hpp"

namespace bubblelab {

/// Model parameters for the critical equation
///   Delta u + (|x|^{-ell} * u^{2n/(n-2)}) u^{(n+2)/(n-2)} - V u = 0
/// together with the class constants used by the diagnostics.
struct ModelParams {
    int n = 6;             // space dimension, 3 <= n <= 10
    double ell = 1.0;      // kernel exponent, 0 < ell < n
    double Q = 24.0;       // limit quotient
    double alpha = 0.5;    // Hoelder exponent in (0,1)
    double r_ball = 1.0;   // hypothesis ball radius
    double rho = 0.5;      // decay onset radius, rho < r_ball
    double L_decay = 2.0;  // decay-class constant
    double K_quot = 30.0;  // quotient-class bound
    double eta = 0.5;      // rescaled-ball shrink factor
    double sigma = 0.0;    // physical ball radius; <= 0 means "infer"
    double delta = 0.0;    // improved-decay probe exponent, >= 0

    double p_crit() const { return double(n + 2) / double(n - 2); }
    double p_conv() const { return 2.0 * n / double(n - 2); }

    void validate() const {
        if (n < 3 || n > 10)
            throw InvalidParams("ModelParams: n must be in [3,10]");
        if (!(ell > 0.0) || !(ell < double(n)))
            throw InvalidParams("ModelParams: ell must be in (0,n)");
        if (!(Q > 0.0))
            throw InvalidParams("ModelParams: Q must be positive");
        if (!(alpha > 0.0) || !(alpha < 1.0))
            throw InvalidParams("ModelParams: alpha must be in (0,1)");
        if (!(r_ball > 0.0) || !(rho > 0.0) || !(eta > 0.0))
            throw InvalidParams("ModelParams: radii must be positive");
        if (!(rho < r_ball))
            throw InvalidParams("ModelParams: rho must be smaller than r_ball");
        if (delta < 0.0)
            throw InvalidParams("ModelParams: delta must be >= 0");
    }
};

} // namespace bubblelab

#endif
