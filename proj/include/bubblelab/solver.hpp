#ifndef BUBBLELAB_SOLVER_HPP
#define BUBBLELAB_SOLVER_HPP

#include "bubblelab/grid.hpp"
#include "bubblelab/params.hpp"
#include "bubblelab/riesz.hpp"

namespace bubblelab {

enum class ShootOutcome { Decayed, HitZero, BlewUp };

struct ShootResult {
    RadialField profile;
    double max_radius_reached = 0.0;
    ShootOutcome outcome = ShootOutcome::Decayed;
};

/// Integrate the limit equation  v'' + (n-1)/r v' + Q v^{(n+2)/(n-2)} = 0
/// outward from v(0) = v0, v'(0) = 0 (series start near the origin, adaptive
/// embedded RK45 elsewhere), sampling the profile at the grid nodes. Stops at
/// r_max, at v <= 0 (HitZero) or on overflow (BlewUp).
ShootResult shoot_limit_profile(int n, double Q, double v0, const RadialGrid& grid);

/// Manufactured potential: V = (Delta u + q_u u^{(n+2)/(n-2)}) / u, so that u
/// solves the critical equation with this V exactly (at the discrete level).
RadialField manufacture_potential(const RadialField& u, const ModelParams& params,
                                  const RingKernelTable* table = nullptr, Exec exec = Exec::Par);

enum class SolveStatus { Converged, MaxIterations, NonPositivityDetected, LinearSolveFailure };

struct SolveReport {
    RadialField solution;
    int iterations = 0;
    double final_update_norm = 0.0;
    bool converged = false;
    SolveStatus status = SolveStatus::MaxIterations;
};

/// Best-effort damped Picard iteration for the full nonlocal equation: given
/// u_k, solve the linear two-point problem
///   Delta u~ - V u~ = -q_{u_k} u_k^{(n+2)/(n-2)}
/// with the decay (Robin) condition u~'(r_max) = (2-n)/r_max u~(r_max), then
/// u_{k+1} = (1-tau) u_k + tau u~. Convergence is not guaranteed at the
/// critical exponent; the report states truthfully what happened.
SolveReport solve_nonlocal(const RadialField& V, const ModelParams& params,
                           const RadialField& guess, double tol, int max_iter,
                           const RingKernelTable* table = nullptr, double damping = 0.5,
                           Exec exec = Exec::Par);

} // namespace bubblelab

#endif
