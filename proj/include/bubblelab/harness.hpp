#ifndef BUBBLELAB_HARNESS_HPP
#define BUBBLELAB_HARNESS_HPP

#include <optional>

#include "bubblelab/grid.hpp"
#include "bubblelab/params.hpp"
#include "bubblelab/ratefit.hpp"
#include "bubblelab/riesz.hpp"

namespace bubblelab {

/// Per-family-member diagnostics of the blow-up rescaling
///   v(y) = u(eps y) / sup u,   eps = (sup u)^{-2/(n-2)}.
struct BlowupRecord {
    double eps = 0.0;
    double sup_u = 0.0;
    RadialField v;             // rescaled profile, v(0) = 1, 0 < v <= 1
    double deviation_A = 0.0;  // max_{|y| <= 1/eps} |v - Z|
    double argmax_y = 0.0;
    double lambda = 0.0;       // eta / eps
    double hyp_product = 0.0;  // ||q_u - Q||_{C^{0,alpha}(B_r)} (sup u)^{n-2}
    double decay_L = 0.0;      // decay constant of u
    double quot_sup = 0.0;     // sup q_u
    double residual_eq_v = 0.0; // sup |Delta v + q~ v^p - eps^2 V~ v|
};

struct LinearizedDiagnostics {
    RadialField a_field;       // a = Q (v^p - Z^p)/(v - Z), Taylor value on the diagonal
    RadialField w_field;       // w = (v - Z)/A when A > 0, else zero
    RateFit a_decay_fit;       // |a| against y on [5, r_max/2], expect slope -4
    bool a_fit_degenerate = false;
    double w_bound_const = 0.0; // sup (1+|y|)|w|
};

struct HypothesisReport {
    double product = 0.0;
    double holder_q_diff = 0.0;
    double sup_u = 0.0;
    double decay_L = 0.0;
    double quot_sup = 0.0;
    bool in_decay_class = false;
    bool in_quotient_class = false;
};

/// Smooth compact bump of unit height centered at `center` with half-width
/// `width` (zero outside), scaled by `amplitude`.
struct PerturbationSpec {
    double amplitude = 0.0;
    double center = 1.0;
    double width = 0.5;

    double operator()(double y) const;
};

struct BlowupExperimentResult {
    std::vector<BlowupRecord> records;
    std::vector<LinearizedDiagnostics> diagnostics;
    RateFit fit;                       // log A vs log eps, expect slope 2
    bool fit_degenerate = false;       // all deviations at noise level
    std::optional<RateFit> improved_fit; // A eps^{-(2+delta)} vs eps, when delta > 0
    double sigma_inferred = 0.0;
};

/// Rescale a blowing-up solution: eps = (sup u)^{-2/(n-2)}, v(y) = u(eps y)/sup u.
/// The input must attain its maximum at r = 0 (MaxNotAtOrigin otherwise);
/// only eps, sup_u and v are filled in.
BlowupRecord normalize_blowup(const RadialField& u, const ModelParams& params);

/// sup norm of Delta v + q~ v^{(n+2)/(n-2)} - eps^2 V~ v on the common grid.
double rescaled_residual(const RadialField& v, const RadialField& q_tilde,
                         const RadialField& V_tilde, double eps, const ModelParams& params);

/// (A, y_A) with A = max_{|y| <= 1/eps} |v - Z| attained at y_A. Throws
/// DomainTooSmall when the grid of v does not reach 1/eps.
std::pair<double, double> deviation_from_bubble(const RadialField& v, const ModelParams& params,
                                                double eps);

/// The linearization coefficient a = Q (v^p - Z^p)/(v - Z) with the removable
/// singularity replaced by its Taylor value p Q Z^{p-1} where |v - Z| < 1e-8,
/// plus the normalized difference w and the far-field decay fit of |a|.
LinearizedDiagnostics a_coefficient(const RadialField& v, const ModelParams& params);

/// Blow-up hypothesis diagnostics with the quotient supplied by the caller.
HypothesisReport hypothesis_product(const RadialField& q_u, const RadialField& u,
                                    const ModelParams& params);
/// Convenience overload computing q_u = quotient_field(u).
HypothesisReport hypothesis_product(const RadialField& u, const ModelParams& params,
                                    const RingKernelTable* table = nullptr);

/// Relative gap in the integrated identity
///   int(|grad u|^2 + V u^2) = int q_u u^{2n/(n-2)},
/// radial integrals with tail corrections; small only when u solves the
/// equation for this V.
double energy_identity_gap(const RadialField& u, const RadialField& V, const ModelParams& params,
                           Exec exec = Exec::Par);

/// Manufactured blow-up family u_eps = z_eps + eps^{(2-n)/2} amplitude eps^2 phi(./eps):
/// for each eps runs the full pipeline (normalize, deviation, a-coefficient,
/// hypothesis product, rescaled residual against the manufactured potential)
/// and fits log A vs log eps. The potential varies per member, which is what
/// manufactured exact solutions require.
BlowupExperimentResult blowup_rate_experiment(const std::vector<double>& eps_list,
                                              const PerturbationSpec& perturbation,
                                              const ModelParams& params, Exec exec = Exec::Par);

} // namespace bubblelab

#endif
