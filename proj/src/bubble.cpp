#include "bubblelab/bubble.hpp"

#include <cmath>

#include "bubblelab/operators.hpp"
#include "bubblelab/riesz.hpp"

namespace bubblelab {

namespace {

double shape_k(const BubbleSpec& s) { return s.Q / (s.n * (s.n - 2.0)); }

} // namespace

double bubble_value(const BubbleSpec& spec, double r) {
    spec.validate();
    const double y = r / spec.eps;
    const double e = (2.0 - spec.n) / 2.0;
    return std::pow(spec.eps, e) * std::pow(1.0 + shape_k(spec) * y * y, e);
}

double bubble_derivative(const BubbleSpec& spec, double r) {
    spec.validate();
    const double k = shape_k(spec);
    const double y = r / spec.eps;
    const double e = (2.0 - spec.n) / 2.0;
    // d/dr [eps^e (1 + k y^2)^e] = eps^{e-1} e (1+k y^2)^{e-1} 2 k y
    return std::pow(spec.eps, e - 1.0) * e * std::pow(1.0 + k * y * y, e - 1.0) * 2.0 * k * y;
}

RadialField bubble_profile(const BubbleSpec& spec, const RadialGrid& grid) {
    spec.validate();
    const double e = (2.0 - spec.n) / 2.0;
    const double A = std::pow(spec.eps, e) * std::pow(shape_k(spec), e) *
                     std::pow(spec.eps, spec.n - 2.0);
    return sample_field(
        grid, [&](double r) { return bubble_value(spec, r); },
        TailModel{A, double(spec.n - 2)});
}

double bubble_residual(const BubbleSpec& spec, const RadialGrid& grid) {
    spec.validate();
    if (spec.eps != 1.0)
        throw InvalidParams("bubble_residual: residual is checked at eps = 1");
    const RadialField Z = bubble_profile(spec, grid);
    const RadialField lap = laplacian_radial(Z, spec.n);
    const double p = (spec.n + 2.0) / (spec.n - 2.0);
    double sup = 0.0;
    for (std::size_t i = 0; i < Z.size(); ++i)
        sup = std::max(sup, std::fabs(lap.values[i] + spec.Q * std::pow(Z.values[i], p)));
    return sup;
}

double linearized_residual(const RadialField& w, const BubbleSpec& spec, int angular_mode) {
    spec.validate();
    if (spec.eps != 1.0)
        throw InvalidParams("linearized_residual: checked at eps = 1");
    if (angular_mode != 0 && angular_mode != 1)
        throw InvalidParams("linearized_residual: angular mode must be 0 or 1");
    const RadialField Z = bubble_profile(spec, w.grid);
    const RadialField lap = laplacian_radial_mode(w, spec.n, angular_mode);
    const double p = (spec.n + 2.0) / (spec.n - 2.0);
    double sup = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double pot = p * spec.Q * std::pow(Z.values[i], p - 1.0);
        sup = std::max(sup, std::fabs(lap.values[i] + pot * w.values[i]));
    }
    return sup;
}

RadialField scaling_mode(const BubbleSpec& spec, const RadialGrid& grid) {
    spec.validate();
    const double c = (spec.n - 2.0) / 2.0;
    return sample_field(grid, [&](double r) {
        return r * bubble_derivative(spec, r) + c * bubble_value(spec, r);
    });
}

RadialField translation_mode(const BubbleSpec& spec, const RadialGrid& grid) {
    spec.validate();
    return sample_field(grid, [&](double r) { return bubble_derivative(spec, r); });
}

ScalingCheckResult quotient_scaling_check(const std::vector<double>& eps_list,
                                          const ModelParams& params, double y_max,
                                          int core_points) {
    params.validate();
    for (double e : eps_list)
        if (!(e > 0.0))
            throw InvalidParams("quotient_scaling_check: eps must be positive");

    // reference quotient of Z on a y-grid
    const BubbleSpec unit{params.n, params.Q, 1.0};
    const RadialGrid y_grid = make_graded_grid(4.0, 4.0 / core_points, y_max);
    const RadialField qZ = quotient_field(bubble_profile(unit, y_grid), params).q;

    ScalingCheckResult out;
    std::vector<std::pair<double, double>> sup_points;
    for (std::size_t m = 0; m < eps_list.size(); ++m) {
        const double eps = eps_list[m];
        // deliberately different resolution per member
        const int pts = core_points + 41 * int(m + 1);
        const RadialGrid g = make_graded_grid(4.0 * eps, 4.0 * eps / pts, y_max * eps);
        const BubbleSpec spec{params.n, params.Q, eps};
        const RadialField q = quotient_field(bubble_profile(spec, g), params).q;
        sup_points.emplace_back(eps, q.max_value());

        const double scale = std::pow(eps, params.ell);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double y = g.nodes[i] / eps;
            if (y > 0.5 * y_max)
                break;
            const double ref = qZ(y);
            out.max_rel_mismatch =
                std::max(out.max_rel_mismatch, std::fabs(scale * q.values[i] - ref) / ref);
        }
    }
    out.fit = powerlaw_fit(sup_points);
    return out;
}

} // namespace bubblelab
