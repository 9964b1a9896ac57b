#include "bubblelab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace bubblelab {

namespace {

std::size_t nodes_within(const RadialField& f, double radius) {
    const double slack = radius * 1e-14 + 1e-300;
    if (radius > f.grid.r_max() * (1.0 + 1e-14))
        throw OutOfRange("norm: radius exceeds r_max of the field");
    std::size_t m = 0;
    while (m < f.size() && f.grid.nodes[m] <= radius + slack)
        ++m;
    if (m < 2)
        throw OutOfRange("norm: fewer than two nodes inside the ball");
    return m;
}

} // namespace

double sup_norm(const RadialField& f, double radius) {
    const std::size_t m = nodes_within(f, radius);
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        s = std::max(s, std::fabs(f.values[i]));
    return s;
}

double holder_norm(const RadialField& f, double alpha, double radius, Exec exec) {
    if (alpha < 0.0 || alpha >= 1.0)
        throw InvalidParams("holder_norm: alpha must be in [0,1)");
    const std::size_t m = nodes_within(f, radius);
    const double sup = sup_norm(f, radius);
    if (alpha == 0.0)
        return sup;

    const auto& r = f.grid.nodes;
    const auto& v = f.values;
    std::vector<double> row_max(m, 0.0);
    detail::parallel_index_loop(exec, std::ptrdiff_t(m), [&](std::size_t i) {
        double best = 0.0;
        for (std::size_t j = i + 1; j < m; ++j) {
            const double num = std::fabs(v[i] - v[j]);
            if (num == 0.0)
                continue;
            best = std::max(best, num / std::pow(r[j] - r[i], alpha));
        }
        row_max[i] = best;
    });
    double semi = 0.0;
    for (double b : row_max)
        semi = std::max(semi, b);
    return sup + semi;
}

double decay_constant(const RadialField& f, double rho, int n) {
    f.validate();
    if (!(rho > 0.0))
        throw InvalidParams("decay_constant: rho must be positive");
    if (!f.tail)
        throw NoDecay("decay_constant: field carries no tail model");
    const double beta = f.tail->power;
    if (beta < double(n - 2) - 1e-12)
        throw NoDecay("decay_constant: tail power below n-2, supremum infinite");

    double best = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double r = f.grid.nodes[i];
        if (r >= rho)
            best = std::max(best, std::pow(r, n - 2) * f.values[i]);
    }
    // tail part: r^{n-2} coeff r^{-beta} is non-increasing for beta >= n-2
    const double r0 = std::max(rho, f.grid.r_max());
    best = std::max(best, f.tail->coeff * std::pow(r0, double(n - 2) - beta));
    return best;
}

} // namespace bubblelab
