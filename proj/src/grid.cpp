#include "bubblelab/grid.hpp"

#include <algorithm>
#include <cmath>

namespace bubblelab {

void RadialGrid::validate() const {
    if (nodes.size() < 3)
        throw InvalidGrid("grid needs at least 3 nodes (N >= 2)");
    if (nodes.front() != 0.0)
        throw InvalidGrid("grid must start at r = 0");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw InvalidGrid("grid nodes must be strictly increasing");
}

std::size_t RadialGrid::panel_of(double r) const {
    if (r <= 0.0)
        return 0;
    if (scheme == GridScheme::Uniform) {
        const double h = nodes.back() / double(nodes.size() - 1);
        auto j = static_cast<std::size_t>(r / h);
        if (j >= nodes.size() - 1)
            j = nodes.size() - 2;
        // guard against rounding at panel edges
        while (j > 0 && r < nodes[j])
            --j;
        while (j + 2 < nodes.size() && r >= nodes[j + 1])
            ++j;
        return j;
    }
    auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
    std::size_t j = static_cast<std::size_t>(it - nodes.begin());
    if (j == 0)
        return 0;
    if (j >= nodes.size())
        return nodes.size() - 2;
    return j - 1;
}

bool RadialGrid::same_nodes(const RadialGrid& other) const {
    return nodes == other.nodes;
}

std::uint64_t RadialGrid::hash() const {
    // FNV-1a over the raw node bytes plus the scheme tag
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const unsigned char* p, std::size_t len) {
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    mix(reinterpret_cast<const unsigned char*>(nodes.data()), nodes.size() * sizeof(double));
    auto tag = static_cast<std::uint64_t>(scheme);
    mix(reinterpret_cast<const unsigned char*>(&tag), sizeof(tag));
    return h;
}

RadialGrid make_grid(double r_max, int N, GridScheme scheme) {
    if (!(r_max > 0.0))
        throw InvalidGrid("make_grid: r_max must be positive");
    if (N < 2)
        throw InvalidGrid("make_grid: N must be at least 2");
    RadialGrid g;
    g.scheme = scheme;
    g.nodes.resize(static_cast<std::size_t>(N) + 1);
    switch (scheme) {
    case GridScheme::Uniform: {
        const double h = r_max / N;
        for (int i = 0; i <= N; ++i)
            g.nodes[i] = i * h;
        g.nodes[N] = r_max;
        break;
    }
    case GridScheme::Geometric: {
        // spacing ratio e^{tau/N}, total stretch e^{tau} = 100
        const double tau = std::log(100.0);
        const double denom = std::expm1(tau);
        for (int i = 0; i <= N; ++i)
            g.nodes[i] = r_max * std::expm1(tau * double(i) / N) / denom;
        g.nodes[0] = 0.0;
        g.nodes[N] = r_max;
        break;
    }
    case GridScheme::Custom:
        throw InvalidGrid("make_grid: custom grids are built from explicit nodes");
    }
    g.validate();
    return g;
}

RadialGrid make_graded_grid(double r_core, double h_core, double r_max, double growth) {
    if (!(r_core > 0.0) || !(h_core > 0.0) || !(r_max > r_core) || !(growth > 1.0))
        throw InvalidGrid("make_graded_grid: need 0 < h_core, 0 < r_core < r_max, growth > 1");
    RadialGrid g;
    g.scheme = GridScheme::Custom;
    const int Nc = std::max(2, int(std::llround(r_core / h_core)));
    for (int i = 0; i <= Nc; ++i)
        g.nodes.push_back(r_core * double(i) / Nc);
    double h = (r_core / Nc) * growth;
    double r = r_core;
    while (r < r_max) {
        r = std::min(r + h, r_max);
        // avoid a final sliver panel
        if (r_max - r < 0.25 * h)
            r = r_max;
        g.nodes.push_back(r);
        h *= growth;
    }
    g.validate();
    return g;
}

RadialGrid scale_grid(const RadialGrid& g, double factor) {
    if (!(factor > 0.0))
        throw InvalidGrid("scale_grid: factor must be positive");
    RadialGrid out = g;
    for (auto& r : out.nodes)
        r *= factor;
    out.nodes.front() = 0.0;
    return out;
}

RadialField::RadialField(RadialGrid g, std::vector<double> v, std::optional<TailModel> t)
    : grid(std::move(g)), values(std::move(v)), tail(t) {
    validate();
}

void RadialField::validate() const {
    grid.validate();
    if (values.size() != grid.size())
        throw InvalidGrid("RadialField: values length must match grid");
    if (tail && !(tail->power > 0.0))
        throw InvalidParams("RadialField: tail power must be positive");
}

double RadialField::operator()(double r) const {
    if (r <= 0.0)
        return values.front();
    if (r > grid.r_max()) {
        if (tail)
            return tail->coeff * std::pow(r, -tail->power);
        return 0.0;
    }
    const std::size_t j = grid.panel_of(r);
    const double rl = grid.nodes[j], rr = grid.nodes[j + 1];
    const double t = (r - rl) / (rr - rl);
    return (1.0 - t) * values[j] + t * values[j + 1];
}

double RadialField::max_value() const {
    return *std::max_element(values.begin(), values.end());
}

double RadialField::min_value() const {
    return *std::min_element(values.begin(), values.end());
}

double RadialField::sup_abs() const {
    double m = 0.0;
    for (double v : values)
        m = std::max(m, std::fabs(v));
    return m;
}

std::size_t RadialField::argmax() const {
    return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

} // namespace bubblelab
