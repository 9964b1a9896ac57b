#ifndef BUBBLELAB_GRID_HPP
#define BUBBLELAB_GRID_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "bubblelab/errors.hpp"

namespace bubblelab {

enum class GridScheme { Uniform, Geometric, Custom };

/// Strictly increasing radii r_0 = 0 < r_1 < ... < r_N = r_max.
struct RadialGrid {
    std::vector<double> nodes;
    GridScheme scheme = GridScheme::Custom;

    std::size_t size() const { return nodes.size(); } // N+1
    double r_max() const { return nodes.back(); }

    // index of the panel [r_j, r_{j+1}] containing r; r must be in [0, r_max]
    std::size_t panel_of(double r) const;

    bool same_nodes(const RadialGrid& other) const;
    std::uint64_t hash() const;

    void validate() const;
};

/// Uniform: constant spacing. Geometric: spacing grows by a constant factor,
/// with a fixed 100x stretch between the first and last panel; both schemes
/// start at 0 and end exactly at r_max.
RadialGrid make_grid(double r_max, int N, GridScheme scheme);

/// Uniform spacing h_core on [0, r_core], then geometrically growing panels
/// until r_max is passed (last node clamped to r_max).
RadialGrid make_graded_grid(double r_core, double h_core, double r_max, double growth = 1.015);

/// Scale every node by a positive factor; the scheme tag is preserved.
RadialGrid scale_grid(const RadialGrid& g, double factor);

/// Power-law far-field model f(r) ~= coeff * r^{-power} for r > r_max.
struct TailModel {
    double coeff = 0.0;
    double power = 1.0;
};

/// Samples of a radial function on a grid, with an optional analytic tail.
struct RadialField {
    RadialGrid grid;
    std::vector<double> values;
    std::optional<TailModel> tail;

    RadialField() = default;
    RadialField(RadialGrid g, std::vector<double> v, std::optional<TailModel> t = std::nullopt);

    std::size_t size() const { return values.size(); }

    /// Linear interpolation on [0, r_max]; tail model (or zero) beyond.
    double operator()(double r) const;

    double max_value() const;
    double min_value() const;
    double sup_abs() const;
    std::size_t argmax() const;

    void validate() const;
};

/// Sample an analytic radial function on a grid.
template <class F>
RadialField sample_field(const RadialGrid& grid, F&& f, std::optional<TailModel> tail = std::nullopt) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        v[i] = f(grid.nodes[i]);
    return RadialField(grid, std::move(v), tail);
}

} // namespace bubblelab

#endif
