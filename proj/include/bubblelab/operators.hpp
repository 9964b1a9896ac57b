#ifndef BUBBLELAB_OPERATORS_HPP
#define BUBBLELAB_OPERATORS_HPP

#include "bubblelab/grid.hpp"

namespace bubblelab {

/// Three-point stencil weights for one output node.
struct StencilRow {
    std::size_t j0; // leftmost node index touched
    double w[3];
};

/// Second-order discrete radial Laplacian in the angular sector m:
///   m = 0:  L f = f'' + (n-1)/r f'
///   m = 1:  L f = f'' + (n-1)/r f' - (n-1)/r^2 f
/// Radial profiles are even (m = 0) or odd (m = 1) functions of r, so the
/// stencils are built to be exact on {1, r^2, r^4} resp. {r, r^3, r^5};
/// that keeps the second-order constant small near the axis. At r = 0 the
/// m = 0 operator uses the regularity rule  L f(0) = n f''(0)  with f''(0)
/// from a parabola in r^2 through the first three nodes; the m = 1 operator
/// vanishes at r = 0. The last node uses a one-sided stencil.
std::vector<StencilRow> laplacian_stencil(const RadialGrid& grid, int n, int angular_mode);

RadialField laplacian_radial(const RadialField& f, int n);
RadialField laplacian_radial_mode(const RadialField& f, int n, int angular_mode);

/// Second-order first derivative (central interior, one-sided ends).
RadialField radial_derivative(const RadialField& f);

} // namespace bubblelab

#endif
