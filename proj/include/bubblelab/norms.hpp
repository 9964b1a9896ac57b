#ifndef BUBBLELAB_NORMS_HPP
#define BUBBLELAB_NORMS_HPP

#include "bubblelab/grid.hpp"
#include "bubblelab/parallel.hpp"

namespace bubblelab {

/// sup |f| over grid nodes with r <= radius.
double sup_norm(const RadialField& f, double radius);

/// C^{0,alpha} ball norm of a radial field on B_radius:
///   sup |f| + sup_{r1 != r2} |f(r1)-f(r2)| / |r1-r2|^alpha,
/// both sups over grid nodes with r <= radius. For radial functions the
/// ball seminorm is attained on a common ray, so the radius-pair search is
/// exact up to sampling. alpha = 0 returns the sup norm alone.
double holder_norm(const RadialField& f, double alpha, double radius, Exec exec = Exec::Par);

/// Decay constant L* = sup_{r >= rho} r^{n-2} f(r), using the tail model for
/// r > r_max. Throws NoDecay when the field has no tail model or its power is
/// below n-2 (the supremum is infinite).
double decay_constant(const RadialField& f, double rho, int n);

} // namespace bubblelab

#endif
