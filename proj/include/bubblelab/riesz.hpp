#ifndef BUBBLELAB_RIESZ_HPP
#define BUBBLELAB_RIESZ_HPP

#include <filesystem>
#include <string>

#include "bubblelab/grid.hpp"
#include "bubblelab/parallel.hpp"
#include "bubblelab/params.hpp"

namespace bubblelab {

/// Surface measure |S^{n-1}| of the unit sphere in R^n.
double sphere_area(int n);

/// Ring kernel: the Riesz kernel integrated over a sphere of radius s against
/// a point at radius r,
///   W(r,s) = |S^{n-2}| \int_0^pi (r^2 + s^2 - 2 r s cos t)^{-ell/2} sin^{n-2} t dt,
/// so that for radial f:  (|x|^{-ell} * f)(r) = \int_0^inf W(r,s) f(s) s^{n-1} ds.
/// n = 3 uses the closed form; other dimensions use graded angular quadrature.
/// Throws SingularPoint for r = s with ell >= n-1 (the ring integral diverges)
/// and InvalidParams for ell outside (0,n) or (r,s) = (0,0).
double ring_kernel(double r, double s, int n, double ell);

namespace detail {
/// Angular-quadrature evaluation path regardless of dimension (test oracle
/// for the n = 3 closed form).
double ring_kernel_quadrature(double r, double s, int n, double ell);
} // namespace detail

/// Precomputed ring-kernel data for one (grid, n, ell):
///  - `values`:  W(r_i, s_j) at node pairs (diagnostics; diagonal entries are
///    0 with diagonal_finite = false when ell >= n-1),
///  - `weights`: quadrature matrix with q(r_i) = sum_j weights(i,j) f(s_j),
///    the exact integral of W(r_i, s) s^{n-1} against the piecewise-linear
///    interpolant of f, with the kink/singularity at s = r_i integrated by a
///    graded rule.
struct RingKernelTable {
    RadialGrid grid;
    int n = 0;
    double ell = 0.0;
    bool diagonal_finite = true;
    std::vector<double> values;
    std::vector<double> weights;
    std::vector<double> mass_weights; // sum_j mass_weights[j] f_j = int f s^{n-1} ds

    double value(std::size_t i, std::size_t j) const { return values[i * grid.size() + j]; }
    double weight(std::size_t i, std::size_t j) const { return weights[i * grid.size() + j]; }
};

RingKernelTable build_ring_kernel_table(const RadialGrid& grid, int n, double ell,
                                        Exec exec = Exec::Par);

/// Binary cache: header (magic, version, n, ell, N), then the two matrices
/// row-major as 64-bit floats, then grid nodes. Keyed externally by file name.
void save_ring_kernel_table(const RingKernelTable& table, const std::filesystem::path& file);
RingKernelTable load_ring_kernel_table(const std::filesystem::path& file);
std::string ring_kernel_cache_name(const RadialGrid& grid, int n, double ell);

/// Riesz potential of a radial density: q(r) = \int W(r,s) f(s) s^{n-1} ds
/// plus a first-order analytic tail correction from f's tail model. The
/// output carries the far-field law q(r) ~ (\int f) r^{-ell} when f has
/// finite mass. Throws DivergentTail when f's tail power is <= n - ell and
/// NonPositive when f has negative samples.
RadialField riesz_convolve(const RadialField& f, const RingKernelTable& table,
                           Exec exec = Exec::Par);
RadialField riesz_convolve(const RadialField& f, int n, double ell, Exec exec = Exec::Par);

/// Brute-force tensor-grid oracle for n = 3: direct quadrature of
/// \int |y|^{-ell} f(|x-y|) dy over [-R,R]^3 with R = r_max(f), M cells per
/// dimension (M must be even; M > 128 throws TooLarge), the kernel cells
/// touching y = 0 refined recursively with an analytic corner closure, and
/// f's tail added as a monopole term. Evaluated at `radii` (default: 13
/// radii spanning [0, R/2]).
RadialField riesz_oracle(const RadialField& f, int n, double ell, int M,
                         std::vector<double> radii = {}, Exec exec = Exec::Par);

struct QuotientResult {
    RadialField q;      // q_u = |x|^{-ell} * u^{2n/(n-2)}
    double sup = 0.0;   // sup over nodes
    bool in_class = false; // sup <= K_quot
};

/// The quotient of u: q_u = |x|^{-ell} * u^{2n/(n-2)}, with its sup and the
/// Q_K membership predicate. u must be strictly positive.
QuotientResult quotient_field(const RadialField& u, const ModelParams& params,
                              const RingKernelTable* table = nullptr, Exec exec = Exec::Par);

} // namespace bubblelab

#endif
