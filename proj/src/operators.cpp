#include "bubblelab/operators.hpp"

#include <cmath>

namespace bubblelab {

namespace {

// Weights c_i with sum_i c_i f(x_i) = L f(r_eval) exact on the even basis
// {1, r^2, r^4}: Lagrange on the squared abscissae.
void even_weights(const double x[3], double r_eval, int n, double out[3]) {
    const double m1 = 2.0 * n;
    const double m2 = (4.0 * n + 8.0) * r_eval * r_eval;
    double u[3] = {x[0] * x[0], x[1] * x[1], x[2] * x[2]};
    for (int i = 0; i < 3; ++i) {
        const double a = u[(i + 1) % 3], b = u[(i + 2) % 3];
        out[i] = (m2 - (a + b) * m1) / ((u[i] - a) * (u[i] - b));
    }
}

// Weights exact on the odd basis {r, r^3, r^5} for the m = 1 sector operator.
// Write f(x) = x g(x^2); the weights d_i = c_i x_i interpolate the moments on
// the squared abscissae. A node at x = 0 carries no information about an odd
// function, so the stencil there reduces to the two-point {r, r^3} fit.
void odd_weights(const double x[3], double r_eval, int n, double out[3]) {
    const double T1 = (2.0 * n + 4.0) * r_eval;
    const double T2 = (4.0 * n + 16.0) * r_eval * r_eval * r_eval;
    if (x[0] == 0.0) {
        const double r = x[1], b = x[2];
        const double det = r * b * (b * b - r * r);
        out[0] = 0.0;
        out[1] = -T1 * b / det;
        out[2] = T1 * r / det;
        return;
    }
    double u[3] = {x[0] * x[0], x[1] * x[1], x[2] * x[2]};
    for (int i = 0; i < 3; ++i) {
        const double a = u[(i + 1) % 3], b = u[(i + 2) % 3];
        const double d = (T2 - (a + b) * T1) / ((u[i] - a) * (u[i] - b));
        out[i] = d / x[i];
    }
}

} // namespace

std::vector<StencilRow> laplacian_stencil(const RadialGrid& grid, int n, int angular_mode) {
    grid.validate();
    if (grid.size() < 3)
        throw InvalidGrid("laplacian: need at least 3 nodes");
    if (angular_mode != 0 && angular_mode != 1)
        throw InvalidParams("laplacian: angular mode must be 0 or 1");

    const std::size_t N = grid.size() - 1;
    const auto& r = grid.nodes;
    std::vector<StencilRow> rows(N + 1);

    // origin node
    if (angular_mode == 0) {
        // f''(0) = 2 c2 from f = c0 + c2 r^2 + c4 r^4 through nodes 0,1,2
        const double r1 = r[1], r2 = r[2];
        const double denom = r1 * r1 * r2 * r2 * (r2 * r2 - r1 * r1);
        const double w1 = n * 2.0 * r2 * r2 * r2 * r2 / denom;
        const double w2 = -n * 2.0 * r1 * r1 * r1 * r1 / denom;
        rows[0] = {0, {-(w1 + w2), w1, w2}};
    } else {
        rows[0] = {0, {0.0, 0.0, 0.0}};
    }

    for (std::size_t i = 1; i < N; ++i) {
        const double x[3] = {r[i - 1], r[i], r[i + 1]};
        rows[i].j0 = i - 1;
        if (angular_mode == 0)
            even_weights(x, r[i], n, rows[i].w);
        else
            odd_weights(x, r[i], n, rows[i].w);
    }

    // one-sided closure at r_max
    {
        const double x[3] = {r[N - 2], r[N - 1], r[N]};
        rows[N].j0 = N - 2;
        if (angular_mode == 0)
            even_weights(x, r[N], n, rows[N].w);
        else
            odd_weights(x, r[N], n, rows[N].w);
    }
    return rows;
}

RadialField laplacian_radial_mode(const RadialField& f, int n, int angular_mode) {
    const auto rows = laplacian_stencil(f.grid, n, angular_mode);
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (angular_mode == 0) {
            // difference form: the even stencil annihilates constants, so
            // subtracting f_i removes the large cancellation at O(1/h^2)
            const double fi = f.values[i];
            out[i] = row.w[0] * (f.values[row.j0] - fi) + row.w[1] * (f.values[row.j0 + 1] - fi) +
                     row.w[2] * (f.values[row.j0 + 2] - fi);
        } else {
            out[i] = row.w[0] * f.values[row.j0] + row.w[1] * f.values[row.j0 + 1] +
                     row.w[2] * f.values[row.j0 + 2];
        }
    }
    return RadialField(f.grid, std::move(out));
}

RadialField laplacian_radial(const RadialField& f, int n) {
    return laplacian_radial_mode(f, n, 0);
}

RadialField radial_derivative(const RadialField& f) {
    f.validate();
    const std::size_t N = f.size() - 1;
    const auto& r = f.grid.nodes;
    const auto& v = f.values;
    std::vector<double> out(N + 1);
    auto three_point = [&](std::size_t a, std::size_t b, std::size_t c, double at) {
        const double xa = r[a], xb = r[b], xc = r[c];
        const double wa = (2.0 * at - xb - xc) / ((xa - xb) * (xa - xc));
        const double wb = (2.0 * at - xa - xc) / ((xb - xa) * (xb - xc));
        const double wc = (2.0 * at - xa - xb) / ((xc - xa) * (xc - xb));
        return wa * v[a] + wb * v[b] + wc * v[c];
    };
    out[0] = 0.0; // radial regularity: even profile, f'(0) = 0
    for (std::size_t i = 1; i < N; ++i)
        out[i] = three_point(i - 1, i, i + 1, r[i]);
    out[N] = three_point(N - 2, N - 1, N, r[N]);
    return RadialField(f.grid, std::move(out));
}

} // namespace bubblelab
