#include "bubblelab/solver.hpp"

#include <cmath>
#include <limits>

#include <lapacke.h>

#include "bubblelab/operators.hpp"

namespace bubblelab {

namespace {

struct OdeState {
    double v, w;
};

// Cash-Karp embedded 4(5) pair
OdeState rk_step(int n, double Q, double p, double r, const OdeState& y, double h, double& err) {
    auto rhs = [&](double rr, const OdeState& s) -> OdeState {
        const double f = (s.v > 0.0) ? Q * std::pow(s.v, p) : 0.0;
        return {s.w, -(double(n) - 1.0) / rr * s.w - f};
    };
    static constexpr double a2 = 0.2, a3 = 0.3, a4 = 0.6, a5 = 1.0, a6 = 0.875;
    static constexpr double b21 = 0.2;
    static constexpr double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
    static constexpr double b41 = 0.3, b42 = -0.9, b43 = 1.2;
    static constexpr double b51 = -11.0 / 54.0, b52 = 2.5, b53 = -70.0 / 27.0, b54 = 35.0 / 27.0;
    static constexpr double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0, b63 = 575.0 / 13824.0,
                            b64 = 44275.0 / 110592.0, b65 = 253.0 / 4096.0;
    static constexpr double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0,
                            c6 = 512.0 / 1771.0;
    static constexpr double d1 = c1 - 2825.0 / 27648.0, d3 = c3 - 18575.0 / 48384.0,
                            d4 = c4 - 13525.0 / 55296.0, d5 = -277.0 / 14336.0,
                            d6 = c6 - 0.25;

    const OdeState k1 = rhs(r, y);
    const OdeState k2 = rhs(r + a2 * h, {y.v + h * b21 * k1.v, y.w + h * b21 * k1.w});
    const OdeState k3 = rhs(r + a3 * h, {y.v + h * (b31 * k1.v + b32 * k2.v),
                                         y.w + h * (b31 * k1.w + b32 * k2.w)});
    const OdeState k4 = rhs(r + a4 * h, {y.v + h * (b41 * k1.v + b42 * k2.v + b43 * k3.v),
                                         y.w + h * (b41 * k1.w + b42 * k2.w + b43 * k3.w)});
    const OdeState k5 =
        rhs(r + a5 * h, {y.v + h * (b51 * k1.v + b52 * k2.v + b53 * k3.v + b54 * k4.v),
                         y.w + h * (b51 * k1.w + b52 * k2.w + b53 * k3.w + b54 * k4.w)});
    const OdeState k6 = rhs(
        r + a6 * h, {y.v + h * (b61 * k1.v + b62 * k2.v + b63 * k3.v + b64 * k4.v + b65 * k5.v),
                     y.w + h * (b61 * k1.w + b62 * k2.w + b63 * k3.w + b64 * k4.w + b65 * k5.w)});

    OdeState out{y.v + h * (c1 * k1.v + c3 * k3.v + c4 * k4.v + c6 * k6.v),
                 y.w + h * (c1 * k1.w + c3 * k3.w + c4 * k4.w + c6 * k6.w)};
    const double ev = h * (d1 * k1.v + d3 * k3.v + d4 * k4.v + d5 * k5.v + d6 * k6.v);
    const double ew = h * (d1 * k1.w + d3 * k3.w + d4 * k4.w + d5 * k5.w + d6 * k6.w);
    err = std::max(std::fabs(ev), std::fabs(ew));
    return out;
}

} // namespace

ShootResult shoot_limit_profile(int n, double Q, double v0, const RadialGrid& grid) {
    grid.validate();
    if (n < 3 || n > 10)
        throw InvalidParams("shoot: n must be in [3,10]");
    if (!(Q > 0.0))
        throw InvalidParams("shoot: Q must be positive");
    if (!(v0 > 0.0))
        throw InvalidInitial("shoot: v(0) must be positive");

    const double p = (n + 2.0) / (n - 2.0);
    const double a = Q * std::pow(v0, p) / (2.0 * n);
    const double b = p * Q * Q * std::pow(v0, 2.0 * p - 1.0) / (8.0 * n * (n + 2.0));
    auto series_v = [&](double r) { return v0 - a * r * r + b * r * r * r * r; };
    auto series_w = [&](double r) { return -2.0 * a * r + 4.0 * b * r * r * r; };

    const std::size_t N = grid.size() - 1;
    std::vector<double> vals(N + 1, 0.0);
    vals[0] = v0;

    const double r_series = std::min(grid.nodes[1], 1e-2 / std::sqrt(std::max(a, 1e-12)));
    double r = r_series;
    OdeState y{series_v(r), series_w(r)};
    ShootResult res;
    res.outcome = ShootOutcome::Decayed;

    const double tol = 1e-11;
    double h = r_series;
    std::size_t i = 1;
    // fill nodes covered by the series
    while (i <= N && grid.nodes[i] <= r_series) {
        vals[i] = series_v(grid.nodes[i]);
        ++i;
    }
    bool terminated = false;
    while (i <= N && !terminated) {
        const double target = grid.nodes[i];
        while (r < target) {
            double step = std::min(h, target - r);
            double err;
            OdeState cand = rk_step(n, Q, p, r, y, step, err);
            const double scale = tol * std::max({1.0, std::fabs(y.v), std::fabs(y.w)});
            if (err > scale && step > 1e-14 * target) {
                h = std::max(0.2 * step, 0.9 * step * std::pow(scale / err, 0.25));
                continue;
            }
            r += step;
            y = cand;
            if (err > 0.0)
                h = std::min(0.9 * step * std::pow(scale / err, 0.2), 5.0 * step);
            else
                h = 5.0 * step;
            if (y.v <= 0.0) {
                res.outcome = ShootOutcome::HitZero;
                terminated = true;
                break;
            }
            if (std::fabs(y.v) > 1e10 || std::fabs(y.w) > 1e12) {
                res.outcome = ShootOutcome::BlewUp;
                terminated = true;
                break;
            }
        }
        if (!terminated) {
            vals[i] = y.v;
            ++i;
        }
    }
    res.max_radius_reached = terminated ? r : grid.r_max();

    std::optional<TailModel> tail;
    if (res.outcome == ShootOutcome::Decayed && vals[N] > 0.0)
        tail = TailModel{vals[N] * std::pow(grid.r_max(), double(n - 2)), double(n - 2)};
    res.profile = RadialField(grid, std::move(vals), tail);
    return res;
}

RadialField manufacture_potential(const RadialField& u, const ModelParams& params,
                                  const RingKernelTable* table, Exec exec) {
    u.validate();
    for (double v : u.values)
        if (!(v > 0.0))
            throw NonPositive("manufacture_potential: u must be strictly positive");
    const auto quot = quotient_field(u, params, table, exec);
    const RadialField lap = laplacian_radial(u, params.n);
    const double p = params.p_crit();
    std::vector<double> V(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        V[i] = (lap.values[i] + quot.q.values[i] * std::pow(u.values[i], p)) / u.values[i];

    // far-field estimate from the last two samples, when they admit one
    std::optional<TailModel> tail;
    const std::size_t N = u.size() - 1;
    const double vN = V[N], vP = V[N - 1];
    if (vN != 0.0 && vP != 0.0 && std::signbit(vN) == std::signbit(vP) &&
        std::fabs(vN) < std::fabs(vP)) {
        const double beta = std::log(std::fabs(vP) / std::fabs(vN)) /
                            std::log(u.grid.nodes[N] / u.grid.nodes[N - 1]);
        if (beta > 0.0)
            tail = TailModel{vN * std::pow(u.grid.nodes[N], beta), beta};
    }
    return RadialField(u.grid, std::move(V), tail);
}

SolveReport solve_nonlocal(const RadialField& V, const ModelParams& params,
                           const RadialField& guess, double tol, int max_iter,
                           const RingKernelTable* table, double damping, Exec exec) {
    V.validate();
    guess.validate();
    params.validate();
    if (!V.grid.same_nodes(guess.grid))
        throw GridMismatch("solve_nonlocal: V and guess on different grids");
    for (double v : V.values)
        if (!std::isfinite(v))
            throw InvalidParams("solve_nonlocal: V must be bounded on the grid");
    if (!(tol > 0.0) || !(damping > 0.0) || damping > 1.0)
        throw InvalidParams("solve_nonlocal: need tol > 0 and damping in (0,1]");

    SolveReport rep;
    rep.solution = guess;
    rep.final_update_norm = std::numeric_limits<double>::infinity();
    if (guess.min_value() <= 0.0) {
        rep.status = SolveStatus::NonPositivityDetected;
        return rep;
    }

    const auto& grid = V.grid;
    const std::size_t S = grid.size();
    const std::size_t N = S - 1;
    const int n = params.n;
    const double p = params.p_crit();

    RingKernelTable local_table;
    if (!table) {
        local_table = build_ring_kernel_table(grid, n, params.ell, exec);
        table = &local_table;
    }

    const auto lap_rows = laplacian_stencil(grid, n, 0);

    // banded template (KL = 1, KU = 2) of Delta - V with the Robin closure;
    // the local-derivative diagonal is added per iteration
    const lapack_int kl = 1, ku = 2, ldab = 2 * kl + ku + 1;
    std::vector<double> ab_template(std::size_t(ldab) * S, 0.0);
    const auto banded_index = [ldab](std::size_t i, std::size_t j) {
        // column-major banded: AB(kl + ku + i - j, j)
        return std::size_t(kl + ku) + i - j + j * std::size_t(ldab);
    };
    auto at = [&](std::size_t i, std::size_t j) -> double& {
        return ab_template[banded_index(i, j)];
    };
    for (std::size_t i = 0; i <= N; ++i) {
        if (i < N) {
            const auto& row = lap_rows[i];
            for (int k = 0; k < 3; ++k)
                at(i, row.j0 + k) += row.w[k];
        } else {
            // ghost node via the Robin decay condition u'(r_N) = (2-n)/r_N u(r_N)
            const double hN = grid.nodes[N] - grid.nodes[N - 1];
            const double x[3] = {grid.nodes[N - 1], grid.nodes[N], grid.nodes[N] + hN};
            // even-basis weights at r_N over (N-1, N, ghost)
            const double m1 = 2.0 * n;
            const double m2 = (4.0 * n + 8.0) * x[1] * x[1];
            double u0 = x[0] * x[0], u1 = x[1] * x[1], u2 = x[2] * x[2];
            const double w0 = (m2 - (u1 + u2) * m1) / ((u0 - u1) * (u0 - u2));
            const double w1 = (m2 - (u0 + u2) * m1) / ((u1 - u0) * (u1 - u2));
            const double w2 = (m2 - (u0 + u1) * m1) / ((u2 - u0) * (u2 - u1));
            const double ghost = (x[2] - x[0]) * (2.0 - n) / grid.nodes[N];
            at(N, N - 1) += w0 + w2;
            at(N, N) += w1 + w2 * ghost;
        }
        at(i, i) -= V.values[i];
    }

    RadialField u = guess;
    double tau = damping;
    double prev_res = std::numeric_limits<double>::infinity();

    // one fixed-point evaluation: the cheap local derivative p q u^{p-1} is
    // implicit (the dense nonlocal derivative stays frozen), so the linear
    // problem is (Delta - V + p q_k u_k^{p-1}) u~ = (p-1) q_k u_k^p and the
    // discrete fixed point is unchanged
    auto picard_map = [&](const RadialField& uk, std::vector<double>& out) -> bool {
        const RadialField q = quotient_field(uk, params, table, exec).q;
        out.resize(S);
        std::vector<double> ab = ab_template;
        for (std::size_t i = 0; i <= N; ++i) {
            const double qup = q.values[i] * std::pow(uk.values[i], p - 1.0);
            ab[banded_index(i, i)] += p * qup;
            out[i] = (p - 1.0) * qup * uk.values[i];
        }
        std::vector<lapack_int> ipiv(S);
        const lapack_int info =
            LAPACKE_dgbsv(LAPACK_COL_MAJOR, lapack_int(S), kl, ku, 1, ab.data(), ldab,
                          ipiv.data(), out.data(), lapack_int(S));
        if (info != 0)
            return false;
        for (std::size_t i = 0; i <= N; ++i)
            if (!std::isfinite(out[i]))
                return false;
        return true;
    };

    // Anderson mixing history (critical-exponent fixed points have a slow
    // bubble-family mode that plain damping cannot remove)
    constexpr std::size_t kMixDepth = 3;
    std::vector<std::vector<double>> du_hist, df_hist;
    std::vector<double> f_prev, u_prev;

    for (int it = 0; it < max_iter; ++it) {
        u.tail = TailModel{u.values[N] * std::pow(grid.r_max(), double(n - 2)), double(n - 2)};
        std::vector<double> gu;
        if (!picard_map(u, gu)) {
            rep.status = SolveStatus::LinearSolveFailure;
            rep.iterations = it;
            rep.solution = u;
            return rep;
        }
        std::vector<double> f(S);
        double res = 0.0;
        for (std::size_t i = 0; i <= N; ++i) {
            f[i] = gu[i] - u.values[i];
            res = std::max(res, std::fabs(f[i]));
        }
        if (res > prev_res) {
            // residual grew: halve the damping and restart the mixing
            tau = std::max(0.5 * tau, 1.0 / 64.0);
            du_hist.clear();
            df_hist.clear();
        }
        prev_res = res;

        // least-squares mixing coefficients over the difference history
        const std::size_t m = du_hist.size();
        std::vector<double> gamma(m, 0.0);
        if (m > 0) {
            double A[kMixDepth][kMixDepth] = {};
            double b[kMixDepth] = {};
            for (std::size_t a = 0; a < m; ++a) {
                for (std::size_t c = a; c < m; ++c) {
                    double s = 0.0;
                    for (std::size_t i = 0; i <= N; ++i)
                        s += df_hist[a][i] * df_hist[c][i];
                    A[a][c] = A[c][a] = s;
                }
                double s = 0.0;
                for (std::size_t i = 0; i <= N; ++i)
                    s += df_hist[a][i] * f[i];
                b[a] = s;
            }
            for (std::size_t a = 0; a < m; ++a)
                A[a][a] += 1e-12 * (A[a][a] + 1.0);
            // tiny SPD system: Gaussian elimination without pivoting
            for (std::size_t a = 0; a < m; ++a) {
                for (std::size_t c = a + 1; c < m; ++c) {
                    const double fac = A[c][a] / A[a][a];
                    for (std::size_t d = a; d < m; ++d)
                        A[c][d] -= fac * A[a][d];
                    b[c] -= fac * b[a];
                }
            }
            for (std::size_t a = m; a-- > 0;) {
                double s = b[a];
                for (std::size_t d = a + 1; d < m; ++d)
                    s -= A[a][d] * gamma[d];
                gamma[a] = s / A[a][a];
            }
        }

        std::vector<double> next(S);
        auto mixed_step = [&](bool use_history) {
            for (std::size_t i = 0; i <= N; ++i) {
                double ubar = u.values[i], fbar = f[i];
                if (use_history)
                    for (std::size_t a = 0; a < m; ++a) {
                        ubar -= gamma[a] * du_hist[a][i];
                        fbar -= gamma[a] * df_hist[a][i];
                    }
                next[i] = ubar + tau * fbar;
            }
        };
        mixed_step(m > 0);
        bool positive = true;
        for (double v : next)
            positive = positive && v > 0.0;
        if (!positive && m > 0) {
            mixed_step(false); // plain damped step as a fallback
            positive = true;
            for (double v : next)
                positive = positive && v > 0.0;
        }

        double update = 0.0, sup_new = 0.0;
        for (std::size_t i = 0; i <= N; ++i) {
            update = std::max(update, std::fabs(next[i] - u.values[i]));
            sup_new = std::max(sup_new, std::fabs(next[i]));
        }

        // roll the history (differences of iterates and residuals)
        if (!f_prev.empty()) {
            std::vector<double> df(S), du(S);
            for (std::size_t i = 0; i <= N; ++i) {
                df[i] = f[i] - f_prev[i];
                du[i] = u.values[i] - u_prev[i];
            }
            df_hist.insert(df_hist.begin(), std::move(df));
            du_hist.insert(du_hist.begin(), std::move(du));
            if (df_hist.size() > kMixDepth) {
                df_hist.pop_back();
                du_hist.pop_back();
            }
        }
        f_prev = f;
        u_prev = u.values;

        u.values = std::move(next);
        rep.iterations = it + 1;
        rep.final_update_norm = update;

        if (!positive) {
            rep.status = SolveStatus::NonPositivityDetected;
            rep.solution = u;
            return rep;
        }
        if (update <= tol * sup_new) {
            rep.converged = true;
            rep.status = SolveStatus::Converged;
            u.tail = TailModel{u.values[N] * std::pow(grid.r_max(), double(n - 2)), double(n - 2)};
            rep.solution = u;
            return rep;
        }
    }
    rep.status = SolveStatus::MaxIterations;
    u.tail = TailModel{u.values[N] * std::pow(grid.r_max(), double(n - 2)), double(n - 2)};
    rep.solution = u;
    return rep;
}

} // namespace bubblelab
