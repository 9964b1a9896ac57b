#include "bubblelab/harness.hpp"

#include <algorithm>
#include <cmath>

#include "bubblelab/bubble.hpp"
#include "bubblelab/norms.hpp"
#include "bubblelab/operators.hpp"

namespace bubblelab {

namespace {

double trapezoid(const RadialGrid& g, const std::vector<double>& f) {
    std::vector<double> panels(g.size() - 1);
    for (std::size_t j = 0; j + 1 < g.size(); ++j)
        panels[j] = 0.5 * (f[j] + f[j + 1]) * (g.nodes[j + 1] - g.nodes[j]);
    return pairwise_sum(panels);
}

} // namespace

double PerturbationSpec::operator()(double y) const {
    const double t = (y - center) / width;
    if (std::fabs(t) >= 1.0)
        return 0.0;
    return amplitude * std::exp(-t * t / (1.0 - t * t));
}

BlowupRecord normalize_blowup(const RadialField& u, const ModelParams& params) {
    u.validate();
    params.validate();
    for (double v : u.values)
        if (!(v > 0.0))
            throw NonPositive("normalize_blowup: u must be strictly positive");
    const std::size_t imax = u.argmax();
    if (imax != 0 && u.values[imax] > u.values[0] * (1.0 + 1e-12))
        throw MaxNotAtOrigin("normalize_blowup: discrete argmax away from the origin");

    BlowupRecord rec;
    rec.sup_u = u.values[0];
    rec.eps = std::pow(rec.sup_u, -2.0 / (params.n - 2.0));

    RadialGrid vg = scale_grid(u.grid, 1.0 / rec.eps);
    std::vector<double> vv(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        vv[i] = u.values[i] / rec.sup_u; // v(0) = 1 exactly, 0 < v <= 1
    std::optional<TailModel> vtail;
    if (u.tail)
        vtail = TailModel{u.tail->coeff * std::pow(rec.eps, -u.tail->power) / rec.sup_u,
                          u.tail->power};
    rec.v = RadialField(std::move(vg), std::move(vv), vtail);
    rec.lambda = params.eta / rec.eps;
    return rec;
}

double rescaled_residual(const RadialField& v, const RadialField& q_tilde,
                         const RadialField& V_tilde, double eps, const ModelParams& params) {
    if (!v.grid.same_nodes(q_tilde.grid) || !v.grid.same_nodes(V_tilde.grid))
        throw GridMismatch("rescaled_residual: fields on different grids");
    const RadialField lap = laplacian_radial(v, params.n);
    const double p = params.p_crit();
    double sup = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double r = lap.values[i] + q_tilde.values[i] * std::pow(v.values[i], p) -
                         eps * eps * V_tilde.values[i] * v.values[i];
        sup = std::max(sup, std::fabs(r));
    }
    return sup;
}

std::pair<double, double> deviation_from_bubble(const RadialField& v, const ModelParams& params,
                                                double eps) {
    if (!(eps > 0.0))
        throw InvalidParams("deviation_from_bubble: eps must be positive");
    const double limit = 1.0 / eps;
    if (v.grid.r_max() < limit * (1.0 - 1e-12))
        throw DomainTooSmall("deviation_from_bubble: grid does not reach 1/eps");
    const BubbleSpec spec{params.n, params.Q, 1.0};
    double A = 0.0, arg = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double y = v.grid.nodes[i];
        if (y > limit)
            break;
        const double d = std::fabs(v.values[i] - bubble_value(spec, y));
        if (d > A) {
            A = d;
            arg = y;
        }
    }
    return {A, arg};
}

LinearizedDiagnostics a_coefficient(const RadialField& v, const ModelParams& params) {
    v.validate();
    params.validate();
    for (double x : v.values)
        if (!(x > 0.0))
            throw NonPositive("a_coefficient: v must be strictly positive");
    const BubbleSpec spec{params.n, params.Q, 1.0};
    const double p = params.p_crit();
    const double Q = params.Q;

    const std::size_t S = v.size();
    std::vector<double> a(S), w(S, 0.0);
    double A = 0.0;
    for (std::size_t i = 0; i < S; ++i) {
        const double Z = bubble_value(spec, v.grid.nodes[i]);
        const double d = v.values[i] - Z;
        A = std::max(A, std::fabs(d));
        if (std::fabs(d) < 1e-8)
            a[i] = p * Q * std::pow(Z, p - 1.0);
        else
            a[i] = Q * (std::pow(v.values[i], p) - std::pow(Z, p)) / d;
    }
    LinearizedDiagnostics diag;
    if (A > 0.0) {
        for (std::size_t i = 0; i < S; ++i) {
            const double Z = bubble_value(spec, v.grid.nodes[i]);
            w[i] = (v.values[i] - Z) / A;
        }
    }
    diag.a_field = RadialField(v.grid, std::move(a));
    diag.w_field = RadialField(v.grid, std::move(w));

    for (std::size_t i = 0; i < S; ++i)
        diag.w_bound_const = std::max(
            diag.w_bound_const, (1.0 + v.grid.nodes[i]) * std::fabs(diag.w_field.values[i]));

    std::vector<std::pair<double, double>> pts;
    const double y_hi = 0.5 * v.grid.r_max();
    for (std::size_t i = 0; i < S; ++i) {
        const double y = v.grid.nodes[i];
        if (y < 5.0 || y > y_hi)
            continue;
        if (diag.a_field.values[i] > 0.0)
            pts.emplace_back(y, diag.a_field.values[i]);
    }
    if (pts.size() >= 2)
        diag.a_decay_fit = powerlaw_fit(pts);
    else
        diag.a_fit_degenerate = true;
    return diag;
}

HypothesisReport hypothesis_product(const RadialField& q_u, const RadialField& u,
                                    const ModelParams& params) {
    params.validate();
    HypothesisReport rep;
    std::vector<double> diff(q_u.size());
    for (std::size_t i = 0; i < q_u.size(); ++i)
        diff[i] = q_u.values[i] - params.Q;
    const RadialField qdiff(q_u.grid, std::move(diff));
    rep.holder_q_diff = holder_norm(qdiff, params.alpha, params.r_ball);
    rep.sup_u = u.max_value();
    rep.product = rep.holder_q_diff * std::pow(rep.sup_u, double(params.n - 2));
    rep.decay_L = decay_constant(u, params.rho, params.n);
    rep.quot_sup = q_u.max_value();
    rep.in_decay_class = rep.decay_L <= params.L_decay;
    rep.in_quotient_class = rep.quot_sup <= params.K_quot;
    return rep;
}

HypothesisReport hypothesis_product(const RadialField& u, const ModelParams& params,
                                    const RingKernelTable* table) {
    const auto quot = quotient_field(u, params, table);
    return hypothesis_product(quot.q, u, params);
}

double energy_identity_gap(const RadialField& u, const RadialField& V, const ModelParams& params,
                           Exec exec) {
    u.validate();
    V.validate();
    params.validate();
    if (!u.grid.same_nodes(V.grid))
        throw GridMismatch("energy_identity_gap: u and V on different grids");
    for (double x : u.values)
        if (x < 0.0)
            throw NonPositive("energy_identity_gap: u must be non-negative");
    const int n = params.n;
    const double Sn = sphere_area(n);
    const double r_max = u.grid.r_max();
    const std::size_t S = u.size();
    const auto& r = u.grid.nodes;

    // int |grad u|^2
    const RadialField du = radial_derivative(u);
    std::vector<double> g(S);
    for (std::size_t i = 0; i < S; ++i)
        g[i] = du.values[i] * du.values[i] * std::pow(r[i], double(n - 1));
    double I1 = trapezoid(u.grid, g);
    if (u.tail && u.tail->coeff != 0.0) {
        const double A = u.tail->coeff, beta = u.tail->power;
        if (!(2.0 * beta + 2.0 > double(n)))
            throw DivergentIntegral("energy: gradient tail integral diverges");
        I1 += beta * beta * A * A * std::pow(r_max, double(n) - 2.0 * beta - 2.0) /
              (2.0 * beta + 2.0 - double(n));
    }
    I1 *= Sn;

    // int V u^2
    for (std::size_t i = 0; i < S; ++i)
        g[i] = V.values[i] * u.values[i] * u.values[i] * std::pow(r[i], double(n - 1));
    double I2 = trapezoid(u.grid, g);
    if (u.tail && V.tail && u.tail->coeff != 0.0 && V.tail->coeff != 0.0) {
        const double e = V.tail->power + 2.0 * u.tail->power;
        if (!(e > double(n)))
            throw DivergentIntegral("energy: V u^2 tail integral diverges");
        I2 += V.tail->coeff * u.tail->coeff * u.tail->coeff *
              std::pow(r_max, double(n) - e) / (e - double(n));
    }
    I2 *= Sn;

    // int q_u u^{2n/(n-2)}
    const double pc = params.p_conv();
    std::vector<double> dens(S);
    for (std::size_t i = 0; i < S; ++i)
        dens[i] = std::pow(u.values[i], pc);
    std::optional<TailModel> dtail;
    if (u.tail)
        dtail = TailModel{std::pow(u.tail->coeff, pc), u.tail->power * pc};
    const RadialField density(u.grid, std::move(dens), dtail);
    const RadialField q = riesz_convolve(density, n, params.ell, exec);
    for (std::size_t i = 0; i < S; ++i)
        g[i] = q.values[i] * density.values[i] * std::pow(r[i], double(n - 1));
    double I3 = trapezoid(u.grid, g);
    if (q.tail && dtail && dtail->coeff != 0.0) {
        const double e = q.tail->power + dtail->power;
        if (!(e > double(n)))
            throw DivergentIntegral("energy: quotient tail integral diverges");
        I3 += q.tail->coeff * dtail->coeff * std::pow(r_max, double(n) - e) / (e - double(n));
    }
    I3 *= Sn;

    return std::fabs(I1 + I2 - I3) / std::max(1.0, std::fabs(I3));
}

BlowupExperimentResult blowup_rate_experiment(const std::vector<double>& eps_list,
                                              const PerturbationSpec& perturbation,
                                              const ModelParams& params, Exec exec) {
    params.validate();
    if (eps_list.size() < 3)
        throw InsufficientData("blowup_rate_experiment: need at least 3 eps values");
    for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
        if (!(eps_list[i] > eps_list[i + 1]) || !(eps_list[i + 1] > 0.0))
            throw InvalidParams("blowup_rate_experiment: eps_list must be positive decreasing");

    const double eps_min = eps_list.back();
    const double y_max = std::max(1.25 * std::max(1.0, params.r_ball) / eps_min, 20.0);
    const RadialGrid y_grid = make_graded_grid(16.0, 0.01, y_max, 1.02);
    const auto table = build_ring_kernel_table(y_grid, params.n, params.ell, exec);
    const BubbleSpec unit{params.n, params.Q, 1.0};
    const RadialField Z = bubble_profile(unit, y_grid);
    const double p = params.p_crit();
    const double half_n = (2.0 - params.n) / 2.0;

    BlowupExperimentResult result;
    for (double eps : eps_list) {
        // physical member u = z_eps + eps^{(2-n)/2} eps^2 phi(./eps): the
        // rescaled profile is exactly Z + eps^2 phi
        const double sup_u = std::pow(eps, half_n);
        RadialGrid x_grid = scale_grid(y_grid, eps);
        std::vector<double> uv(y_grid.size());
        for (std::size_t i = 0; i < y_grid.size(); ++i)
            uv[i] = sup_u * (Z.values[i] + eps * eps * perturbation(y_grid.nodes[i]));
        const double zA = std::pow(eps, half_n) * std::pow(params.Q / (params.n * (params.n - 2.0)), half_n) *
                          std::pow(eps, params.n - 2.0);
        RadialField u(std::move(x_grid), std::move(uv), TailModel{zA, double(params.n - 2)});

        BlowupRecord rec;
        try {
            rec = normalize_blowup(u, params);
        } catch (const MaxNotAtOrigin&) {
            continue; // member aborted
        }
        const RadialField& v = rec.v;

        // v's nodes are y_grid up to a rounding ulp from the double rescale;
        // convolve on the table's grid with the same samples
        const RadialField v_on_y(y_grid, v.values, v.tail);

        // quotient in rescaled coordinates; q_u(x) = eps^{-ell} q_v(x/eps)
        const auto qv = quotient_field(v_on_y, params, &table, exec);
        const double scale = std::pow(rec.eps, -params.ell);
        std::vector<double> qt(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            qt[i] = scale * qv.q.values[i];
        std::optional<TailModel> qt_tail;
        if (qv.q.tail)
            qt_tail = TailModel{scale * qv.q.tail->coeff, qv.q.tail->power};
        const RadialField q_tilde(v.grid, std::move(qt), qt_tail);

        // manufactured potential in rescaled coordinates
        const RadialField lap_v = laplacian_radial(v, params.n);
        std::vector<double> Vt(v.size());
        const double e2 = rec.eps * rec.eps;
        for (std::size_t i = 0; i < v.size(); ++i)
            Vt[i] = (lap_v.values[i] + q_tilde.values[i] * std::pow(v.values[i], p)) /
                    (e2 * v.values[i]);
        const RadialField V_tilde(v.grid, std::move(Vt));
        rec.residual_eq_v = rescaled_residual(v, q_tilde, V_tilde, rec.eps, params);

        std::tie(rec.deviation_A, rec.argmax_y) = deviation_from_bubble(v, params, rec.eps);
        result.diagnostics.push_back(a_coefficient(v, params));

        // hypothesis diagnostics on the physical field
        {
            std::vector<double> qu(v.size());
            for (std::size_t i = 0; i < v.size(); ++i)
                qu[i] = scale * qv.q.values[i];
            std::optional<TailModel> qu_tail;
            if (qv.q.tail)
                qu_tail = TailModel{qv.q.tail->coeff, qv.q.tail->power}; // mass law is scale-free
            const RadialField q_u(u.grid, std::move(qu), qu_tail);
            const auto hyp = hypothesis_product(q_u, u, params);
            rec.hyp_product = hyp.product;
            rec.decay_L = hyp.decay_L;
            rec.quot_sup = hyp.quot_sup;
        }
        result.records.push_back(std::move(rec));
    }

    std::vector<std::pair<double, double>> pts;
    bool degenerate = result.records.size() < 2;
    for (const auto& rec : result.records) {
        if (rec.deviation_A <= 1e-12)
            degenerate = true;
        else
            pts.emplace_back(rec.eps, rec.deviation_A);
    }
    result.fit_degenerate = degenerate || pts.size() < 2;
    if (!result.fit_degenerate) {
        result.fit = powerlaw_fit(pts);
        if (params.delta > 0.0) {
            std::vector<std::pair<double, double>> probe;
            for (auto [e, A] : pts)
                probe.emplace_back(e, A * std::pow(e, -(2.0 + params.delta)));
            result.improved_fit = powerlaw_fit(probe);
        }
    }

    // sigma heuristic: largest physical radius where the running ball-sup of
    // |v - Z| stays below twice its minimum over candidate radii
    if (!result.records.empty() && params.sigma <= 0.0) {
        const auto& rec = result.records.back();
        const BubbleSpec spec{params.n, params.Q, 1.0};
        double running = 0.0, best_sigma = 0.0, min_sup = -1.0;
        std::vector<double> sups(rec.v.size(), 0.0);
        for (std::size_t i = 1; i < rec.v.size(); ++i) {
            running = std::max(running,
                               std::fabs(rec.v.values[i] - bubble_value(spec, rec.v.grid.nodes[i])));
            sups[i] = running;
            if (min_sup < 0.0 || running < min_sup)
                min_sup = running;
        }
        for (std::size_t i = 1; i < rec.v.size(); ++i)
            if (sups[i] <= 2.0 * min_sup)
                best_sigma = rec.eps * rec.v.grid.nodes[i];
        result.sigma_inferred = best_sigma;
    } else {
        result.sigma_inferred = params.sigma;
    }
    return result;
}

} // namespace bubblelab
