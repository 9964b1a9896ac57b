// Acceptance suite: runs every contract check at its pinned tolerance and
// prints one pass/fail line per criterion. Exit code 0 iff all selected
// criteria pass. Select one with --criterion N (used by ctest), or run all.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bubblelab/bubble.hpp"
#include "bubblelab/harness.hpp"
#include "bubblelab/norms.hpp"
#include "bubblelab/operators.hpp"
#include "bubblelab/riesz.hpp"
#include "bubblelab/solver.hpp"

using namespace bubblelab;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& msg) {
        pass = pass && ok;
        if (!detail.empty())
            detail += "; ";
        detail += msg + (ok ? " [ok]" : " [FAIL]");
    }
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s = std::max(s, std::fabs(a[i] - b[i]));
    return s;
}

// ---- 1. bubble exactness -------------------------------------------------
Outcome criterion_bubble_exactness() {
    Outcome out;
    const BubbleSpec spec{6, 24.0, 1.0};
    const auto grid = make_grid(20.0, 4000, GridScheme::Uniform); // h = 0.005
    const double res = bubble_residual(spec, grid);
    out.require(res <= 1e-5, "sup residual " + num(res) + " <= 1e-5");

    std::vector<std::pair<double, double>> pts;
    for (int N : {1000, 2000, 4000})
        pts.emplace_back(20.0 / N, bubble_residual(spec, make_grid(20.0, N, GridScheme::Uniform)));
    const double slope = powerlaw_fit(pts).slope;
    out.require(std::fabs(slope - 2.0) <= 0.2, "refinement order " + num(slope) + " in 2+-0.2");
    return out;
}

// ---- 2. riesz oracle equivalence ------------------------------------------
Outcome criterion_riesz_oracle() {
    Outcome out;
    const RadialGrid grid = make_graded_grid(4.0, 0.005, 12.0, 1.02);
    const RadialField f_bubble = sample_field(
        grid, [](double r) { return std::pow(1.0 + r * r, -3.0); }, TailModel{1.0, 6.0});
    const RadialField f_bump = sample_field(grid, [](double r) {
        const double t = 0.5 * r;
        return t < 1.0 ? std::exp(-t * t / (1.0 - t * t)) : 0.0;
    });

    std::vector<double> radii;
    std::vector<std::size_t> idx;
    for (int k = 0; k <= 12; ++k) {
        std::size_t j = grid.panel_of(0.5 * grid.r_max() * k / 12.0);
        if (!idx.empty() && j == idx.back())
            continue;
        idx.push_back(j);
        radii.push_back(grid.nodes[j]);
    }
    for (double ell : {0.5, 1.0, 1.5}) {
        const auto table = build_ring_kernel_table(grid, 3, ell);
        for (const auto* f : {&f_bubble, &f_bump}) {
            const auto q = riesz_convolve(*f, table);
            const auto qo = riesz_oracle(*f, 3, ell, 64, radii);
            double nm = 0.0, dn = 0.0;
            for (std::size_t k = 0; k < radii.size(); ++k) {
                nm = std::max(nm, std::fabs(q.values[idx[k]] - qo.values[k]));
                dn = std::max(dn, std::fabs(qo.values[k]));
            }
            out.require(nm / dn <= 1e-3, std::string(f == &f_bubble ? "bubble" : "bump") +
                                             " ell=" + num(ell) + " rel " + num(nm / dn) +
                                             " <= 1e-3");
        }
    }
    // q_Z(0) = pi for n=3, ell=1, Q=3
    const RadialGrid wide = make_graded_grid(6.0, 0.005, 40.0, 1.015);
    ModelParams P;
    P.n = 3;
    P.Q = 3.0;
    P.ell = 1.0;
    const auto quot = quotient_field(bubble_profile(BubbleSpec{3, 3.0, 1.0}, wide), P);
    out.require(std::fabs(quot.q.values[0] - kPi) <= 1e-4,
                "q_Z(0) = " + num(quot.q.values[0]) + ", |.-pi| <= 1e-4");
    return out;
}

// ---- 3. scaling covariance -------------------------------------------------
Outcome criterion_scaling_covariance() {
    Outcome out;
    ModelParams P;
    P.n = 3;
    P.Q = 3.0;
    for (double ell : {0.5, 1.0}) {
        P.ell = ell;
        const auto res = quotient_scaling_check({1.0, 0.5, 0.25}, P, 40.0, 500);
        out.require(std::fabs(res.fit.slope + ell) <= 1e-2,
                    "ell=" + num(ell) + " slope " + num(res.fit.slope) + " = -ell +- 1e-2");
    }
    return out;
}

// ---- 4. limit-profile uniqueness -------------------------------------------
Outcome criterion_shooting() {
    Outcome out;
    const auto grid = make_grid(20.0, 4000, GridScheme::Uniform);
    for (auto [n, Q] : {std::pair{6, 24.0}, {3, 3.0}}) {
        const auto res = shoot_limit_profile(n, Q, 1.0, grid);
        const auto Z = bubble_profile(BubbleSpec{n, Q, 1.0}, grid);
        const double sup = sup_diff(res.profile.values, Z.values);
        out.require(res.outcome == ShootOutcome::Decayed && sup <= 1e-6,
                    "(n=" + std::to_string(n) + ",Q=" + num(Q) + ") sup " + num(sup) + " <= 1e-6");
    }
    return out;
}

// ---- 5. linearized kernel ---------------------------------------------------
Outcome criterion_linearized_kernel() {
    Outcome out;
    const BubbleSpec spec{6, 24.0, 1.0};
    const auto grid = make_grid(20.0, 4000, GridScheme::Uniform); // h = 0.005
    const double m0 = linearized_residual(scaling_mode(spec, grid), spec, 0);
    const double m1 = linearized_residual(translation_mode(spec, grid), spec, 1);
    const double mz = linearized_residual(bubble_profile(spec, grid), spec, 0);
    out.require(m0 <= 1e-5, "scaling mode " + num(m0) + " <= 1e-5");
    out.require(m1 <= 1e-5, "translation mode " + num(m1) + " <= 1e-5");
    out.require(mz >= 0.1, "Z residual " + num(mz) + " >= 0.1");
    return out;
}

// ---- 6. a-coefficient decay -------------------------------------------------
Outcome criterion_a_decay() {
    Outcome out;
    ModelParams P;
    P.n = 6;
    P.Q = 24.0;
    P.ell = 1.0;
    const auto grid = make_graded_grid(8.0, 0.01, 110.0, 1.01);
    const auto Z = bubble_profile(BubbleSpec{6, 24.0, 1.0}, grid);
    PerturbationSpec bump{0.01, 1.0, 0.5}; // v within 1e-2 of Z
    RadialField v = Z;
    for (std::size_t i = 0; i < v.size(); ++i)
        v.values[i] += bump(v.grid.nodes[i]);
    const auto diag = a_coefficient(v, P);

    // fit restricted to y in [5, 50]
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid.nodes[i] >= 5.0 && grid.nodes[i] <= 50.0 && diag.a_field.values[i] > 0.0)
            pts.emplace_back(grid.nodes[i], diag.a_field.values[i]);
    const double slope = powerlaw_fit(pts).slope;
    out.require(slope >= -4.3 && slope <= -3.7, "|a| exponent " + num(slope) + " in [-4.3,-3.7]");
    return out;
}

// ---- 7. blow-up rate ---------------------------------------------------------
Outcome criterion_blowup_rate() {
    Outcome out;
    ModelParams P;
    P.n = 6;
    P.Q = 24.0;
    P.ell = 1.0;
    const PerturbationSpec pert{1.0, 1.0, 0.5};
    const auto result = blowup_rate_experiment({0.2, 0.1, 0.05, 0.025}, pert, P);
    out.require(!result.fit_degenerate && result.fit.slope >= 1.8 && result.fit.slope <= 2.2,
                "deviation slope " + num(result.fit.slope) + " in [1.8,2.2]");
    double max_res = 0.0, v0_gap = 0.0;
    bool bounded = true;
    for (const auto& rec : result.records) {
        max_res = std::max(max_res, rec.residual_eq_v);
        v0_gap = std::max(v0_gap, std::fabs(rec.v.values[0] - 1.0));
        bounded = bounded && rec.v.min_value() > 0.0 && rec.v.max_value() <= 1.0;
    }
    out.require(result.records.size() == 4, "4 members");
    out.require(max_res <= 1e-4, "member residual " + num(max_res) + " <= 1e-4");
    out.require(v0_gap == 0.0, "v(0) = 1 exactly");
    out.require(bounded, "0 < v <= 1");
    return out;
}

// ---- 8. energy identity -------------------------------------------------------
Outcome criterion_energy() {
    Outcome out;
    {
        ModelParams P;
        P.n = 6;
        P.Q = 24.0;
        P.ell = 1.0;
        const auto grid = make_graded_grid(6.0, 0.004, 40.0, 1.015);
        const auto Z = bubble_profile(BubbleSpec{6, 24.0, 1.0}, grid);
        const auto table = build_ring_kernel_table(grid, 6, 1.0);
        const auto V = manufacture_potential(Z, P, &table);
        const double gap = energy_identity_gap(Z, V, P);
        out.require(gap <= 1e-3, "manufactured-V gap " + num(gap) + " <= 1e-3");
    }
    {
        ModelParams P;
        P.n = 3;
        P.Q = 3.0;
        P.ell = 1.0;
        const auto grid = make_graded_grid(6.0, 0.005, 40.0, 1.015);
        const auto Z = bubble_profile(BubbleSpec{3, 3.0, 1.0}, grid);
        const auto V0 = sample_field(grid, [](double) { return 0.0; });
        const double gap = energy_identity_gap(Z, V0, P);

        // independent quadrature of the closed-form integrand:
        // q_Z(r) = (pi/2) atan(r)/r + (pi/2)(r^2-1)/(1+r^2)^2 + pi/(1+r^2)^2
        auto qz = [](double r) {
            if (r < 1e-8)
                return kPi - kPi * r * r / 6.0;
            const double s = 1.0 + r * r;
            return 0.5 * kPi * std::atan(r) / r + 0.5 * kPi * (r * r - 1.0) / (s * s) +
                   kPi / (s * s);
        };
        const int M = 200000;
        const double R = 400.0, h = R / M;
        double nm = 0.0, dn = 0.0;
        for (int k = 0; k <= M; ++k) {
            const double r = k * h;
            const double w = (k == 0 || k == M) ? 1.0 : (k % 2 ? 4.0 : 2.0);
            const double z6 = std::pow(1.0 + r * r, -3.0);
            nm += w * (qz(r) - 3.0) * z6 * r * r;
            dn += w * qz(r) * z6 * r * r;
        }
        const double expect = std::fabs(4.0 * kPi * nm * h / 3.0) /
                              std::max(1.0, 4.0 * kPi * dn * h / 3.0);
        out.require(std::fabs(gap - expect) <= 1e-3, "V=0 gap " + num(gap) + " matches oracle " +
                                                         num(expect) + " +- 1e-3");
    }
    return out;
}

// ---- 9. solver round-trip -------------------------------------------------------
Outcome criterion_solver() {
    Outcome out;
    ModelParams P;
    P.n = 6;
    P.Q = 24.0;
    P.ell = 1.0;
    const auto grid = make_graded_grid(6.0, 0.0075, 30.0, 1.015);
    const auto Z = bubble_profile(BubbleSpec{6, 24.0, 1.0}, grid);
    const auto table = build_ring_kernel_table(grid, 6, 1.0);
    const auto V = manufacture_potential(Z, P, &table);
    RadialField guess = Z;
    for (auto& v : guess.values)
        v *= 1.1;
    guess.tail->coeff *= 1.1;
    const auto rep = solve_nonlocal(V, P, guess, 1e-8, 100, &table);
    const double sup = sup_diff(rep.solution.values, Z.values);
    out.require(rep.converged, "converged in " + std::to_string(rep.iterations) + " iters");
    out.require(rep.iterations <= 100, "iterations <= 100");
    out.require(sup <= 1e-4, "sup error " + num(sup) + " <= 1e-4");
    return out;
}

// ---- 10. class diagnostics ---------------------------------------------------------
Outcome criterion_class_diagnostics() {
    Outcome out;
    ModelParams P;
    P.n = 6;
    P.Q = 24.0;
    P.ell = 1.0;
    P.rho = 10.0;
    P.r_ball = 12.0;
    const auto grid = make_graded_grid(6.0, 0.01, 40.0, 1.015);
    const auto Z = bubble_profile(BubbleSpec{6, 24.0, 1.0}, grid);
    const double L = decay_constant(Z, P.rho, P.n);
    out.require(std::fabs(L - 1.0) <= 1e-3, "decay constant " + num(L) + " = 1 +- 1e-3");

    const auto table = build_ring_kernel_table(grid, 6, 1.0);
    const auto hyp = hypothesis_product(Z, P, &table);
    out.require(std::isfinite(hyp.quot_sup),
                "sup q_Z finite, reported " + num(hyp.quot_sup));

    const auto qQ = sample_field(grid, [&](double) { return P.Q; });
    const auto synth = hypothesis_product(qQ, Z, P);
    out.require(synth.product == 0.0, "synthetic q==Q product exactly 0");
    return out;
}

// ---- 11. determinism -----------------------------------------------------------------
Outcome criterion_determinism() {
    Outcome out;
    const char* bin = std::getenv("BUBBLE_LAB_BIN");
    if (!bin) {
        out.require(false, "BUBBLE_LAB_BIN not set");
        return out;
    }
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const auto tmp = std::filesystem::temp_directory_path();
    // one cheap serial experiment and one exercising the OpenMP kernels
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"shoot", "--set grid.N=2000 --set grid.r_max=10"},
        {"manufacture", "--set grid.core_h=0.02"}};
    for (const auto& [exp, extra] : cases) {
        const auto d1 = tmp / ("bl_det1_" + exp), d2 = tmp / ("bl_det2_" + exp);
        std::filesystem::remove_all(d1);
        std::filesystem::remove_all(d2);
        for (const auto& d : {d1, d2}) {
            const std::string cmd = std::string(bin) + " " + exp + " " + extra + " --out " +
                                    d.string() + " > /dev/null 2>&1";
            if (std::system(cmd.c_str()) == -1) {
                out.require(false, "failed to launch " + exp);
                return out;
            }
        }
        const std::string a = slurp(d1 / "report.json"), b = slurp(d2 / "report.json");
        out.require(!a.empty() && a == b, exp + ": byte-identical report.json");
        std::filesystem::remove_all(d1);
        std::filesystem::remove_all(d2);
    }
    return out;
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {"bubble exactness", criterion_bubble_exactness},
        {"riesz oracle equivalence", criterion_riesz_oracle},
        {"scaling covariance", criterion_scaling_covariance},
        {"limit-profile uniqueness", criterion_shooting},
        {"linearized kernel", criterion_linearized_kernel},
        {"a-coefficient decay", criterion_a_decay},
        {"blow-up rate", criterion_blowup_rate},
        {"energy identity", criterion_energy},
        {"solver round-trip", criterion_solver},
        {"class diagnostics", criterion_class_diagnostics},
        {"determinism", criterion_determinism},
    };
    return all;
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            only = std::atoi(argv[++i]);
    }
    const auto& all = criteria();
    if (only < 0 || only > int(all.size())) {
        std::fprintf(stderr, "criterion index out of range\n");
        return 2;
    }
    bool ok = true;
    for (int k = 1; k <= int(all.size()); ++k) {
        if (only != 0 && k != only)
            continue;
        const auto outcome = all[k - 1].run();
        ok = ok && outcome.pass;
        std::printf("[%2d] %-26s %s (%s)\n", k, all[k - 1].name,
                    outcome.pass ? "PASS" : "FAIL", outcome.detail.c_str());
        std::fflush(stdout);
    }
    return ok ? 0 : 1;
}
