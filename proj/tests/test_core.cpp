#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bubblelab/bubble.hpp"
#include "bubblelab/norms.hpp"
#include "bubblelab/operators.hpp"
#include "bubblelab/parallel.hpp"
#include "bubblelab/ratefit.hpp"

using namespace bubblelab;

TEST_CASE("make_grid uniform matches arithmetic") {
    const auto g = make_grid(1.0, 4, GridScheme::Uniform);
    REQUIRE(g.size() == 5);
    const double expect[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (int i = 0; i < 5; ++i)
        CHECK(g.nodes[i] == doctest::Approx(expect[i]).epsilon(1e-15));
}

TEST_CASE("make_grid geometric hits the endpoint exactly") {
    const auto g = make_grid(10.0, 10, GridScheme::Geometric);
    CHECK(g.nodes.front() == 0.0);
    CHECK(g.nodes.back() == 10.0);
    for (std::size_t i = 1; i < g.size(); ++i)
        CHECK(g.nodes[i] > g.nodes[i - 1]);
    // constant spacing growth factor
    const double q1 = (g.nodes[2] - g.nodes[1]) / (g.nodes[1] - g.nodes[0]);
    const double q2 = (g.nodes[9] - g.nodes[8]) / (g.nodes[8] - g.nodes[7]);
    CHECK(q1 == doctest::Approx(q2).epsilon(1e-10));
}

TEST_CASE("make_grid rejects bad input") {
    CHECK_THROWS_AS(make_grid(1.0, 0, GridScheme::Uniform), InvalidGrid);
    CHECK_THROWS_AS(make_grid(-1.0, 10, GridScheme::Uniform), InvalidGrid);
}

TEST_CASE("laplacian of r^2 is 2n everywhere, including the origin") {
    for (int n : {3, 6, 10}) {
        const auto g = make_grid(5.0, 500, GridScheme::Uniform);
        const auto f = sample_field(g, [](double r) { return r * r; });
        const auto lap = laplacian_radial(f, n);
        for (double v : lap.values)
            CHECK(std::fabs(v - 2.0 * n) < 1e-10);
    }
}

TEST_CASE("laplacian of a constant vanishes") {
    const auto g = make_graded_grid(1.0, 0.01, 10.0);
    const auto f = sample_field(g, [](double) { return 7.5; });
    const auto lap = laplacian_radial(f, 5);
    for (double v : lap.values)
        CHECK(std::fabs(v) < 1e-9);
}

TEST_CASE("laplacian of the bubble matches the closed-form right-hand side") {
    // oracle: Delta Z = -Q Z^p with Z = (1+r^2)^{-2} for n=6, Q=24
    const auto g = make_grid(20.0, 2000, GridScheme::Uniform); // h = 0.01
    const auto Z = sample_field(g, [](double r) { return std::pow(1.0 + r * r, -2.0); });
    const auto lap = laplacian_radial(Z, 6);
    double sup = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double rhs = -24.0 * std::pow(1.0 + g.nodes[i] * g.nodes[i], -4.0);
        sup = std::max(sup, std::fabs(lap.values[i] - rhs));
    }
    CHECK(sup < 2.5e-3); // second order, h = 0.01
}

TEST_CASE("laplacian needs at least 3 nodes") {
    RadialGrid g;
    g.nodes = {0.0, 1.0};
    RadialField f;
    f.grid = g;
    f.values = {1.0, 1.0};
    CHECK_THROWS_AS(laplacian_radial(f, 3), InvalidGrid);
}

TEST_CASE("holder norm of a constant is the constant") {
    const auto g = make_grid(1.0, 100, GridScheme::Uniform);
    const auto f = sample_field(g, [](double) { return 3.25; });
    CHECK(holder_norm(f, 0.5, 1.0) == doctest::Approx(3.25).epsilon(1e-14));
    CHECK(holder_norm(f, 0.0, 1.0) == doctest::Approx(3.25).epsilon(1e-14));
}

TEST_CASE("holder norm of f(r) = r on the unit ball, alpha = 1/2") {
    const auto g = make_grid(1.0, 1000, GridScheme::Uniform);
    const auto f = sample_field(g, [](double r) { return r; });
    // sup = 1, seminorm attained at the endpoints: |1-0|/1^{1/2} = 1
    CHECK(holder_norm(f, 0.5, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("holder norm matches a dense pair-search oracle on the bubble") {
    const BubbleSpec spec{6, 24.0, 1.0};
    const auto g = make_grid(2.0, 4000, GridScheme::Uniform);
    const auto Z = bubble_profile(spec, g);
    const double ours = holder_norm(Z, 0.5, 1.0);

    // oracle: brute-force pair search on a finer independent sampling
    const int M = 10000;
    std::vector<double> r(M + 1), v(M + 1);
    for (int i = 0; i <= M; ++i) {
        r[i] = double(i) / M;
        v[i] = bubble_value(spec, r[i]);
    }
    double sup = 0.0, semi = 0.0;
    for (int i = 0; i <= M; ++i)
        sup = std::max(sup, std::fabs(v[i]));
#pragma omp parallel for reduction(max : semi)
    for (int i = 0; i <= M; ++i)
        for (int j = i + 1; j <= M; ++j)
            semi = std::max(semi, std::fabs(v[i] - v[j]) / std::sqrt(r[j] - r[i]));
    CHECK(std::fabs(ours - (sup + semi)) < 1e-3);
}

TEST_CASE("holder norm is monotone in radius and in alpha") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> amp(0.5, 2.0);
    const auto g = make_grid(2.0, 400, GridScheme::Uniform);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = amp(rng), b = amp(rng), c = amp(rng);
        const auto f = sample_field(
            g, [&](double r) { return a * std::cos(b * r) + c * r * r / (1.0 + r); });
        CHECK(holder_norm(f, 0.5, 1.0) <= holder_norm(f, 0.5, 2.0) + 1e-13);
        // pairs within the unit ball have separation <= 1, so the seminorm
        // grows with alpha whenever it is at least the sup-norm scale
        const double h1 = holder_norm(f, 0.3, 1.0), h2 = holder_norm(f, 0.6, 1.0);
        if (h1 - sup_norm(f, 1.0) >= 1.0)
            CHECK(h2 >= h1 - 1e-13);
    }
}

TEST_CASE("holder norm rejects radius beyond the grid") {
    const auto g = make_grid(1.0, 10, GridScheme::Uniform);
    const auto f = sample_field(g, [](double r) { return r; });
    CHECK_THROWS_AS(holder_norm(f, 0.5, 2.0), OutOfRange);
}

TEST_CASE("decay constant of the borderline profile is 1") {
    const int n = 6;
    const auto g = make_graded_grid(2.0, 0.01, 30.0);
    const auto f = sample_field(
        g, [&](double r) { return std::pow(std::max(r, 0.5), 2.0 - n); },
        TailModel{1.0, double(n - 2)});
    CHECK(decay_constant(f, 1.0, n) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("decay constant of the bubble, rho = 10, n = 6") {
    const BubbleSpec spec{6, 24.0, 1.0};
    const auto g = make_graded_grid(4.0, 0.01, 40.0);
    const auto Z = bubble_profile(spec, g);
    CHECK(decay_constant(Z, 10.0, 6) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("decay constant is positively homogeneous") {
    const BubbleSpec spec{5, 15.0, 1.0};
    const auto g = make_graded_grid(4.0, 0.02, 40.0);
    auto Z = bubble_profile(spec, g);
    const double base = decay_constant(Z, 2.0, 5);
    for (double c : {0.25, 3.0, 117.0}) {
        auto scaled = Z;
        for (auto& v : scaled.values)
            v *= c;
        scaled.tail->coeff *= c;
        CHECK(decay_constant(scaled, 2.0, 5) == doctest::Approx(c * base).epsilon(1e-12));
    }
}

TEST_CASE("decay constant throws NoDecay without a decaying tail") {
    const auto g = make_grid(10.0, 100, GridScheme::Uniform);
    const auto f1 = sample_field(g, [](double) { return 1.0; });
    CHECK_THROWS_AS(decay_constant(f1, 1.0, 6), NoDecay);
    const auto f2 = sample_field(g, [](double) { return 1.0; }, TailModel{1.0, 1.0});
    CHECK_THROWS_AS(decay_constant(f2, 1.0, 6), NoDecay); // beta = 1 < n-2
}

TEST_CASE("powerlaw fit recovers an exact power law") {
    std::vector<std::pair<double, double>> pts;
    for (double e : {0.2, 0.1, 0.05})
        pts.emplace_back(e, 3.0 * e * e);
    const auto fit = powerlaw_fit(pts);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(fit.coeff() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.max_residual < 1e-12);
    CHECK(fit.n_points == 3);
}

TEST_CASE("powerlaw fit sees the asymptotic slope of (1+r)^{-4}") {
    std::vector<std::pair<double, double>> pts;
    for (int k = 0; k <= 20; ++k) {
        const double r = 10.0 * std::pow(10.0, k / 20.0);
        pts.emplace_back(r, std::pow(1.0 + r, -4.0));
    }
    const auto fit = powerlaw_fit(pts);
    CHECK(fit.slope > -4.2);
    CHECK(fit.slope < -3.8);
}

TEST_CASE("powerlaw fit error paths") {
    std::vector<std::pair<double, double>> one = {{1.0, 2.0}};
    CHECK_THROWS_AS(powerlaw_fit(one), InsufficientData);
    std::vector<std::pair<double, double>> bad = {{1.0, 2.0}, {2.0, -1.0}};
    CHECK_THROWS_AS(powerlaw_fit(bad), NonPositive);
}

TEST_CASE("pairwise sum matches long double accumulation") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> x(10007);
    long double ref = 0.0;
    for (auto& v : x) {
        v = dist(rng);
        ref += v;
    }
    CHECK(std::fabs(pairwise_sum(x) - double(ref)) < 1e-12);
}
