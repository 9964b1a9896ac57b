#include "bubblelab/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>

#include "bubblelab/quadrature.hpp"

namespace bubblelab {

namespace {

constexpr double kPi = std::numbers::pi;

void check_kernel_params(int n, double ell) {
    if (n < 3 || n > 10)
        throw InvalidParams("ring_kernel: n must be in [3,10]");
    if (!(ell > 0.0) || !(ell < double(n)))
        throw InvalidParams("ring_kernel: ell must be in (0,n)");
}

// closed form for n = 3:
//   W(r,s) = 2 pi ((r+s)^{2-l} - |r-s|^{2-l}) / (r s (2-l)),   l != 2
//   W(r,s) = (2 pi / r s) ln((r+s)/|r-s|),                     l  = 2
// one stable branch via expm1 covers both.
double ring_kernel_n3(double r, double s, double ell) {
    const double a = r + s, b = std::fabs(r - s);
    const double x = 2.0 - ell;
    if (b == 0.0) {
        // diagonal, integrable for ell < 2
        return 2.0 * kPi * std::pow(a, x) / (r * s * x);
    }
    const double w = x * std::log(a / b);
    double phi; // (e^w - 1)/w
    if (std::fabs(w) < 1e-8)
        phi = 1.0 + 0.5 * w;
    else
        phi = std::expm1(w) / w;
    return 2.0 * kPi * std::pow(b, x) * std::log(a / b) * phi / (r * s);
}

// G(kappa) = int_0^pi (1 - kappa cos t)^{-ell/2} sin^{n-2} t dt, delta = 1 - kappa.
// Graded dyadic panels toward t = 0 with an analytic closure. The integrand is
// assembled in log space: its factors can over/underflow individually near the
// diagonal even though the product stays representable.
double angular_integral(int n, double ell, double delta) {
    const double kappa = 1.0 - delta;
    auto integrand = [&](double t) {
        const double st = std::sin(t);
        if (st <= 0.0)
            return 0.0;
        const double sh = std::sin(0.5 * t);
        const double base = 2.0 * sh * sh * kappa + delta;
        return std::exp(-0.5 * ell * std::log(base) + double(n - 2) * std::log(st));
    };
    const double t_min =
        delta > 0.0 ? std::clamp(std::sqrt(delta) * 1e-6, 1e-250, 1e-3) : 1e-6;
    const int K = std::max(16, int(std::ceil(std::log2(kPi / t_min))) + 1);
    double sum = 0.0;
    double hi = kPi;
    for (int k = 0; k < K; ++k) {
        const double lo = hi * 0.5;
        sum += detail::gauss8(integrand, lo, hi);
        hi = lo;
    }
    if (delta > 0.0) {
        // [0, hi] with t << sqrt(delta): integrand ~ delta^{-ell/2} t^{n-2}
        sum += std::exp(-0.5 * ell * std::log(delta)) * std::pow(hi, double(n - 1)) /
               double(n - 1);
    } else if (double(n - 1) - ell > 0.0) {
        // exact diagonal: integrand ~ 2^{ell/2} t^{n-2-ell}
        sum += std::pow(2.0, 0.5 * ell) * std::pow(hi, double(n - 1) - ell) /
               (double(n - 1) - ell);
    }
    return sum;
}

// diagonal value G(1) = 2^{n-2-ell/2} B((n-1-ell)/2, (n-1)/2), ell < n-1
double angular_integral_diagonal(int n, double ell) {
    const double a = 0.5 * (n - 1.0 - ell), b = 0.5 * (n - 1.0);
    const double lnB = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    return std::pow(2.0, n - 2.0 - 0.5 * ell) * std::exp(lnB);
}

double stable_delta(double r, double s) {
    const double d = r - s;
    return d * d / (r * r + s * s);
}

double kernel_prefactor(int n, double r, double s, double ell) {
    return sphere_area(n - 1) * std::pow(r * r + s * s, -0.5 * ell);
}

// Cubic-spline profile of G against x = log(1 - kappa); divergent profiles
// (ell >= n-1) are stored in log space.
class AngularProfile {
  public:
    AngularProfile(int n, double ell) : n_(n), ell_(ell) {
        log_space_ = ell >= double(n - 1) - 1e-12;
        const int M = 2400;
        x0_ = std::log(kDeltaMin);
        dx_ = (0.0 - x0_) / (M - 1);
        y_.resize(M);
        for (int i = 0; i < M; ++i) {
            const double delta = std::exp(x0_ + i * dx_);
            const double g = angular_integral(n, ell, std::min(delta, 1.0));
            y_[i] = log_space_ ? std::log(g) : g;
        }
        build_spline();
    }

    double eval_W(double r, double s) const {
        if (r == 0.0 || s == 0.0)
            return sphere_area(n_) * std::pow(std::max(r, s), -ell_);
        const double delta = stable_delta(r, s);
        double g;
        if (delta < kDeltaMin)
            g = angular_integral(n_, ell_, delta);
        else
            g = interp(std::log(delta));
        return kernel_prefactor(n_, r, s, ell_) * g;
    }

  private:
    static constexpr double kDeltaMin = 1e-13;
    int n_;
    double ell_;
    bool log_space_;
    double x0_, dx_;
    std::vector<double> y_, m_; // values and spline second derivatives

    void build_spline() {
        const std::size_t M = y_.size();
        m_.assign(M, 0.0);
        std::vector<double> d(M, 0.0);
        // natural cubic spline on a uniform grid: tridiagonal [1 4 1]
        for (std::size_t i = 1; i + 1 < M; ++i)
            d[i] = 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / (dx_ * dx_);
        // Thomas sweep
        std::vector<double> cp(M, 0.0), dp(M, 0.0);
        double beta = 4.0;
        cp[1] = 1.0 / beta;
        dp[1] = d[1] / beta;
        for (std::size_t i = 2; i + 1 < M; ++i) {
            beta = 4.0 - cp[i - 1];
            cp[i] = 1.0 / beta;
            dp[i] = (d[i] - dp[i - 1]) / beta;
        }
        for (std::size_t i = M - 2; i >= 1; --i) {
            m_[i] = dp[i] - cp[i] * m_[i + 1];
            if (i == 1)
                break;
        }
    }

    double interp(double x) const {
        const std::size_t M = y_.size();
        double t = (x - x0_) / dx_;
        if (t <= 0.0)
            t = 0.0;
        if (t >= double(M - 1))
            t = double(M - 1) - 1e-9;
        const auto i = static_cast<std::size_t>(t);
        const double a = (x - (x0_ + i * dx_)) / dx_;
        const double y = (1.0 - a) * y_[i] + a * y_[i + 1] +
                         dx_ * dx_ / 6.0 *
                             ((std::pow(1.0 - a, 3) - (1.0 - a)) * m_[i] + (std::pow(a, 3) - a) * m_[i + 1]);
        return log_space_ ? std::exp(y) : y;
    }
};

// shared evaluator used by the table builder
struct KernelEvaluator {
    int n;
    double ell;
    std::unique_ptr<AngularProfile> profile; // null for n = 3

    KernelEvaluator(int n_, double ell_) : n(n_), ell(ell_) {
        if (n != 3)
            profile = std::make_unique<AngularProfile>(n, ell);
    }

    double operator()(double r, double s) const {
        if (r == 0.0 && s == 0.0)
            throw InvalidParams("ring kernel undefined at (0,0)");
        if (r == 0.0 || s == 0.0)
            return sphere_area(n) * std::pow(std::max(r, s), -ell);
        if (n == 3)
            return ring_kernel_n3(r, s, ell);
        return profile->eval_W(r, s);
    }
};

} // namespace

double sphere_area(int n) {
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double ring_kernel(double r, double s, int n, double ell) {
    check_kernel_params(n, ell);
    if (r < 0.0 || s < 0.0)
        throw InvalidParams("ring_kernel: radii must be non-negative");
    if (r == 0.0 && s == 0.0)
        throw InvalidParams("ring_kernel: undefined at (0,0)");
    if (r == s && ell >= double(n - 1))
        throw SingularPoint("ring_kernel: divergent on the diagonal for ell >= n-1");
    if (r == 0.0 || s == 0.0)
        return sphere_area(n) * std::pow(std::max(r, s), -ell);
    if (n == 3)
        return ring_kernel_n3(r, s, ell);
    if (r == s)
        return kernel_prefactor(n, r, s, ell) * angular_integral_diagonal(n, ell);
    return kernel_prefactor(n, r, s, ell) * angular_integral(n, ell, stable_delta(r, s));
}

namespace detail {

double ring_kernel_quadrature(double r, double s, int n, double ell) {
    check_kernel_params(n, ell);
    if (r == 0.0 || s == 0.0)
        return sphere_area(n) * std::pow(std::max(r, s), -ell);
    return kernel_prefactor(n, r, s, ell) * angular_integral(n, ell, stable_delta(r, s));
}

} // namespace detail

namespace {

// Integrate W(r0, s) * s^{n-1} * hat shares over a panel [a,b] one of whose
// endpoints is the kink/singular point s = r0 (behavior ~ (s-r0)^{n-1-ell}).
// For ell > n-2 the power substitution s = r0 +- tau^{1/(n-ell)} removes the
// singular term exactly; otherwise the identity substitution with dyadic
// grading toward the endpoint suffices.
void special_panel(const KernelEvaluator& W, double r0, double a, double b, int n, double ell,
                   bool singular_at_left, double& acc_left, double& acc_right) {
    const double len = b - a;
    const double p = (ell > double(n - 2)) ? (double(n) - ell) : 1.0;
    const double T = std::pow(len, p);
    const int K = 26;
    auto add_point = [&](double tau, double qw) {
        const double dist = std::pow(tau, 1.0 / p);
        const double s = singular_at_left ? a + dist : b - dist;
        const double jac = (p == 1.0) ? 1.0 : (1.0 / p) * std::pow(tau, 1.0 / p - 1.0);
        const double g = W(r0, s) * std::pow(s, double(n - 1)) * jac * qw;
        const double lam = (b - s) / len; // hat share of the left node
        acc_left += g * lam;
        acc_right += g * (1.0 - lam);
    };
    double hi = T;
    for (int k = 0; k < K; ++k) {
        const double lo = hi * 0.5;
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        for (int q = 0; q < 4; ++q)
            add_point(c + h * detail::kGauss4X[q], h * detail::kGauss4W[q]);
        hi = lo;
    }
}

std::vector<double> hat_mass_weights(const RadialGrid& grid, int n) {
    // exact integrals of the hat functions against s^{n-1}
    const std::size_t N = grid.size() - 1;
    std::vector<double> w(N + 1, 0.0);
    auto mono = [n](double a, double b, int k) { // int_a^b s^{n-1+k} ds
        const double e = double(n + k);
        return (std::pow(b, e) - std::pow(a, e)) / e;
    };
    for (std::size_t j = 0; j < N; ++j) {
        const double a = grid.nodes[j], b = grid.nodes[j + 1];
        const double i0 = mono(a, b, 0), i1 = mono(a, b, 1);
        w[j] += (b * i0 - i1) / (b - a);
        w[j + 1] += (i1 - a * i0) / (b - a);
    }
    return w;
}

} // namespace

RingKernelTable build_ring_kernel_table(const RadialGrid& grid, int n, double ell, Exec exec) {
    grid.validate();
    check_kernel_params(n, ell);
    const KernelEvaluator W(n, ell);
    const std::size_t S = grid.size();
    const std::size_t N = S - 1;
    RingKernelTable table;
    table.grid = grid;
    table.n = n;
    table.ell = ell;
    table.diagonal_finite = ell < double(n - 1);
    table.values.assign(S * S, 0.0);
    table.weights.assign(S * S, 0.0);
    table.mass_weights = hat_mass_weights(grid, n);

    const auto& r = grid.nodes;

    // ring-kernel values at node pairs (upper triangle, then mirrored)
    detail::parallel_index_loop(exec, std::ptrdiff_t(S), [&](std::size_t i) {
        for (std::size_t j = i; j < S; ++j) {
            double v = 0.0;
            if (i == 0 && j == 0)
                v = 0.0; // undefined point, excluded
            else if (i == j) {
                if (table.diagonal_finite)
                    v = (n == 3) ? ring_kernel_n3(r[i], r[i], ell)
                                 : kernel_prefactor(n, r[i], r[i], ell) * angular_integral_diagonal(n, ell);
                else
                    v = 0.0; // divergent, excluded from quadrature
            } else {
                v = W(r[i], r[j]);
            }
            table.values[i * S + j] = v;
        }
    });
    for (std::size_t i = 0; i < S; ++i)
        for (std::size_t j = 0; j < i; ++j)
            table.values[i * S + j] = table.values[j * S + i];

    // quadrature weights: exact panel integrals against the linear interpolant
    detail::parallel_index_loop(exec, std::ptrdiff_t(S), [&](std::size_t i) {
        double* row = table.weights.data() + i * S;
        const double r0 = r[i];
        for (std::size_t j = 0; j < N; ++j) {
            const double a = r[j], b = r[j + 1];
            if (j == i || j + 1 == i) {
                special_panel(W, r0, a, b, n, ell, /*singular_at_left=*/j == i, row[j], row[j + 1]);
                continue;
            }
            const double c = 0.5 * (a + b), h = 0.5 * (b - a);
            for (int q = 0; q < 4; ++q) {
                const double s = c + h * detail::kGauss4X[q];
                const double g = W(r0, s) * std::pow(s, double(n - 1)) * h * detail::kGauss4W[q];
                const double lam = (b - s) / (b - a);
                row[j] += g * lam;
                row[j + 1] += g * (1.0 - lam);
            }
        }
    });
    return table;
}

RadialField riesz_convolve(const RadialField& f, const RingKernelTable& table, Exec exec) {
    f.validate();
    if (!f.grid.same_nodes(table.grid))
        throw GridMismatch("riesz_convolve: field grid differs from table grid");
    const int n = table.n;
    const double ell = table.ell;
    for (double v : f.values)
        if (v < 0.0)
            throw NonPositive("riesz_convolve: density must be non-negative");
    double tail_correction = 0.0;
    const double r_max = f.grid.r_max();
    if (f.tail && f.tail->coeff != 0.0) {
        const double beta = f.tail->power;
        if (!(beta > double(n) - ell))
            throw DivergentTail("riesz_convolve: tail power must exceed n - ell");
        if (f.tail->coeff < 0.0)
            throw NonPositive("riesz_convolve: tail coefficient must be non-negative");
        // far-field W(r,s) ~ |S^{n-1}| s^{-ell} for s >> r; first order only
        tail_correction = sphere_area(n) * f.tail->coeff * std::pow(r_max, double(n) - ell - beta) /
                          (ell + beta - double(n));
    }

    const std::size_t S = f.size();
    std::vector<double> out(S, 0.0);
    detail::parallel_index_loop(exec, std::ptrdiff_t(S), [&](std::size_t i) {
        const double* row = table.weights.data() + i * S;
        std::vector<double> prod(S);
        for (std::size_t j = 0; j < S; ++j)
            prod[j] = row[j] * f.values[j];
        out[i] = pairwise_sum(prod) + tail_correction;
    });

    // far-field mass law q(r) ~ (int f) r^{-ell}
    std::optional<TailModel> q_tail;
    {
        bool finite_mass = !f.tail || f.tail->coeff == 0.0 || f.tail->power > double(n);
        if (finite_mass) {
            std::vector<double> prod(S);
            for (std::size_t j = 0; j < S; ++j)
                prod[j] = table.mass_weights[j] * f.values[j];
            double mass = pairwise_sum(prod);
            if (f.tail && f.tail->coeff != 0.0)
                mass += f.tail->coeff * std::pow(r_max, double(n) - f.tail->power) /
                        (f.tail->power - double(n));
            q_tail = TailModel{sphere_area(n) * mass, ell};
        }
    }
    return RadialField(f.grid, std::move(out), q_tail);
}

RadialField riesz_convolve(const RadialField& f, int n, double ell, Exec exec) {
    const auto table = build_ring_kernel_table(f.grid, n, ell, exec);
    return riesz_convolve(f, table, exec);
}

namespace {

// int_{[0,1]^3} |y|^{-ell} dy by self-similar subtraction: the L-shaped
// region [0,1]^3 \ [0,1/2]^3 is smooth (|y| >= 1/2) and the corner cube
// rescales onto the whole.
double corner_cube_integral(double ell) {
    double J = 0.0;
    for (int oct = 1; oct < 8; ++oct) {
        const double lo[3] = {(oct & 1) ? 0.5 : 0.0, (oct & 2) ? 0.5 : 0.0, (oct & 4) ? 0.5 : 0.0};
        double acc = 0.0;
        for (int a = 0; a < 8; ++a)
            for (int b = 0; b < 8; ++b)
                for (int c = 0; c < 8; ++c) {
                    const double x = lo[0] + 0.25 * (1.0 + detail::kGauss8X[a]);
                    const double y = lo[1] + 0.25 * (1.0 + detail::kGauss8X[b]);
                    const double z = lo[2] + 0.25 * (1.0 + detail::kGauss8X[c]);
                    const double w = detail::kGauss8W[a] * detail::kGauss8W[b] * detail::kGauss8W[c];
                    acc += w * std::pow(x * x + y * y + z * z, -0.5 * ell);
                }
        J += acc * 0.25 * 0.25 * 0.25; // (half-width)^3 jacobian
    }
    return J / (1.0 - std::pow(2.0, ell - 3.0));
}

struct OracleWork {
    const RadialField* f;
    double ell;
    double corner_unit; // int_{[0,1]^3} |y|^{-ell}
    int max_depth = 5;

    double field_at(double xr, const double y[3]) const {
        const double dx = xr - y[0];
        return (*f)(std::sqrt(dx * dx + y[1] * y[1] + y[2] * y[2]));
    }

    double gauss_cell(double xr, const double lo[3], const double hi[3]) const {
        static constexpr double g = 0.5773502691896257; // 1/sqrt(3)
        double acc = 0.0;
        const double cx = 0.5 * (lo[0] + hi[0]), hx = 0.5 * (hi[0] - lo[0]);
        const double cy = 0.5 * (lo[1] + hi[1]), hy = 0.5 * (hi[1] - lo[1]);
        const double cz = 0.5 * (lo[2] + hi[2]), hz = 0.5 * (hi[2] - lo[2]);
        for (int a = -1; a <= 1; a += 2)
            for (int b = -1; b <= 1; b += 2)
                for (int c = -1; c <= 1; c += 2) {
                    const double y[3] = {cx + a * g * hx, cy + b * g * hy, cz + c * g * hz};
                    const double r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
                    acc += std::pow(r2, -0.5 * ell) * field_at(xr, y);
                }
        return acc * hx * hy * hz; // 8 unit weights * (h/2)^3
    }

    bool touches_origin(const double lo[3], const double hi[3]) const {
        for (int k = 0; k < 3; ++k)
            if (lo[k] != 0.0 && hi[k] != 0.0)
                return false;
        return true;
    }

    double min_dist2(const double lo[3], const double hi[3]) const {
        double d2 = 0.0;
        for (int k = 0; k < 3; ++k) {
            double d = 0.0;
            if (lo[k] > 0.0)
                d = lo[k];
            else if (hi[k] < 0.0)
                d = -hi[k];
            d2 += d * d;
        }
        return d2;
    }

    double contrib(double xr, const double lo[3], const double hi[3], int depth) const {
        const double side = hi[0] - lo[0];
        if (touches_origin(lo, hi)) {
            if (depth >= max_depth) {
                // analytic corner mass, field frozen at the corner
                return (*f)(xr) * std::pow(side, 3.0 - ell) * corner_unit;
            }
        } else if (depth >= max_depth || min_dist2(lo, hi) > 2.25 * side * side) {
            return gauss_cell(xr, lo, hi);
        }
        // split into octants
        double acc = 0.0;
        const double mid[3] = {0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]), 0.5 * (lo[2] + hi[2])};
        for (int oct = 0; oct < 8; ++oct) {
            double l2[3], h2[3];
            for (int k = 0; k < 3; ++k) {
                if (oct & (1 << k)) {
                    l2[k] = mid[k];
                    h2[k] = hi[k];
                } else {
                    l2[k] = lo[k];
                    h2[k] = mid[k];
                }
            }
            acc += contrib(xr, l2, h2, depth + 1);
        }
        return acc;
    }
};

} // namespace

RadialField riesz_oracle(const RadialField& f, int n, double ell, int M, std::vector<double> radii,
                         Exec exec) {
    f.validate();
    if (n != 3)
        throw InvalidParams("riesz_oracle: only n = 3 is supported");
    if (!(ell > 0.0) || !(ell < 3.0))
        throw InvalidParams("riesz_oracle: ell must be in (0,3)");
    if (M > 128)
        throw TooLarge("riesz_oracle: M exceeds the 128-cell cap");
    if (M < 4)
        throw InvalidParams("riesz_oracle: M too small");
    if (M % 2)
        ++M; // cells must share a corner at the origin
    for (double v : f.values)
        if (v < 0.0)
            throw NonPositive("riesz_oracle: density must be non-negative");

    const double R = f.grid.r_max();
    if (radii.empty()) {
        for (int k = 0; k <= 12; ++k)
            radii.push_back(R * 0.5 * k / 12.0);
    }
    if (radii.front() != 0.0 || !std::is_sorted(radii.begin(), radii.end()))
        throw InvalidParams("riesz_oracle: radii must be sorted and start at 0");

    double tail_correction = 0.0;
    if (f.tail && f.tail->coeff != 0.0) {
        const double beta = f.tail->power;
        if (!(beta > 3.0 - ell))
            throw DivergentTail("riesz_oracle: tail power must exceed n - ell");
        tail_correction =
            sphere_area(3) * f.tail->coeff * std::pow(R, 3.0 - ell - beta) / (ell + beta - 3.0);
    }

    OracleWork work{&f, ell, corner_cube_integral(ell), 5};

    // cell edges e_k = R (2k - M)/M; e_{M/2} = 0 exactly
    std::vector<double> edges(static_cast<std::size_t>(M) + 1);
    for (int k = 0; k <= M; ++k)
        edges[k] = R * (2.0 * k - M) / M;

    std::vector<double> out(radii.size(), 0.0);
    const double R2 = R * R;
    detail::parallel_index_loop(exec, std::ptrdiff_t(radii.size()), [&](std::size_t idx) {
        const double xr = radii[idx];
        double acc = 0.0;
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j)
                for (int k = 0; k < M; ++k) {
                    const double lo[3] = {edges[i], edges[j], edges[k]};
                    const double hi[3] = {edges[i + 1], edges[j + 1], edges[k + 1]};
                    const double cx = 0.5 * (lo[0] + hi[0]);
                    const double cy = 0.5 * (lo[1] + hi[1]);
                    const double cz = 0.5 * (lo[2] + hi[2]);
                    if (cx * cx + cy * cy + cz * cz > R2)
                        continue;
                    acc += work.contrib(xr, lo, hi, 0);
                }
        out[idx] = acc + tail_correction;
    });

    RadialGrid og;
    og.scheme = GridScheme::Custom;
    og.nodes = radii;
    return RadialField(og, std::move(out));
}

QuotientResult quotient_field(const RadialField& u, const ModelParams& params,
                              const RingKernelTable* table, Exec exec) {
    u.validate();
    params.validate();
    for (double v : u.values)
        if (!(v > 0.0))
            throw NonPositive("quotient_field: u must be strictly positive");
    const double pc = params.p_conv();
    std::vector<double> dens(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        dens[i] = std::pow(u.values[i], pc);
    std::optional<TailModel> dtail;
    if (u.tail)
        dtail = TailModel{std::pow(u.tail->coeff, pc), u.tail->power * pc};
    RadialField density(u.grid, std::move(dens), dtail);

    RadialField q = table ? riesz_convolve(density, *table, exec)
                          : riesz_convolve(density, params.n, params.ell, exec);
    QuotientResult res{std::move(q), 0.0, false};
    res.sup = res.q.max_value();
    res.in_class = res.sup <= params.K_quot;
    return res;
}

void save_ring_kernel_table(const RingKernelTable& table, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out)
        throw IoError("cannot open table cache for writing: " + file.string());
    const char magic[4] = {'B', 'L', 'R', 'K'};
    const std::uint32_t version = 1;
    const std::int32_t n = table.n;
    const std::uint64_t N = table.grid.size() - 1;
    const std::uint8_t scheme = static_cast<std::uint8_t>(table.grid.scheme);
    const std::uint8_t diag = table.diagonal_finite ? 1 : 0;
    out.write(magic, 4);
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    out.write(reinterpret_cast<const char*>(&table.ell), sizeof(double));
    out.write(reinterpret_cast<const char*>(&N), sizeof(N));
    auto put = [&out](const std::vector<double>& v) {
        out.write(reinterpret_cast<const char*>(v.data()),
                  std::streamsize(v.size() * sizeof(double)));
    };
    put(table.values);
    put(table.weights);
    put(table.mass_weights);
    put(table.grid.nodes);
    out.write(reinterpret_cast<const char*>(&scheme), 1);
    out.write(reinterpret_cast<const char*>(&diag), 1);
    if (!out)
        throw IoError("short write on table cache: " + file.string());
}

RingKernelTable load_ring_kernel_table(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw IoError("cannot open table cache: " + file.string());
    char magic[4];
    std::uint32_t version = 0;
    std::int32_t n = 0;
    double ell = 0.0;
    std::uint64_t N = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    in.read(reinterpret_cast<char*>(&ell), sizeof(double));
    in.read(reinterpret_cast<char*>(&N), sizeof(N));
    if (!in || std::memcmp(magic, "BLRK", 4) != 0 || version != 1)
        throw IoError("bad table cache header: " + file.string());
    const std::size_t S = static_cast<std::size_t>(N) + 1;
    RingKernelTable table;
    table.n = n;
    table.ell = ell;
    auto get = [&in](std::vector<double>& v, std::size_t count) {
        v.resize(count);
        in.read(reinterpret_cast<char*>(v.data()), std::streamsize(count * sizeof(double)));
    };
    get(table.values, S * S);
    get(table.weights, S * S);
    get(table.mass_weights, S);
    get(table.grid.nodes, S);
    std::uint8_t scheme = 0, diag = 0;
    in.read(reinterpret_cast<char*>(&scheme), 1);
    in.read(reinterpret_cast<char*>(&diag), 1);
    if (!in)
        throw IoError("truncated table cache: " + file.string());
    table.grid.scheme = static_cast<GridScheme>(scheme);
    table.diagonal_finite = diag != 0;
    table.grid.validate();
    return table;
}

std::string ring_kernel_cache_name(const RadialGrid& grid, int n, double ell) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "ringtable_n%d_ell%.17g_%016llx.bin", n, ell,
                  static_cast<unsigned long long>(grid.hash()));
    return buf;
}

} // namespace bubblelab
