#include "bubblelab/ratefit.hpp"

namespace bubblelab {

RateFit powerlaw_fit(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2)
        throw InsufficientData("powerlaw_fit: need at least 2 points");
    const auto m = points.size();
    double sx = 0, sy = 0;
    std::vector<double> lx(m), ly(m);
    for (std::size_t i = 0; i < m; ++i) {
        auto [x, y] = points[i];
        if (!(x > 0.0) || !(y > 0.0))
            throw NonPositive("powerlaw_fit: coordinates must be positive");
        lx[i] = std::log(x);
        ly[i] = std::log(y);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / double(m), my = sy / double(m);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0)
        throw InsufficientData("powerlaw_fit: all abscissae coincide");
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.log_coeff = my - fit.slope * mx;
    fit.n_points = int(m);
    for (std::size_t i = 0; i < m; ++i)
        fit.max_residual = std::max(fit.max_residual, std::fabs(ly[i] - (fit.log_coeff + fit.slope * lx[i])));
    return fit;
}

} // namespace bubblelab
