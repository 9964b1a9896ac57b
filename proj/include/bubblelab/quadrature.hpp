#ifndef BUBBLELAB_QUADRATURE_HPP
#define BUBBLELAB_QUADRATURE_HPP

#include <array>
#include <cstddef>

namespace bubblelab::detail {

// Gauss-Legendre nodes/weights on [-1, 1]
inline constexpr std::array<double, 4> kGauss4X = {-0.8611363115940526, -0.3399810435848563,
                                                   0.3399810435848563, 0.8611363115940526};
inline constexpr std::array<double, 4> kGauss4W = {0.3478548451374538, 0.6521451548625461,
                                                   0.6521451548625461, 0.3478548451374538};

inline constexpr std::array<double, 8> kGauss8X = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kGauss8W = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

template <class F>
double gauss4(F&& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int k = 0; k < 4; ++k)
        s += kGauss4W[k] * f(c + h * kGauss4X[k]);
    return s * h;
}

template <class F>
double gauss8(F&& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int k = 0; k < 8; ++k)
        s += kGauss8W[k] * f(c + h * kGauss8X[k]);
    return s * h;
}

} // namespace bubblelab::detail

#endif
