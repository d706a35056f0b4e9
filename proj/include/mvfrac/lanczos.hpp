#ifndef MVFRAC_LANCZOS_HPP
#define MVFRAC_LANCZOS_HPP

#include <array>
#include <cmath>
#include <numbers>

namespace mvfrac {

// Lanczos approximation, g = 7, n = 9.
namespace detail {
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_coef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
}  // namespace detail

/// log|Gamma(x)| for real x that is not a non-positive integer.
inline double log_gamma(double x) {
    using std::numbers::pi;
    if (x < 0.5) {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::log(pi / std::abs(std::sin(pi * x))) - log_gamma(1.0 - x);
    }
    const double z = x - 1.0;
    double sum = detail::lanczos_coef[0];
    for (std::size_t i = 1; i < detail::lanczos_coef.size(); ++i)
        sum += detail::lanczos_coef[i] / (z + static_cast<double>(i));
    const double t = z + detail::lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

}  // namespace mvfrac

#endif  // MVFRAC_LANCZOS_HPP
