#include "rfgen/digamma.hpp"

#include <cmath>

#include "rfgen/common.hpp"

namespace rfgen {

double digamma(double x)
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("digamma: argument must be a positive finite number");
    }

    // Shift upward with psi(x) = psi(x + 1) - 1/x until the asymptotic series
    // is accurate to machine precision.
    double result = 0.0;
    while (x < 10.0) {
        result -= 1.0 / x;
        x += 1.0;
    }

    // psi(x) ~ ln x - 1/(2x) - sum B_2n / (2n x^2n)
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double series = inv2 * (1.0 / 12.0
        - inv2 * (1.0 / 120.0
        - inv2 * (1.0 / 252.0
        - inv2 * (1.0 / 240.0
        - inv2 * (1.0 / 132.0
        - inv2 * (691.0 / 32760.0
        - inv2 * (1.0 / 12.0)))))));
    return result + std::log(x) - 0.5 * inv - series;
}

} // namespace rfgen
