#include "conwave/special.hpp"

#include <cmath>
#include <stdexcept>

namespace conwave {

double beta_value(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("beta_value: arguments must be positive");
    return std::exp(std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta));
}

double digamma(double x) {
    if (!(x > 0.0))
        throw std::invalid_argument("digamma: argument must be positive");
    double result = 0.0;
    while (x < 10.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    // asymptotic expansion
    double inv = 1.0 / x;
    double inv2 = inv * inv;
    result += std::log(x) - 0.5 * inv -
              inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 -
                      inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    return result;
}

double beta_derivative_second(double alpha, double beta) {
    return beta_value(alpha, beta) * (digamma(beta) - digamma(alpha + beta));
}

double sphere_area(int N) {
    if (N < 1)
        throw std::invalid_argument("sphere_area: N must be >= 1");
    double half = 0.5 * static_cast<double>(N);
    return 2.0 * std::exp(half * std::log(M_PI) - std::lgamma(half));
}

} // namespace conwave
