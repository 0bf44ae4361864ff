#include "conwave/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conwave {

CubicInterpolant::CubicInterpolant(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw std::invalid_argument("CubicInterpolant: need matching arrays, size >= 2");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw std::invalid_argument("CubicInterpolant: abscissa must increase");

    std::vector<double> dx(n - 1), secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        dx[i] = x_[i + 1] - x_[i];
        secant[i] = (y_[i + 1] - y_[i]) / dx[i];
    }

    slope_.assign(n, 0.0);
    if (n == 2) {
        slope_[0] = slope_[1] = secant[0];
    } else {
        // one-sided ends, shape-limited
        auto end_slope = [](double h0, double h1, double s0, double s1) {
            double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
            if (d * s0 <= 0.0)
                return 0.0;
            if (s0 * s1 < 0.0 && std::fabs(d) > 3.0 * std::fabs(s0))
                return 3.0 * s0;
            return d;
        };
        slope_[0] = end_slope(dx[0], dx[1], secant[0], secant[1]);
        slope_[n - 1] = end_slope(dx[n - 2], dx[n - 3], secant[n - 2], secant[n - 3]);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (secant[i - 1] * secant[i] <= 0.0) {
                slope_[i] = 0.0;
            } else {
                // weighted harmonic mean keeps the interpolant monotone
                double w1 = 2.0 * dx[i] + dx[i - 1];
                double w2 = dx[i] + 2.0 * dx[i - 1];
                slope_[i] = (w1 + w2) / (w1 / secant[i - 1] + w2 / secant[i]);
            }
        }
    }
}

std::size_t CubicInterpolant::segment(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0)
        return 0;
    if (i >= x_.size())
        return x_.size() - 2;
    return i - 1;
}

double CubicInterpolant::operator()(double x) const {
    x = std::clamp(x, x_.front(), x_.back());
    std::size_t i = segment(x);
    double h = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / h;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    double h10 = t3 - 2.0 * t2 + t;
    double h01 = -2.0 * t3 + 3.0 * t2;
    double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] + h11 * h * slope_[i + 1];
}

double CubicInterpolant::derivative(double x) const {
    x = std::clamp(x, x_.front(), x_.back());
    std::size_t i = segment(x);
    double h = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / h;
    double t2 = t * t;
    double d00 = (6.0 * t2 - 6.0 * t) / h;
    double d10 = 3.0 * t2 - 4.0 * t + 1.0;
    double d01 = (-6.0 * t2 + 6.0 * t) / h;
    double d11 = 3.0 * t2 - 2.0 * t;
    return d00 * y_[i] + d10 * slope_[i] + d01 * y_[i + 1] + d11 * slope_[i + 1];
}

} // namespace conwave
