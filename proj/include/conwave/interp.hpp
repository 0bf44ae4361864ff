#pragma once

#include <span>
#include <vector>

namespace conwave {

// Monotonicity-preserving cubic Hermite interpolant (Fritsch-Carlson slopes)
// on a strictly increasing abscissa. Evaluation clamps to the data range.
class CubicInterpolant {
  public:
    CubicInterpolant(std::span<const double> x, std::span<const double> y);

    double operator()(double x) const;
    double derivative(double x) const;

  private:
    std::size_t segment(double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> slope_;
};

} // namespace conwave
