#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace conwave {

// Uniform radial grid: nodes 0 = y_0 < y_1 < ... < y_(n-1) = domain_end.
class RadialGrid {
  public:
    RadialGrid(std::size_t node_count, double domain_end);

    const std::vector<double>& nodes() const { return nodes_; }
    double node(std::size_t i) const { return nodes_[i]; }
    double spacing() const { return spacing_; }
    double domain_end() const { return domain_end_; }
    std::size_t size() const { return nodes_.size(); }

  private:
    std::vector<double> nodes_;
    double spacing_;
    double domain_end_;
};

enum class WeightKind { static_eta, dynamic_sb, pohozaev_psi, plain_radial };

// Selects which weight family multiplies a radial integrand:
//   static_eta   -> (1-y^2)^eta
//   dynamic_sb   -> y^(N-1) (1-y^2)^(s^-b)
//   pohozaev_psi -> y^(N-1) (1-y^2)^eta
//   plain_radial -> y^(N-1)
struct WeightSpec {
    WeightKind kind = WeightKind::plain_radial;
    double eta = 0.0; // static_eta / pohozaev_psi, in (0, 1]
    double b = 0.0;   // dynamic_sb, > 1

    static WeightSpec static_weight(double eta);
    static WeightSpec dynamic_weight(double b);
    static WeightSpec pohozaev_weight(double eta);
    static WeightSpec plain();

    // Exponent of the (1-y^2) factor at similarity time s.
    double boundary_exponent(double s) const;
};

// Pointwise weight value; rejects y outside [0,1], and s < 1 for dynamic_sb.
double weight_value(const WeightSpec& spec, double y, double s, int N);

// Weighted quadrature of node values v on a grid over [0, 1]:
//
//   int_0^1 v(y) y^(N-1) (1-y^2)^c [/ (1-y^2)] [log(1-y^2)] dy
//
// with c the spec's boundary exponent at time s. The optional divisor lowers
// the effective exponent by one; the configuration is rejected when the
// effective exponent is <= -1 (divergent). Composite Simpson away from y=1;
// near the endpoint the (1-y^2) power (and log) is integrated analytically
// against a piecewise quadratic model of the smooth factor, so accuracy is
// uniform in the exponent. Deterministic; linear in `values`.
double integrate_weighted(std::span<const double> values, const RadialGrid& grid,
                          const WeightSpec& spec, double s, int N,
                          bool singular_divisor, bool log_weight = false);

// Centered second-order derivative of a sampled radial field. Fields even
// about the origin use the symmetric ghost value there; the outer end is
// one-sided second order.
std::vector<double> radial_derivative(std::span<const double> values,
                                      const RadialGrid& grid,
                                      bool even_at_origin = true);

} // namespace conwave
