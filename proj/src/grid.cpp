#include "conwave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace conwave {

RadialGrid::RadialGrid(std::size_t node_count, double domain_end) {
    if (node_count < 2)
        throw std::invalid_argument("RadialGrid: need at least 2 nodes");
    if (!(domain_end > 0.0))
        throw std::invalid_argument("RadialGrid: domain_end must be positive");
    nodes_.resize(node_count);
    spacing_ = domain_end / static_cast<double>(node_count - 1);
    for (std::size_t i = 0; i < node_count; ++i)
        nodes_[i] = domain_end * static_cast<double>(i) / static_cast<double>(node_count - 1);
    nodes_.front() = 0.0;
    nodes_.back() = domain_end;
    domain_end_ = domain_end;
}

WeightSpec WeightSpec::static_weight(double eta) {
    if (!(eta > 0.0) || !(eta <= 1.0))
        throw std::invalid_argument("WeightSpec: static weight needs eta in (0, 1]");
    return {WeightKind::static_eta, eta, 0.0};
}

WeightSpec WeightSpec::dynamic_weight(double b) {
    if (!(b > 1.0))
        throw std::invalid_argument("WeightSpec: dynamic weight needs b > 1");
    return {WeightKind::dynamic_sb, 0.0, b};
}

WeightSpec WeightSpec::pohozaev_weight(double eta) {
    if (!(eta > 0.0) || !(eta <= 1.0))
        throw std::invalid_argument("WeightSpec: pohozaev weight needs eta in (0, 1]");
    return {WeightKind::pohozaev_psi, eta, 0.0};
}

WeightSpec WeightSpec::plain() {
    return {WeightKind::plain_radial, 0.0, 0.0};
}

double WeightSpec::boundary_exponent(double s) const {
    switch (kind) {
    case WeightKind::static_eta:
    case WeightKind::pohozaev_psi:
        return eta;
    case WeightKind::dynamic_sb:
        if (!(s >= 1.0))
            throw std::invalid_argument("WeightSpec: dynamic weight needs s >= 1");
        return std::pow(s, -b);
    case WeightKind::plain_radial:
        return 0.0;
    }
    throw std::logic_error("WeightSpec: unknown kind");
}

double weight_value(const WeightSpec& spec, double y, double s, int N) {
    if (!(y >= 0.0) || !(y <= 1.0))
        throw std::invalid_argument("weight_value: y must lie in [0, 1]");
    double c = spec.boundary_exponent(s);
    double rho = std::pow(1.0 - y * y, c);
    switch (spec.kind) {
    case WeightKind::static_eta:
        return rho;
    case WeightKind::dynamic_sb:
    case WeightKind::pohozaev_psi:
        return std::pow(y, N - 1) * rho;
    case WeightKind::plain_radial:
        return std::pow(y, N - 1);
    }
    throw std::logic_error("weight_value: unknown kind");
}

namespace {

// Exact moments of the endpoint weight against monomials in t = 1 - y:
//   int_a^b t^(c+k) dt                     (plain)
//   int_a^b t^(c+k) log t dt               (log-weighted)
double power_moment(double a, double b, double q) {
    // q = c + k > -1
    return (std::pow(b, q + 1.0) - std::pow(a, q + 1.0)) / (q + 1.0);
}

double power_log_moment(double a, double b, double q) {
    auto primitive = [q](double t) {
        if (t == 0.0)
            return 0.0; // t^(q+1) log t -> 0 for q+1 > 0
        double tp = std::pow(t, q + 1.0);
        return tp * (std::log(t) / (q + 1.0) - 1.0 / ((q + 1.0) * (q + 1.0)));
    };
    return primitive(b) - primitive(a);
}

// Integral over [t0, t2] of the quadratic through (t0,f0),(t1,f1),(t2,f2)
// against the weight t^c (optionally t^c log t).
double quadratic_cell(double t0, double t1, double t2, double f0, double f1,
                      double f2, double c, bool log_moment) {
    double m0 = log_moment ? power_log_moment(t0, t2, c) : power_moment(t0, t2, c);
    double m1 = log_moment ? power_log_moment(t0, t2, c + 1.0) : power_moment(t0, t2, c + 1.0);
    double m2 = log_moment ? power_log_moment(t0, t2, c + 2.0) : power_moment(t0, t2, c + 2.0);
    // Lagrange basis expanded in monomials
    double d0 = (t0 - t1) * (t0 - t2);
    double d1 = (t1 - t0) * (t1 - t2);
    double d2 = (t2 - t0) * (t2 - t1);
    double i0 = (m2 - (t1 + t2) * m1 + t1 * t2 * m0) / d0;
    double i1 = (m2 - (t0 + t2) * m1 + t0 * t2 * m0) / d1;
    double i2 = (m2 - (t0 + t1) * m1 + t0 * t1 * m0) / d2;
    return f0 * i0 + f1 * i1 + f2 * i2;
}

// Linear variant for a leftover single cell.
double linear_cell(double t0, double t1, double f0, double f1, double c,
                   bool log_moment) {
    double m0 = log_moment ? power_log_moment(t0, t1, c) : power_moment(t0, t1, c);
    double m1 = log_moment ? power_log_moment(t0, t1, c + 1.0) : power_moment(t0, t1, c + 1.0);
    double slope = (f1 - f0) / (t1 - t0);
    return f0 * m0 + slope * (m1 - t0 * m0);
}

} // namespace

double integrate_weighted(std::span<const double> values, const RadialGrid& grid,
                          const WeightSpec& spec, double s, int N,
                          bool singular_divisor, bool log_weight) {
    const std::size_t n = grid.size();
    if (values.size() != n)
        throw std::invalid_argument("integrate_weighted: field size does not match grid");
    if (std::fabs(grid.domain_end() - 1.0) > 1e-12)
        throw std::invalid_argument("integrate_weighted: weighted integrals live on [0, 1]");
    if (N < 1)
        throw std::invalid_argument("integrate_weighted: N must be >= 1");

    double c = spec.boundary_exponent(s);
    if (singular_divisor)
        c -= 1.0;
    if (!(c > -1.0))
        throw std::invalid_argument(
            "integrate_weighted: effective endpoint exponent " + std::to_string(c) +
            " <= -1, integral diverges");

    const double h = grid.spacing();
    const auto& y = grid.nodes();

    // Split: endpoint-analytic treatment on [y_m, 1], Simpson on [0, y_m].
    // The analytic region always covers at least 8 cells and at least a
    // quarter of the domain, so the weight's unbounded derivatives near y=1
    // never meet a polynomial quadrature rule.
    std::size_t m;
    if (n - 1 <= 8) {
        m = 0;
    } else {
        std::size_t by_cells = n - 1 - 8;
        std::size_t by_fraction = static_cast<std::size_t>(0.75 / h);
        m = std::min(by_cells, by_fraction);
    }

    auto smooth_factor = [&](std::size_t i) {
        return values[i] * std::pow(y[i], N - 1);
    };

    // Interior: composite Simpson of the full integrand, pairing cells from
    // the right so any leftover cell sits at the origin.
    double interior = 0.0;
    if (m > 0) {
        auto integrand = [&](std::size_t i) {
            double one_minus = 1.0 - y[i] * y[i];
            double value = smooth_factor(i) * std::pow(one_minus, c);
            if (log_weight)
                value *= std::log(one_minus);
            return value;
        };
        std::size_t first = m % 2; // 1 -> leftover cell [y_0, y_1]
        if (first == 1)
            interior += 0.5 * h * (integrand(0) + integrand(1));
        for (std::size_t i = first; i + 2 <= m; i += 2)
            interior += h / 3.0 * (integrand(i) + 4.0 * integrand(i + 1) + integrand(i + 2));
    }

    // Tail in t = 1 - y: integrand = phi(t) t^c [log t + log(2-t)] with
    // phi(t) = G(1-t) (2-t)^c smooth up to t = 0.
    double tail = 0.0;
    {
        std::size_t cells = (n - 1) - m; // tail cell count, t in [0, cells*h]
        std::vector<double> t(cells + 1), phi(cells + 1);
        for (std::size_t k = 0; k <= cells; ++k) {
            std::size_t i = n - 1 - k;
            t[k] = 1.0 - y[i];
            phi[k] = smooth_factor(i) * std::pow(2.0 - t[k], c);
        }
        t[0] = 0.0;

        auto accumulate = [&](bool log_moment) {
            // against t^c (log_moment=false) or t^c log t (true); the factor
            // log(2-t) is folded into the smooth part for the plain moment
            double acc = 0.0;
            auto part = [&](std::size_t k) {
                return (log_weight && !log_moment) ? phi[k] * std::log(2.0 - t[k])
                                                   : phi[k];
            };
            std::size_t k = 0;
            for (; k + 2 <= cells; k += 2)
                acc += quadratic_cell(t[k], t[k + 1], t[k + 2], part(k), part(k + 1),
                                      part(k + 2), c, log_moment);
            if (k + 1 <= cells)
                acc += linear_cell(t[k], t[k + 1], part(k), part(k + 1), c, log_moment);
            return acc;
        };

        tail += accumulate(false);
        if (log_weight)
            tail += accumulate(true);
    }

    return interior + tail;
}

std::vector<double> radial_derivative(std::span<const double> values,
                                      const RadialGrid& grid, bool even_at_origin) {
    const std::size_t n = grid.size();
    if (values.size() != n)
        throw std::invalid_argument("radial_derivative: field size does not match grid");
    if (n < 3)
        throw std::invalid_argument("radial_derivative: need at least 3 nodes");
    const double h = grid.spacing();
    std::vector<double> d(n);
    d[0] = even_at_origin ? 0.0
                          : (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
    d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    return d;
}

} // namespace conwave
