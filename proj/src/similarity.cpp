#include "conwave/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conwave/interp.hpp"

namespace conwave {

SimilarityState to_similarity(const PhysicalState& phys, double T0,
                              const ModelParams& params, const RadialGrid& target) {
    if (!(phys.t < T0))
        throw std::invalid_argument("to_similarity: snapshot time must precede T0");
    if (std::fabs(target.domain_end() - 1.0) > 1e-12)
        throw std::invalid_argument("to_similarity: target grid must span [0, 1]");
    const double dt = T0 - phys.t;
    if (phys.grid.domain_end() < dt * (1.0 - 1e-13))
        throw std::invalid_argument("to_similarity: physical grid does not cover the cone");

    const double p = params.p;
    const double scale = std::pow(dt, 2.0 / (p - 1.0));
    CubicInterpolant u_of_r(phys.grid.nodes(), phys.u);
    CubicInterpolant ut_of_r(phys.grid.nodes(), phys.ut);

    SimilarityState state{-std::log(dt), target, std::vector<double>(target.size()),
                          std::vector<double>(target.size()), true};
    for (std::size_t i = 0; i < target.size(); ++i)
        state.w[i] = scale * u_of_r(target.node(i) * dt);

    std::vector<double> wy = radial_derivative(state.w, target);
    for (std::size_t i = 0; i < target.size(); ++i) {
        double y = target.node(i);
        state.ws[i] = -2.0 / (p - 1.0) * state.w[i] - y * wy[i] +
                      scale * dt * ut_of_r(y * dt);
    }
    return state;
}

double similarity_perturbation(double w, double s, const ModelParams& params) {
    if (!params.perturbation_on || w == 0.0)
        return 0.0;
    const double p = params.p;
    double aw = std::fabs(w);
    // log(2 + e^(4s/(p-1)) w^2), evaluated through its logarithm
    double b = 4.0 * s / (p - 1.0) + 2.0 * std::log(aw);
    double ell = (b > 36.0) ? b + std::log1p(2.0 * std::exp(-b))
                            : std::log(2.0 + std::exp(b));
    return params.M * std::pow(aw, p) / std::pow(ell, params.a);
}

double similarity_perturbation_antiderivative(double w, double s,
                                              const ModelParams& params) {
    if (!params.perturbation_on || w == 0.0)
        return 0.0;
    const double p = params.p;
    double arg_log = 2.0 * s / (p - 1.0) + std::log(std::fabs(w));
    if (arg_log > 700.0)
        throw std::runtime_error("similarity_perturbation_antiderivative: amplitude overflow");
    double amplitude = std::copysign(std::exp(arg_log), w);
    return std::exp(-2.0 * (p + 1.0) * s / (p - 1.0)) * F_eval(amplitude, params);
}

namespace {

double reaction(double w, double v, double s, const ModelParams& params) {
    const double p = params.p;
    return -(p + 3.0) / (p - 1.0) * v -
           2.0 * (p + 1.0) / ((p - 1.0) * (p - 1.0)) * w +
           std::pow(std::fabs(w), p - 1.0) * w + similarity_perturbation(w, s, params);
}

} // namespace

double acceleration_eta_form(double y, double w, double wy, double wyy, double v,
                             double vy, double s, const ModelParams& params,
                             double eta) {
    if (!(y > 0.0) || !(y < 1.0))
        throw std::invalid_argument("acceleration_eta_form: needs 0 < y < 1");
    const double omy2 = 1.0 - y * y;
    const double rho_ratio = -2.0 * eta * y / omy2; // d/dy log rho_eta
    double divergence =
        omy2 * wyy +
        wy * (static_cast<double>(params.N - 1) / y * omy2 + rho_ratio * omy2 - 2.0 * y);
    return divergence + 2.0 * eta * y * wy - 2.0 * y * vy + reaction(w, v, s, params);
}

double acceleration_plain_form(double y, double w, double wy, double wyy, double v,
                               double vy, double s, const ModelParams& params) {
    if (!(y > 0.0) || !(y < 1.0))
        throw std::invalid_argument("acceleration_plain_form: needs 0 < y < 1");
    const double omy2 = 1.0 - y * y;
    double divergence =
        omy2 * wyy + wy * (static_cast<double>(params.N - 1) / y * omy2 - 2.0 * y);
    return divergence - 2.0 * y * vy + reaction(w, v, s, params);
}

void similarity_rhs(const SimilarityState& state, const ModelParams& params,
                    std::span<double> dw, std::span<double> dv) {
    const std::size_t n = state.grid.size();
    if (n < 5)
        throw std::invalid_argument("similarity_rhs: need at least 5 nodes");
    const double h = state.grid.spacing();
    const auto& w = state.w;
    const auto& v = state.ws;
    const double s = state.s;
    const int N = params.N;

    for (std::size_t i = 0; i < n; ++i)
        dw[i] = v[i];

    // y = 0: symmetric Laplacian limit, no transport
    dv[0] = static_cast<double>(N) * 2.0 * (w[1] - w[0]) / (h * h) +
            reaction(w[0], v[0], s, params);

    for (std::size_t i = 1; i + 1 < n; ++i) {
        double y = state.grid.node(i);
        double omy2 = 1.0 - y * y;
        double wyy = (w[i + 1] - 2.0 * w[i] + w[i - 1]) / (h * h);
        double wy = (w[i + 1] - w[i - 1]) / (2.0 * h);
        double vy;
        if (i >= 2) {
            // transport speed 2y > 0: second-order upwind from the left
            vy = (3.0 * v[i] - 4.0 * v[i - 1] + v[i - 2]) / (2.0 * h);
        } else {
            vy = (v[i + 1] - v[i - 1]) / (2.0 * h);
        }
        dv[i] = omy2 * wyy +
                wy * (static_cast<double>(N - 1) / y * omy2 - 2.0 * y) -
                2.0 * y * vy + reaction(w[i], v[i], s, params);
    }

    // y = 1: the operator degenerates; one-sided interior stencils only
    double wy_end = (3.0 * w[n - 1] - 4.0 * w[n - 2] + w[n - 3]) / (2.0 * h);
    double vy_end = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    dv[n - 1] = -2.0 * wy_end - 2.0 * vy_end + reaction(w[n - 1], v[n - 1], s, params);
}

SimilarityState step_similarity(const SimilarityState& state, double ds,
                                const ModelParams& params, double eta_for_form) {
    if (!state.valid)
        throw std::invalid_argument("step_similarity: state is not valid");
    if (!(ds > 0.0) || ds > 0.5 * state.grid.spacing())
        throw std::invalid_argument("step_similarity: ds must satisfy 0 < ds <= cfl * spacing");
    if (!(eta_for_form >= 0.0) || !(eta_for_form < 1.0))
        throw std::invalid_argument("step_similarity: eta_for_form must lie in [0, 1)");
    // Every eta assembles the same expanded operator, so the discrete flow
    // below is shared; see acceleration_eta_form / acceleration_plain_form.

    const std::size_t n = state.grid.size();
    std::vector<double> k1w(n), k1v(n), k2w(n), k2v(n), k3w(n), k3v(n), k4w(n), k4v(n);
    SimilarityState stage{state.s, state.grid, std::vector<double>(n),
                          std::vector<double>(n), true};

    similarity_rhs(state, params, k1w, k1v);
    stage.s = state.s + 0.5 * ds;
    for (std::size_t i = 0; i < n; ++i) {
        stage.w[i] = state.w[i] + 0.5 * ds * k1w[i];
        stage.ws[i] = state.ws[i] + 0.5 * ds * k1v[i];
    }
    similarity_rhs(stage, params, k2w, k2v);
    for (std::size_t i = 0; i < n; ++i) {
        stage.w[i] = state.w[i] + 0.5 * ds * k2w[i];
        stage.ws[i] = state.ws[i] + 0.5 * ds * k2v[i];
    }
    similarity_rhs(stage, params, k3w, k3v);
    stage.s = state.s + ds;
    for (std::size_t i = 0; i < n; ++i) {
        stage.w[i] = state.w[i] + ds * k3w[i];
        stage.ws[i] = state.ws[i] + ds * k3v[i];
    }
    similarity_rhs(stage, params, k4w, k4v);

    SimilarityState next{state.s + ds, state.grid, std::vector<double>(n),
                         std::vector<double>(n), true};
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
        next.w[i] = state.w[i] +
                    ds / 6.0 * (k1w[i] + 2.0 * k2w[i] + 2.0 * k3w[i] + k4w[i]);
        next.ws[i] = state.ws[i] +
                     ds / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        finite = finite && std::isfinite(next.w[i]) && std::isfinite(next.ws[i]);
    }
    if (!finite) {
        next.w = state.w;
        next.ws = state.ws;
        next.valid = false;
    }
    return next;
}

double boundary_velocity(const SimilarityState& state) {
    const auto& v = state.ws;
    const std::size_t n = v.size();
    if (n < 5)
        throw std::invalid_argument("boundary_velocity: need at least 5 nodes");
    // cubic extrapolation one spacing beyond the last four interior nodes
    return 4.0 * v[n - 2] - 6.0 * v[n - 3] + 4.0 * v[n - 4] - v[n - 5];
}

SimilarityState make_steady_similarity_state(const RadialGrid& grid,
                                             const ModelParams& params) {
    return SimilarityState{1.0, grid, std::vector<double>(grid.size(), kappa0(params)),
                           std::vector<double>(grid.size(), 0.0), true};
}

SimilarityState make_zero_similarity_state(const RadialGrid& grid) {
    return SimilarityState{1.0, grid, std::vector<double>(grid.size(), 0.0),
                           std::vector<double>(grid.size(), 0.0), true};
}

} // namespace conwave
