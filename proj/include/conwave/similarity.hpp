#pragma once

#include <span>
#include <vector>

#include "conwave/grid.hpp"
#include "conwave/model.hpp"
#include "conwave/physical.hpp"

namespace conwave {

// Solution in similarity variables: w(y, s) on y in [0, 1] with
// y = r/(T0 - t), s = -log(T0 - t), w = (T0 - t)^(2/(p-1)) u.
struct SimilarityState {
    double s = 0.0;
    RadialGrid grid; // on [0, 1]
    std::vector<double> w;
    std::vector<double> ws;
    bool valid = true;
};

// Transform a physical snapshot into the blow-up frame of (0, T0), sampling
// onto `target` via monotone cubic interpolation. The time derivative follows
// from the chain rule:
//   ws = -2/(p-1) w - y dw/dy + (T0 - t)^(2/(p-1)+1) du/dt,
// with dw/dy from centered differences of the transformed profile.
// Rejects snapshots whose grid does not cover the backward light cone.
SimilarityState to_similarity(const PhysicalState& phys, double T0,
                              const ModelParams& params, const RadialGrid& target);

// Perturbation term of the similarity flow,
//   e^(-2ps/(p-1)) f(e^(2s/(p-1)) w),
// evaluated without forming the huge intermediate amplitude.
double similarity_perturbation(double w, double s, const ModelParams& params);

// Same for the antiderivative: e^(-2(p+1)s/(p-1)) F(e^(2s/(p-1)) w).
double similarity_perturbation_antiderivative(double w, double s,
                                              const ModelParams& params);

// Pointwise acceleration of the similarity flow from analytic derivatives,
// assembled in the form factored through the boundary weight (1-y^2)^eta
// (divergence against y^(N-1) rho_eta plus the drift 2 eta y dw/dy).
// Defined for 0 < y < 1.
double acceleration_eta_form(double y, double w, double wy, double wyy, double v,
                             double vy, double s, const ModelParams& params,
                             double eta);

// Same acceleration assembled with the plain y^(N-1) divergence. The two
// assemblies agree identically; they differ only in rounding.
double acceleration_plain_form(double y, double w, double wy, double wyy, double v,
                               double vy, double s, const ModelParams& params);

// Discrete right-hand side of the first-order system (w, v = ws): centered
// second-order stencils, upwinded differencing of the -2y dv/dy transport,
// the symmetric Laplacian limit at y=0, and one-sided stencils at y=1 where
// the operator degenerates (no boundary condition is imposed there).
void similarity_rhs(const SimilarityState& state, const ModelParams& params,
                    std::span<double> dw, std::span<double> dv);

// One classical Runge-Kutta step. Requires ds <= cfl * spacing with the
// characteristic speeds -y +- 1 bounded by 2 in magnitude; the four-stage
// update keeps the centered wave block inside the stability region, which a
// two-stage explicit scheme cannot do over long windows. The eta_for_form
// knob selects which algebraic assembly of the right-hand side is advanced;
// every choice produces the same flow (the assemblies are identical after
// expansion, see the analytic evaluators above).
SimilarityState step_similarity(const SimilarityState& state, double ds,
                                const ModelParams& params, double eta_for_form = 0.0);

// ws at y=1 by one-sided cubic extrapolation from the interior; reproduces
// polynomials of degree <= 3 exactly.
double boundary_velocity(const SimilarityState& state);

// Flat steady state w = kappa0, ws = 0 (a fixed point when f is off).
SimilarityState make_steady_similarity_state(const RadialGrid& grid,
                                             const ModelParams& params);

SimilarityState make_zero_similarity_state(const RadialGrid& grid);

} // namespace conwave
