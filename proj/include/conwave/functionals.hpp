#pragma once

#include <array>
#include <span>
#include <utility>

#include "conwave/model.hpp"
#include "conwave/similarity.hpp"

namespace conwave {

struct FunctionalConfig {
    double eta = 0.5;   // boundary weight exponent, (0, 1]
    double b = 1.5;     // dynamic weight exponent, (1, a)
    double theta = 0.0; // additive constant of the exponentially weighted family
    double sigma = 0.0; // additive constant of the polynomially weighted family

    void validate(const ModelParams& params) const;
};

// Graded pieces of a weighted energy: quadratic terms scale as lambda^2 under
// (w, ws) -> (lambda w, lambda ws); the potential carries lambda^(p+1).
struct EnergyTerms {
    double kinetic = 0.0;
    double gradient = 0.0;
    double mass = 0.0;
    double potential = 0.0;
    double perturbation = 0.0;

    double total() const { return kinetic + gradient + mass + potential + perturbation; }
};

// Weighted energy over the unit ball against (1-y^2)^eta; the radial
// reduction carries the sphere area factor. In the radial case the
// anisotropic gradient |grad w|^2 - (y . grad w)^2 reduces to (1-y^2)(dw/dy)^2.
EnergyTerms eval_E_eta_terms(const SimilarityState& state, const FunctionalConfig& config,
                             const ModelParams& params);
double eval_E_eta(const SimilarityState& state, const FunctionalConfig& config,
                  const ModelParams& params);

struct GFamily {
    double E_eta, J_eta, H_eta, G_eta;
};

// J_eta = -eta int w ws rho_eta + (N eta / 2) int w^2 rho_eta (ball);
// H_eta = E_eta + J_eta; G_eta = (H_eta + theta) e^(-eta (p+3) s / 2).
GFamily eval_G_family(const SimilarityState& state, const FunctionalConfig& config,
                      const ModelParams& params);

struct KLFamily {
    double E, J, K, L;
};

// Radial-line functionals against the time-dependent weight
// phi(y,s) = y^(N-1) (1-y^2)^(s^-b); requires s >= 1.
// J = -s^-b int w ws phi; K = E + J;
// L = exp((p+3) / (2(b-1) s^(b-1))) K + sigma / s^(b-1).
KLFamily eval_KL_family(const SimilarityState& state, const FunctionalConfig& config,
                        const ModelParams& params);

// N_eta = int_0^1 [ (y dw/dy)^2 + (y dw/dy) ws ] Psi_eta dy,
// Psi_eta = y^(N-1) (1-y^2)^eta.
double eval_N_eta(const SimilarityState& state, const FunctionalConfig& config,
                  const ModelParams& params);

// Unweighted radial energy E0 (weight y^(N-1)) and its corrected companion
// H0 = E0 + s^(-(a-b-1)/2). Requires s >= 1, a > 2 and b < a - 1 so the
// correction decays.
std::pair<double, double> eval_E0_H0(const SimilarityState& state,
                                     const ModelParams& params, double b);

// Everything evaluated at one similarity time, plus the norms the growth and
// rate checks consume.
struct FunctionalReport {
    double s = 0.0;
    // ball convention (sphere-area factor applied)
    double E_eta = 0.0, J_eta = 0.0, H_eta = 0.0, G_eta = 0.0;
    // radial-line convention
    double E = 0.0, J = 0.0, K = 0.0, L = 0.0;
    double N_eta = 0.0;
    double E0 = 0.0, H0 = 0.0;
    // dissipation and norm integrands (radial line, no sphere factor)
    double diss_weighted_vel = 0.0; // int ws^2 rho_eta/(1-y^2) y^(N-1)
    double diss_phi_vel = 0.0;      // int ws^2 phi/(1-y^2)
    double grad_phi = 0.0;          // int (dw/dy)^2 (1-y^2) phi
    double norm_grad_w = 0.0;       // int (dw/dy)^2 y^(N-1)
    double norm_w_p1 = 0.0;         // int |w|^(p+1) y^(N-1)
    double w_p1_singular = 0.0;     // int |w|^(p+1) rho_eta/(1-y^2) y^(N-1)
    double norm_H1L2 = 0.0;         // ||w||_H1(0,1) + ||ws||_L2(0,1), plain measure
    double boundary_vel = 0.0;      // ws at y=1
};

FunctionalReport evaluate_report(const SimilarityState& state,
                                 const FunctionalConfig& config,
                                 const ModelParams& params);

// Exact-identity residuals, measured on a window of at least five
// consecutive states at uniform s spacing: the (fourth-order) centered
// difference of the functional versus its closed-form rate of change,
// maximised over the window interior. Second-order small on smooth
// trajectories, quadrature-floor small on closed-form ones.

// d/ds E_eta = -2 eta int ws^2 y^2 rho_eta/(1-y^2) + 2 eta int ws (y dw/dy) rho_eta
//              + perturbation source (ball convention).
double identity_residual_E_eta(std::span<const SimilarityState> window,
                               const FunctionalConfig& config, const ModelParams& params);

// d/ds E0 = -(ws at y=1)^2 + perturbation source (radial line).
double identity_residual_E0(std::span<const SimilarityState> window,
                            const ModelParams& params);

// d/ds N_eta equals the ten-term right-hand side produced by pairing the
// flow with y dw/dy: gradient, transport, reaction, potential and
// perturbation moments, with and without the y^2/(1-y^2) factor.
double identity_residual_pohozaev(std::span<const SimilarityState> window,
                                  const FunctionalConfig& config, const ModelParams& params);

// The six correction terms entering d/ds of the phi-weighted energy: the
// perturbation source plus the log(1-y^2)-weighted potential, kinetic,
// gradient, mass and antiderivative moments produced by the time dependence
// of the weight.
std::array<double, 6> phi_energy_drift_terms(const SimilarityState& state,
                                             const ModelParams& params, double b);

// d/ds E(w(s), s) = -(2/s^b) int ws^2 y^2 phi/(1-y^2) + (2/s^b) int ws (dw/dy) y phi
//                   + sum of the six drift terms.
double identity_residual_E_phi(std::span<const SimilarityState> window,
                               const ModelParams& params, double b);

} // namespace conwave
