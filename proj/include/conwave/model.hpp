#pragma once

#include <stdexcept>

namespace conwave {

// Problem definition: spatial dimension, power exponent, and the switchable
// logarithmically damped perturbation f(u) = M |u|^p / log^a(2 + u^2).
struct ModelParams {
    int N = 3;                    // spatial dimension, N >= 2
    double p = 3.0;               // power exponent
    double a = 3.0;               // perturbation damping exponent, a > 1
    double M = 1.0;               // perturbation scale
    bool perturbation_on = true;

    // Conformal problem: p = 1 + 4/(N-1).
    static ModelParams conformal(int N, double a, bool perturbation_on = true);

    void validate() const;
};

// Returns 1 + 4/(N-1); rejects N < 2.
double conformal_exponent(int N);

// Perturbation f(u) = M |u|^p / log^a(2 + u^2), or 0 when switched off.
// Even in u, nonnegative, finite for finite u.
double f_eval(double u, const ModelParams& params);

// Antiderivative F(u) = integral of f from 0 to u (odd, vanishes at 0).
// Adaptive Gauss-Kronrod to 1e-12 relative tolerance, with results memoized
// at checkpoints on a geometric ladder of |u| so that repeated evaluation
// inside spatial integrals only integrates short segments. Thread-safe:
// the checkpoint table is grown under a lock.
double F_eval(double u, const ModelParams& params);

// Amplitude of the spatially flat steady state of the unperturbed similarity
// flow: kappa^(p-1) = 2(p+1)/(p-1)^2. Requires p > 1.
double kappa0(const ModelParams& params);

struct ReferenceConstants {
    explicit ReferenceConstants(const ModelParams& params);

    double kappa0; // flat steady-state amplitude
    double p;

    // Admissible exponential growth slope for a boundary weight exponent eta.
    double slope_bound(double eta) const { return eta * (p + 3.0) / 2.0; }
};

} // namespace conwave
