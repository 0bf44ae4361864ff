#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "conwave/functionals.hpp"
#include "conwave/grid.hpp"
#include "conwave/model.hpp"

namespace conwave {

struct CheckOutcome {
    std::string name;
    bool passed = false;
    double margin = 0.0; // signed slack, positive = satisfied
    std::map<std::string, double> details;
    std::string note;
};

// Weighted Hardy-type inequality on the unit ball:
//   int h^2 |y|^2 rho_eta/(1-|y|^2) <= 1/eta^2 int |grad h|^2 (1-|y|^2) rho_eta
//                                      + N/eta int h^2 rho_eta.
// h is a radial field on `grid`; pass its exact derivative in `dh` when
// available, otherwise centered differences are used. eta in (0, 1].
CheckOutcome hardy_check(std::span<const double> h, std::span<const double> dh,
                         const RadialGrid& grid, double eta, int N,
                         double tolerance = 1e-8);

enum class MonotoneTarget { G_eta, L, H0 };

struct MonotonicityOptions {
    double burn_in = 2.0;
    double rel_allowance = 1e-4; // per-step allowance relative to the series scale
    double abs_allowance = 0.0;  // calibrated discretization allowance per step
};

// Asserts the selected functional is non-increasing (within the allowance)
// past burn-in. For G_eta and L also fits the largest lambda such that each
// decrement dominates lambda times the corresponding dissipation integral,
// and the smallest theta (resp. sigma) that would make the series monotone;
// these are reported, not asserted.
CheckOutcome monotonicity_check(std::span<const FunctionalReport> reports,
                                MonotoneTarget target, const FunctionalConfig& config,
                                const ModelParams& params,
                                const MonotonicityOptions& options);

enum class GrowthBound {
    exp_ball,     // velocity dissipation and gradient+potential mass over the ball
    exp_singular, // potential mass against rho_eta/(1-y^2)
    poly_radial   // the three dynamic-weight quantities divided by s^b
};

struct GrowthOptions {
    double burn_in = 2.0;
    double slope_tol = 0.1;     // admissible excess over the exponential bound
    std::uint64_t seed = 12345; // residual bootstrap seed
    int bootstrap_samples = 200;
};

// Exponential bounds: OLS slope of log unit-window averages against s must
// not exceed eta (p+3)/2 plus the fit tolerance. Polynomial bound: the
// quantities divided by s^b must show no upward trend at 95% confidence
// (residual bootstrap of the OLS slope).
CheckOutcome growth_bound_check(std::span<const FunctionalReport> reports,
                                GrowthBound bound, double eta_or_b,
                                const ModelParams& params, const GrowthOptions& options);

struct RateWindowOptions {
    double burn_in = 2.0;
    double span = 10.0;      // s window length; <= 0 means everything past burn-in
    double rel_floor = 1e-3; // lower bound as a fraction of the observed maximum
    double abs_floor = 1e-8;
    bool check_frame = false; // flag a mismatch between T0 and the fitted T
    double frame_T0 = 0.0;
    double frame_T_fit = 0.0;
    double frame_tol = 1e-3;
};

// The H1 x L2 norm of (w, ws) on (0,1) must stay inside a fixed positive
// window over the observed range; the window edges are measured and reported.
CheckOutcome rate_window_check(std::span<const FunctionalReport> reports,
                               const RateWindowOptions& options);

// Two-sided rate bound at the spatially flat level: over the last `decades`
// of T - t, the ratio (T-t)^(2/(p-1)) ||u||_inf must stay in a positive
// window. Reports the window and the deviation from the flat steady value.
CheckOutcome ode_rate_check(const ModelParams& params, std::span<const double> times,
                            std::span<const double> sup_norms, double T,
                            double decades = 3.0);

} // namespace conwave
