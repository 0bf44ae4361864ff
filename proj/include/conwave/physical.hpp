#pragma once

#include <optional>
#include <span>
#include <vector>

#include "conwave/grid.hpp"
#include "conwave/model.hpp"

namespace conwave {

// Radial pre-blow-up solution (u, du/dt) at time t. `alive` goes false the
// step an overflow or NaN appears; data is frozen at the last finite state.
struct PhysicalState {
    double t = 0.0;
    RadialGrid grid;
    std::vector<double> u;
    std::vector<double> ut;
    bool alive = true;

    double sup_norm() const;
};

enum class FitMethod { threshold_fit, richardson };

struct BlowupEstimate {
    double T = 0.0;                 // estimated blow-up time, > last alive time
    FitMethod method = FitMethod::threshold_fit;
    double fit_window_begin = 0.0;  // time interval the fit used
    double fit_window_end = 0.0;
    double residual = 0.0;          // RMS relative misfit of the regression
    double cone_slope = 1.0;        // diagnostic cone aperture
};

struct PhysicalSolverOptions {
    double cfl = 0.5;
    double threshold = 1e8;        // sup-norm crossing that triggers the fit
    double horizon = 10.0;         // give up and report non-blow-up past this time
    double shrink_factor = 0.05;   // dt <= shrink_factor at unit amplitude ratio
    std::size_t snapshot_stride = 1;
};

// Stored evolution: full (u, ut) snapshots every `snapshot_stride` accepted
// steps plus the per-step sup-norm trace used by the blow-up fit.
struct PhysicalTrajectory {
    RadialGrid grid;
    std::vector<double> snapshot_times;
    std::vector<std::vector<double>> snapshots_u;
    std::vector<std::vector<double>> snapshots_ut;
    std::vector<double> step_times;
    std::vector<double> step_sup_norms;
    bool blew_up = false;

    PhysicalState state_at(std::size_t snapshot) const;
    std::size_t nearest_snapshot(double t) const;
};

// One explicit time step of the radial wave equation
//   u_tt = u_rr + (N-1)/r u_r + |u|^(p-1) u + f(u)
// with even symmetry at r=0 (the Laplacian limit N u_rr) and an outgoing
// characteristic condition at the outer boundary. Second-order stencils in r,
// classical fourth-order Runge-Kutta in t. Requires dt <= cfl * spacing.
PhysicalState step_physical(const PhysicalState& state, double dt,
                            const ModelParams& params);

struct BlowupRun {
    PhysicalTrajectory trajectory;
    std::optional<BlowupEstimate> estimate; // empty when no blow-up by the horizon
};

// Integrates to numerically detected blow-up, shrinking dt as the amplitude
// grows, and fits T by linear regression of ||u||_inf^(-(p-1)/2) against t
// over the last decade of growth.
BlowupRun run_until_blowup(const PhysicalState& initial, const ModelParams& params,
                           const PhysicalSolverOptions& options);

// Solution restricted to the backward light cone of (r=0, T0): for each
// requested time, the nearest stored snapshot cut to r < T0 - t.
// Rejects times >= T0.
std::vector<PhysicalState> extract_cone_trace(const PhysicalTrajectory& trajectory,
                                              double T0, std::span<const double> times);

// Bundled initial-data families.
PhysicalState make_constant_state(const RadialGrid& grid, double u0, double u1);
PhysicalState make_gaussian_state(const RadialGrid& grid, const ModelParams& params,
                                  double amplitude_factor, double sigma);
PhysicalState make_self_similar_state(const RadialGrid& grid, const ModelParams& params,
                                      double T_ref, double eps, double sigma);
PhysicalState make_zero_state(const RadialGrid& grid);

} // namespace conwave
