#include "conwave/physical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace conwave {

double PhysicalState::sup_norm() const {
    double m = 0.0;
    for (double v : u)
        m = std::max(m, std::fabs(v));
    return m;
}

PhysicalState PhysicalTrajectory::state_at(std::size_t snapshot) const {
    if (snapshot >= snapshot_times.size())
        throw std::out_of_range("PhysicalTrajectory: snapshot index out of range");
    return PhysicalState{snapshot_times[snapshot], grid, snapshots_u[snapshot],
                         snapshots_ut[snapshot], true};
}

std::size_t PhysicalTrajectory::nearest_snapshot(double t) const {
    if (snapshot_times.empty())
        throw std::runtime_error("PhysicalTrajectory: no snapshots stored");
    auto it = std::lower_bound(snapshot_times.begin(), snapshot_times.end(), t);
    if (it == snapshot_times.begin())
        return 0;
    if (it == snapshot_times.end())
        return snapshot_times.size() - 1;
    std::size_t hi = static_cast<std::size_t>(it - snapshot_times.begin());
    return (snapshot_times[hi] - t < t - snapshot_times[hi - 1]) ? hi : hi - 1;
}

namespace {

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x))
            return false;
    return true;
}

// Time derivative of the first-order system (u, v = du/dt).
void system_rhs(const RadialGrid& grid, const ModelParams& params,
                std::span<const double> u, std::span<const double> v,
                std::span<double> du, std::span<double> dv) {
    const std::size_t n = grid.size();
    const double h = grid.spacing();
    const double R = grid.domain_end();
    const int N = params.N;
    const double p = params.p;

    for (std::size_t i = 0; i < n; ++i)
        du[i] = v[i];

    auto source = [&](double uu) {
        return std::pow(std::fabs(uu), p - 1.0) * uu + f_eval(uu, params);
    };

    // r = 0: even symmetry, Laplacian limit N u_rr
    dv[0] = static_cast<double>(N) * 2.0 * (u[1] - u[0]) / (h * h) + source(u[0]);

    for (std::size_t i = 1; i + 1 < n; ++i) {
        double r = grid.node(i);
        double urr = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
        double ur = (u[i + 1] - u[i - 1]) / (2.0 * h);
        dv[i] = urr + static_cast<double>(N - 1) / r * ur + source(u[i]);
    }

    // outer boundary: outgoing characteristic, v_t = -v_r - (N-1)/(2R) v
    double vr = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    dv[n - 1] = -vr - 0.5 * static_cast<double>(N - 1) / R * v[n - 1];
}

} // namespace

PhysicalState step_physical(const PhysicalState& state, double dt,
                            const ModelParams& params) {
    if (!state.alive)
        throw std::invalid_argument("step_physical: state is not alive");
    if (!(dt > 0.0) || dt > state.grid.spacing())
        throw std::invalid_argument("step_physical: dt must satisfy 0 < dt <= cfl * spacing");

    const std::size_t n = state.grid.size();
    std::vector<double> k1u(n), k1v(n), k2u(n), k2v(n), k3u(n), k3v(n), k4u(n), k4v(n);
    std::vector<double> tu(n), tv(n);

    system_rhs(state.grid, params, state.u, state.ut, k1u, k1v);
    for (std::size_t i = 0; i < n; ++i) {
        tu[i] = state.u[i] + 0.5 * dt * k1u[i];
        tv[i] = state.ut[i] + 0.5 * dt * k1v[i];
    }
    system_rhs(state.grid, params, tu, tv, k2u, k2v);
    for (std::size_t i = 0; i < n; ++i) {
        tu[i] = state.u[i] + 0.5 * dt * k2u[i];
        tv[i] = state.ut[i] + 0.5 * dt * k2v[i];
    }
    system_rhs(state.grid, params, tu, tv, k3u, k3v);
    for (std::size_t i = 0; i < n; ++i) {
        tu[i] = state.u[i] + dt * k3u[i];
        tv[i] = state.ut[i] + dt * k3v[i];
    }
    system_rhs(state.grid, params, tu, tv, k4u, k4v);

    PhysicalState next{state.t + dt, state.grid, std::vector<double>(n),
                       std::vector<double>(n), true};
    for (std::size_t i = 0; i < n; ++i) {
        next.u[i] = state.u[i] + dt / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i]);
        next.ut[i] = state.ut[i] + dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
    }

    if (!all_finite(next.u) || !all_finite(next.ut)) {
        // blown past representable range: freeze the last finite data
        next.u = state.u;
        next.ut = state.ut;
        next.alive = false;
    }
    return next;
}

namespace {

struct LinearFit {
    double slope;
    double intercept; // at the centered abscissa
    double mean_x;
    double rms_residual;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx;
        sxx += dx * dx;
        sxy += dx * (y[i] - my);
    }
    double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (my + slope * (x[i] - mx));
        rss += r * r;
    }
    return {slope, my, mx, std::sqrt(rss / static_cast<double>(n))};
}

BlowupEstimate fit_blowup_time(std::span<const double> times,
                               std::span<const double> amps, double p) {
    const std::size_t n = times.size();
    if (n < 4)
        throw std::runtime_error("fit_blowup_time: too few samples");
    double amp_end = amps[n - 1];
    std::size_t begin = n - 1;
    while (begin > 0 && amps[begin - 1] >= 0.1 * amp_end)
        --begin;
    if (n - begin < 4)
        begin = n - 4;

    std::vector<double> x, y;
    x.reserve(n - begin);
    y.reserve(n - begin);
    double exponent = -(p - 1.0) / 2.0;
    for (std::size_t i = begin; i < n; ++i) {
        x.push_back(times[i]);
        y.push_back(std::pow(amps[i], exponent));
    }
    LinearFit fit = fit_line(x, y);
    double mean_abs_y = 0.0;
    for (double yy : y)
        mean_abs_y += std::fabs(yy);
    mean_abs_y /= static_cast<double>(y.size());

    BlowupEstimate estimate;
    estimate.method = FitMethod::threshold_fit;
    estimate.fit_window_begin = x.front();
    estimate.fit_window_end = x.back();
    estimate.residual = fit.rms_residual / std::max(mean_abs_y, 1e-300);

    double t_last = times[n - 1];
    if (fit.slope < 0.0) {
        estimate.T = fit.mean_x - fit.intercept / fit.slope;
    } else {
        estimate.T = std::numeric_limits<double>::quiet_NaN();
    }
    if (!(estimate.T > t_last)) {
        // degenerate fit: place T one rate-unit past the last sample
        estimate.T = t_last + y.back();
        if (!(estimate.T > t_last))
            estimate.T = std::nexttoward(t_last, std::numeric_limits<double>::max());
    }
    return estimate;
}

} // namespace

BlowupRun run_until_blowup(const PhysicalState& initial, const ModelParams& params,
                           const PhysicalSolverOptions& options) {
    if (!(options.threshold > 0.0))
        throw std::invalid_argument("run_until_blowup: threshold must be positive");

    PhysicalTrajectory traj{initial.grid, {}, {}, {}, {}, {}, false};
    PhysicalState state = initial;
    const double h = initial.grid.spacing();
    const double kappa = kappa0(params);
    const double shrink_exp = -(params.p - 1.0) / 2.0;

    // compensated time accumulation; dt can underflow t's ulp near blow-up
    double t_comp = 0.0;

    std::size_t step = 0;
    auto record = [&](const PhysicalState& s) {
        traj.step_times.push_back(s.t);
        traj.step_sup_norms.push_back(s.sup_norm());
        if (step % options.snapshot_stride == 0) {
            traj.snapshot_times.push_back(s.t);
            traj.snapshots_u.push_back(s.u);
            traj.snapshots_ut.push_back(s.ut);
        }
    };
    record(state);

    while (state.alive && state.t < options.horizon) {
        double amp = traj.step_sup_norms.back();
        if (amp >= options.threshold) {
            traj.blew_up = true;
            break;
        }
        double dt = options.cfl * h;
        if (amp > kappa)
            dt = std::min(dt, options.shrink_factor * std::pow(amp / kappa, shrink_exp));

        PhysicalState next = step_physical(state, dt, params);
        // Kahan update of t against the accumulated compensation
        double yk = dt - t_comp;
        double tk = state.t + yk;
        t_comp = (tk - state.t) - yk;
        next.t = tk;

        state = std::move(next);
        ++step;
        record(state);
        if (!state.alive) {
            traj.blew_up = true;
            break;
        }
    }

    BlowupRun run{std::move(traj), std::nullopt};
    if (run.trajectory.blew_up)
        run.estimate = fit_blowup_time(run.trajectory.step_times,
                                       run.trajectory.step_sup_norms, params.p);
    return run;
}

std::vector<PhysicalState> extract_cone_trace(const PhysicalTrajectory& trajectory,
                                              double T0, std::span<const double> times) {
    std::vector<PhysicalState> out;
    out.reserve(times.size());
    const auto& nodes = trajectory.grid.nodes();
    const double h = trajectory.grid.spacing();

    for (double t : times) {
        if (!(t < T0))
            throw std::invalid_argument("extract_cone_trace: requested time >= T0");
        // latest snapshot not after t, so the cut stays causal
        auto it = std::upper_bound(trajectory.snapshot_times.begin(),
                                   trajectory.snapshot_times.end(), t);
        if (it == trajectory.snapshot_times.begin())
            throw std::invalid_argument("extract_cone_trace: no snapshot at or before time");
        std::size_t snap = static_cast<std::size_t>(it - trajectory.snapshot_times.begin()) - 1;
        double ts = trajectory.snapshot_times[snap];
        double radius = T0 - ts;

        std::size_t count = 0;
        while (count < nodes.size() && nodes[count] < radius)
            ++count;
        if (count < 2)
            throw std::invalid_argument("extract_cone_trace: cone contains fewer than 2 nodes");

        RadialGrid cone(count, static_cast<double>(count - 1) * h);
        std::vector<double> u(trajectory.snapshots_u[snap].begin(),
                              trajectory.snapshots_u[snap].begin() + count);
        std::vector<double> ut(trajectory.snapshots_ut[snap].begin(),
                               trajectory.snapshots_ut[snap].begin() + count);
        out.push_back(PhysicalState{ts, std::move(cone), std::move(u), std::move(ut), true});
    }
    return out;
}

PhysicalState make_constant_state(const RadialGrid& grid, double u0, double u1) {
    return PhysicalState{0.0, grid, std::vector<double>(grid.size(), u0),
                         std::vector<double>(grid.size(), u1), true};
}

PhysicalState make_zero_state(const RadialGrid& grid) {
    return make_constant_state(grid, 0.0, 0.0);
}

PhysicalState make_gaussian_state(const RadialGrid& grid, const ModelParams& params,
                                  double amplitude_factor, double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("make_gaussian_state: sigma must be positive");
    double amp = amplitude_factor * kappa0(params);
    PhysicalState state{0.0, grid, std::vector<double>(grid.size()),
                        std::vector<double>(grid.size()), true};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double r = grid.node(i);
        state.u[i] = amp * std::exp(-r * r / (sigma * sigma));
        state.ut[i] = state.u[i];
    }
    return state;
}

PhysicalState make_self_similar_state(const RadialGrid& grid, const ModelParams& params,
                                      double T_ref, double eps, double sigma) {
    if (!(T_ref > 0.0) || !(sigma > 0.0))
        throw std::invalid_argument("make_self_similar_state: T_ref and sigma must be positive");
    double p = params.p;
    double base = kappa0(params) * std::pow(T_ref, -2.0 / (p - 1.0));
    double base_t = 2.0 / (p - 1.0) * base / T_ref;
    PhysicalState state{0.0, grid, std::vector<double>(grid.size()),
                        std::vector<double>(grid.size()), true};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double r = grid.node(i);
        double bump = 1.0 + eps * std::exp(-r * r / (sigma * sigma));
        state.u[i] = base * bump;
        state.ut[i] = base_t * bump;
    }
    return state;
}

} // namespace conwave
