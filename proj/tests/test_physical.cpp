#include "doctest.h"

#include <cmath>
#include <vector>

#include "conwave/physical.hpp"

using namespace conwave;

namespace {

// drive the stepper with a fixed dt landing exactly on t_end
PhysicalState march_to(PhysicalState state, double t_end, const ModelParams& params,
                       double cfl = 0.5) {
    double dt_max = cfl * state.grid.spacing();
    auto steps = static_cast<std::size_t>(std::ceil((t_end - state.t) / dt_max));
    double dt = (t_end - state.t) / static_cast<double>(steps);
    for (std::size_t k = 0; k < steps; ++k)
        state = step_physical(state, dt, params);
    return state;
}

// independent scalar oracle for the flat blow-up dynamics u'' = u^p + f(u)
struct ScalarRun {
    std::vector<double> t, amp;
};

ScalarRun scalar_oracle(const ModelParams& params, double u0, double v0,
                        double threshold, double step_scale) {
    double kappa = kappa0(params);
    double u = u0, v = v0, t = 0.0, comp = 0.0;
    ScalarRun run;
    auto acc = [&](double uu) {
        return std::pow(std::fabs(uu), params.p - 1.0) * uu + f_eval(uu, params);
    };
    while (std::fabs(u) < threshold) {
        double dt = step_scale * std::min(1.0, kappa / std::fabs(u));
        double k1u = v, k1v = acc(u);
        double k2u = v + 0.5 * dt * k1v, k2v = acc(u + 0.5 * dt * k1u);
        double k3u = v + 0.5 * dt * k2v, k3v = acc(u + 0.5 * dt * k2u);
        double k4u = v + dt * k3v, k4v = acc(u + dt * k3u);
        u += dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        double y = dt - comp;
        double tn = t + y;
        comp = (tn - t) - y;
        t = tn;
        run.t.push_back(t);
        run.amp.push_back(std::fabs(u));
    }
    return run;
}

double fit_T(const std::vector<double>& t, const std::vector<double>& amp, double p) {
    std::size_t n = t.size(), begin = n - 1;
    while (begin > 0 && amp[begin - 1] >= 0.1 * amp[n - 1])
        --begin;
    double mx = 0.0, my = 0.0;
    std::size_t count = n - begin;
    for (std::size_t i = begin; i < n; ++i) {
        mx += t[i];
        my += std::pow(amp[i], -(p - 1.0) / 2.0);
    }
    mx /= count;
    my /= count;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = begin; i < n; ++i) {
        double dx = t[i] - mx;
        sxx += dx * dx;
        sxy += dx * (std::pow(amp[i], -(p - 1.0) / 2.0) - my);
    }
    double slope = sxy / sxx;
    return mx - my / slope;
}

} // namespace

TEST_CASE("zero data is an exact equilibrium") {
    ModelParams params = ModelParams::conformal(3, 3.0);
    RadialGrid grid(65, 1.2);
    PhysicalState state = make_zero_state(grid);
    for (int k = 0; k < 50; ++k)
        state = step_physical(state, 0.4 * grid.spacing(), params);
    for (double v : state.u)
        CHECK(v == 0.0);
    for (double v : state.ut)
        CHECK(v == 0.0);
}

TEST_CASE("flat data follows the closed-form blow-up solution") {
    ModelParams params = ModelParams::conformal(3, 3.0, false); // p = 3, f off
    RadialGrid grid(257, 1.2);
    double root2 = std::sqrt(2.0);
    PhysicalState state = march_to(make_constant_state(grid, root2, root2), 0.9, params);

    double exact = root2 / (1.0 - 0.9);
    CHECK(std::fabs(state.u[0] - exact) / exact < 1e-6);
    CHECK(std::fabs(state.sup_norm() - exact) / exact < 1e-6);

    // order >= 2 under dt refinement (measured at the origin, t = 0.5)
    double exact_half = root2 / 0.5;
    PhysicalState coarse = march_to(make_constant_state(grid, root2, root2), 0.5, params, 0.5);
    PhysicalState fine = march_to(make_constant_state(grid, root2, root2), 0.5, params, 0.25);
    double e_coarse = std::fabs(coarse.u[0] - exact_half);
    double e_fine = std::fabs(fine.u[0] - exact_half);
    CHECK(std::log2(e_coarse / e_fine) >= 2.0);
}

TEST_CASE("blow-up time fit hits the closed-form T = 1") {
    ModelParams params = ModelParams::conformal(3, 3.0, false);
    RadialGrid grid(129, 1.2);
    double root2 = std::sqrt(2.0);
    PhysicalSolverOptions options;
    options.threshold = 1e8;

    BlowupRun run = run_until_blowup(make_constant_state(grid, root2, root2), params, options);
    REQUIRE(run.estimate.has_value());
    CHECK(run.trajectory.blew_up);
    CHECK(std::fabs(run.estimate->T - 1.0) <= 1e-6);
    CHECK(run.estimate->T > run.trajectory.step_times.back());
    CHECK(std::isfinite(run.estimate->residual));

    SUBCASE("estimate is threshold-invariant up to 1e16") {
        PhysicalSolverOptions wide = options;
        wide.threshold = 1e16;
        BlowupRun deep = run_until_blowup(make_constant_state(grid, root2, root2), params, wide);
        REQUIRE(deep.estimate.has_value());
        CHECK(std::fabs(deep.estimate->T - run.estimate->T) <= 1e-6);
    }
}

TEST_CASE("perturbed flat blow-up stays in the rate window of the scalar oracle") {
    ModelParams params = ModelParams::conformal(3, 3.0, true); // a = 3, f on
    double kappa = kappa0(params);
    RadialGrid grid(129, 1.2);
    double root2 = std::sqrt(2.0);
    PhysicalSolverOptions options;
    options.threshold = 1e8;

    BlowupRun run = run_until_blowup(make_constant_state(grid, root2, root2), params, options);
    REQUIRE(run.estimate.has_value());
    double T = run.estimate->T;

    ScalarRun oracle = scalar_oracle(params, root2, root2, 1e8, 5e-4);
    double T_oracle = fit_T(oracle.t, oracle.amp, params.p);
    CHECK(std::fabs(T - T_oracle) < 1e-5);

    // ratio (T-t)^(2/(p-1)) ||u|| over the last three decades of T - t
    double gap_end = T - run.trajectory.step_times.back();
    for (std::size_t i = 0; i < run.trajectory.step_times.size(); ++i) {
        double gap = T - run.trajectory.step_times[i];
        if (gap > gap_end * 1e3)
            continue;
        double ratio = gap * run.trajectory.step_sup_norms[i];
        CHECK(ratio >= 0.5 * kappa);
        CHECK(ratio <= 2.0 * kappa);
    }
}

TEST_CASE("weaker perturbation damping keeps the rate bounded") {
    ModelParams params = ModelParams::conformal(3, 1.5, true); // a = 1.5
    double kappa = kappa0(params);
    ScalarRun oracle = scalar_oracle(params, std::sqrt(2.0), std::sqrt(2.0), 1e8, 5e-4);
    double T = fit_T(oracle.t, oracle.amp, params.p);
    double gap_end = T - oracle.t.back();
    for (std::size_t i = 0; i < oracle.t.size(); ++i) {
        double gap = T - oracle.t[i];
        if (gap > gap_end * 1e3 || gap <= 0.0)
            continue;
        double ratio = gap * oracle.amp[i];
        CHECK(ratio >= 0.3 * kappa);
        CHECK(ratio <= 3.0 * kappa);
    }
}

TEST_CASE("tiny data stays in the linear regime") {
    ModelParams params = ModelParams::conformal(3, 3.0, true);
    RadialGrid grid(257, 2.5);
    PhysicalState full = make_gaussian_state(grid, params, 1e-6 / kappa0(params), 0.5);
    double initial = full.sup_norm();

    // independent linear solver: same grid, source terms dropped
    std::vector<double> lu = full.u, lv = full.ut;
    double h = grid.spacing();
    double dt = 0.4 * h;
    int N = params.N;
    auto linear_rhs = [&](const std::vector<double>& u, const std::vector<double>& v,
                          std::vector<double>& du, std::vector<double>& dv) {
        std::size_t n = u.size();
        for (std::size_t i = 0; i < n; ++i)
            du[i] = v[i];
        dv[0] = N * 2.0 * (u[1] - u[0]) / (h * h);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            double r = grid.node(i);
            dv[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h) +
                    (N - 1) / r * (u[i + 1] - u[i - 1]) / (2.0 * h);
        }
        double vr = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
        dv[n - 1] = -vr - 0.5 * (N - 1) / grid.domain_end() * v[n - 1];
    };

    std::size_t steps = static_cast<std::size_t>(std::ceil(1.0 / dt));
    dt = 1.0 / static_cast<double>(steps);
    PhysicalState state = full;
    std::size_t n = lu.size();
    std::vector<double> k1u(n), k1v(n), k2u(n), k2v(n), k3u(n), k3v(n), k4u(n), k4v(n);
    std::vector<double> tu(n), tv(n);
    double max_growth = 1.0;
    for (std::size_t k = 0; k < steps; ++k) {
        state = step_physical(state, dt, params);
        max_growth = std::max(max_growth, state.sup_norm() / initial);
        // four-stage step of the linear system
        linear_rhs(lu, lv, k1u, k1v);
        for (std::size_t i = 0; i < n; ++i) {
            tu[i] = lu[i] + 0.5 * dt * k1u[i];
            tv[i] = lv[i] + 0.5 * dt * k1v[i];
        }
        linear_rhs(tu, tv, k2u, k2v);
        for (std::size_t i = 0; i < n; ++i) {
            tu[i] = lu[i] + 0.5 * dt * k2u[i];
            tv[i] = lv[i] + 0.5 * dt * k2v[i];
        }
        linear_rhs(tu, tv, k3u, k3v);
        for (std::size_t i = 0; i < n; ++i) {
            tu[i] = lu[i] + dt * k3u[i];
            tv[i] = lv[i] + dt * k3v[i];
        }
        linear_rhs(tu, tv, k4u, k4v);
        for (std::size_t i = 0; i < n; ++i) {
            lu[i] += dt / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i]);
            lv[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        }
    }
    CHECK(max_growth < 1.1);

    double deviation = 0.0;
    for (std::size_t i = 0; i < lu.size(); ++i)
        deviation = std::max(deviation, std::fabs(state.u[i] - lu[i]));
    CHECK(deviation < 1e-2 * initial); // linear and full solutions agree for tiny data
}

TEST_CASE("zero data reports non-blow-up at the horizon") {
    ModelParams params = ModelParams::conformal(3, 3.0);
    RadialGrid grid(65, 1.2);
    PhysicalSolverOptions options;
    options.horizon = 0.5;
    BlowupRun run = run_until_blowup(make_zero_state(grid), params, options);
    CHECK(!run.trajectory.blew_up);
    CHECK(!run.estimate.has_value());
}

TEST_CASE("cone trace geometry") {
    ModelParams params = ModelParams::conformal(3, 3.0, false);
    RadialGrid grid(121, 1.2);
    PhysicalSolverOptions options;
    options.horizon = 0.6;
    options.threshold = 1e30; // never crossed for bounded data
    BlowupRun run = run_until_blowup(make_constant_state(grid, 0.1, 0.0), params, options);

    double T0 = 1.0;
    std::vector<double> times = {0.0, 0.3, 0.5};
    auto traces = extract_cone_trace(run.trajectory, T0, times);
    REQUIRE(traces.size() == 3);
    std::size_t previous = grid.size();
    for (std::size_t k = 0; k < traces.size(); ++k) {
        CHECK(traces[k].grid.domain_end() < T0 - traces[k].t);
        CHECK(traces[k].grid.size() <= previous);
        previous = traces[k].grid.size();
        // constant-in-space data keeps a constant trace
        for (double v : traces[k].u)
            CHECK(v == doctest::Approx(traces[k].u[0]).epsilon(1e-9));
    }
    CHECK(traces[1].grid.size() < traces[0].grid.size());

    std::vector<double> bad = {1.5};
    CHECK_THROWS_AS(extract_cone_trace(run.trajectory, T0, bad), std::invalid_argument);
}
