#include "conwave/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "conwave/special.hpp"

namespace conwave {

CheckOutcome hardy_check(std::span<const double> h, std::span<const double> dh,
                         const RadialGrid& grid, double eta, int N, double tolerance) {
    if (!(eta > 0.0) || !(eta <= 1.0))
        throw std::invalid_argument("hardy_check: eta must lie in (0, 1]");
    std::vector<double> deriv;
    if (dh.empty()) {
        deriv = radial_derivative(h, grid);
        dh = deriv;
    } else if (dh.size() != h.size()) {
        throw std::invalid_argument("hardy_check: derivative size mismatch");
    }

    WeightSpec rho = WeightSpec::static_weight(eta);
    const double omega = sphere_area(N);
    std::vector<double> values(h.size());

    for (std::size_t i = 0; i < h.size(); ++i) {
        double y = grid.node(i);
        values[i] = h[i] * h[i] * y * y;
    }
    double lhs = omega * integrate_weighted(values, grid, rho, 1.0, N, true);

    for (std::size_t i = 0; i < h.size(); ++i) {
        double y = grid.node(i);
        values[i] = dh[i] * dh[i] * (1.0 - y * y);
    }
    double grad = omega * integrate_weighted(values, grid, rho, 1.0, N, false);

    for (std::size_t i = 0; i < h.size(); ++i)
        values[i] = h[i] * h[i];
    double mass = omega * integrate_weighted(values, grid, rho, 1.0, N, false);

    double rhs = grad / (eta * eta) + mass * static_cast<double>(N) / eta;

    CheckOutcome outcome;
    outcome.name = "hardy_sobolev";
    outcome.margin = rhs - lhs;
    outcome.passed = outcome.margin >= -tolerance;
    outcome.details["lhs"] = lhs;
    outcome.details["rhs"] = rhs;
    outcome.details["eta"] = eta;
    outcome.details["N"] = static_cast<double>(N);
    return outcome;
}

namespace {

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double mean_x = 0.0;
    std::vector<double> fitted;
    std::vector<double> residuals;
};

SlopeFit ols(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    SlopeFit fit;
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
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my;
    fit.mean_x = mx;
    fit.fitted.resize(n);
    fit.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        fit.fitted[i] = my + fit.slope * (x[i] - mx);
        fit.residuals[i] = y[i] - fit.fitted[i];
    }
    return fit;
}

// 5th percentile of the residual-bootstrap slope distribution
double bootstrap_slope_quantile(std::span<const double> x, std::span<const double> y,
                                std::uint64_t seed, int samples, double quantile) {
    SlopeFit fit = ols(x, y);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
    std::vector<double> slopes(samples);
    std::vector<double> resampled(x.size());
    for (int b = 0; b < samples; ++b) {
        for (std::size_t i = 0; i < x.size(); ++i)
            resampled[i] = fit.fitted[i] + fit.residuals[pick(rng)];
        slopes[b] = ols(x, resampled).slope;
    }
    std::sort(slopes.begin(), slopes.end());
    auto idx = static_cast<std::size_t>(quantile * static_cast<double>(samples - 1));
    return slopes[idx];
}

std::vector<std::size_t> indices_past(std::span<const FunctionalReport> reports,
                                      double burn_in) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < reports.size(); ++i)
        if (reports[i].s >= burn_in)
            idx.push_back(i);
    return idx;
}

// Unit-window trapezoid averages of a report quantity past burn-in.
template <typename Getter>
void unit_window_averages(std::span<const FunctionalReport> reports, double burn_in,
                          Getter&& get, std::vector<double>& centers,
                          std::vector<double>& averages) {
    centers.clear();
    averages.clear();
    auto idx = indices_past(reports, burn_in);
    if (idx.size() < 3)
        return;
    double s0 = reports[idx.front()].s;
    double s_end = reports[idx.back()].s;
    for (int j = 0;; ++j) {
        double lo = s0 + j, hi = lo + 1.0;
        if (hi > s_end + 1e-12)
            break;
        double acc = 0.0;
        bool any = false;
        for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
            const auto& a = reports[idx[k]];
            const auto& b = reports[idx[k + 1]];
            double left = std::max(a.s, lo), right = std::min(b.s, hi);
            if (right <= left)
                continue;
            // linear interpolation of the integrand across the report step
            auto value_at = [&](double s) {
                double t = (s - a.s) / (b.s - a.s);
                return (1.0 - t) * get(a) + t * get(b);
            };
            acc += 0.5 * (value_at(left) + value_at(right)) * (right - left);
            any = true;
        }
        if (!any)
            break;
        centers.push_back(0.5 * (lo + hi));
        averages.push_back(acc);
    }
}

} // namespace

CheckOutcome monotonicity_check(std::span<const FunctionalReport> reports,
                                MonotoneTarget target, const FunctionalConfig& config,
                                const ModelParams& params,
                                const MonotonicityOptions& options) {
    auto idx = indices_past(reports, options.burn_in);
    if (idx.size() < 3)
        throw std::invalid_argument("monotonicity_check: insufficient series length");

    auto value = [&](const FunctionalReport& r) {
        switch (target) {
        case MonotoneTarget::G_eta: return r.G_eta;
        case MonotoneTarget::L: return r.L;
        case MonotoneTarget::H0: return r.H0;
        }
        throw std::logic_error("monotonicity_check: unknown target");
    };

    double scale = 0.0;
    for (std::size_t i : idx)
        scale = std::max(scale, std::fabs(value(reports[i])));

    CheckOutcome outcome;
    switch (target) {
    case MonotoneTarget::G_eta: outcome.name = "monotone_G_eta"; break;
    case MonotoneTarget::L: outcome.name = "monotone_L"; break;
    case MonotoneTarget::H0: outcome.name = "monotone_H0"; break;
    }

    const double omega = sphere_area(params.N);
    double margin = std::numeric_limits<double>::infinity();
    double lambda_fit = std::numeric_limits<double>::infinity();
    double knob_threshold = 0.0;
    bool any_dissipation = false;

    for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
        const auto& a = reports[idx[k]];
        const auto& b = reports[idx[k + 1]];
        double drop = value(a) - value(b);
        double allowance = options.abs_allowance + options.rel_allowance * scale;
        margin = std::min(margin, drop + allowance);

        double ds = b.s - a.s;
        double dissipation = 0.0;
        switch (target) {
        case MonotoneTarget::G_eta: {
            double decay = config.eta * (params.p + 3.0) / 2.0;
            dissipation = 0.5 * ds *
                          (std::exp(-decay * a.s) * omega * a.diss_weighted_vel +
                           std::exp(-decay * b.s) * omega * b.diss_weighted_vel);
            // smallest theta making these two samples monotone
            double ea = std::exp(-decay * a.s), eb = std::exp(-decay * b.s);
            double need = -(a.H_eta * ea - b.H_eta * eb) / (ea - eb);
            knob_threshold = std::max(knob_threshold, need);
            break;
        }
        case MonotoneTarget::L: {
            dissipation = 0.5 * ds *
                          (std::pow(a.s, -config.b) * a.diss_phi_vel +
                           std::pow(b.s, -config.b) * b.diss_phi_vel);
            double bm1 = config.b - 1.0;
            double pa = std::pow(a.s, -bm1), pb = std::pow(b.s, -bm1);
            double base_a = a.L - config.sigma * pa; // exp(...) K part
            double base_b = b.L - config.sigma * pb;
            double need = -(base_a - base_b) / (pa - pb);
            knob_threshold = std::max(knob_threshold, need);
            break;
        }
        case MonotoneTarget::H0: {
            dissipation = 0.5 * ds * (a.boundary_vel * a.boundary_vel +
                                      b.boundary_vel * b.boundary_vel);
            break;
        }
        }
        if (dissipation > 0.0) {
            any_dissipation = true;
            lambda_fit = std::min(lambda_fit, drop / dissipation);
        }
    }

    outcome.margin = margin;
    outcome.passed = margin >= 0.0;
    outcome.details["scale"] = scale;
    outcome.details["steps"] = static_cast<double>(idx.size() - 1);
    if (any_dissipation)
        outcome.details["lambda_fit"] = lambda_fit;
    if (target == MonotoneTarget::G_eta)
        outcome.details["theta_threshold"] = knob_threshold;
    if (target == MonotoneTarget::L)
        outcome.details["sigma_threshold"] = knob_threshold;
    return outcome;
}

CheckOutcome growth_bound_check(std::span<const FunctionalReport> reports,
                                GrowthBound bound, double eta_or_b,
                                const ModelParams& params, const GrowthOptions& options) {
    auto idx = indices_past(reports, options.burn_in);
    if (idx.empty() || reports[idx.back()].s - reports[idx.front()].s < 5.0)
        throw std::invalid_argument("growth_bound_check: series must span >= 5 units of s");

    const double omega = sphere_area(params.N);
    CheckOutcome outcome;
    outcome.details["eta_or_b"] = eta_or_b;

    auto fit_log_slope = [&](auto&& get, const char* label, double& worst_slope,
                             bool& degenerate, bool& zero_series) {
        std::vector<double> centers, averages;
        unit_window_averages(reports, options.burn_in, get, centers, averages);
        if (centers.size() < 4) {
            degenerate = true;
            return;
        }
        double peak = 0.0;
        for (double q : averages)
            peak = std::max(peak, std::fabs(q));
        if (peak <= 1e-250) {
            zero_series = true; // identically zero quantity: trivially bounded
            outcome.details[std::string(label) + "_slope"] = 0.0;
            return;
        }
        std::vector<double> logs(averages.size());
        for (std::size_t i = 0; i < averages.size(); ++i) {
            if (!(averages[i] > 0.0)) {
                degenerate = true;
                return;
            }
            logs[i] = std::log(averages[i]);
        }
        double slope = ols(centers, logs).slope;
        outcome.details[std::string(label) + "_slope"] = slope;
        worst_slope = std::max(worst_slope, slope);
    };

    if (bound == GrowthBound::exp_ball || bound == GrowthBound::exp_singular) {
        double eta = eta_or_b;
        double admissible = eta * (params.p + 3.0) / 2.0 + options.slope_tol;
        double worst = -std::numeric_limits<double>::infinity();
        bool degenerate = false, zero_series = false;

        if (bound == GrowthBound::exp_ball) {
            outcome.name = "growth_exp_ball";
            fit_log_slope([&](const FunctionalReport& r) { return omega * r.diss_weighted_vel; },
                          "velocity", worst, degenerate, zero_series);
            fit_log_slope([&](const FunctionalReport& r) {
                return omega * (r.norm_grad_w + r.norm_w_p1);
            }, "energy", worst, degenerate, zero_series);
        } else {
            outcome.name = "growth_exp_singular";
            fit_log_slope([&](const FunctionalReport& r) { return r.w_p1_singular; },
                          "potential", worst, degenerate, zero_series);
        }

        outcome.details["admissible_slope"] = admissible;
        if (degenerate) {
            outcome.passed = false;
            outcome.margin = -std::numeric_limits<double>::infinity();
            outcome.note = "degenerate fit";
        } else if (!std::isfinite(worst)) { // every series identically zero
            outcome.passed = true;
            outcome.margin = admissible;
            outcome.note = "zero series";
        } else {
            outcome.margin = admissible - worst;
            outcome.passed = outcome.margin >= 0.0;
        }
        return outcome;
    }

    // polynomial window: quantities divided by s^b must not trend upward
    outcome.name = "growth_poly_radial";
    double b = eta_or_b;
    double worst_q5 = -std::numeric_limits<double>::infinity();
    bool degenerate = false;
    int label_index = 0;
    const char* labels[3] = {"velocity", "gradient", "potential"};
    auto trend = [&](auto&& get) {
        std::vector<double> centers, averages;
        unit_window_averages(reports, options.burn_in, get, centers, averages);
        const char* label = labels[label_index++];
        if (centers.size() < 4) {
            degenerate = true;
            return;
        }
        double mean = 0.0;
        for (std::size_t i = 0; i < averages.size(); ++i) {
            averages[i] /= std::pow(centers[i], b);
            mean += std::fabs(averages[i]);
        }
        mean /= static_cast<double>(averages.size());
        if (mean <= 1e-250) {
            outcome.details[std::string(label) + "_trend_q95"] = 0.0;
            return;
        }
        for (double& q : averages)
            q /= mean;
        double q5 = bootstrap_slope_quantile(centers, averages, options.seed,
                                             options.bootstrap_samples, 0.05);
        outcome.details[std::string(label) + "_trend_q95"] = q5;
        worst_q5 = std::max(worst_q5, q5);
    };
    trend([](const FunctionalReport& r) { return r.diss_phi_vel; });
    trend([](const FunctionalReport& r) { return r.grad_phi; });
    trend([](const FunctionalReport& r) { return r.norm_w_p1; });

    if (degenerate) {
        outcome.passed = false;
        outcome.margin = -std::numeric_limits<double>::infinity();
        outcome.note = "degenerate fit";
    } else if (!std::isfinite(worst_q5)) {
        outcome.passed = true;
        outcome.margin = 0.0;
        outcome.note = "zero series";
    } else {
        outcome.margin = -worst_q5; // positive when no significant upward trend
        outcome.passed = worst_q5 <= 0.0;
    }
    return outcome;
}

CheckOutcome rate_window_check(std::span<const FunctionalReport> reports,
                               const RateWindowOptions& options) {
    CheckOutcome outcome;
    outcome.name = "rate_window";

    if (options.check_frame &&
        std::fabs(options.frame_T0 - options.frame_T_fit) > options.frame_tol) {
        outcome.passed = false;
        outcome.margin = -std::fabs(options.frame_T0 - options.frame_T_fit);
        outcome.note = "frame mismatch: T0 differs from the fitted blow-up time";
        return outcome;
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    std::size_t used = 0;
    for (const auto& r : reports) {
        if (r.s < options.burn_in)
            continue;
        if (options.span > 0.0 && r.s > options.burn_in + options.span)
            continue;
        lo = std::min(lo, r.norm_H1L2);
        hi = std::max(hi, r.norm_H1L2);
        ++used;
    }
    if (used < 3)
        throw std::invalid_argument("rate_window_check: insufficient series length");

    double floor = std::max(options.abs_floor, options.rel_floor * hi);
    outcome.margin = lo - floor;
    outcome.passed = outcome.margin > 0.0 && std::isfinite(hi);
    outcome.details["lo"] = lo;
    outcome.details["hi"] = hi;
    outcome.details["floor"] = floor;
    outcome.details["samples"] = static_cast<double>(used);
    return outcome;
}

CheckOutcome ode_rate_check(const ModelParams& params, std::span<const double> times,
                            std::span<const double> sup_norms, double T, double decades) {
    if (times.size() != sup_norms.size() || times.size() < 4)
        throw std::invalid_argument("ode_rate_check: need matching series, size >= 4");
    double gap_end = T - times.back();
    if (!(gap_end > 0.0))
        throw std::invalid_argument("ode_rate_check: T must exceed the last sample time");

    const double kappa = kappa0(params);
    const double expo = 2.0 / (params.p - 1.0);
    double gap_start = gap_end * std::pow(10.0, decades);

    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, dev = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        double gap = T - times[i];
        if (gap > gap_start || gap <= 0.0)
            continue;
        double ratio = std::pow(gap, expo) * sup_norms[i];
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        dev = std::max(dev, std::fabs(ratio - kappa));
        ++used;
    }
    CheckOutcome outcome;
    outcome.name = "ode_rate_window";
    if (used < 4) {
        outcome.passed = false;
        outcome.margin = -std::numeric_limits<double>::infinity();
        outcome.note = "too few samples in the requested decades";
        return outcome;
    }
    outcome.margin = lo;
    outcome.passed = lo > 0.0 && std::isfinite(hi);
    outcome.details["inf"] = lo;
    outcome.details["sup"] = hi;
    outcome.details["max_dev_from_kappa0"] = dev;
    outcome.details["kappa0"] = kappa;
    outcome.details["samples"] = static_cast<double>(used);
    return outcome;
}

} // namespace conwave
