#include "conwave/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "conwave/csv.hpp"
#include "conwave/physical.hpp"
#include "conwave/similarity.hpp"
#include "conwave/special.hpp"
#include "conwave/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace conwave {

namespace {

const std::vector<std::string> kReportColumns = {
    "s", "E_eta", "J_eta", "H_eta", "G_eta", "E", "J", "K", "L", "N_eta",
    "E0", "H0", "diss_weighted_vel", "diss_phi_vel", "grad_phi", "norm_grad_w",
    "norm_w_p1", "w_p1_singular", "norm_H1L2", "boundary_vel"};

std::vector<double> report_row(const FunctionalReport& r) {
    return {r.s, r.E_eta, r.J_eta, r.H_eta, r.G_eta, r.E, r.J, r.K, r.L, r.N_eta,
            r.E0, r.H0, r.diss_weighted_vel, r.diss_phi_vel, r.grad_phi,
            r.norm_grad_w, r.norm_w_p1, r.w_p1_singular, r.norm_H1L2, r.boundary_vel};
}

FunctionalReport report_from_row(const CsvTable& table, const std::vector<double>& row) {
    FunctionalReport r;
    auto get = [&](const char* name) { return row[table.column(name)]; };
    r.s = get("s");
    r.E_eta = get("E_eta");
    r.J_eta = get("J_eta");
    r.H_eta = get("H_eta");
    r.G_eta = get("G_eta");
    r.E = get("E");
    r.J = get("J");
    r.K = get("K");
    r.L = get("L");
    r.N_eta = get("N_eta");
    r.E0 = get("E0");
    r.H0 = get("H0");
    r.diss_weighted_vel = get("diss_weighted_vel");
    r.diss_phi_vel = get("diss_phi_vel");
    r.grad_phi = get("grad_phi");
    r.norm_grad_w = get("norm_grad_w");
    r.norm_w_p1 = get("norm_w_p1");
    r.w_p1_singular = get("w_p1_singular");
    r.norm_H1L2 = get("norm_H1L2");
    r.boundary_vel = get("boundary_vel");
    return r;
}

void write_functionals_csv(const std::string& path,
                           const std::vector<FunctionalReport>& reports) {
    std::ofstream out(path);
    write_csv_row(out, kReportColumns);
    for (const auto& r : reports) {
        auto row = report_row(r);
        write_csv_row(out, row);
    }
}

void write_physical_csv(const std::string& path, const PhysicalTrajectory& traj,
                        std::size_t stride) {
    std::ofstream out(path);
    const std::vector<std::string> header = {"t", "r", "u", "ut"};
    write_csv_row(out, header);
    for (std::size_t k = 0; k < traj.snapshot_times.size(); k += std::max<std::size_t>(1, stride)) {
        for (std::size_t i = 0; i < traj.grid.size(); ++i) {
            std::vector<double> row = {traj.snapshot_times[k], traj.grid.node(i),
                                       traj.snapshots_u[k][i], traj.snapshots_ut[k][i]};
            write_csv_row(out, row);
        }
    }
}

struct SimilarityOutcome {
    std::vector<FunctionalReport> reports;
    std::vector<SimilarityState> residual_window;
    std::vector<SimilarityState> csv_snapshots;
    bool stayed_valid = true;
};

SimilarityOutcome evolve_similarity(const SimilarityState& initial,
                                    const ModelParams& params,
                                    const FunctionalConfig& fc,
                                    const ExperimentConfig& cfg) {
    SimilarityOutcome outcome;
    const double h = initial.grid.spacing();
    const double ds = cfg.similarity.cfl * h;
    const auto steps =
        static_cast<std::size_t>(std::ceil(cfg.similarity.s_window / ds));
    const auto report_stride = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(cfg.similarity.report_ds / ds)));
    const double res_start = initial.s + std::min(1.0, 0.3 * cfg.similarity.s_window);
    const double res_end = res_start + cfg.similarity.residual_window;
    const std::size_t res_stride = cfg.similarity.residual_stride;

    SimilarityState state = initial;
    outcome.reports.push_back(evaluate_report(state, fc, params));
    outcome.csv_snapshots.push_back(state);
    double next_csv_s = initial.s + 1.0;

    for (std::size_t k = 1; k <= steps; ++k) {
        state = step_similarity(state, ds, params);
        if (!state.valid) {
            outcome.stayed_valid = false;
            break;
        }
        if (k % report_stride == 0)
            outcome.reports.push_back(evaluate_report(state, fc, params));
        if (k % res_stride == 0 && state.s >= res_start - 1e-12 &&
            state.s <= res_end + 1e-12)
            outcome.residual_window.push_back(state);
        if (state.s >= next_csv_s - 1e-12) {
            outcome.csv_snapshots.push_back(state);
            next_csv_s += 1.0;
        }
    }
    return outcome;
}

void write_similarity_csv(const std::string& path,
                          const std::vector<SimilarityState>& snapshots) {
    std::ofstream out(path);
    const std::vector<std::string> header = {"s", "y", "w", "ws"};
    write_csv_row(out, header);
    for (const auto& st : snapshots)
        for (std::size_t i = 0; i < st.grid.size(); ++i) {
            std::vector<double> row = {st.s, st.grid.node(i), st.w[i], st.ws[i]};
            write_csv_row(out, row);
        }
}

json outcome_to_json(const CheckOutcome& outcome) {
    json j;
    j["name"] = outcome.name;
    j["passed"] = outcome.passed;
    j["margin"] = outcome.margin;
    json details = json::object();
    for (const auto& [key, value] : outcome.details)
        details[key] = value;
    j["details"] = details;
    if (!outcome.note.empty())
        j["note"] = outcome.note;
    return j;
}

CheckOutcome outcome_from_json(const json& j) {
    CheckOutcome outcome;
    outcome.name = j.at("name").get<std::string>();
    outcome.passed = j.at("passed").get<bool>();
    outcome.margin = j.at("margin").get<double>();
    if (j.contains("details"))
        for (auto it = j["details"].begin(); it != j["details"].end(); ++it)
            outcome.details[it.key()] = it.value().get<double>();
    if (j.contains("note"))
        outcome.note = j["note"].get<std::string>();
    return outcome;
}

struct IdentityResiduals {
    double E_eta = 0.0;
    double E0 = 0.0;
    double pohozaev = 0.0;
    double E_phi = 0.0;
    bool measured = false;
};

IdentityResiduals measure_identities(const std::vector<SimilarityState>& window,
                                     const FunctionalConfig& fc,
                                     const ModelParams& params) {
    IdentityResiduals res;
    if (window.size() < 3)
        return res;
    res.E_eta = identity_residual_E_eta(window, fc, params);
    res.E0 = identity_residual_E0(window, params);
    res.pohozaev = identity_residual_pohozaev(window, fc, params);
    res.E_phi = identity_residual_E_phi(window, params, fc.b);
    res.measured = true;
    return res;
}

PhysicalState build_physical_initial(const ExperimentConfig& cfg,
                                     const ModelParams& params) {
    RadialGrid grid(cfg.physical.nodes, cfg.physical.domain_end);
    const std::string& family = cfg.data.family;
    if (family == "constant")
        return make_constant_state(grid, cfg.data.u0, cfg.data.u1);
    if (family == "gaussian")
        return make_gaussian_state(grid, params, cfg.data.amplitude, cfg.data.sigma);
    if (family == "self_similar")
        return make_self_similar_state(grid, params, cfg.data.t_ref, cfg.data.epsilon,
                                       cfg.data.sigma);
    throw ConfigError("data.family '" + family + "' has no physical phase");
}

bool family_needs_physical(const std::string& family) {
    return family == "constant" || family == "gaussian" || family == "self_similar";
}

} // namespace

CheckOutcome hardy_sweep(std::uint64_t seed, int polynomials_per_case,
                         std::size_t grid_nodes) {
    RadialGrid grid(grid_nodes, 1.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);

    CheckOutcome outcome;
    outcome.name = "hardy_sweep";
    outcome.margin = std::numeric_limits<double>::infinity();
    int cases = 0;
    for (int N : {2, 3, 5}) {
        for (double eta : {0.1, 0.5, 0.9}) {
            for (int trial = 0; trial < polynomials_per_case; ++trial) {
                double c[9];
                for (double& ck : c)
                    ck = coeff(rng);
                std::vector<double> h(grid.size()), dh(grid.size());
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    double y = grid.node(i);
                    double value = 0.0, deriv = 0.0, yk = 1.0;
                    for (int k = 0; k <= 8; ++k) {
                        value += c[k] * yk;
                        if (k + 1 <= 8)
                            deriv += c[k + 1] * static_cast<double>(k + 1) * yk;
                        yk *= y;
                    }
                    h[i] = value;
                    dh[i] = deriv;
                }
                CheckOutcome one = hardy_check(h, dh, grid, eta, N);
                outcome.margin = std::min(outcome.margin, one.margin);
                ++cases;
            }
        }
    }
    outcome.passed = outcome.margin >= -1e-8;
    outcome.details["cases"] = static_cast<double>(cases);
    outcome.details["min_margin"] = outcome.margin;
    return outcome;
}

RunArtifacts run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
    cfg.validate();
    ModelParams params =
        ModelParams::conformal(cfg.model.N, cfg.model.a, cfg.model.perturbation);
    fs::create_directories(out_dir);

    RunArtifacts artifacts;
    std::vector<std::string> notes;

    RadialGrid sgrid(cfg.similarity.nodes, 1.0);
    std::optional<BlowupRun> physical_run;
    std::optional<SimilarityState> sim0;
    double T0 = std::numeric_limits<double>::quiet_NaN();

    if (family_needs_physical(cfg.data.family)) {
        PhysicalState initial = build_physical_initial(cfg, params);
        PhysicalSolverOptions options;
        options.cfl = cfg.physical.cfl;
        options.threshold = cfg.physical.threshold;
        options.horizon = cfg.physical.horizon;
        options.shrink_factor = cfg.physical.shrink_factor;
        options.snapshot_stride = cfg.physical.snapshot_stride;
        physical_run = run_until_blowup(initial, params, options);
        write_physical_csv(out_dir + "/physical_trajectory.csv",
                           physical_run->trajectory, cfg.output.trajectory_stride);
        artifacts.blew_up = physical_run->trajectory.blew_up;

        CheckOutcome blowup_outcome;
        blowup_outcome.name = "blowup";
        blowup_outcome.passed = physical_run->estimate.has_value();
        blowup_outcome.margin = blowup_outcome.passed ? 1.0 : -1.0;
        if (physical_run->estimate) {
            artifacts.T_fit = physical_run->estimate->T;
            blowup_outcome.details["T"] = physical_run->estimate->T;
            blowup_outcome.details["fit_residual"] = physical_run->estimate->residual;
        } else {
            blowup_outcome.note = "no blow-up detected by the horizon";
        }
        artifacts.checks.push_back(blowup_outcome);

        if (physical_run->estimate) {
            T0 = physical_run->estimate->T;
            double gap = cfg.similarity.start_fraction * T0;
            if (-std::log(gap) < 1.0)
                gap = std::exp(-1.0); // keep the similarity clock past s = 1
            double t_start = T0 - gap;
            const auto& st = physical_run->trajectory.snapshot_times;
            auto it = std::upper_bound(st.begin(), st.end(), t_start);
            if (it == st.begin())
                throw std::runtime_error("run_experiment: no snapshot precedes the similarity start");
            std::size_t snap = static_cast<std::size_t>(it - st.begin()) - 1;
            sim0 = to_similarity(physical_run->trajectory.state_at(snap), T0, params, sgrid);
        }
    } else if (cfg.data.family == "steady") {
        sim0 = make_steady_similarity_state(sgrid, params);
    } else { // zero
        sim0 = make_zero_similarity_state(sgrid);
    }

    FunctionalConfig fc{cfg.functionals.eta, cfg.functionals.b, 0.0, 0.0};
    IdentityResiduals residuals;

    if (sim0) {
        artifacts.s_start = sim0->s;
        GFamily g0 = eval_G_family(*sim0, fc, params);
        KLFamily kl0 = eval_KL_family(*sim0, fc, params);
        fc.theta = cfg.functionals.theta >= 0.0 ? cfg.functionals.theta
                                                : 10.0 * std::fabs(g0.H_eta);
        fc.sigma = cfg.functionals.sigma >= 0.0
                       ? cfg.functionals.sigma
                       : 10.0 / (cfg.functionals.b - 1.0) * std::fabs(kl0.K);
        artifacts.theta = fc.theta;
        artifacts.sigma = fc.sigma;

        SimilarityOutcome evolution = evolve_similarity(*sim0, params, fc, cfg);
        if (!evolution.stayed_valid)
            notes.push_back("similarity evolution lost validity before the window end");
        artifacts.reports = std::move(evolution.reports);
        write_functionals_csv(out_dir + "/functionals.csv", artifacts.reports);
        write_similarity_csv(out_dir + "/similarity_snapshots.csv", evolution.csv_snapshots);
        residuals = measure_identities(evolution.residual_window, fc, params);
    }

    // ---- checks
    const double h = sgrid.spacing();
    const double ds = cfg.similarity.cfl * h;
    const double burn_in_abs = artifacts.s_start + cfg.checks.burn_in;

    for (const std::string& name : cfg.checks.run) {
        CheckOutcome outcome;
        try {
            if (name == "monotone_G_eta" || name == "monotone_L" || name == "monotone_H0") {
                MonotonicityOptions options;
                options.burn_in = burn_in_abs;
                options.rel_allowance = cfg.checks.rel_allowance;
                options.abs_allowance = 10.0 * (h * h + ds * ds);
                MonotoneTarget target = name == "monotone_G_eta" ? MonotoneTarget::G_eta
                                        : name == "monotone_L"   ? MonotoneTarget::L
                                                                 : MonotoneTarget::H0;
                outcome = monotonicity_check(artifacts.reports, target, fc, params, options);
            } else if (name == "growth_exp_ball" || name == "growth_exp_singular" ||
                       name == "growth_poly_radial") {
                GrowthOptions options;
                options.burn_in = burn_in_abs;
                options.slope_tol = cfg.checks.slope_tol;
                options.seed = cfg.output.seed;
                GrowthBound bound = name == "growth_exp_ball" ? GrowthBound::exp_ball
                                    : name == "growth_exp_singular"
                                        ? GrowthBound::exp_singular
                                        : GrowthBound::poly_radial;
                double eta_or_b = bound == GrowthBound::poly_radial ? fc.b : fc.eta;
                outcome = growth_bound_check(artifacts.reports, bound, eta_or_b, params, options);
            } else if (name == "rate_window") {
                RateWindowOptions options;
                options.burn_in = burn_in_abs;
                options.span = cfg.checks.rate_span;
                if (artifacts.T_fit) {
                    options.check_frame = true;
                    options.frame_T0 = T0;
                    options.frame_T_fit = *artifacts.T_fit;
                }
                outcome = rate_window_check(artifacts.reports, options);
            } else if (name == "ode_rate") {
                if (!physical_run || !physical_run->estimate)
                    throw std::runtime_error("ode_rate needs a completed blow-up run");
                outcome = ode_rate_check(params, physical_run->trajectory.step_times,
                                         physical_run->trajectory.step_sup_norms,
                                         physical_run->estimate->T);
            } else if (name == "identities") {
                outcome.name = "identities";
                if (!residuals.measured)
                    throw std::runtime_error("identity window was not collected");
                double worst = std::max({residuals.E_eta, residuals.E0,
                                         residuals.pohozaev, residuals.E_phi});
                outcome.margin = cfg.checks.identity_tol - worst;
                outcome.passed = outcome.margin >= 0.0;
                outcome.details["residual_E_eta"] = residuals.E_eta;
                outcome.details["residual_E0"] = residuals.E0;
                outcome.details["residual_pohozaev"] = residuals.pohozaev;
                outcome.details["residual_E_phi"] = residuals.E_phi;
                outcome.details["tolerance"] = cfg.checks.identity_tol;
            } else if (name == "hardy") {
                outcome = hardy_sweep(cfg.output.seed);
            } else if (name == "blowup") {
                continue; // implicit for physical families, recorded above
            } else {
                throw ConfigError("checks.run: check '" + name + "' is not recognized");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& err) {
            outcome.name = name;
            outcome.passed = false;
            outcome.margin = -std::numeric_limits<double>::infinity();
            outcome.note = err.what();
        }
        artifacts.checks.push_back(outcome);
    }

    artifacts.all_passed = true;
    for (const auto& outcome : artifacts.checks)
        artifacts.all_passed = artifacts.all_passed && outcome.passed;

    // ---- manifests
    json checks_json = json::array();
    for (const auto& outcome : artifacts.checks)
        checks_json.push_back(outcome_to_json(outcome));
    {
        std::ofstream out(out_dir + "/checks.json");
        out << checks_json.dump(2) << "\n";
    }
    {
        std::ofstream out(out_dir + "/checks.txt");
        out << render_check_table(artifacts.checks);
    }
    {
        json summary;
        summary["version"] = kVersion;
        summary["config_text"] = cfg.serialize();
        json derived;
        derived["kappa0"] = kappa0(params);
        derived["p"] = params.p;
        derived["blew_up"] = artifacts.blew_up;
        if (artifacts.T_fit)
            derived["T_fit"] = *artifacts.T_fit;
        derived["s_start"] = artifacts.s_start;
        derived["theta"] = artifacts.theta;
        derived["sigma"] = artifacts.sigma;
        derived["similarity_spacing"] = h;
        derived["similarity_ds"] = ds;
        derived["sphere_area"] = sphere_area(params.N);
        summary["derived"] = derived;
        if (!notes.empty())
            summary["notes"] = notes;
        summary["all_passed"] = artifacts.all_passed;
        std::ofstream out(out_dir + "/run_summary.json");
        out << summary.dump(2) << "\n";
    }
    return artifacts;
}

std::vector<ConvergenceRow> convergence_suite(const ExperimentConfig& cfg, int levels) {
    if (levels < 2)
        throw ConfigError("convergence_suite: needs at least 2 refinement levels");
    cfg.validate();
    ModelParams params =
        ModelParams::conformal(cfg.model.N, cfg.model.a, cfg.model.perturbation);

    // one physical run feeds every level so all levels see the same data
    std::optional<BlowupRun> physical_run;
    double T0 = 0.0;
    double t_start = 0.0;
    if (family_needs_physical(cfg.data.family)) {
        PhysicalState initial = build_physical_initial(cfg, params);
        PhysicalSolverOptions options;
        options.cfl = cfg.physical.cfl;
        options.threshold = cfg.physical.threshold;
        options.horizon = cfg.physical.horizon;
        options.shrink_factor = cfg.physical.shrink_factor;
        options.snapshot_stride = cfg.physical.snapshot_stride;
        physical_run = run_until_blowup(initial, params, options);
        if (!physical_run->estimate)
            throw std::runtime_error("convergence_suite: scenario did not blow up");
        T0 = physical_run->estimate->T;
        double gap = cfg.similarity.start_fraction * T0;
        if (-std::log(gap) < 1.0)
            gap = std::exp(-1.0);
        t_start = T0 - gap;
    }

    std::vector<IdentityResiduals> measured;
    for (int level = 0; level < levels; ++level) {
        std::size_t nodes = (cfg.similarity.nodes - 1) * (1u << level) + 1;
        RadialGrid grid(nodes, 1.0);

        SimilarityState sim0 = [&]() {
            if (cfg.data.family == "steady")
                return make_steady_similarity_state(grid, params);
            if (cfg.data.family == "zero")
                return make_zero_similarity_state(grid);
            const auto& st = physical_run->trajectory.snapshot_times;
            auto it = std::upper_bound(st.begin(), st.end(), t_start);
            std::size_t snap = static_cast<std::size_t>(it - st.begin());
            if (snap == 0)
                throw std::runtime_error("convergence_suite: no usable snapshot");
            return to_similarity(physical_run->trajectory.state_at(snap - 1), T0, params, grid);
        }();

        FunctionalConfig fc{cfg.functionals.eta, cfg.functionals.b, 0.0, 0.0};
        const double ds = cfg.similarity.cfl * grid.spacing();
        const auto steps = static_cast<std::size_t>(
            std::ceil(cfg.similarity.residual_window / ds));
        const std::size_t stride = cfg.similarity.residual_stride;

        std::vector<SimilarityState> window;
        SimilarityState state = sim0;
        window.push_back(state);
        for (std::size_t k = 1; k <= steps; ++k) {
            state = step_similarity(state, ds, params);
            if (!state.valid)
                throw std::runtime_error("convergence_suite: evolution lost validity");
            if (k % stride == 0)
                window.push_back(state);
        }
        measured.push_back(measure_identities(window, fc, params));
    }

    auto build_row = [&](const std::string& name, auto&& getter) {
        ConvergenceRow row;
        row.identity = name;
        for (const auto& m : measured)
            row.residuals.push_back(getter(m));
        double floor = 1e-10;
        row.exact = true;
        for (double r : row.residuals)
            row.exact = row.exact && r < floor;
        for (std::size_t i = 0; i + 1 < row.residuals.size(); ++i) {
            double ratio = row.residuals[i] / std::max(row.residuals[i + 1], 1e-300);
            row.orders.push_back(std::log2(ratio));
        }
        row.passed = row.exact;
        if (!row.exact) {
            row.passed = true;
            for (double order : row.orders)
                row.passed = row.passed && order >= 1.5;
        }
        return row;
    };

    std::vector<ConvergenceRow> rows;
    rows.push_back(build_row("energy_identity_eta",
                             [](const IdentityResiduals& m) { return m.E_eta; }));
    rows.push_back(build_row("energy_identity_plain",
                             [](const IdentityResiduals& m) { return m.E0; }));
    rows.push_back(build_row("pohozaev_identity",
                             [](const IdentityResiduals& m) { return m.pohozaev; }));
    rows.push_back(build_row("energy_identity_phi",
                             [](const IdentityResiduals& m) { return m.E_phi; }));
    return rows;
}

std::vector<CheckOutcome> check_artifacts(const std::string& artifact_dir) {
    std::ifstream summary_in(artifact_dir + "/run_summary.json");
    if (!summary_in)
        throw std::runtime_error("check_artifacts: missing run_summary.json in " + artifact_dir);
    json summary = json::parse(summary_in);
    ExperimentConfig cfg = ExperimentConfig::parse(
        summary.at("config_text").get<std::string>(), artifact_dir + "/run_summary.json");
    ModelParams params =
        ModelParams::conformal(cfg.model.N, cfg.model.a, cfg.model.perturbation);

    CsvTable table = read_csv(artifact_dir + "/functionals.csv");
    std::vector<FunctionalReport> reports;
    reports.reserve(table.rows.size());
    for (const auto& row : table.rows)
        reports.push_back(report_from_row(table, row));

    const json& derived = summary.at("derived");
    double s_start = derived.at("s_start").get<double>();
    double h = derived.at("similarity_spacing").get<double>();
    double ds = derived.at("similarity_ds").get<double>();
    FunctionalConfig fc{cfg.functionals.eta, cfg.functionals.b,
                        derived.at("theta").get<double>(),
                        derived.at("sigma").get<double>()};

    std::map<std::string, CheckOutcome> stored;
    {
        std::ifstream checks_in(artifact_dir + "/checks.json");
        if (checks_in) {
            json checks = json::parse(checks_in);
            for (const auto& j : checks) {
                CheckOutcome outcome = outcome_from_json(j);
                stored[outcome.name] = outcome;
            }
        }
    }

    std::vector<CheckOutcome> outcomes;
    const double burn_in_abs = s_start + cfg.checks.burn_in;
    for (const std::string& name : cfg.checks.run) {
        try {
            if (name == "monotone_G_eta" || name == "monotone_L" || name == "monotone_H0") {
                MonotonicityOptions options;
                options.burn_in = burn_in_abs;
                options.rel_allowance = cfg.checks.rel_allowance;
                options.abs_allowance = 10.0 * (h * h + ds * ds);
                MonotoneTarget target = name == "monotone_G_eta" ? MonotoneTarget::G_eta
                                        : name == "monotone_L"   ? MonotoneTarget::L
                                                                 : MonotoneTarget::H0;
                outcomes.push_back(
                    monotonicity_check(reports, target, fc, params, options));
            } else if (name == "growth_exp_ball" || name == "growth_exp_singular" ||
                       name == "growth_poly_radial") {
                GrowthOptions options;
                options.burn_in = burn_in_abs;
                options.slope_tol = cfg.checks.slope_tol;
                options.seed = cfg.output.seed;
                GrowthBound bound = name == "growth_exp_ball" ? GrowthBound::exp_ball
                                    : name == "growth_exp_singular"
                                        ? GrowthBound::exp_singular
                                        : GrowthBound::poly_radial;
                double eta_or_b = bound == GrowthBound::poly_radial ? fc.b : fc.eta;
                outcomes.push_back(
                    growth_bound_check(reports, bound, eta_or_b, params, options));
            } else if (name == "rate_window") {
                RateWindowOptions options;
                options.burn_in = burn_in_abs;
                options.span = cfg.checks.rate_span;
                outcomes.push_back(rate_window_check(reports, options));
            } else {
                auto it = stored.find(name == "ode_rate" ? "ode_rate_window" : name);
                if (it == stored.end())
                    it = stored.find(name);
                if (it != stored.end()) {
                    CheckOutcome outcome = it->second;
                    outcome.note = outcome.note.empty() ? "stored outcome"
                                                        : outcome.note + " (stored)";
                    outcomes.push_back(outcome);
                }
            }
        } catch (const std::exception& err) {
            CheckOutcome outcome;
            outcome.name = name;
            outcome.passed = false;
            outcome.margin = -std::numeric_limits<double>::infinity();
            outcome.note = err.what();
            outcomes.push_back(outcome);
        }
    }
    return outcomes;
}

std::string render_check_table(const std::vector<CheckOutcome>& checks) {
    std::ostringstream out;
    std::size_t width = 4;
    for (const auto& outcome : checks)
        width = std::max(width, outcome.name.size());
    for (const auto& outcome : checks) {
        out << (outcome.passed ? "PASS" : "FAIL") << "  ";
        out << outcome.name;
        out << std::string(width - outcome.name.size() + 2, ' ');
        out << "margin=" << format_double(outcome.margin);
        if (!outcome.note.empty())
            out << "  (" << outcome.note << ")";
        out << "\n";
    }
    return out.str();
}

std::string render_convergence_table(const std::vector<ConvergenceRow>& rows) {
    std::ostringstream out;
    for (const auto& row : rows) {
        out << (row.passed ? "PASS" : "FAIL") << "  " << row.identity << "\n";
        out << "      residuals:";
        for (double r : row.residuals)
            out << ' ' << format_double(r);
        out << "\n";
        if (row.exact) {
            out << "      orders: exact (residuals at rounding floor)\n";
        } else {
            out << "      orders:";
            for (double o : row.orders)
                out << ' ' << format_double(o);
            out << "\n";
        }
    }
    return out.str();
}

} // namespace conwave
