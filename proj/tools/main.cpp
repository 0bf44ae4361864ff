#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "conwave/config.hpp"
#include "conwave/experiment.hpp"
#include "conwave/version.hpp"

namespace {

int do_run(const std::string& config_path, const std::string& out_override,
           long long seed_override) {
    conwave::ExperimentConfig config = conwave::ExperimentConfig::load(config_path);
    if (!out_override.empty())
        config.output.directory = out_override;
    if (seed_override >= 0)
        config.output.seed = static_cast<std::uint64_t>(seed_override);

    conwave::RunArtifacts artifacts =
        conwave::run_experiment(config, config.output.directory);
    std::cout << conwave::render_check_table(artifacts.checks);
    std::cout << "artifacts: " << config.output.directory << "\n";
    return artifacts.all_passed ? 0 : 1;
}

int do_check(const std::string& artifact_dir) {
    auto outcomes = conwave::check_artifacts(artifact_dir);
    std::cout << conwave::render_check_table(outcomes);
    for (const auto& outcome : outcomes)
        if (!outcome.passed)
            return 1;
    return 0;
}

int do_converge(const std::string& config_path, int levels,
                const std::string& out_override, long long seed_override) {
    conwave::ExperimentConfig config = conwave::ExperimentConfig::load(config_path);
    if (!out_override.empty())
        config.output.directory = out_override;
    if (seed_override >= 0)
        config.output.seed = static_cast<std::uint64_t>(seed_override);

    auto rows = conwave::convergence_suite(config, levels);
    std::cout << conwave::render_convergence_table(rows);
    for (const auto& row : rows)
        if (!row.passed)
            return 1;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"conwave: blow-up laboratory for the conformal radial wave "
                 "equation with a logarithmically damped perturbation"};
    app.set_version_flag("--version", conwave::kVersion);
    app.require_subcommand(1);

    std::string config_path, artifact_dir, out_override;
    long long seed_override = -1;
    int levels = 3;

    CLI::App* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--out", out_override, "output directory override");
    run->add_option("--seed", seed_override, "seed override");

    CLI::App* check = app.add_subcommand("check", "re-evaluate checks on stored artifacts");
    check->add_option("artifacts", artifact_dir, "artifact directory")->required();

    CLI::App* converge = app.add_subcommand("converge", "identity-residual refinement study");
    converge->add_option("config", config_path, "config file")->required();
    converge->add_option("--levels", levels, "refinement levels (>= 2)");
    converge->add_option("--out", out_override, "output directory override");
    converge->add_option("--seed", seed_override, "seed override");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return do_run(config_path, out_override, seed_override);
        if (check->parsed())
            return do_check(artifact_dir);
        if (converge->parsed())
            return do_converge(config_path, levels, out_override, seed_override);
    } catch (const conwave::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    }
    return 0;
}
