#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conwave/config.hpp"
#include "conwave/functionals.hpp"
#include "conwave/verifier.hpp"

namespace conwave {

// Everything a finished run leaves behind, besides the files on disk.
struct RunArtifacts {
    std::vector<CheckOutcome> checks;
    bool all_passed = true;
    bool blew_up = false;
    std::optional<double> T_fit;
    double s_start = 0.0;
    double theta = 0.0;
    double sigma = 0.0;
    std::vector<FunctionalReport> reports;
};

// Runs the configured scenario end to end: physical evolution (when the data
// family calls for one), blow-up time fit, transform into the similarity
// frame, similarity evolution with functional reports, identity-residual
// window, and the configured checks. Writes trajectory CSVs, the functional
// report CSV, a machine-readable check manifest and a run summary into
// `out_dir`. Deterministic for a fixed config and seed. Partial artifacts
// are retained on failure.
RunArtifacts run_experiment(const ExperimentConfig& config, const std::string& out_dir);

struct ConvergenceRow {
    std::string identity;
    std::vector<double> residuals; // one per refinement level
    std::vector<double> orders;    // log2 ratios between consecutive levels
    bool exact = false;            // residuals at rounding floor
    bool passed = false;
};

// Re-measures the exact-identity residuals at `levels` simultaneous
// (spacing, step) refinements of the configured scenario and reports the
// observed orders. A row passes when its residuals sit at the rounding floor
// or its observed orders are all >= 1.5.
std::vector<ConvergenceRow> convergence_suite(const ExperimentConfig& config, int levels);

// Re-evaluates the report-based checks from a stored artifact directory.
std::vector<CheckOutcome> check_artifacts(const std::string& artifact_dir);

// Random-polynomial sweep of the weighted Hardy inequality across
// eta in {0.1, 0.5, 0.9} and N in {2, 3, 5}; deterministic in the seed.
CheckOutcome hardy_sweep(std::uint64_t seed, int polynomials_per_case = 100,
                         std::size_t grid_nodes = 2049);

// Rendering helpers shared by the CLI and the artifact writer.
std::string render_check_table(const std::vector<CheckOutcome>& checks);
std::string render_convergence_table(const std::vector<ConvergenceRow>& rows);

} // namespace conwave
