#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace conwave {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Line-oriented experiment description: [section] headers with key = value
// entries. Parsing is strict; unknown sections or keys are errors that name
// the offender. Serialization round-trips losslessly.
struct ExperimentConfig {
    struct Model {
        int N = 3;
        double a = 3.0;
        bool perturbation = true;
    } model;

    struct Data {
        std::string family = "constant"; // constant|gaussian|self_similar|steady|zero
        double u0 = 0.0;
        double u1 = 0.0;
        double amplitude = 2.0; // gaussian bump height in kappa0 units
        double sigma = 0.5;
        double t_ref = 1.0;     // self_similar reference blow-up time
        double epsilon = 0.1;   // self_similar bump size
    } data;

    struct Physical {
        std::size_t nodes = 513;
        double domain_end = 1.2;
        double cfl = 0.5;
        double threshold = 1e8;
        double horizon = 10.0;
        double shrink_factor = 0.05;
        std::size_t snapshot_stride = 4;
    } physical;

    struct Similarity {
        std::size_t nodes = 513;
        double cfl = 0.4;
        double s_window = 12.0;
        double report_ds = 0.05;
        double start_fraction = 0.25;  // transform at T0 - t = fraction * T0
        double residual_window = 0.4;  // s-length of the stored identity window
        std::size_t residual_stride = 4;
    } similarity;

    struct Functionals {
        double eta = 0.5;
        double b = 1.5;
        double theta = -1.0; // negative: policy 10 |H_eta(initial)|
        double sigma = -1.0; // negative: policy 10 (b-1)^-1 |K(initial)|
    } functionals;

    struct Checks {
        std::vector<std::string> run; // check names, see experiment.cpp
        double burn_in = 2.0;
        double slope_tol = 0.1;
        double rel_allowance = 1e-4;
        double identity_tol = 1e-4;
        double rate_span = 10.0;
    } checks;

    struct Output {
        std::string directory = "out";
        std::uint64_t seed = 12345;
        std::size_t trajectory_stride = 8;
    } output;

    static ExperimentConfig load(const std::string& path);
    static ExperimentConfig parse(const std::string& text, const std::string& origin);
    std::string serialize() const;
    void save(const std::string& path) const;
    void validate() const;
};

} // namespace conwave
