#include "conwave/functionals.hpp"

#include <cmath>
#include <stdexcept>

#include "conwave/special.hpp"

namespace conwave {

void FunctionalConfig::validate(const ModelParams& params) const {
    if (!(eta > 0.0) || !(eta <= 1.0))
        throw std::invalid_argument("FunctionalConfig: eta must lie in (0, 1]");
    if (!(b > 1.0) || !(b < params.a))
        throw std::invalid_argument("FunctionalConfig: b must lie in (1, a)");
    if (!(theta >= 0.0) || !(sigma >= 0.0))
        throw std::invalid_argument("FunctionalConfig: theta and sigma must be >= 0");
}

namespace {

// Node-wise access to a state plus its radial derivative and the
// similarity-frame perturbation values.
struct StateView {
    const SimilarityState& state;
    const ModelParams& params;
    std::vector<double> wy;

    StateView(const SimilarityState& st, const ModelParams& pr)
        : state(st), params(pr), wy(radial_derivative(st.w, st.grid)) {}

    std::size_t size() const { return state.grid.size(); }
    double y(std::size_t i) const { return state.grid.node(i); }
    double w(std::size_t i) const { return state.w[i]; }
    double v(std::size_t i) const { return state.ws[i]; }

    double fs(std::size_t i) const {
        return similarity_perturbation(state.w[i], state.s, params);
    }
    double Fs(std::size_t i) const {
        return similarity_perturbation_antiderivative(state.w[i], state.s, params);
    }

    template <typename Fn>
    double integrate(const WeightSpec& spec, bool singular, Fn&& node_value,
                     bool log_weight = false) const {
        std::vector<double> values(size());
        for (std::size_t i = 0; i < size(); ++i)
            values[i] = node_value(i);
        return integrate_weighted(values, state.grid, spec, state.s, params.N,
                                  singular, log_weight);
    }
};

EnergyTerms energy_terms(const StateView& view, const WeightSpec& spec) {
    const double p = view.params.p;
    EnergyTerms terms;
    terms.kinetic = view.integrate(spec, false, [&](std::size_t i) {
        return 0.5 * view.v(i) * view.v(i);
    });
    terms.gradient = view.integrate(spec, false, [&](std::size_t i) {
        double y = view.y(i);
        return 0.5 * (1.0 - y * y) * view.wy[i] * view.wy[i];
    });
    terms.mass = view.integrate(spec, false, [&](std::size_t i) {
        return (p + 1.0) / ((p - 1.0) * (p - 1.0)) * view.w(i) * view.w(i);
    });
    terms.potential = view.integrate(spec, false, [&](std::size_t i) {
        return -std::pow(std::fabs(view.w(i)), p + 1.0) / (p + 1.0);
    });
    if (view.params.perturbation_on)
        terms.perturbation = view.integrate(spec, false, [&](std::size_t i) {
            return -view.Fs(i);
        });
    return terms;
}

// Perturbation source of the energy identities: the explicit s-derivative of
// the exponentially rescaled antiderivative term,
//   2(p+1)/(p-1) e^... int F  -  2/(p-1) int w e^... f.
double perturbation_source(const StateView& view, const WeightSpec& spec) {
    if (!view.params.perturbation_on)
        return 0.0;
    const double p = view.params.p;
    double anti = view.integrate(spec, false, [&](std::size_t i) { return view.Fs(i); });
    double direct = view.integrate(spec, false, [&](std::size_t i) {
        return view.w(i) * view.fs(i);
    });
    return 2.0 * (p + 1.0) / (p - 1.0) * anti - 2.0 / (p - 1.0) * direct;
}

void check_window(std::span<const SimilarityState> window) {
    if (window.size() < 5)
        throw std::invalid_argument("identity residual: need at least 5 states");
    double ds = window[1].s - window[0].s;
    for (std::size_t k = 1; k + 1 < window.size(); ++k) {
        double step = window[k + 1].s - window[k].s;
        if (!(step > 0.0) || std::fabs(step - ds) > 1e-9 * ds)
            throw std::invalid_argument("identity residual: window must be uniform in s");
    }
}

// Max |d/ds value - rhs| over the window interior. The s-derivative uses the
// five-point fourth-order stencil so the differentiation error sits far below
// the spatial truncation of the states themselves; on closed-form windows the
// residual reaches the quadrature floor.
template <typename Value, typename Rhs>
double centered_residual(std::span<const SimilarityState> window, Value&& value,
                         Rhs&& rhs) {
    check_window(window);
    double ds = window[1].s - window[0].s;
    std::vector<double> values(window.size());
    for (std::size_t k = 0; k < window.size(); ++k)
        values[k] = value(window[k]);
    double worst = 0.0;
    for (std::size_t k = 2; k + 2 < window.size(); ++k) {
        double lhs = (-values[k + 2] + 8.0 * values[k + 1] - 8.0 * values[k - 1] +
                      values[k - 2]) /
                     (12.0 * ds);
        worst = std::max(worst, std::fabs(lhs - rhs(window[k])));
    }
    return worst;
}

} // namespace

EnergyTerms eval_E_eta_terms(const SimilarityState& state, const FunctionalConfig& config,
                             const ModelParams& params) {
    StateView view(state, params);
    EnergyTerms terms = energy_terms(view, WeightSpec::static_weight(config.eta));
    const double omega = sphere_area(params.N);
    terms.kinetic *= omega;
    terms.gradient *= omega;
    terms.mass *= omega;
    terms.potential *= omega;
    terms.perturbation *= omega;
    return terms;
}

double eval_E_eta(const SimilarityState& state, const FunctionalConfig& config,
                  const ModelParams& params) {
    return eval_E_eta_terms(state, config, params).total();
}

GFamily eval_G_family(const SimilarityState& state, const FunctionalConfig& config,
                      const ModelParams& params) {
    StateView view(state, params);
    WeightSpec rho = WeightSpec::static_weight(config.eta);
    const double omega = sphere_area(params.N);
    const double eta = config.eta;

    GFamily family;
    family.E_eta = eval_E_eta(state, config, params);
    double cross = view.integrate(rho, false, [&](std::size_t i) {
        return view.w(i) * view.v(i);
    });
    double mass = view.integrate(rho, false, [&](std::size_t i) {
        return view.w(i) * view.w(i);
    });
    family.J_eta = omega * (-eta * cross + 0.5 * params.N * eta * mass);
    family.H_eta = family.E_eta + family.J_eta;
    double decay = std::exp(-eta * (params.p + 3.0) * state.s / 2.0);
    family.G_eta = (family.H_eta + config.theta) * decay;
    return family;
}

KLFamily eval_KL_family(const SimilarityState& state, const FunctionalConfig& config,
                        const ModelParams& params) {
    if (!(state.s >= 1.0))
        throw std::invalid_argument("eval_KL_family: requires s >= 1");
    StateView view(state, params);
    WeightSpec phi = WeightSpec::dynamic_weight(config.b);
    const double s = state.s;

    KLFamily family;
    family.E = energy_terms(view, phi).total();
    double cross = view.integrate(phi, false, [&](std::size_t i) {
        return view.w(i) * view.v(i);
    });
    family.J = -std::pow(s, -config.b) * cross;
    family.K = family.E + family.J;
    double bm1 = config.b - 1.0;
    family.L = std::exp((params.p + 3.0) / (2.0 * bm1 * std::pow(s, bm1))) * family.K +
               config.sigma / std::pow(s, bm1);
    return family;
}

double eval_N_eta(const SimilarityState& state, const FunctionalConfig& config,
                  const ModelParams& params) {
    StateView view(state, params);
    return view.integrate(WeightSpec::pohozaev_weight(config.eta), false,
                          [&](std::size_t i) {
                              double ydw = view.y(i) * view.wy[i];
                              return ydw * ydw + ydw * view.v(i);
                          });
}

std::pair<double, double> eval_E0_H0(const SimilarityState& state,
                                     const ModelParams& params, double b) {
    if (!(state.s >= 1.0))
        throw std::invalid_argument("eval_E0_H0: requires s >= 1");
    if (!(params.a > 2.0))
        throw std::invalid_argument("eval_E0_H0: correction needs a > 2");
    double decay_exp = 0.5 * (params.a - b - 1.0);
    if (!(decay_exp > 0.0))
        throw std::invalid_argument("eval_E0_H0: correction needs b < a - 1");
    StateView view(state, params);
    double E0 = energy_terms(view, WeightSpec::plain()).total();
    double H0 = E0 + std::pow(state.s, -decay_exp);
    return {E0, H0};
}

FunctionalReport evaluate_report(const SimilarityState& state,
                                 const FunctionalConfig& config,
                                 const ModelParams& params) {
    config.validate(params);
    StateView view(state, params);
    WeightSpec rho = WeightSpec::static_weight(config.eta);
    WeightSpec phi = WeightSpec::dynamic_weight(config.b);
    WeightSpec plain = WeightSpec::plain();
    const double p = params.p;

    FunctionalReport report;
    report.s = state.s;

    GFamily g = eval_G_family(state, config, params);
    report.E_eta = g.E_eta;
    report.J_eta = g.J_eta;
    report.H_eta = g.H_eta;
    report.G_eta = g.G_eta;

    KLFamily kl = eval_KL_family(state, config, params);
    report.E = kl.E;
    report.J = kl.J;
    report.K = kl.K;
    report.L = kl.L;

    report.N_eta = eval_N_eta(state, config, params);
    auto e0h0 = eval_E0_H0(state, params, config.b);
    report.E0 = e0h0.first;
    report.H0 = e0h0.second;

    report.diss_weighted_vel = view.integrate(rho, true, [&](std::size_t i) {
        return view.v(i) * view.v(i);
    });
    report.diss_phi_vel = view.integrate(phi, true, [&](std::size_t i) {
        return view.v(i) * view.v(i);
    });
    report.grad_phi = view.integrate(phi, false, [&](std::size_t i) {
        double y = view.y(i);
        return (1.0 - y * y) * view.wy[i] * view.wy[i];
    });
    report.norm_grad_w = view.integrate(plain, false, [&](std::size_t i) {
        return view.wy[i] * view.wy[i];
    });
    report.norm_w_p1 = view.integrate(plain, false, [&](std::size_t i) {
        return std::pow(std::fabs(view.w(i)), p + 1.0);
    });
    report.w_p1_singular = view.integrate(rho, true, [&](std::size_t i) {
        return std::pow(std::fabs(view.w(i)), p + 1.0);
    });

    // plain-measure norms on (0, 1): the N = 1 weight drops the y^(N-1) factor
    std::vector<double> h1(state.grid.size()), l2(state.grid.size());
    for (std::size_t i = 0; i < h1.size(); ++i) {
        h1[i] = state.w[i] * state.w[i] + view.wy[i] * view.wy[i];
        l2[i] = state.ws[i] * state.ws[i];
    }
    double h1_sq = integrate_weighted(h1, state.grid, plain, state.s, 1, false);
    double l2_sq = integrate_weighted(l2, state.grid, plain, state.s, 1, false);
    report.norm_H1L2 = std::sqrt(std::max(h1_sq, 0.0)) + std::sqrt(std::max(l2_sq, 0.0));

    report.boundary_vel = boundary_velocity(state);
    return report;
}

double identity_residual_E_eta(std::span<const SimilarityState> window,
                               const FunctionalConfig& config, const ModelParams& params) {
    const double omega = sphere_area(params.N);
    const double eta = config.eta;
    WeightSpec rho = WeightSpec::static_weight(eta);
    return centered_residual(
        window,
        [&](const SimilarityState& st) { return eval_E_eta(st, config, params); },
        [&](const SimilarityState& st) {
            StateView view(st, params);
            double singular = view.integrate(rho, true, [&](std::size_t i) {
                double y = view.y(i);
                return view.v(i) * view.v(i) * y * y;
            });
            double cross = view.integrate(rho, false, [&](std::size_t i) {
                return view.v(i) * view.y(i) * view.wy[i];
            });
            return omega * (-2.0 * eta * singular + 2.0 * eta * cross +
                            perturbation_source(view, rho));
        });
}

double identity_residual_E0(std::span<const SimilarityState> window,
                            const ModelParams& params) {
    WeightSpec plain = WeightSpec::plain();
    return centered_residual(
        window,
        [&](const SimilarityState& st) {
            StateView view(st, params);
            return energy_terms(view, plain).total();
        },
        [&](const SimilarityState& st) {
            StateView view(st, params);
            double bv = boundary_velocity(st);
            return -bv * bv + perturbation_source(view, plain);
        });
}

double identity_residual_pohozaev(std::span<const SimilarityState> window,
                                  const FunctionalConfig& config, const ModelParams& params) {
    const double eta = config.eta;
    const double p = params.p;
    const double N = static_cast<double>(params.N);
    WeightSpec psi = WeightSpec::pohozaev_weight(eta);

    return centered_residual(
        window,
        [&](const SimilarityState& st) { return eval_N_eta(st, config, params); },
        [&](const SimilarityState& st) {
            StateView view(st, params);
            double grad = view.integrate(psi, false, [&](std::size_t i) {
                return view.wy[i] * view.wy[i];
            });
            double ygrad = view.integrate(psi, false, [&](std::size_t i) {
                double ydw = view.y(i) * view.wy[i];
                return ydw * ydw;
            });
            double kin = view.integrate(psi, false, [&](std::size_t i) {
                return view.v(i) * view.v(i);
            });
            double kin_singular = view.integrate(psi, true, [&](std::size_t i) {
                double y = view.y(i);
                return view.v(i) * view.v(i) * y * y;
            });
            double wygrad = view.integrate(psi, false, [&](std::size_t i) {
                return view.y(i) * view.wy[i] * view.w(i);
            });
            double cross = view.integrate(psi, false, [&](std::size_t i) {
                return view.y(i) * view.wy[i] * view.v(i);
            });
            double pot = view.integrate(psi, false, [&](std::size_t i) {
                return std::pow(std::fabs(view.w(i)), p + 1.0);
            });
            double pot_singular = view.integrate(psi, true, [&](std::size_t i) {
                double y = view.y(i);
                return std::pow(std::fabs(view.w(i)), p + 1.0) * y * y;
            });
            double anti = 0.0, anti_singular = 0.0;
            if (params.perturbation_on) {
                anti = view.integrate(psi, false, [&](std::size_t i) { return view.Fs(i); });
                anti_singular = view.integrate(psi, true, [&](std::size_t i) {
                    double y = view.y(i);
                    return view.Fs(i) * y * y;
                });
            }
            return 0.5 * (N - 2.0) * grad + (eta - 0.5 * N) * ygrad - 0.5 * N * kin +
                   eta * kin_singular -
                   2.0 * (p + 1.0) / ((p - 1.0) * (p - 1.0)) * wygrad -
                   (p + 3.0) / (p - 1.0) * cross - N / (p + 1.0) * pot +
                   2.0 * eta / (p + 1.0) * pot_singular - N * anti +
                   2.0 * eta * anti_singular;
        });
}

std::array<double, 6> phi_energy_drift_terms(const SimilarityState& state,
                                             const ModelParams& params, double b) {
    if (!(state.s >= 1.0))
        throw std::invalid_argument("phi_energy_drift_terms: requires s >= 1");
    if (!(b > 1.0))
        throw std::invalid_argument("phi_energy_drift_terms: requires b > 1");
    StateView view(state, params);
    WeightSpec phi = WeightSpec::dynamic_weight(b);
    const double p = params.p;
    const double s = state.s;
    const double rate = b / std::pow(s, b + 1.0);

    std::array<double, 6> terms{};
    terms[0] = rate / (p + 1.0) * view.integrate(phi, false, [&](std::size_t i) {
        return std::pow(std::fabs(view.w(i)), p + 1.0);
    }, true);
    terms[1] = perturbation_source(view, phi);
    terms[2] = -0.5 * rate * view.integrate(phi, false, [&](std::size_t i) {
        return view.v(i) * view.v(i);
    }, true);
    terms[3] = -0.5 * rate * view.integrate(phi, false, [&](std::size_t i) {
        double y = view.y(i);
        return (1.0 - y * y) * view.wy[i] * view.wy[i];
    }, true);
    terms[4] = -rate * (p + 1.0) / ((p - 1.0) * (p - 1.0)) *
               view.integrate(phi, false, [&](std::size_t i) {
                   return view.w(i) * view.w(i);
               }, true);
    terms[5] = params.perturbation_on
                   ? rate * view.integrate(phi, false,
                                           [&](std::size_t i) { return view.Fs(i); }, true)
                   : 0.0;
    return terms;
}

double identity_residual_E_phi(std::span<const SimilarityState> window,
                               const ModelParams& params, double b) {
    WeightSpec phi = WeightSpec::dynamic_weight(b);
    return centered_residual(
        window,
        [&](const SimilarityState& st) {
            StateView view(st, params);
            return energy_terms(view, phi).total();
        },
        [&](const SimilarityState& st) {
            StateView view(st, params);
            double inv_sb = std::pow(st.s, -b);
            double singular = view.integrate(phi, true, [&](std::size_t i) {
                double y = view.y(i);
                return view.v(i) * view.v(i) * y * y;
            });
            double cross = view.integrate(phi, false, [&](std::size_t i) {
                return view.v(i) * view.wy[i] * view.y(i);
            });
            auto drift = phi_energy_drift_terms(st, params, b);
            double total = -2.0 * inv_sb * singular + 2.0 * inv_sb * cross;
            for (double term : drift)
                total += term;
            return total;
        });
}

} // namespace conwave
