#include "conwave/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

namespace conwave {

ModelParams ModelParams::conformal(int N, double a, bool perturbation_on) {
    ModelParams params;
    params.N = N;
    params.p = conformal_exponent(N);
    params.a = a;
    params.M = 1.0;
    params.perturbation_on = perturbation_on;
    params.validate();
    return params;
}

void ModelParams::validate() const {
    if (N < 2)
        throw std::invalid_argument("ModelParams: dimension N must be >= 2");
    if (!(p > 1.0))
        throw std::invalid_argument("ModelParams: exponent p must be > 1");
    if (perturbation_on && !(a > 1.0))
        throw std::invalid_argument("ModelParams: perturbation exponent a must be > 1");
    if (!(M >= 0.0))
        throw std::invalid_argument("ModelParams: perturbation scale M must be >= 0");
}

double conformal_exponent(int N) {
    if (N < 2)
        throw std::invalid_argument("conformal_exponent: N must be >= 2");
    return 1.0 + 4.0 / (static_cast<double>(N) - 1.0);
}

namespace {

// log(2 + u^2) without forming u^2 when it would overflow
double log_two_plus_usq(double u) {
    double au = std::fabs(u);
    if (au > 1e150)
        return 2.0 * std::log(au);
    return std::log(2.0 + au * au);
}

} // namespace

double f_eval(double u, const ModelParams& params) {
    if (!params.perturbation_on || u == 0.0)
        return 0.0;
    double au = std::fabs(u);
    return params.M * std::pow(au, params.p) /
           std::pow(log_two_plus_usq(u), params.a);
}

namespace {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1]
constexpr std::array<double, 8> kKronrodNodes = {
    0.000000000000000000000000000000000e+00,
    2.077849550078984676006894037732449e-01,
    4.058451513773971669066064120769615e-01,
    5.860872354676911302941448382587296e-01,
    7.415311855993944398638647732807884e-01,
    8.648644233597690727897127886409262e-01,
    9.491079123427585245261896840478513e-01,
    9.914553711208126392068546975263285e-01};

constexpr std::array<double, 8> kKronrodWeights = {
    2.094821410847278280129991748917143e-01,
    2.044329400752988924141619992346491e-01,
    1.903505780647854099132564024210137e-01,
    1.690047266392679028265834265985503e-01,
    1.406532597155259187451895905102379e-01,
    1.047900103222501838398763225415180e-01,
    6.309209262997855329070066318920429e-02,
    2.293532201052922496373200805896959e-02};

constexpr std::array<double, 4> kGaussWeights = {
    4.179591836734693877551020408163265e-01,
    3.818300505051189449503697754889751e-01,
    2.797053914892766679014677714237796e-01,
    1.294849661688696932706114326790820e-01};

struct GKResult {
    double integral;
    double error;
};

template <typename Fn>
GKResult gauss_kronrod_15(Fn&& f, double lo, double hi) {
    double c = 0.5 * (lo + hi);
    double hw = 0.5 * (hi - lo);
    double f0 = f(c);
    double k = kKronrodWeights[0] * f0;
    double g = kGaussWeights[0] * f0;
    for (int i = 1; i < 8; ++i) {
        double fp = f(c + hw * kKronrodNodes[i]);
        double fm = f(c - hw * kKronrodNodes[i]);
        k += kKronrodWeights[i] * (fp + fm);
        if (i % 2 == 0)
            g += kGaussWeights[i / 2] * (fp + fm);
    }
    double integral = k * hw;
    double err = std::fabs((k - g) * hw);
    // the usual sharpened error estimate
    err = std::pow(200.0 * err, 1.5);
    return {integral, err};
}

template <typename Fn>
double adaptive_gk(Fn&& f, double lo, double hi, double rel_tol, double abs_floor,
                   int depth) {
    GKResult r = gauss_kronrod_15(f, lo, hi);
    double tol = std::max(rel_tol * std::fabs(r.integral), abs_floor);
    if (r.error <= tol)
        return r.integral;
    if (depth >= 52)
        throw std::runtime_error("F_eval: adaptive quadrature did not converge");
    double mid = 0.5 * (lo + hi);
    return adaptive_gk(f, lo, mid, rel_tol, 0.5 * abs_floor, depth + 1) +
           adaptive_gk(f, mid, hi, rel_tol, 0.5 * abs_floor, depth + 1);
}

// Checkpoint table of F on a geometric amplitude ladder, one table per
// parameter triple (p, a, M).
class AntiderivativeTable {
  public:
    explicit AntiderivativeTable(const ModelParams& params)
        : params_(params) {}

    double eval(double au) const {
        auto f = [this](double v) { return f_eval(v, params_); };
        if (au <= kBase)
            return adaptive_gk(f, 0.0, au, kRelTol, 1e-300, 0);
        int level = static_cast<int>(std::floor(std::log2(au / kBase)));
        double anchor_value = checkpoint(level);
        double anchor = kBase * std::pow(2.0, level);
        return anchor_value + adaptive_gk(f, anchor, au, kRelTol,
                                          kRelTol * std::fabs(anchor_value), 0);
    }

  private:
    double checkpoint(int level) const {
        std::lock_guard<std::mutex> lock(mutex_);
        auto f = [this](double v) { return f_eval(v, params_); };
        if (cumulative_.empty())
            cumulative_.push_back(adaptive_gk(f, 0.0, kBase, kRelTol, 1e-300, 0));
        while (static_cast<int>(cumulative_.size()) <= level) {
            int k = static_cast<int>(cumulative_.size());
            double lo = kBase * std::pow(2.0, k - 1);
            double hi = 2.0 * lo;
            double seg = adaptive_gk(f, lo, hi, kRelTol,
                                     kRelTol * std::fabs(cumulative_.back()), 0);
            cumulative_.push_back(cumulative_.back() + seg);
        }
        return cumulative_[level];
    }

    static constexpr double kBase = 0.0625;
    static constexpr double kRelTol = 1e-12;

    ModelParams params_;
    mutable std::mutex mutex_;
    mutable std::vector<double> cumulative_;
};

AntiderivativeTable& table_for(const ModelParams& params) {
    using Key = std::tuple<double, double, double>;
    static std::mutex registry_mutex;
    static std::map<Key, std::unique_ptr<AntiderivativeTable>> registry;

    Key key{params.p, params.a, params.M};
    std::lock_guard<std::mutex> lock(registry_mutex);
    auto it = registry.find(key);
    if (it == registry.end())
        it = registry.emplace(key, std::make_unique<AntiderivativeTable>(params)).first;
    return *it->second;
}

} // namespace

double F_eval(double u, const ModelParams& params) {
    if (!params.perturbation_on || u == 0.0)
        return 0.0;
    if (!std::isfinite(u))
        throw std::invalid_argument("F_eval: argument must be finite");
    double au = std::fabs(u);
    double value = table_for(params).eval(au);
    return u > 0.0 ? value : -value; // f even, hence F odd
}

double kappa0(const ModelParams& params) {
    if (!(params.p > 1.0))
        throw std::invalid_argument("kappa0: requires p > 1");
    double p = params.p;
    return std::pow(2.0 * (p + 1.0) / ((p - 1.0) * (p - 1.0)), 1.0 / (p - 1.0));
}

ReferenceConstants::ReferenceConstants(const ModelParams& params)
    : kappa0(conwave::kappa0(params)), p(params.p) {}

} // namespace conwave
