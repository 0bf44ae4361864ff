#include "doctest.h"

#include <cmath>
#include <future>
#include <random>
#include <vector>

#include "conwave/model.hpp"

using namespace conwave;

namespace {

// independent adaptive Simpson oracle for the antiderivative tests
template <typename Fn>
double simpson_segment(Fn&& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth > 40)
        return left + right;
    if (std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_segment(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_segment(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

template <typename Fn>
double adaptive_simpson(Fn&& f, double a, double b, double tol) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_segment(f, a, b, fa, fm, fb, whole, tol, 0);
}

} // namespace

TEST_CASE("conformal exponent values and monotonicity") {
    CHECK(conformal_exponent(2) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(conformal_exponent(3) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(conformal_exponent(5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(conformal_exponent(1), std::invalid_argument);
    CHECK_THROWS_AS(conformal_exponent(0), std::invalid_argument);

    double previous = conformal_exponent(2);
    for (int N = 3; N <= 40; ++N) {
        double current = conformal_exponent(N);
        CHECK(current < previous);
        previous = current;
    }
    CHECK(conformal_exponent(4001) == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("conformal constructor ties p to N") {
    ModelParams params = ModelParams::conformal(3, 3.0);
    CHECK(params.p == doctest::Approx(3.0));
    CHECK(params.N == 3);
    CHECK(params.M == 1.0);
    CHECK_THROWS_AS(ModelParams::conformal(1, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams::conformal(3, 0.5), std::invalid_argument);
}

TEST_CASE("perturbation f: values, symmetry, bound") {
    ModelParams params = ModelParams::conformal(3, 2.0); // p = 3, a = 2

    CHECK(f_eval(0.0, params) == 0.0);
    CHECK(f_eval(1.0, params) == doctest::Approx(0.828535449690223).epsilon(1e-12));
    CHECK(f_eval(-1.0, params) == f_eval(1.0, params));

    ModelParams off = params;
    off.perturbation_on = false;
    CHECK(f_eval(2.7, off) == 0.0);

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> sample(-50.0, 50.0);
    double log2_bound = std::pow(std::log(2.0), params.a);
    for (int i = 0; i < 200; ++i) {
        double u = sample(rng);
        double value = f_eval(u, params);
        CHECK(value == f_eval(-u, params));
        CHECK(value >= 0.0);
        CHECK(value <= std::pow(std::fabs(u), params.p) / log2_bound + 1e-15);
    }
}

TEST_CASE("antiderivative F against an adaptive Simpson oracle") {
    ModelParams params = ModelParams::conformal(3, 2.0);
    auto f = [&](double v) { return f_eval(v, params); };

    CHECK(F_eval(0.0, params) == 0.0);

    double oracle_one = adaptive_simpson(f, 0.0, 1.0, 1e-13);
    CHECK(oracle_one == doctest::Approx(0.269869003298554).epsilon(1e-9));
    CHECK(F_eval(1.0, params) == doctest::Approx(oracle_one).epsilon(1e-10));

    for (double u : {0.3, 2.5, 10.0, 137.0, 4096.0}) {
        double oracle = adaptive_simpson(f, 0.0, u, 1e-13 * (1.0 + u));
        CHECK(F_eval(u, params) == doctest::Approx(oracle).epsilon(1e-9));
        CHECK(F_eval(-u, params) == doctest::Approx(-oracle).epsilon(1e-9));
    }
}

TEST_CASE("antiderivative F: odd, nondecreasing, derivative matches f") {
    ModelParams params = ModelParams::conformal(3, 3.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> sample(0.0, 20.0);
    for (int i = 0; i < 50; ++i) {
        double x = sample(rng), y = sample(rng);
        if (x > y)
            std::swap(x, y);
        CHECK(F_eval(y, params) >= F_eval(x, params) - 1e-14);
        CHECK(F_eval(-x, params) == doctest::Approx(-F_eval(x, params)).epsilon(1e-13));
    }
    // centered difference of F reproduces f at second order
    for (double u : {0.5, 1.5, 4.0}) {
        double prev = 0.0;
        for (double h : {1e-2, 5e-3, 2.5e-3}) {
            double fd = (F_eval(u + h, params) - F_eval(u - h, params)) / (2.0 * h);
            double err = std::fabs(fd - f_eval(u, params));
            if (prev > 0.0)
                CHECK(err < prev);
            prev = err;
            CHECK(err < 1e-4);
        }
    }
}

TEST_CASE("antiderivative cache is consistent under concurrent readers") {
    ModelParams params = ModelParams::conformal(2, 2.5); // fresh parameter triple
    std::vector<double> args = {0.2, 1.7, 33.0, 500.0, 9.1, 0.004};
    std::vector<std::future<double>> futures;
    for (double u : args)
        futures.push_back(std::async(std::launch::async,
                                     [u, &params] { return F_eval(u, params); }));
    for (std::size_t i = 0; i < args.size(); ++i)
        CHECK(futures[i].get() == doctest::Approx(F_eval(args[i], params)).epsilon(1e-14));
}

TEST_CASE("flat steady-state amplitude") {
    ModelParams n3 = ModelParams::conformal(3, 3.0, false);
    CHECK(kappa0(n3) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

    ModelParams n2 = ModelParams::conformal(2, 3.0, false);
    CHECK(kappa0(n2) == doctest::Approx(0.930604859102100).epsilon(1e-12));

    // defining relation kappa^(p-1) = 2(p+1)/(p-1)^2
    for (int N : {2, 3, 4, 5, 9}) {
        ModelParams params = ModelParams::conformal(N, 3.0, false);
        double k = kappa0(params);
        double p = params.p;
        CHECK(std::pow(k, p - 1.0) ==
              doctest::Approx(2.0 * (p + 1.0) / ((p - 1.0) * (p - 1.0))).epsilon(1e-13));
    }
}

TEST_CASE("reference constants") {
    ModelParams params = ModelParams::conformal(3, 3.0);
    ReferenceConstants constants(params);
    CHECK(constants.kappa0 == doctest::Approx(std::sqrt(2.0)));
    CHECK(constants.slope_bound(0.5) == doctest::Approx(1.5));
    CHECK(constants.slope_bound(1.0) == doctest::Approx(3.0));
}
