#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pjx/quadrature.hpp"

using namespace pjx;

TEST_CASE("constant integrand") {
    auto r = integrate([](double) { return 1.0; }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("integrable endpoint singularities") {
    auto r1 = integrate([](double a) { return 1.0 / std::sqrt(a); }, 0.0, 1.0);
    CHECK(std::fabs(r1.value - 2.0) < 1e-9);
    auto r2 = integrate([](double a) { return std::pow(1.0 - a, -2.0 / 3.0); }, 0.0, 1.0);
    CHECK(std::fabs(r2.value - 3.0) < 1e-8);
}

TEST_CASE("splitting invariance on random smooth integrands") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::uniform_real_distribution<double> cut(0.1, 0.9);
    for (int trial = 0; trial < 20; ++trial) {
        double c0 = coef(rng), c1 = coef(rng), c2 = coef(rng), c3 = coef(rng);
        auto f = [=](double a) {
            return c0 + c1 * a * a + c2 * std::sin(3.0 * a) + c3 * std::exp(-a);
        };
        double s1 = cut(rng), s2 = cut(rng);
        if (s1 > s2) std::swap(s1, s2);
        const double whole = integrate(f, 0.0, 1.0).value;
        const double split = integrate(f, 0.0, s1).value + integrate(f, s1, s2).value +
                             integrate(f, s2, 1.0).value;
        CHECK(std::fabs(whole - split) < 1e-12);
    }
}

TEST_CASE("non-finite integrand is rejected") {
    auto bad = [](double a) { return a < 0.5 ? 1.0 : std::numeric_limits<double>::quiet_NaN(); };
    CHECK_THROWS_AS(integrate(bad, 0.0, 1.0), numerics_error);
}

TEST_CASE("depth exhaustion reports non-convergence with a best estimate") {
    QuadratureSpec spec;
    spec.max_depth = 2;
    spec.abs_tol = 1e-14;
    spec.rel_tol = 1e-14;
    auto r = integrate([](double a) { return 1.0 / std::sqrt(a); }, 0.0, 1.0, spec);
    CHECK_FALSE(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("J-power integral equals 1 at eta = 0") {
    for (const auto& name : builtin_profile_names()) {
        const auto p = builtin_profile(name);
        const double lam = builtin_default_lambda(name);
        for (double b : {-1.0, 0.5, 2.0, 3.0})
            CHECK(integrate_jpow(p, lam, 0.0, b) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

// Closed form of int_0^1 J^{-2} dalpha for the cube-root profile at lambda=1/2,
// derived from the worked arctanh expression.
static double ex1_kbar0_closed(double eta) {
    const double at = std::atanh(2.0 * eta / (eta - 6.0));
    return -(54.0 * (eta - 6.0) * eta - 81.0 * (2.0 - eta) * (6.0 + eta) * at) /
           (4.0 * (6.0 + eta) * eta * eta * eta);
}

TEST_CASE("cube-root profile: J^{-2} integral matches closed form and endpoint value") {
    const auto p = builtin_profile("ex1_q13");
    for (double eta : {0.5, 1.0, 1.5}) {
        const double got = integrate_jpow(p, 0.5, eta, 2.0);
        CHECK(got == doctest::Approx(ex1_kbar0_closed(eta)).epsilon(1e-9));
    }
    // At eta = eta* = 2 the exponent satisfies b q = 2/3 < 1: integrable,
    // value 27/16.
    const double at_star = integrate_jpow(p, 0.5, 2.0, 2.0);
    CHECK(std::fabs(at_star - 27.0 / 16.0) < 1e-8);
}

TEST_CASE("divergent endpoint evaluation is rejected") {
    const auto p = builtin_profile("ex2_q5");
    // b q = 0.5 * 5 >= 1: diverges at eta*.
    CHECK_THROWS_AS(integrate_jpow(p, 2.0, p.eta_star(2.0), 0.5), divergent_integral);
}

TEST_CASE("singularity guard") {
    const auto p = builtin_profile("ex2_q5");
    QuadratureSpec spec;
    CHECK_THROWS_AS(integrate_jpow_jmin(p, 2.0, 1e-14, 0.5, spec), numerics_error);
    spec.singularity_guard = 1e-16;
    CHECK(integrate_jpow_jmin(p, 2.0, 1e-14, 0.5, spec) > 0.0);
}

TEST_CASE("monotone in eta for positive exponents") {
    for (const auto& name : {"ex1_q13", "ex2_q5", "ex3_q6"}) {
        const auto p = builtin_profile(name);
        const double lam = builtin_default_lambda(name);
        const double es = p.eta_star(lam);
        double prev = 0.0;
        bool first = true;
        for (int i = 0; i <= 12; ++i) {
            const double eta = es * (0.999 * i / 12.0);
            const double v = integrate_jpow(p, lam, eta, 1.5);
            if (!first) CHECK(v >= prev * (1.0 - 1e-12));
            prev = v;
            first = false;
        }
    }
}

TEST_CASE("quadrature approaches the leading-order estimate deep in the singular regime") {
    // For the quintic profile at lambda = 2, b = 1/lambda the integral grows
    // like C J^{1/q - b}; the ratio must be within 5% once J <= 1e-4.
    const auto p = builtin_profile("ex2_q5");
    const double q = 5.0, b = 0.5;
    const double C = std::tgamma(1.0 + 1.0 / q) * std::tgamma(b - 1.0 / q) / std::tgamma(b) *
                     std::pow(p.M0 / std::fabs(p.C1), 1.0 / q);  // one-sided maximum
    QuadratureSpec spec;
    spec.singularity_guard = 1e-9;
    double prev_gap = 1e30;
    for (double jmin : {1e-2, 1e-4, 1e-6}) {
        const double quad = integrate_jpow_jmin(p, 2.0, jmin, b, spec);
        const double est = C * std::pow(jmin, 1.0 / q - b);
        const double gap = std::fabs(quad / est - 1.0);
        CHECK(gap < prev_gap);  // monotone approach
        if (jmin <= 1e-4) CHECK(gap < 0.05);
        prev_gap = gap;
    }
}

TEST_CASE("weighted kernel over a subinterval") {
    const auto p = builtin_profile("ex6_linear");
    // int_0^{1/2} J^{-1} dalpha + int_{1/2}^1 J^{-1} dalpha == int_0^1.
    auto one = [](double) { return 1.0; };
    const double jmin = 0.3;
    const double left =
        integrate_jpow_weighted_jmin(p, 1.0, jmin, 1.0, one, 0.0, 0.5).value;
    const double right =
        integrate_jpow_weighted_jmin(p, 1.0, jmin, 1.0, one, 0.5, 1.0).value;
    const double whole = integrate_jpow_jmin(p, 1.0, jmin, 1.0);
    CHECK(left + right == doctest::Approx(whole).epsilon(1e-10));
}
