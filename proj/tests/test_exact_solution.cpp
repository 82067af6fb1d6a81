#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pjx/exact_solution.hpp"

using namespace pjx;

TEST_CASE("J: initial value, worked value, vanishing at the active extremum") {
    const auto p2 = builtin_profile("ex2_q5");
    auto f0 = make_frame(p2, 2.0, 0.0);
    for (double a : {0.0, 0.3, 0.77, 1.0}) CHECK(jac_J(f0, a) == doctest::Approx(1.0));
    auto f = make_frame(p2, 2.0, 0.25);
    CHECK(jac_J(f, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
    auto fdeep = make_frame_jmin(p2, 2.0, 1e-9, [] {
        QuadratureSpec s;
        s.singularity_guard = 1e-12;
        return s;
    }());
    CHECK(jac_J(fdeep, 0.0) == doctest::Approx(1e-9).epsilon(1e-12));
}

TEST_CASE("frames reject lambda = 0 and eta beyond eta*") {
    const auto p = builtin_profile("ex2_q5");
    CHECK_THROWS_AS(make_frame(p, 0.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(make_frame(p, 2.0, 0.51), std::domain_error);
}

TEST_CASE("Kbar at eta = 0 is 1 for every order") {
    const auto p = builtin_profile("ex6_linear");
    auto f = make_frame(p, 1.0, 0.0);
    for (int i : {0, 1, 2, 3}) CHECK(kbar(f, i) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Kbar0 closed form for the double-endpoint linear profile") {
    // K0 = 2 arctanh(y) / sqrt(3 eta (4+eta)), y = sqrt(3 eta (4+eta)) / (2(1+eta))
    const auto p = builtin_profile("ex6_linear");
    for (double eta : {0.4, 1.0, 1.7}) {
        auto f = make_frame(p, 1.0, eta);
        const double s = std::sqrt(3.0 * eta * (4.0 + eta));
        const double closed = 2.0 * std::atanh(s / (2.0 * (1.0 + eta))) / s;
        CHECK(f.kbar0 == doctest::Approx(closed).epsilon(1e-10));
    }
}

TEST_CASE("ux: initial condition and equivalence of the two forms") {
    for (const auto& name : builtin_profile_names()) {
        const auto p = builtin_profile(name);
        const double lam = builtin_default_lambda(name);
        auto f0 = make_frame(p, lam, 0.0);
        for (double a : {0.1, 0.5, 0.9})
            CHECK(ux(f0, a) == doctest::Approx(p.u0p(a)).epsilon(1e-10));
        auto f = make_frame(p, lam, 1e-6);
        for (double a : {0.1, 0.5, 0.9})
            CHECK(std::fabs(ux_mainsolu(f, a) - ux_finalsolu(f, a)) < 1e-8);
        // the two forms stay identical at ordinary times too
        auto fm = make_frame_jmin(p, lam, 0.4);
        for (double a : {0.1, 0.5, 0.9})
            CHECK(ux_mainsolu(fm, a) ==
                  doctest::Approx(ux_finalsolu(fm, a)).epsilon(1e-9));
    }
}

TEST_CASE("ux vanishes uniformly for the quintic profile at lambda = 2") {
    const auto p = builtin_profile("ex2_q5");
    QuadratureSpec s;
    s.singularity_guard = 1e-9;
    double prev = 1e300;
    for (double jm : {1e-2, 1e-4, 1e-6}) {
        auto f = make_frame_jmin(p, 2.0, jm, s);
        const double v = std::fabs(ux(f, 0.37));
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 0.05);
}

TEST_CASE("two-sided growth for the cube-root profile at lambda = 1/2") {
    const auto p = builtin_profile("ex1_q13");
    QuadratureSpec s;
    s.singularity_guard = 1e-9;
    // M ~ C / J at the one-sided maximum; J * M approaches a constant.
    double r1 = 0, r2 = 0;
    {
        auto f = make_frame_jmin(p, 0.5, 1e-4, s);
        r1 = 1e-4 * ux(f, 0.0);
        auto g = make_frame_jmin(p, 0.5, 1e-6, s);
        r2 = 1e-6 * ux(g, 0.0);
        CHECK(ux(g, 0.5) < ux(f, 0.5));  // interior goes down
        CHECK(ux(g, 0.5) < -3.0);
    }
    CHECK(r1 == doctest::Approx(r2).epsilon(0.05));
    CHECK(r2 > 0.0);
}

TEST_CASE("uxx: zero at inflection, initial value, sign preservation") {
    const auto p6 = builtin_profile("ex6_linear");
    auto f = make_frame(p6, 1.0, 0.7);
    CHECK(uxx(f, 0.5) == doctest::Approx(0.0));
    auto f0 = make_frame(p6, 1.0, 0.0);
    for (double a : {0.2, 0.8}) CHECK(uxx(f0, a) == doctest::Approx(p6.eval_u0pp(a)).epsilon(1e-10));

    const auto p3 = builtin_profile("ex3_q6");
    auto f3 = make_frame(p3, 5.5, 1.0);
    for (int i = 1; i < 100; ++i) {
        const double a = double(i) / 100.0;
        const double s0 = p3.eval_u0pp(a);
        const double s1 = uxx(f3, a);
        if (s0 != 0.0) CHECK(s0 * s1 > 0.0);
    }
}

TEST_CASE("jacobian: identity at t = 0, unit mass, pointwise growth at the maximum") {
    const auto p = builtin_profile("ex2_q5");
    auto f0 = make_frame(p, 2.0, 0.0);
    for (double a : {0.0, 0.4, 1.0}) CHECK(gamma_alpha(f0, a) == doctest::Approx(1.0).epsilon(1e-10));

    // independent composite-Simpson check of int gamma_alpha = 1
    auto f = make_frame_jmin(p, 2.0, 0.3);
    const int n = 20000;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double a = double(i) / n;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * gamma_alpha(f, a);
    }
    acc /= 3.0 * n;
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-10));

    QuadratureSpec s;
    s.singularity_guard = 1e-9;
    double prev = 0.0;
    for (double jm : {1e-2, 1e-4, 1e-6}) {
        auto fd = make_frame_jmin(p, 2.0, jm, s);
        const double g = gamma_alpha(fd, 0.0);
        CHECK(g > prev);
        prev = g;
    }
    CHECK(prev > 5.0);  // diverges at the maximum as eta -> eta*
}

TEST_CASE("characteristics: pinned ends, identity at t = 0, monotone") {
    const auto p = builtin_profile("ex5_mixed");
    const double lam = -1.0 / 3.0;
    auto f0 = make_frame(p, lam, 0.0);
    for (double a : {0.2, 0.6}) CHECK(characteristic(f0, a) == doctest::Approx(a).epsilon(1e-10));
    auto f = make_frame_jmin(p, lam, 1e-4);
    CHECK(characteristic(f, 0.0) == 0.0);
    CHECK(characteristic(f, 1.0) == 1.0);
    double prev = 0.0;
    for (int i = 1; i < 20; ++i) {
        const double x = characteristic(f, double(i) / 20.0);
        CHECK(x > prev);
        prev = x;
    }
    // interior blow-up location of the mixed profile
    const double a2 = p.minima.front().alpha;
    CHECK(characteristic(f, a2) == doctest::Approx(0.885).epsilon(0.004));
}

TEST_CASE("mean flux vanishes along the flow") {
    for (const auto& name : builtin_profile_names()) {
        const auto p = builtin_profile(name);
        const double lam = builtin_default_lambda(name);
        for (double jm : {0.9, 0.5, 0.1, 0.01, 1e-3}) {
            auto f = make_frame_jmin(p, lam, jm);
            auto g = [&](double a) { return ux(f, a) * gamma_alpha(f, a); };
            auto gabs = [&](double a) { return std::fabs(ux(f, a)) * gamma_alpha(f, a); };
            const double flux = detail::integrate_profile_kernel(p, g, 0.0, 1.0, f.spec).value;
            const double scale =
                detail::integrate_profile_kernel(p, gabs, 0.0, 1.0, f.spec).value;
            CHECK(std::fabs(flux) <= 1e-8 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("extrema ride the declared characteristics") {
    const auto p = builtin_profile("ex4_q32");
    auto f0 = make_frame(p, -2.5, 0.0);
    auto [M0, m0] = extrema(f0);
    CHECK(M0 == doctest::Approx(p.M0).epsilon(1e-9));
    CHECK(m0 == doctest::Approx(p.m0).epsilon(1e-9));

    QuadratureSpec s;
    s.singularity_guard = 1e-9;
    auto f = make_frame_jmin(p, -2.5, 1e-5, s);
    auto [M, m] = extrema(f);
    CHECK(m < -1e3);       // minimum diverges
    CHECK(std::fabs(M) < 10.0);  // maximum stays bounded (one-sided)

    const auto p6 = builtin_profile("ex6_linear");
    auto f6 = make_frame_jmin(p6, 1.0, 1e-5, s);
    auto [M6, m6] = extrema(f6);
    CHECK(M6 > 1e3);
    CHECK(ux(f6, 0.3) < -10.0);  // interior blows down
}

TEST_CASE("Kbar0 bounds for negative lambda") {
    // lambda in [-1, 0): 1 <= K0 <= (1 + M0/|m0|)^{1/|lambda|};
    // lambda < -1:       K0 <= 1 (and positive).
    for (const auto& name : {"ex4_q32", "ex5_mixed"}) {
        const auto p = builtin_profile(name);
        for (double lam : {-0.4, -1.0, -2.5}) {
            const double cap = std::pow(1.0 + p.M0 / std::fabs(p.m0), 1.0 / std::fabs(lam));
            for (double jm : {0.9, 0.4, 0.05, 1e-4}) {
                QuadratureSpec s;
                s.singularity_guard = 1e-6;
                auto f = make_frame_jmin(p, lam, jm, s);
                CHECK(f.kbar0 > 0.0);
                if (lam >= -1.0) {
                    CHECK(f.kbar0 >= 1.0 - 1e-12);
                    CHECK(f.kbar0 <= cap * (1.0 + 1e-12));
                } else {
                    CHECK(f.kbar0 <= 1.0 + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("frame at eta* for one-sided data stays evaluable off the blow-up set") {
    // b q = (1 + 1/lambda) q = 0.9 < 1: the endpoint state is integrable.
    const auto p = builtin_profile("ex4_q32");
    auto f = make_frame_jmin(p, -2.5, 0.0);
    CHECK(f.eta == doctest::Approx(p.eta_star(-2.5)));
    CHECK(std::isfinite(f.kbar0));
    CHECK(std::isfinite(f.kbar1));
    for (double a : {0.2, 0.5, 0.9}) CHECK(std::isfinite(ux(f, a)));
    CHECK(std::isinf(ux(f, 0.0)));  // the minimum itself has diverged
}

TEST_CASE("mis-declared extremal locations are caught") {
    auto p = builtin_profile("ex6_linear");
    p.maxima = {{0.25, 1.0, -3.0, 2}};  // wrong location
    auto f = make_frame_jmin(p, 1.0, 0.05);
    CHECK_THROWS_AS(extrema(f), numerics_error);
}

// t(eta) closed form for the cube-root example.
static double ex1_time_closed(double eta) {
    const double at = std::atanh(2.0 * eta / (eta - 6.0));
    return -9.0 * (2.0 * eta * (6.0 - 5.0 * eta) + 9.0 * (eta - 2.0) * (eta - 2.0) * at) /
           (16.0 * eta * eta);
}

TEST_CASE("time of eta: closed form, Burgers identity") {
    const auto p1 = builtin_profile("ex1_q13");
    for (double eta : {0.5, 1.0, 1.5})
        CHECK(time_of_eta(p1, 0.5, eta) == doctest::Approx(ex1_time_closed(eta)).epsilon(1e-6));

    // lambda = -1 with mean-zero data: K0 == 1, so t = eta exactly.
    const auto p4 = builtin_profile("ex4_q32");
    CHECK(time_of_eta(p4, -1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(time_of_eta(p4, -1.0, p4.eta_star(-1.0)) ==
          doctest::Approx(p4.eta_star(-1.0)).epsilon(1e-9));
}

TEST_CASE("eta-time map: knots, round trip, blow-up time") {
    const auto p = builtin_profile("ex2_q5");
    auto map = build_eta_time_map(p, 2.0, 120);
    CHECK(map.t_k.front() == 0.0);
    for (std::size_t i = 1; i < map.t_k.size(); ++i) {
        CHECK(map.eta_k[i] > map.eta_k[i - 1]);
        CHECK(map.t_k[i] > map.t_k[i - 1]);
    }
    const double t03 = map.t_of_eta(0.3);
    const double eta_back = map.eta_of_time(t03);
    CHECK(eta_back == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(std::isinf(map.t_star));  // lambda = 2 < q/2: global

    const auto p1 = builtin_profile("ex1_q13");
    auto map1 = build_eta_time_map(p1, 0.5, 160);
    CHECK(map1.t_star == doctest::Approx(2.25).epsilon(1e-6));
    // near-blow-up query lands close to eta* = 2
    const double eta_late = map1.eta_of_time(2.25 - 1e-3);
    CHECK(eta_late > 1.999);
    CHECK(eta_late < 2.0);
    const double t_back = map1.t_of_eta(eta_late);
    CHECK(std::fabs(t_back - (2.25 - 1e-3)) < 1e-9);
    CHECK_THROWS_AS(map1.eta_of_time(2.26), std::out_of_range);
    CHECK(map1.eta_of_time(0.0) == 0.0);
}

TEST_CASE("eta-time map for negative lambda carries the finite blow-up time") {
    const auto p = builtin_profile("ex4_q32");
    auto map = build_eta_time_map(p, -2.5, 100);
    CHECK(std::isfinite(map.t_star));
    CHECK(map.t_star == doctest::Approx(0.4611).epsilon(2e-3));
    const double t = map.t_of_eta(0.2);
    CHECK(map.eta_of_time(t) == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("u at the flow map integrates back to the initial data at t = 0") {
    const auto p = builtin_profile("ex6_linear");
    auto f0 = make_frame(p, 1.0, 0.0);
    // u0(alpha) = alpha(alpha-1)(alpha-1/2)
    for (double a : {0.25, 0.5, 0.75}) {
        const double u0 = a * (a - 1.0) * (a - 0.5);
        CHECK(u_at(f0, a) == doctest::Approx(u0).epsilon(1e-9));
    }
    // alpha(x) inverts the characteristic
    auto f = make_frame_jmin(p, 1.0, 0.2);
    const double x = characteristic(f, 0.37);
    CHECK(alpha_of_x(f, x) == doctest::Approx(0.37).epsilon(1e-9));
}
