#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "pjx/io.hpp"
#include "pjx/mol_oracle.hpp"

using namespace pjx;

TEST_CASE("profile JSON: builtin and powerlaw kinds") {
    const auto b = profile_from_json(nlohmann::json{{"kind", "builtin"}, {"name", "ex2_q5"}});
    CHECK(b.name == "ex2_q5");
    CHECK(b.M0 == 1.0);

    const auto pw = profile_from_json(
        nlohmann::json{{"kind", "powerlaw"}, {"q", 1.5}, {"M0", 1.0}, {"C1", -1.0}});
    CHECK(pw.q == 1.5);
    CHECK(pw.maxima.front().alpha == 0.5);

    CHECK_THROWS_AS(profile_from_json(nlohmann::json{{"kind", "wat"}}), std::invalid_argument);
}

TEST_CASE("profile JSON: polynomial kind reproduces the cubic example") {
    // u0 = alpha (alpha-1)(alpha-1/2) as ascending coefficients
    nlohmann::json j = {
        {"kind", "polynomial"},
        {"name", "cubic"},
        {"coeffs", {0.0, 0.5, -1.5, 1.0}},
        {"q", 1.0},
        {"M0", 0.5},
        {"m0", -0.25},
        {"C1", -3.0},
        {"C2", 3.0},
        {"maxima", {0.0, 1.0}},
        {"minima", {nlohmann::json{{"alpha", 0.5}, {"q", 2.0}, {"coeff", 3.0}}}},
        {"boundary", "dirichlet"},
    };
    const auto p = profile_from_json(j);
    const auto ref = builtin_profile("ex6_linear");
    for (double a : {0.0, 0.2, 0.5, 0.9, 1.0}) {
        CHECK(p.u0p(a) == doctest::Approx(ref.u0p(a)).epsilon(1e-14));
        CHECK(p.eval_u0pp(a) == doctest::Approx(ref.eval_u0pp(a)).epsilon(1e-14));
    }
    CHECK(p.maxima.size() == 2);
    CHECK(p.maxima[0].sides == 1);  // endpoint defaults to one flank
    CHECK(p.minima[0].sides == 2);
    CHECK(p.minima[0].q == 2.0);
    // the parsed profile passes the metadata fit
    const auto fits = verify_local_expansion(p);
    CHECK(fits.front().fitted_q == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("verdict JSON shape") {
    const auto v = classify_linfty(1.0, 1.0);
    const auto j = verdict_to_json(v, {classify_lp(1.0, 1.0, 2.0)});
    CHECK(j["linfty"] == "two_sided_everywhere");
    CHECK(j["t_star"] == "finite");
    CHECK(j["lp"][0]["outcome"] == "diverges_at_t_star");
    CHECK(j["lp"][0]["p"] == 2.0);
}

TEST_CASE("blow-up report JSON shape") {
    const auto r = blowup_time(builtin_profile("ex4_q32"), -2.5);
    const auto j = report_to_json(r);
    CHECK(j["t_star"].get<double>() == doctest::Approx(0.461).epsilon(0.01));
    CHECK(j["blowup_type"] == "one_sided_discrete_min");
    CHECK(j["bracket"][0].get<double>() == doctest::Approx(0.4));
    CHECK(j["bracket"][1] == "inf");

    const auto rinf = blowup_time(builtin_profile("ex2_q5"), 2.0);
    CHECK(report_to_json(rinf)["t_star"] == "inf");
}

TEST_CASE("oracle snapshot schema") {
    const auto p = builtin_profile("ex6_linear");
    MolState s = mol_solve(p, 1.0, 0.01, 256);
    std::ostringstream os;
    mol_snapshot_csv(s, os);
    const std::string out = os.str();
    CHECK(out.rfind("x,u,ux\n", 0) == 0);
    // one row per node plus the header
    std::size_t rows = 0;
    for (char ch : out)
        if (ch == '\n') ++rows;
    CHECK(rows == 258);
}

TEST_CASE("deterministic formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(2.25) == "2.25");
}
