#pragma once

// JSON schemas for profiles, verdicts and blow-up reports, plus deterministic
// number formatting for the CSV emitters.

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "classifier.hpp"
#include "diagnostics.hpp"
#include "profiles.hpp"

namespace pjx {

// Fixed formatting so identical runs produce identical bytes.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline std::vector<ExtremalPoint> parse_locations(const nlohmann::json& arr, double q_default,
                                                  double coeff_default) {
    std::vector<ExtremalPoint> out;
    for (const auto& e : arr) {
        ExtremalPoint pt;
        if (e.is_number()) {
            pt.alpha = e.get<double>();
            pt.q = q_default;
            pt.coeff = coeff_default;
        } else {
            pt.alpha = e.at("alpha").get<double>();
            pt.q = e.value("q", q_default);
            pt.coeff = e.value("coeff", coeff_default);
            if (e.contains("sides")) pt.sides = e["sides"].get<int>();
        }
        if (!e.is_object() || !e.contains("sides"))
            pt.sides = (pt.alpha == 0.0 || pt.alpha == 1.0) ? 1 : 2;
        out.push_back(pt);
    }
    return out;
}

}  // namespace detail

// Profile schema:
// {"name", "kind": "builtin"|"polynomial"|"powerlaw", "coeffs": [u0 ascending],
//  "q", "M0", "m0", "maxima": [...], "minima": [...], "C1", "C2", "boundary"}
// Locations may be bare alphas or {"alpha","q","coeff","sides"} objects.
inline InitialProfile profile_from_json(const nlohmann::json& j) {
    const std::string kind = j.value("kind", "builtin");
    if (kind == "builtin") return builtin_profile(j.at("name").get<std::string>());
    if (kind == "powerlaw")
        return powerlaw_profile(j.at("q").get<double>(), j.at("M0").get<double>(),
                                j.at("C1").get<double>());
    if (kind != "polynomial") throw std::invalid_argument("profile_from_json: unknown kind " + kind);

    InitialProfile p;
    p.name = j.value("name", "polynomial");
    const std::vector<double> c = j.at("coeffs").get<std::vector<double>>();  // u0, ascending
    if (c.size() < 2) throw std::invalid_argument("profile_from_json: need at least two coeffs");
    std::vector<double> d1(c.size() - 1), d2;
    for (std::size_t i = 1; i < c.size(); ++i) d1[i - 1] = double(i) * c[i];
    d2.resize(d1.size() > 1 ? d1.size() - 1 : 1, 0.0);
    for (std::size_t i = 1; i < d1.size(); ++i) d2[i - 1] = double(i) * d1[i];
    auto horner = [](const std::vector<double>& a, double x) {
        double acc = 0.0;
        for (std::size_t i = a.size(); i-- > 0;) acc = acc * x + a[i];
        return acc;
    };
    p.u0p = [d1, horner](double a) { return horner(d1, a); };
    p.u0pp = [d2, horner](double a) { return horner(d2, a); };
    p.q = j.at("q").get<double>();
    p.M0 = j.at("M0").get<double>();
    p.m0 = j.at("m0").get<double>();
    p.C1 = j.value("C1", -1.0);
    p.C2 = j.value("C2", 1.0);
    p.maxima = detail::parse_locations(j.value("maxima", nlohmann::json::array()), p.q, p.C1);
    p.minima = detail::parse_locations(j.value("minima", nlohmann::json::array()), p.q, p.C2);
    p.boundary = j.value("boundary", std::string("dirichlet")) == "periodic" ? Boundary::periodic
                                                                             : Boundary::dirichlet;
    return p;
}

inline nlohmann::json verdict_to_json(const RegularityVerdict& v,
                                      const std::vector<LpVerdict>& lps = {}) {
    nlohmann::json j;
    j["linfty"] = to_string(v.linfty);
    j["t_star"] = to_string(v.t_star_finite);
    j["provenance"] = nlohmann::json::array({v.provenance});
    j["caveats"] = v.caveats;
    j["lp"] = nlohmann::json::array();
    for (const auto& lp : lps) {
        nlohmann::json e;
        e["p"] = lp.p;
        e["outcome"] = to_string(lp.outcome);
        e["provenance"] = lp.provenance;
        j["lp"].push_back(e);
        j["provenance"].push_back(lp.provenance);
    }
    return j;
}

inline nlohmann::json report_to_json(const BlowupReport& r) {
    nlohmann::json j;
    if (std::isinf(r.t_star))
        j["t_star"] = "inf";
    else
        j["t_star"] = r.t_star;
    switch (r.method) {
        case BlowupReport::Method::quadrature_tail: j["method"] = "quadrature+tail"; break;
        case BlowupReport::Method::bracketed: j["method"] = "bracketed"; break;
        default: j["method"] = "numeric-only"; break;
    }
    if (r.bracket) {
        j["bracket"] = nlohmann::json::array();
        j["bracket"].push_back((*r.bracket)[0]);
        if (std::isinf((*r.bracket)[1]))
            j["bracket"].push_back("inf");
        else
            j["bracket"].push_back((*r.bracket)[1]);
    } else {
        j["bracket"] = nullptr;
    }
    j["blowup_type"] = to_string(r.blowup_type);
    j["t_star_finite"] = to_string(r.t_star_finite);
    j["locations_eulerian"] = r.locations_eulerian;
    j["notes"] = r.notes;
    return j;
}

}  // namespace pjx
