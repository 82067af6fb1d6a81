#pragma once

// Initial-data profiles u0'(alpha) on [0,1] together with their extremal
// structure and the local power-law curvature data
//
//     u0'(alpha) ~ M0 + C1 |alpha - amax|^q   near each maximum  (C1 < 0),
//     u0'(alpha) ~ m0 + C2 |alpha - amin|^q   near each minimum  (C2 > 0),
//
// which is what the whole solution theory keys on.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"

namespace pjx {

enum class Boundary { periodic, dirichlet };

// One location where u0' attains its global max or min.  coeff is the local
// power-law coefficient (C1 at maxima, C2 at minima); sides is 2 for an
// interior point and 1 for a domain endpoint (only one flank contributes to
// the singular integrals).
struct ExtremalPoint {
    double alpha = 0.0;
    double q = 1.0;
    double coeff = 0.0;
    int sides = 2;
};

struct InitialProfile {
    std::string name;
    std::function<double(double)> u0p;   // u0'(alpha)
    std::function<double(double)> u0pp;  // optional u0''(alpha); empty -> central differences
    // Optional cancellation-free evaluators of M0 - u0' and u0' - m0.  Deep
    // near-singularity evaluations (J ~ 1e-19) lose all digits if the gap is
    // formed by subtraction, so builtins supply factored closed forms.
    std::function<double(double)> gap_max;
    std::function<double(double)> gap_min;

    double q = 1.0;  // min local exponent over the canonically active side
    double M0 = 0.0;
    double m0 = 0.0;
    std::vector<ExtremalPoint> maxima;  // sorted, coeff < 0
    std::vector<ExtremalPoint> minima;  // sorted, coeff > 0
    double C1 = 0.0;
    double C2 = 0.0;
    Boundary boundary = Boundary::dirichlet;

    double eval_u0p(double alpha) const {
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw std::domain_error(name + ": alpha outside [0,1]");
        return u0p(alpha);
    }

    double eval_u0pp(double alpha) const {
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw std::domain_error(name + ": alpha outside [0,1]");
        if (u0pp) return u0pp(alpha);
        const double h = 1e-6;
        const double lo = std::max(0.0, alpha - h), hi = std::min(1.0, alpha + h);
        return (u0p(hi) - u0p(lo)) / (hi - lo);
    }

    // M0 - u0'(alpha) >= 0
    double eval_gap_max(double alpha) const {
        const double g = gap_max ? gap_max(alpha) : M0 - u0p(alpha);
        return g < 0.0 ? 0.0 : g;
    }

    // u0'(alpha) - m0 >= 0
    double eval_gap_min(double alpha) const {
        const double g = gap_min ? gap_min(alpha) : u0p(alpha) - m0;
        return g < 0.0 ? 0.0 : g;
    }

    // eta* = 1/(lambda M0) for lambda > 0, 1/(lambda m0) for lambda < 0.
    double eta_star(double lambda) const {
        if (lambda == 0.0) throw std::domain_error("eta_star undefined for lambda = 0");
        if (lambda > 0.0) {
            if (!(M0 > 0.0) || maxima.empty())
                throw std::domain_error(name + ": lambda > 0 needs a positive maximum");
            return 1.0 / (lambda * M0);
        }
        if (!(m0 < 0.0) || minima.empty())
            throw std::domain_error(name + ": lambda < 0 needs a negative minimum");
        return 1.0 / (lambda * m0);
    }

    // Extremal locations where J vanishes first: maxima for lambda > 0,
    // minima for lambda < 0.
    const std::vector<ExtremalPoint>& active(double lambda) const {
        if (lambda == 0.0) throw std::domain_error("no active side for lambda = 0");
        return lambda > 0.0 ? maxima : minima;
    }

    double active_value(double lambda) const { return lambda > 0.0 ? M0 : m0; }

    // Smallest local exponent over the active side (drives the earliest
    // asymptotics of the representation formula).
    double active_q(double lambda) const {
        const auto& pts = active(lambda);
        double qq = pts.front().q;
        for (const auto& p : pts) qq = std::min(qq, p.q);
        return qq;
    }
};

// ---------------------------------------------------------------------------
// Builtins: the worked initial-data families, with exact metadata.
// ---------------------------------------------------------------------------

namespace detail {

inline InitialProfile one_sided_max_family(std::string name, double qmax, double ampl,
                                           double scale) {
    // u0 = scale * alpha (1 - alpha^qmax):  u0' = scale (1 - ampl alpha^qmax)
    // with ampl = 1 + qmax.  Max at 0 (one flank), min at 1 (locally linear).
    InitialProfile p;
    p.name = std::move(name);
    p.u0p = [=](double a) { return scale * (1.0 - ampl * std::pow(a, qmax)); };
    p.u0pp = [=](double a) { return -scale * ampl * qmax * std::pow(a, qmax - 1.0); };
    p.M0 = scale;
    p.m0 = scale * (1.0 - ampl);
    p.gap_max = [=](double a) { return scale * ampl * std::pow(a, qmax); };
    p.gap_min = [=](double a) { return scale * ampl * (1.0 - std::pow(a, qmax)); };
    p.q = qmax;
    p.C1 = -scale * ampl;
    p.C2 = scale * ampl * qmax;  // slope of the gap at alpha = 1
    p.maxima = {{0.0, qmax, p.C1, 1}};
    p.minima = {{1.0, 1.0, p.C2, 1}};
    p.boundary = Boundary::dirichlet;
    return p;
}

}  // namespace detail

// u0 = alpha (alpha^{3/2} - 1): one-sided minimum at 0 with q = 3/2.
inline InitialProfile builtin_ex4_q32() {
    InitialProfile p;
    p.name = "ex4_q32";
    p.u0p = [](double a) { return 2.5 * std::pow(a, 1.5) - 1.0; };
    p.u0pp = [](double a) { return 3.75 * std::sqrt(a); };
    p.M0 = 1.5;
    p.m0 = -1.0;
    p.gap_min = [](double a) { return 2.5 * std::pow(a, 1.5); };
    p.gap_max = [](double a) { return 2.5 * (1.0 - std::pow(a, 1.5)); };
    p.q = 1.5;
    p.C1 = -3.75;
    p.C2 = 2.5;
    p.minima = {{0.0, 1.5, 2.5, 1}};
    p.maxima = {{1.0, 1.0, -3.75, 1}};
    p.boundary = Boundary::dirichlet;
    return p;
}

// u0 = alpha (1-alpha)(alpha-3/4)(alpha-c), c = (1+4 sqrt22)/36: the minimum
// m0 = (c-1)/4 is attained at both alpha = 1 (linear flank, q = 1) and at the
// interior point (4+sqrt22)/24 (quadratic, q = 2).
inline InitialProfile builtin_ex5_mixed() {
    const double s22 = std::sqrt(22.0);
    const double c = (1.0 + 4.0 * s22) / 36.0;
    const double a2 = (4.0 + s22) / 24.0;  // interior minimum
    const double m0 = (c - 1.0) / 4.0;
    const double b3 = 3.0 * (c + 1.75);
    const double b1 = 3.5 * c + 1.5;
    const double b0 = 0.75 * c;
    InitialProfile p;
    p.name = "ex5_mixed";
    p.u0p = [=](double a) { return ((-4.0 * a + b3) * a - b1) * a + b0; };
    p.u0pp = [=](double a) { return (-12.0 * a + 2.0 * b3) * a - b1; };
    p.M0 = b0;  // at alpha = 0
    p.m0 = m0;
    // u0' - m0 = -4 (alpha-1)(alpha-a2)^2, exact factorization.
    p.gap_min = [=](double a) {
        const double d = a - a2;
        return -4.0 * (a - 1.0) * d * d;
    };
    // M0 - u0' = alpha (4 alpha^2 - b3 alpha + b1), positive-definite quadratic.
    p.gap_max = [=](double a) { return a * ((4.0 * a - b3) * a + b1); };
    p.q = 1.0;  // min over the two minima
    p.C1 = -b1;
    p.C2 = 4.0 * (1.0 - a2) * (1.0 - a2);
    p.maxima = {{0.0, 1.0, -b1, 1}};
    p.minima = {{a2, 2.0, 4.0 * (1.0 - a2), 2}, {1.0, 1.0, 4.0 * (1.0 - a2) * (1.0 - a2), 1}};
    p.boundary = Boundary::dirichlet;
    return p;
}

// u0 = alpha (alpha-1)(alpha-1/2): M0 = 1/2 at both endpoints (q = 1),
// minimum -1/4 at the midpoint (q = 2).
inline InitialProfile builtin_ex6_linear() {
    InitialProfile p;
    p.name = "ex6_linear";
    p.u0p = [](double a) { return 0.5 - 3.0 * a + 3.0 * a * a; };
    p.u0pp = [](double a) { return 6.0 * a - 3.0; };
    p.M0 = 0.5;
    p.m0 = -0.25;
    p.gap_max = [](double a) { return 3.0 * a * (1.0 - a); };
    p.gap_min = [](double a) {
        const double d = a - 0.5;
        return 3.0 * d * d;
    };
    p.q = 1.0;
    p.C1 = -3.0;
    p.C2 = 3.0;
    p.maxima = {{0.0, 1.0, -3.0, 1}, {1.0, 1.0, -3.0, 1}};
    p.minima = {{0.5, 2.0, 3.0, 2}};
    p.boundary = Boundary::dirichlet;
    return p;
}

// Power-law family: u0' = M0 + C1 |alpha-1/2|^q on |alpha-1/2| <= 1/4,
// patched to a cosine dip down to m0 on the outer quarters.  m0 is chosen so
// that u0' has zero mean (periodic-compatible).
inline InitialProfile powerlaw_profile(double q, double M0, double C1) {
    if (!(q > 0.0)) throw std::domain_error("powerlaw: q must be positive");
    if (!(M0 > 0.0) || !(C1 < 0.0))
        throw std::domain_error("powerlaw: need M0 > 0 and C1 < 0");
    const double r = 0.25;
    const double vr = M0 + C1 * std::pow(r, q);
    const double m0 = -vr - 2.0 * M0 - 8.0 * C1 * std::pow(r, q + 1.0) / (q + 1.0);
    if (!(m0 < 0.0) || !(vr > m0))
        throw std::domain_error("powerlaw: |C1| too large for this (q, M0)");
    const double pi = 3.14159265358979323846;
    const double dip = vr - m0;
    InitialProfile p;
    p.name = "powerlaw";
    p.u0p = [=](double a) {
        const double s = std::fabs(a - 0.5);
        if (s <= r) return M0 + C1 * std::pow(s, q);
        const double cth = std::cos(2.0 * pi * (s - r));
        return m0 + dip * cth * cth;
    };
    p.u0pp = [=](double a) {
        const double s = std::fabs(a - 0.5);
        const double sgn = a < 0.5 ? -1.0 : 1.0;
        if (s <= r) return sgn * q * C1 * std::pow(s, q - 1.0);
        return -sgn * 2.0 * pi * dip * std::sin(4.0 * pi * (s - r));
    };
    p.gap_max = [=](double a) {
        const double s = std::fabs(a - 0.5);
        if (s <= r) return -C1 * std::pow(s, q);
        const double cth = std::cos(2.0 * pi * (s - r));
        return (M0 - m0) - dip * cth * cth;
    };
    p.gap_min = [=](double a) {
        const double s = std::fabs(a - 0.5);
        if (s <= r) return M0 + C1 * std::pow(s, q) - m0;
        const double sth = std::sin(2.0 * pi * (s - r));
        return dip * sth * sth;
    };
    p.M0 = M0;
    p.m0 = m0;
    p.q = q;
    p.C1 = C1;
    p.C2 = 4.0 * pi * pi * dip;
    p.maxima = {{0.5, q, C1, 2}};
    p.minima = {{0.0, 2.0, p.C2, 1}, {1.0, 2.0, p.C2, 1}};
    p.boundary = Boundary::periodic;
    return p;
}

inline InitialProfile builtin_profile(const std::string& name) {
    if (name == "ex1_q13") return detail::one_sided_max_family("ex1_q13", 1.0 / 3.0, 4.0 / 3.0, 1.0);
    if (name == "ex1_q65") return detail::one_sided_max_family("ex1_q65", 1.2, 2.2, 1.0);
    if (name == "ex2_q5") return detail::one_sided_max_family("ex2_q5", 5.0, 6.0, 1.0);
    if (name == "ex2_q52") return detail::one_sided_max_family("ex2_q52", 2.5, 3.5, 1.0);
    if (name == "ex3_q6") return detail::one_sided_max_family("ex3_q6", 6.0, 7.0, 1.0 / 11.0);
    if (name == "ex4_q32") return builtin_ex4_q32();
    if (name == "ex5_mixed") return builtin_ex5_mixed();
    if (name == "ex6_linear") return builtin_ex6_linear();
    throw std::invalid_argument("unknown builtin profile: " + name);
}

inline const std::vector<std::string>& builtin_profile_names() {
    static const std::vector<std::string> names = {
        "ex1_q13", "ex1_q65", "ex2_q5", "ex2_q52",
        "ex3_q6",  "ex4_q32", "ex5_mixed", "ex6_linear"};
    return names;
}

// The canonical model parameter each builtin was designed for.
inline double builtin_default_lambda(const std::string& name) {
    if (name == "ex1_q13" || name == "ex1_q65") return 0.5;
    if (name == "ex2_q5") return 2.0;
    if (name == "ex2_q52") return 1.25;
    if (name == "ex3_q6") return 5.5;
    if (name == "ex4_q32") return -2.5;
    if (name == "ex5_mixed") return -1.0 / 3.0;
    if (name == "ex6_linear") return 1.0;
    throw std::invalid_argument("unknown builtin profile: " + name);
}

// ---------------------------------------------------------------------------
// Local-expansion verification: log-log fit of the gap against distance from
// each declared extremal location.
// ---------------------------------------------------------------------------

struct ExpansionFit {
    double alpha = 0.0;
    bool is_max = false;
    double fitted_q = 0.0;
    double fitted_coeff = 0.0;  // |C1| resp. C2
    double residual = 0.0;      // max abs log-space misfit
};

namespace detail {

inline ExpansionFit fit_one_location(const InitialProfile& p, const ExtremalPoint& loc,
                                     bool is_max, double h_lo, double h_hi,
                                     double residual_tol) {
    std::vector<double> lx, ly;
    const int n = 25;
    for (int i = 0; i < n; ++i) {
        const double h = h_lo * std::pow(h_hi / h_lo, double(i) / (n - 1));
        double gap_sum = 0.0;
        int sides = 0;
        if (loc.alpha + h <= 1.0) {
            gap_sum += is_max ? p.eval_gap_max(loc.alpha + h) : p.eval_gap_min(loc.alpha + h);
            ++sides;
        }
        if (loc.alpha - h >= 0.0) {
            gap_sum += is_max ? p.eval_gap_max(loc.alpha - h) : p.eval_gap_min(loc.alpha - h);
            ++sides;
        }
        if (sides == 0) continue;
        const double gap = gap_sum / sides;
        if (!(gap > 0.0))
            throw fit_error(p.name + ": no local power law at alpha = " + std::to_string(loc.alpha));
        lx.push_back(std::log(h));
        ly.push_back(std::log(gap));
    }
    // least squares line ly = slope*lx + icept
    const double m = double(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i]; sy += ly[i]; sxx += lx[i] * lx[i]; sxy += lx[i] * ly[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double icept = (sy - slope * sx) / m;
    double resid = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i)
        resid = std::max(resid, std::fabs(ly[i] - (slope * lx[i] + icept)));
    if (resid > residual_tol)
        throw fit_error(p.name + ": power-law fit residual " + std::to_string(resid) +
                        " at alpha = " + std::to_string(loc.alpha));
    ExpansionFit f;
    f.alpha = loc.alpha;
    f.is_max = is_max;
    f.fitted_q = slope;
    f.fitted_coeff = std::exp(icept);
    f.residual = resid;
    return f;
}

}  // namespace detail

// Fits |u0'(a +- h) - M0| ~ |C1| h^q (resp. minima) over h in [1e-5, 1e-2] and
// returns the per-location exponents/coefficients.  Throws fit_error when a
// location does not follow a power law (mis-declared metadata).
inline std::vector<ExpansionFit> verify_local_expansion(const InitialProfile& p,
                                                        double h_lo = 1e-5, double h_hi = 1e-2,
                                                        double residual_tol = 0.35) {
    if (p.maxima.empty() && p.minima.empty())
        throw std::domain_error(p.name + ": no declared extrema to verify");
    std::vector<ExpansionFit> out;
    for (const auto& loc : p.maxima)
        out.push_back(detail::fit_one_location(p, loc, true, h_lo, h_hi, residual_tol));
    for (const auto& loc : p.minima)
        out.push_back(detail::fit_one_location(p, loc, false, h_lo, h_hi, residual_tol));
    return out;
}

}  // namespace pjx
