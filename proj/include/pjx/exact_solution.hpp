#pragma once

// The representation formulae: J, Kbar_i, u_x, u_xx, the characteristics and
// their jacobian, extrema M(t)/m(t), and the bijection between the auxiliary
// clock eta and physical time t.
//
// Frames are keyed internally by jmin = J(active extremum) = 1 - eta/eta*
// rather than by eta: deep asymptotic states (jmin ~ 1e-19) are perfectly
// representable that way, while eta itself would round onto eta*.

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "asymptotics.hpp"
#include "errors.hpp"
#include "profiles.hpp"
#include "quadrature.hpp"

namespace pjx {

struct SolutionFrame {
    const InitialProfile* profile = nullptr;
    double lambda = 0.0;
    double jmin = 1.0;  // J at the active extremal locations
    double eta = 0.0;
    double t = std::numeric_limits<double>::quiet_NaN();
    double kbar0 = 1.0;
    double kbar1 = 1.0;
    double l1 = 0.0;  // int u0'(a) J^{-(1+1/lambda)} da, the regular small-eta numerator
    QuadratureSpec spec;

    double lambda_eta() const { return (1.0 - jmin) / profile->active_value(lambda); }
};

inline double jac_J(const SolutionFrame& f, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("jac_J: alpha outside [0,1]");
    return JEval{f.profile, f.lambda, f.jmin}(alpha);
}

inline SolutionFrame make_frame_jmin(const InitialProfile& p, double lambda, double jmin,
                                     const QuadratureSpec& spec = {}) {
    if (lambda == 0.0)
        throw std::domain_error("make_frame: lambda = 0 degenerates the transformation");
    SolutionFrame f;
    f.profile = &p;
    f.lambda = lambda;
    f.jmin = jmin;
    f.eta = p.eta_star(lambda) * (1.0 - jmin);
    f.spec = spec;
    f.kbar0 = integrate_jpow_jmin(p, lambda, jmin, 1.0 / lambda, spec);
    f.kbar1 = integrate_jpow_jmin(p, lambda, jmin, 1.0 + 1.0 / lambda, spec);
    auto w = [&p](double a) { return p.u0p(a); };
    IntegralResult l1 =
        integrate_jpow_weighted_jmin(p, lambda, jmin, 1.0 + 1.0 / lambda, w, 0.0, 1.0, spec);
    if (!l1.converged) throw numerics_error("make_frame: weighted integral did not converge");
    f.l1 = l1.value;
    return f;
}

inline SolutionFrame make_frame(const InitialProfile& p, double lambda, double eta,
                                const QuadratureSpec& spec = {}) {
    const double es = p.eta_star(lambda);
    if (!(eta >= 0.0)) throw std::domain_error("make_frame: eta must be >= 0");
    double jmin = 1.0 - eta / es;
    if (jmin < -1e-12) throw std::domain_error("make_frame: eta beyond eta*");
    return make_frame_jmin(p, lambda, std::max(jmin, 0.0), spec);
}

inline double kbar(const SolutionFrame& f, int i) {
    if (i < 0) throw std::domain_error("kbar: i >= 0 required");
    if (i == 0) return f.kbar0;
    if (i == 1) return f.kbar1;
    return integrate_jpow_jmin(*f.profile, f.lambda, f.jmin, i + 1.0 / f.lambda, f.spec);
}

// u_x along the characteristic through alpha, singular form (prefactor
// 1/(lambda eta) -- removable at eta = 0 but numerically useless there).
inline double ux_mainsolu(const SolutionFrame& f, double alpha) {
    const double J = jac_J(f, alpha);
    return (1.0 / (f.lambda_eta() * std::pow(f.kbar0, 2.0 * f.lambda))) *
           (1.0 / J - f.kbar1 / f.kbar0);
}

// Equivalent form regular at eta = 0: K0^{-2 lambda} (u0'/J - L1/K0).
inline double ux_finalsolu(const SolutionFrame& f, double alpha) {
    const double J = jac_J(f, alpha);
    return std::pow(f.kbar0, -2.0 * f.lambda) *
           (f.profile->u0p(alpha) / J - f.l1 / f.kbar0);
}

inline double ux(const SolutionFrame& f, double alpha) {
    return f.eta <= 1e-8 ? ux_finalsolu(f, alpha) : ux_mainsolu(f, alpha);
}

// u_xx along the characteristic; carries the sign of u0'' for all time.
inline double uxx(const SolutionFrame& f, double alpha) {
    const double J = jac_J(f, alpha);
    return f.profile->eval_u0pp(alpha) * std::pow(J, -(2.0 - 1.0 / f.lambda)) *
           std::pow(f.kbar0, 1.0 - 2.0 * f.lambda);
}

// Jacobian of the flow map, gamma_alpha = J^{-1/lambda} / K0.
inline double gamma_alpha(const SolutionFrame& f, double alpha) {
    return std::pow(jac_J(f, alpha), -1.0 / f.lambda) / f.kbar0;
}

// Eulerian position gamma(alpha, t) = int_0^alpha J^{-1/lambda} / K0.
inline double characteristic(const SolutionFrame& f, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::domain_error("characteristic: alpha outside [0,1]");
    if (alpha == 0.0) return 0.0;
    if (alpha == 1.0) return 1.0;
    const double lam = f.lambda, jm = f.jmin;
    JEval J{f.profile, lam, jm};
    auto g = [&](double a) { return std::pow(J(a), -1.0 / lam); };
    IntegralResult r = detail::integrate_profile_kernel(*f.profile, g, 0.0, alpha, f.spec);
    if (!r.converged) throw numerics_error("characteristic: quadrature did not converge");
    return r.value / f.kbar0;
}

// u at the Eulerian position gamma(alpha, t), by integrating u_x gamma_alpha.
inline double u_at(const SolutionFrame& f, double alpha) {
    if (alpha == 0.0) return 0.0;
    auto g = [&](double a) { return ux(f, a) * gamma_alpha(f, a); };
    IntegralResult r = detail::integrate_profile_kernel(*f.profile, g, 0.0, alpha, f.spec);
    return r.value;
}

// Lagrangian label mapping to the Eulerian point x, by bisection on the
// strictly increasing characteristic.
inline double alpha_of_x(const SolutionFrame& f, double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("alpha_of_x: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 52; ++it) {
        const double mid = 0.5 * (lo + hi);
        (characteristic(f, mid) < x ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// M(t) and m(t); the extrema ride the characteristics through the declared
// extremal locations.  A 1000-point grid cross-check guards mis-declared
// metadata.
inline std::pair<double, double> extrema(const SolutionFrame& f, bool grid_check = true) {
    const double M = ux(f, f.profile->maxima.empty() ? 0.0 : f.profile->maxima.front().alpha);
    const double m = ux(f, f.profile->minima.empty() ? 0.0 : f.profile->minima.front().alpha);
    if (grid_check) {
        double gmax = -std::numeric_limits<double>::infinity(), gmin = -gmax;
        for (int i = 0; i <= 1000; ++i) {
            const double v = ux(f, double(i) / 1000.0);
            gmax = std::max(gmax, v);
            gmin = std::min(gmin, v);
        }
        const double tol = 1e-6;
        if (gmax > M + tol * (1.0 + std::fabs(M)) || gmin < m - tol * (1.0 + std::fabs(m)))
            throw numerics_error("extrema: grid extremum exceeds declared-location value");
    }
    return {M, m};
}

// Tabulated flow map on a uniform label grid: cumulative Simpson of
// gamma_alpha, ends pinned exactly.  Meant for grid dumps and Eulerian
// comparisons in the smooth regime, where gamma_alpha is well resolved.
struct CharacteristicGrid {
    const SolutionFrame* frame = nullptr;
    std::vector<double> alpha, x;

    double x_of_alpha(double a) const {
        const double pos = a * (alpha.size() - 1);
        const std::size_t i = std::min(std::size_t(pos), alpha.size() - 2);
        // node value plus a 3-point Gauss panel over the sub-cell
        return x[i] + subcell(alpha[i], a);
    }

    double alpha_of_x(double xx) const {
        std::size_t lo = 0, hi = x.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (x[mid] <= xx ? lo : hi) = mid;
        }
        const double s = (xx - x[lo]) / (x[hi] - x[lo]);
        double a = alpha[lo] * (1.0 - s) + alpha[hi] * s;
        // Newton against the sub-cell quadrature; linear seeding alone leaves
        // O(h^2) noise, too coarse for finite differences across frames.
        for (int it = 0; it < 3; ++it) {
            const double resid = x[lo] + subcell(alpha[lo], a) - xx;
            a -= resid / gamma_alpha(*frame, a);
            a = std::min(std::max(a, alpha[lo]), alpha[hi]);
        }
        return a;
    }

    double subcell(double a0, double a1) const {
        static constexpr double gl_x[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
        static constexpr double gl_w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
        const double h = 0.5 * (a1 - a0), c = 0.5 * (a0 + a1);
        if (h == 0.0) return 0.0;
        double acc = 0.0;
        for (int k = 0; k < 3; ++k) acc += gl_w[k] * gamma_alpha(*frame, c + h * gl_x[k]);
        return acc * h;
    }
};

inline CharacteristicGrid characteristic_grid(const SolutionFrame& f, int m = 8192) {
    if (m < 16 || m % 2) throw std::domain_error("characteristic_grid: m must be even and >= 16");
    CharacteristicGrid g;
    g.frame = &f;
    g.alpha.resize(m + 1);
    g.x.resize(m + 1);
    std::vector<double> ga(m + 1);
    const double h = 1.0 / m;
    for (int i = 0; i <= m; ++i) {
        g.alpha[i] = double(i) / m;
        ga[i] = gamma_alpha(f, g.alpha[i]);
    }
    g.x[0] = 0.0;
    for (int i = 0; i + 2 <= m; i += 2) {
        g.x[i + 1] = g.x[i] + h / 12.0 * (5.0 * ga[i] + 8.0 * ga[i + 1] - ga[i + 2]);
        g.x[i + 2] = g.x[i] + h / 3.0 * (ga[i] + 4.0 * ga[i + 1] + ga[i + 2]);
    }
    const double scale = 1.0 / g.x[m];  // gamma(1) = 1 exactly
    for (auto& v : g.x) v *= scale;
    g.x[m] = 1.0;
    return g;
}

// ---------------------------------------------------------------------------
// eta <-> t
// ---------------------------------------------------------------------------

// t(eta) = int_0^eta K0(mu)^{2 lambda} dmu, integrated in j = 1 - mu/eta*.
inline double time_of_eta(const InitialProfile& p, double lambda, double eta,
                          const QuadratureSpec& spec = {}) {
    const double es = p.eta_star(lambda);
    if (!(eta >= 0.0 && eta <= es)) throw std::domain_error("time_of_eta: eta outside [0, eta*]");
    if (eta == 0.0) return 0.0;
    const double jlo = std::max(1.0 - eta / es, 0.0);
    auto f = [&](double j) {
        return std::pow(integrate_jpow_jmin(p, lambda, j, 1.0 / lambda, spec), 2.0 * lambda);
    };
    QuadratureSpec outer;
    outer.abs_tol = 1e-10;
    outer.rel_tol = 1e-9;
    outer.max_depth = 40;
    IntegralResult r = integrate(f, jlo, 1.0, outer);
    if (!r.converged) throw numerics_error("time_of_eta: quadrature did not converge");
    return es * r.value;
}

// Tabulated monotone map between eta and t, geometrically refined toward
// eta* (knots at j = 10^{-7 k/(K-1)}).
struct EtaTimeMap {
    const InitialProfile* profile = nullptr;
    double lambda = 0.0;
    double eta_star = 0.0;
    std::vector<double> eta_k, t_k, dtde_k, slope_k;
    double t_star = std::numeric_limits<double>::infinity();
    double tail_p = 1.0;  // t near eta*: t - t_last ~ (1 - (j/j_last)^tail_p)/tail_p
    QuadratureSpec spec;

    double j_of_eta(double eta) const { return 1.0 - eta / eta_star; }

    double t_of_eta(double eta) const {
        if (!(eta >= 0.0 && eta < eta_star)) throw std::domain_error("t_of_eta: eta outside [0, eta*)");
        if (eta <= eta_k.front()) return 0.0;
        if (eta >= eta_k.back()) {
            const double jl = j_of_eta(eta_k.back());
            const double ratio = j_of_eta(eta) / jl;
            const double k2l = dtde_k.back();
            if (std::fabs(tail_p) < 1e-12)
                return t_k.back() + eta_star * k2l * jl * std::log(1.0 / ratio);
            return t_k.back() + eta_star * k2l * jl * (1.0 - std::pow(ratio, tail_p)) / tail_p;
        }
        // true per-cell integral from the nearest knot; the Hermite interpolant
        // (1e-6-ish) would break the 1e-9 round-trip contract
        return true_time(cell_of_eta(eta), eta);
    }

    double eta_of_time(double t) const {
        if (!(t >= 0.0) || t >= t_star) throw std::out_of_range("eta_of_time: t outside [0, t*)");
        if (t == 0.0) return 0.0;
        if (t >= t_k.back()) {
            // invert the anchored tail model
            const double jl = j_of_eta(eta_k.back());
            const double k2l = dtde_k.back();
            const double s = (t - t_k.back()) / (eta_star * k2l * jl);
            double ratio;
            if (std::fabs(tail_p) < 1e-12)
                ratio = std::exp(-s);
            else
                ratio = std::pow(std::max(1.0 - tail_p * s, 1e-300), 1.0 / tail_p);
            return eta_star * (1.0 - ratio * jl);
        }
        std::size_t lo = 0, hi = t_k.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (t_k[mid] <= t ? lo : hi) = mid;
        }
        double a = eta_k[lo], b = eta_k[hi];
        for (int it = 0; it < 60 && b - a > 1e-15 * eta_star; ++it) {
            const double mid = 0.5 * (a + b);
            (hermite(lo, mid) < t ? a : b) = mid;
        }
        double eta = 0.5 * (a + b);
        // Newton refinement against the true integral, not the interpolant.
        // Polished well past the 1e-9 contract: callers difference t across
        // close frames, which amplifies any slack by 1/dt.
        for (int it = 0; it < 6; ++it) {
            const double resid = true_time(lo, eta) - t;
            if (std::fabs(resid) <= 1e-12 * std::max(1.0, t)) break;
            const double deriv =
                std::pow(integrate_jpow_jmin(*profile, lambda, j_of_eta(eta), 1.0 / lambda, spec),
                         2.0 * lambda);
            eta -= resid / deriv;
            eta = std::min(std::max(eta, eta_k.front()), eta_k.back());
        }
        return eta;
    }

    std::size_t cell_of_eta(double eta) const {
        std::size_t lo = 0, hi = eta_k.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (eta_k[mid] <= eta ? lo : hi) = mid;
        }
        return lo;
    }

    double hermite(std::size_t i, double eta) const {
        const double h = eta_k[i + 1] - eta_k[i];
        const double s = (eta - eta_k[i]) / h;
        const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        const double h10 = s * (1.0 - s) * (1.0 - s);
        const double h01 = s * s * (3.0 - 2.0 * s);
        const double h11 = s * s * (s - 1.0);
        return h00 * t_k[i] + h * h10 * slope_k[i] + h01 * t_k[i + 1] + h * h11 * slope_k[i + 1];
    }

    double true_time(std::size_t i, double eta) const {
        auto f = [&](double j) {
            return std::pow(integrate_jpow_jmin(*profile, lambda, j, 1.0 / lambda, spec),
                            2.0 * lambda);
        };
        QuadratureSpec outer;
        outer.abs_tol = 1e-12;
        outer.rel_tol = 1e-11;
        outer.max_depth = 30;
        return t_k[i] + eta_star * integrate(f, j_of_eta(eta), j_of_eta(eta_k[i]), outer).value;
    }
};

inline EtaTimeMap build_eta_time_map(const InitialProfile& p, double lambda, int knots = 200,
                                     const QuadratureSpec& spec = {}) {
    if (knots < 8) throw std::domain_error("build_eta_time_map: too few knots");
    EtaTimeMap m;
    m.profile = &p;
    m.lambda = lambda;
    m.eta_star = p.eta_star(lambda);
    m.spec = spec;
    std::vector<double> j(knots);
    for (int k = 0; k < knots; ++k) j[k] = std::pow(10.0, -7.0 * k / (knots - 1));
    j[0] = 1.0;
    m.eta_k.resize(knots);
    m.t_k.resize(knots);
    m.dtde_k.resize(knots);
    auto f = [&](double jj) {
        return std::pow(integrate_jpow_jmin(p, lambda, jj, 1.0 / lambda, spec), 2.0 * lambda);
    };
    QuadratureSpec outer;
    outer.abs_tol = 1e-12;
    outer.rel_tol = 1e-10;
    outer.max_depth = 30;
    m.eta_k[0] = 0.0;
    m.t_k[0] = 0.0;
    m.dtde_k[0] = f(1.0);
    for (int k = 1; k < knots; ++k) {
        m.eta_k[k] = m.eta_star * (1.0 - j[k]);
        m.t_k[k] = m.t_k[k - 1] + m.eta_star * integrate(f, j[k], j[k - 1], outer).value;
        m.dtde_k[k] = f(j[k]);
    }
    // Monotone Hermite slopes: exact derivatives, Fritsch-Carlson limited.
    m.slope_k = m.dtde_k;
    for (int k = 0; k + 1 < knots; ++k) {
        const double sec = (m.t_k[k + 1] - m.t_k[k]) / (m.eta_k[k + 1] - m.eta_k[k]);
        m.slope_k[k] = std::min(m.slope_k[k], 3.0 * sec);
        m.slope_k[k + 1] = std::min(m.slope_k[k + 1], 3.0 * sec);
    }
    const BlowupTail tail = blowup_tail(lambda, p.active_q(lambda), p);
    m.tail_p = 2.0 * lambda * tail.kbar0_exponent + 1.0;
    const double t_tail =
        time_tail_anchored(lambda, m.eta_star, j.back(),
                           integrate_jpow_jmin(p, lambda, j.back(), 1.0 / lambda, spec), tail, p);
    m.t_star = m.t_k.back() + t_tail;
    return m;
}

}  // namespace pjx
