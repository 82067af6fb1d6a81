#pragma once

// Globally adaptive Gauss-Kronrod (15 point) integration, plus the
// profile-aware kernel used for every time-dependent integral of the form
// int_0^1 J(alpha,t)^{-b} dalpha.  The kernel splits at declared extremal
// points and regularizes algebraic near-singularities with the substitution
// alpha = a0 +- u^{2/q} on the flanking panels; without it, adaptivity stalls
// once the spike width drops below ~(J/|C|)^{1/q}.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "errors.hpp"
#include "profiles.hpp"

namespace pjx {

struct QuadratureSpec {
    double abs_tol = 1e-11;
    double rel_tol = 1e-10;
    int max_depth = 60;
    std::vector<double> split_points;  // extra interior breakpoints in (0,1)
    double singularity_guard = 1e-13;  // minimal allowed J at the active extremum
};

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

namespace detail {

// QUADPACK dqk15 nodes/weights on [-1,1].
inline constexpr double kGK15Nodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
inline constexpr double kGK15WeightsK[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278};
inline constexpr double kGK15WeightsG[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

template <class F>
inline void gk15(F&& f, double a, double b, double& value, double& err) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    // Keep nodes strictly inside (a,b): rounding of c +- dx may otherwise land
    // exactly on a singular endpoint.
    const double lo = std::nextafter(a, b), hi = std::nextafter(b, a);
    auto node = [&](double x) { return std::min(hi, std::max(lo, x)); };
    double fval[15];
    const double fc = f(c);
    fval[14] = fc;
    double resk = kGK15WeightsK[7] * fc;
    double resg = kGK15WeightsG[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kGK15Nodes[i];
        const double f1 = f(node(c - dx));
        const double f2 = f(node(c + dx));
        fval[2 * i] = f1;
        fval[2 * i + 1] = f2;
        resk += kGK15WeightsK[i] * (f1 + f2);
        if (i % 2 == 1) resg += kGK15WeightsG[(i - 1) / 2] * (f1 + f2);
    }
    for (double v : fval)
        if (!std::isfinite(v)) throw numerics_error("non-finite integrand value");
    value = resk * h;
    // dqk15-style error transform, scale-aware.
    const double reskh = resk * 0.5;
    double resasc = kGK15WeightsK[7] * std::fabs(fc - reskh);
    for (int i = 0; i < 7; ++i)
        resasc += kGK15WeightsK[i] *
                  (std::fabs(fval[2 * i] - reskh) + std::fabs(fval[2 * i + 1] - reskh));
    resasc *= std::fabs(h);
    err = std::fabs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
}

struct Segment {
    double a, b, value, error;
    int depth;
};

struct WorseError {
    bool operator()(const Segment& x, const Segment& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a;
    }
};

// Once bisection toward an endpoint singularity hits the floating-point
// representability wall, the remaining tail mass is invisible to sampling
// (for (b-x)^{-beta} near a nonzero b it can exceed any tolerance).  Sum the
// dyadic shells hugging the singular end and extrapolate the partial sums
// with iterated Aitken; for algebraic singularities the shell values are
// geometric and the limit comes out to near machine precision.
template <class F>
inline void tail_extrapolate(F&& f, double a, double b, bool singular_left, double& value,
                             double& err) {
    const double p = singular_left ? a : b;
    std::vector<double> partial;
    double sum = 0.0;
    double w = b - a;
    // Deeper shells than ~1e-9 relative gain nothing: their boundaries are
    // quantized near a nonzero endpoint, which corrupts the geometric pattern
    // the extrapolation relies on.
    const double wall = std::max(64.0 * std::numeric_limits<double>::epsilon() *
                                     std::max(std::fabs(a), std::fabs(b)),
                                 1e-9 * (b - a));
    for (int k = 0; k < 60 && w > wall; ++k) {
        const double w2 = 0.5 * w;
        double v, e;
        if (singular_left)
            gk15(f, p + w2, p + w, v, e);
        else
            gk15(f, p - w, p - w2, v, e);
        sum += v;
        partial.push_back(sum);
        w = w2;
    }
    if (partial.size() < 5) {
        gk15(f, a, b, value, err);
        return;
    }
    // iterated Aitken delta-squared on the partial sums
    std::vector<double> t = partial;
    double prev_limit = t.back();
    double limit = t.back();
    for (int pass = 0; pass < 4 && t.size() >= 3; ++pass) {
        std::vector<double> t2;
        for (std::size_t i = 0; i + 2 < t.size(); ++i) {
            const double d1 = t[i + 1] - t[i];
            const double d2 = t[i + 2] - t[i + 1];
            const double den = d2 - d1;
            if (den == 0.0 || !std::isfinite(den))
                t2.push_back(t[i + 2]);
            else
                t2.push_back(t[i + 2] - d2 * d2 / den);
        }
        if (t2.empty()) break;
        prev_limit = limit;
        limit = t2.back();
        t.swap(t2);
    }
    value = limit;
    err = std::fabs(limit - prev_limit) + std::fabs(limit) * 1e-14;
}

}  // namespace detail

// Adaptive integration of f over [a,b].  Endpoint blow-up of integrable
// strength is fine (Kronrod nodes are interior); a non-finite value at an
// interior node throws.  When the tolerance cannot be met within max_depth
// the best estimate is returned with converged = false.
template <class F>
IntegralResult integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    if (!(a < b)) throw std::domain_error("integrate: need a < b");
    std::priority_queue<detail::Segment, std::vector<detail::Segment>, detail::WorseError> queue;
    std::vector<detail::Segment> done, stalled;
    detail::Segment s0{a, b, 0.0, 0.0, 0};
    detail::gk15(f, a, b, s0.value, s0.error);
    queue.push(s0);
    double total = s0.value, total_err = s0.error;
    double stalled_err = 0.0;  // irreducible by further bisection
    const int max_segments = 100000;
    int n = 1;
    while (!queue.empty() && n < max_segments) {
        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(total));
        if (total_err <= tol) break;
        if (total_err - stalled_err <= 0.1 * tol) break;  // the rest cannot be bisected away
        detail::Segment s = queue.top();
        queue.pop();
        const double width = s.b - s.a;
        if (s.depth >= spec.max_depth ||
            width <= 64.0 * std::numeric_limits<double>::epsilon() *
                         std::max(std::fabs(s.a), std::fabs(s.b))) {
            stalled.push_back(s);  // cannot refine further by bisection
            stalled_err += s.error;
            continue;
        }
        const double m = 0.5 * (s.a + s.b);
        detail::Segment l{s.a, m, 0.0, 0.0, s.depth + 1};
        detail::Segment r{m, s.b, 0.0, 0.0, s.depth + 1};
        detail::gk15(f, l.a, l.b, l.value, l.error);
        detail::gk15(f, r.a, r.b, r.value, r.error);
        total += l.value + r.value - s.value;
        total_err += l.error + r.error - s.error;
        queue.push(l);
        queue.push(r);
        ++n;
    }
    while (!queue.empty()) {
        done.push_back(queue.top());
        queue.pop();
    }
    for (const auto& s : stalled) done.push_back(s);
    // Deterministic left-to-right summation.
    auto by_position = [](const detail::Segment& x, const detail::Segment& y) { return x.a < y.a; };
    std::sort(done.begin(), done.end(), by_position);
    auto resum = [&] {
        IntegralResult out;
        for (const auto& s : done) {
            out.value += s.value;
            out.error += s.error;
        }
        out.converged = out.error <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(out.value)) *
                                             1.000001 +
                                         1e-300;
        return out;
    };
    IntegralResult out = resum();
    if (out.converged) return out;
    // A long dyadic chain of segments hugging an endpoint is the signature of
    // an endpoint singularity that bisection cannot finish (the remaining tail
    // mass is below floating-point resolution); replace each such chain by a
    // shell-extrapolated value.
    for (int side = 0; side < 2; ++side) {
        const bool left = side == 0;
        if (done.size() < 8) break;
        const double W = b - a;
        std::size_t k = 0;
        double span = 0.0, chain_err = 0.0;
        while (k < done.size() - 2) {
            const auto& s = left ? done[k] : done[done.size() - 1 - k];
            const double w = s.b - s.a;
            if (span + w > 0.3 * W) break;
            span += w;
            chain_err += s.error;
            ++k;
        }
        if (k < 6) continue;
        double v, e;
        if (left)
            detail::tail_extrapolate(f, a, a + span, true, v, e);
        else
            detail::tail_extrapolate(f, b - span, b, false, v, e);
        if (e >= chain_err) continue;
        if (left) {
            done.erase(done.begin(), done.begin() + k);
            done.insert(done.begin(), detail::Segment{a, a + span, v, e, 0});
        } else {
            done.erase(done.end() - k, done.end());
            done.push_back(detail::Segment{b - span, b, v, e, 0});
        }
    }
    return resum();
}

inline IntegralResult integrate(const std::function<double(double)>& f, double a, double b,
                                const QuadratureSpec& spec = {}) {
    return integrate<const std::function<double(double)>&>(f, a, b, spec);
}

// ---------------------------------------------------------------------------
// Profile kernel
// ---------------------------------------------------------------------------

// Evaluates J(alpha) = 1 - lambda eta u0'(alpha) in the cancellation-free form
// J = jmin + (1 - jmin) * gap(alpha) / |active extreme|, where jmin is the
// value of J at the active extremal locations: jmin = 1 - eta/eta*.
struct JEval {
    const InitialProfile* profile;
    double lambda;
    double jmin;

    double operator()(double alpha) const {
        const double gap = lambda > 0.0 ? profile->eval_gap_max(alpha) : profile->eval_gap_min(alpha);
        const double scale = lambda > 0.0 ? profile->M0 : -profile->m0;
        return jmin + (1.0 - jmin) * gap / scale;
    }

    double eta() const { return profile->eta_star(lambda) * (1.0 - jmin); }
    double lambda_eta() const { return (1.0 - jmin) / profile->active_value(lambda); }
};

namespace detail {

inline std::vector<double> panel_breakpoints(const InitialProfile& p,
                                             const std::vector<double>& extra, double lo,
                                             double hi) {
    std::vector<double> b{lo, hi};
    auto add = [&](double x) {
        if (x > lo + 1e-300 && x < hi) b.push_back(x);
    };
    for (const auto& e : p.maxima) add(e.alpha);
    for (const auto& e : p.minima) add(e.alpha);
    for (double x : extra) add(x);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end(),
                        [](double x, double y) { return std::fabs(x - y) < 1e-14; }),
            b.end());
    return b;
}

inline const ExtremalPoint* extremum_at(const InitialProfile& p, double alpha) {
    for (const auto& e : p.maxima)
        if (std::fabs(e.alpha - alpha) < 1e-14) return &e;
    for (const auto& e : p.minima)
        if (std::fabs(e.alpha - alpha) < 1e-14) return &e;
    return nullptr;
}

// Integrate g over [l, r] where one end may sit on an extremal point with
// q < 2; there the substitution alpha = end -+ u^{2/q} turns the local factor
// |alpha-end|^q into u^2, which adaptivity resolves at any depth of the
// singularity.
template <class G>
IntegralResult integrate_panel(G&& g, double l, double r, const ExtremalPoint* at_l,
                               const ExtremalPoint* at_r, const QuadratureSpec& panel_spec) {
    const bool sub_l = at_l != nullptr && at_l->q < 2.0;
    const bool sub_r = at_r != nullptr && at_r->q < 2.0;
    if (sub_l && sub_r) {
        const double m = 0.5 * (l + r);
        IntegralResult a = integrate_panel(g, l, m, at_l, nullptr, panel_spec);
        IntegralResult b = integrate_panel(g, m, r, nullptr, at_r, panel_spec);
        return IntegralResult{a.value + b.value, a.error + b.error, a.converged && b.converged};
    }
    if (sub_l || sub_r) {
        const double q = sub_l ? at_l->q : at_r->q;
        const double w = r - l;
        const double umax = std::pow(w, 0.5 * q);
        const double ex = 2.0 / q;
        auto gu = [&](double u) {
            const double d = std::pow(u, ex);
            const double alpha = sub_l ? l + d : r - d;
            return g(alpha) * ex * std::pow(u, ex - 1.0);
        };
        return integrate(gu, 0.0, umax, panel_spec);
    }
    return integrate(g, l, r, panel_spec);
}

template <class G>
IntegralResult integrate_profile_kernel(const InitialProfile& p, G&& g, double lo, double hi,
                                        const QuadratureSpec& spec) {
    const auto brk = panel_breakpoints(p, spec.split_points, lo, hi);
    IntegralResult out;
    out.converged = true;
    QuadratureSpec panel_spec = spec;
    panel_spec.abs_tol = spec.abs_tol / double(brk.size());
    for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
        const auto* at_l = extremum_at(p, brk[i]);
        const auto* at_r = extremum_at(p, brk[i + 1]);
        IntegralResult r = integrate_panel(g, brk[i], brk[i + 1], at_l, at_r, panel_spec);
        out.value += r.value;
        out.error += r.error;
        out.converged = out.converged && r.converged;
    }
    return out;
}

}  // namespace detail

// int_{lo}^{hi} w(alpha) J(alpha)^{-b} dalpha at J(active) = jmin, with the
// weight optional.  This is the workhorse behind every Kbar_i.
template <class W>
IntegralResult integrate_jpow_weighted_jmin(const InitialProfile& p, double lambda, double jmin,
                                            double b_exp, W&& weight, double lo, double hi,
                                            const QuadratureSpec& spec = {}) {
    if (lambda == 0.0) throw std::domain_error("integrate_jpow: lambda must be nonzero");
    if (!(jmin >= 0.0 && jmin <= 1.0))
        throw std::domain_error("integrate_jpow: J(active) outside [0,1] (eta outside [0,eta*])");
    if (jmin == 0.0) {
        // Allowed only when the endpoint power law stays integrable.
        if (b_exp * p.active_q(lambda) >= 1.0)
            throw divergent_integral("integrate_jpow: integral diverges at eta = eta*");
    } else if (jmin < spec.singularity_guard) {
        throw numerics_error("integrate_jpow: J(active) below singularity guard");
    }
    JEval J{&p, lambda, jmin};
    auto g = [&](double alpha) { return weight(alpha) * std::pow(J(alpha), -b_exp); };
    return detail::integrate_profile_kernel(p, g, lo, hi, spec);
}

inline double integrate_jpow_jmin(const InitialProfile& p, double lambda, double jmin,
                                  double b_exp, const QuadratureSpec& spec = {}) {
    auto one = [](double) { return 1.0; };
    IntegralResult r = integrate_jpow_weighted_jmin(p, lambda, jmin, b_exp, one, 0.0, 1.0, spec);
    if (!r.converged)
        throw numerics_error("integrate_jpow: tolerance not met (b=" + std::to_string(b_exp) +
                             ", jmin=" + std::to_string(jmin) + ")");
    return r.value;
}

// Same, parametrized by eta in [0, eta*].
inline double integrate_jpow(const InitialProfile& p, double lambda, double eta, double b_exp,
                             const QuadratureSpec& spec = {}) {
    const double es = p.eta_star(lambda);
    if (!(eta >= 0.0)) throw std::domain_error("integrate_jpow: eta must be >= 0");
    double jmin = 1.0 - eta / es;
    if (jmin < -1e-12) throw std::domain_error("integrate_jpow: eta beyond eta*");
    jmin = std::max(jmin, 0.0);
    return integrate_jpow_jmin(p, lambda, jmin, b_exp, spec);
}

}  // namespace pjx
