#pragma once

// Independent validation: integrate the PDE directly in Eulerian form
// (method of lines, RK4 in time) at short times and compare against the
// representation formula; also pointwise PDE residuals of reconstructed
// solutions.  The state is v = u_x on a uniform grid; u is recovered by
// mean-zero antidifferentiation and the nonlocal term by quadrature.
//
// Spatial discretization is 4th order (stencils, cumulative integration,
// Simpson) so the combined convergence order is dominated by RK4/space-4.

#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <vector>

#include "errors.hpp"
#include "exact_solution.hpp"
#include "profiles.hpp"

namespace pjx {

struct MolState {
    int n = 0;           // grid intervals; power of two >= 256
    double dx = 0.0;
    Boundary boundary = Boundary::dirichlet;
    std::vector<double> v;  // u_x at nodes (n+1 nodes Dirichlet, n periodic)
    double t = 0.0;
    double I = 0.0;  // current nonlocal term
};

namespace detail {

inline bool power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

// ---- dirichlet helpers (n+1 nodes, both endpoints present) ----

inline void deriv4_dirichlet(const std::vector<double>& v, double dx, std::vector<double>& out) {
    const int m = int(v.size()) - 1;
    out.resize(v.size());
    const double d = 1.0 / (12.0 * dx);
    out[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) * d;
    out[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) * d;
    for (int i = 2; i <= m - 2; ++i)
        out[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) * d;
    out[m - 1] = (3.0 * v[m] + 10.0 * v[m - 1] - 18.0 * v[m - 2] + 6.0 * v[m - 3] - v[m - 4]) * d;
    out[m] = (25.0 * v[m] - 48.0 * v[m - 1] + 36.0 * v[m - 2] - 16.0 * v[m - 3] + 3.0 * v[m - 4]) * d;
}

// cumulative integral with 4th-order interval rules; u(0) = 0, and the
// residual drift at the far end is removed linearly so u(1) = 0 exactly
inline void antideriv4_dirichlet(const std::vector<double>& v, double dx,
                                 std::vector<double>& u) {
    const int m = int(v.size()) - 1;
    u.assign(v.size(), 0.0);
    auto seg = [&](int i) {
        if (i == 0) return dx * (9.0 * v[0] + 19.0 * v[1] - 5.0 * v[2] + v[3]) / 24.0;
        if (i == m - 1)
            return dx * (9.0 * v[m] + 19.0 * v[m - 1] - 5.0 * v[m - 2] + v[m - 3]) / 24.0;
        return dx * (-v[i - 1] + 13.0 * v[i] + 13.0 * v[i + 1] - v[i + 2]) / 24.0;
    };
    for (int i = 0; i < m; ++i) u[i + 1] = u[i] + seg(i);
    const double drift = u[m];
    for (int i = 0; i <= m; ++i) u[i] -= drift * (double(i) / m);
}

inline double simpson(const std::vector<double>& f, double dx) {
    const int m = int(f.size()) - 1;
    double acc = f[0] + f[m];
    for (int i = 1; i < m; ++i) acc += (i % 2 ? 4.0 : 2.0) * f[i];
    return acc * dx / 3.0;
}

// ---- periodic helpers (n nodes, spectral) ----

inline void fft(std::vector<std::complex<double>>& a, bool inverse) {
    const int n = int(a.size());
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double pi = 3.14159265358979323846;
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * pi / len * (inverse ? 1.0 : -1.0);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (int k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto t = w * a[i + k + len / 2];
                a[i + k] = u + t;
                a[i + k + len / 2] = u - t;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= double(n);
}

// spectral derivative (order = 1) or mean-zero antiderivative (order = -1)
inline void spectral_op(const std::vector<double>& v, int order, std::vector<double>& out) {
    const int n = int(v.size());
    std::vector<std::complex<double>> a(n);
    for (int i = 0; i < n; ++i) a[i] = v[i];
    fft(a, false);
    const double two_pi = 2.0 * 3.14159265358979323846;
    for (int k = 0; k < n; ++k) {
        const int kk = k <= n / 2 ? k : k - n;
        if (kk == 0 || (std::abs(kk) == n / 2 && order > 0)) {
            a[k] = 0.0;
            continue;
        }
        const std::complex<double> ik(0.0, two_pi * kk);
        a[k] = order > 0 ? a[k] * ik : a[k] / ik;
    }
    fft(a, true);
    out.resize(n);
    for (int i = 0; i < n; ++i) out[i] = a[i].real();
}

inline double mean_periodic(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / double(v.size());
}

struct Rhs {
    double lambda;
    std::vector<double> u, vx;  // scratch

    void operator()(const MolState& s, const std::vector<double>& v, std::vector<double>& dv) {
        const int nn = int(v.size());
        dv.resize(nn);
        double I;
        if (s.boundary == Boundary::dirichlet) {
            antideriv4_dirichlet(v, s.dx, u);
            deriv4_dirichlet(v, s.dx, vx);
            std::vector<double> v2(nn);
            for (int i = 0; i < nn; ++i) v2[i] = v[i] * v[i];
            I = -(lambda + 1.0) * simpson(v2, s.dx);
        } else {
            spectral_op(v, -1, u);
            spectral_op(v, +1, vx);
            double acc = 0.0;
            for (double x : v) acc += x * x;
            I = -(lambda + 1.0) * acc * s.dx;  // trapezoid == spectral for periodic
        }
        for (int i = 0; i < nn; ++i) dv[i] = -u[i] * vx[i] + lambda * v[i] * v[i] + I;
        if (s.boundary == Boundary::periodic) {
            // d/dt int v dx = 0 analytically; remove the aliasing leak of the
            // product u v_x so the discrete mean is conserved too
            const double drift = mean_periodic(dv);
            for (auto& d : dv) d -= drift;
        }
    }
};

}  // namespace detail

inline MolState mol_init(const InitialProfile& p, int n) {
    if (!detail::power_of_two(n) || n < 256)
        throw std::domain_error("mol_init: n must be a power of two >= 256");
    MolState s;
    s.n = n;
    s.dx = 1.0 / n;
    s.boundary = p.boundary;
    s.t = 0.0;
    const int nodes = p.boundary == Boundary::dirichlet ? n + 1 : n;
    s.v.resize(nodes);
    for (int i = 0; i < nodes; ++i) s.v[i] = p.u0p(double(i) / n);
    if (p.boundary == Boundary::periodic) {
        // start from a discretely mean-free state; sampling alone leaves a
        // quadrature-error mean the conservation check would inherit
        const double mean = detail::mean_periodic(s.v);
        for (auto& v : s.v) v -= mean;
    }
    return s;
}

inline double mol_max_u(const MolState& s, double lambda) {
    std::vector<double> u;
    if (s.boundary == Boundary::dirichlet)
        detail::antideriv4_dirichlet(s.v, s.dx, u);
    else
        detail::spectral_op(s.v, -1, u);
    double m = 0.0;
    for (double x : u) m = std::max(m, std::fabs(x));
    (void)lambda;
    return m;
}

// One RK4 step.  dt must satisfy the advective CFL bound 0.4 dx / max|u|.
inline void mol_step(MolState& s, double lambda, double dt) {
    double vmax = 0.0;
    for (double x : s.v) vmax = std::max(vmax, std::fabs(x));
    if (vmax > 1e5) throw numerics_error("mol_step: blow-up guard tripped at t = " + std::to_string(s.t));
    const double umax = mol_max_u(s, lambda);
    if (umax > 0.0 && dt > 0.4 * s.dx / umax * (1.0 + 1e-12))
        throw std::domain_error("mol_step: CFL violation");
    detail::Rhs rhs{lambda, {}, {}};
    const std::size_t nn = s.v.size();
    std::vector<double> k1, k2, k3, k4, tmp(nn);
    rhs(s, s.v, k1);
    for (std::size_t i = 0; i < nn; ++i) tmp[i] = s.v[i] + 0.5 * dt * k1[i];
    rhs(s, tmp, k2);
    for (std::size_t i = 0; i < nn; ++i) tmp[i] = s.v[i] + 0.5 * dt * k2[i];
    rhs(s, tmp, k3);
    for (std::size_t i = 0; i < nn; ++i) tmp[i] = s.v[i] + dt * k3[i];
    rhs(s, tmp, k4);
    for (std::size_t i = 0; i < nn; ++i)
        s.v[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    s.t += dt;
    // refresh the reported nonlocal term
    if (s.boundary == Boundary::dirichlet) {
        std::vector<double> v2(nn);
        for (std::size_t i = 0; i < nn; ++i) v2[i] = s.v[i] * s.v[i];
        s.I = -(lambda + 1.0) * detail::simpson(v2, s.dx);
    } else {
        double acc = 0.0;
        for (double x : s.v) acc += x * x;
        s.I = -(lambda + 1.0) * acc * s.dx;
    }
}

// March to t_end with the CFL-limited step.
inline MolState mol_solve(const InitialProfile& p, double lambda, double t_end, int n,
                          double cfl = 0.4) {
    MolState s = mol_init(p, n);
    while (s.t < t_end - 1e-14) {
        const double umax = std::max(mol_max_u(s, lambda), 1e-8);
        double dt = cfl * s.dx / umax;
        dt = std::min(dt, t_end - s.t);
        mol_step(s, lambda, dt);
    }
    return s;
}

inline double mol_mean_v(const MolState& s) {
    if (s.boundary == Boundary::dirichlet) return detail::simpson(s.v, s.dx);
    return detail::mean_periodic(s.v);
}

// Snapshot rows (x, u, ux) of the current state.
inline void mol_snapshot_csv(const MolState& s, std::ostream& os) {
    std::vector<double> u;
    if (s.boundary == Boundary::dirichlet)
        detail::antideriv4_dirichlet(s.v, s.dx, u);
    else
        detail::spectral_op(s.v, -1, u);
    os << "x,u,ux\n";
    char buf[128];
    for (std::size_t i = 0; i < s.v.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", double(i) * s.dx, u[i], s.v[i]);
        os << buf;
    }
}

// ---------------------------------------------------------------------------
// PDE residual of the reconstructed exact solution
// ---------------------------------------------------------------------------

// max_i |u_xt + u u_xx - lambda u_x^2 - I(t)| on an Eulerian grid, with u_xt
// by centered differences across two auxiliary frames at t -+ dt and the
// flow maps inverted through tabulated characteristic grids.
inline double residual_max(const InitialProfile& p, double lambda, const EtaTimeMap& map,
                           double t, int n_grid = 64, double dt = 1e-4) {
    if (!(dt > 1e-10) || !(dt < 0.05 * std::max(t, 1.0)))
        throw std::domain_error("residual_max: frame spacing dt unusable");
    const SolutionFrame f0 = make_frame(p, lambda, map.eta_of_time(t));
    const SolutionFrame fp = make_frame(p, lambda, map.eta_of_time(t + dt));
    const SolutionFrame fm = make_frame(p, lambda, map.eta_of_time(t - dt));
    const CharacteristicGrid g0 = characteristic_grid(f0);
    const CharacteristicGrid gp = characteristic_grid(fp);
    const CharacteristicGrid gm = characteristic_grid(fm);
    // I(t) = -(lambda+1) ||u_x||_2^2, by the Lagrangian integral (the Kbar
    // form cancels catastrophically at small eta)
    auto l2g = [&](double a) {
        const double v = ux(f0, a);
        return v * v * gamma_alpha(f0, a);
    };
    const double l2sq = detail::integrate_profile_kernel(p, l2g, 0.0, 1.0, f0.spec).value;
    const double I = -(lambda + 1.0) * l2sq;
    double worst = 0.0;
    for (int i = 1; i < n_grid; ++i) {
        const double alpha = double(i) / n_grid;
        const double x = g0.x_of_alpha(alpha);
        const double uxv = ux(f0, alpha);
        const double uxxv = uxx(f0, alpha);
        const double uv = u_at(f0, alpha);
        const double uxp = ux(fp, gp.alpha_of_x(x));
        const double uxm = ux(fm, gm.alpha_of_x(x));
        const double uxt = (uxp - uxm) / (2.0 * dt);
        worst = std::max(worst, std::fabs(uxt + uv * uxxv - lambda * uxv * uxv - I));
    }
    return worst;
}

}  // namespace pjx
