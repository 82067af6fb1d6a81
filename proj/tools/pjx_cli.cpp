// pjx: evaluate exact solutions of the generalized inviscid Proudman-Johnson
// equation, classify regularity from (lambda, q), estimate blow-up, and
// reproduce the worked examples.
//
// Exit codes: 0 ok, 1 reproduction FAIL, 2 domain error, 3 range error,
// 4 numerical failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "pjx/pjx.hpp"

namespace {

using namespace pjx;

std::vector<double> parse_samples(const std::string& sspec) {
    std::vector<double> out;
    const auto c1 = sspec.find(':');
    if (c1 == std::string::npos) {
        out.push_back(std::stod(sspec));
        return out;
    }
    const auto c2 = sspec.find(':', c1 + 1);
    if (c2 == std::string::npos) throw std::invalid_argument("sample spec must be v or a:b:step");
    const double a = std::stod(sspec.substr(0, c1));
    const double b = std::stod(sspec.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(sspec.substr(c2 + 1));
    if (!(step > 0.0) || b < a) throw std::invalid_argument("sample spec must increase");
    for (double v = a; v <= b + 1e-12 * std::max(1.0, std::fabs(b)); v += step) out.push_back(v);
    return out;
}

int thread_budget() {
    if (const char* env = std::getenv("PJX_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? int(hw) : 1;
}

// ordered parallel map over frames
template <class Fn>
std::vector<std::string> parallel_map(const std::vector<double>& xs, Fn&& fn) {
    const int workers = std::min<int>(thread_budget(), std::max<std::size_t>(xs.size(), 1));
    std::vector<std::string> out(xs.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = fn(xs[i]);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= xs.size()) return;
                out[i] = fn(xs[i]);
            }
        });
    for (auto& t : pool) t.join();
    return out;
}

struct ProfileArgs {
    std::string builtin;
    std::string json_path;
    double lambda = std::numeric_limits<double>::quiet_NaN();
};

InitialProfile load_profile(const ProfileArgs& a, double& lambda) {
    InitialProfile p;
    if (!a.builtin.empty()) {
        p = builtin_profile(a.builtin);
        lambda = std::isnan(a.lambda) ? builtin_default_lambda(a.builtin) : a.lambda;
    } else if (!a.json_path.empty()) {
        std::ifstream in(a.json_path);
        if (!in) throw std::invalid_argument("cannot open profile file " + a.json_path);
        nlohmann::json j;
        in >> j;
        p = profile_from_json(j);
        if (std::isnan(a.lambda)) throw std::invalid_argument("--lambda required with --profile-json");
        lambda = a.lambda;
    } else {
        throw std::invalid_argument("need --builtin or --profile-json");
    }
    return p;
}

std::ostream& open_sink(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::invalid_argument("cannot open output file " + path);
    return file;
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

int cmd_classify(double lambda, double q, const std::vector<double>& ps, const std::string& out) {
    const RegularityVerdict v = classify_linfty(lambda, q);
    std::vector<LpVerdict> lps;
    for (double p : ps) lps.push_back(classify_lp(lambda, q, p));
    nlohmann::json j = verdict_to_json(v, lps);
    if (q == 1.0) {
        const EnergyVerdict e = classify_energy(lambda);
        j["energy"] = {{"E", e.energy == EnergyTrend::Diverges ? "diverges" : "finite"},
                       {"Edot", e.rate == EnergyRateTrend::IdenticallyZero ? "identically_zero"
                                : e.rate == EnergyRateTrend::DivergesPlus  ? "diverges_plus"
                                                                           : "bounded"},
                       {"l3", to_string(e.l3)},
                       {"provenance", e.provenance}};
    }
    if (lambda == 1.0) j["euler_spf"] = {{"dim", 2}, {"outcome", to_string(euler_spf(q, 2))}};
    if (lambda == 0.5) j["euler_spf"] = {{"dim", 3}, {"outcome", to_string(euler_spf(q, 3))}};
    if (lambda == -0.5)
        j["notes"] = nlohmann::json::array(
            {"dE/dt = (1+2*lambda) * int u_x^3 dx vanishes identically at lambda = -1/2"});
    std::ofstream file;
    open_sink(out, file) << j.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

struct SolveOpts {
    std::string eta_spec, t_spec;
    int grid = 201;
    std::string mode = "grid";  // grid | sweep
    std::string out;
    double tol_abs = 1e-11, tol_rel = 1e-10;
};

int cmd_solve(const InitialProfile& p, double lambda, const SolveOpts& o) {
    QuadratureSpec spec;
    spec.abs_tol = o.tol_abs;
    spec.rel_tol = o.tol_rel;
    const double eta_star = p.eta_star(lambda);
    EtaTimeMap map = build_eta_time_map(p, lambda, 200, spec);

    std::vector<double> etas;
    if (!o.eta_spec.empty()) {
        etas = parse_samples(o.eta_spec);
    } else if (!o.t_spec.empty()) {
        for (double t : parse_samples(o.t_spec)) etas.push_back(map.eta_of_time(t));
    } else {
        throw std::invalid_argument("need --eta or --t");
    }
    for (double eta : etas)
        if (!(eta >= 0.0) || 1.0 - eta / eta_star < spec.singularity_guard)
            throw std::out_of_range("eta sample beyond eta* - guard");

    std::ostringstream header;
    header << "# pjx solve v1 profile=" << p.name << " lambda=" << format_double(lambda)
           << " q=" << format_double(p.q) << " eta_star=" << format_double(eta_star)
           << " tol_abs=" << format_double(spec.abs_tol)
           << " tol_rel=" << format_double(spec.rel_tol) << "\n";

    auto frame_block = [&](double eta) {
        SolutionFrame f = make_frame(p, lambda, eta, spec);
        f.t = map.t_of_eta(std::min(eta, map.eta_k.back()));
        auto [M, m] = extrema(f, false);
        std::ostringstream os;
        if (o.mode == "sweep") {
            os << format_double(eta) << ',' << format_double(f.t) << ',' << format_double(M) << ','
               << format_double(m) << ',' << format_double(lp_norm(f, 1.0)) << ','
               << format_double(lp_norm(f, 2.0)) << ',' << format_double(lp_norm(f, 3.0)) << ','
               << format_double(energy(f)) << ',' << format_double(energy_rate(f)) << "\n";
            return os.str();
        }
        CharacteristicGrid cg = characteristic_grid(f, 2048);
        os << "# frame lambda=" << format_double(lambda) << " eta=" << format_double(eta)
           << " t=" << format_double(f.t) << "\n";
        for (int i = 0; i < o.grid; ++i) {
            const double a = double(i) / (o.grid - 1);
            os << format_double(a) << ',' << format_double(cg.x_of_alpha(a)) << ','
               << format_double(ux(f, a)) << ',' << format_double(uxx(f, a)) << ','
               << format_double(gamma_alpha(f, a)) << "\n";
        }
        os << "# summary t=" << format_double(f.t) << " M=" << format_double(M)
           << " m=" << format_double(m) << " E=" << format_double(energy(f)) << "\n";
        return os.str();
    };
    const std::vector<std::string> blocks = parallel_map(etas, frame_block);

    std::ofstream file;
    std::ostream& sink = open_sink(o.out, file);
    sink << header.str();
    sink << (o.mode == "sweep" ? "eta,t,M,m,lp1,lp2,lp3,E,Edot\n"
                               : "alpha,x,ux,uxx,gamma_alpha\n");
    for (const auto& b : blocks) sink << b;
    return 0;
}

// ---------------------------------------------------------------------------
// blowup
// ---------------------------------------------------------------------------

int cmd_blowup(const InitialProfile& p, double lambda, const std::string& out) {
    const BlowupReport r = blowup_time(p, lambda);
    std::ofstream file;
    open_sink(out, file) << report_to_json(r).dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// oracle snapshots
// ---------------------------------------------------------------------------

int cmd_oracle(const InitialProfile& p, double lambda, double t, int grid,
               const std::string& out) {
    MolState s = mol_solve(p, lambda, t, grid);
    std::ofstream file;
    std::ostream& sink = open_sink(out, file);
    sink << "# pjx oracle v1 profile=" << p.name << " lambda=" << format_double(lambda)
         << " t=" << format_double(s.t) << " n=" << grid << "\n";
    mol_snapshot_csv(s, sink);
    return 0;
}

// ---------------------------------------------------------------------------
// example reproductions
// ---------------------------------------------------------------------------

struct Check {
    std::string label;
    bool pass;
};

void check_close(std::vector<Check>& cs, const std::string& label, double got, double want,
                 double tol) {
    std::ostringstream os;
    const bool ok = std::fabs(got - want) <= tol;
    os << label << ": got " << format_double(got) << ", expected " << format_double(want)
       << " +- " << format_double(tol);
    cs.push_back({os.str(), ok});
}

void check_true(std::vector<Check>& cs, const std::string& label, bool ok) {
    cs.push_back({label, ok});
}

int cmd_example(const std::string& id, const std::string& outdir) {
    std::vector<Check> cs;
    std::string name;
    double lambda = 0.0;
    if (id == "1" || id == "1a") {
        name = "ex1_q13";
        lambda = 0.5;
    } else if (id == "1b") {
        name = "ex1_q65";
        lambda = 0.5;
    } else if (id == "2" || id == "2a") {
        name = "ex2_q5";
        lambda = 2.0;
    } else if (id == "2b") {
        name = "ex2_q52";
        lambda = 1.25;
    } else if (id == "3") {
        name = "ex3_q6";
        lambda = 5.5;
    } else if (id == "4") {
        name = "ex4_q32";
        lambda = -2.5;
    } else if (id == "5") {
        name = "ex5_mixed";
        lambda = -1.0 / 3.0;
    } else if (id == "6") {
        name = "ex6_linear";
        lambda = 1.0;
    } else {
        throw std::invalid_argument("example id must be 1..6 (variants 1a/1b/2a/2b)");
    }
    const InitialProfile p = builtin_profile(name);
    const BlowupReport rep = blowup_time(p, lambda);
    QuadratureSpec deep;
    deep.singularity_guard = 1e-22;

    if (id == "1" || id == "1a") {
        check_close(cs, "blow-up time", rep.t_star, 2.25, 1e-6);
        check_close(cs, "K0 at eta*", integrate_jpow(p, lambda, 2.0, 2.0), 27.0 / 16.0, 1e-8);
        check_true(cs, "two-sided everywhere blow-up",
                   rep.blowup_type == LinftyOutcome::TwoSidedEverywhere);
    } else if (id == "1b") {
        check_true(cs, "global existence (t* = +inf)", std::isinf(rep.t_star));
        auto f = make_frame_jmin(p, lambda, 1e-19, deep);
        check_true(cs, "max |u_x| decays below 1e-3 of initial",
                   std::fabs(extrema(f, false).first) < 1e-3 * p.M0);
    } else if (id == "2" || id == "2a") {
        check_true(cs, "global existence (t* = +inf)", std::isinf(rep.t_star));
        check_true(cs, "u_x vanishes",
                   observe_linfty(p, lambda).implied == LinftyOutcome::GlobalVanish);
    } else if (id == "2b") {
        check_true(cs, "global existence (t* = +inf)", std::isinf(rep.t_star));
        auto f6 = make_frame_jmin(p, lambda, 1e-6, deep);
        auto f7 = make_frame_jmin(p, lambda, 1e-7, deep);
        const double plateau = std::fabs(extrema(f7, false).first / extrema(f6, false).first - 1.0);
        check_true(cs, "M(eta) plateaus within 1% over the last decade", plateau < 0.01);
    } else if (id == "3") {
        check_close(cs, "blow-up time", rep.t_star, 22.5, 0.1);
        check_true(cs, "two-sided everywhere blow-up",
                   rep.blowup_type == LinftyOutcome::TwoSidedEverywhere);
    } else if (id == "4") {
        check_close(cs, "blow-up time", rep.t_star, 0.46, 0.01);
        check_true(cs, "one-sided discrete blow-up",
                   rep.blowup_type == LinftyOutcome::OneSidedDiscreteMin);
        check_true(cs, "bracket eta* <= t*",
                   rep.bracket && (*rep.bracket)[0] <= rep.t_star &&
                       std::fabs((*rep.bracket)[0] - 0.4) < 1e-12);
    } else if (id == "5") {
        check_close(cs, "blow-up time", rep.t_star, 17.93, 0.05);
        check_true(cs, "two blow-up locations", rep.locations_eulerian.size() == 2);
        if (rep.locations_eulerian.size() == 2) {
            check_close(cs, "interior location", rep.locations_eulerian[0], 0.885, 0.005);
            check_true(cs, "boundary location pinned at 1", rep.locations_eulerian[1] == 1.0);
        }
    } else if (id == "6") {
        check_close(cs, "blow-up time", rep.t_star, 2.8, 0.05);
        check_true(cs, "maxima pinned at both endpoints",
                   rep.locations_eulerian.size() == 2 && rep.locations_eulerian[0] == 0.0 &&
                       rep.locations_eulerian[1] == 1.0);
        auto f = make_frame_jmin(p, lambda, 1e-6, deep);
        check_true(cs, "M diverges upward", extrema(f, false).first > 1e4);
        check_true(cs, "interior u_x diverges downward", ux(f, 0.3) < -1e2);
    }

    // reproduction bundle: report + a small frame sweep
    const std::string base = outdir.empty() ? std::string(".") : outdir;
    {
        std::ofstream rj(base + "/example_" + id + "_report.json");
        rj << report_to_json(rep).dump(2) << "\n";
        SolveOpts so;
        so.mode = "grid";
        so.grid = 101;
        const double es = p.eta_star(lambda);
        std::ostringstream sp;
        sp << format_double(0.1 * es) << ':' << format_double(0.91 * es) << ':'
           << format_double(0.2 * es);
        so.eta_spec = sp.str();
        so.out = base + "/example_" + id + "_frames.csv";
        cmd_solve(p, lambda, so);
    }

    bool all = true;
    for (const auto& c : cs) {
        std::cout << (c.pass ? "PASS" : "FAIL") << "  example " << id << " - " << c.label << "\n";
        all = all && c.pass;
    }
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-solution engine for the generalized inviscid Proudman-Johnson equation"};
    app.require_subcommand(1);

    // classify
    auto* classify = app.add_subcommand("classify", "regularity verdict from (lambda, q)");
    double cl_lambda = 0.0, cl_q = 1.0;
    std::vector<double> cl_ps;
    std::string cl_out;
    classify->add_option("--lambda", cl_lambda, "model parameter")->required();
    classify->add_option("--q", cl_q, "curvature exponent")->required();
    classify->add_option("--p", cl_ps, "L^p exponents to classify");
    classify->add_option("--out", cl_out, "output path (default stdout)");

    // solve
    auto* solve = app.add_subcommand("solve", "evaluate solution frames");
    ProfileArgs so_prof;
    SolveOpts so;
    solve->add_option("--builtin", so_prof.builtin, "builtin profile name");
    solve->add_option("--profile-json", so_prof.json_path, "profile JSON file");
    solve->add_option("--lambda", so_prof.lambda, "model parameter");
    solve->add_option("--eta", so.eta_spec, "eta samples: v or a:b:step");
    solve->add_option("--t", so.t_spec, "t samples: v or a:b:step");
    solve->add_option("--grid", so.grid, "alpha samples per frame")->check(CLI::Range(2, 100001));
    solve->add_option("--mode", so.mode, "grid | sweep")
        ->check(CLI::IsMember({"grid", "sweep"}));
    solve->add_option("--out", so.out, "output path (default stdout)");
    std::string so_format = "csv";
    solve->add_option("--format", so_format, "output format")->check(CLI::IsMember({"csv"}));
    solve->add_option("--tol-abs", so.tol_abs, "quadrature absolute tolerance");
    solve->add_option("--tol-rel", so.tol_rel, "quadrature relative tolerance");

    // blowup
    auto* blowup = app.add_subcommand("blowup", "blow-up time / location report");
    ProfileArgs bl_prof;
    std::string bl_out;
    blowup->add_option("--builtin", bl_prof.builtin, "builtin profile name");
    blowup->add_option("--profile-json", bl_prof.json_path, "profile JSON file");
    blowup->add_option("--lambda", bl_prof.lambda, "model parameter");
    blowup->add_option("--out", bl_out, "output path (default stdout)");
    std::string bl_format = "json";
    blowup->add_option("--format", bl_format, "output format")->check(CLI::IsMember({"json"}));

    // oracle
    auto* oracle = app.add_subcommand("oracle", "direct PDE integration snapshot (x, u, ux)");
    ProfileArgs or_prof;
    double or_t = 0.05;
    int or_grid = 512;
    std::string or_out;
    oracle->add_option("--builtin", or_prof.builtin, "builtin profile name");
    oracle->add_option("--profile-json", or_prof.json_path, "profile JSON file");
    oracle->add_option("--lambda", or_prof.lambda, "model parameter");
    oracle->add_option("--t", or_t, "snapshot time");
    oracle->add_option("--grid", or_grid, "grid intervals (power of two >= 256)");
    oracle->add_option("--out", or_out, "output path (default stdout)");

    // example
    auto* example = app.add_subcommand("example", "reproduce a worked example");
    std::string ex_id, ex_out;
    example->add_option("id", ex_id, "1..6, variants 1a/1b/2a/2b")->required();
    example->add_option("--out", ex_out, "output directory (default .)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*classify) return cmd_classify(cl_lambda, cl_q, cl_ps, cl_out);
        if (*solve) {
            double lambda;
            const InitialProfile p = load_profile(so_prof, lambda);
            return cmd_solve(p, lambda, so);
        }
        if (*blowup) {
            double lambda;
            const InitialProfile p = load_profile(bl_prof, lambda);
            return cmd_blowup(p, lambda, bl_out);
        }
        if (*oracle) {
            double lambda;
            const InitialProfile p = load_profile(or_prof, lambda);
            return cmd_oracle(p, lambda, or_t, or_grid, or_out);
        }
        if (*example) return cmd_example(ex_id, ex_out);
    } catch (const std::out_of_range& e) {
        std::cerr << "range error: " << e.what() << "\n";
        return 3;
    } catch (const pjx::numerics_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const pjx::unsupported_regime& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
