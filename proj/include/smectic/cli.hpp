#ifndef SMECTIC_CLI_HPP
#define SMECTIC_CLI_HPP

// smectic command-line driver. Data goes to files or `out`, diagnostics to
// `err`. Exit codes: 0 ok, 1 invalid parameters or config, 2 solver failure,
// 3 I/O failure.

#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smectic/energy1d.hpp"
#include "smectic/errors.hpp"
#include "smectic/io.hpp"
#include "smectic/minimize.hpp"
#include "smectic/params.hpp"
#include "smectic/stability.hpp"
#include "smectic/svg.hpp"
#include "smectic/sweep.hpp"
#include "smectic/tensor.hpp"

namespace smectic::cli {

enum ExitCode : int { ok = 0, bad_input = 1, no_convergence = 2, io_failure = 3 };

namespace detail {

using smectic::detail::fmt17;

struct Common {
    std::string config;
    std::optional<int> N;
    std::optional<double> d;
    std::optional<double> T;
    std::optional<double> tol_grad;
    std::optional<long> max_iters;
    bool plain_gd = false;

    void add(CLI::App* app, bool solver_flags)
    {
        app->add_option("--config", config, "parameter file (key = value)");
        app->add_option("--N", N, "truncation order (even)");
        auto* od = app->add_option("--d", d, "override d");
        auto* oT = app->add_option("--T", T, "set d = alpha2 (T - T2star)");
        od->excludes(oT);
        if (solver_flags) {
            app->add_option("--tol-grad", tol_grad, "sup-norm gradient tolerance");
            app->add_option("--max-iters", max_iters, "iteration cap");
            app->add_flag("--plain-gd", plain_gd, "fixed-step descent with backtracking, no preconditioning");
        }
    }

    RunConfig load() const
    {
        RunConfig c = config.empty() ? RunConfig{} : load_config(config);
        if (N) {
            if (*N < 0 || *N % 2 != 0)
                throw InvalidInput("--N must be an even non-negative integer");
            c.N = *N;
        }
        if (d)
            c.params = c.params.with_d(*d);
        if (T)
            c.params = c.params.at_temperature(*T);
        if (plain_gd) {
            const auto keep = c.minimize;
            c.minimize = MinimizeOptions::plain_gd();
            c.minimize.tol_grad = keep.tol_grad;
            c.minimize.max_iters = keep.max_iters;
        }
        if (tol_grad)
            c.minimize.tol_grad = *tol_grad;
        if (max_iters)
            c.minimize.max_iters = *max_iters;
        c.minimize.validate();
        return c;
    }
};

inline void emit(std::ostream& out, const std::string& key, double v) { out << key << " = " << fmt17(v) << '\n'; }

inline std::pair<double, double> profile_maxima(const DirectorProfile& p)
{
    double r = 0.0, t = 0.0;
    for (std::size_t j = 0; j < p.z.size(); ++j) {
        r = std::max(r, std::abs(p.delta_rho[j]));
        t = std::max(t, std::abs(p.theta[j]));
    }
    return {r, t};
}

/// Smooth unit field built from a few random low modes.
inline std::function<Vec3(double)> random_director(unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::array<std::array<double, 3>, 3> a{}, ph{};
    for (auto& row : a)
        for (double& x : row)
            x = u(rng);
    for (auto& row : ph)
        for (double& x : row)
            x = std::numbers::pi * u(rng);
    return [a, ph](double z) {
        Vec3 v{1.5, 0.3, 0.2};
        for (int i = 0; i < 3; ++i)
            for (int m = 0; m < 3; ++m)
                v[i] += 0.5 * a[i][m] * std::cos((m + 1) * z + ph[i][m]);
        const double n = std::sqrt(dot(v, v));
        return Vec3{v[0] / n, v[1] / n, v[2] / n};
    };
}

} // namespace detail

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    using namespace detail;
    CLI::App app{"Cholesteric / smectic phase-transition model: minimization, spectra and sweeps", "smectic"};
    app.require_subcommand(1, 1);
    app.allow_extras(false);

    // validate-params
    Common vp;
    bool echo = false;
    auto* c_validate = app.add_subcommand("validate-params", "check a parameter file and print derived thresholds");
    vp.add(c_validate, false);
    c_validate->add_flag("--echo", echo, "print the parsed parameters in config syntax");

    // minimize
    Common mn;
    std::string seed_name = "smectic-seed", profile_out;
    auto* c_min = app.add_subcommand("minimize", "minimize the reduced energy from a seed");
    mn.add(c_min, true);
    c_min->add_option("--seed", seed_name, "cholesteric | smectic-seed | conical-seed")
        ->check(CLI::IsMember({"cholesteric", "smectic-seed", "conical-seed"}));
    c_min->add_option("--profile", profile_out, "write the profile CSV here");

    // spectrum
    Common sp;
    std::string sp_state = "cholesteric", sp_seed = "smectic-seed", sp_out;
    auto* c_spec = app.add_subcommand("spectrum", "mass-normalized Hessian spectrum and Morse index");
    sp.add(c_spec, true);
    c_spec->add_option("--state", sp_state, "cholesteric | minimized")
        ->check(CLI::IsMember({"cholesteric", "minimized"}));
    c_spec->add_option("--seed", sp_seed, "seed used for --state minimized")
        ->check(CLI::IsMember({"cholesteric", "smectic-seed", "conical-seed"}));
    c_spec->add_option("--out", sp_out, "write the spectrum CSV here (default: output stream)");

    // thresholds
    Common th;
    std::vector<double> t_values{0.5, 1.0, 1.5, 2.0, 4.0};
    auto* c_thr = app.add_subcommand("thresholds", "closed-form critical d, tilt thresholds and optimal tilt");
    th.add(c_thr, false);
    c_thr->add_option("--t", t_values, "frozen layer amplitudes for theta*")->delimiter(',');

    // sweep
    Common sw;
    SweepConfig scfg;
    std::string sweep_out, sweep_svg, branches = "both";
    double window = 0.1;
    auto* c_sweep = app.add_subcommand("sweep", "temperature sweep with warm starts");
    sw.add(c_sweep, true);
    c_sweep->add_option("--t-start", scfg.T_start, "first temperature");
    c_sweep->add_option("--t-end", scfg.T_end, "last temperature");
    c_sweep->add_option("--dt", scfg.dT, "temperature step (magnitude)");
    c_sweep->add_option("--eps", scfg.eps_detect, "order-parameter detection threshold");
    c_sweep->add_option("--branches", branches, "both | plus | minus")->check(CLI::IsMember({"both", "plus", "minus"}));
    c_sweep->add_option("--window", window, "d window below d0 for the pitchfork fit");
    c_sweep->add_flag("--record-morse", scfg.record_morse, "record the Morse index of every point");
    c_sweep->add_flag("--cold-start", scfg.cold_start, "solve every temperature from fresh seeds, in parallel");
    c_sweep->add_option("--out", sweep_out, "sweep CSV path")->required();
    c_sweep->add_option("--svg", sweep_svg, "also write the bifurcation diagram");

    // elastic-sweep
    Common es;
    std::string knob = "k", es_out;
    std::vector<double> es_values;
    std::optional<double> es_d;
    auto* c_es = app.add_subcommand("elastic-sweep", "mean tilt against elastic constants at fixed d");
    es.add(c_es, true);
    c_es->add_option("--knob", knob, "k (k1=k2=k3) | lambda (lambda1=lambda2)")->check(CLI::IsMember({"k", "lambda"}));
    c_es->add_option("--values", es_values, "comma-separated constant values")->delimiter(',')->required();
    c_es->add_option("--out", es_out, "CSV path")->required();

    // tensor-check
    std::string field = "helix";
    TensorElasticConstants tc{1.0, 0.0, 0.0, 2.0};
    double s_plus = 1.5;
    int points = 64;
    unsigned rng_seed = 1;
    auto* c_tc = app.add_subcommand("tensor-check", "uniaxial reduction residual of the tensor elastic energy");
    c_tc->add_option("--field", field, "helix | uniform | random")->check(CLI::IsMember({"helix", "uniform", "random"}));
    c_tc->add_option("--eta1", tc.eta1);
    c_tc->add_option("--eta2", tc.eta2);
    c_tc->add_option("--eta24", tc.eta24);
    c_tc->add_option("--sigma", tc.sigma);
    c_tc->add_option("--s-plus", s_plus);
    c_tc->add_option("--points", points)->check(CLI::PositiveNumber);
    c_tc->add_option("--rng-seed", rng_seed);

    // plot
    std::string plot_in, plot_out, plot_kind = "bifurcation";
    auto* c_plot = app.add_subcommand("plot", "render a sweep or profile CSV as SVG");
    c_plot->add_option("--input", plot_in, "CSV file")->required();
    c_plot->add_option("--kind", plot_kind, "bifurcation | profile")->check(CLI::IsMember({"bifurcation", "profile"}));
    c_plot->add_option("--out", plot_out, "SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return bad_input;
    }

    try {
        if (c_validate->parsed()) {
            const RunConfig c = vp.load();
            if (echo) {
                out << format_config(c);
                return ok;
            }
            const auto& p = c.params;
            out << "n0 = " << p.n0() << '\n';
            emit(out, "d", p.d());
            emit(out, "d0", d_critical(p));
            emit(out, "T_CHS", p.T2star() + d_critical(p) / p.alpha2());
            const auto t = tilt_thresholds(p);
            emit(out, "t1", t.t1);
            emit(out, "t2", t.t2);
            try {
                out << "morse_index = " << morse_index_analytic(p) << '\n';
            } catch (const DomainError&) {
                out << "morse_index = unbounded\n";
            }
            if (c.A && c.B && c.C) {
                const double s = compute_s_plus(*c.A, *c.B, *c.C);
                emit(out, "s_plus", s);
                if (c.eta1 && c.eta2 && c.eta24) {
                    const OFConstants k = map_to_oseen_frank(*c.eta1, *c.eta2, *c.eta24, s);
                    emit(out, "K1", k.k1);
                    emit(out, "K2", k.k2);
                    emit(out, "K3", k.k3);
                    emit(out, "K4", k.k4);
                }
            } else if (c.eta1 && c.eta2 && c.eta24) {
                if (auto v = validate_elastic_constants(*c.eta1, *c.eta2, *c.eta24); !v)
                    throw ConstraintError(v.violated);
                out << "elastic_constants = valid\n";
            }
            return ok;
        }

        if (c_min->parsed()) {
            const RunConfig c = mn.load();
            const EnergyModel model(c.params, c.N);
            const auto res = minimize(model, seed_state(parse_seed_kind(seed_name), c.params, c.N), c.minimize);
            const auto prof = reconstruct_director(res.state, c.params);
            const auto b = model.energy(res.state);
            const auto [rmax, tmax] = profile_maxima(prof);
            out << "converged = " << (res.report.converged ? "true" : "false") << '\n';
            out << "iterations = " << res.report.iterations << '\n';
            emit(out, "grad_norm", res.report.final_grad_norm);
            emit(out, "energy", b.total);
            emit(out, "delta_rho_max", rmax);
            emit(out, "theta_max", tmax);
            if (!profile_out.empty())
                write_file_atomic(profile_out, profile_csv(prof));
            if (!res.report.converged) {
                err << "error: minimizer did not converge (grad " << fmt17(res.report.final_grad_norm) << " after "
                    << res.report.iterations << " iterations)\n";
                return no_convergence;
            }
            return ok;
        }

        if (c_spec->parsed()) {
            const RunConfig c = sp.load();
            const EnergyModel model(c.params, c.N);
            SpectralState s = model.zero_state();
            if (sp_state == "minimized") {
                const auto res = minimize(model, seed_state(parse_seed_kind(sp_seed), c.params, c.N), c.minimize);
                if (!res.report.converged) {
                    err << "error: minimizer did not converge\n";
                    return no_convergence;
                }
                s = res.state;
            }
            const auto rep = spectrum(model, s);
            if (sp_out.empty()) {
                out << spectrum_csv(rep);
            } else {
                write_file_atomic(sp_out, spectrum_csv(rep));
                out << "morse_index = " << rep.morse_index << '\n';
                emit(out, "min_eigenvalue", rep.min_eigenvalue);
                out << "space = " << to_string(rep.space) << '\n';
            }
            return ok;
        }

        if (c_thr->parsed()) {
            const RunConfig c = th.load();
            const auto& p = c.params;
            emit(out, "d0", d_critical(p));
            emit(out, "T_CHS", p.T2star() + d_critical(p) / p.alpha2());
            const auto t = tilt_thresholds(p);
            emit(out, "t1", t.t1);
            emit(out, "t2", t.t2);
            emit(out, "theta_star_limit", std::numbers::pi / 2.0 - p.theta0());
            for (double tv : t_values)
                out << "theta_star(" << fmt17(tv) << ") = " << fmt17(theta_star(tv, p)) << '\n';
            return ok;
        }

        if (c_sweep->parsed()) {
            const RunConfig c = sw.load();
            scfg.N = c.N;
            scfg.minimize = c.minimize;
            scfg.branches = branches == "both" ? std::vector<int>{1, -1}
                                               : std::vector<int>{branches == "plus" ? 1 : -1};
            const auto recs = sweep_temperature(c.params, scfg);
            write_file_atomic(sweep_out, sweep_csv(recs));
            if (!sweep_svg.empty())
                write_file_atomic(sweep_svg, emit_svg(bifurcation_panels(recs)));
            const auto tr = detect_transitions(recs, scfg.eps_detect);
            out << "T_CHS = " << (tr.T_CHS ? fmt17(*tr.T_CHS) : "absent") << '\n';
            out << "T_HSSC = " << (tr.T_HSSC ? fmt17(*tr.T_HSSC) : "absent") << '\n';
            try {
                const auto fit = pitchfork_fit(recs, d_critical(c.params), window, scfg.eps_detect);
                emit(out, "pitchfork_exponent", fit.exponent);
                emit(out, "pitchfork_leading_coefficient", fit.leading_coefficient);
            } catch (const InsufficientData&) {
                out << "pitchfork_exponent = absent\n";
            }
            const auto fails = std::count_if(recs.begin(), recs.end(), [](const SweepRecord& r) { return !r.converged; });
            if (fails > 0)
                err << "warning: " << fails << " of " << recs.size() << " points did not converge\n";
            return ok;
        }

        if (c_es->parsed()) {
            if (!es.d)
                es.d = -5.0;
            const RunConfig c = es.load();
            const auto recs = elastic_sweep(c.params, knob == "k" ? ElasticKnob::k : ElasticKnob::lambda, es_values,
                                            c.N, c.minimize);
            write_file_atomic(es_out, elastic_csv(recs));
            for (const auto& r : recs)
                out << fmt17(r.value) << " theta_bar = " << fmt17(r.theta_bar) << '\n';
            return ok;
        }

        if (c_tc->parsed()) {
            if (!(s_plus > 0.0))
                throw InvalidInput("--s-plus must be positive");
            std::function<Vec3(double)> fn;
            if (field == "helix") {
                const double sg = tc.sigma != 0.0 ? tc.sigma : 1.0;
                fn = [sg](double z) { return Vec3{std::cos(sg * z), std::sin(sg * z), 0.0}; };
            } else if (field == "uniform") {
                fn = [](double) { return Vec3{1.0, 0.0, 0.0}; };
            } else {
                fn = random_director(rng_seed);
            }
            std::vector<double> z(points);
            for (int j = 0; j < points; ++j)
                z[j] = 2.0 * std::numbers::pi * j / points;
            const auto samples = sample_director(fn, z);
            const auto r = reduction_residual(samples, s_plus, tc);
            const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
            const double expected = reduction_offset(s_plus, tc);
            emit(out, "residual_min", *lo);
            emit(out, "residual_max", *hi);
            emit(out, "expected", expected);
            const double tol = 1e-6 * std::max(1.0, std::abs(expected));
            out << "constant = " << (is_spatially_constant(r, tol) ? "yes" : "no") << '\n';
            return ok;
        }

        if (c_plot->parsed()) {
            std::istringstream in(read_file(plot_in));
            const std::string svg = plot_kind == "profile" ? emit_svg(profile_panels(parse_profile_csv(in)))
                                                           : emit_svg(bifurcation_panels(parse_sweep_csv(in)));
            write_file_atomic(plot_out, svg);
            return ok;
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return io_failure;
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << '\n';
        return no_convergence;
    } catch (const SweepError& e) {
        err << "error: " << e.what() << '\n';
        return no_convergence;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << '\n';
        return no_convergence;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return bad_input;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return bad_input;
    }
    return bad_input;
}

} // namespace smectic::cli

#endif
