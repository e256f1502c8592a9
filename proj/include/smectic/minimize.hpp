#ifndef SMECTIC_MINIMIZE_HPP
#define SMECTIC_MINIMIZE_HPP

// First-order descent on the 2N+3 spectral coefficients: Barzilai-Borwein
// steps safeguarded by Armijo backtracking, or plain backtracking gradient
// descent.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "smectic/energy1d.hpp"
#include "smectic/errors.hpp"
#include "smectic/params.hpp"
#include "smectic/spectral.hpp"

namespace smectic {

enum class StepPolicy { barzilai_borwein, plain };

struct MinimizeOptions {
    double tol_grad = 1e-8; ///< sup-norm of the coefficient gradient
    long max_iters = 1000000;
    double initial_step = 1e-2;
    double backtrack = 0.5;
    double armijo_c = 1e-4;
    int max_backtracks = 60;
    StepPolicy policy = StepPolicy::barzilai_borwein;
    double rounding_tol = 1e-13; ///< energy changes below this (relative) count as rounding
    /// Descend along -P^{-1} grad with P a diagonal stiffness estimate (a
    /// Sobolev-metric gradient). Off for plain descent.
    bool precondition = true;
    int metric_refresh = 25; ///< iterations between metric updates at the current iterate

    static MinimizeOptions plain_gd()
    {
        MinimizeOptions o;
        o.policy = StepPolicy::plain;
        o.precondition = false;
        return o;
    }

    void validate() const
    {
        if (!(tol_grad > 0.0))
            throw InvalidInput("tol_grad must be positive");
        if (max_iters < 1)
            throw InvalidInput("max_iters must be at least 1");
        if (!(initial_step > 0.0))
            throw InvalidInput("initial_step must be positive");
        if (!(backtrack > 0.0 && backtrack < 1.0))
            throw InvalidInput("backtrack factor must lie in (0, 1)");
        if (!(armijo_c > 0.0 && armijo_c < 1.0))
            throw InvalidInput("armijo_c must lie in (0, 1)");
        if (max_backtracks < 1)
            throw InvalidInput("max_backtracks must be at least 1");
        if (metric_refresh < 1)
            throw InvalidInput("metric_refresh must be at least 1");
    }
};

struct MinimizeReport {
    bool converged = false;
    long iterations = 0;
    double final_grad_norm = 0.0;
    double final_energy = 0.0;
    bool energy_history_decreasing = true; ///< up to rounding_tol
    bool stalled = false; ///< line search could not make progress
};

struct MinimizeResult {
    SpectralState state;
    MinimizeReport report;
};

inline double sup_norm(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

/// Diagonal metric: Gram factor times the quadratic stiffness of each mode,
/// with the coupling term linearized about the given state and |d| in place
/// of d so it stays positive. At theta = 0, delta rho = 0 this is the exact
/// cholesteric stiffness.
inline std::vector<double> stiffness_metric(const EnergyModel& model, const SpectralState& at)
{
    const auto& p = model.params();
    const int N = model.N();
    const double h = p.h();
    const double c0 = std::cos(p.theta0());
    const double q2 = p.q() * p.q();
    const auto th = synthesize(at.theta(), Basis::cosine, 0, model.table());
    const auto rzz = synthesize(at.rho(), Basis::sine, 2, model.table());
    const int M = model.grid().M;

    // Grid means of lambda2 (d g / d theta)^2 and of sin^2, sin^4 theta.
    double tilt = 0.0, s2 = 0.0, s4 = 0.0;
    for (int j = 0; j < M; ++j) {
        const double s = std::sin(th[j]);
        const double gt = std::sin(2.0 * th[j]) * rzz[j];
        tilt += gt * gt;
        s2 += s * s;
        s4 += s * s * s * s;
    }
    tilt /= M;
    s2 /= M;
    s4 /= M;

    std::vector<double> m(model.num_unknowns());
    for (int k = 0; k <= N + 1; ++k) {
        const double w = model.table().omega(k);
        m[k] = (k == 0 ? h : h / 2.0) * 2.0 * (p.k1() * w * w + p.k3() * p.sigma() * p.sigma() + p.lambda2() * tilt);
    }
    for (int k = 1; k <= N + 1; ++k) {
        const double w = model.table().omega(k);
        const double diff = w * w - q2;
        const double a = q2 * c0 * c0, b = w * w;
        // mean of (a - b sin^2 theta)^2
        const double coupling = a * a - 2.0 * a * b * s2 + b * b * s4;
        const double v = 2.0 * p.lambda1() * diff * diff + 2.0 * p.lambda2() * coupling + std::abs(p.d()) + 1e-3 * p.f();
        m[N + 1 + k] = h / 2.0 * v;
    }
    for (double& v : m)
        v = std::max(v, 1e-12);
    return m;
}

inline std::vector<double> stiffness_metric(const EnergyModel& model)
{
    return stiffness_metric(model, model.zero_state());
}

inline MinimizeResult minimize(const EnergyModel& model, const SpectralState& state0,
                               const MinimizeOptions& opts = {})
{
    opts.validate();
    const int n = model.num_unknowns();
    SpectralState x = state0;
    std::vector<double> g(n), g_new(n), dir(n);
    std::vector<double> metric = opts.precondition ? stiffness_metric(model, x) : std::vector<double>(n, 1.0);
    double E = model.excess_and_gradient(x, g);
    if (!std::isfinite(E) || !x.all_finite())
        throw DivergenceError("minimize: non-finite energy at iterate 0");

    MinimizeReport rep;
    const double eps_f = opts.rounding_tol * std::max(1.0, std::abs(model.baseline()));
    SpectralState trial = x;
    double step = opts.initial_step;
    long it = 0;
    for (; it < opts.max_iters; ++it) {
        const double gnorm = sup_norm(g);
        if (gnorm <= opts.tol_grad) {
            rep.converged = true;
            break;
        }
        if (opts.precondition && it > 0 && it % opts.metric_refresh == 0)
            metric = stiffness_metric(model, x);
        // g2 is the descent rate g . P^{-1} g along dir = P^{-1} g.
        double g2 = 0.0;
        for (int i = 0; i < n; ++i) {
            dir[i] = g[i] / metric[i];
            g2 += g[i] * dir[i];
        }

        double alpha = step;
        bool accepted = false;
        double E_new = E;
        for (int b = 0; b < opts.max_backtracks; ++b) {
            auto xp = x.packed();
            auto tp = trial.packed();
            for (int i = 0; i < n; ++i)
                tp[i] = xp[i] - alpha * dir[i];
            E_new = model.excess(trial);
            if (std::isfinite(E_new) && E_new <= E - opts.armijo_c * alpha * g2) {
                accepted = true;
                break;
            }
            // Below rounding level the energy cannot certify decrease; use the
            // trapezoidal estimate from slopes instead (approximate Armijo).
            if (std::isfinite(E_new) && std::abs(E_new - E) <= eps_f) {
                model.excess_and_gradient(trial, g_new);
                double gg = 0.0;
                for (int i = 0; i < n; ++i)
                    gg += g_new[i] * dir[i];
                if (-0.5 * alpha * (g2 + gg) <= -opts.armijo_c * alpha * g2) {
                    accepted = true;
                    break;
                }
            }
            alpha *= opts.backtrack;
        }
        if (!accepted) {
            if (!std::isfinite(E_new))
                throw DivergenceError("minimize: non-finite energy at iterate " + std::to_string(it + 1));
            rep.stalled = true;
            break;
        }
        model.excess_and_gradient(trial, g_new);
        if (E_new > E + eps_f)
            rep.energy_history_decreasing = false;

        if (opts.policy == StepPolicy::barzilai_borwein) {
            double ss = 0.0, sy = 0.0;
            auto xp = x.packed();
            auto tp = trial.packed();
            for (int i = 0; i < n; ++i) {
                const double s = tp[i] - xp[i];
                const double y = g_new[i] - g[i];
                ss += s * metric[i] * s;
                sy += s * y;
            }
            step = sy > 0.0 ? std::clamp(ss / sy, 1e-12, 1e12) : std::min(2.0 * alpha, 1e12);
        } else {
            step = opts.initial_step;
        }
        std::swap(x, trial);
        std::swap(g, g_new);
        E = E_new;
    }
    rep.iterations = it;
    rep.final_grad_norm = sup_norm(g);
    rep.final_energy = model.baseline() + E;
    if (!std::isfinite(rep.final_energy))
        throw DivergenceError("minimize: non-finite energy at iterate " + std::to_string(it));
    return {std::move(x), rep};
}

inline MinimizeResult minimize(const SpectralState& state0, const ModelParams1D& params,
                               const MinimizeOptions& opts = {})
{
    return minimize(EnergyModel(params, state0.N()), state0, opts);
}

/// Representative of the tilt symmetry class (theta -> -theta and
/// theta -> theta - pi leave the energy unchanged) with mean tilt in [0, pi/2].
inline SpectralState canonical_tilt(SpectralState s)
{
    constexpr double pi = std::numbers::pi;
    s.theta_c(0) -= pi * std::round(s.theta_c(0) / pi);
    if (s.theta_c(0) < 0.0)
        for (double& c : s.theta())
            c = -c;
    return s;
}

enum class SeedKind { cholesteric, smectic_seed, conical_seed };

inline std::string to_string(SeedKind k)
{
    switch (k) {
    case SeedKind::cholesteric: return "cholesteric";
    case SeedKind::smectic_seed: return "smectic-seed";
    case SeedKind::conical_seed: return "conical-seed";
    }
    return "";
}

inline SeedKind parse_seed_kind(const std::string& s)
{
    if (s == "cholesteric")
        return SeedKind::cholesteric;
    if (s == "smectic-seed")
        return SeedKind::smectic_seed;
    if (s == "conical-seed")
        return SeedKind::conical_seed;
    throw InvalidInput("unknown seed kind '" + s + "'");
}

/// Initial states: zeros; theta = 0.01 with rho = 0.1 sin(qz); or
/// theta = pi/2 - theta0 with rho = 0.1 sin(qz).
inline SpectralState seed_state(SeedKind kind, const ModelParams1D& params, int N)
{
    SpectralState s(N, params.h());
    if (kind == SeedKind::cholesteric)
        return s;
    const int n0 = params.n0();
    if (n0 > N + 1)
        throw InvalidInput("seed_state: layer mode exceeds truncation order");
    s.rho_s(n0) = 0.1;
    s.theta_c(0) = kind == SeedKind::smectic_seed ? 0.01 : std::numbers::pi / 2.0 - params.theta0();
    return s;
}

} // namespace smectic

#endif
