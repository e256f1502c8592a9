#ifndef SMECTIC_SWEEP_HPP
#define SMECTIC_SWEEP_HPP

// Temperature continuation with warm starts, transition detection and
// pitchfork fits, plus mean-tilt sweeps over elastic constants.

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "smectic/energy1d.hpp"
#include "smectic/errors.hpp"
#include "smectic/minimize.hpp"
#include "smectic/params.hpp"
#include "smectic/stability.hpp"

namespace smectic {

struct SweepConfig {
    double T_start = -9.5;
    double T_end = -11.5;
    double dT = 0.02; ///< magnitude; the sweep walks from T_start toward T_end
    std::vector<SeedKind> seeds{SeedKind::smectic_seed, SeedKind::conical_seed};
    std::vector<int> branches{+1, -1};
    double eps_detect = 1e-3;
    bool record_morse = false;
    bool cold_start = false;
    int N = 64;
    MinimizeOptions minimize;
    double max_failure_fraction = 0.2;

    void validate() const
    {
        if (!(dT != 0.0) || !std::isfinite(dT))
            throw InvalidInput("sweep: dT must be non-zero");
        if (!std::isfinite(T_start) || !std::isfinite(T_end))
            throw InvalidInput("sweep: temperature range must be finite");
        if (!(eps_detect > 0.0))
            throw InvalidInput("sweep: eps_detect must be positive");
        if (branches.empty())
            throw InvalidInput("sweep: at least one branch required");
        for (int b : branches)
            if (b != 1 && b != -1)
                throw InvalidInput("sweep: branch labels must be +1 or -1");
        minimize.validate();
    }

    /// Temperatures from T_start toward T_end inclusive, in walk order.
    std::vector<double> temperatures() const
    {
        validate();
        const double step = std::abs(dT);
        const double span = std::abs(T_end - T_start);
        const long count = std::lround(std::floor(span / step + 1e-9)) + 1;
        const double dir = T_end >= T_start ? 1.0 : -1.0;
        std::vector<double> T(count);
        for (long i = 0; i < count; ++i)
            T[i] = T_start + dir * step * static_cast<double>(i);
        return T;
    }
};

struct SweepRecord {
    double T = 0.0;
    double d = 0.0;
    int branch = 1;
    double delta_rho_max = 0.0;
    double theta_max = 0.0;
    double energy = 0.0;
    std::optional<int> morse_index;
    bool converged = true;
};

struct BranchSolution {
    SpectralState state;
    double energy;
    bool converged;
};

namespace detail {

/// Sign-normalized maxima: delta rho in the branch orientation, theta flipped
/// to its dominant sign.
inline std::pair<double, double> normalized_maxima(const EnergyModel& model, const SpectralState& s, int branch)
{
    const auto th = synthesize(s.theta(), Basis::cosine, 0, model.table());
    const auto rho = synthesize(s.rho(), Basis::sine, 0, model.table());
    double rmax = 0.0, tmax = -1e300, tmin = 1e300;
    for (double r : rho)
        rmax = std::max(rmax, branch * r);
    for (double t : th) {
        tmax = std::max(tmax, t);
        tmin = std::min(tmin, t);
    }
    return {rmax, std::max(tmax, -tmin)};
}

inline SpectralState scaled_seed(SeedKind k, const ModelParams1D& p, int N, int branch)
{
    SpectralState s = seed_state(k, p, N);
    for (double& c : s.rho())
        c *= branch;
    return s;
}

/// Minimize from each candidate and keep the lowest-energy result,
/// preferring converged runs.
inline BranchSolution best_of(const EnergyModel& model, const std::vector<SpectralState>& starts,
                              const MinimizeOptions& opts)
{
    std::optional<BranchSolution> best;
    for (const auto& s0 : starts) {
        auto r = minimize(model, s0, opts);
        BranchSolution cand{canonical_tilt(std::move(r.state)), r.report.final_energy, r.report.converged};
        if (!best || (cand.converged && !best->converged) ||
            (cand.converged == best->converged && cand.energy < best->energy))
            best = std::move(cand);
    }
    return std::move(*best);
}

inline SweepRecord make_record(const EnergyModel& model, const BranchSolution& sol, double T, int branch,
                               bool record_morse)
{
    SweepRecord r;
    r.T = T;
    r.d = model.params().d();
    r.branch = branch;
    const auto [rm, tm] = normalized_maxima(model, sol.state, branch);
    r.delta_rho_max = rm;
    r.theta_max = tm;
    r.energy = sol.energy;
    r.converged = sol.converged;
    if (record_morse)
        r.morse_index = spectrum(model, sol.state).morse_index;
    return r;
}

} // namespace detail

/// Records ordered by walk (decreasing T for a cooling sweep), branch +1
/// before -1 at each temperature.
inline std::vector<SweepRecord> sweep_temperature(const ModelParams1D& params, const SweepConfig& cfg)
{
    const auto Ts = cfg.temperatures();
    const std::size_t nb = cfg.branches.size();
    std::vector<SweepRecord> out(Ts.size() * nb);

    auto seeds_at = [&](const ModelParams1D& p, int branch) {
        std::vector<SpectralState> s;
        for (SeedKind k : cfg.seeds)
            s.push_back(detail::scaled_seed(k, p, cfg.N, branch));
        if (s.empty())
            s.push_back(seed_state(SeedKind::cholesteric, p, cfg.N));
        return s;
    };

    if (cfg.cold_start) {
        std::vector<std::future<std::vector<SweepRecord>>> jobs;
        for (double T : Ts)
            jobs.push_back(std::async(std::launch::async, [&, T] {
                const ModelParams1D p = params.at_temperature(T);
                const EnergyModel model(p, cfg.N);
                std::vector<SweepRecord> recs;
                for (int b : cfg.branches)
                    recs.push_back(detail::make_record(model, detail::best_of(model, seeds_at(p, b), cfg.minimize), T,
                                                       b, cfg.record_morse));
                return recs;
            }));
        for (std::size_t i = 0; i < Ts.size(); ++i) {
            auto recs = jobs[i].get();
            for (std::size_t b = 0; b < nb; ++b)
                out[i * nb + b] = recs[b];
        }
    } else {
        for (std::size_t b = 0; b < nb; ++b) {
            const int branch = cfg.branches[b];
            std::optional<SpectralState> warm;
            for (std::size_t i = 0; i < Ts.size(); ++i) {
                const ModelParams1D p = params.at_temperature(Ts[i]);
                const EnergyModel model(p, cfg.N);
                auto starts = seeds_at(p, branch);
                if (warm)
                    starts.insert(starts.begin(), *warm);
                auto sol = detail::best_of(model, starts, cfg.minimize);
                out[i * nb + b] = detail::make_record(model, sol, Ts[i], branch, cfg.record_morse);
                if (sol.converged)
                    warm = sol.state;
            }
        }
    }

    const auto failures = std::count_if(out.begin(), out.end(), [](const SweepRecord& r) { return !r.converged; });
    if (static_cast<double>(failures) > cfg.max_failure_fraction * static_cast<double>(out.size()))
        throw SweepError("sweep: " + std::to_string(failures) + " of " + std::to_string(out.size()) +
                         " points failed to converge");
    return out;
}

struct Transitions {
    std::optional<double> T_CHS;  ///< cholesteric to helical smectic
    std::optional<double> T_HSSC; ///< helical smectic to smectic C*
};

namespace detail {

/// First index with value >= eps (records in decreasing T), refined by a
/// straight line through squared amplitudes.
template <class Get>
std::optional<double> locate_onset(const std::vector<SweepRecord>& recs, double eps, Get get)
{
    std::size_t i = 0;
    while (i < recs.size() && get(recs[i]) < eps)
        ++i;
    if (i == recs.size() || i == 0)
        return std::nullopt;
    const double a2 = get(recs[i]) * get(recs[i]);
    const double Ti = recs[i].T;
    const double Tprev = recs[i - 1].T;
    double est = 0.5 * (Ti + Tprev);
    if (i + 1 < recs.size() && get(recs[i + 1]) >= eps) {
        const double b2 = get(recs[i + 1]) * get(recs[i + 1]);
        const double slope = (b2 - a2) / (recs[i + 1].T - Ti);
        if (slope != 0.0)
            est = Ti - a2 / slope;
    }
    const double lo = std::min(Ti, Tprev), hi = std::max(Ti, Tprev);
    return std::clamp(est, lo, hi);
}

inline std::vector<SweepRecord> single_branch(const std::vector<SweepRecord>& records)
{
    if (records.empty())
        return {};
    const int b = records.front().branch;
    std::vector<SweepRecord> out;
    for (const auto& r : records)
        if (r.branch == b)
            out.push_back(r);
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i].T < out[i - 1].T))
            throw InvalidInput("detect_transitions: records must be ordered by decreasing T");
    return out;
}

} // namespace detail

/// Onset temperatures of delta rho and theta order. Uses the branch of the
/// first record when several are interleaved.
inline Transitions detect_transitions(const std::vector<SweepRecord>& records, double eps_detect = 1e-3)
{
    if (!(eps_detect > 0.0))
        throw InvalidInput("detect_transitions: eps_detect must be positive");
    const auto recs = detail::single_branch(records);
    Transitions t;
    t.T_CHS = detail::locate_onset(recs, eps_detect, [](const SweepRecord& r) { return r.delta_rho_max; });
    t.T_HSSC = detail::locate_onset(recs, eps_detect, [](const SweepRecord& r) { return r.theta_max; });
    return t;
}

struct PitchforkFit {
    double exponent;
    double prefactor;           ///< exp(intercept) of the log-log line
    double leading_coefficient; ///< delta_rho_max / sqrt(d0 - d) nearest d0
    int count;
};

inline PitchforkFit pitchfork_fit(const std::vector<SweepRecord>& records, double d0, double window,
                                  double eps_detect = 1e-3)
{
    if (!(window > 0.0))
        throw InvalidInput("pitchfork_fit: window must be positive");
    const auto recs = detail::single_branch(records);
    std::vector<double> x, y;
    double nearest_gap = 1e300, lead = 0.0;
    for (const auto& r : recs) {
        if (!(r.d > d0 - window && r.d < d0) || r.delta_rho_max < eps_detect || !r.converged)
            continue;
        const double gap = d0 - r.d;
        x.push_back(std::log(gap));
        y.push_back(std::log(r.delta_rho_max));
        if (gap < nearest_gap) {
            nearest_gap = gap;
            lead = r.delta_rho_max / std::sqrt(gap);
        }
    }
    const int n = static_cast<int>(x.size());
    if (n < 5)
        throw InsufficientData("pitchfork_fit: need at least 5 smectic records in the window, got " +
                               std::to_string(n));
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0))
        throw InsufficientData("pitchfork_fit: records do not span a range of d");
    const double slope = sxy / sxx;
    return {slope, std::exp(my - slope * mx), lead, n};
}

inline double pitchfork_exponent(const std::vector<SweepRecord>& records, double d0, double window,
                                 double eps_detect = 1e-3)
{
    return pitchfork_fit(records, d0, window, eps_detect).exponent;
}

// ---------------------------------------------------------------------------
// Elastic-constant sweeps
// ---------------------------------------------------------------------------

enum class ElasticKnob {
    k,     ///< k1 = k2 = k3 = value
    lambda ///< lambda1 = lambda2 = value
};

struct ElasticRecord {
    double value = 0.0;
    double theta_bar = 0.0; ///< (1/h) int theta
    double theta_max = 0.0;
    double delta_rho_max = 0.0;
    double energy = 0.0;
    bool converged = true;
};

inline ModelParams1D with_knob(const ModelParams1D& base, ElasticKnob knob, double value)
{
    auto v = base.values();
    if (knob == ElasticKnob::k)
        v.k1 = v.k2 = v.k3 = value;
    else
        v.lambda1 = v.lambda2 = value;
    return ModelParams1D(v);
}

/// Conical start with the layer amplitude of the untilted-coupling single
/// mode, sqrt(-4d / 3f), instead of the small symmetry-breaking seed.
inline SpectralState deep_conical_seed(const ModelParams1D& p, int N)
{
    SpectralState s = seed_state(SeedKind::conical_seed, p, N);
    if (p.d() < 0.0 && p.f() > 0.0)
        s.rho_s(p.n0()) = std::sqrt(-4.0 * p.d() / (3.0 * p.f()));
    return s;
}

/// For each value: minimize from the smectic, conical and deep conical
/// seeds, keep the lowest energy, record the mean tilt. Points run
/// concurrently.
inline std::vector<ElasticRecord> elastic_sweep(const ModelParams1D& base, ElasticKnob knob,
                                                const std::vector<double>& values, int N = 64,
                                                const MinimizeOptions& opts = {},
                                                double max_failure_fraction = 0.2)
{
    opts.validate();
    std::vector<std::future<ElasticRecord>> jobs;
    for (double val : values)
        jobs.push_back(std::async(std::launch::async, [&base, knob, val, N, &opts] {
            const ModelParams1D p = with_knob(base, knob, val);
            const EnergyModel model(p, N);
            const auto sol = detail::best_of(
                model,
                {seed_state(SeedKind::smectic_seed, p, N), seed_state(SeedKind::conical_seed, p, N),
                 deep_conical_seed(p, N)},
                opts);
            ElasticRecord r;
            r.value = val;
            r.theta_bar = sol.state.theta_c(0);
            const auto [rm, tm] = detail::normalized_maxima(model, sol.state, 1);
            r.delta_rho_max = rm;
            r.theta_max = tm;
            r.energy = sol.energy;
            r.converged = sol.converged;
            return r;
        }));
    std::vector<ElasticRecord> out;
    for (auto& j : jobs)
        out.push_back(j.get());
    const auto failures = std::count_if(out.begin(), out.end(), [](const ElasticRecord& r) { return !r.converged; });
    if (static_cast<double>(failures) > max_failure_fraction * static_cast<double>(out.size()))
        throw SweepError("elastic sweep: " + std::to_string(failures) + " of " + std::to_string(out.size()) +
                         " points failed to converge");
    return out;
}

} // namespace smectic

#endif
