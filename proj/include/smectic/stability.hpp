#ifndef SMECTIC_STABILITY_HPP
#define SMECTIC_STABILITY_HPP

// Second variation of the reduced energy: finite-difference Hessians of the
// analytic gradient, mass-normalized spectra and Morse indices, closed-form
// cholesteric spectra and the tilt thresholds.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "smectic/energy1d.hpp"
#include "smectic/errors.hpp"
#include "smectic/minimize.hpp"
#include "smectic/params.hpp"
#include "smectic/spectral.hpp"

namespace smectic {

inline constexpr double default_tol_eig = 1e-8;

enum class SpectrumSpace { sine_restricted, analytic_full };

inline std::string to_string(SpectrumSpace s)
{
    return s == SpectrumSpace::sine_restricted ? "sine-restricted" : "analytic-full";
}

struct StabilityReport {
    std::vector<double> eigenvalues; ///< ascending
    int morse_index = 0;
    double min_eigenvalue = 0.0;
    SpectrumSpace space = SpectrumSpace::sine_restricted;
};

struct HessianResult {
    Eigen::MatrixXd H;       ///< symmetrized
    double asymmetry = 0.0; ///< max |H - H^T| / max |H| before symmetrization
};

/// Hessian of the discrete energy in coefficient space by central differences
/// of the analytic gradient, Richardson-extrapolated (steps delta and delta/2).
inline HessianResult hessian_with_asymmetry(const EnergyModel& model, const SpectralState& state)
{
    const int n = model.num_unknowns();
    const double delta = 1e-5 * std::max(1.0, sup_norm(state.packed()));
    Eigen::MatrixXd H(n, n);
    SpectralState xp = state, xm = state;
    std::vector<double> gp(n), gm(n), d1(n);
    auto central = [&](int j, double step, std::vector<double>& out) {
        xp.packed()[j] = state.packed()[j] + step;
        xm.packed()[j] = state.packed()[j] - step;
        model.excess_and_gradient(xp, gp);
        model.excess_and_gradient(xm, gm);
        xp.packed()[j] = state.packed()[j];
        xm.packed()[j] = state.packed()[j];
        for (int i = 0; i < n; ++i)
            out[i] = (gp[i] - gm[i]) / (2.0 * step);
    };
    std::vector<double> d2(n);
    for (int j = 0; j < n; ++j) {
        central(j, delta, d1);
        central(j, delta / 2.0, d2);
        for (int i = 0; i < n; ++i)
            H(i, j) = (4.0 * d2[i] - d1[i]) / 3.0;
    }
    HessianResult r;
    const double scale = H.cwiseAbs().maxCoeff();
    r.asymmetry = scale > 0.0 ? (H - H.transpose()).cwiseAbs().maxCoeff() / scale : 0.0;
    r.H = 0.5 * (H + H.transpose());
    return r;
}

inline Eigen::MatrixXd hessian(const EnergyModel& model, const SpectralState& state)
{
    return hessian_with_asymmetry(model, state).H;
}

inline Eigen::MatrixXd hessian(const SpectralState& state, const ModelParams1D& params)
{
    return hessian(EnergyModel(params, state.N()), state);
}

/// Diagonal of the L2 Gram matrix of the basis: h for the constant cosine
/// mode, h/2 for every other mode.
inline std::vector<double> gram_diagonal(int N, double h)
{
    std::vector<double> g(2 * N + 3, h / 2.0);
    g[0] = h;
    return g;
}

/// Eigenvalues of G^{-1/2} H G^{-1/2}: Rayleigh quotients per unit L2 norm.
inline StabilityReport spectrum_from_hessian(const Eigen::MatrixXd& H, int N, double h,
                                             double tol_eig = default_tol_eig)
{
    const auto g = gram_diagonal(N, h);
    const int n = static_cast<int>(g.size());
    if (H.rows() != n || H.cols() != n)
        throw InvalidInput("spectrum: Hessian size does not match truncation order");
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i)
        s[i] = 1.0 / std::sqrt(g[i]);
    const Eigen::MatrixXd A = s.asDiagonal() * H * s.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericError("spectrum: symmetric eigen-solve failed");
    StabilityReport r;
    r.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(r.eigenvalues.begin(), r.eigenvalues.end());
    for (double ev : r.eigenvalues) {
        if (!std::isfinite(ev))
            throw NumericError("spectrum: non-finite eigenvalue");
        if (ev < -tol_eig)
            ++r.morse_index;
    }
    r.min_eigenvalue = r.eigenvalues.front();
    r.space = SpectrumSpace::sine_restricted;
    return r;
}

inline StabilityReport spectrum(const EnergyModel& model, const SpectralState& state,
                                double tol_eig = default_tol_eig)
{
    return spectrum_from_hessian(hessian(model, state), model.N(), model.params().h(), tol_eig);
}

inline StabilityReport spectrum(const SpectralState& state, const ModelParams1D& params,
                                double tol_eig = default_tol_eig)
{
    return spectrum(EnergyModel(params, state.N()), state, tol_eig);
}

// ---------------------------------------------------------------------------
// Closed forms at the cholesteric state
// ---------------------------------------------------------------------------

/// d0 = -2 lambda2 q^4 cos^4 theta0.
inline double d_critical(const ModelParams1D& p)
{
    const double c = std::cos(p.theta0());
    return -2.0 * p.lambda2() * std::pow(p.q(), 4) * c * c * c * c;
}

enum class ModeKind { constant_rho, rho_mode, theta_mode };

struct LabeledEigenvalue {
    std::string label;
    ModeKind kind;
    int n;            ///< mode number
    int multiplicity; ///< in the full (sine and cosine) space
    double value;
};

/// delta rho eigenvalue of mode n (n = 0 is the constant mode).
inline double rho_mode_eigenvalue(const ModelParams1D& p, int n)
{
    const double w = 2.0 * std::numbers::pi * n / p.h();
    const double diff = w * w - p.q() * p.q();
    return p.d() - d_critical(p) + 2.0 * p.lambda1() * diff * diff;
}

/// theta eigenvalue of cosine mode n: 2 (k1 w^2 + k3 sigma^2); 2 k1 (w^2 + sigma^2) when k1 = k3.
inline double theta_mode_eigenvalue(const ModelParams1D& p, int n)
{
    const double w = 2.0 * std::numbers::pi * n / p.h();
    return 2.0 * (p.k1() * w * w + p.k3() * p.sigma() * p.sigma());
}

inline std::vector<LabeledEigenvalue> analytic_cholesteric_spectrum(const ModelParams1D& p, int n_max)
{
    if (n_max < p.n0())
        throw InvalidInput("analytic_cholesteric_spectrum: n_max must be at least n0");
    std::vector<LabeledEigenvalue> out;
    out.push_back({"eta=1", ModeKind::constant_rho, 0, 1, rho_mode_eigenvalue(p, 0)});
    for (int n = 1; n <= n_max; ++n)
        out.push_back({"rho n=" + std::to_string(n), ModeKind::rho_mode, n, 2, rho_mode_eigenvalue(p, n)});
    for (int n = 0; n <= n_max; ++n)
        out.push_back({"theta n=" + std::to_string(n), ModeKind::theta_mode, n, 1, theta_mode_eigenvalue(p, n)});
    return out;
}

/// Number of negative sine delta rho modes n >= 1.
inline int negative_rho_mode_count(const ModelParams1D& p)
{
    const double wq = p.q() * p.h() / (2.0 * std::numbers::pi);
    if (p.lambda1() == 0.0 && p.d() - d_critical(p) < 0.0)
        throw DomainError("Morse index is unbounded when lambda1 = 0 and d < d0");
    int count = 0;
    for (int n = 1;; ++n) {
        const bool neg = rho_mode_eigenvalue(p, n) < 0.0;
        if (neg)
            ++count;
        else if (n > wq)
            break;
    }
    return count;
}

/// Full-space cholesteric Morse index: 2 card{n >= 1 : mu_n < 0} + m0.
inline int morse_index_analytic(const ModelParams1D& p)
{
    const int m0 = rho_mode_eigenvalue(p, 0) < 0.0 ? 1 : 0;
    return 2 * negative_rho_mode_count(p) + m0;
}

struct TiltThresholds {
    double t1; ///< twist plane stable below
    double t2; ///< twist plane unstable above
};

inline TiltThresholds tilt_thresholds(const ModelParams1D& p)
{
    const double c2 = std::pow(std::cos(p.theta0()), 2);
    const double q4 = std::pow(p.q(), 4);
    const double num = p.k1() * p.sigma() * p.sigma();
    const double qh2 = 2.0 * p.q() * p.h();
    const double denom2 = qh2 - std::sin(qh2);
    if (!(denom2 > 0.0))
        throw DomainError("tilt_thresholds: 2qh - sin(2qh) must be positive");
    return {std::sqrt(num / (2.0 * p.lambda2() * q4 * c2)), std::sqrt(qh2 * num / (denom2 * p.lambda2() * q4 * c2))};
}

/// Optimal constant tilt for frozen delta rho = t sin(qz).
inline double theta_star(double t, const ModelParams1D& p)
{
    if (!(t >= 0.0))
        throw InvalidInput("theta_star: t must be non-negative");
    if (t == 0.0)
        return 0.0;
    const double c2 = std::pow(std::cos(p.theta0()), 2);
    const double q4 = std::pow(p.q(), 4);
    const double h = p.h();
    const double eff = h - std::sin(2.0 * p.q() * h) / (2.0 * p.q());
    const double arg = c2 - p.k1() * h * p.sigma() * p.sigma() / (p.lambda2() * t * t * q4 * eff);
    return std::asin(std::sqrt(std::max(arg, 0.0)));
}

/// 2 int_0^h k1 tb_z^2 + k1 sigma^2 tb^2 - 2 lambda2 t^2 q^4 sin^2(qz) cos^2 theta0 tb^2 dz
/// for a perturbation sampled on a periodic grid.
inline double second_variation_tilt(double t, const ModelParams1D& p, std::span<const double> theta_bar,
                                    const Grid& grid)
{
    if (!(t >= 0.0))
        throw InvalidInput("second_variation_tilt: t must be non-negative");
    if (static_cast<int>(theta_bar.size()) != grid.M)
        throw InvalidInput("second_variation_tilt: perturbation does not match grid");
    const auto tz = periodic_derivative(theta_bar, grid, 1);
    const double c2 = std::pow(std::cos(p.theta0()), 2);
    const double a = 2.0 * p.lambda2() * t * t * std::pow(p.q(), 4) * c2;
    std::vector<double> integrand(grid.M);
    for (int j = 0; j < grid.M; ++j) {
        const double s = std::sin(p.q() * grid.z(j));
        const double tb = theta_bar[j];
        integrand[j] = p.k1() * tz[j] * tz[j] + p.k1() * p.sigma() * p.sigma() * tb * tb - a * s * s * tb * tb;
    }
    return 2.0 * quadrature(integrand, grid.h);
}

/// Energy of the state theta = const, delta rho = t sin(qz).
inline double constant_tilt_energy(const EnergyModel& model, double theta, double t)
{
    SpectralState s = model.zero_state();
    s.theta_c(0) = theta;
    s.rho_s(model.params().n0()) = t;
    return model.excess(s);
}

/// Golden-section minimization of constant_tilt_energy over theta in [0, pi/2].
inline double optimal_constant_tilt(const EnergyModel& model, double t, double tol = 1e-10)
{
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = std::numbers::pi / 2.0;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = constant_tilt_energy(model, c, t), fd = constant_tilt_energy(model, d, t);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = constant_tilt_energy(model, c, t);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = constant_tilt_energy(model, d, t);
        }
    }
    const double mid = 0.5 * (a + b);
    // The interval can collapse onto the boundary; report the better endpoint.
    return constant_tilt_energy(model, 0.0, t) <= constant_tilt_energy(model, mid, t) ? 0.0 : mid;
}

} // namespace smectic

#endif
