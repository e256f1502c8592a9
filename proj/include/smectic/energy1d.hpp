#ifndef SMECTIC_ENERGY1D_HPP
#define SMECTIC_ENERGY1D_HPP

// Reduced one-dimensional free energy in (theta, delta rho):
//
//   F = int_0^h  k1 theta_z^2 - k2^2 sigma^2 cos^2 / (k2 cos^2 + k3 sin^2)
//              + (d/2) rho^2 - (e/3) rho^3 + (f/4) rho^4
//              + lambda1 (rho_zz + q^2 rho)^2
//              + lambda2 (sin^2 theta rho_zz + q^2 rho cos^2 theta0)^2  dz
//
// with the azimuth eliminated through phi_z = sigma k2 / (k2 cos^2 + k3 sin^2).
// The cholesteric baseline is -k2 sigma^2 h (no additive twist constant).

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "smectic/errors.hpp"
#include "smectic/params.hpp"
#include "smectic/spectral.hpp"

namespace smectic {

struct EnergyBreakdown {
    double total = 0.0;
    double elastic_theta = 0.0; ///< int k1 theta_z^2
    double chiral = 0.0;        ///< int -k2^2 sigma^2 cos^2 / (k2 cos^2 + k3 sin^2)
    double bulk_smectic = 0.0;  ///< int (d/2) rho^2 - (e/3) rho^3 + (f/4) rho^4
    double layer = 0.0;         ///< int lambda1 (rho_zz + q^2 rho)^2
    double coupling = 0.0;      ///< int lambda2 (sin^2 theta rho_zz + q^2 rho cos^2 theta0)^2
};

/// theta, delta rho, azimuth and director on a grid.
struct DirectorProfile {
    std::vector<double> z;
    std::vector<double> theta;
    std::vector<double> delta_rho;
    std::vector<double> phi;
    std::vector<double> n1;
    std::vector<double> n2;
    std::vector<double> n3;
};

/// Discretized energy for fixed parameters and truncation order. Holds the
/// basis tables so repeated evaluations (minimization, Hessians) are cheap.
/// Evaluation is single-threaded with fixed-order sums, hence bit-reproducible.
class EnergyModel {
  public:
    EnergyModel(const ModelParams1D& params, int N) : EnergyModel(params, N, Grid::for_order(N, params.h())) {}

    EnergyModel(const ModelParams1D& params, int N, const Grid& grid)
        : params_(params), N_(N), grid_(grid), table_(N + 1, grid)
    {
        if (N < 0 || N % 2 != 0)
            throw InvalidInput("EnergyModel: N must be an even non-negative integer");
        if (std::abs(grid.h - params.h()) > 1e-12 * params.h())
            throw InvalidInput("EnergyModel: grid height does not match params.h");
        if (grid.M < 2 * (N + 2))
            throw AliasingError("EnergyModel: grid too coarse for truncation order");
    }

    const ModelParams1D& params() const { return params_; }
    int N() const { return N_; }
    const Grid& grid() const { return grid_; }
    const BasisTable& table() const { return table_; }
    int num_unknowns() const { return 2 * N_ + 3; }

    SpectralState zero_state() const { return SpectralState(N_, params_.h()); }

    /// Cholesteric baseline -k2 sigma^2 h.
    double baseline() const { return -params_.k2() * params_.sigma() * params_.sigma() * params_.h(); }

    EnergyBreakdown energy(const SpectralState& s) const
    {
        check(s);
        const Fields fl = synthesize_fields(s);
        const Coeffs c = coeffs();
        double el = 0.0, ch = 0.0, bulk = 0.0, lay = 0.0, cpl = 0.0;
        for (int j = 0; j < grid_.M; ++j) {
            const Point p = point(c, fl, j);
            el += p.elastic;
            ch += p.chiral_excess;
            bulk += p.bulk;
            lay += p.layer;
            cpl += p.coupling;
        }
        const double w = grid_.h / grid_.M;
        EnergyBreakdown b;
        b.elastic_theta = w * el;
        b.chiral = baseline() + w * ch;
        b.bulk_smectic = w * bulk;
        b.layer = w * lay;
        b.coupling = w * cpl;
        b.total = b.elastic_theta + b.chiral + b.bulk_smectic + b.layer + b.coupling;
        return b;
    }

    /// Energy minus the constant baseline. Differences of this quantity are
    /// free of the cancellation error carried by the O(1) baseline.
    double excess(const SpectralState& s) const
    {
        check(s);
        const Fields fl = synthesize_fields(s);
        const Coeffs c = coeffs();
        double acc = 0.0;
        for (int j = 0; j < grid_.M; ++j) {
            const Point p = point(c, fl, j);
            acc += p.elastic + p.chiral_excess + p.bulk + p.layer + p.coupling;
        }
        return grid_.h / grid_.M * acc;
    }

    /// Exact gradient of the discrete energy with respect to the packed
    /// coefficients (theta_c then rho_s). Returns the excess energy too.
    double excess_and_gradient(const SpectralState& s, std::span<double> grad) const
    {
        check(s);
        if (static_cast<int>(grad.size()) != num_unknowns())
            throw InvalidInput("gradient: output has wrong length");
        const Fields fl = synthesize_fields(s);
        const Coeffs c = coeffs();
        const int M = grid_.M;
        std::vector<double> f_th(M), f_thz(M), f_rho(M), f_rzz(M);
        double acc = 0.0;
        for (int j = 0; j < M; ++j) {
            const Point p = point(c, fl, j);
            acc += p.elastic + p.chiral_excess + p.bulk + p.layer + p.coupling;
            f_th[j] = p.d_theta;
            f_thz[j] = p.d_theta_z;
            f_rho[j] = p.d_rho;
            f_rzz[j] = p.d_rho_zz;
        }
        const double w = grid_.h / M;
        for (int k = 0; k <= N_ + 1; ++k) {
            const double om = table_.omega(k);
            const double* cr = table_.cos_row(k);
            const double* sr = table_.sin_row(k);
            double g = 0.0;
            for (int j = 0; j < M; ++j)
                g += f_th[j] * cr[j] - om * f_thz[j] * sr[j];
            grad[k] = w * g;
        }
        for (int k = 1; k <= N_ + 1; ++k) {
            const double om2 = table_.omega(k) * table_.omega(k);
            const double* sr = table_.sin_row(k);
            double g = 0.0;
            for (int j = 0; j < M; ++j)
                g += (f_rho[j] - om2 * f_rzz[j]) * sr[j];
            grad[N_ + 1 + k] = w * g;
        }
        return w * acc;
    }

    std::vector<double> gradient(const SpectralState& s) const
    {
        std::vector<double> g(num_unknowns());
        excess_and_gradient(s, g);
        return g;
    }

    /// Strong-form Euler-Lagrange residuals on the grid:
    ///   R_theta = -2 k1 theta_zz + df/dtheta
    ///   R_rho   = df/drho + (df/drho_zz)_zz
    std::pair<std::vector<double>, std::vector<double>> el_residual(const SpectralState& s) const
    {
        check(s);
        const Fields fl = synthesize_fields(s);
        const Coeffs c = coeffs();
        const int M = grid_.M;
        const auto theta_zz = synthesize(s.theta(), Basis::cosine, 2, table_);
        std::vector<double> r_theta(M), r_rho(M), f_rzz(M);
        for (int j = 0; j < M; ++j) {
            const Point p = point(c, fl, j);
            r_theta[j] = -2.0 * params_.k1() * theta_zz[j] + p.d_theta;
            r_rho[j] = p.d_rho;
            f_rzz[j] = p.d_rho_zz;
        }
        const auto f_rzz_zz = periodic_derivative(f_rzz, grid_, 2);
        for (int j = 0; j < M; ++j)
            r_rho[j] += f_rzz_zz[j];
        return {std::move(r_theta), std::move(r_rho)};
    }

  private:
    struct Fields {
        std::vector<double> theta, theta_z, rho, rho_zz;
    };

    struct Coeffs {
        double k1, k2, k3, sig2, d, e, f, lam1, lam2, q2, c0sq;
    };

    struct Point {
        double elastic, chiral_excess, bulk, layer, coupling;
        double d_theta, d_theta_z, d_rho, d_rho_zz;
    };

    Coeffs coeffs() const
    {
        const double c0 = std::cos(params_.theta0());
        return {params_.k1(), params_.k2(),      params_.k3(),      params_.sigma() * params_.sigma(),
                params_.d(),  params_.e(),       params_.f(),       params_.lambda1(),
                params_.lambda2(), params_.q() * params_.q(), c0 * c0};
    }

    void check(const SpectralState& s) const
    {
        if (s.N() != N_)
            throw InvalidInput("EnergyModel: state truncation order does not match");
        if (std::abs(s.h() - params_.h()) > 1e-12 * params_.h())
            throw InvalidInput("EnergyModel: state height does not match params.h");
    }

    Fields synthesize_fields(const SpectralState& s) const
    {
        return {synthesize(s.theta(), Basis::cosine, 0, table_), synthesize(s.theta(), Basis::cosine, 1, table_),
                synthesize(s.rho(), Basis::sine, 0, table_), synthesize(s.rho(), Basis::sine, 2, table_)};
    }

    static Point point(const Coeffs& c, const Fields& fl, int j)
    {
        const double th = fl.theta[j];
        const double thz = fl.theta_z[j];
        const double r = fl.rho[j];
        const double rzz = fl.rho_zz[j];
        const double sn = std::sin(th);
        const double cs = std::cos(th);
        const double s2 = sn * sn;
        const double sin2 = 2.0 * sn * cs;
        const double D = c.k2 * cs * cs + c.k3 * s2;
        const double L = rzz + c.q2 * r;
        const double P = s2 * rzz + c.q2 * r * c.c0sq;
        const double r2 = r * r;

        Point p;
        p.elastic = c.k1 * thz * thz;
        // -k2^2 s^2 cos^2/D = -k2 s^2 + k2 k3 s^2 sin^2/D
        p.chiral_excess = c.k2 * c.k3 * c.sig2 * s2 / D;
        p.bulk = c.d / 2.0 * r2 - c.e / 3.0 * r2 * r + c.f / 4.0 * r2 * r2;
        p.layer = c.lam1 * L * L;
        p.coupling = c.lam2 * P * P;

        p.d_theta = c.k2 * c.k2 * c.k3 * c.sig2 * sin2 / (D * D) + 2.0 * c.lam2 * P * sin2 * rzz;
        p.d_theta_z = 2.0 * c.k1 * thz;
        p.d_rho = c.d * r - c.e * r2 + c.f * r2 * r + 2.0 * c.lam1 * L * c.q2 + 2.0 * c.lam2 * P * c.q2 * c.c0sq;
        p.d_rho_zz = 2.0 * c.lam1 * L + 2.0 * c.lam2 * P * s2;
        return p;
    }

    ModelParams1D params_;
    int N_;
    Grid grid_;
    BasisTable table_;
};

// Free-function forms; each builds a model on the default grid.

inline EnergyBreakdown energy(const SpectralState& state, const ModelParams1D& params)
{
    return EnergyModel(params, state.N()).energy(state);
}

inline std::vector<double> gradient(const SpectralState& state, const ModelParams1D& params)
{
    return EnergyModel(params, state.N()).gradient(state);
}

inline std::pair<std::vector<double>, std::vector<double>> el_residual(const SpectralState& state,
                                                                       const ModelParams1D& params)
{
    return EnergyModel(params, state.N()).el_residual(state);
}

/// Azimuth phi(z) = int_0^z sigma k2 / (k2 cos^2 theta + k3 sin^2 theta) and
/// director n = (cos phi cos theta, sin phi cos theta, sin theta) on `grid`.
inline DirectorProfile reconstruct_director(const SpectralState& state, const ModelParams1D& params,
                                            const Grid& grid)
{
    if (std::abs(grid.h - params.h()) > 1e-12 * params.h() || std::abs(state.h() - params.h()) > 1e-12 * params.h())
        throw InvalidInput("reconstruct_director: heights do not match");
    const BasisTable table(state.N() + 1, grid);
    DirectorProfile p;
    p.z = grid.nodes();
    p.theta = synthesize(state.theta(), Basis::cosine, 0, table);
    p.delta_rho = synthesize(state.rho(), Basis::sine, 0, table);
    const int M = grid.M;
    std::vector<double> rate(M);
    for (int j = 0; j < M; ++j) {
        const double c = std::cos(p.theta[j]);
        const double s = std::sin(p.theta[j]);
        rate[j] = params.sigma() * params.k2() / (params.k2() * c * c + params.k3() * s * s);
    }
    p.phi = Trig::fit(rate, grid).antiderivative();
    p.n1.resize(M);
    p.n2.resize(M);
    p.n3.resize(M);
    for (int j = 0; j < M; ++j) {
        const double ct = std::cos(p.theta[j]);
        p.n1[j] = std::cos(p.phi[j]) * ct;
        p.n2[j] = std::sin(p.phi[j]) * ct;
        p.n3[j] = std::sin(p.theta[j]);
    }
    return p;
}

inline DirectorProfile reconstruct_director(const SpectralState& state, const ModelParams1D& params)
{
    return reconstruct_director(state, params, Grid::for_order(state.N(), params.h()));
}

} // namespace smectic

#endif
