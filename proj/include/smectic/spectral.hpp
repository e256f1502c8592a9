#ifndef SMECTIC_SPECTRAL_HPP
#define SMECTIC_SPECTRAL_HPP

// Truncated cosine/sine Galerkin representation on [0, h]:
//   theta(z) = sum_{k=0}^{N+1} a_k cos(2 k pi z / h)
//   rho(z)   = sum_{k=1}^{N+1} b_k sin(2 k pi z / h)
// sampled on a uniform periodic grid (endpoint omitted). Transforms are
// dense matrix products.

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smectic/errors.hpp"

namespace smectic {

enum class Basis { cosine, sine };

/// Lowest mode number carried by a basis: 0 for cosine, 1 for sine.
constexpr int first_mode(Basis b) { return b == Basis::cosine ? 0 : 1; }

/// Uniform periodic grid z_j = j h / M, j = 0..M-1.
struct Grid {
    int M = 0;
    double h = 0.0;

    Grid() = default;
    Grid(int nodes, double height) : M(nodes), h(height)
    {
        if (nodes < 1)
            throw InvalidInput("Grid: need at least one node");
        if (!(height > 0.0) || !std::isfinite(height))
            throw InvalidInput("Grid: height must be positive");
    }

    /// Default anti-aliased grid for truncation order N: M = 4 (N + 2).
    static Grid for_order(int N, double h) { return Grid(4 * (N + 2), h); }

    double z(int j) const { return j * h / M; }

    std::vector<double> nodes() const
    {
        std::vector<double> z(M);
        for (int j = 0; j < M; ++j)
            z[j] = this->z(j);
        return z;
    }
};

/// Coefficients of theta (cosine modes 0..N+1) and delta rho (sine modes
/// 1..N+1), packed as one vector of 2N+3 unknowns: theta first.
class SpectralState {
  public:
    SpectralState() = default;

    SpectralState(int N, double h) : N_(N), h_(h), c_(2 * N + 3, 0.0)
    {
        if (N < 0 || N % 2 != 0)
            throw InvalidInput("SpectralState: N must be an even non-negative integer");
        if (!(h > 0.0) || !std::isfinite(h))
            throw InvalidInput("SpectralState: h must be positive");
    }

    SpectralState(int N, double h, std::vector<double> packed) : SpectralState(N, h)
    {
        if (packed.size() != c_.size())
            throw InvalidInput("SpectralState: expected " + std::to_string(c_.size()) + " coefficients");
        c_ = std::move(packed);
    }

    int N() const { return N_; }
    double h() const { return h_; }
    int num_theta() const { return N_ + 2; }
    int num_rho() const { return N_ + 1; }
    int size() const { return static_cast<int>(c_.size()); }

    std::span<double> packed() { return c_; }
    std::span<const double> packed() const { return c_; }

    std::span<double> theta() { return std::span<double>(c_).first(num_theta()); }
    std::span<const double> theta() const { return std::span<const double>(c_).first(num_theta()); }
    std::span<double> rho() { return std::span<double>(c_).subspan(num_theta()); }
    std::span<const double> rho() const { return std::span<const double>(c_).subspan(num_theta()); }

    /// Cosine coefficient of mode k = 0..N+1.
    double& theta_c(int k) { return c_.at(k); }
    double theta_c(int k) const { return c_.at(k); }
    /// Sine coefficient of mode k = 1..N+1.
    double& rho_s(int k) { return c_.at(rho_index(k)); }
    double rho_s(int k) const { return c_.at(rho_index(k)); }

    bool all_finite() const
    {
        for (double x : c_)
            if (!std::isfinite(x))
                return false;
        return true;
    }

    bool operator==(const SpectralState&) const = default;

  private:
    std::size_t rho_index(int k) const
    {
        if (k < 1 || k > N_ + 1)
            throw InvalidInput("rho_s: mode out of range");
        return static_cast<std::size_t>(num_theta() + k - 1);
    }

    int N_ = 0;
    double h_ = 0.0;
    std::vector<double> c_;
};

/// Tabulated basis functions on a grid: cos and sin of 2 pi k j / M for
/// k = 0..kmax. Angles are reduced modulo M in integer arithmetic so the
/// tables are exactly periodic.
class BasisTable {
  public:
    BasisTable() = default;

    BasisTable(int kmax, const Grid& grid) : kmax_(kmax), grid_(grid)
    {
        const int M = grid.M;
        cos_.resize(static_cast<std::size_t>(kmax + 1) * M);
        sin_.resize(cos_.size());
        for (int k = 0; k <= kmax; ++k)
            for (int j = 0; j < M; ++j) {
                const long r = (static_cast<long>(k) * j) % M;
                const double a = 2.0 * std::numbers::pi * static_cast<double>(r) / M;
                cos_[idx(k, j)] = std::cos(a);
                sin_[idx(k, j)] = std::sin(a);
            }
    }

    int kmax() const { return kmax_; }
    const Grid& grid() const { return grid_; }

    double cos(int k, int j) const { return cos_[idx(k, j)]; }
    double sin(int k, int j) const { return sin_[idx(k, j)]; }
    const double* cos_row(int k) const { return &cos_[idx(k, 0)]; }
    const double* sin_row(int k) const { return &sin_[idx(k, 0)]; }

    /// Angular frequency 2 pi k / h.
    double omega(int k) const { return 2.0 * std::numbers::pi * k / grid_.h; }

  private:
    std::size_t idx(int k, int j) const { return static_cast<std::size_t>(k) * grid_.M + j; }

    int kmax_ = 0;
    Grid grid_;
    std::vector<double> cos_;
    std::vector<double> sin_;
};

namespace detail {

/// d^r/dz^r of a single mode, expressed as factor * (cos or sin).
/// Returns the factor and whether the result is a cosine.
inline std::pair<double, bool> mode_derivative(Basis b, int r, double w)
{
    const bool start_cos = b == Basis::cosine;
    // cos -> -w sin -> -w^2 cos -> w^3 sin -> w^4 cos
    // sin ->  w cos -> -w^2 sin -> -w^3 cos -> w^4 sin
    switch (r) {
    case 0: return {1.0, start_cos};
    case 1: return {start_cos ? -w : w, !start_cos};
    case 2: return {-w * w, start_cos};
    case 4: return {w * w * w * w, start_cos};
    default: throw InvalidInput("synthesize: derivative order must be 0, 1, 2 or 4");
    }
}

} // namespace detail

/// Sum of the mode expansion (or its r-th derivative) at the nodes of `table`.
inline std::vector<double> synthesize(std::span<const double> coeffs, Basis basis, int order,
                                      const BasisTable& table)
{
    const int M = table.grid().M;
    const int k0 = first_mode(basis);
    if (static_cast<int>(coeffs.size()) + k0 - 1 > table.kmax())
        throw InvalidInput("synthesize: basis table too short for coefficient vector");
    std::vector<double> out(M, 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const int k = k0 + static_cast<int>(i);
        const auto [factor, as_cos] = detail::mode_derivative(basis, order, table.omega(k));
        const double c = coeffs[i] * factor;
        if (c == 0.0)
            continue;
        const double* row = as_cos ? table.cos_row(k) : table.sin_row(k);
        for (int j = 0; j < M; ++j)
            out[j] += c * row[j];
    }
    return out;
}

inline std::vector<double> synthesize(std::span<const double> coeffs, Basis basis, int order, const Grid& grid)
{
    const int kmax = first_mode(basis) + static_cast<int>(coeffs.size());
    return synthesize(coeffs, basis, order, BasisTable(kmax, grid));
}

/// Coefficients of modes first_mode..first_mode+num_coeffs-1 by discrete
/// orthogonality. Exact inverse of synthesize() for band-limited data.
inline std::vector<double> analyze(std::span<const double> values, Basis basis, int num_coeffs, const Grid& grid)
{
    const int M = grid.M;
    if (static_cast<int>(values.size()) != M)
        throw InvalidInput("analyze: value count does not match grid");
    const int k0 = first_mode(basis);
    const int kmax = k0 + num_coeffs - 1;
    if (M < 2 * (kmax + 1))
        throw AliasingError("analyze: grid of " + std::to_string(M) + " nodes cannot resolve mode " +
                            std::to_string(kmax));
    const BasisTable table(kmax, grid);
    std::vector<double> c(num_coeffs, 0.0);
    for (int i = 0; i < num_coeffs; ++i) {
        const int k = k0 + i;
        const double* row = basis == Basis::cosine ? table.cos_row(k) : table.sin_row(k);
        double s = 0.0;
        for (int j = 0; j < M; ++j)
            s += values[j] * row[j];
        c[i] = (k == 0 ? 1.0 : 2.0) * s / M;
    }
    return c;
}

/// Periodic rectangle rule (h / M) sum_j values[j].
inline double quadrature(std::span<const double> values, double h)
{
    double s = 0.0;
    for (double v : values)
        s += v;
    return h * s / static_cast<double>(values.size());
}

/// Full trigonometric interpolant of periodic grid data: values =
/// a_0 + sum_k a_k cos + b_k sin, k = 1..floor(M/2).
struct Trig {
    Grid grid;
    std::vector<double> a;
    std::vector<double> b;

    static Trig fit(std::span<const double> values, const Grid& grid)
    {
        const int M = grid.M;
        if (static_cast<int>(values.size()) != M)
            throw InvalidInput("Trig::fit: value count does not match grid");
        const int K = M / 2;
        const BasisTable table(K, grid);
        Trig t{grid, std::vector<double>(K + 1, 0.0), std::vector<double>(K + 1, 0.0)};
        for (int k = 0; k <= K; ++k) {
            double sc = 0.0, ss = 0.0;
            for (int j = 0; j < M; ++j) {
                sc += values[j] * table.cos(k, j);
                ss += values[j] * table.sin(k, j);
            }
            const bool edge = k == 0 || (M % 2 == 0 && k == K);
            t.a[k] = (edge ? 1.0 : 2.0) * sc / M;
            t.b[k] = edge ? 0.0 : 2.0 * ss / M;
        }
        return t;
    }

    /// First or second derivative at the grid nodes. The first derivative
    /// drops the Nyquist mode, whose derivative vanishes at the nodes.
    std::vector<double> derivative(int r) const
    {
        if (r != 1 && r != 2)
            throw InvalidInput("Trig::derivative: order must be 1 or 2");
        const int M = grid.M;
        const int K = static_cast<int>(a.size()) - 1;
        const BasisTable table(K, grid);
        std::vector<double> out(M, 0.0);
        for (int k = 1; k <= K; ++k) {
            if (r == 1 && M % 2 == 0 && k == K)
                continue;
            const double w = table.omega(k);
            for (int j = 0; j < M; ++j) {
                if (r == 1)
                    out[j] += w * (-a[k] * table.sin(k, j) + b[k] * table.cos(k, j));
                else
                    out[j] -= w * w * (a[k] * table.cos(k, j) + b[k] * table.sin(k, j));
            }
        }
        return out;
    }

    /// Antiderivative at the nodes, zero at z = 0: a_0 z + sum of integrated modes.
    std::vector<double> antiderivative() const
    {
        const int M = grid.M;
        const int K = static_cast<int>(a.size()) - 1;
        const BasisTable table(K, grid);
        std::vector<double> out(M, 0.0);
        for (int j = 0; j < M; ++j)
            out[j] = a[0] * grid.z(j);
        for (int k = 1; k <= K; ++k) {
            const double w = table.omega(k);
            for (int j = 0; j < M; ++j)
                out[j] += a[k] * table.sin(k, j) / w - b[k] * (table.cos(k, j) - 1.0) / w;
        }
        return out;
    }
};

/// r-th derivative of periodic grid data by trigonometric interpolation.
inline std::vector<double> periodic_derivative(std::span<const double> values, const Grid& grid, int order)
{
    if (order < 0 || order > 4 || order == 3)
        throw InvalidInput("periodic_derivative: order must be 0, 1, 2 or 4");
    if (order == 0)
        return {values.begin(), values.end()};
    const Trig t = Trig::fit(values, grid);
    if (order == 4) {
        const auto d2 = t.derivative(2);
        return Trig::fit(d2, grid).derivative(2);
    }
    return t.derivative(order);
}

} // namespace smectic

#endif
