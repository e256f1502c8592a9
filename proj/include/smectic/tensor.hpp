#ifndef SMECTIC_TENSOR_HPP
#define SMECTIC_TENSOR_HPP

// Pointwise Q-tensor algebra and the densities of the full tensor energy.
// Fields are evaluated at a single point; derivatives are supplied by the
// caller. Index convention: 0,1,2 <-> x,y,z; eps(0,1,2) = +1.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "smectic/errors.hpp"
#include "smectic/params.hpp"

namespace smectic {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// Levi-Civita symbol.
constexpr int levi_civita(int i, int j, int k) { return (i - j) * (j - k) * (k - i) / 2; }

/// Symmetric traceless 3x3 tensor. Stores the five independent entries;
/// Q33 = -(Q11 + Q22), so symmetry and tracelessness hold by construction.
class QTensor {
  public:
    QTensor() = default;

    /// From the upper triangle without zz, which is implied.
    static QTensor from_components(double xx, double xy, double xz, double yy, double yz)
    {
        QTensor q;
        q.c_ = {xx, xy, xz, yy, yz};
        return q;
    }

    /// Projects an arbitrary 3x3 matrix onto its symmetric traceless part.
    static QTensor from_matrix(const Mat3& m)
    {
        const double tr3 = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
        return from_components(m[0][0] - tr3, 0.5 * (m[0][1] + m[1][0]), 0.5 * (m[0][2] + m[2][0]),
                               m[1][1] - tr3, 0.5 * (m[1][2] + m[2][1]));
    }

    double operator()(int i, int j) const
    {
        if (i > j)
            std::swap(i, j);
        switch (i * 3 + j) {
        case 0: return c_[0];
        case 1: return c_[1];
        case 2: return c_[2];
        case 4: return c_[3];
        case 5: return c_[4];
        default: return -(c_[0] + c_[3]); // (2,2)
        }
    }

    Mat3 matrix() const
    {
        Mat3 m{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                m[i][j] = (*this)(i, j);
        return m;
    }

    double trace() const { return (*this)(0, 0) + (*this)(1, 1) + (*this)(2, 2); }

    /// tr Q^2 = |Q|^2 (Frobenius) for symmetric Q.
    double trace_sq() const
    {
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                s += (*this)(i, j) * (*this)(i, j);
        return s;
    }

    double trace_cube() const
    {
        const Mat3 m = matrix();
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    s += m[i][j] * m[j][k] * m[k][i];
        return s;
    }

    QTensor operator+(const QTensor& o) const
    {
        QTensor r;
        for (int i = 0; i < 5; ++i)
            r.c_[i] = c_[i] + o.c_[i];
        return r;
    }

    QTensor operator-(const QTensor& o) const
    {
        QTensor r;
        for (int i = 0; i < 5; ++i)
            r.c_[i] = c_[i] - o.c_[i];
        return r;
    }

    QTensor operator*(double s) const
    {
        QTensor r;
        for (int i = 0; i < 5; ++i)
            r.c_[i] = c_[i] * s;
        return r;
    }

  private:
    std::array<double, 5> c_{};
};

/// G(i, j, k) = dQ_ij / dx_k.
class QGradient {
  public:
    QGradient() = default;

    double& operator()(int i, int j, int k) { return g_[(i * 3 + j) * 3 + k]; }
    double operator()(int i, int j, int k) const { return g_[(i * 3 + j) * 3 + k]; }

    /// Gradient of a field varying along z only: dQ/dz = dq.
    static QGradient along_z(const Mat3& dq)
    {
        QGradient g;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                g(i, j, 2) = dq[i][j];
        return g;
    }

    /// Throws InvalidInput unless symmetric in (i, j) and traceless in each
    /// direction, within `tol` relative to the largest entry.
    void check(double tol = 1e-12) const
    {
        double scale = 1.0;
        for (double x : g_) {
            if (!std::isfinite(x))
                throw InvalidInput("QGradient: non-finite entry");
            scale = std::max(scale, std::abs(x));
        }
        for (int k = 0; k < 3; ++k) {
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j)
                    if (std::abs((*this)(i, j, k) - (*this)(j, i, k)) > tol * scale)
                        throw InvalidInput("QGradient: not symmetric in (i, j)");
            const double tr = (*this)(0, 0, k) + (*this)(1, 1, k) + (*this)(2, 2, k);
            if (std::abs(tr) > tol * scale)
                throw InvalidInput("QGradient: not traceless");
        }
    }

  private:
    std::array<double, 27> g_{};
};

/// Director and its Jacobian dn(i, j) = dn_i / dx_j at one point.
struct DirectorSample {
    Vec3 n{1.0, 0.0, 0.0};
    Mat3 dn{};
};

inline void require_unit(const Vec3& n, double tol = 1e-10)
{
    for (double x : n)
        if (!std::isfinite(x))
            throw InvalidInput("director has a non-finite component");
    if (std::abs(std::sqrt(dot(n, n)) - 1.0) > tol)
        throw InvalidInput("director is not a unit vector");
}

/// Q = s (n (x) n - I/3).
inline QTensor uniaxial_q(const Vec3& n, double s)
{
    require_unit(n);
    Mat3 m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m[i][j] = s * n[i] * n[j];
    return QTensor::from_matrix(m);
}

/// Gradient of the uniaxial lift of a director sample at fixed s.
inline QGradient uniaxial_gradient(const DirectorSample& x, double s)
{
    QGradient g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                g(i, j, k) = s * (x.dn[i][k] * x.n[j] + x.n[i] * x.dn[j][k]);
    return g;
}

// ---------------------------------------------------------------------------
// Energy densities
// ---------------------------------------------------------------------------

/// Nematic bulk density (A/2) tr Q^2 - (B/3) tr Q^3 + (C/4) (tr Q^2)^2 - f_B0.
inline double f_bn(const QTensor& Q, double A, double B, double C, double f_B0 = 0.0)
{
    const double t2 = Q.trace_sq();
    return A / 2.0 * t2 - B / 3.0 * Q.trace_cube() + C / 4.0 * t2 * t2 - f_B0;
}

/// Uniaxial bulk profile g(s) = f_bn(s (n n - I/3)) + f_B0 = A s^2/3 - 2B s^3/27 + C s^4/9.
inline double uniaxial_bulk_profile(double s, double A, double B, double C)
{
    return A * s * s / 3.0 - 2.0 * B * s * s * s / 27.0 + C * s * s * s * s / 9.0;
}

/// Smectic bulk density (d/2) rho^2 - (e/3) rho^3 + (f/4) rho^4.
inline double f_bs(double rho, double d, double e, double f)
{
    const double r2 = rho * rho;
    return d / 2.0 * r2 - e / 3.0 * r2 * rho + f / 4.0 * r2 * r2;
}

/// (curl Q)_{i b} = eps_{ijk} dQ_{kb}/dx_j.
inline Mat3 curl(const QGradient& G)
{
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int b = 0; b < 3; ++b) {
            double s = 0.0;
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    if (int e = levi_civita(i, j, k))
                        s += e * G(k, b, j);
            c[i][b] = s;
        }
    return c;
}

/// (div Q)_i = dQ_{ia}/dx_a.
inline Vec3 divergence(const QGradient& G)
{
    return {G(0, 0, 0) + G(0, 1, 1) + G(0, 2, 2), G(1, 0, 0) + G(1, 1, 1) + G(1, 2, 2),
            G(2, 0, 0) + G(2, 1, 1) + G(2, 2, 2)};
}

/// |grad Q|^2 = Q_{ij,k} Q_{ij,k}.
inline double grad_sq(const QGradient& G)
{
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                s += G(i, j, k) * G(i, j, k);
    return s;
}

/// Q_{ij,k} Q_{ik,j}.
inline double cross_contraction(const QGradient& G)
{
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                s += G(i, j, k) * G(i, k, j);
    return s;
}

/// Chiral tensor elastic density
///   (eta1/2)|curl Q + 2 sigma Q|^2 + (eta2/2)|div Q|^2
///     + (eta24/2)(Q_{ij,k} Q_{ik,j} - Q_{ij,j} Q_{ik,k}).
inline double f_el(const QTensor& Q, const QGradient& G, double eta1, double eta2, double eta24, double sigma)
{
    G.check();
    const Mat3 c = curl(G);
    double twist = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int b = 0; b < 3; ++b) {
            const double m = c[i][b] + 2.0 * sigma * Q(i, b);
            twist += m * m;
        }
    const Vec3 dv = divergence(G);
    const double div_sq = dot(dv, dv);
    return eta1 / 2.0 * twist + eta2 / 2.0 * div_sq + eta24 / 2.0 * (cross_contraction(G) - div_sq);
}

/// Same density written as a quadratic form in grad Q plus the chiral terms:
///   (eta1/2)|grad Q|^2 + ((eta2-eta24)/2) Q_{ij,j}Q_{ik,k} + ((eta24-eta1)/2) Q_{ij,k}Q_{ik,j}
///     + 2 eta1 sigma eps_{ikl} Q_{lj,k} Q_{ij} + 2 eta1 sigma^2 |Q|^2.
inline double f_el_expanded(const QTensor& Q, const QGradient& G, double eta1, double eta2, double eta24,
                            double sigma)
{
    const Vec3 dv = divergence(G);
    double chiral = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    if (int e = levi_civita(i, k, l))
                        chiral += e * G(l, j, k) * Q(i, j);
    return eta1 / 2.0 * grad_sq(G) + (eta2 - eta24) / 2.0 * dot(dv, dv) +
           (eta24 - eta1) / 2.0 * cross_contraction(G) + 2.0 * eta1 * sigma * chiral +
           2.0 * eta1 * sigma * sigma * Q.trace_sq();
}

/// Layer density lambda1 (lap rho + q^2 rho)^2.
inline double f_layer(double rho, double lap_rho, double lambda1, double q)
{
    const double r = lap_rho + q * q * rho;
    return lambda1 * r * r;
}

/// Layer-angle density lambda2 (tr(D^2 rho (Q + I/3)) + q^2 rho cos^2 theta0)^2.
inline double f_angle(const QTensor& Q, const Mat3& hess_rho, double rho, double lambda2, double q,
                      double theta0)
{
    double tr = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            tr += hess_rho[i][j] * (Q(j, i) + (i == j ? 1.0 / 3.0 : 0.0));
    const double c0 = std::cos(theta0);
    const double r = tr + q * q * rho * c0 * c0;
    return lambda2 * r * r;
}

// ---------------------------------------------------------------------------
// Uniaxial reduction check
// ---------------------------------------------------------------------------

/// Oseen-Frank density k1 (div n)^2 + k2 (n.curl n + sigma)^2 + k3 |n x curl n|^2
///   + (k2 + k4)(tr (grad n)^2 - (div n)^2).
inline double oseen_frank_density(const DirectorSample& x, const OFConstants& k, double sigma)
{
    const Mat3& J = x.dn; // J[i][j] = dn_i/dx_j
    const double div = J[0][0] + J[1][1] + J[2][2];
    const Vec3 curl_n{J[2][1] - J[1][2], J[0][2] - J[2][0], J[1][0] - J[0][1]};
    const double twist = dot(x.n, curl_n) + sigma;
    const Vec3 bend = cross(x.n, curl_n);
    double tr_sq = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            tr_sq += J[i][j] * J[j][i];
    return k.k1 * div * div + k.k2 * twist * twist + k.k3 * dot(bend, bend) + (k.k2 + k.k4) * (tr_sq - div * div);
}

struct TensorElasticConstants {
    double eta1 = 1.0;
    double eta2 = 0.0;
    double eta24 = 0.0;
    double sigma = 0.0;
};

/// Samples a director field n(z) and its z-derivative by central
/// differences with step 1e-5 max(1, |z|).
inline std::vector<DirectorSample> sample_director(const std::function<Vec3(double)>& field,
                                                   std::span<const double> z)
{
    std::vector<DirectorSample> out;
    out.reserve(z.size());
    for (double zj : z) {
        const double step = 1e-5 * std::max(1.0, std::abs(zj));
        const Vec3 np = field(zj + step);
        const Vec3 nm = field(zj - step);
        DirectorSample s;
        s.n = field(zj);
        for (int i = 0; i < 3; ++i)
            s.dn[i][2] = (np[i] - nm[i]) / (2.0 * step);
        out.push_back(s);
    }
    return out;
}

/// Pointwise difference between the tensor elastic density of the uniaxial
/// lift Q = s+(n n - I/3) and the Oseen-Frank density with the induced
/// constants. The constants k_i are computed without the admissibility
/// check so achiral and degenerate sets can be probed.
inline std::vector<double> reduction_residual(std::span<const DirectorSample> samples, double s_plus,
                                              const TensorElasticConstants& c)
{
    const double s2 = s_plus * s_plus;
    OFConstants k;
    k.k1 = k.k3 = s2 * (c.eta1 + c.eta2) / 2.0;
    k.k2 = s2 * c.eta1;
    k.k4 = s2 * (c.eta24 - c.eta1) / 2.0;
    std::vector<double> r;
    r.reserve(samples.size());
    for (const auto& x : samples) {
        require_unit(x.n);
        const QTensor Q = uniaxial_q(x.n, s_plus);
        const QGradient G = uniaxial_gradient(x, s_plus);
        // FD gradients are symmetric by construction but only approximately
        // traceless; the density itself does not need the check.
        const Mat3 cq = curl(G);
        double twist = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int b = 0; b < 3; ++b) {
                const double m = cq[i][b] + 2.0 * c.sigma * Q(i, b);
                twist += m * m;
            }
        const Vec3 dv = divergence(G);
        const double tensor = c.eta1 / 2.0 * twist + c.eta2 / 2.0 * dot(dv, dv) +
                              c.eta24 / 2.0 * (cross_contraction(G) - dot(dv, dv));
        r.push_back(tensor - oseen_frank_density(x, k, c.sigma));
    }
    return r;
}

/// The constant offset eta1 s+^2 sigma^2 / 3 separating the two densities.
inline double reduction_offset(double s_plus, const TensorElasticConstants& c)
{
    return c.eta1 * s_plus * s_plus * c.sigma * c.sigma / 3.0;
}

/// True when max - min of `residual` is below `tol`.
inline bool is_spatially_constant(std::span<const double> residual, double tol)
{
    if (residual.empty())
        return true;
    const auto [lo, hi] = std::minmax_element(residual.begin(), residual.end());
    return *hi - *lo < tol;
}

} // namespace smectic

#endif
