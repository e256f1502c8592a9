#ifndef SMECTIC_PARAMS_HPP
#define SMECTIC_PARAMS_HPP

// Model coefficients for the chiral smectic free energy: the full tensor
// (Landau-de Gennes) parameter set, the reduced 1D parameter set, the
// Oseen-Frank constants induced by the uniaxial reduction, and the
// conversions between them.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "smectic/errors.hpp"

namespace smectic {

namespace detail {

inline void require_finite(double x, const char* name)
{
    if (!std::isfinite(x))
        throw InvalidInput(std::string("non-finite value for ") + name);
}

inline std::string fmt17(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Tensor model parameters
// ---------------------------------------------------------------------------

/// Coefficients of the full tensor energy. All values nondimensional unless
/// the struct is the input of nondimensionalize().
struct LdGParams {
    double A = -1.0;
    double B = 1.0;
    double C = 1.0;
    double f_B0 = 0.0;
    double eta1 = 1.0;
    double eta2 = 1.0;
    double eta24 = 1.0;
    double sigma = 4.0;
    double d = 0.0;
    double e = 0.0;
    double f = 10.0;
    double lambda1 = 0.001;
    double lambda2 = 0.001;
    double q = 4.0;
    double theta0 = std::numbers::pi / 9.0;

    bool operator==(const LdGParams&) const = default;
};

/// Bulk constants of MBBA in SI units (N m^-2 and N). These are literature
/// values for a representative material; no computation in this library is
/// calibrated against them.
struct MbbaConstants {
    static constexpr double B = 0.64e4;
    static constexpr double C = 0.35e4;
    static constexpr double K = 4e-11;
};

/// Verdict of validate_elastic_constants(). `violated` names the first
/// inequality that fails, empty when valid.
struct ElasticVerdict {
    bool valid = false;
    std::string violated;

    explicit operator bool() const { return valid; }
};

/// Checks eta1 > 0, 0 < eta24 < 3 eta1 and 5 eta1 + 10 eta2 - 9 eta24 > 0,
/// the conditions under which the tensor elastic energy is a positive
/// definite quadratic form in grad Q.
inline ElasticVerdict validate_elastic_constants(double eta1, double eta2, double eta24)
{
    detail::require_finite(eta1, "eta1");
    detail::require_finite(eta2, "eta2");
    detail::require_finite(eta24, "eta24");
    if (!(eta1 > 0.0))
        return {false, "eta1 > 0 violated"};
    if (!(eta24 > 0.0))
        return {false, "eta24 > 0 violated"};
    if (!(eta24 < 3.0 * eta1))
        return {false, "eta24 < 3*eta1 violated"};
    if (!(5.0 * eta1 + 10.0 * eta2 - 9.0 * eta24 > 0.0))
        return {false, "5*eta1 + 10*eta2 - 9*eta24 > 0 violated"};
    return {true, {}};
}

/// Equilibrium uniaxial order parameter s+ = (B + sqrt(B^2 - 24 A C)) / (4 C).
inline double compute_s_plus(double A, double B, double C)
{
    detail::require_finite(A, "A");
    detail::require_finite(B, "B");
    detail::require_finite(C, "C");
    if (!(C > 0.0))
        throw InvalidInput("compute_s_plus: C must be positive");
    const double disc = B * B - 24.0 * A * C;
    if (disc < 0.0)
        throw DomainError("compute_s_plus: B^2 - 24AC < 0, no real uniaxial minimizer");
    return (B + std::sqrt(disc)) / (4.0 * C);
}

/// Throws ConstraintError naming the violated inequality when `p` breaks
/// B, C, f, lambda1, lambda2, q > 0, 0 < theta0 < pi/2 or the elastic
/// validity conditions.
inline void validate(const LdGParams& p)
{
    const double vals[] = {p.A, p.B, p.C, p.f_B0, p.eta1, p.eta2, p.eta24, p.sigma,
                           p.d, p.e, p.f, p.lambda1, p.lambda2, p.q, p.theta0};
    for (double v : vals)
        detail::require_finite(v, "LdGParams field");
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0))
            throw ConstraintError(std::string(what) + " > 0 violated");
    };
    positive(p.B, "B");
    positive(p.C, "C");
    positive(p.f, "f");
    positive(p.lambda1, "lambda1");
    positive(p.lambda2, "lambda2");
    positive(p.q, "q");
    if (!(p.theta0 > 0.0 && p.theta0 < std::numbers::pi / 2.0))
        throw ConstraintError("0 < theta0 < pi/2 violated");
    if (auto v = validate_elastic_constants(p.eta1, p.eta2, p.eta24); !v)
        throw ConstraintError(v.violated);
}

// ---------------------------------------------------------------------------
// Oseen-Frank constants
// ---------------------------------------------------------------------------

struct OFConstants {
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;
    double k4 = 0.0;
    double C6_floor = 0.0;
};

/// Checks k1 = k3 >= k2 > k2 + k4 >= C6_floor > 0 > k4 and returns every
/// failed link, joined by "; ". Empty when the chain holds. The boundary
/// k4 = 0 (eta24 = eta1) is admitted.
inline std::string check_oseen_frank_chain(const OFConstants& c)
{
    std::string failed;
    auto fail = [&failed](const char* what) {
        if (!failed.empty())
            failed += "; ";
        failed += what;
    };
    if (c.k1 != c.k3)
        fail("k1 = k3 violated");
    if (!(c.k3 >= c.k2))
        fail("k3 >= k2 violated");
    if (!(c.k2 >= c.k2 + c.k4))
        fail("k2 > k2 + k4 violated");
    if (!(c.k2 + c.k4 >= c.C6_floor))
        fail("k2 + k4 >= C6 violated");
    if (!(c.C6_floor > 0.0))
        fail("C6 > 0 violated");
    if (!(0.0 >= c.k4))
        fail("0 > k4 violated");
    return failed;
}

/// Oseen-Frank constants induced by substituting Q = s+(n n - I/3) into the
/// tensor elastic energy:
///   k1 = k3 = s+^2 (eta1 + eta2) / 2,  k2 = s+^2 eta1,  k4 = s+^2 (eta24 - eta1) / 2.
/// C6_floor is set to k2 + k4, the tightest admissible floor.
inline OFConstants map_to_oseen_frank(double eta1, double eta2, double eta24, double s_plus)
{
    detail::require_finite(eta1, "eta1");
    detail::require_finite(eta2, "eta2");
    detail::require_finite(eta24, "eta24");
    detail::require_finite(s_plus, "s_plus");
    if (!(s_plus > 0.0))
        throw InvalidInput("map_to_oseen_frank: s_plus must be positive");
    const double s2 = s_plus * s_plus;
    OFConstants c;
    c.k1 = s2 * (eta1 + eta2) / 2.0;
    c.k3 = c.k1;
    c.k2 = s2 * eta1;
    c.k4 = s2 * (eta24 - eta1) / 2.0;
    c.C6_floor = c.k2 + c.k4;
    std::string failed = check_oseen_frank_chain(c);
    if (auto v = validate_elastic_constants(eta1, eta2, eta24); !v)
        failed += (failed.empty() ? "" : "; ") + v.violated;
    if (!failed.empty())
        throw ConstraintError("map_to_oseen_frank: " + failed + " (k1=" + detail::fmt17(c.k1) +
                              ", k2=" + detail::fmt17(c.k2) + ", k4=" + detail::fmt17(c.k4) + ")");
    return c;
}

// ---------------------------------------------------------------------------
// Nondimensionalization
// ---------------------------------------------------------------------------

/// Rescales by length R and energy-per-length eta0: wavenumbers times R,
/// lambda_i / (eta0 R^2), eta_i / eta0, bulk coefficients times R^2 / eta0.
/// theta0 is dimensionless and passes through.
inline LdGParams nondimensionalize(const LdGParams& raw, double R, double eta0)
{
    detail::require_finite(R, "R");
    detail::require_finite(eta0, "eta0");
    if (!(R > 0.0) || !(eta0 > 0.0))
        throw InvalidInput("nondimensionalize: scales must be positive");
    const double bulk = R * R / eta0;
    LdGParams p = raw;
    p.q = raw.q * R;
    p.sigma = raw.sigma * R;
    p.lambda1 = raw.lambda1 / (eta0 * R * R);
    p.lambda2 = raw.lambda2 / (eta0 * R * R);
    p.eta1 = raw.eta1 / eta0;
    p.eta2 = raw.eta2 / eta0;
    p.eta24 = raw.eta24 / eta0;
    p.A = raw.A * bulk;
    p.B = raw.B * bulk;
    p.C = raw.C * bulk;
    p.f_B0 = raw.f_B0 * bulk;
    p.d = raw.d * bulk;
    p.e = raw.e * bulk;
    p.f = raw.f * bulk;
    return p;
}

/// Inverse of nondimensionalize().
inline LdGParams dimensionalize(const LdGParams& scaled, double R, double eta0)
{
    detail::require_finite(R, "R");
    detail::require_finite(eta0, "eta0");
    if (!(R > 0.0) || !(eta0 > 0.0))
        throw InvalidInput("dimensionalize: scales must be positive");
    const double bulk = eta0 / (R * R);
    LdGParams p = scaled;
    p.q = scaled.q / R;
    p.sigma = scaled.sigma / R;
    p.lambda1 = scaled.lambda1 * (eta0 * R * R);
    p.lambda2 = scaled.lambda2 * (eta0 * R * R);
    p.eta1 = scaled.eta1 * eta0;
    p.eta2 = scaled.eta2 * eta0;
    p.eta24 = scaled.eta24 * eta0;
    p.A = scaled.A * bulk;
    p.B = scaled.B * bulk;
    p.C = scaled.C * bulk;
    p.f_B0 = scaled.f_B0 * bulk;
    p.d = scaled.d * bulk;
    p.e = scaled.e * bulk;
    p.f = scaled.f * bulk;
    return p;
}

// ---------------------------------------------------------------------------
// Reduced 1D parameters
// ---------------------------------------------------------------------------

/// Coefficients of the reduced one-dimensional energy in (theta, delta rho).
/// Immutable once constructed; construction validates positivity, the tilt
/// range and commensurability q h / (2 pi) = n0 in Z+.
class ModelParams1D {
  public:
    /// Raw field values. Defaults reproduce the phase-transition benchmark:
    /// d = T + 10, f = 10, e = 0, h = 2 pi, q = sigma = 4,
    /// lambda1 = lambda2 = 0.001, theta0 = pi/9, k1 = k2 = k3 = 0.025.
    struct Values {
        double k1 = 0.025;
        double k2 = 0.025;
        double k3 = 0.025;
        double sigma = 4.0;
        double q = 4.0;
        double h = 2.0 * std::numbers::pi;
        double d = 0.0;
        double e = 0.0;
        double f = 10.0;
        double lambda1 = 0.001;
        double lambda2 = 0.001;
        double theta0 = std::numbers::pi / 9.0;
        double alpha2 = 1.0;
        double T2star = -10.0;

        bool operator==(const Values&) const = default;
    };

    static constexpr double commensurability_tol = 1e-9;

    ModelParams1D() : ModelParams1D(Values{}) {}

    explicit ModelParams1D(const Values& v) : v_(v) { check(); }

    const Values& values() const { return v_; }

    double k1() const { return v_.k1; }
    double k2() const { return v_.k2; }
    double k3() const { return v_.k3; }
    double sigma() const { return v_.sigma; }
    double q() const { return v_.q; }
    double h() const { return v_.h; }
    double d() const { return v_.d; }
    double e() const { return v_.e; }
    double f() const { return v_.f; }
    double lambda1() const { return v_.lambda1; }
    double lambda2() const { return v_.lambda2; }
    double theta0() const { return v_.theta0; }
    double alpha2() const { return v_.alpha2; }
    double T2star() const { return v_.T2star; }

    /// Number of smectic layers across the domain, q h / (2 pi).
    int n0() const { return static_cast<int>(std::lround(v_.q * v_.h / (2.0 * std::numbers::pi))); }

    ModelParams1D with_d(double d) const
    {
        Values v = v_;
        v.d = d;
        return ModelParams1D(v);
    }

    /// Copy with d = alpha2 (T - T2star).
    ModelParams1D at_temperature(double T) const { return with_d(v_.alpha2 * (T - v_.T2star)); }

    bool operator==(const ModelParams1D&) const = default;

  private:
    void check() const
    {
        const double vals[] = {v_.k1, v_.k2,      v_.k3,      v_.sigma,  v_.q,      v_.h,      v_.d,
                               v_.e,  v_.f,       v_.lambda1, v_.lambda2, v_.theta0, v_.alpha2, v_.T2star};
        for (double x : vals)
            detail::require_finite(x, "ModelParams1D field");
        auto positive = [](double x, const char* what) {
            if (!(x > 0.0))
                throw ConstraintError(std::string(what) + " > 0 violated");
        };
        positive(v_.k1, "k1");
        positive(v_.k2, "k2");
        positive(v_.k3, "k3");
        positive(v_.f, "f");
        positive(v_.h, "h");
        positive(v_.q, "q");
        // Zero smectic elasticity is admitted as a degenerate limit.
        if (v_.lambda1 < 0.0)
            throw ConstraintError("lambda1 >= 0 violated");
        if (v_.lambda2 < 0.0)
            throw ConstraintError("lambda2 >= 0 violated");
        if (!(v_.theta0 > 0.0 && v_.theta0 < std::numbers::pi / 2.0))
            throw ConstraintError("0 < theta0 < pi/2 violated");
        const double layers = v_.q * v_.h / (2.0 * std::numbers::pi);
        const double nearest = std::round(layers);
        if (nearest < 1.0 || std::abs(layers - nearest) > commensurability_tol)
            throw ConstraintError("q*h/(2*pi) must be a positive integer, got " + detail::fmt17(layers));
    }

    Values v_;
};

/// d = alpha2 (T - T2star).
inline double d_from_temperature(double T, const ModelParams1D& params)
{
    return params.alpha2() * (T - params.T2star());
}

} // namespace smectic

#endif
