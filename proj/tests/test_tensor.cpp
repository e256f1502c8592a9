#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "smectic/params.hpp"
#include "smectic/tensor.hpp"

using namespace smectic;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

QGradient random_gradient(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1, 1);
    QGradient G;
    for (int k = 0; k < 3; ++k) {
        const auto q = QTensor::from_components(u(rng), u(rng), u(rng), u(rng), u(rng));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                G(i, j, k) = q(i, j);
    }
    return G;
}

Vec3 random_unit(std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Vec3 v{g(rng), g(rng), g(rng)};
    const double n = std::sqrt(dot(v, v));
    return {v[0] / n, v[1] / n, v[2] / n};
}

// Helix n = (cos sz, sin sz, 0) with its exact z-derivative.
DirectorSample helix_sample(double sigma, double z)
{
    DirectorSample x;
    x.n = {std::cos(sigma * z), std::sin(sigma * z), 0.0};
    x.dn = {};
    x.dn[0][2] = -sigma * std::sin(sigma * z);
    x.dn[1][2] = sigma * std::cos(sigma * z);
    return x;
}

} // namespace

TEST(Uniaxial, Examples)
{
    const auto a = uniaxial_q({0, 0, 1}, 1.5);
    EXPECT_DOUBLE_EQ(a(0, 0), -0.5);
    EXPECT_DOUBLE_EQ(a(1, 1), -0.5);
    EXPECT_DOUBLE_EQ(a(2, 2), 1.0);
    EXPECT_DOUBLE_EQ(a(0, 1), 0.0);

    const auto z = uniaxial_q({1, 0, 0}, 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            EXPECT_EQ(z(i, j), 0.0);

    const double r = 1.0 / std::sqrt(2.0);
    const auto b = uniaxial_q({r, r, 0}, 1.0);
    EXPECT_NEAR(b(0, 0), 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(b(1, 1), 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(b(0, 1), 0.5, 1e-15);
    EXPECT_NEAR(b(2, 2), -1.0 / 3.0, 1e-15);
}

TEST(Uniaxial, RejectsNonUnitDirector) { EXPECT_THROW(uniaxial_q({1, 1, 0}, 1.0), InvalidInput); }

TEST(Uniaxial, TraceInvariants)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> us(0, 3);
    for (int i = 0; i < 200; ++i) {
        const double s = us(rng);
        const auto Q = uniaxial_q(random_unit(rng), s);
        EXPECT_LT(std::abs(Q.trace()), 1e-12);
        EXPECT_LE(rel(Q.trace_sq(), 2 * s * s / 3), 1e-12);
        EXPECT_LE(rel(Q.trace_cube(), 2 * s * s * s / 9), 1e-12);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                EXPECT_EQ(Q(a, b), Q(b, a));
    }
}

TEST(QTensorAlgebra, StaysTraceless)
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 100; ++i) {
        const auto a = QTensor::from_components(u(rng), u(rng), u(rng), u(rng), u(rng));
        const auto b = QTensor::from_components(u(rng), u(rng), u(rng), u(rng), u(rng));
        EXPECT_LT(std::abs((a + b * 3.7 - a * 0.5).trace()), 1e-12 * 1e4);
    }
}

TEST(BulkNematic, Examples)
{
    EXPECT_EQ(f_bn(QTensor{}, -1, 1, 1, 0), 0.0);
    const auto Q = uniaxial_q({0, 0, 1}, 1.5);
    EXPECT_NEAR(f_bn(Q, -1, 1, 1, 0), -0.4375, 1e-14);
    EXPECT_GT(f_bn(uniaxial_q({0, 0, 1}, 1.5 + 1e-4), -1, 1, 1, 0), -0.4375);
    EXPECT_GT(f_bn(uniaxial_q({0, 0, 1}, 1.5 - 1e-4), -1, 1, 1, 0), -0.4375);
}

TEST(BulkNematic, SPlusMinimizesUniaxialProfile)
{
    std::mt19937_64 rng(21);
    const double A = -1, B = 1, C = 1;
    const double sp = compute_s_plus(A, B, C);
    for (int i = 0; i < 50; ++i) {
        const Vec3 n = random_unit(rng);
        const double at = f_bn(uniaxial_q(n, sp), A, B, C);
        for (double s = -1.0; s <= 3.0; s += 0.01)
            EXPECT_LE(at, f_bn(uniaxial_q(n, s), A, B, C) + 1e-14);
    }
}

TEST(BulkSmectic, Examples)
{
    EXPECT_EQ(f_bs(0, -1, 0, 2), 0.0);
    EXPECT_DOUBLE_EQ(f_bs(1, -1, 0, 2), 0.0);
    EXPECT_DOUBLE_EQ(f_bs(0.5, -0.5, 0, 10), 0.09375);
}

TEST(Elastic, ConstantTensorOnlyChiralTerm)
{
    const auto Q = uniaxial_q({1, 0, 0}, 1.5);
    EXPECT_NEAR(f_el(Q, QGradient{}, 1, 0, 0, 2), 12.0, 1e-12);
    EXPECT_EQ(f_el(QTensor{}, QGradient{}, 1, 1, 1, 2), 0.0);
}

TEST(Elastic, HelixValue)
{
    for (double z : {0.0, 0.3, 1.7, 4.0}) {
        const auto x = helix_sample(2.0, z);
        EXPECT_NEAR(f_el(uniaxial_q(x.n, 1.5), uniaxial_gradient(x, 1.5), 1, 0, 0, 2), 3.0, 1e-12);
    }
}

TEST(Elastic, RejectsInconsistentGradient)
{
    QGradient G;
    G(0, 1, 2) = 1.0; // not symmetric
    EXPECT_THROW(f_el(QTensor{}, G, 1, 0, 0, 0), InvalidInput);
    QGradient T;
    T(0, 0, 2) = 1.0; // not traceless
    EXPECT_THROW(f_el(QTensor{}, T, 1, 0, 0, 0), InvalidInput);
}

TEST(Elastic, CurlAndDivergenceIdentities)
{
    std::mt19937_64 rng(13);
    for (int t = 0; t < 200; ++t) {
        const QGradient G = random_gradient(rng);
        // Explicit sums as the oracle.
        double curl2 = 0, grad2 = 0, cross = 0, div2 = 0;
        for (int i = 0; i < 3; ++i)
            for (int b = 0; b < 3; ++b) {
                double c = 0;
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k)
                        c += levi_civita(i, j, k) * G(k, b, j);
                curl2 += c * c;
            }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    grad2 += G(i, j, k) * G(i, j, k);
                    cross += G(i, j, k) * G(i, k, j);
                }
        for (int i = 0; i < 3; ++i) {
            double d = 0;
            for (int j = 0; j < 3; ++j)
                d += G(i, j, j);
            div2 += d * d;
        }
        EXPECT_LE(rel(curl2, grad2 - cross), 1e-12);
        const Vec3 dv = divergence(G);
        EXPECT_LE(rel(dot(dv, dv), div2), 1e-12);
        EXPECT_LE(rel(grad_sq(G), grad2), 1e-12);
        EXPECT_LE(rel(cross_contraction(G), cross), 1e-12);
    }
}

TEST(Elastic, ExpandedFormAgrees)
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1, 1), pos(0.1, 2);
    for (int t = 0; t < 200; ++t) {
        const auto Q = QTensor::from_components(u(rng), u(rng), u(rng), u(rng), u(rng));
        const QGradient G = random_gradient(rng);
        const double e1 = pos(rng), e2 = u(rng), e24 = pos(rng), s = 3 * u(rng);
        EXPECT_LE(rel(f_el(Q, G, e1, e2, e24, s), f_el_expanded(Q, G, e1, e2, e24, s)), 1e-12);
    }
}

TEST(Layer, Examples)
{
    const double q = 4.0;
    for (double z : {0.1, 0.7, 2.2}) {
        const double r = std::sin(q * z);
        EXPECT_NEAR(f_layer(r, -q * q * r, 0.001, q), 0.0, 1e-18);
    }
    EXPECT_DOUBLE_EQ(f_layer(1, 0, 1, 2), 16.0);
    EXPECT_DOUBLE_EQ(f_layer(0, 1, 0.001, 4), 0.001);
}

TEST(Angle, Examples)
{
    const double q = 4.0;
    const auto Q = uniaxial_q({0, 0, 1}, 1.0);
    const double z = 0.37;
    const double r = std::sin(q * z);
    Mat3 H{};
    H[2][2] = -q * q * r;
    EXPECT_NEAR(f_angle(Q, H, r, 0.001, q, 0.0), 0.0, 1e-15);

    const double zp = std::numbers::pi / (2 * q); // sin(qz) = 1
    Mat3 Hp{};
    Hp[2][2] = -q * q;
    const double expect = 0.001 * std::pow(q, 4) * std::pow(std::sin(std::numbers::pi / 9), 4);
    EXPECT_NEAR(f_angle(Q, Hp, std::sin(q * zp), 0.001, q, std::numbers::pi / 9), expect, 1e-12);
    EXPECT_NEAR(expect, 0.0035031, 1e-6);

    EXPECT_EQ(f_angle(Q, Mat3{}, 0.0, 0.001, q, 0.3), 0.0);
}

TEST(Reduction, HelixAndUniformGiveOffset)
{
    const TensorElasticConstants c{1.0, 0.0, 0.0, 2.0};
    std::vector<DirectorSample> helix, uniform;
    for (int j = 0; j < 32; ++j) {
        const double z = 0.2 * j;
        helix.push_back(helix_sample(2.0, z));
        DirectorSample u;
        u.n = {1, 0, 0};
        uniform.push_back(u);
    }
    for (double r : reduction_residual(helix, 1.5, c))
        EXPECT_NEAR(r, 3.0, 1e-12);
    for (double r : reduction_residual(uniform, 1.5, c))
        EXPECT_NEAR(r, 3.0, 1e-12);
    EXPECT_DOUBLE_EQ(reduction_offset(1.5, c), 3.0);
}

TEST(Reduction, GeneralConstantsOnRandomFieldsWithFiniteDifferences)
{
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 10; ++trial) {
        double a[3][2];
        for (auto& r : a)
            for (double& v : r)
                v = u(rng);
        auto field = [a](double z) {
            Vec3 v{1.2 + 0.5 * a[0][0] * std::cos(z + a[0][1]), 0.4 + 0.5 * a[1][0] * std::sin(2 * z + a[1][1]),
                   0.3 + 0.5 * a[2][0] * std::cos(3 * z + a[2][1])};
            const double n = std::sqrt(dot(v, v));
            return Vec3{v[0] / n, v[1] / n, v[2] / n};
        };
        std::vector<double> z(40);
        for (int j = 0; j < 40; ++j)
            z[j] = 0.157 * j;
        const auto samples = sample_director(field, z);
        for (double sigma : {0.0, 1.3}) {
            const TensorElasticConstants c{1.0, 0.6, 0.8, sigma};
            const auto r = reduction_residual(samples, 1.2, c);
            const double off = reduction_offset(1.2, c);
            for (double v : r)
                EXPECT_NEAR(v, off, 1e-7);
            EXPECT_TRUE(is_spatially_constant(r, 1e-6));
        }
    }
}

TEST(Reduction, RejectsNonUnitSamples)
{
    DirectorSample x;
    x.n = {1, 1, 0};
    std::vector<DirectorSample> s{x};
    EXPECT_THROW(reduction_residual(s, 1.5, TensorElasticConstants{}), InvalidInput);
}

TEST(OseenFrankDensity, HelixIsTwistOnly)
{
    // With k2 (n . curl n + sigma)^2 and n . curl n = -sigma the helix costs nothing.
    OFConstants k{1, 2, 1, -0.5, 0.1};
    for (double z : {0.0, 0.5, 1.3})
        EXPECT_NEAR(oseen_frank_density(helix_sample(2.0, z), k, 2.0), 0.0, 1e-12);
}
