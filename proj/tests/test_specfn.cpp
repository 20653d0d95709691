#include <gtest/gtest.h>

#include <cmath>

#include "permon/specfn.hpp"
#include "permon/verify/oracles.hpp"

using namespace permon;

TEST(Bessel, K0AtOneMatchesQuadrature) {
    const double q = oracle::bessel_k_quad(0, 1.0);
    EXPECT_NEAR(q, 0.42102443824070834, 1e-15);
    EXPECT_NEAR(bessel_k0(1.0), q, 1e-14);
}

TEST(Bessel, K1AtOneMatchesQuadrature) {
    const double q = oracle::bessel_k_quad(1, 1.0);
    EXPECT_NEAR(q, 0.6019072301972346, 1e-15);
    EXPECT_NEAR(bessel_k1(1.0), q, 1e-13);
}

TEST(Bessel, RelativeErrorAcrossRange) {
    for (double x : {1e-6, 1e-3, 0.1, 0.5, 1.5, 1.999, 2.0, 2.5, 5.0, 10.0, 30.0, 80.0, 200.0, 600.0}) {
        const double h = x < 0.01 ? 0.002 : 0.01;
        const double q0 = oracle::bessel_k_quad(0, x, h);
        const double q1 = oracle::bessel_k_quad(1, x, h);
        EXPECT_LE(std::abs(bessel_k0(x) - q0), 1e-14 * q0) << "x=" << x;
        EXPECT_LE(std::abs(bessel_k1(x) - q1), 1e-14 * q1) << "x=" << x;
    }
}

TEST(Bessel, SmallArgumentLaws) {
    const double x = 1e-4;
    // next term of the ascending series: (x^2/4)(1 - log(x/2) - gamma) ~ 2.6e-8
    const double next = 0.25 * x * x * (1.0 - std::log(x / 2) - euler_gamma());
    const double sum = bessel_k0(x) + std::log(x / 2) + euler_gamma();
    EXPECT_NEAR(sum, next, 1e-15);
    EXPECT_LE(std::abs(sum), 3e-8);
    const double y = 1e-3 * bessel_k1(1e-3);
    EXPECT_GE(y, 1 - 1e-5);
    EXPECT_LE(y, 1.0);
}

TEST(Bessel, LargeArgumentAsymptotic) {
    const double ratio = bessel_k0(50.0) / (std::sqrt(kPi / 100.0) * std::exp(-50.0));
    EXPECT_GE(ratio, 0.99);
    EXPECT_LE(ratio, 1.0);
}

TEST(Bessel, UnderflowGivesZero) {
    EXPECT_EQ(bessel_k0(800.0), 0.0);
    EXPECT_GT(bessel_k0_scaled(800.0), 0.0);
}

TEST(Bessel, DomainError) {
    EXPECT_THROW(bessel_k0(0.0), Error);
    EXPECT_THROW(bessel_k1(-1.0), Error);
    try {
        bessel_k0(-2.0);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Domain);
    }
}

TEST(Bessel, DerivativeIdentity) {
    for (double x : {0.5, 1.0, 2.0, 5.0}) {
        const double h = 1e-5;
        const double d = (bessel_k0(x + h) - bessel_k0(x - h)) / (2 * h);
        EXPECT_NEAR(-d, bessel_k1(x), 1e-8) << x;
    }
}

TEST(Bessel, Wronskian) {
    for (double x = 0.1; x <= 10.0; x += 0.1) {
        const double w = oracle::bessel_i_series(0, x) * bessel_k1(x) + oracle::bessel_i_series(1, x) * bessel_k0(x);
        EXPECT_NEAR(w * x, 1.0, 1e-10) << x;
    }
}

TEST(Bessel, MonotoneAndPositive) {
    double p0 = bessel_k0(1e-3);
    double p1 = bessel_k1(1e-3);
    for (double x = 1e-3 * 1.05; x <= 100.0; x *= 1.05) {
        const double k0 = bessel_k0(x);
        const double k1 = bessel_k1(x);
        EXPECT_GT(k0, 0.0);
        EXPECT_GT(k1, 0.0);
        EXPECT_LT(k0, p0);
        EXPECT_LT(k1, p1);
        p0 = k0;
        p1 = k1;
    }
}

TEST(Bessel, EnclosureContainsQuadrature) {
    for (double x : {0.3, 3.0, 30.0}) {
        EXPECT_TRUE(bessel_k0_enclosure(x).contains(oracle::bessel_k_quad(0, x)));
        EXPECT_TRUE(bessel_k1_enclosure(x).contains(oracle::bessel_k_quad(1, x)));
    }
}

TEST(Constants, EulerGamma) {
    EXPECT_DOUBLE_EQ(euler_gamma(), 0.5772156649015329);
    const double acc = oracle::euler_gamma_richardson();
    EXPECT_NEAR(acc, oracle::kEulerGammaLiteral, 1e-10);
    EXPECT_NEAR(euler_gamma(), acc, 1e-10);
    EXPECT_GT(euler_gamma(), 0.57);
    EXPECT_LT(euler_gamma(), 0.58);
}

TEST(Constants, AConstants) {
    const auto a = a_constants(8);
    ASSERT_EQ(a.size(), 9u);
    const long double pi = std::numbers::pi_v<long double>;
    const double a0 = static_cast<double>((std::log(4 * pi) - std::numbers::egamma_v<long double>) / pi);
    EXPECT_NEAR(a[0], a0, 1e-15);
    EXPECT_NEAR(a[0], 0.6219165873829015, 1e-15);
    EXPECT_NEAR(a[1], 0.15915494309, 1e-11);
    EXPECT_DOUBLE_EQ(a[4], a[2] / 2);
    for (int m = 1; m <= 8; ++m) EXPECT_NEAR(m * a[m], 1.0 / kTwoPi, 1e-17);
    EXPECT_EQ(a_constants(0).size(), 1u);
    EXPECT_THROW(a_constants(-1), Error);
}
