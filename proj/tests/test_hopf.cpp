#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "permon/hopf.hpp"

using namespace permon;

namespace {

Quat4Point random_point(std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> n(0.0, scale);
    return {{n(rng), n(rng)}, {n(rng), n(rng)}};
}

double dot(const Vec4& a, const Vec4& b) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += a[i] * b[i];
    return s;
}

// slope of log(residual) against log(h) over successive halvings
double log_slope(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace

TEST(HopfProject, BasisPoints) {
    const Vec3 a = hopf_project({{1, 0}, {0, 0}});
    const Vec3 b = hopf_project({{0, 0}, {1, 0}});
    EXPECT_EQ(a, (Vec3{1, 0, 0}));
    EXPECT_EQ(b, (Vec3{-1, 0, 0}));
}

TEST(HopfProject, NormIdentity) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
        const auto p = random_point(rng);
        const Vec3 y = hopf_project(p);
        EXPECT_NEAR(std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]), p.rho(), 4e-16 * p.rho());
    }
}

TEST(HopfProject, FibreInvariant) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 20; ++i) {
        const auto p = random_point(rng);
        const Vec3 a = hopf_project(p);
        const Vec3 b = hopf_project(p.rotated(0.37 * i));
        for (int c = 0; c < 3; ++c) EXPECT_NEAR(a[c], b[c], 1e-14);
    }
}

TEST(GibbonsHawking, FibreNormalisation) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const auto p = random_point(rng);
        EXPECT_NEAR(dot(gibbons_hawking_connection(p).components, fibre_generator(p)), 1.0, 1e-14);
    }
}

TEST(GibbonsHawking, StarDhEqualsDTheta0) {
    // pi^*(*dh) as a 2-form on R^4 against d theta0 by differences
    const Quat4Point p{{0.6, -0.3}, {0.2, 0.7}};
    const double rho_scale = std::sqrt(p.rho());
    ASSERT_GT(rho_scale, 0.0);
    auto theta = [](const Vec4& x) { return gibbons_hawking_connection(Quat4Point::from_real(x)).components; };
    const Vec4 x = p.real();
    const Vec3 y = hopf_project(p);
    const double r = p.rho();
    // grad h = -y / (2 r^3); *dh = sum_i (grad h)_i (1/2) eps_ijk dy_j ^ dy_k
    const Vec3 gh{-y[0] / (2 * r * r * r), -y[1] / (2 * r * r * r), -y[2] / (2 * r * r * r)};
    TwoForm star = TwoForm::Zero();
    const auto J = [&] {
        // d pi rows, same as the library's but recomputed by differences
        std::array<Vec4, 3> out{};
        for (int c = 0; c < 4; ++c) {
            Vec4 xp = x, xm = x;
            xp[c] += 1e-6;
            xm[c] -= 1e-6;
            const Vec3 yp = hopf_project(Quat4Point::from_real(xp)), ym = hopf_project(Quat4Point::from_real(xm));
            for (int i = 0; i < 3; ++i) out[i][c] = (yp[i] - ym[i]) / 2e-6;
        }
        return out;
    }();
    const int cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
    for (const auto& ijk : cyc)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                star(a, b) += gh[ijk[0]] * (J[ijk[1]][a] * J[ijk[2]][b] - J[ijk[2]][a] * J[ijk[1]][b]);
    double prev = 0.0;
    for (double h : {0.02, 0.01}) {
        const double err = (curvature_fd(theta, x, h) - star).cwiseAbs().maxCoeff();
        EXPECT_LE(err, 0.05 * h * h * 100);
        if (prev > 0.0) {
            EXPECT_NEAR(log_slope(prev, err), 2.0, 0.2);
        }
        prev = err;
    }
}

TEST(GibbonsHawking, InvariantUnderCircleAction) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) {
        const auto p = random_point(rng);
        const double s = 0.3 + 0.2 * i;
        // the action is linear; push a tangent vector forward and compare pairings
        const Vec4 v = random_point(rng).real();
        const Vec4 rv = Quat4Point::from_real(v).rotated(s).real();
        EXPECT_NEAR(dot(gibbons_hawking_connection(p.rotated(s)).components, rv),
                    dot(gibbons_hawking_connection(p).components, v), 1e-13);
    }
}

TEST(GibbonsHawking, OriginRejected) {
    try {
        gibbons_hawking_connection({{1e-9, 0}, {0, 1e-9}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Origin);
    }
}

TEST(GibbonsHawking, MetricIsTwiceEuclidean) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        const auto p = random_point(rng);
        const Vec4 u = random_point(rng).real();
        const Vec4 v = random_point(rng).real();
        EXPECT_NEAR(gh_metric(p, u, v), 2.0 * dot(u, v), 1e-10 * (1 + std::abs(dot(u, v))));
    }
}

TEST(LiftForm, Examples) {
    const Quat4Point half{{std::sqrt(0.5), 0.0}, {0.0, 0.0}};
    EXPECT_NEAR(gh_norm2(lift_form({1, 0, 0}, 0.0, half)), 1.0, 1e-15);
    const Quat4Point two{{1.0, 0.0}, {0.0, 1.0}};
    EXPECT_NEAR(gh_norm2(lift_form({0, 0, 0}, 1.0, two)), 4.0, 1e-14);
    const auto z = lift_form({0, 0, 0}, 0.0, two);
    for (double c : z.components) EXPECT_EQ(c, 0.0);
}

TEST(LiftForm, NormIdentity) {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const auto p = random_point(rng);
        const Vec3 a{n(rng), n(rng), n(rng)};
        const double psi = n(rng);
        const double expect = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + psi * psi) / gh_potential(p);
        EXPECT_NEAR(gh_norm2(lift_form(a, psi, p)), expect, 1e-12 * expect);
    }
}

TEST(LiftDirac, ClosedFormInChartZ1) {
    // pi^*a - h^{-1} phi theta0 = k dtheta1 - 2 m rho theta0
    std::mt19937_64 rng(7);
    for (int i = 0; i < 30; ++i) {
        const auto p = random_point(rng);
        const int k = 1 + i % 3;
        const double m = 0.5 * (i % 4);
        const auto L = lift_dirac_connection(k, m, p, HopfChart::Z1);
        const Vec4 th = gibbons_hawking_connection(p).components;
        const double n1 = std::norm(p.z1);
        const Vec4 d1{-p.z1.imag() / n1, p.z1.real() / n1, 0.0, 0.0};
        for (int c = 0; c < 4; ++c) EXPECT_NEAR(L.components[c], k * d1[c] - 2 * m * p.rho() * th[c], 1e-11);
    }
}

TEST(LiftDirac, ChartTransition) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 20; ++i) {
        const auto p = random_point(rng);
        const auto a = lift_dirac_connection(2, 0.7, p, HopfChart::Z1).components;
        const auto b = lift_dirac_connection(2, 0.7, p, HopfChart::Z2).components;
        const double n1 = std::norm(p.z1), n2 = std::norm(p.z2);
        const Vec4 d{-p.z1.imag() / n1, p.z1.real() / n1, -p.z2.imag() / n2, p.z2.real() / n2};
        for (int c = 0; c < 4; ++c) EXPECT_NEAR(a[c] - b[c], 2.0 * d[c], 1e-10);
    }
}

TEST(LiftDirac, MasslessIsPureGauge) {
    // the gauge e^{-i k theta1} removes the massless lift completely
    std::mt19937_64 rng(9);
    for (int i = 0; i < 20; ++i) {
        const auto p = random_point(rng);
        const auto L = lift_dirac_connection(1, 0.0, p, HopfChart::Z1).components;
        const double n1 = std::norm(p.z1);
        EXPECT_NEAR(L[0] + p.z1.imag() / n1, 0.0, 1e-12);
        EXPECT_NEAR(L[1] - p.z1.real() / n1, 0.0, 1e-12);
        EXPECT_NEAR(L[2], 0.0, 1e-12);
        EXPECT_NEAR(L[3], 0.0, 1e-12);
    }
}

TEST(LiftDirac, AntiSelfDualSecondOrder) {
    const Vec4 centre{0.7, 0.4, 0.5, -0.3};
    for (double mass : {0.0, 1.0}) {
        auto A = [mass](const Vec4& x) { return lift_dirac_connection(1, mass, Quat4Point::from_real(x), HopfChart::Z1).components; };
        const auto r1 = curvature_residual(A, centre, 3, 0.1, 0.1);
        const auto r2 = curvature_residual(A, centre, 3, 0.1, 0.05);
        const auto r3 = curvature_residual(A, centre, 3, 0.1, 0.025);
        EXPECT_GE(log_slope(r1.self_dual, r2.self_dual), 1.8) << mass;
        EXPECT_GE(log_slope(r2.self_dual, r3.self_dual), 1.8) << mass;
        if (mass == 0.0) {
            EXPECT_GE(log_slope(r1.curvature, r2.curvature), 1.8);
            EXPECT_GE(log_slope(r2.curvature, r3.curvature), 1.8);
        }
    }
}

TEST(LiftDirac, CurvatureNormIdentity) {
    // |F^|^2 = 2 |d(h^{-1} phi)|^2_{R^3}; for the Dirac lift h^{-1} phi = 2 m rho - k
    const Vec4 x{0.7, 0.4, 0.5, -0.3};
    for (double m : {0.5, 1.0, 2.0}) {
        auto A = [m](const Vec4& y) { return lift_dirac_connection(1, m, Quat4Point::from_real(y), HopfChart::Z1).components; };
        const TwoForm F = curvature_fd(A, x, 1e-3);
        EXPECT_NEAR(gh_norm2(F), 8.0 * m * m, 1e-5 * m * m);
    }
}

TEST(Equivariance, WeightKAction) {
    std::mt19937_64 rng(10);
    auto u = [](const Vec3& y) {
        Su2 X;
        X << Complex(0, y[0]), Complex(y[1], y[2]), Complex(-y[1], y[2]), Complex(0, -y[0]);
        return X;
    };
    for (int k : {1, 2, -3}) {
        for (int i = 0; i < 10; ++i) {
            const auto p = random_point(rng);
            const double s = 0.25 + 0.5 * i;
            const Su2 g = exp_sigma3(k * s);
            const Su2 before = g * singular_gauge_section(k, u, p) * g.adjoint();
            const Su2 after = singular_gauge_section(k, u, p.rotated(s));
            EXPECT_LE((before - after).cwiseAbs().maxCoeff(), 1e-13);
        }
    }
}
