#include <gtest/gtest.h>

#include <cmath>

#include "permon/modelsolve.hpp"

using namespace permon;

TEST(Cylinder, ConstantSolution) {
    CylinderProblem p{0.0, 1.0, {}, 1.0, -0.5};
    const auto s = cylinder_solve(p, 1e-2);
    for (double v : s.u) EXPECT_NEAR(v, 1.0, 1e-10);
    EXPECT_NEAR(s.decay_rate, 0.0, 1e-10);
}

TEST(Cylinder, HomogeneousDecay) {
    CylinderProblem p{0.75, 2.0, {}, 1.0, 0.0};
    const auto s = cylinder_solve(p, 1e-3);
    double err = 0.0;
    for (std::size_t i = 0; i < s.u.size(); ++i) err = std::max(err, std::abs(s.u[i] - std::exp(-(s.x[i] - 2.0) / 2)));
    EXPECT_LE(err, 1e-8);
    EXPECT_NEAR(s.decay_rate, 0.5, 1e-3);
}

TEST(Cylinder, ManufacturedSource) {
    // -u'' + u' + 2u = e^{-3 tau}: particular -e^{-3 tau}/10, gamma+ = 1
    auto f = [](double t) { return std::exp(-3.0 * t); };
    auto exact = [](double t) { return -std::exp(-3.0 * t) / 10.0 + std::exp(-3.0 * 0.0) / 10.0 * std::exp(-t); };
    double prev = 0.0;
    double prev_res = 0.0;
    for (double h : {0.02, 0.01, 0.005}) {
        const auto s = cylinder_solve({2.0, 0.0, f, 0.0, 0.0}, h);
        double err = 0.0;
        for (std::size_t i = 0; i < s.u.size(); ++i) err = std::max(err, std::abs(s.u[i] - exact(s.x[i])));
        if (prev > 0.0) {
            EXPECT_GE(std::log2(prev / err), 1.8);
            EXPECT_LE(std::log2(prev / err), 2.2);
            EXPECT_GE(std::log2(prev_res / s.residual), 1.8);
        }
        prev = err;
        prev_res = s.residual;
        for (double d : {-1.5, -0.5, 0.0, 0.5, 0.9}) EXPECT_TRUE(in_weighted_space(s, d)) << d;
        EXPECT_FALSE(in_weighted_space(s, 1.1));
    }
}

TEST(Cylinder, DecayMatchesIndicialRoots) {
    for (int m : {0, 1, 2}) {
        const auto ws = operator_L_spectrum(m, 3);
        for (const auto& e : ws.entries) {
            const auto s = cylinder_solve({e.lambda, 0.0, {}, 1.0, e.gamma_plus + 0.3}, 1e-2);
            EXPECT_NEAR(s.decay_rate, e.gamma_plus, 1e-3) << m << ' ' << e.j;
        }
    }
}

TEST(Cylinder, Linearity) {
    auto f1 = [](double t) { return std::exp(-2.0 * t); };
    auto f2 = [](double t) { return t * std::exp(-4.0 * t); };
    const auto a = cylinder_solve({1.0, 0.0, f1, 0.3, 0.0}, 0.01);
    const auto b = cylinder_solve({1.0, 0.0, f2, -0.1, 0.0}, 0.01);
    const auto ab = cylinder_solve({1.0, 0.0, [&](double t) { return f1(t) + f2(t); }, 0.2, 0.0}, 0.01);
    for (std::size_t i = 0; i < ab.u.size(); ++i) EXPECT_NEAR(ab.u[i], a.u[i] + b.u[i], 1e-13);
    const auto z = cylinder_solve({1.0, 0.0, {}, 0.0, 0.0}, 0.01);
    for (double v : z.u) EXPECT_EQ(v, 0.0);
}

TEST(Cylinder, Errors) {
    try {
        cylinder_solve({0.75, 0.0, {}, 1.0, 0.5}, 1e-2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ExceptionalWeight);
    }
    try {
        cylinder_solve({0.75, 0.0, {}, 1.0, 0.0}, 5.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnderResolved);
    }
}

TEST(ExteriorDiagonal, ConstantAndHarmonic) {
    ExteriorModeProblem p;
    p.R = 2.0;
    p.phi = 1.0;
    const auto a = exterior_diagonal_solve(p, 1e-2);
    for (double v : a.u) EXPECT_NEAR(v, 1.0, 1e-12);
    EXPECT_EQ(a.far, FarField::Constant);
    p.mode = 1;
    const auto b = exterior_diagonal_solve(p, 1e-2);
    for (std::size_t i = 0; i < b.u.size(); ++i) EXPECT_NEAR(b.u[i], 2.0 / b.x[i], 1e-8);
    EXPECT_EQ(b.far, FarField::PowerDecay);
    EXPECT_NEAR(b.decay_rate, 1.0, 1e-6);
}

namespace {
// bounded solution of -(u'' + u'/r) = f, u(R) = phi, by nested quadrature:
// u(r) = phi + int_R^r (1/rho) int_rho^inf s f(s) ds drho
double nested_quadrature(const Source& f, double R, double phi, double r) {
    // s = rho / t maps [rho, inf) onto (0, 1]
    auto inner = [&](double rho) {
        return num::integrate([&](double t) { return t == 0.0 ? 0.0 : rho * rho / (t * t * t) * f(rho / t); }, 0.0, 1.0, 32, 20) / rho;
    };
    return phi + num::integrate(inner, R, r, 16, 20);
}
}  // namespace

TEST(ExteriorDiagonal, PoissonSourceMatchesQuadrature) {
    auto f = [](double r) { return std::pow(r, -4.0); };
    const double R = 1.0;
    double prev = 0.0;
    for (double h : {0.04, 0.02, 0.01}) {
        ExteriorModeProblem p{Sector::DiagonalInvariant, 0, R, -0.5, f, 0.0};
        const auto s = exterior_diagonal_solve(p, h);
        double err = 0.0;
        for (std::size_t i = 0; i < s.u.size(); i += 5) {
            const double closed = 0.25 * (1.0 / (R * R) - 1.0 / (s.x[i] * s.x[i]));
            if (i % 40 == 0) {
                EXPECT_NEAR(nested_quadrature(f, R, 0.0, s.x[i]), closed, 1e-9);
            }
            err = std::max(err, std::abs(s.u[i] - closed));
        }
        EXPECT_NEAR(s.limit, 0.25, 1e-3);
        if (prev > 0.0) {
            EXPECT_GE(std::log2(prev / err), 1.8);
            EXPECT_LE(std::log2(prev / err), 2.2);
        }
        prev = err;
    }
}

TEST(ExteriorDiagonal, WeightRange) {
    ExteriorModeProblem p;
    p.delta = 0.2;
    try {
        exterior_diagonal_solve(p, 0.01);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::WeightOutOfRange);
    }
}

namespace {
double bump(double r, double c) {
    const double x = (r - c) / 0.5;
    return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
}
}  // namespace

TEST(ExteriorCoercive, ZeroData) {
    ExteriorModeProblem p{Sector::Oscillatory, 1, 1.0, -0.5, {}, 0.0};
    const auto rep = exterior_coercive_solve(p, 0.01);
    for (double v : rep.solution.u) EXPECT_EQ(v, 0.0);
}

TEST(ExteriorCoercive, ScreenedDecay) {
    const double R = 1.0;
    ExteriorModeProblem p{Sector::Oscillatory, 1, R, -0.5, [&](double r) { return bump(r, R + 2.0); }, 0.0};
    const auto rep = exterior_coercive_solve(p, 0.005);
    EXPECT_NEAR(rep.solution.decay_rate, 1.0, 0.05);
    // beyond the bump u is proportional to K0(mu r)
    const auto& s = rep.solution;
    double lo = 1e300, hi = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (s.x[i] < R + 3.0 || s.x[i] > R + 15.0) continue;
        const double q = s.u[i] / bessel_k0(s.x[i]);
        lo = std::min(lo, q);
        hi = std::max(hi, q);
    }
    EXPECT_LE((hi - lo) / hi, 1e-3);
    EXPECT_GT(rep.energy_ratio, 0.0);
}

TEST(ExteriorCoercive, HeavierMassShrinksSolution) {
    const double R = 1.0;
    auto f = [&](double r) { return bump(r, R + 2.0); };
    ExteriorModeProblem a{Sector::OffDiagonal, 0, R, -0.5, f, 0.0, 1.0};
    ExteriorModeProblem b{Sector::OffDiagonal, 0, R, -0.5, f, 0.0, 4.0};
    EXPECT_LE(exterior_coercive_solve(b, 0.01).l2_norm, 0.5 * exterior_coercive_solve(a, 0.01).l2_norm);
}

TEST(ExteriorCoercive, SecondOrder) {
    // manufactured: u = K0(mu r) solves the homogeneous problem with u(R) = K0(mu R)
    const double R = 0.5;
    double prev = 0.0;
    for (double h : {0.04, 0.02, 0.01}) {
        ExteriorModeProblem p{Sector::OffDiagonal, 0, R, -0.5, {}, bessel_k0(R), 1.0};
        const auto s = exterior_coercive_solve(p, h).solution;
        double err = 0.0;
        for (std::size_t i = 0; i < s.x.size(); ++i) err = std::max(err, std::abs(s.u[i] - bessel_k0(s.x[i])));
        if (prev > 0.0) {
            EXPECT_GE(std::log2(prev / err), 1.8);
            EXPECT_LE(std::log2(prev / err), 2.2);
        }
        prev = err;
    }
}

TEST(ExteriorCoercive, NonPositiveCoercivity) {
    ExteriorModeProblem p{Sector::OffDiagonal, 0, 1.0, -0.5, {}, 0.0, 0.0};
    try {
        exterior_coercive_solve(p, 0.01);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::CoercivityNonPositive);
    }
}

TEST(Poincare, BumpSatisfiesInequality) {
    const double R = 1.0;
    RadialProfile p;
    p.u = [](double r) { return bump(r, 2.5); };
    p.du = [](double r) {
        const double x = (r - 2.5) / 0.5;
        if (std::abs(x) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - x * x)) * (-2.0 * x / ((1.0 - x * x) * (1.0 - x * x))) / 0.5;
    };
    p.r_max = 3.0;
    const double ratio = poincare_ratio(R, -0.5, p);
    EXPECT_LE(ratio, 1.0);
    RadialProfile twice = p;
    twice.u = [p](double r) { return 2.0 * p.u(r); };
    twice.du = [p](double r) { return 2.0 * p.du(r); };
    EXPECT_NEAR(poincare_ratio(R, -0.5, twice), ratio, 1e-14);
}

TEST(Poincare, RandomTrialsBelowOne) {
    for (double R : {0.5, 1.0, 2.0})
        for (double d : {-0.45, -0.1, 0.1, 0.45}) {
            const auto rep = poincare_constant_check(R, d, 300, 7);
            EXPECT_LE(rep.worst_ratio, 1.0) << R << ' ' << d;
            EXPECT_GT(rep.worst_ratio, 0.0);
        }
}

TEST(Poincare, NearExtremalProfileHasPower) {
    const auto prof = extremal_profile(-0.45, 2.0, 1e6);
    EXPECT_GE(poincare_ratio(1.0, -0.45, prof), 0.2);
    EXPECT_LE(poincare_ratio(1.0, -0.45, prof), 1.0);
    const auto rep = poincare_constant_check(2.0, -0.45, 10, 0);
    EXPECT_GE(rep.extremal_ratio, 0.2);
    EXPECT_LE(rep.extremal_ratio, 1.0);
    EXPECT_TRUE(std::isnan(poincare_constant_check(2.0, 0.45, 10, 0).extremal_ratio));
}

TEST(Poincare, Deterministic) {
    EXPECT_EQ(poincare_constant_check(1.0, 0.1, 50, 3).worst_ratio, poincare_constant_check(1.0, 0.1, 50, 3).worst_ratio);
}

TEST(WeightIdentity, ClosedForms) {
    const auto a = weight_identity_check({0.0});
    EXPECT_EQ(a.max_residual, 0.0);
    EXPECT_EQ(a.max_grad, 0.0);
    EXPECT_LE(weight_identity_check({1.0}).max_residual, 1e-15);
    const auto c = weight_identity_check({100.0});
    EXPECT_NEAR(c.max_grad, 100.0 / std::sqrt(10001.0), 1e-15);
    EXPECT_LT(c.max_grad, 1.0);
    std::vector<double> radii;
    for (int i = 0; i < 100; ++i) radii.push_back(0.37 * i * i);
    const auto d = weight_identity_check(radii);
    EXPECT_LE(d.max_residual, 1e-12);
    EXPECT_LE(d.max_grad, 1.0);
}
