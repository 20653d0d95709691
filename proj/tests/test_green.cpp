#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "permon/green.hpp"
#include "permon/verify/oracles.hpp"

using namespace permon;

namespace {
const CirclePoint3 origin;

double multipole_residual(double rho, double tol = 1e-14) {
    const CirclePoint3 p(0.0, 0.0, rho);
    const auto exact = green_image_sum(p, origin, image_sum_order(rho * rho, rho, tol));
    return exact.value - (0.5 * a_zero() - 0.5 / rho);
}
}  // namespace

TEST(Geometry, CircleReduction) {
    const CirclePoint3 p(1.0, 2.0, -0.5);
    EXPECT_NEAR(p.t(), kTwoPi - 0.5, 1e-15);
    EXPECT_NEAR(CirclePoint3(0, 0, 7.0).t(), 7.0 - kTwoPi, 1e-15);
    EXPECT_NEAR(distance(CirclePoint3(0, 0, 0.1), CirclePoint3(0, 0, kTwoPi - 0.1)), 0.2, 1e-14);
    EXPECT_NEAR(distance(CirclePoint3(3, 4, 0), origin), 5.0, 1e-15);
}

TEST(GreenImage, EvenInT) {
    for (double t : {0.1, 0.7, 2.0, 3.0}) {
        const auto a = green_image_sum(CirclePoint3(0.8, 0.1, t), origin, 200);
        const auto b = green_image_sum(CirclePoint3(0.8, 0.1, -t), origin, 200);
        // -t is stored as 2pi - t, which costs one rounding
        EXPECT_NEAR(a.value, b.value, 1e-15);
        EXPECT_NEAR(a.grad[2], -b.grad[2], 1e-15);
    }
}

TEST(GreenImage, EvenAroundSource) {
    const CirclePoint3 q(0.0, 0.0, 1.0);
    for (double s : {0.25, 0.5, 1.5}) {
        const auto a = green_image_sum(CirclePoint3(0.7, 0.0, 1.0 + s), q, 300);
        const auto b = green_image_sum(CirclePoint3(0.7, 0.0, 1.0 - s), q, 300);
        EXPECT_NEAR(a.value, b.value, 1e-12);
    }
}

TEST(GreenImage, RotationInvariant) {
    const double r = 1.3;
    const double t = 0.4;
    const double g = green_image_sum(CirclePoint3(r, 0.0, t), origin, 500).value;
    for (double th = 0.1; th < kTwoPi; th += 0.7) {
        const auto p = CirclePoint3(std::polar(r, th), t);
        EXPECT_NEAR(green_image_sum(p, origin, 500).value, g, 1e-14);
    }
}

TEST(GreenImage, TailBoundSelfConsistent) {
    const CirclePoint3 p(1.0, 0.0, 0.5);
    const auto g1 = green_image_sum(p, origin, 10000);
    const auto g2 = green_image_sum(p, origin, 20000);
    EXPECT_LE(std::abs(g1.value - g2.value), g1.trunc_bound);
    EXPECT_LT(g1.trunc_bound, 1e-9);
}

TEST(GreenImage, TailBoundSound) {
    for (double r : {0.05, 0.3, 1.0, 2.5}) {
        for (double t : {0.0, 1.0, 3.0}) {
            const CirclePoint3 p(r, 0.0, t);
            for (int M : {5, 50, 300}) {
                const auto g = green_image_sum(p, origin, M);
                const auto ref = green_image_sum(p, origin, 10 * M);
                const double diff = std::abs(g.value - ref.value);
                EXPECT_LE(diff, g.trunc_bound + 1e-15) << r << ' ' << t << ' ' << M;
                // not hopelessly loose either
                if (diff > 1e-13) { EXPECT_LE(g.trunc_bound, 50 * diff) << r << ' ' << t << ' ' << M; }
            }
        }
    }
}

TEST(GreenImage, MatchesLongDoubleReference) {
    for (double r : {0.2, 1.0, 2.0}) {
        const double ref = oracle::green_image_reference(r, 0.9, 4000);
        EXPECT_NEAR(green_image_sum(CirclePoint3(r, 0.0, 0.9), origin, 4000).value, ref, 1e-13);
    }
}

TEST(GreenImage, GradientMatchesDifferences) {
    const CirclePoint3 p(0.6, -0.4, 0.9);
    const auto g = green_image_sum(p, origin, 3000);
    const double h = 1e-5;
    auto val = [&](double dx, double dy, double dt) {
        return green_image_sum(CirclePoint3(p.x() + dx, p.y() + dy, p.t() + dt), origin, 3000).value;
    };
    EXPECT_NEAR(g.grad[0], (val(h, 0, 0) - val(-h, 0, 0)) / (2 * h), 1e-8);
    EXPECT_NEAR(g.grad[1], (val(0, h, 0) - val(0, -h, 0)) / (2 * h), 1e-8);
    EXPECT_NEAR(g.grad[2], (val(0, 0, h) - val(0, 0, -h)) / (2 * h), 1e-8);
}

TEST(GreenImage, SingularPoint) {
    try {
        green_image_sum(CirclePoint3(1, 1, 1), CirclePoint3(1, 1, 1 + kTwoPi), 10);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularPoint);
    }
}

TEST(GreenFourierBessel, AgreesWithImageSum) {
    const CirclePoint3 p(1.0, 0.0, 0.5);
    const auto fb = green_fourier_bessel(p, origin, fourier_bessel_order(1.0, 5e-11));
    const auto is = green_image_sum(p, origin, image_sum_order(1.25, 0.5, 5e-11));
    EXPECT_LE(fb.trunc_bound, 5e-11);
    EXPECT_LE(is.trunc_bound, 5e-11);
    EXPECT_LE(std::abs(fb.value - is.value), 1e-10);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(fb.grad[i], is.grad[i], 1e-8);
}

TEST(GreenFourierBessel, LogarithmicAsymptotics) {
    const auto g = green_fourier_bessel(CirclePoint3(8.0, 0.0, 0.3), origin, 10);
    EXPECT_LE(std::abs(g.value - std::log(8.0) / kTwoPi), 10 * std::exp(-8.0));
}

TEST(GreenFourierBessel, TAverageIsLog) {
    // trapezoid in t is exact for trigonometric polynomials of degree < N
    const int N = 64;
    for (double r : {0.7, 2.0}) {
        double avg = 0.0;
        for (int i = 0; i < N; ++i) avg += green_fourier_bessel(CirclePoint3(r, 0.0, kTwoPi * i / N), origin, 40).value;
        avg /= N;
        EXPECT_NEAR(avg, std::log(r) / kTwoPi, 1e-12);
    }
}

TEST(GreenFourierBessel, RequiresPositiveR) {
    EXPECT_THROW(green_fourier_bessel(CirclePoint3(0, 0, 1), origin, 5), Error);
}

TEST(GreenMultipole, OnAxisResidual) {
    const double rho = 0.01;
    EXPECT_LE(std::abs(multipole_residual(rho)), kMultipoleC2 * rho * rho);
}

TEST(GreenMultipole, RichardsonRatio) {
    for (double rho : {0.2, 0.1, 0.05}) {
        const double ratio = multipole_residual(rho / 2) / multipole_residual(rho);
        EXPECT_GE(ratio, 0.2) << rho;
        EXPECT_LE(ratio, 0.3) << rho;
    }
}

TEST(GreenMultipole, CalibratedConstantHolds) {
    // sweep the ball rho < pi/2 in a few directions
    for (double rho = 0.05; rho < 0.5 * kPi; rho += 0.05) {
        for (double ang = 0.0; ang <= 0.5 * kPi + 1e-9; ang += kPi / 8) {
            const CirclePoint3 p(rho * std::cos(ang), 0.0, rho * std::sin(ang));
            const auto exact = green_image_sum(p, origin, image_sum_order(rho * rho, p.t() > kPi ? p.t() - kTwoPi : p.t(), 1e-13));
            const auto mp = green_multipole(p, origin);
            EXPECT_LE(std::abs(exact.value - mp.value), mp.trunc_bound) << rho << ' ' << ang;
            for (int i = 0; i < 3; ++i) EXPECT_LE(std::abs(exact.grad[i] - mp.grad[i]), kMultipoleGradC2 * rho);
        }
    }
}

TEST(GreenMultipole, SingularPartMatches) {
    for (double rho : {1e-3, 1e-5, 1e-7}) {
        const auto g = green_multipole(CirclePoint3(0.0, rho, 0.0), origin);
        EXPECT_NEAR(rho * g.value, -0.5, rho);
    }
}

TEST(GreenMultipole, Errors) {
    EXPECT_THROW(green_multipole(CirclePoint3(2, 0, 0), origin), Error);
    try {
        green_multipole(CirclePoint3(1.6, 0, 0), origin);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::OutOfRegime);
    }
}

TEST(GreenEvalDispatch, Regimes) {
    const auto a = green_eval(CirclePoint3(5.0, 0.0, 1.0), origin, 1e-10);
    EXPECT_EQ(a.regime, GreenRegime::FourierBessel);
    EXPECT_LE(a.trunc_bound, 1e-10);

    const auto b = green_eval(CirclePoint3(1e-3, 0.0, 0.0), origin, 1e-5);
    EXPECT_EQ(b.regime, GreenRegime::Multipole);
    EXPECT_LE(b.trunc_bound, kMultipoleC2 * 1e-6);

    const auto c = green_eval(CirclePoint3(0.3, 0.0, 0.2), origin, 1e-10);
    EXPECT_EQ(c.regime, GreenRegime::ImageSum);
    EXPECT_LE(c.trunc_bound, 1e-10);

    // near the pole with a tolerance the model cannot meet: falls back to the lattice sum
    const auto d = green_eval(CirclePoint3(0.05, 0.0, 0.0), origin, 1e-9);
    EXPECT_EQ(d.regime, GreenRegime::ImageSum);
    EXPECT_LE(d.trunc_bound, 1e-9);
}

TEST(GreenEvalDispatch, Errors) {
    try {
        green_eval(origin, origin, 1e-6);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularPoint);
    }
    try {
        green_eval(CirclePoint3(0.01, 0, 0), origin, 1e-13);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ToleranceUnreachable);
    }
    EXPECT_THROW(green_eval(CirclePoint3(1, 0, 0), origin, 0.0), Error);
}

TEST(GreenEvalDispatch, RegimesAgreeInOverlap) {
    for (double r : {0.55, 0.8, 1.2}) {
        for (double t : {0.0, 1.0, 2.5}) {
            const CirclePoint3 p(r, 0.0, t);
            const auto fb = green_fourier_bessel(p, origin, 30);
            const auto is = green_image_sum(p, origin, 500);
            EXPECT_LE(std::abs(fb.value - is.value), fb.trunc_bound + is.trunc_bound + 1e-14);
        }
    }
}

TEST(GreenDerivative, DtVanishesOnFlatPlanes) {
    EXPECT_LE(green_dt_zero_check(1.0), 1e-12);
    EXPECT_LE(green_dt_zero_check(3.0), 1e-12);
    EXPECT_LE(green_dt_zero_check_image(0.5, 20000), 1e-10);
}

TEST(GreenHarmonic, DiscreteLaplacianSecondOrder) {
    const CirclePoint3 c(0.9, 0.4, 1.1);
    auto lap = [&](double h) {
        auto g = [&](double dx, double dy, double dt) {
            return green_eval(CirclePoint3(c.x() + dx, c.y() + dy, c.t() + dt), origin, 1e-14).value;
        };
        const double g0 = g(0, 0, 0);
        return (g(h, 0, 0) + g(-h, 0, 0) + g(0, h, 0) + g(0, -h, 0) + g(0, 0, h) + g(0, 0, -h) - 6 * g0) / (h * h);
    };
    const double e1 = std::abs(lap(0.2));
    const double e2 = std::abs(lap(0.1));
    const double e3 = std::abs(lap(0.05));
    const double s1 = std::log2(e1 / e2);
    const double s2 = std::log2(e2 / e3);
    EXPECT_GE(s1, 1.8);
    EXPECT_LE(s1, 2.2);
    EXPECT_GE(s2, 1.8);
    EXPECT_LE(s2, 2.2);
}

TEST(GreenBatch, CsvRoundTrip) {
    std::istringstream in("# header\n1 0 0.5\n\n0.2 0.1 3\n");
    const auto pts = read_points(in);
    ASSERT_EQ(pts.size(), 2u);
    const auto ev = green_batch(pts, origin, 1e-10);
    std::ostringstream out;
    write_green_csv(out, pts, ev);
    const std::string s = out.str();
    EXPECT_NE(s.find("x,y,t,value,gx,gy,gt,bound,regime"), std::string::npos);
    EXPECT_NE(s.find("FourierBessel"), std::string::npos);
    EXPECT_NE(s.find("ImageSum"), std::string::npos);
    std::istringstream bad("1 2\n");
    EXPECT_THROW(read_points(bad), Error);
}
