#pragma once

// Hopf fibration R^4 \ 0 -> R^3 \ 0 and the Gibbons-Hawking lift of
// monopoles with a Dirac singularity to S^1-invariant connections on R^4.
//
//   pi(z1, z2) = (|z1|^2 - |z2|^2, Re 2 z1 z2, Im 2 z1 z2),  rho = |pi| = |z1|^2 + |z2|^2
//   h = 1/(2 rho),   theta0 = Im(conj(z1) dz1 - conj(z2) dz2) / rho
//
// The circle acts by e^{is}(z1, z2) = (e^{is} z1, e^{-is} z2); theta0 takes
// the value 1 on the generator (i z1, -i z2), so the fibre has length 2 pi.
// With this normalisation *dh = d theta0 and the Gibbons-Hawking metric
// h pi^*g3 + h^{-1} theta0^2 equals twice the Euclidean metric of C^2.
// All norms below are taken in that metric.
//
// Real coordinates are ordered (x1, y1, x2, y2) and R^4 is oriented by
// dx1 dy1 dx2 dy2.

#include <array>
#include <cmath>
#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "permon/error.hpp"
#include "permon/geometry.hpp"

namespace permon {

using Vec4 = std::array<double, 4>;

struct Quat4Point {
    Complex z1{0.0, 0.0};
    Complex z2{0.0, 0.0};

    static Quat4Point from_real(const Vec4& x) { return {{x[0], x[1]}, {x[2], x[3]}}; }
    Vec4 real() const { return {z1.real(), z1.imag(), z2.real(), z2.imag()}; }
    double rho() const { return std::norm(z1) + std::norm(z2); }
    /// e^{is} acting on the fibre.
    Quat4Point rotated(double s) const { return {z1 * std::polar(1.0, s), z2 * std::polar(1.0, -s)}; }
};

/// 1-form in the Cartesian frame (dx1, dy1, dx2, dy2) at `base`.
struct LiftedForm {
    Vec4 components{0.0, 0.0, 0.0, 0.0};
    Quat4Point base;
};

inline constexpr double kAxisCutoff = 1e-8;

namespace detail {

inline void require_off_origin(const Quat4Point& p, const char* where) {
    if (std::abs(p.z1) < kAxisCutoff && std::abs(p.z2) < kAxisCutoff)
        throw Error(ErrorKind::Origin, std::string(where) + ": point too close to the origin");
}

// d pi: rows are the three components, columns the real coordinates.
inline std::array<Vec4, 3> hopf_jacobian(const Quat4Point& p) {
    const double x1 = p.z1.real(), y1 = p.z1.imag(), x2 = p.z2.real(), y2 = p.z2.imag();
    return {{{2 * x1, 2 * y1, -2 * x2, -2 * y2},
             {2 * x2, -2 * y2, 2 * x1, -2 * y1},
             {2 * y2, 2 * x2, 2 * y1, 2 * x1}}};
}

}  // namespace detail

inline Vec3 hopf_project(const Quat4Point& p) {
    const Complex w = 2.0 * p.z1 * p.z2;
    return {std::norm(p.z1) - std::norm(p.z2), w.real(), w.imag()};
}

inline double gh_potential(const Quat4Point& p) { return 0.5 / p.rho(); }

/// theta0 at p.
inline LiftedForm gibbons_hawking_connection(const Quat4Point& p) {
    detail::require_off_origin(p, "gibbons_hawking_connection");
    const double r = p.rho();
    const double x1 = p.z1.real(), y1 = p.z1.imag(), x2 = p.z2.real(), y2 = p.z2.imag();
    return {{-y1 / r, x1 / r, y2 / r, -x2 / r}, p};
}

/// Fibre generator (i z1, -i z2) as a real tangent vector.
inline Vec4 fibre_generator(const Quat4Point& p) {
    return {-p.z1.imag(), p.z1.real(), p.z2.imag(), -p.z2.real()};
}

/// pi^* of a covector a on R^3 (Cartesian components).
inline Vec4 pullback(const Quat4Point& p, const Vec3& a) {
    const auto J = detail::hopf_jacobian(p);
    Vec4 out{0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < 3; ++i)
        for (int c = 0; c < 4; ++c) out[c] += a[i] * J[i][c];
    return out;
}

/// Gibbons-Hawking metric g(u, v) evaluated from its definition.
inline double gh_metric(const Quat4Point& p, const Vec4& u, const Vec4& v) {
    const auto J = detail::hopf_jacobian(p);
    const auto th = gibbons_hawking_connection(p).components;
    double base = 0.0;
    for (int i = 0; i < 3; ++i) {
        double pu = 0.0, pv = 0.0;
        for (int c = 0; c < 4; ++c) {
            pu += J[i][c] * u[c];
            pv += J[i][c] * v[c];
        }
        base += pu * pv;
    }
    double tu = 0.0, tv = 0.0;
    for (int c = 0; c < 4; ++c) {
        tu += th[c] * u[c];
        tv += th[c] * v[c];
    }
    const double h = gh_potential(p);
    return h * base + tu * tv / h;
}

/// Squared norm of a covector in the Gibbons-Hawking metric (= 2 x Euclidean).
inline double gh_norm2(const LiftedForm& f) {
    double s = 0.0;
    for (double c : f.components) s += c * c;
    return 0.5 * s;
}

/// xi^ = pi^* a - h^{-1} psi theta0.
inline LiftedForm lift_form(const Vec3& a, double psi, const Quat4Point& p) {
    detail::require_off_origin(p, "lift_form");
    const Vec4 pa = pullback(p, a);
    const Vec4 th = gibbons_hawking_connection(p).components;
    const double hinv = 1.0 / gh_potential(p);
    LiftedForm out{{}, p};
    for (int c = 0; c < 4; ++c) out.components[c] = pa[c] - hinv * psi * th[c];
    return out;
}

enum class HopfChart { Auto, Z1, Z2 };

/// Euclidean Dirac monopole of charge k and mass m on R^3:
/// phi = m - k/(2 rho), a = +-k (1 -+ cos) / 2 d(azimuth about the first axis).
/// The Z1 chart is regular off the negative first axis, Z2 off the positive one.
struct DiracR3 {
    int k;
    double mass;

    double higgs(const Vec3& y) const { return mass - k / (2.0 * std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2])); }

    Vec3 connection(const Vec3& y, bool z1_chart) const {
        const double r = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
        const double s2 = y[1] * y[1] + y[2] * y[2];
        if (s2 == 0.0) throw Error(ErrorKind::SingularPoint, "DiracR3: on the axis");
        const double c = y[0] / r;
        const double f = z1_chart ? 0.5 * k * (1.0 - c) : -0.5 * k * (1.0 + c);
        return {0.0, -f * y[2] / s2, f * y[1] / s2};
    }
};

/// Lift of the Euclidean Dirac monopole (k, mass) in the chart z1 != 0 or z2 != 0.
inline LiftedForm lift_dirac_connection(int k, double mass, const Quat4Point& p, HopfChart chart = HopfChart::Auto) {
    detail::require_off_origin(p, "lift_dirac_connection");
    const bool z1 = chart == HopfChart::Z1 || (chart == HopfChart::Auto && std::abs(p.z1) >= std::abs(p.z2));
    if ((z1 ? std::abs(p.z1) : std::abs(p.z2)) < kAxisCutoff)
        throw Error(ErrorKind::SingularPoint, "lift_dirac_connection: chart coordinate vanishes");
    const DiracR3 mono{k, mass};
    const Vec3 y = hopf_project(p);
    if (y[1] * y[1] + y[2] * y[2] == 0.0) {
        // p on a coordinate plane: pi^*a extends smoothly there, use the closed form
        const Vec4 th = gibbons_hawking_connection(p).components;
        const double rho = p.rho();
        const double x1 = p.z1.real(), y1 = p.z1.imag(), x2 = p.z2.real(), y2 = p.z2.imag();
        Vec4 d = z1 ? Vec4{-y1 / std::norm(p.z1), x1 / std::norm(p.z1), 0.0, 0.0}
                    : Vec4{0.0, 0.0, y2 / std::norm(p.z2), -x2 / std::norm(p.z2)};
        LiftedForm out{{}, p};
        for (int c = 0; c < 4; ++c) out.components[c] = k * d[c] - 2.0 * mass * rho * th[c];
        return out;
    }
    return lift_form(mono.connection(y, z1), mono.higgs(y), p);
}

// ---- finite-difference curvature ------------------------------------------------

using TwoForm = Eigen::Matrix4d;

/// F_ab = d_a A_b - d_b A_a by central differences of a 1-form field.
inline TwoForm curvature_fd(const std::function<Vec4(const Vec4&)>& A, const Vec4& x, double h) {
    std::array<Vec4, 4> dA{};  // dA[a][b] = d_a A_b
    for (int a = 0; a < 4; ++a) {
        Vec4 xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        const Vec4 ap = A(xp), am = A(xm);
        for (int b = 0; b < 4; ++b) dA[a][b] = (ap[b] - am[b]) / (2.0 * h);
    }
    TwoForm F;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) F(a, b) = dA[a][b] - dA[b][a];
    return F;
}

/// Hodge star on 2-forms of R^4 (orientation dx1 dy1 dx2 dy2); conformally
/// invariant, so the factor in the metric does not matter.
inline TwoForm hodge_star(const TwoForm& F) {
    TwoForm S = TwoForm::Zero();
    auto set = [&](int a, int b, double v) {
        S(a, b) = v;
        S(b, a) = -v;
    };
    set(0, 1, F(2, 3));
    set(2, 3, F(0, 1));
    set(0, 2, -F(1, 3));
    set(1, 3, -F(0, 2));
    set(0, 3, F(1, 2));
    set(1, 2, F(0, 3));
    return S;
}

/// Pointwise GH norm^2 of a 2-form: sum_{a<b} F_ab^2 / 4.
inline double gh_norm2(const TwoForm& F) {
    double s = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) s += F(a, b) * F(a, b);
    return 0.25 * s;
}

/// Max-norm of the self-dual part F + *F and of F itself over a cubic grid of
/// n^4 points with spacing `spacing` centred at `centre`, stencil step h.
struct CurvatureResidual {
    double self_dual = 0.0;
    double curvature = 0.0;
};

inline CurvatureResidual curvature_residual(const std::function<Vec4(const Vec4&)>& A, const Vec4& centre, int n,
                                            double spacing, double h) {
    CurvatureResidual out;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double off = 0.5 * (n - 1);
                    const Vec4 x{centre[0] + (i - off) * spacing, centre[1] + (j - off) * spacing,
                                 centre[2] + (k - off) * spacing, centre[3] + (l - off) * spacing};
                    const TwoForm F = curvature_fd(A, x, h);
                    out.self_dual = std::max(out.self_dual, (F + hodge_star(F)).cwiseAbs().maxCoeff());
                    out.curvature = std::max(out.curvature, F.cwiseAbs().maxCoeff());
                }
    return out;
}

// ---- singular gauge -------------------------------------------------------------

using Su2 = Eigen::Matrix2cd;

/// sigma3 = diag(i, -i) / 2.
inline Su2 sigma3() {
    Su2 s = Su2::Zero();
    s(0, 0) = Complex(0.0, 0.5);
    s(1, 1) = Complex(0.0, -0.5);
    return s;
}

/// exp(x sigma3).
inline Su2 exp_sigma3(double x) {
    Su2 g = Su2::Zero();
    g(0, 0) = std::polar(1.0, 0.5 * x);
    g(1, 1) = std::polar(1.0, -0.5 * x);
    return g;
}

/// Section of the adjoint bundle in the singular gauge of the z1 chart:
/// X(p) = Ad(e^{k theta1 sigma3}) u(pi(p)) for an invariant field u on R^3.
inline Su2 singular_gauge_section(int k, const std::function<Su2(const Vec3&)>& u, const Quat4Point& p) {
    detail::require_off_origin(p, "singular_gauge_section");
    if (std::abs(p.z1) < kAxisCutoff) throw Error(ErrorKind::SingularPoint, "singular_gauge_section: z1 = 0");
    const Su2 g = exp_sigma3(k * std::arg(p.z1));
    return g * u(hopf_project(p)) * g.adjoint();
}

}  // namespace permon
