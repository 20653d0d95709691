#pragma once

// Abelian monopoles on R^2 x S^1: signed sums of periodic and Euclidean
// Dirac monopoles twisted by a flat line bundle (v, b).
//
// Conventions.  The Higgs field is the real function phi = -i Phi, and the
// connection is the real 1-form a = a_r dr + a_theta dtheta + a_t dt with
// A = -i a.  With these signs the Bogomolny equation reads curl a = grad phi
// in physical cylindrical components:
//
//   curl_r     = (1/r)(d_theta a_t - d_t a_theta)
//   curl_theta = d_t a_r - d_r a_t
//   curl_t     = (1/r)(d_r a_theta - d_theta a_r)

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <ostream>
#include <string_view>
#include <vector>

#include "permon/error.hpp"
#include "permon/geometry.hpp"
#include "permon/green.hpp"
#include "permon/numeric.hpp"
#include "permon/specfn.hpp"

namespace permon {

enum class DiracKind { Periodic, Euclidean };

struct DiracTerm {
    CirclePoint3 center;
    int charge = 1;
    DiracKind kind = DiracKind::Periodic;
};

struct AbelianMonopole {
    std::vector<DiracTerm> terms;
    double v = 0.0;
    double b = 0.0;

    /// Degree of the line bundle on the torus at infinity.
    int periodic_charge() const {
        int k = 0;
        for (const auto& t : terms)
            if (t.kind == DiracKind::Periodic) k += t.charge;
        return k;
    }

    void validate() const {
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (terms[i].charge == 0) throw Error(ErrorKind::InvalidData, "AbelianMonopole: zero charge term");
            for (std::size_t j = 0; j < i; ++j)
                if (distance(terms[i].center, terms[j].center) == 0.0)
                    throw Error(ErrorKind::InvalidData, "AbelianMonopole: coincident centers");
        }
    }
};

inline AbelianMonopole single_periodic(int k, const CirclePoint3& center, double v = 0.0, double b = 0.0) {
    return {{{center, k, DiracKind::Periodic}}, v, b};
}

enum class GaugeChart { Exterior, NearSingularity };

struct FieldSample {
    double higgs = 0.0;
    double a_theta = 0.0;
    double a_t = 0.0;
    GaugeChart gauge_chart = GaugeChart::Exterior;
    int chart_index = -1;  // term index for NearSingularity
};

/// phi = v + sum_j k_j G_{c_j}(p); Euclidean terms contribute -k/(2 rho).
inline double higgs(const AbelianMonopole& m, const CirclePoint3& p, double tol) {
    double weight = 0.0;
    for (const auto& t : m.terms) weight += std::abs(t.charge);
    const double per_term = weight > 0.0 ? tol / weight : tol;
    double phi = m.v;
    for (const auto& t : m.terms) {
        if (t.kind == DiracKind::Periodic) {
            phi += t.charge * green_eval(p, t.center, per_term).value;
        } else {
            const double rho = distance(p, t.center);
            if (rho == 0.0) throw Error(ErrorKind::SingularPoint, "higgs: evaluation at a center");
            phi -= t.charge / (2.0 * rho);
        }
    }
    return phi;
}

/// grad phi in Cartesian components (d/dx, d/dy, d/dt).
inline Vec3 higgs_gradient(const AbelianMonopole& m, const CirclePoint3& p, double tol) {
    double weight = 0.0;
    for (const auto& t : m.terms) weight += std::abs(t.charge);
    const double per_term = weight > 0.0 ? tol / weight : tol;
    Vec3 g{0.0, 0.0, 0.0};
    for (const auto& t : m.terms) {
        Vec3 d;
        if (t.kind == DiracKind::Periodic) {
            d = green_eval(p, t.center, per_term).grad;
        } else {
            const Vec3 x = relative_coordinates(p, t.center);
            const double rho = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
            if (rho == 0.0) throw Error(ErrorKind::SingularPoint, "higgs_gradient: evaluation at a center");
            const double c = 0.5 / (rho * rho * rho);
            d = {c * x[0], c * x[1], c * x[2]};
        }
        for (int i = 0; i < 3; ++i) g[i] += t.charge * d[i];
    }
    return g;
}

namespace detail {

/// Validity radius of the exterior radial-gauge expansion.
inline constexpr double kRadialGaugeMinR = 2.0;

// a_theta of a charge-1 periodic term centred at the origin of (r, s) where
// s = t - t0 is the raw (unreduced) circle offset and t_raw the raw circle
// coordinate of the evaluation point.
inline double radial_gauge_a_theta_unit(double r, double t_raw, double t0, double tol) {
    const double s = t_raw - t0;
    const double geom = kPi * (1.0 - std::exp(-r));
    num::CompensatedSum sum;
    int M = 1;
    while (r * bessel_k1(M * r) > tol * geom && M < 100000) ++M;
    for (int m = M; m >= 1; --m) sum += r * bessel_k1(m * r) * std::sin(m * s);
    return (-t_raw + t0 + kPi) / kTwoPi - sum.value() / kPi;
}

}  // namespace detail

/// Exterior radial gauge for a single periodic term (r >= 2 from its axis).
inline FieldSample connection_radial_gauge(const AbelianMonopole& m, const CirclePoint3& p, double tol) {
    if (m.terms.size() != 1 || m.terms[0].kind != DiracKind::Periodic)
        throw Error(ErrorKind::InvalidData, "connection_radial_gauge: needs exactly one periodic term");
    const auto& term = m.terms[0];
    const double r = std::abs(p.z() - term.center.z());
    if (r < detail::kRadialGaugeMinR) throw Error(ErrorKind::OutOfRegime, "connection_radial_gauge: r < 2");
    FieldSample s;
    s.higgs = higgs(m, p, tol);
    s.a_theta = term.charge * detail::radial_gauge_a_theta_unit(r, p.t(), term.center.t(), tol / std::abs(term.charge));
    s.a_t = m.b;
    s.gauge_chart = GaugeChart::Exterior;
    return s;
}

/// Connection of all periodic terms in Cartesian components (a_x, a_y, a_t),
/// each term in its own exterior radial gauge.  t_raw lets callers
/// differentiate across the branch cut of the t-linear part.
inline Vec3 connection_cartesian(const AbelianMonopole& m, Complex z, double t_raw, double tol) {
    Vec3 a{0.0, 0.0, m.b};
    for (const auto& term : m.terms) {
        if (term.kind != DiracKind::Periodic)
            throw Error(ErrorKind::InvalidData, "connection_cartesian: Euclidean terms have no radial gauge here");
        const Complex w = z - term.center.z();
        const double r = std::abs(w);
        if (r < detail::kRadialGaugeMinR) throw Error(ErrorKind::OutOfRegime, "connection_cartesian: r < 2");
        const double ath = term.charge * detail::radial_gauge_a_theta_unit(r, t_raw, term.center.t(), tol);
        // dtheta_j = (-y dx + x dy)/r^2 in coordinates centred at the term
        a[0] += -ath * w.imag() / (r * r);
        a[1] += ath * w.real() / (r * r);
    }
    return a;
}

// ---- holonomy ---------------------------------------------------------------

namespace detail {

// theta_q(z) recovered as the arc integral, from the theta_q = 0 ray to z,
// of the flux of grad G integrated over the circle fibre.
inline double holonomy_angle_integral(const CirclePoint3& center, Complex z, double tol) {
    const Complex w = z - center.z();
    const double r = std::abs(w);
    const double target = std::arg(w);
    if (target == 0.0) return 0.0;
    // the t-modes of grad G decay like e^{-m r}; resolve them to ~1e-16
    const int kT = std::max(32, static_cast<int>(std::ceil(37.0 / r)));
    const auto gl = num::gauss_legendre(24);
    num::CompensatedSum acc;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double ang = 0.5 * target * (1.0 + gl.nodes[i]);
        const Complex c = center.z() + std::polar(r, ang);
        const double cdx = -r * std::sin(ang);
        const double cdy = r * std::cos(ang);
        num::CompensatedSum inner;
        for (int j = 0; j < kT; ++j) {
            const CirclePoint3 pt(c, center.t() + kTwoPi * j / kT);
            const auto g = green_eval(pt, center, tol);
            inner += g.grad[0] * cdy - g.grad[1] * cdx;
        }
        acc += gl.weights[i] * 0.5 * target * inner.value() * (kTwoPi / kT);
    }
    return acc.value();
}

}  // namespace detail

/// exp(-i sum_j k_j theta_j(z) - 2 pi i b) from the periodic terms, with each
/// theta_j obtained by integrating the field rather than taken from arg().
inline Complex holonomy(const AbelianMonopole& m, Complex z, double tol) {
    double phase = 0.0;
    for (const auto& term : m.terms) {
        if (term.kind != DiracKind::Periodic) continue;
        if (std::abs(z - term.center.z()) == 0.0) throw Error(ErrorKind::SingularPoint, "holonomy: z on an axis");
        phase += term.charge * detail::holonomy_angle_integral(term.center, z, tol);
    }
    // int_0^{2pi} a_t dt with a_t = b in the exterior chart
    constexpr int kT = 16;
    num::CompensatedSum at;
    for (int j = 0; j < kT; ++j) at += m.b * (kTwoPi / kT);
    phase += at.value();
    return std::polar(1.0, -phase);
}

/// Same quantity with theta_j taken as the principal argument.
inline Complex holonomy_closed_form(const AbelianMonopole& m, Complex z) {
    double phase = kTwoPi * m.b;
    for (const auto& term : m.terms)
        if (term.kind == DiracKind::Periodic) phase += term.charge * std::arg(z - term.center.z());
    return std::polar(1.0, -phase);
}

/// Net change of arg(holonomy) / 2pi as z runs once round |z| = radius.
inline long holonomy_winding(const AbelianMonopole& m, double radius, int samples, double tol) {
    double total = 0.0;
    double prev = std::arg(holonomy(m, radius, tol));
    for (int i = 1; i <= samples; ++i) {
        const double cur = std::arg(holonomy(m, std::polar(radius, kTwoPi * i / samples), tol));
        double step = cur - prev;
        step -= kTwoPi * std::round(step / kTwoPi);
        total += step;
        prev = cur;
    }
    return std::lround(total / kTwoPi);
}

// ---- asymptotics and scaling -------------------------------------------------

/// Two-term expansion of a single periodic term about a shifted centre,
/// valid for |z| >= 2 |z0|.
inline FieldSample translated_asymptotics(const AbelianMonopole& m, const CirclePoint3& p) {
    if (m.terms.size() != 1 || m.terms[0].kind != DiracKind::Periodic)
        throw Error(ErrorKind::InvalidData, "translated_asymptotics: needs exactly one periodic term");
    const auto& term = m.terms[0];
    const Complex z0 = term.center.z();
    const Complex z = p.z();
    if (std::abs(z) == 0.0 || std::abs(z) < 2.0 * std::abs(z0))
        throw Error(ErrorKind::OutOfRegime, "translated_asymptotics: |z| < 2|z0|");
    const double k = term.charge;
    const Complex w = z0 / z;
    FieldSample s;
    s.higgs = m.v + k * (std::log(std::abs(z)) - w.real()) / kTwoPi;
    s.a_theta = k * (-p.t() + term.center.t() + kPi) / kTwoPi;
    s.a_t = m.b - k * w.imag() / kTwoPi;
    return s;
}

/// Evaluator for the pulled-back pair under x -> x / lambda; the circle of
/// the rescaled space has period 2 pi lambda, so points are raw (x, y, t).
class RescaledMonopole {
public:
    RescaledMonopole(AbelianMonopole m, double lambda) : m_(std::move(m)), lambda_(lambda) {
        if (!(lambda > 0.0)) throw Error(ErrorKind::Domain, "rescale: lambda > 0 required");
    }
    double lambda() const { return lambda_; }
    double higgs(const Vec3& x, double tol) const {
        const CirclePoint3 p(x[0] / lambda_, x[1] / lambda_, x[2] / lambda_);
        return permon::higgs(m_, p, tol * lambda_) / lambda_;
    }

private:
    AbelianMonopole m_;
    double lambda_;
};

inline RescaledMonopole rescale(const AbelianMonopole& m, double lambda) { return {m, lambda}; }

// ---- Bogomolny residual -------------------------------------------------------

/// Box in cylindrical coordinates about the z = 0 axis.
struct CylBox {
    double r0, r1;
    double th0, th1;
    double t0, t1;
};

/// max over grid nodes (spacing h in r, t; angular spacing h radians) of
/// |curl a - grad phi| with second-order central differences.
inline double bogomolny_residual(const AbelianMonopole& m, const CylBox& box, double h, double tol = 1e-13) {
    if (!(h > 0.0)) throw Error(ErrorKind::Domain, "bogomolny_residual: h > 0 required");
    if (box.r0 - h <= 0.0) throw Error(ErrorKind::Domain, "bogomolny_residual: box must stay off the axis");
    const int nr = static_cast<int>(std::floor((box.r1 - box.r0) / h + 1e-9)) + 1;
    const int nth = static_cast<int>(std::floor((box.th1 - box.th0) / h + 1e-9)) + 1;
    const int nt = static_cast<int>(std::floor((box.t1 - box.t0) / h + 1e-9)) + 1;

    for (const auto& term : m.terms) {
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nth; ++j)
                for (int l = 0; l < nt; ++l) {
                    const double r = box.r0 + i * h;
                    const double th = box.th0 + j * h;
                    const CirclePoint3 node(std::polar(r, th), box.t0 + l * h);
                    if (distance(node, term.center) < 4.0 * h * std::max(1.0, r))
                        throw Error(ErrorKind::RegionTooClose, "bogomolny_residual: center within 4h of the grid");
                }
    }

    // cylindrical components (a_r, a_theta coefficient, a_t) and phi at raw (r, th, t)
    struct Fields {
        double ar, ath, at, phi;
    };
    auto fields = [&](double r, double th, double t) {
        const Complex z = std::polar(r, th);
        const Vec3 a = m.terms.empty() ? Vec3{0.0, 0.0, m.b} : connection_cartesian(m, z, t, tol);
        const double c = std::cos(th);
        const double s = std::sin(th);
        return Fields{a[0] * c + a[1] * s, r * (-a[0] * s + a[1] * c), a[2], higgs(m, CirclePoint3(z, t), tol)};
    };

    double worst = 0.0;
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nth; ++j)
            for (int l = 0; l < nt; ++l) {
                const double r = box.r0 + i * h;
                const double th = box.th0 + j * h;
                const double t = box.t0 + l * h;
                const Fields rp = fields(r + h, th, t), rm = fields(r - h, th, t);
                const Fields qp = fields(r, th + h, t), qm = fields(r, th - h, t);
                const Fields tp = fields(r, th, t + h), tm = fields(r, th, t - h);
                const double i2h = 0.5 / h;
                const double curl_r = ((qp.at - qm.at) * i2h - (tp.ath - tm.ath) * i2h) / r;
                const double curl_th = (tp.ar - tm.ar) * i2h - (rp.at - rm.at) * i2h;
                const double curl_t = ((rp.ath - rm.ath) * i2h - (qp.ar - qm.ar) * i2h) / r;
                const double gr = (rp.phi - rm.phi) * i2h;
                const double gth = (qp.phi - qm.phi) * i2h / r;
                const double gt = (tp.phi - tm.phi) * i2h;
                const double e = std::sqrt((curl_r - gr) * (curl_r - gr) + (curl_th - gth) * (curl_th - gth) +
                                           (curl_t - gt) * (curl_t - gt));
                worst = std::max(worst, e);
            }
    return worst;
}

/// CSV rows "r,theta,t,higgs,a_theta,a_t" for a single periodic term.
inline void write_field_csv(std::ostream& os, const AbelianMonopole& m, const std::vector<Vec3>& cyl_points, double tol) {
    const auto old = os.precision(17);
    os << "r,theta,t,higgs,a_theta,a_t\n";
    for (const auto& c : cyl_points) {
        const CirclePoint3 p(std::polar(c[0], c[1]), c[2]);
        const auto s = connection_radial_gauge(m, p, tol);
        os << c[0] << ',' << c[1] << ',' << p.t() << ',' << s.higgs << ',' << s.a_theta << ',' << s.a_t << '\n';
    }
    os.precision(old);
}

}  // namespace permon
