#pragma once

// Modified Bessel functions K0, K1 and the regularization constants of the
// periodic Green's function image series.
//
// K0/K1 use two regimes:
//   x < 2  : ascending series in (x/2)^2 (converges for all x, cancellation
//            between the log and regular parts stays below a factor ~20 here)
//   x >= 2 : Temme's continued fraction (Steed's algorithm) for the scaled
//            functions e^x K0, e^x K1, which converges in <100 steps.
// Both give relative error ~1e-15 on [1e-6, 700].

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "permon/error.hpp"

namespace permon {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Certified enclosure [lo, hi] of a computed quantity.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    static Interval around(double value, double radius) { return {value - radius, value + radius}; }
    double mid() const { return 0.5 * (lo + hi); }
    double radius() const { return 0.5 * (hi - lo); }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Euler-Mascheroni constant.
constexpr double euler_gamma() noexcept { return std::numbers::egamma; }

namespace detail {

struct BesselPair {
    double k0;
    double k1;
};

inline BesselPair bessel_k01_series(double x) {
    const double y = 0.25 * x * x;

    // K0 = -(log(x/2)+g) I0 + sum_{k>=1} H_k y^k/(k!)^2
    // K1 = 1/x + log(x/2) I1 - (x/4) sum_{k>=0} [psi(k+1)+psi(k+2)] y^k/(k!(k+1)!)
    double t0 = 1.0;  // y^k/(k!)^2
    double t1 = 1.0;  // y^k/(k!(k+1)!)
    double harmonic = 0.0;  // H_k
    double i0 = 1.0;
    double s0 = 0.0;
    double i1 = 1.0;
    double s1 = 1.0 - 2.0 * euler_gamma();
    for (int k = 1; k < 64; ++k) {
        t0 *= y / (double(k) * k);
        t1 *= y / (double(k) * (k + 1));
        harmonic += 1.0 / k;
        i0 += t0;
        s0 += harmonic * t0;
        i1 += t1;
        s1 += (2.0 * (harmonic - euler_gamma()) + 1.0 / (k + 1)) * t1;
        if (t0 < 1e-18 * i0) break;
    }
    i1 *= 0.5 * x;
    const double log_half = std::log(0.5 * x);
    return {-(log_half + euler_gamma()) * i0 + s0, 1.0 / x + log_half * i1 - 0.25 * x * s1};
}

// Returns e^x K0(x), e^x K1(x) for x >= 2.
inline BesselPair bessel_k01_scaled_cf(double x) {
    constexpr double eps = 1e-17;
    constexpr int max_iter = 10000;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i < max_iter; ++i) {
        a -= 2 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < eps) break;
    }
    h *= a1;
    const double k0s = std::sqrt(kPi / (2.0 * x)) / s;
    return {k0s, k0s * (x + 0.5 - h) / x};
}

inline void require_positive(double x, const char* name) {
    if (!(x > 0.0)) throw Error(ErrorKind::Domain, std::string(name) + " requires x > 0");
}

}  // namespace detail

/// Returns {K0(x), K1(x)}; both underflow to 0 once e^{-x} does.
inline std::pair<double, double> bessel_k01(double x) {
    detail::require_positive(x, "bessel_k01");
    if (x < 2.0) {
        const auto p = detail::bessel_k01_series(x);
        return {p.k0, p.k1};
    }
    const auto p = detail::bessel_k01_scaled_cf(x);
    const double e = std::exp(-x);
    return {p.k0 * e, p.k1 * e};
}

inline double bessel_k0(double x) { return bessel_k01(x).first; }
inline double bessel_k1(double x) { return bessel_k01(x).second; }

/// e^x K0(x); finite for every x > 0.
inline double bessel_k0_scaled(double x) {
    detail::require_positive(x, "bessel_k0_scaled");
    if (x < 2.0) return std::exp(x) * detail::bessel_k01_series(x).k0;
    return detail::bessel_k01_scaled_cf(x).k0;
}

inline double bessel_k1_scaled(double x) {
    detail::require_positive(x, "bessel_k1_scaled");
    if (x < 2.0) return std::exp(x) * detail::bessel_k01_series(x).k1;
    return detail::bessel_k01_scaled_cf(x).k1;
}

/// Relative error budget of bessel_k0/k1 (both regimes), used for enclosures.
inline constexpr double kBesselRelErr = 1e-14;

inline Interval bessel_k0_enclosure(double x) {
    const double v = bessel_k0(x);
    return Interval::around(v, kBesselRelErr * std::abs(v) + std::numeric_limits<double>::denorm_min());
}

inline Interval bessel_k1_enclosure(double x) {
    const double v = bessel_k1(x);
    return Interval::around(v, kBesselRelErr * std::abs(v) + std::numeric_limits<double>::denorm_min());
}

/// a_0 = (log 4pi - gamma)/pi, a_m = 1/(2 m pi) for m >= 1.
inline std::vector<double> a_constants(int m_max) {
    if (m_max < 0) throw Error(ErrorKind::Domain, "a_constants requires m_max >= 0");
    std::vector<double> a(static_cast<std::size_t>(m_max) + 1);
    a[0] = (std::log(4.0 * kPi) - euler_gamma()) / kPi;
    for (int m = 1; m <= m_max; ++m) a[static_cast<std::size_t>(m)] = 1.0 / (2.0 * m * kPi);
    return a;
}

inline double a_zero() { return (std::log(4.0 * kPi) - euler_gamma()) / kPi; }

}  // namespace permon
