#pragma once

// Periodic Green's function on R^2 x S^1 (period 2pi in t),
//
//   G(z,t) = -1/2 sum_m [ (r^2 + (t - 2 m pi)^2)^{-1/2} - a_|m| ],
//
// normalised so that G ~ a0/2 - 1/(2 rho) near the pole and
// G ~ log(r)/(2 pi) for large r.  Three evaluation routes:
//
//   ImageSum       direct lattice sum, |m| <= M, tail O(1/M^2)
//   FourierBessel  (1/2pi) log r - (1/pi) sum_{m>=1} K0(m r) cos(m t)
//   Multipole      a0/2 - 1/(2 rho), model error C2 rho^2
//
// green_eval() dispatches between them for a requested absolute tolerance.

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "permon/error.hpp"
#include "permon/geometry.hpp"
#include "permon/numeric.hpp"
#include "permon/specfn.hpp"

namespace permon {

enum class GreenRegime { ImageSum, FourierBessel, Multipole };

constexpr std::string_view to_string(GreenRegime r) noexcept {
    switch (r) {
        case GreenRegime::ImageSum: return "ImageSum";
        case GreenRegime::FourierBessel: return "FourierBessel";
        case GreenRegime::Multipole: return "Multipole";
    }
    return "?";
}

struct GreenEval {
    double value = 0.0;
    Vec3 grad{0.0, 0.0, 0.0};  // (d/dx, d/dy, d/dt)
    double trunc_bound = 0.0;
    GreenRegime regime = GreenRegime::ImageSum;
};

/// Calibrated bound |G - (a0/2 - 1/(2 rho))| <= C2 rho^2 for rho < pi/2.
/// The measured supremum of the ratio over that ball is 0.00512.
inline constexpr double kMultipoleC2 = 0.006;
/// Same for the gradient: |grad G - grad(model)| <= C2' rho.
inline constexpr double kMultipoleGradC2 = 0.03;

inline constexpr double kRhoSwitch = 0.1;
inline constexpr double kRSwitch = 0.5;
/// Below this tolerance the floating-point rounding of the sums dominates.
inline constexpr double kMinTolerance = 1e-14;
inline constexpr double kMultipoleMinTolerance = 1e-12;

namespace detail {

inline void require_distinct(double rho) {
    if (rho == 0.0) throw Error(ErrorKind::SingularPoint, "green: p coincides with q");
}

// Bound on sum_{m>M} |f_m| for the paired image terms (see image_pair_term).
// Valid when the Taylor remainder estimate applies, i.e. |x_pm| <= 1/2 for
// every m > M; returns +inf otherwise.
inline double image_tail_bound(double rho2, double t, int M) {
    const double u = kTwoPi * (M + 1.0);
    const double q = 2.0 * std::abs(t) / u + rho2 / (u * u);
    if (q > 0.5) return std::numeric_limits<double>::infinity();
    const double w = 2.0 * std::abs(t) + rho2 / u;
    const double numer = rho2 + 4.25 * w * w;
    return 0.5 * numer / (2.0 * kTwoPi * kTwoPi * kTwoPi * double(M) * double(M));
}

// 1/sqrt(u^2+a-) + 1/sqrt(u^2+a+) - 2/u without cancellation, where
// a-+ = -+ 2ut + rho^2 are the offsets of the m and -m images.
inline double image_pair_term(double u, double t, double rho2) {
    const double am = -2.0 * u * t + rho2;
    const double ap = 2.0 * u * t + rho2;
    const double s1 = std::sqrt(u * u + am);
    const double s2 = std::sqrt(u * u + ap);
    return -am / (u * s1 * (u + s1)) - ap / (u * s2 * (u + s2));
}

}  // namespace detail

/// Symmetric lattice sum over |m| <= M.
inline GreenEval green_image_sum(const CirclePoint3& p, const CirclePoint3& q, int M) {
    if (M < 1) throw Error(ErrorKind::Domain, "green_image_sum: M >= 1 required");
    const Vec3 d = relative_coordinates(p, q);
    const double r2 = d[0] * d[0] + d[1] * d[1];
    const double t = d[2];
    const double rho2 = r2 + t * t;
    detail::require_distinct(rho2);

    num::CompensatedSum val;
    num::CompensatedSum gr;  // sum of 1/rho_m^3, multiplies x and y
    num::CompensatedSum gt;
    for (int m = M; m >= 1; --m) {
        const double u = kTwoPi * m;
        val += detail::image_pair_term(u, t, rho2);
        const double dm = t - u;
        const double dp = t + u;
        const double rm = std::sqrt(r2 + dm * dm);
        const double rp = std::sqrt(r2 + dp * dp);
        const double im3 = 1.0 / (rm * rm * rm);
        const double ip3 = 1.0 / (rp * rp * rp);
        gr += im3 + ip3;
        gt += dm * im3 + dp * ip3;
    }
    const double rho = std::sqrt(rho2);
    val += 1.0 / rho - a_zero();
    gr += 1.0 / (rho2 * rho);
    gt += t / (rho2 * rho);

    GreenEval out;
    out.value = -0.5 * val.value();
    out.grad = {0.5 * d[0] * gr.value(), 0.5 * d[1] * gr.value(), 0.5 * gt.value()};
    out.trunc_bound = detail::image_tail_bound(rho2, t, M);
    out.regime = GreenRegime::ImageSum;
    return out;
}

/// Fourier-Bessel expansion with modes 1..M.
inline GreenEval green_fourier_bessel(const CirclePoint3& p, const CirclePoint3& q, int M) {
    if (M < 1) throw Error(ErrorKind::Domain, "green_fourier_bessel: M >= 1 required");
    const Vec3 d = relative_coordinates(p, q);
    const double r = std::hypot(d[0], d[1]);
    if (r == 0.0) throw Error(ErrorKind::SingularPoint, "green_fourier_bessel: r = 0");
    const double t = d[2];

    num::CompensatedSum val;
    num::CompensatedSum dr;
    num::CompensatedSum dt;
    for (int m = M; m >= 1; --m) {
        const auto [k0, k1] = bessel_k01(m * r);
        if (k0 == 0.0 && k1 == 0.0) continue;
        const double c = std::cos(m * t);
        const double s = std::sin(m * t);
        val += k0 * c;
        dr += m * k1 * c;
        dt += m * k0 * s;
    }
    GreenEval out;
    out.value = std::log(r) / kTwoPi - val.value() / kPi;
    const double g_r = 1.0 / (kTwoPi * r) + dr.value() / kPi;
    out.grad = {g_r * d[0] / r, g_r * d[1] / r, dt.value() / kPi};
    out.trunc_bound = bessel_k0(M * r) / (kPi * (1.0 - std::exp(-r)));
    out.regime = GreenRegime::FourierBessel;
    return out;
}

/// Leading multipole model a0/2 - 1/(2 rho); valid for rho < pi/2.
inline GreenEval green_multipole(const CirclePoint3& p, const CirclePoint3& q) {
    const Vec3 d = relative_coordinates(p, q);
    const double rho2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    detail::require_distinct(rho2);
    const double rho = std::sqrt(rho2);
    if (rho >= 0.5 * kPi) throw Error(ErrorKind::OutOfRegime, "green_multipole: rho >= pi/2");
    const double c = 1.0 / (2.0 * rho2 * rho);
    GreenEval out;
    out.value = 0.5 * a_zero() - 0.5 / rho;
    out.grad = {c * d[0], c * d[1], c * d[2]};
    out.trunc_bound = kMultipoleC2 * rho2;
    out.regime = GreenRegime::Multipole;
    return out;
}

/// Smallest Fourier-Bessel order whose tail bound is <= tol.
inline int fourier_bessel_order(double r, double tol) {
    const double geom = kPi * (1.0 - std::exp(-r));
    int M = 1;
    while (bessel_k0(M * r) > tol * geom) {
        if (++M > 100000) throw Error(ErrorKind::ToleranceUnreachable, "fourier_bessel_order: M too large");
    }
    return M;
}

/// Smallest image-sum order (up to a factor ~1.1) whose tail bound is <= tol.
inline int image_sum_order(double rho2, double t, double tol) {
    constexpr int kMaxM = 50'000'000;
    const double w = 2.0 * std::abs(t) + rho2;
    double guess = std::sqrt((rho2 + 4.25 * w * w) / (4.0 * kTwoPi * kTwoPi * kTwoPi * tol));
    int M = std::max(1, static_cast<int>(std::ceil(guess)));
    while (detail::image_tail_bound(rho2, t, M) > tol) {
        if (M > kMaxM) throw Error(ErrorKind::ToleranceUnreachable, "image_sum_order: M too large");
        M = static_cast<int>(std::ceil(M * 1.1)) + 1;
    }
    return M;
}

/// Regime dispatcher: trunc_bound <= tol on return.
inline GreenEval green_eval(const CirclePoint3& p, const CirclePoint3& q, double tol) {
    if (!(tol > 0.0)) throw Error(ErrorKind::Domain, "green_eval: tol > 0 required");
    const Vec3 d = relative_coordinates(p, q);
    const double r2 = d[0] * d[0] + d[1] * d[1];
    const double rho2 = r2 + d[2] * d[2];
    detail::require_distinct(rho2);
    const double rho = std::sqrt(rho2);
    const double r = std::sqrt(r2);

    if (rho < kRhoSwitch) {
        if (tol < kMultipoleMinTolerance)
            throw Error(ErrorKind::ToleranceUnreachable, "green_eval: tol below multipole floor");
        if (kMultipoleC2 * rho2 <= tol) return green_multipole(p, q);
    }
    if (tol < kMinTolerance) throw Error(ErrorKind::ToleranceUnreachable, "green_eval: tol below rounding floor");
    if (r > kRSwitch) return green_fourier_bessel(p, q, fourier_bessel_order(r, tol));
    return green_image_sum(p, q, image_sum_order(rho2, d[2], tol));
}

/// max(|d_t G(r,0)|, |d_t G(r,pi)|) from the Fourier-Bessel gradient.
inline double green_dt_zero_check(double r) {
    if (!(r > 0.0)) throw Error(ErrorKind::Domain, "green_dt_zero_check: r > 0 required");
    const int M = fourier_bessel_order(r, 1e-16);
    const CirclePoint3 q;
    const double g0 = green_fourier_bessel(CirclePoint3(r, 0.0, 0.0), q, M).grad[2];
    const double g1 = green_fourier_bessel(CirclePoint3(r, 0.0, kPi), q, M).grad[2];
    return std::max(std::abs(g0), std::abs(g1));
}

/// Same quantity through the lattice sum with M images on each side.
inline double green_dt_zero_check_image(double r, int M) {
    if (!(r > 0.0)) throw Error(ErrorKind::Domain, "green_dt_zero_check_image: r > 0 required");
    const CirclePoint3 q;
    const double g0 = green_image_sum(CirclePoint3(r, 0.0, 0.0), q, M).grad[2];
    const double g1 = green_image_sum(CirclePoint3(r, 0.0, kPi), q, M).grad[2];
    return std::max(std::abs(g0), std::abs(g1));
}

// ---- batch I/O ------------------------------------------------------------

/// Reads whitespace-separated "x y t" records, one per line; blank lines and
/// lines starting with '#' are skipped.
inline std::vector<CirclePoint3> read_points(std::istream& in) {
    std::vector<CirclePoint3> pts;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        double x = 0.0;
        double y = 0.0;
        double t = 0.0;
        if (!(ls >> x >> y >> t))
            throw Error(ErrorKind::InvalidData, "read_points: malformed record on line " + std::to_string(lineno));
        pts.emplace_back(x, y, t);
    }
    return pts;
}

inline std::vector<GreenEval> green_batch(const std::vector<CirclePoint3>& pts, const CirclePoint3& q, double tol) {
    std::vector<GreenEval> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = green_eval(pts[i], q, tol);
    return out;
}

inline void write_green_csv(std::ostream& os, const std::vector<CirclePoint3>& pts, const std::vector<GreenEval>& evals) {
    const auto old_prec = os.precision(17);
    os << "x,y,t,value,gx,gy,gt,bound,regime\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& e = evals[i];
        os << pts[i].x() << ',' << pts[i].y() << ',' << pts[i].t() << ',' << e.value << ',' << e.grad[0] << ','
           << e.grad[1] << ',' << e.grad[2] << ',' << e.trunc_bound << ',' << to_string(e.regime) << '\n';
    }
    os.precision(old_prec);
}

}  // namespace permon
