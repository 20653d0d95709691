#pragma once

// Independent reference computations used by the unit tests, the acceptance
// binary and `permon verify`.  None of these share code paths with the
// production kernels they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "permon/specfn.hpp"

namespace permon::oracle {

// Trapezoid rule for int_0^inf e^{-x cosh s} cosh(nu s) ds.  The integrand
// is analytic in a strip, so the rule converges geometrically in 1/h.
inline double bessel_k_quad(int nu, double x, double h = 0.01) {
    long double sum = 0.5L * std::exp(-(long double)x);
    for (int i = 1;; ++i) {
        const long double s = i * (long double)h;
        const long double term = std::exp(-(long double)x * std::cosh(s)) * std::cosh(nu * s);
        sum += term;
        if (term < 1e-40L * sum) break;
    }
    return static_cast<double>(sum * h);
}

inline double bessel_i_series(int nu, double x) {
    const double y = 0.25 * x * x;
    double term = nu == 0 ? 1.0 : 0.5 * x;
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= y / (double(k) * (k + nu));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

// gamma from H_n - log n = gamma + 1/(2n) - 1/(12 n^2) + ..., Richardson
// extrapolation over n = 16, 32, ..., 16*2^(levels-1).
inline double euler_gamma_richardson(int levels = 8) {
    std::vector<std::vector<long double>> T(levels);
    for (int i = 0; i < levels; ++i) {
        const long n = 16L << i;
        long double h = 0.0L;
        for (long k = n; k >= 1; --k) h += 1.0L / k;
        T[i].push_back(h - std::log((long double)n));
        for (int j = 1; j <= i; ++j) {
            const long double f = std::ldexp(1.0L, j);
            T[i].push_back((f * T[i][j - 1] - T[i - 1][j - 1]) / (f - 1.0L));
        }
    }
    return static_cast<double>(T[levels - 1][levels - 1]);
}

inline constexpr double kEulerGammaLiteral = 0.57721566490153286060651209;

// Direct long-double image sum, partner images m and 1-m paired around t=pi
// is not assumed: just a plain symmetric sum plus the analytic tail of the
// 1/m^3 leading term.  Slow but simple.
inline double green_image_reference(double r, double t, long M) {
    const long double a0 = (std::log(4.0L * std::numbers::pi_v<long double>) - std::numbers::egamma_v<long double>) /
                           std::numbers::pi_v<long double>;
    const long double tp = 2.0L * std::numbers::pi_v<long double>;
    long double s = 0.0L;
    for (long m = M; m >= 1; --m) {
        const long double dm = t - tp * m;
        const long double dp = t + tp * m;
        s += 1.0L / std::sqrt(r * (long double)r + dm * dm) + 1.0L / std::sqrt(r * (long double)r + dp * dp) -
             2.0L / (tp * m);
    }
    s += 1.0L / std::sqrt((long double)r * r + (long double)t * t) - a0;
    return static_cast<double>(-0.5L * s);
}

// Reducible subsets via the un-doubled centre equation: sum_S p equals one of
// the two half-preimages of (sum p + k_inf q)/2 on the circle.  Recursive
// enumeration, raw (unreduced) angles, independent of the production code.
inline std::vector<std::vector<int>> reducible_two_branch(const std::vector<std::array<double, 3>>& points, int k_inf,
                                                          const std::array<double, 3>& q, double tol) {
    const int n = static_cast<int>(points.size());
    if ((k_inf + n) % 2 != 0) return {};
    const int k = (k_inf + n) / 2;
    std::array<double, 3> half{0.5 * k_inf * q[0], 0.5 * k_inf * q[1], 0.5 * k_inf * q[2]};
    for (const auto& p : points)
        for (int c = 0; c < 3; ++c) half[c] += 0.5 * p[c];
    const double two_pi = 2.0 * std::acos(-1.0);
    auto circle_close = [&](double a, double b) {
        const double d = std::remainder(a - b, two_pi);
        return std::abs(d) <= 0.5 * tol;
    };
    std::vector<std::vector<int>> out;
    std::vector<int> chosen;
    auto rec = [&](auto&& self, int next) -> void {
        if (static_cast<int>(chosen.size()) == k) {
            double sx = 0.0, sy = 0.0, st = 0.0;
            for (int i : chosen) {
                sx += points[i][0];
                sy += points[i][1];
                st += points[i][2];
            }
            if (std::abs(sx - half[0]) > 0.5 * tol || std::abs(sy - half[1]) > 0.5 * tol) return;
            if (circle_close(st, half[2]) || circle_close(st, half[2] + 0.5 * two_pi)) out.push_back(chosen);
            return;
        }
        for (int i = next; i < n; ++i) {
            chosen.push_back(i);
            self(self, i + 1);
            chosen.pop_back();
        }
    };
    if (k <= n) rec(rec, 0);
    return out;
}

}  // namespace permon::oracle
