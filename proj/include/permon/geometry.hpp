#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "permon/specfn.hpp"

namespace permon {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;

/// Reduces an angle to [0, 2pi).
inline double reduce_angle(double t) {
    double r = std::fmod(t, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

/// Representative of (a - b) mod 2pi in (-pi, pi].
inline double circle_difference(double a, double b) {
    double d = reduce_angle(a - b);
    if (d > kPi) d -= kTwoPi;
    return d;
}

/// A point (z, t) of R^2 x R/2piZ; t is stored reduced to [0, 2pi).
class CirclePoint3 {
public:
    CirclePoint3() = default;
    CirclePoint3(Complex z, double t) : z_(z), t_(reduce_angle(t)) {}
    CirclePoint3(double x, double y, double t) : CirclePoint3(Complex(x, y), t) {}

    Complex z() const { return z_; }
    double x() const { return z_.real(); }
    double y() const { return z_.imag(); }
    double t() const { return t_; }

    friend bool operator==(const CirclePoint3&, const CirclePoint3&) = default;

private:
    Complex z_{0.0, 0.0};
    double t_ = 0.0;
};

/// Displacement of p relative to q: (x, y, t) with t in (-pi, pi].
inline Vec3 relative_coordinates(const CirclePoint3& p, const CirclePoint3& q) {
    const Complex dz = p.z() - q.z();
    return {dz.real(), dz.imag(), circle_difference(p.t(), q.t())};
}

/// Product-metric distance with circle distance min(|dt|, 2pi - |dt|).
inline double distance(const CirclePoint3& p, const CirclePoint3& q) {
    const Vec3 d = relative_coordinates(p, q);
    return std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
}

}  // namespace permon
