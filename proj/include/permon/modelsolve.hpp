#pragma once

// Separated-variable model problems near a singular point and on the
// exterior of a disc.
//
// Sign convention: Delta is the geometer's Laplacian d^*d (non-negative), so
// on R^2 it is -(u'' + u'/r - n^2 u / r^2) on the angular mode n.
//
// The cylinder and diagonal exterior solvers use exponentially fitted
// three-point schemes that are exact on the homogeneous solutions; the
// source term is then the only O(h^2) error.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "permon/error.hpp"
#include "permon/numeric.hpp"
#include "permon/specfn.hpp"
#include "permon/spectral.hpp"

namespace permon {

using Source = std::function<double(double)>;

inline constexpr double kExceptionalGuard = 1e-9;

/// -u'' + u' + lambda u = f on tau >= T, u(T) = phi.
struct CylinderProblem {
    double lambda = 0.0;
    double T = 0.0;
    Source f;  // empty means zero
    double phi = 1.0;
    double delta = 0.0;
};

struct ModelSolution {
    std::vector<double> x;  // tau, r as appropriate
    std::vector<double> u;
    double decay_rate = 0.0;  // fitted -d log|u| / dx over the tail
    double residual = 0.0;    // max residual of the standard central-difference operator
};

/// gamma^+(lambda) and gamma^-(lambda).
inline std::pair<double, double> indicial_roots(double lambda) {
    const double root = std::sqrt(0.25 + lambda);
    return {-0.5 + root, -0.5 - root};
}

namespace detail {

// slope of log|u| from the point where |u| first drops within a factor 10
// of its final value
inline double tail_decay_rate(const std::vector<double>& x, const std::vector<double>& u) {
    const std::size_t n = u.size();
    if (n < 3 || u.back() == 0.0) return std::numeric_limits<double>::quiet_NaN();
    const double end = std::abs(u.back());
    std::size_t i0 = n / 2;
    for (std::size_t i = 0; i + 2 < n; ++i) {
        if (std::abs(u[i]) <= 10.0 * end) {
            i0 = i;
            break;
        }
    }
    std::vector<double> xs, ys;
    for (std::size_t i = i0; i < n; ++i) {
        if (u[i] == 0.0) continue;
        xs.push_back(x[i]);
        ys.push_back(std::log(std::abs(u[i])));
    }
    return -num::fit_slope(xs, ys);
}

inline double eval(const Source& f, double x) { return f ? f(x) : 0.0; }

}  // namespace detail

inline void check_non_exceptional(double delta, double lambda) {
    const auto [gp, gm] = indicial_roots(lambda);
    if (std::abs(delta - gp) < kExceptionalGuard || std::abs(delta - gm) < kExceptionalGuard)
        throw Error(ErrorKind::ExceptionalWeight, "delta coincides with an indicial root");
}

inline ModelSolution cylinder_solve(const CylinderProblem& p, double mesh) {
    if (!(p.lambda >= 0.0)) throw Error(ErrorKind::Domain, "cylinder_solve: lambda >= 0 required");
    if (!(mesh > 0.0)) throw Error(ErrorKind::Domain, "cylinder_solve: mesh > 0 required");
    check_non_exceptional(p.delta, p.lambda);
    const auto [gp, gm] = indicial_roots(p.lambda);
    const double length = gp > 0.0 ? 20.0 / gp : 40.0;
    if (gp * mesh > 0.5 || length / mesh < 20.0) throw Error(ErrorKind::UnderResolved, "cylinder_solve: mesh too coarse");
    const int N = static_cast<int>(std::ceil(length / mesh));
    const double h = length / N;

    const double rp = std::exp(-gp * h);
    const double rm = std::exp(-gm * h);
    // weight so the scheme is consistent with the operator on constants:
    // (1 - rp)(1 - rm) / lambda, continued to lambda = 0
    const double w = (p.lambda > 1e-12 ? -std::expm1(-gp * h) / p.lambda : h) * (1.0 - rm);

    ModelSolution s;
    s.x.resize(N + 1);
    for (int i = 0; i <= N; ++i) s.x[i] = p.T + i * h;

    // unknowns u_1..u_N
    std::vector<double> lo(N), di(N), up(N), rhs(N);
    for (int i = 1; i < N; ++i) {
        const int r = i - 1;
        lo[r] = rp * rm;
        di[r] = -(rp + rm);
        up[r] = 1.0;
        rhs[r] = w * detail::eval(p.f, s.x[i]);
    }
    rhs[0] -= rp * rm * p.phi;
    lo[N - 1] = -rp;
    di[N - 1] = 1.0;
    up[N - 1] = 0.0;
    rhs[N - 1] = 0.0;
    const auto sol = num::solve_tridiagonal(lo, di, up, rhs);
    s.u.resize(N + 1);
    s.u[0] = p.phi;
    std::copy(sol.begin(), sol.end(), s.u.begin() + 1);

    for (int i = 1; i < N; ++i) {
        const double r = -(s.u[i + 1] - 2 * s.u[i] + s.u[i - 1]) / (h * h) + (s.u[i + 1] - s.u[i - 1]) / (2 * h) +
                         p.lambda * s.u[i] - detail::eval(p.f, s.x[i]);
        s.residual = std::max(s.residual, std::abs(r));
    }
    s.decay_rate = detail::tail_decay_rate(s.x, s.u);
    return s;
}

/// e^{delta (tau - T)} u stays bounded on the tail iff delta is below the decay rate.
inline bool in_weighted_space(const ModelSolution& s, double delta) {
    if (std::all_of(s.u.begin(), s.u.end(), [](double v) { return v == 0.0; })) return true;
    return delta < s.decay_rate;
}

// ---- exterior problems --------------------------------------------------------

enum class Sector { DiagonalInvariant, Oscillatory, OffDiagonal };

struct ExteriorModeProblem {
    Sector sector = Sector::DiagonalInvariant;
    int mode = 0;  // angular mode (diagonal) or circle mode (oscillatory)
    double R = 1.0;
    double delta = -0.5;
    Source f;
    double phi = 0.0;
    double coercivity = 1.0;  // c with |Phi|^2 >= c, used by OffDiagonal
};

enum class FarField { Constant, PowerDecay, Exponential };

struct ExteriorSolution : ModelSolution {
    FarField far = FarField::Constant;
    double limit = 0.0;  // value at infinity (Constant)
};

/// Delta u = f on r >= R for the angular mode n, u(R) = phi, u bounded.
/// f must decay faster than r^{-2}; the tail beyond 10R enters only through
/// the far-field flux.
inline ExteriorSolution exterior_diagonal_solve(const ExteriorModeProblem& p, double mesh) {
    if (p.sector != Sector::DiagonalInvariant) throw Error(ErrorKind::InvalidData, "exterior_diagonal_solve: wrong sector");
    if (!(p.delta > -1.0 && p.delta < 0.0)) throw Error(ErrorKind::WeightOutOfRange, "exterior_diagonal_solve: delta not in (-1, 0)");
    if (!(p.R > 0.0)) throw Error(ErrorKind::Domain, "exterior_diagonal_solve: R > 0 required");
    if (!(mesh > 0.0)) throw Error(ErrorKind::Domain, "exterior_diagonal_solve: mesh > 0 required");
    const int n = std::abs(p.mode);
    // s = log r on [log R, log 10R]:  -u_ss + n^2 u = e^{2s} f
    const double s0 = std::log(p.R);
    const double len = std::log(10.0);
    const int N = std::max(4, static_cast<int>(std::ceil(len / mesh)));
    const double h = len / N;
    const double c = std::cosh(n * h);
    const double w = n == 0 ? -h * h : (2.0 - 2.0 * c) / double(n * n);
    auto g = [&](double s) { return std::exp(2.0 * s) * detail::eval(p.f, std::exp(s)); };

    ExteriorSolution out;
    out.x.resize(N + 1);
    for (int i = 0; i <= N; ++i) out.x[i] = std::exp(s0 + i * h);

    std::vector<double> lo(N), di(N), up(N), rhs(N);
    for (int i = 1; i < N; ++i) {
        lo[i - 1] = 1.0;
        di[i - 1] = -2.0 * c;
        up[i - 1] = 1.0;
        rhs[i - 1] = w * g(s0 + i * h);
    }
    rhs[0] -= p.phi;
    const double sN = s0 + len;
    if (n == 0) {
        // bounded branch: u_s(sN) = int_{sN}^inf g, and
        // u_N - u_{N-1} = h u_s(sN) + int_{s_{N-1}}^{sN} (sigma - s_{N-1}) g(sigma) dsigma
        const double flux = num::integrate(g, sN, sN + 20.0, 40, 20) + num::integrate(g, sN + 20.0, sN + 60.0, 40, 20);
        const double near = num::integrate([&](double x) { return (x - (sN - h)) * g(x); }, sN - h, sN, 1, 20);
        lo[N - 1] = -1.0;
        di[N - 1] = 1.0;
        rhs[N - 1] = h * flux + near;
    } else {
        lo[N - 1] = -std::exp(-n * h);
        di[N - 1] = 1.0;
        rhs[N - 1] = 0.0;
    }
    up[N - 1] = 0.0;
    const auto sol = num::solve_tridiagonal(lo, di, up, rhs);
    out.u.resize(N + 1);
    out.u[0] = p.phi;
    std::copy(sol.begin(), sol.end(), out.u.begin() + 1);

    for (int i = 1; i < N; ++i) {
        const double r = -(out.u[i + 1] - 2 * out.u[i] + out.u[i - 1]) / (h * h) + n * n * out.u[i] - g(s0 + i * h);
        out.residual = std::max(out.residual, std::abs(r));
    }
    if (n == 0) {
        // u(inf) = u(sN) + int_{sN}^inf u_s, with u_s(s) = int_s^inf g
        auto moment = [&](double s) { return (s - sN) * g(s); };
        out.limit = out.u.back() + num::integrate(moment, sN, sN + 20.0, 40, 20) +
                    num::integrate(moment, sN + 20.0, sN + 60.0, 40, 20);
        out.far = FarField::Constant;
        out.decay_rate = 0.0;
    } else {
        out.far = FarField::PowerDecay;
        std::vector<double> logs(out.x.size());
        for (std::size_t i = 0; i < out.x.size(); ++i) logs[i] = std::log(out.x[i]);
        out.decay_rate = detail::tail_decay_rate(logs, out.u);  // exponent n of r^{-n}
    }
    return out;
}

struct CoerciveReport {
    ExteriorSolution solution;
    double mu = 0.0;
    double energy_ratio = 0.0;  // (||u'||^2 + mu^2 ||u||^2) / ||f||^2, measure r dr
    double l2_norm = 0.0;
};

/// (Delta + mu^2) u = f on r >= R (radial profile), u(R) = phi, u decaying.
inline CoerciveReport exterior_coercive_solve(const ExteriorModeProblem& p, double mesh) {
    double mu2 = 0.0;
    if (p.sector == Sector::OffDiagonal) {
        if (!(p.coercivity > 0.0)) throw Error(ErrorKind::CoercivityNonPositive, "exterior_coercive_solve: c <= 0");
        mu2 = p.coercivity;
    } else if (p.sector == Sector::Oscillatory) {
        if (p.mode == 0) throw Error(ErrorKind::CoercivityNonPositive, "exterior_coercive_solve: oscillatory mode 0");
        mu2 = double(p.mode) * p.mode;
    } else {
        throw Error(ErrorKind::InvalidData, "exterior_coercive_solve: diagonal sector has no mass");
    }
    if (!(p.R > 0.0) || !(mesh > 0.0)) throw Error(ErrorKind::Domain, "exterior_coercive_solve: R, mesh > 0 required");
    const double mu = std::sqrt(mu2);
    const double rmax = p.R + std::max(10.0 * p.R, 40.0 / mu);
    const int N = static_cast<int>(std::ceil((rmax - p.R) / mesh));
    const double h = (rmax - p.R) / N;

    CoerciveReport rep;
    rep.mu = mu;
    auto& s = rep.solution;
    s.x.resize(N + 1);
    for (int i = 0; i <= N; ++i) s.x[i] = p.R + i * h;

    // -(1/r)(r u')' + mu^2 u = f, flux form; Robin u' = -kappa u at rmax
    const double kappa = mu * bessel_k1_scaled(mu * rmax) / bessel_k0_scaled(mu * rmax);
    std::vector<double> lo(N), di(N), up(N), rhs(N);
    for (int i = 1; i <= N; ++i) {
        const double r = s.x[i];
        const double a_lo = (r - 0.5 * h) / (r * h * h);
        const double a_hi = (r + 0.5 * h) / (r * h * h);
        lo[i - 1] = -a_lo;
        di[i - 1] = a_lo + a_hi + mu2;
        up[i - 1] = -a_hi;
        rhs[i - 1] = detail::eval(p.f, r);
        if (i == N) {
            // ghost u_{N+1} = u_{N-1} - 2 h kappa u_N
            lo[i - 1] = -(a_lo + a_hi);
            di[i - 1] = a_lo + a_hi + mu2 + 2.0 * h * kappa * a_hi;
            up[i - 1] = 0.0;
        }
    }
    rhs[0] += ((s.x[1] - 0.5 * h) / (s.x[1] * h * h)) * p.phi;
    const auto sol = num::solve_tridiagonal(lo, di, up, rhs);
    s.u.resize(N + 1);
    s.u[0] = p.phi;
    std::copy(sol.begin(), sol.end(), s.u.begin() + 1);

    double num_e = 0.0, den = 0.0, l2 = 0.0;
    for (int i = 0; i <= N; ++i) {
        const double wt = (i == 0 || i == N ? 0.5 : 1.0) * h * s.x[i];
        l2 += wt * s.u[i] * s.u[i];
        const double fi = detail::eval(p.f, s.x[i]);
        den += wt * fi * fi;
        if (i < N) {
            const double du = (s.u[i + 1] - s.u[i]) / h;
            num_e += h * (s.x[i] + 0.5 * h) * du * du;
        }
    }
    num_e += mu2 * l2;
    for (int i = 1; i < N; ++i) {
        const double r = s.x[i];
        const double res = -((r + 0.5 * h) * (s.u[i + 1] - s.u[i]) - (r - 0.5 * h) * (s.u[i] - s.u[i - 1])) / (r * h * h) +
                           mu2 * s.u[i] - detail::eval(p.f, r);
        s.residual = std::max(s.residual, std::abs(res));
    }
    rep.l2_norm = std::sqrt(l2);
    rep.energy_ratio = den > 0.0 ? num_e / den : 0.0;
    s.far = FarField::Exponential;
    // fit on sqrt(r) u, which decays like e^{-mu r} beyond the support of f
    std::vector<double> scaled(s.u.size());
    for (std::size_t i = 0; i < s.u.size(); ++i) scaled[i] = std::sqrt(s.x[i]) * s.u[i];
    s.decay_rate = detail::tail_decay_rate(s.x, scaled);
    return rep;
}

// ---- Poincare inequality and the weight omega ------------------------------------

inline double omega(double r) { return std::sqrt(1.0 + r * r); }

/// C = sqrt(2 + R^2) / R.
inline double poincare_constant(double R) { return std::sqrt(2.0 + R * R) / R; }

/// Radial profile with its derivative.
struct RadialProfile {
    std::function<double(double)> u;
    std::function<double(double)> du;
    double r_max;  // support is contained in [R, r_max]
};

/// ||omega^{-(delta+1)} u|| / ((C/|delta|) ||omega^{-delta} u'||) on r >= R.
inline double poincare_ratio(double R, double delta, const RadialProfile& prof) {
    // integrate in log r so long supports stay resolved
    auto lhs = [&](double s) {
        const double r = std::exp(s);
        const double v = std::pow(omega(r), -(delta + 1.0)) * prof.u(r);
        return v * v * r * r;
    };
    auto rhs = [&](double s) {
        const double r = std::exp(s);
        const double v = std::pow(omega(r), -delta) * prof.du(r);
        return v * v * r * r;
    };
    const int panels = 64 + static_cast<int>(8.0 * std::log(prof.r_max / R));
    const double a = num::integrate(lhs, std::log(R), std::log(prof.r_max), panels, 16);
    const double b = num::integrate(rhs, std::log(R), std::log(prof.r_max), panels, 16);
    if (b == 0.0) return a == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(a) / ((poincare_constant(R) / std::abs(delta)) * std::sqrt(b));
}

namespace detail {

// C^infinity step: 1 on (-inf, 0], 0 on [1, inf)
inline double smooth_step_down(double x) {
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / (1.0 - x));
    const double b = std::exp(-1.0 / x);
    return a / (a + b);
}

inline double smooth_step_down_deriv(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / (1.0 - x));
    const double b = std::exp(-1.0 / x);
    const double da = -a / ((1.0 - x) * (1.0 - x));
    const double db = b / (x * x);
    return (da * b - a * db) / ((a + b) * (a + b));
}

}  // namespace detail

/// u = omega^delta times a smooth cutoff falling from 1 to 0 as log r runs
/// over [log a, log b].  The cutoff costs O(1/log(b/a)) in the gradient norm
/// while the main term grows like delta^2 log(b/a).
inline RadialProfile extremal_profile(double delta, double a, double b) {
    const double L = std::log(b / a);
    RadialProfile p;
    p.u = [=](double r) { return std::pow(omega(r), delta) * detail::smooth_step_down(std::log(r / a) / L); };
    p.du = [=](double r) {
        const double w = omega(r);
        const double x = std::log(r / a) / L;
        return delta * std::pow(w, delta - 2.0) * r * detail::smooth_step_down(x) +
               std::pow(w, delta) * detail::smooth_step_down_deriv(x) / (r * L);
    };
    p.r_max = b;
    return p;
}

/// Random smooth profile supported in [R, r_max]: a random combination of
/// Gaussians times a cutoff; multiplied by (r - R) when it must vanish at R.
inline RadialProfile random_profile(double R, bool vanish_at_R, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const int terms = 1 + static_cast<int>(U(rng) * 4);
    const double span = R * (1.0 + 20.0 * U(rng)) + 2.0 * U(rng);
    const double r_max = R + span;
    const double cut0 = R + span * (0.3 + 0.6 * U(rng));
    std::vector<double> c(terms), m(terms), s(terms);
    for (int k = 0; k < terms; ++k) {
        c[k] = 2.0 * U(rng) - 1.0;
        m[k] = R + span * U(rng);
        s[k] = span * (0.03 + 0.5 * U(rng));
    }
    auto base = [=](double r) {
        double v = 0.0;
        for (int k = 0; k < terms; ++k) v += c[k] * std::exp(-0.5 * (r - m[k]) * (r - m[k]) / (s[k] * s[k]));
        return v;
    };
    auto dbase = [=](double r) {
        double v = 0.0;
        for (int k = 0; k < terms; ++k)
            v += -c[k] * (r - m[k]) / (s[k] * s[k]) * std::exp(-0.5 * (r - m[k]) * (r - m[k]) / (s[k] * s[k]));
        return v;
    };
    const double L = r_max - cut0;
    RadialProfile p;
    p.r_max = r_max;
    p.u = [=](double r) {
        const double v = base(r) * detail::smooth_step_down((r - cut0) / L);
        return vanish_at_R ? (r - R) * v : v;
    };
    p.du = [=](double r) {
        const double x = (r - cut0) / L;
        const double v = base(r) * detail::smooth_step_down(x);
        const double dv = dbase(r) * detail::smooth_step_down(x) + base(r) * detail::smooth_step_down_deriv(x) / L;
        return vanish_at_R ? v + (r - R) * dv : dv;
    };
    return p;
}

struct PoincareReport {
    double worst_ratio = 0.0;
    double constant = 0.0;
    int trials = 0;
    double extremal_ratio = std::numeric_limits<double>::quiet_NaN();  // delta < 0 only
};

/// Worst Poincare ratio over random admissible profiles (vanishing at R when
/// delta > 0).  Deterministic for a given seed.
inline PoincareReport poincare_constant_check(double R, double delta, int trials, std::uint64_t seed = 0) {
    if (!(R > 0.0) || delta == 0.0) throw Error(ErrorKind::Domain, "poincare_constant_check: R > 0, delta != 0 required");
    std::mt19937_64 rng(seed);
    PoincareReport rep{0.0, poincare_constant(R), trials};
    for (int i = 0; i < trials; ++i) {
        const auto prof = random_profile(R, delta > 0.0, rng);
        rep.worst_ratio = std::max(rep.worst_ratio, poincare_ratio(R, delta, prof));
    }
    if (delta < 0.0) rep.extremal_ratio = poincare_ratio(R, delta, extremal_profile(delta, 2.0 * R, 1e6 * R));
    return rep;
}

struct WeightIdentityReport {
    double max_residual = 0.0;
    double max_grad = 0.0;
};

/// -omega Delta omega + |grad omega|^2 - 2 from the closed forms, and |grad omega|.
inline WeightIdentityReport weight_identity_check(const std::vector<double>& radii) {
    WeightIdentityReport rep;
    for (double r : radii) {
        const double q = 1.0 + r * r;
        const double w = std::sqrt(q);
        const double grad = r / w;
        const double lap = -(1.0 / (q * w) + 1.0 / w);  // geometer's sign
        rep.max_residual = std::max(rep.max_residual, std::abs(-w * lap + grad * grad - 2.0));
        rep.max_grad = std::max(rep.max_grad, grad);
    }
    return rep;
}

}  // namespace permon
