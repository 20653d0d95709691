#pragma once

// Indicial data at a singular point: the spectrum of the charge-m monopole
// Laplacian on S^2, the operator L = (Laplacian, nabla^* nabla + m^2/4), and
// the exceptional weights gamma^+- solving gamma^2 + gamma - lambda = 0.
//
// The discretised oracle reduces nabla^* nabla on the U+ chart (connection
// (m/2)(1 - cos phi) dtheta) to Fourier modes e^{i n theta}:
//
//   -(1/sin phi)(sin phi f')' + (n + (m/2)(1 - cos phi))^2 / sin^2 phi f
//
// and discretises each on a cell-centred grid with sin-weighted fluxes that
// vanish at the poles.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "permon/error.hpp"
#include "permon/specfn.hpp"

namespace permon {

struct KuwabaraEntry {
    int l;
    double eigenvalue;
    int multiplicity;
};

/// (l(l+2) - m^2)/4 with l = |m| + 2j and multiplicity l+1, for j = 0..j_max.
inline std::vector<KuwabaraEntry> kuwabara_eigenvalues(int m, int j_max) {
    if (j_max < 0) throw Error(ErrorKind::Domain, "kuwabara_eigenvalues: j_max >= 0 required");
    std::vector<KuwabaraEntry> out;
    for (int j = 0; j <= j_max; ++j) {
        const int l = std::abs(m) + 2 * j;
        out.push_back({l, (double(l) * (l + 2) - double(m) * m) / 4.0, l + 1});
    }
    return out;
}

struct WeightEntry {
    int j;
    int l;
    double lambda;
    double gamma_plus;
    double gamma_minus;
    int multiplicity;
};

struct WeightSpectrum {
    int m = 0;
    std::vector<WeightEntry> entries;
};

/// Eigenvalues l(l+2)/4 of L and the roots gamma = -1/2 +- sqrt(1/4 + lambda).
/// Every quantity is a dyadic rational of modest size, so all are exact.
inline WeightSpectrum operator_L_spectrum(int m, int j_max) {
    WeightSpectrum ws{m, {}};
    for (const auto& e : kuwabara_eigenvalues(m, j_max)) {
        const double lambda = e.eigenvalue + double(m) * m / 4.0;
        const double root = std::sqrt(0.25 + lambda);
        ws.entries.push_back({(e.l - std::abs(m)) / 2, e.l, lambda, -0.5 + root, -0.5 - root, e.multiplicity});
    }
    return ws;
}

struct ExceptionalCheck {
    bool exceptional = false;
    double nearest_weight = 0.0;
    double distance = 0.0;
};

inline constexpr double kExceptionalTol = 1e-12;

inline ExceptionalCheck is_exceptional(double delta, int m, int j_max) {
    const auto ws = operator_L_spectrum(m, j_max);
    if (std::abs(delta) >= ws.entries.back().gamma_plus)
        throw Error(ErrorKind::InsufficientJmax, "is_exceptional: |delta| beyond gamma+_{j_max}");
    ExceptionalCheck out;
    out.distance = std::numeric_limits<double>::infinity();
    for (const auto& e : ws.entries) {
        for (double g : {e.gamma_plus, e.gamma_minus}) {
            const double d = std::abs(delta - g);
            if (d < out.distance) {
                out.distance = d;
                out.nearest_weight = g;
            }
        }
    }
    out.exceptional = out.distance <= kExceptionalTol;
    return out;
}

// ---- discretised oracle -------------------------------------------------------

struct OracleEigenvalue {
    double value;
    int mode;  // Fourier index n in the U+ chart
};

namespace detail {

/// Lowest `count` eigenvalues of the mode-n operator on an N-cell grid.
inline std::vector<double> monopole_mode_eigenvalues(int m, int n, int N, int count) {
    const double d = kPi / N;
    Eigen::VectorXd diag(N);
    Eigen::VectorXd sub(N - 1);
    for (int i = 0; i < N; ++i) {
        const double phi = (i + 0.5) * d;
        const double s = std::sin(phi);
        const double s_lo = i == 0 ? 0.0 : std::sin(i * d);
        const double s_hi = i == N - 1 ? 0.0 : std::sin((i + 1) * d);
        const double a = n + 0.5 * m * (1.0 - std::cos(phi));
        diag(i) = (s_lo + s_hi) / (s * d * d) + a * a / (s * s);
        if (i + 1 < N) sub(i) = -s_hi / (d * d * std::sqrt(s * std::sin((i + 1.5) * d)));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    std::vector<double> out;
    for (int i = 0; i < std::min<int>(count, static_cast<int>(ev.size())); ++i) out.push_back(ev(i));
    return out;
}

inline std::vector<OracleEigenvalue> sphere_oracle_at(int m, int l_cut, int N) {
    std::vector<OracleEigenvalue> all;
    // modes carrying an l <= l_cut harmonic satisfy |2n + m| <= l_cut
    for (int n = -(l_cut + std::abs(m)); n <= l_cut + std::abs(m); ++n) {
        const int lowest_l = std::max(std::abs(m), std::abs(2 * n + m));
        if (lowest_l > l_cut) continue;
        const int count = (l_cut - lowest_l) / 2 + 1;
        for (double v : monopole_mode_eigenvalues(m, n, N, count)) all.push_back({v, n});
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return a.value != b.value ? a.value < b.value : a.mode < b.mode;
    });
    return all;
}

}  // namespace detail

inline constexpr int kOracleDefaultCells = 800;

/// Approximate spectrum of nabla^* nabla on H^m with all harmonics of degree
/// l <= l_cut, sorted by value then mode.  Raises UnderResolved when halving
/// the grid moves any eigenvalue by more than 5%.
inline std::vector<OracleEigenvalue> sphere_laplacian_oracle(int m, int l_cut, int cells = kOracleDefaultCells) {
    if (l_cut < std::abs(m) || l_cut > 8) throw Error(ErrorKind::Domain, "sphere_laplacian_oracle: need |m| <= l_cut <= 8");
    if (cells < 8) throw Error(ErrorKind::Domain, "sphere_laplacian_oracle: too few cells");
    const auto fine = detail::sphere_oracle_at(m, l_cut, cells);
    const auto coarse = detail::sphere_oracle_at(m, l_cut, cells / 2);
    if (fine.size() != coarse.size()) throw Error(ErrorKind::UnderResolved, "sphere_laplacian_oracle: mode mismatch");
    for (std::size_t i = 0; i < fine.size(); ++i) {
        const double rel = std::abs(fine[i].value - coarse[i].value) / std::max(std::abs(fine[i].value), 1.0);
        if (rel > 0.05) throw Error(ErrorKind::UnderResolved, "sphere_laplacian_oracle: grid too coarse");
    }
    return fine;
}

struct EigenCluster {
    double value;  // mean of the members
    int size;
};

/// Groups sorted eigenvalues whose gap is below rel_gap * max(|x|, 1).
inline std::vector<EigenCluster> cluster_eigenvalues(const std::vector<OracleEigenvalue>& ev, double rel_gap = 1e-3) {
    std::vector<EigenCluster> out;
    double sum = 0.0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        const bool join = !out.empty() && std::abs(ev[i].value - ev[i - 1].value) <= rel_gap * std::max(std::abs(ev[i].value), 1.0);
        if (join) {
            ++out.back().size;
            sum += ev[i].value;
        } else {
            sum = ev[i].value;
            out.push_back({0.0, 1});
        }
        out.back().value = sum / out.back().size;
    }
    return out;
}

}  // namespace permon
