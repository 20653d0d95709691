#pragma once

// Boundary data of a periodic monopole with singular points, the charge and
// dimension arithmetic, the reducible locus, and the abelian pieces of the
// background pair.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "permon/abelian.hpp"
#include "permon/error.hpp"
#include "permon/geometry.hpp"
#include "permon/green.hpp"
#include "permon/specfn.hpp"

namespace permon {

struct BoundaryData {
    std::vector<CirclePoint3> singular_points;
    int k_inf = 0;
    double v = 0.0;
    double b = 0.0;  // representative of R/Z in [0, 1)
    CirclePoint3 center_q;
    std::optional<double> lambda;  // mass used by the background recipe

    int n() const { return static_cast<int>(singular_points.size()); }
};

/// Representative of b mod 1 in [0, 1).
inline double reduce_unit(double b) {
    double r = b - std::floor(b);
    return r >= 1.0 ? 0.0 : r;
}

struct Violation {
    std::string code;
    std::string message;
};

inline std::vector<Violation> validate(const BoundaryData& bd) {
    std::vector<Violation> out;
    const int n = bd.n();
    if (bd.k_inf < 0) out.push_back({"k-inf-negative", "k_inf must be >= 0"});
    if (((bd.k_inf - n) % 2 + 2) % 2 != 0)
        out.push_back({"parity", "k_inf = " + std::to_string(bd.k_inf) + " and n = " + std::to_string(n) + " differ in parity"});
    if (bd.k_inf == 0 && !(bd.v > 0.0)) out.push_back({"v-positive", "v > 0 is required when k_inf = 0"});
    if (bd.k_inf + n < 0) out.push_back({"charge", "charge (k_inf + n)/2 is negative"});
    if (!std::isfinite(bd.v)) out.push_back({"v-finite", "v must be finite"});
    if (!(bd.b >= 0.0 && bd.b < 1.0)) out.push_back({"b-range", "b must lie in [0, 1)"});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (bd.singular_points[i] == bd.singular_points[j])
                out.push_back({"distinct", "singular points " + std::to_string(j + 1) + " and " + std::to_string(i + 1) + " coincide"});
    return out;
}

namespace detail {

inline void require_valid(const BoundaryData& bd, const char* who) {
    const auto v = validate(bd);
    if (!v.empty()) throw Error(ErrorKind::InvalidData, std::string(who) + ": " + v.front().message);
}

}  // namespace detail

/// k = (k_inf + n) / 2.
inline int charge(const BoundaryData& bd) {
    detail::require_valid(bd, "charge");
    return (bd.k_inf + bd.n()) / 2;
}

/// 4k - 4.  Charge zero has no moduli space and is rejected.
inline int moduli_dimension(const BoundaryData& bd) {
    const int k = charge(bd);
    if (k < 1) throw Error(ErrorKind::InvalidData, "moduli_dimension: charge k >= 1 required");
    return 4 * k - 4;
}

struct IndexLedger {
    int ind_Y;               // 4k
    int diag_coker_Xstar;    // -4, the diagonal cokernel
    int offdiag_difference;  // 0
    int total;
};

inline IndexLedger index_ledger(const BoundaryData& bd) {
    const int k = charge(bd);
    if (k < 1) throw Error(ErrorKind::InvalidData, "index_ledger: charge k >= 1 required");
    IndexLedger l{4 * k, -4, 0, 0};
    l.total = l.ind_Y + l.diag_coker_Xstar + l.offdiag_difference;
    return l;
}

// ---- reducibles --------------------------------------------------------------------

inline constexpr double kReducibleTol = 1e-9;

struct ReducibleSolution {
    std::vector<int> subset;  // zero-based, ascending
    AbelianMonopole abelian_model;
};

struct ReducibleReport {
    std::vector<ReducibleSolution> solutions;
    std::string reason;  // "n<k" when no subset of size k exists
};

namespace detail {

// calls visit(subset) for every size-k subset of {0..n-1} in lexicographic order
template <class F>
void for_each_subset(int n, int k, F&& visit) {
    if (k < 0 || k > n) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        visit(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

inline AbelianMonopole reducible_model(const BoundaryData& bd, const std::vector<int>& subset) {
    AbelianMonopole m{{}, bd.v, bd.b};
    for (int i = 0; i < bd.n(); ++i) {
        const bool in = std::find(subset.begin(), subset.end(), i) != subset.end();
        m.terms.push_back({bd.singular_points[i], in ? 1 : -1, DiracKind::Periodic});
    }
    return m;
}

}  // namespace detail

/// Subsets S of size k with 2 sum_S p = sum p + k_inf q, the circle part
/// compared mod 2pi.
inline ReducibleReport reducible_configs(const BoundaryData& bd, double tol = kReducibleTol) {
    const int k = charge(bd);
    const int n = bd.n();
    ReducibleReport rep;
    if (n < k) {
        rep.reason = "n<k";
        return rep;
    }
    Complex zsum = double(bd.k_inf) * bd.center_q.z();
    double tsum = bd.k_inf * bd.center_q.t();
    for (const auto& p : bd.singular_points) {
        zsum += p.z();
        tsum += p.t();
    }
    detail::for_each_subset(n, k, [&](const std::vector<int>& s) {
        Complex z{0.0, 0.0};
        double t = 0.0;
        for (int i : s) {
            z += bd.singular_points[i].z();
            t += bd.singular_points[i].t();
        }
        const Complex dz = 2.0 * z - zsum;
        if (std::abs(dz.real()) <= tol && std::abs(dz.imag()) <= tol && std::abs(circle_difference(2.0 * t, tsum)) <= tol)
            rep.solutions.push_back({s, detail::reducible_model(bd, s)});
    });
    return rep;
}

// ---- background pair -----------------------------------------------------------------

struct BackgroundRecipe {
    AbelianMonopole exterior;   // c_{v,b} with +2k at q and -1 at each p_i
    AbelianMonopole euclidean;  // charge 2k Dirac monopole at q of mass lambda
    double v = 0.0;
    double lambda = 0.0;
    int k = 0;
    double inner_radius = 1.0;  // the patch annulus is inner_radius..2 inner_radius
    double outer_radius = 2.0;
    double min_higgs_on_annulus = 0.0;
};

/// Classical charge-one profile lambda coth(lambda rho) - 1/rho.  Not derived
/// here; used only to sanity-check where the patching error lives.
inline double bps_profile(double lambda, double rho) {
    return lambda / std::tanh(lambda * rho) - 1.0 / rho;
}

/// v from v + k a0 - sum_i G_{p_i}(q) = lambda.
inline double mass_matching_v(const BoundaryData& bd, double lambda, int k, double tol = 1e-12) {
    double v = lambda - k * a_zero();
    for (const auto& p : bd.singular_points) v += green_eval(bd.center_q, p, tol).value;
    return v;
}

/// Assembles the abelian pieces and checks |Phi_ext| >= lambda/2 on a sample
/// grid of the annulus around q.
inline BackgroundRecipe background_recipe(const BoundaryData& bd, double lambda, double inner_radius = 1.0) {
    if (!(lambda > 0.0)) throw Error(ErrorKind::Domain, "background_recipe: lambda > 0 required");
    if (!(inner_radius > 0.0 && inner_radius < kPi / 2.0))
        throw Error(ErrorKind::Domain, "background_recipe: annulus must fit in the circle direction");
    BackgroundRecipe r;
    r.k = charge(bd);
    r.lambda = lambda;
    r.inner_radius = inner_radius;
    r.outer_radius = 2.0 * inner_radius;
    r.v = mass_matching_v(bd, lambda, r.k);
    r.exterior = {{}, r.v, bd.b};
    if (r.k > 0) r.exterior.terms.push_back({bd.center_q, 2 * r.k, DiracKind::Periodic});
    for (const auto& p : bd.singular_points) r.exterior.terms.push_back({p, -1, DiracKind::Periodic});
    r.euclidean = {{{bd.center_q, 2 * r.k, DiracKind::Euclidean}}, lambda, 0.0};

    // spherical grid on three shells of the annulus
    r.min_higgs_on_annulus = std::numeric_limits<double>::infinity();
    for (double rho : {r.inner_radius, 1.5 * r.inner_radius, r.outer_radius}) {
        for (int i = 0; i <= 6; ++i) {
            const double polar = kPi * i / 6.0;
            const int az = i == 0 || i == 6 ? 1 : 12;
            for (int j = 0; j < az; ++j) {
                const double a = kTwoPi * j / az;
                const Complex dz = std::polar(rho * std::sin(polar), a);
                const CirclePoint3 x(bd.center_q.z() + dz, bd.center_q.t() + rho * std::cos(polar));
                bool on_point = false;
                for (const auto& p : bd.singular_points) on_point = on_point || distance(x, p) < 1e-12;
                const double phi = on_point ? 0.0 : std::abs(higgs(r.exterior, x, 1e-10));
                r.min_higgs_on_annulus = std::min(r.min_higgs_on_annulus, phi);
            }
        }
    }
    if (r.min_higgs_on_annulus < lambda / 2.0)
        throw Error(ErrorKind::LambdaTooSmall, "background_recipe: |Phi| < lambda/2 on the patch annulus (min " +
                                                   std::to_string(r.min_higgs_on_annulus) + ")");
    return r;
}

// ---- JSON ------------------------------------------------------------------------------

namespace detail {

inline CirclePoint3 point_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) throw Error(ErrorKind::InvalidData, where + ": expected an object {x, y, t}");
    for (const char* key : {"x", "y", "t"})
        if (!j.contains(key) || !j.at(key).is_number())
            throw Error(ErrorKind::InvalidData, where + ": missing numeric '" + key + "'");
    return {j.at("x").get<double>(), j.at("y").get<double>(), j.at("t").get<double>()};
}

inline nlohmann::json point_to_json(const CirclePoint3& p) { return {{"x", p.x()}, {"y", p.y()}, {"t", p.t()}}; }

}  // namespace detail

inline BoundaryData boundary_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorKind::InvalidData, "config: top level must be an object");
    for (const auto& [key, _] : j.items())
        if (key != "points" && key != "k_inf" && key != "v" && key != "b" && key != "q" && key != "lambda")
            throw Error(ErrorKind::InvalidData, "config: unknown key '" + key + "'");
    BoundaryData bd;
    if (j.contains("points")) {
        if (!j.at("points").is_array()) throw Error(ErrorKind::InvalidData, "config: 'points' must be an array");
        int i = 0;
        for (const auto& p : j.at("points")) bd.singular_points.push_back(detail::point_from_json(p, "points[" + std::to_string(i++) + "]"));
    }
    if (!j.contains("k_inf") || !j.at("k_inf").is_number_integer())
        throw Error(ErrorKind::InvalidData, "config: 'k_inf' must be an integer");
    bd.k_inf = j.at("k_inf").get<int>();
    if (j.contains("v")) {
        if (!j.at("v").is_number()) throw Error(ErrorKind::InvalidData, "config: 'v' must be a number");
        bd.v = j.at("v").get<double>();
    }
    if (j.contains("b")) {
        if (!j.at("b").is_number()) throw Error(ErrorKind::InvalidData, "config: 'b' must be a number");
        bd.b = reduce_unit(j.at("b").get<double>());
    }
    if (j.contains("q")) bd.center_q = detail::point_from_json(j.at("q"), "q");
    if (j.contains("lambda")) {
        if (!j.at("lambda").is_number()) throw Error(ErrorKind::InvalidData, "config: 'lambda' must be a number");
        bd.lambda = j.at("lambda").get<double>();
    }
    return bd;
}

inline nlohmann::json boundary_to_json(const BoundaryData& bd) {
    nlohmann::json j;
    j["points"] = nlohmann::json::array();
    for (const auto& p : bd.singular_points) j["points"].push_back(detail::point_to_json(p));
    j["k_inf"] = bd.k_inf;
    j["v"] = bd.v;
    j["b"] = bd.b;
    j["q"] = detail::point_to_json(bd.center_q);
    if (bd.lambda) j["lambda"] = *bd.lambda;
    return j;
}

inline BoundaryData read_boundary(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::InvalidData, std::string("config: ") + e.what());
    }
    return boundary_from_json(j);
}

}  // namespace permon
