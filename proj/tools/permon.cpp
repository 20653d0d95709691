// permon: command-line front end.
//
// Exit status: 0 success, 1 a check failed, 2 usage or configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "permon/permon.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace permon;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheck = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// flags shared by every subcommand
struct Common {
    std::string config;
    double tol = 0.0;
    double mesh = 0.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string only;
    bool json = false;
};

void add_common(CLI::App* sub, Common& c, double default_tol, double default_mesh) {
    c.tol = default_tol;
    c.mesh = default_mesh;
    sub->add_option("--config", c.config, "JSON input file");
    sub->add_option("--tol", c.tol, "absolute tolerance")->capture_default_str();
    sub->add_option("--mesh", c.mesh, "grid spacing")->capture_default_str();
    sub->add_option("--seed", c.seed, "seed for randomised trials")->capture_default_str();
    sub->add_option("--out", c.out, "directory for data files and the JSON report");
    sub->add_option("--only", c.only, "run a single named check");
    sub->add_flag("--json", c.json, "print the JSON report instead of the text summary");
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load_json(const std::string& path) {
    try {
        return json::parse(slurp(path));
    } catch (const json::parse_error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

BoundaryData load_boundary(const Common& c) {
    if (c.config.empty()) throw UsageError("--config is required");
    return boundary_from_json(load_json(c.config));
}

// Collects the report and the data it refers to, then writes everything at
// the end so output never interleaves.
class Run {
public:
    Run(std::string command, const Common& c, std::string digest_input) : c_(c) {
        report_.command = std::move(command);
        std::ostringstream key;
        key << report_.command << '\n' << c.tol << '\n' << c.mesh << '\n' << c.seed << '\n' << c.only << '\n' << digest_input;
        if (!c.config.empty()) key << '\n' << slurp(c.config);
        report_.inputs_digest = fnv1a64(key.str());
    }

    RunReport& report() { return report_; }
    std::ostringstream& text() { return text_; }

    void data(const std::string& name, const std::string& body) { data_.emplace_back(name, body); }

    void check(const std::string& name, bool passed, double measured, double tolerance) {
        report_.checks.push_back({name, passed, measured, tolerance});
    }

    int finish() {
        if (!c_.out.empty()) {
            fs::create_directories(c_.out);
            for (const auto& [name, body] : data_) {
                const auto path = (fs::path(c_.out) / name).string();
                std::ofstream(path, std::ios::binary) << body;
                report_.outputs.push_back(path);
            }
        }
        const json j = to_json(report_);
        const auto errs = validate_report(j);
        if (!errs.empty() || !(report_from_json(json::parse(j.dump())) == report_)) {
            std::cerr << "internal error: report failed its schema round trip";
            for (const auto& e : errs) std::cerr << "; " << e;
            std::cerr << '\n';
            return kExitCheck;
        }
        if (!c_.out.empty()) std::ofstream((fs::path(c_.out) / (report_.command + ".json")).string()) << j.dump(2) << '\n';
        if (c_.json) {
            std::cout << j.dump(2) << '\n';
        } else {
            if (c_.out.empty())
                for (const auto& d : data_) std::cout << d.second;
            std::cout << text_.str();
        }
        std::cout.flush();
        return report_.all_passed() ? kExitOk : kExitCheck;
    }

private:
    const Common& c_;
    RunReport report_;
    std::ostringstream text_;
    std::vector<std::pair<std::string, std::string>> data_;
};

CirclePoint3 parse_point(const std::vector<double>& v, const char* flag) {
    if (v.empty()) return {};
    if (v.size() != 3) throw UsageError(std::string(flag) + " takes three numbers x y t");
    return {v[0], v[1], v[2]};
}

// the line bundle M of the exterior model: +2k at q and -1 at each p_i
AbelianMonopole exterior_model(const BoundaryData& bd) {
    const int k = charge(bd);
    AbelianMonopole m{{}, bd.v, bd.b};
    if (k > 0) m.terms.push_back({bd.center_q, 2 * k, DiracKind::Periodic});
    for (const auto& p : bd.singular_points) m.terms.push_back({p, -1, DiracKind::Periodic});
    return m;
}

// ---- subcommands ----------------------------------------------------------------------

int cmd_green(const Common& c, const std::string& points_path, const std::vector<double>& center) {
    std::string raw;
    if (points_path.empty() || points_path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        raw = ss.str();
    } else {
        raw = slurp(points_path);
    }
    std::istringstream in(raw);
    const auto pts = read_points(in);
    const auto q = parse_point(center, "--center");
    Run run("green", c, raw);
    const auto evals = green_batch(pts, q, c.tol);
    std::ostringstream csv;
    write_green_csv(csv, pts, evals);
    run.data("green.csv", csv.str());
    double worst = 0.0;
    for (const auto& e : evals) worst = std::max(worst, e.trunc_bound);
    run.check("truncation-bound", worst <= c.tol, worst, c.tol);
    run.report().result = {{"points", pts.size()}, {"max_trunc_bound", worst}};
    return run.finish();
}

int cmd_field(const Common& c, int k, double rmin, double rmax, int nr, int ntheta, int nt) {
    BoundaryData bd;
    if (!c.config.empty()) bd = load_boundary(c);
    if (k == 0) throw UsageError("--charge must be non-zero");
    if (!(rmin >= 2.0 && rmax >= rmin) || nr < 1 || ntheta < 1 || nt < 1) throw UsageError("need 2 <= rmin <= rmax and positive counts");
    std::vector<Vec3> pts;
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < ntheta; ++j)
            for (int l = 0; l < nt; ++l)
                pts.push_back({nr == 1 ? rmin : rmin + (rmax - rmin) * i / (nr - 1), kTwoPi * j / ntheta, kTwoPi * l / nt});
    // sample points are cylindrical coordinates about the centre's axis
    std::ostringstream csv;
    const AbelianMonopole centred = single_periodic(k, CirclePoint3(0.0, 0.0, bd.center_q.t()), bd.v, bd.b);
    write_field_csv(csv, centred, pts, c.tol);
    Run run("field", c, std::to_string(k) + ' ' + std::to_string(rmin) + ' ' + std::to_string(rmax) + ' ' +
                            std::to_string(nr) + ' ' + std::to_string(ntheta) + ' ' + std::to_string(nt));
    run.data("field.csv", csv.str());
    run.report().result = {{"charge", k}, {"samples", pts.size()}};
    return run.finish();
}

int cmd_holonomy(const Common& c, double radius, int samples) {
    const auto bd = load_boundary(c);
    const auto m = exterior_model(bd);
    Run run("holonomy", c, std::to_string(radius) + ' ' + std::to_string(samples));
    std::ostringstream csv;
    csv.precision(17);
    csv << "x,y,re,im,arg\n";
    for (int i = 0; i < samples; ++i) {
        const Complex z = bd.center_q.z() + std::polar(radius, kTwoPi * i / samples);
        const Complex h = holonomy(m, z, c.tol);
        csv << z.real() << ',' << z.imag() << ',' << h.real() << ',' << h.imag() << ',' << std::arg(h) << '\n';
    }
    run.data("holonomy.csv", csv.str());
    for (const auto& t : m.terms)
        if (std::abs(bd.center_q.z() - t.center.z()) >= radius) throw UsageError("--radius must enclose every singular point");
    // winding is an integer, so a coarse integration tolerance is enough
    const long w = holonomy_winding(m, radius, std::max(samples, 64), std::max(c.tol, 1e-6));
    const long expect = -m.periodic_charge();
    run.check("winding", w == expect, double(w), 0.0);
    run.report().result = {{"winding", w}, {"expected", expect}, {"k_inf", m.periodic_charge()}};
    run.text() << "winding " << w << " (expected " << expect << ")\n";
    return run.finish();
}

int cmd_weights(const Common& c, int m, int jmax) {
    if (jmax < 0) throw UsageError("--jmax must be >= 0");
    Run run("weights", c, std::to_string(m) + ' ' + std::to_string(jmax));
    const auto ws = operator_L_spectrum(m, jmax);
    std::ostringstream tsv;
    tsv.precision(17);
    tsv << "j\tl\tlambda\tgamma+\tgamma-\tmult\n";
    for (const auto& e : ws.entries)
        tsv << e.j << '\t' << e.l << '\t' << e.lambda << '\t' << e.gamma_plus << '\t' << e.gamma_minus << '\t' << e.multiplicity << '\n';
    run.data("weights.tsv", tsv.str());
    run.report().result = {{"charge", m}, {"jmax", jmax}};
    return run.finish();
}

int cmd_spectrum_oracle(const Common& c, int m, int jmax, int cells) {
    const auto expect = kuwabara_eigenvalues(m, jmax);
    Run run("spectrum-oracle", c, std::to_string(m) + ' ' + std::to_string(jmax) + ' ' + std::to_string(cells));
    const auto cl = cluster_eigenvalues(sphere_laplacian_oracle(m, expect.back().l, cells));
    std::ostringstream tsv;
    tsv.precision(12);
    tsv << "l\tcomputed\texact\tcluster_size\tmult\n";
    double worst = 0.0;
    bool mult_ok = cl.size() >= expect.size();
    for (std::size_t i = 0; i < expect.size() && i < cl.size(); ++i) {
        const double rel = std::abs(cl[i].value - expect[i].eigenvalue) / std::max(expect[i].eigenvalue, 1.0);
        worst = std::max(worst, rel);
        mult_ok = mult_ok && cl[i].size == expect[i].multiplicity;
        tsv << expect[i].l << '\t' << cl[i].value << '\t' << expect[i].eigenvalue << '\t' << cl[i].size << '\t'
            << expect[i].multiplicity << '\n';
    }
    run.data("spectrum.tsv", tsv.str());
    run.check("eigenvalues", worst <= 0.01, worst, 0.01);
    run.check("multiplicities", mult_ok, mult_ok ? 0.0 : 1.0, 0.0);
    return run.finish();
}

Source preset_source(const std::string& name, double origin) {
    if (name == "zero") return {};
    if (name == "exp3") return [origin](double x) { return std::exp(-3.0 * (x - origin)); };
    if (name == "inv4") return [](double x) { return std::pow(x, -4.0); };
    if (name == "bump")
        return [origin](double x) {
            const double y = (x - origin - 2.0) / 0.5;
            return std::abs(y) < 1.0 ? std::exp(-1.0 / (1.0 - y * y)) : 0.0;
        };
    throw UsageError("unknown source preset '" + name + "' (zero, exp3, inv4, bump)");
}

int cmd_solve_model(const Common& c, bool mesh_given) {
    if (c.config.empty()) throw UsageError("--config is required");
    const json j = load_json(c.config);
    auto num = [&](const char* key, double def) {
        if (!j.contains(key)) return def;
        if (!j[key].is_number()) throw UsageError(std::string("'") + key + "' must be a number");
        return j[key].get<double>();
    };
    const std::string type = j.value("type", "");
    const std::string source = j.value("source", "zero");
    const double mesh = mesh_given ? c.mesh : num("mesh", c.mesh);
    Run run("solve-model", c, "");
    ModelSolution sol;
    json result;
    if (type == "cylinder") {
        CylinderProblem p;
        p.lambda = num("lambda", 0.0);
        p.T = num("T", 0.0);
        p.phi = num("phi", 1.0);
        p.delta = num("delta", 0.0);
        p.f = preset_source(source, p.T);
        sol = cylinder_solve(p, mesh);
        const double gp = indicial_roots(p.lambda).first;
        result = {{"decay_rate", sol.decay_rate}, {"gamma_plus", gp}, {"residual", sol.residual}, {"energy", nullptr}};
        if (source == "zero" && p.phi != 0.0) run.check("decay-rate", std::abs(sol.decay_rate - gp) <= 1e-3, std::abs(sol.decay_rate - gp), 1e-3);
    } else if (type == "exterior") {
        ExteriorModeProblem p;
        const std::string sector = j.value("sector", "diagonal");
        if (sector == "diagonal") p.sector = Sector::DiagonalInvariant;
        else if (sector == "oscillatory") p.sector = Sector::Oscillatory;
        else if (sector == "offdiagonal") p.sector = Sector::OffDiagonal;
        else throw UsageError("unknown sector '" + sector + "' (diagonal, oscillatory, offdiagonal)");
        p.mode = static_cast<int>(num("mode", 0.0));
        p.R = num("R", 1.0);
        p.delta = num("delta", -0.5);
        p.phi = num("phi", 0.0);
        p.coercivity = num("coercivity", 1.0);
        p.f = preset_source(source, p.R);
        if (p.sector == Sector::DiagonalInvariant) {
            const auto s = exterior_diagonal_solve(p, mesh);
            sol = s;
            result = {{"decay_rate", s.decay_rate}, {"residual", s.residual}, {"energy", nullptr}, {"limit", s.limit}};
        } else {
            const auto rep = exterior_coercive_solve(p, mesh);
            sol = rep.solution;
            result = {{"decay_rate", sol.decay_rate}, {"residual", sol.residual}, {"energy", rep.energy_ratio}, {"mu", rep.mu},
                      {"l2_norm", rep.l2_norm}};
        }
    } else {
        throw UsageError("'type' must be \"cylinder\" or \"exterior\"");
    }
    for (auto& [key, val] : result.items())
        if (val.is_number_float() && !std::isfinite(val.get<double>())) val = nullptr;
    std::ostringstream csv;
    csv.precision(17);
    csv << "x,u\n";
    for (std::size_t i = 0; i < sol.x.size(); ++i) csv << sol.x[i] << ',' << sol.u[i] << '\n';
    run.data("solution.csv", csv.str());
    run.report().result = result;
    if (!c.out.empty()) run.text() << result.dump() << '\n';
    return run.finish();
}

int cmd_validate(const Common& c) {
    const auto bd = load_boundary(c);
    Run run("validate", c, "");
    const auto vs = validate(bd);
    json list = json::array();
    for (const auto& v : vs) {
        list.push_back({{"code", v.code}, {"message", v.message}});
        run.text() << "violation [" << v.code << "] " << v.message << '\n';
    }
    run.check("boundary-conditions", vs.empty(), double(vs.size()), 0.0);
    run.report().result = {{"violations", list}};
    if (vs.empty()) {
        run.report().result["k"] = (bd.k_inf + bd.n()) / 2;
        run.text() << "ok k=" << (bd.k_inf + bd.n()) / 2 << '\n';
    }
    return run.finish();
}

int cmd_dimension(const Common& c) {
    const auto bd = load_boundary(c);
    Run run("dimension", c, "");
    const int dim = moduli_dimension(bd);
    const auto l = index_ledger(bd);
    run.check("ledger-total", l.total == dim, double(l.total), double(dim));
    run.report().result = {{"k", charge(bd)},
                           {"dimension", dim},
                           {"ledger", {{"ind_Y", l.ind_Y}, {"diag_coker_Xstar", l.diag_coker_Xstar},
                                       {"offdiag_difference", l.offdiag_difference}, {"total", l.total}}}};
    run.text() << dim << '\n';
    return run.finish();
}

int cmd_reducibles(const Common& c) {
    const auto bd = load_boundary(c);
    Run run("reducibles", c, "");
    const auto rep = reducible_configs(bd, c.tol);
    json subsets = json::array();
    for (const auto& s : rep.solutions) {
        json one = json::array();
        for (int i : s.subset) one.push_back(i + 1);
        subsets.push_back(one);
        run.text() << one.dump() << '\n';
    }
    if (rep.solutions.empty()) run.text() << "none" << (rep.reason.empty() ? "" : " (" + rep.reason + ")") << '\n';
    run.report().result = {{"subsets", subsets}, {"reason", rep.reason}, {"k", charge(bd)}};
    return run.finish();
}

int cmd_background(const Common& c, double lambda_flag) {
    const auto bd = load_boundary(c);
    const double lambda = lambda_flag > 0.0 ? lambda_flag : bd.lambda.value_or(0.0);
    if (!(lambda > 0.0)) throw UsageError("a positive lambda is required (--lambda or \"lambda\" in the config)");
    Run run("background", c, std::to_string(lambda));
    try {
        const auto r = background_recipe(bd, lambda);
        run.check("annulus-higgs", true, r.min_higgs_on_annulus, lambda / 2.0);
        json terms = json::array();
        for (const auto& t : r.exterior.terms)
            terms.push_back({{"x", t.center.x()}, {"y", t.center.y()}, {"t", t.center.t()}, {"charge", t.charge}});
        run.report().result = {{"v", r.v},
                               {"lambda", r.lambda},
                               {"k", r.k},
                               {"exterior_terms", terms},
                               {"euclidean_charge", 2 * r.k},
                               {"annulus", {r.inner_radius, r.outer_radius}},
                               {"min_higgs_on_annulus", r.min_higgs_on_annulus}};
        std::ostringstream v;
        v.precision(17);
        v << r.v;
        run.text() << "v " << v.str() << "\nmin |Phi| on annulus " << r.min_higgs_on_annulus << " (need >= " << lambda / 2.0 << ")\n";
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::LambdaTooSmall) throw;
        run.check("annulus-higgs", false, std::nan(""), lambda / 2.0);
        run.text() << e.what() << '\n';
    }
    return run.finish();
}

int cmd_verify(const Common& c, std::string suite) {
    if (suite.empty()) suite = "all";
    const auto names = verify::suites();
    if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
        throw UsageError("unknown suite '" + suite + "'");
    if (!c.only.empty() && !verify::find_check(c.only)) throw UsageError("unknown check '" + c.only + "'");
    Run run("verify", c, suite);
    const auto results = verify::run(suite, c.only, {c.seed});
    if (results.empty()) throw UsageError("check '" + c.only + "' is not in suite '" + suite + "'");
    json details = json::array();
    for (const auto& r : results) {
        run.check(r.name, r.passed, r.measured, r.tolerance);
        // wall-clock times stay out of the JSON so reports are reproducible
        details.push_back({{"name", r.name}, {"budget_seconds", r.budget_seconds}, {"detail", r.detail}});
        char line[256];
        std::snprintf(line, sizeof line, "[%s] %-30s measured=%-12.4g tol=%-10.4g %6.2fs  ", r.passed ? "PASS" : "FAIL",
                      r.name.c_str(), r.measured, r.tolerance, r.seconds);
        run.text() << line << r.detail << '\n';
    }
    run.report().result = {{"suite", suite}, {"seed", c.seed}, {"checks", details}};
    return run.finish();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic monopoles: Green's function, abelian fields, indicial data and checks", "permon"};
    app.require_subcommand(1);
    app.fallthrough(false);

    std::map<std::string, Common> common;
    auto sub = [&](const char* name, const char* desc, double tol, double mesh) {
        auto* s = app.add_subcommand(name, desc);
        add_common(s, common[name], tol, mesh);
        return s;
    };

    std::string points_path;
    std::vector<double> center;
    auto* green = sub("green", "evaluate G at points read as 'x y t' lines", 1e-12, 0.0);
    green->add_option("--points", points_path, "points file ('-' or omitted: stdin)");
    green->add_option("--center", center, "source point x y t")->expected(3);

    int field_k = 1, nr = 4, ntheta = 8, nt = 8;
    double rmin = 2.0, rmax = 5.0;
    auto* field = sub("field", "Higgs field and radial-gauge connection of a periodic Dirac monopole", 1e-10, 0.0);
    field->add_option("--charge", field_k)->capture_default_str();
    field->add_option("--rmin", rmin)->capture_default_str();
    field->add_option("--rmax", rmax)->capture_default_str();
    field->add_option("--nr", nr)->capture_default_str();
    field->add_option("--ntheta", ntheta)->capture_default_str();
    field->add_option("--nt", nt)->capture_default_str();

    double radius = 10.0;
    int samples = 16;
    auto* hol = sub("holonomy", "holonomy of the exterior line bundle round a circle about q", 1e-9, 0.0);
    hol->add_option("--radius", radius)->capture_default_str();
    hol->add_option("--samples", samples)->capture_default_str();

    int wm = 0, jmax = 3;
    auto* weights = sub("weights", "eigenvalues of L and exceptional weights as TSV", 0.0, 0.0);
    weights->add_option("--charge", wm)->capture_default_str();
    weights->add_option("--jmax", jmax)->capture_default_str();

    int om = 0, ojmax = 2, cells = kOracleDefaultCells;
    auto* oracle = sub("spectrum-oracle", "discretised monopole Laplacian on S^2 against the exact spectrum", 0.0, 0.0);
    oracle->add_option("--charge", om)->capture_default_str();
    oracle->add_option("--jmax", ojmax)->capture_default_str();
    oracle->add_option("--cells", cells)->capture_default_str();

    auto* solve = sub("solve-model", "solve a separated model problem described by --config", 0.0, 1e-2);

    auto* val = sub("validate", "check boundary data", 0.0, 0.0);
    auto* dim = sub("dimension", "moduli dimension 4k - 4 and the index ledger", 0.0, 0.0);
    auto* red = sub("reducibles", "enumerate reducible configurations", kReducibleTol, 0.0);
    double lambda = 0.0;
    auto* bg = sub("background", "abelian pieces of the background pair", 0.0, 0.0);
    bg->add_option("--lambda", lambda, "mass; defaults to the config's lambda");

    std::string suite_opt, suite_pos;
    auto* ver = sub("verify", "run acceptance checks", 0.0, 0.0);
    ver->add_option("--suite", suite_opt, "green, abelian, hopf, spectral, modelsolve, config or all");
    ver->add_option("SUITE", suite_pos, "same as --suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e);
            return kExitOk;
        }
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*green) return cmd_green(common["green"], points_path, center);
        if (*field) return cmd_field(common["field"], field_k, rmin, rmax, nr, ntheta, nt);
        if (*hol) return cmd_holonomy(common["holonomy"], radius, samples);
        if (*weights) return cmd_weights(common["weights"], wm, jmax);
        if (*oracle) return cmd_spectrum_oracle(common["spectrum-oracle"], om, ojmax, cells);
        if (*solve) return cmd_solve_model(common["solve-model"], solve->count("--mesh") > 0);
        if (*val) return cmd_validate(common["validate"]);
        if (*dim) return cmd_dimension(common["dimension"]);
        if (*red) return cmd_reducibles(common["reducibles"]);
        if (*bg) return cmd_background(common["background"], lambda);
        if (*ver) {
            if (!suite_opt.empty() && !suite_pos.empty() && suite_opt != suite_pos) throw UsageError("conflicting suites");
            return cmd_verify(common["verify"], suite_opt.empty() ? suite_pos : suite_opt);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
