// gcibench: iteration parameters, operator spectra and solver comparisons for
// the VSIE test problems.
//
//   gcibench params   --segment 1,0:3,0 --n 1
//   gcibench spectrum --config ball.json --out run1
//   gcibench solve    --eps 12,4 --solvers GSI,GCI10,GMRES10
//   gcibench bench    --out table
//
// Exit codes: 0 ok, 1 runtime failure, 2 invalid region, 3 no solver
// converged, 4 config error.

#include <gci/bench.hpp>
#include <gci/schedules.hpp>
#include <gci/spectral_analysis.hpp>
#include <gci/spectrum_geometry.hpp>
#include <gci/vsie_operator.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace gci;

namespace {

enum Exit { kOk = 0, kFailure = 1, kBadRegion = 2, kNoConvergence = 3, kBadConfig = 4 };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- parsing

Real parse_real(const std::string& s) {
    std::size_t pos = 0;
    Real v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + s + "'");
    }
    if (pos != s.size()) throw ConfigError("not a number: '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

/// "re,im" or "re".
Complex parse_complex(const std::string& s) {
    const auto parts = split(s, ',');
    if (parts.size() == 1) return {parse_real(parts[0]), 0.0};
    if (parts.size() == 2) return {parse_real(parts[0]), parse_real(parts[1])};
    throw ConfigError("expected re,im: '" + s + "'");
}

/// "x,y:x,y:...".
std::vector<Complex> parse_points(const std::string& s) {
    std::vector<Complex> out;
    for (const auto& p : split(s, ':')) out.push_back(parse_complex(p));
    return out;
}

Complex json_complex(const json& j, const std::string& what) {
    if (j.is_number()) return {j.get<Real>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<Real>(), j[1].get<Real>()};
    throw ConfigError(what + ": expected a number or [re, im]");
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("bad value for '") + key + "'");
    }
}

// --------------------------------------------------------- config model

/// Profile description as written in the config; lengths of layered balls
/// are fractions of the radius.
PermittivityProfile profile_from_json(const json& j, Real radius) {
    require_keys(j, {"kind", "eps", "eps1", "eps2", "d1", "d2"}, "profile");
    const std::string kind = get_or<std::string>(j, "kind", "homogeneous_ball");
    try {
        if (kind == "homogeneous_ball") return PermittivityProfile::homogeneous_ball(json_complex(j.at("eps"), "eps"), radius);
        if (kind == "homogeneous_cube") {
            // Cube with the ball's volume.
            const Real side = radius * std::cbrt(4.0 * std::numbers::pi / 3.0);
            return PermittivityProfile::homogeneous_cube(json_complex(j.at("eps"), "eps"), side);
        }
        if (kind == "layered_ball")
            return PermittivityProfile::layered_ball(json_complex(j.at("eps2"), "eps2"), json_complex(j.at("eps1"), "eps1"),
                                                     get_or<Real>(j, "d2", 0.5) * radius, get_or<Real>(j, "d1", 2.0 / 3.0) * radius,
                                                     radius);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("profile: ") + e.what());
    }
    throw ConfigError("profile: unknown kind '" + kind + "'");
}

std::vector<bench::SolverSpec> solvers_from_labels(const std::vector<std::string>& labels) {
    std::vector<bench::SolverSpec> out;
    for (const auto& raw : labels) {
        const std::string s = raw;
        auto with_n = [&](const char* prefix, bench::Method m) -> std::optional<bench::SolverSpec> {
            const std::string p = prefix;
            if (s.rfind(p, 0) != 0 || s.size() == p.size()) return std::nullopt;
            const Real n = parse_real(s.substr(p.size()));
            if (n < 1 || n != std::floor(n)) throw ConfigError("bad solver size in '" + s + "'");
            return bench::SolverSpec{m, static_cast<int>(n)};
        };
        if (s == "GSI") {
            out.push_back({bench::Method::Gsi, 1});
        } else if (auto g = with_n("GMRES", bench::Method::Gmres)) {
            out.push_back(*g);
        } else if (auto c = with_n("GCI", bench::Method::Gci)) {
            out.push_back(*c);
        } else {
            throw ConfigError("unknown solver '" + s + "' (GSI, GCI<n>, GMRES<n>)");
        }
    }
    return out;
}

struct Resolved {
    bench::ExperimentConfig exp;
    json profile_json;  ///< single-problem profile (spectrum, solve)
    json cases_json;    ///< bench cases
    Real band = 0.15;
    json as_json() const {
        json solvers = json::array();
        for (const auto& s : exp.solvers) solvers.push_back(s.label());
        json j;
        j["problem"] = {{"profile", profile_json}, {"radius", exp.radius}, {"n_cells", exp.n_cells}, {"k0", exp.k0}};
        if (!cases_json.is_null()) j["cases"] = cases_json;
        j["solvers"] = solvers;
        if (exp.region) {
            json r = json::array();
            for (auto z : *exp.region) r.push_back(complex_json(z));
            j["region"] = r;
        }
        j["tol"] = exp.tol;
        j["max_matvecs"] = exp.max_matvecs;
        j["seed"] = exp.seed;
        j["band"] = band;
        return j;
    }
};

struct Flags {
    std::string config;
    std::string out = ".";
    std::string eps, layered, shape, region, solvers;
    std::optional<Real> radius, k0, tol, band;
    std::optional<int> n_cells;
    std::optional<long> max_matvecs;
    std::optional<unsigned> seed;
    bool reference = false;
};

Resolved resolve(const Flags& f, bool bench_mode) {
    json cfg = json::object();
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw ConfigError("cannot open config '" + f.config + "'");
        try {
            cfg = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
    }
    require_keys(cfg, {"problem", "cases", "solvers", "region", "tol", "max_matvecs", "seed", "band"}, "config");
    const json problem = cfg.value("problem", json::object());
    require_keys(problem, {"profile", "radius", "n_cells", "k0"}, "problem");

    Resolved r;
    auto& e = r.exp;
    e.radius = f.radius.value_or(get_or<Real>(problem, "radius", 1.0 / 30.0));
    e.n_cells = f.n_cells.value_or(get_or<int>(problem, "n_cells", bench_mode ? 16 : 6));
    e.k0 = f.k0.value_or(get_or<Real>(problem, "k0", 2.0 * std::numbers::pi));
    e.tol = f.tol.value_or(get_or<Real>(cfg, "tol", 1e-5));
    e.max_matvecs = f.max_matvecs.value_or(get_or<long>(cfg, "max_matvecs", 10'000));
    e.seed = f.seed.value_or(get_or<unsigned>(cfg, "seed", 0u));
    r.band = f.band.value_or(get_or<Real>(cfg, "band", 0.15));
    if (!(e.radius > 0) || e.n_cells < 2 || !(e.k0 >= 0) || !(e.tol > 0) || e.max_matvecs < 1 || !(r.band >= 0))
        throw ConfigError("radius > 0, n_cells >= 2, k0 >= 0, tol > 0, max_matvecs >= 1 and band >= 0 are required");

    json profile = problem.value("profile", json{{"kind", "homogeneous_ball"}, {"eps", 2}});
    if (!f.eps.empty()) profile = {{"kind", f.shape == "cube" ? "homogeneous_cube" : "homogeneous_ball"}, {"eps", complex_json(parse_complex(f.eps))}};
    if (!f.layered.empty()) {
        const auto v = parse_points(f.layered);
        if (v.size() != 2) throw ConfigError("--layered expects eps2:eps1");
        profile = {{"kind", "layered_ball"}, {"eps2", complex_json(v[0])}, {"eps1", complex_json(v[1])}, {"d2", 0.5}, {"d1", 2.0 / 3.0}};
    }
    r.profile_json = profile;

    std::vector<std::string> labels;
    if (!f.solvers.empty()) {
        labels = split(f.solvers, ',');
    } else if (cfg.contains("solvers")) {
        if (!cfg["solvers"].is_array()) throw ConfigError("solvers: expected an array");
        for (const auto& s : cfg["solvers"]) {
            if (s.is_string()) {
                labels.push_back(s.get<std::string>());
            } else {
                require_keys(s, {"method", "n"}, "solver");
                const std::string m = get_or<std::string>(s, "method", "");
                labels.push_back(m == "GSI" ? m : m + std::to_string(get_or<int>(s, "n", 1)));
            }
        }
    }
    e.solvers = labels.empty() ? bench::reference_solvers() : solvers_from_labels(labels);

    if (!f.region.empty()) {
        e.region = parse_points(f.region);
    } else if (cfg.contains("region")) {
        if (!cfg["region"].is_array() || cfg["region"].empty()) throw ConfigError("region: expected a list of points");
        std::vector<Complex> pts;
        for (const auto& p : cfg["region"]) pts.push_back(json_complex(p, "region"));
        e.region = pts;
    }

    const bool explicit_problem = !f.eps.empty() || !f.layered.empty();
    if (bench_mode && cfg.contains("cases") && !explicit_problem) {
        if (!cfg["cases"].is_array()) throw ConfigError("cases: expected an array");
        r.cases_json = cfg["cases"];
        for (const auto& c : cfg["cases"]) {
            require_keys(c, {"label", "profile"}, "case");
            if (!c.contains("label") || !c.contains("profile")) throw ConfigError("case: needs label and profile");
            e.cases.push_back({c["label"].get<std::string>(), profile_from_json(c["profile"], e.radius)});
        }
    } else if (bench_mode && !explicit_problem && !problem.contains("profile")) {
        e.cases = bench::reference_cases(e.radius);
        r.cases_json = "reference";
    } else {
        e.cases.push_back({"case", profile_from_json(profile, e.radius)});
    }
    return r;
}

// --------------------------------------------------------------- output

std::string fmt(Real x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

void write_file(const fs::path& p, const std::string& content) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
}

json region_json(const SpectrumPolygon& poly, const std::string& kind) {
    json v = json::array();
    for (auto z : poly.vertices) v.push_back(complex_json(z));
    return {{"kind", kind}, {"vertices", v}};
}

std::string bench_csv(const std::vector<bench::BenchRow>& rows) {
    std::ostringstream os;
    os << "case,solver,n,L,converged,delta,rho_bound\n";
    for (const auto& r : rows)
        os << r.case_label << ',' << r.solver << ',' << r.n << ',' << r.matvecs << ',' << (r.converged ? "true" : "false") << ','
           << (r.error.empty() || r.matvecs > 0 ? fmt(r.delta) : std::string("nan")) << ','
           << (r.rho_bound ? fmt(*r.rho_bound) : std::string()) << '\n';
    return os.str();
}

json rows_json(const std::vector<bench::BenchRow>& rows) {
    json out = json::array();
    for (const auto& r : rows) {
        json j = {{"case", r.case_label}, {"solver", r.solver}, {"n", r.n}, {"L", r.matvecs}, {"converged", r.converged},
                  {"delta", r.delta}, {"wall_time", r.wall_time},
                  {"cost", {{"t_matvec", r.cost.t_matvec}, {"t_other", r.cost.t_other}, {"t_setup", r.cost.t_setup},
                            {"T_estimate", r.cost.total_estimate(r.matvecs)}, {"M_iter", r.cost.workspace_scalars}}}};
        j["rho_bound"] = r.rho_bound ? json(*r.rho_bound) : json(nullptr);
        if (!r.error.empty()) j["error"] = r.error;
        out.push_back(j);
    }
    return out;
}

std::string bench_table(const bench::ExperimentConfig& e, const std::vector<bench::BenchRow>& rows) {
    std::ostringstream os;
    os << "| case |";
    for (const auto& s : e.solvers) os << ' ' << s.label() << " |";
    os << "\n|---|";
    for (std::size_t i = 0; i < e.solvers.size(); ++i) os << "---|";
    os << '\n';
    std::size_t k = 0;
    for (const auto& c : e.cases) {
        os << "| " << c.label << " |";
        for (std::size_t i = 0; i < e.solvers.size(); ++i, ++k) {
            const auto& r = rows[k];
            os << ' ' << (r.converged ? "L=" + std::to_string(r.matvecs) : "no conv. (L=" + std::to_string(r.matvecs) + ")") << " |";
        }
        os << '\n';
    }
    os << "\nCost model: T = L (T_A + T_0) + T_M in seconds, M_ITER in complex scalars.\n\n";
    os << "| case | solver | L | T_A | T_0 | T_M | T | M_ITER |\n|---|---|---|---|---|---|---|---|\n";
    os << std::setprecision(3);
    for (const auto& r : rows)
        os << "| " << r.case_label << " | " << r.solver << (r.solver == "GSI" ? "" : std::to_string(r.n)) << " | " << r.matvecs
           << " | " << r.cost.t_matvec << " | " << r.cost.t_other << " | " << r.cost.t_setup << " | "
           << r.cost.total_estimate(r.matvecs) << " | " << r.cost.workspace_scalars << " |\n";
    return os.str();
}

// ------------------------------------------------------------- commands

struct RegionFlags {
    std::string segment, circle, triangle, points;
    int n = 1;
};

int cmd_params(const RegionFlags& rf, const std::string& out_dir) {
    const int given = !rf.segment.empty() + !rf.circle.empty() + !rf.triangle.empty() + !rf.points.empty();
    if (given != 1) throw ConfigError("give exactly one of --segment, --circle, --triangle, --points");
    if (rf.n < 1) throw ConfigError("--n must be at least 1");

    EnclosingCircle circle;
    IterationSchedule sched;
    json request;
    if (!rf.circle.empty()) {
        const auto parts = split(rf.circle, ':');
        if (parts.size() != 2) throw ConfigError("--circle expects cx,cy:R");
        const Complex c = parse_complex(parts[0]);
        const Real radius = parse_real(parts[1]);
        if (!(radius >= 0)) throw ConfigError("circle radius must be non-negative");
        if (std::abs(c) <= radius) throw Error(ErrorCode::OriginInsideHull, "the circle contains the origin");
        circle = EnclosingCircle::make(c, radius);
        sched = circle_schedule(circle, rf.n);
        request = {{"circle", {{"center", complex_json(c)}, {"radius", radius}}}};
    } else {
        const std::string& spec = !rf.segment.empty() ? rf.segment : !rf.triangle.empty() ? rf.triangle : rf.points;
        const auto pts = parse_points(spec);
        if (!rf.segment.empty() && pts.size() != 2) throw ConfigError("--segment expects two points");
        if (!rf.triangle.empty() && pts.size() != 3) throw ConfigError("--triangle expects three points");
        const SpectrumPolygon hull = convex_hull(pts);
        circle = optimal_circle(hull);
        sched = rf.points.empty() ? bench::schedule_for_region(hull, rf.n) : gsi_schedule(circle);
        json v = json::array();
        for (auto z : pts) v.push_back(complex_json(z));
        request = {{!rf.segment.empty() ? "segment" : !rf.triangle.empty() ? "triangle" : "points", v}};
    }
    request["n"] = rf.n;

    json taus = json::array();
    for (auto t : sched.taus) taus.push_back({{"tau_re", t.real()}, {"tau_im", t.imag()}});
    json j = {{"mu0", complex_json(circle.center)}, {"R", circle.radius}, {"alpha0", circle.alpha0}, {"rho0", circle.rho0},
              {"schedule", taus}, {"provenance", to_string(sched.provenance)}};
    j["rho_bound"] = sched.rho_bound ? json(*sched.rho_bound) : json(nullptr);
    j["config"] = request;
    const std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!out_dir.empty()) write_file(fs::path(out_dir) / "params.json", text);
    return kOk;
}

int cmd_spectrum(const Resolved& r, const std::string& out_dir) {
    const auto& e = r.exp;
    const auto& profile = e.cases.front().profile;
    const VsieOperator op = build_operator(profile, e.n_cells, e.k0);
    if (op.dim() > kMaxDenseExport) throw ConfigError("dense eigensolve is limited to 4000 unknowns; lower n_cells");
    const auto eigs = dense_eigenvalues(op.dense());
    const SpectrumRegion region = e.region ? SpectrumRegion::from_points(*e.region) : SpectrumRegion::from_points(low_frequency_region(profile).vertices);
    const Real band = r.band * std::max<Real>(region.diameter(), 0.0);
    const auto rep = containment_check(eigs, region, band);

    std::ostringstream csv;
    write_eigenvalue_csv(eigs, csv);
    json outliers = json::array();
    for (auto z : rep.outliers) outliers.push_back(complex_json(z));
    json j = {{"eigenvalue_count", eigs.size()}, {"containment_fraction", rep.containment_fraction},
              {"region", region_json(region.polygon, region.kind)}, {"band", band}, {"band_relative", r.band},
              {"outliers", outliers}, {"config", r.as_json()}};
    write_file(fs::path(out_dir) / "spectrum.csv", csv.str());
    write_file(fs::path(out_dir) / "report.json", j.dump(2) + "\n");
    std::cout << "eigenvalues: " << eigs.size() << "  containment: " << fmt(rep.containment_fraction) << "  region: " << region.kind
              << "  band: " << fmt(band) << '\n';
    return kOk;
}

int cmd_solve_or_bench(const Resolved& r, const std::string& out_dir, bool table) {
    const auto rows = bench::run(r.exp);
    json j = {{"rows", rows_json(rows)}, {"config", r.as_json()}};
    write_file(fs::path(out_dir) / "bench.csv", bench_csv(rows));
    write_file(fs::path(out_dir) / "report.json", j.dump(2) + "\n");
    if (table) {
        const std::string md = bench_table(r.exp, rows);
        write_file(fs::path(out_dir) / "table.md", md);
        std::cout << md;
    } else {
        std::cout << bench_csv(rows);
    }
    const bool any = std::any_of(rows.begin(), rows.end(), [](const auto& row) { return row.converged; });
    return any ? kOk : kNoConvergence;
}

void add_problem_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON config file");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--eps", f.eps, "homogeneous permittivity re[,im]");
    cmd->add_option("--shape", f.shape, "ball or cube")->check(CLI::IsMember({"ball", "cube"}));
    cmd->add_option("--layered", f.layered, "layered ball eps2:eps1, e.g. 3,1:2,2");
    cmd->add_option("--radius", f.radius, "ball radius in wavelengths");
    cmd->add_option("--n-cells", f.n_cells, "cells per axis");
    cmd->add_option("--k0", f.k0, "wavenumber");
    cmd->add_option("--solvers", f.solvers, "comma list: GSI,GCI5,GMRES10");
    cmd->add_option("--region", f.region, "spectrum region x,y:x,y:...");
    cmd->add_option("--tol", f.tol, "stopping threshold on delta");
    cmd->add_option("--max-matvecs", f.max_matvecs, "matvec budget per solve");
    cmd->add_option("--seed", f.seed, "seed");
    cmd->add_option("--band", f.band, "containment band relative to the region diameter");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Iteration parameters, VSIE spectra and solver comparisons"};
    app.require_subcommand(1);

    RegionFlags rf;
    std::string params_out;
    auto* params = app.add_subcommand("params", "optimal parameter and schedule for a spectrum region");
    params->add_option("--segment", rf.segment, "x,y:x,y");
    params->add_option("--circle", rf.circle, "cx,cy:R");
    params->add_option("--triangle", rf.triangle, "x,y:x,y:x,y");
    params->add_option("--points", rf.points, "x,y:x,y:... (polygon, simple iteration)");
    params->add_option("--n", rf.n, "parameters per layer");
    params->add_option("--out", params_out, "also write params.json here");

    Flags spectrum_flags, solve_flags, bench_flags;
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of the assembled operator and region containment");
    add_problem_flags(spectrum, spectrum_flags);
    auto* solve = app.add_subcommand("solve", "run solvers on one problem");
    add_problem_flags(solve, solve_flags);
    auto* bench = app.add_subcommand("bench", "solver comparison table");
    add_problem_flags(bench, bench_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadConfig;
    }

    try {
        if (params->parsed()) return cmd_params(rf, params_out);
        if (spectrum->parsed()) return cmd_spectrum(resolve(spectrum_flags, false), spectrum_flags.out);
        if (solve->parsed()) return cmd_solve_or_bench(resolve(solve_flags, false), solve_flags.out, false);
        if (bench->parsed()) return cmd_solve_or_bench(resolve(bench_flags, true), bench_flags.out, true);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kBadConfig;
    } catch (const Error& e) {
        std::cerr << to_string(e.code()) << ": " << e.what() << '\n';
        switch (e.code()) {
            case ErrorCode::OriginInsideHull:
            case ErrorCode::OriginOnSegment:
            case ErrorCode::DegenerateSegment:
            case ErrorCode::NoValidCircle:
            case ErrorCode::InvalidSegment:
            case ErrorCode::InvalidTriangle: return kBadRegion;
            case ErrorCode::InvalidConfig:
            case ErrorCode::InvalidProfile:
            case ErrorCode::BodyOutsideGrid: return kBadConfig;
            default: return kFailure;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kOk;
}
