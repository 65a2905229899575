/**
 * @file bench.hpp
 * @brief Solver comparison harness shared by the command-line tool and the
 *        acceptance checks.
 *
 * A case is a dielectric ball (or cube) illuminated by a plane wave. For each
 * case the VSIE operator is built once and every requested solver runs on it.
 * Schedules come from the predicted spectrum region unless a region is given
 * explicitly.
 */
#pragma once

#include <gci/core.hpp>
#include <gci/permittivity.hpp>
#include <gci/schedules.hpp>
#include <gci/solvers.hpp>
#include <gci/spectral_analysis.hpp>
#include <gci/spectrum_geometry.hpp>
#include <gci/vsie_operator.hpp>

#include <chrono>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace gci::bench {

enum class Method { Gsi, Gci, Gmres };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::Gsi: return "GSI";
        case Method::Gci: return "GCI";
        case Method::Gmres: return "GMRES";
    }
    return "?";
}

struct SolverSpec {
    Method method = Method::Gsi;
    int n = 1;  ///< layers for GCI, restart length for GMRES, ignored for GSI

    std::string label() const {
        return method == Method::Gsi ? std::string("GSI") : std::string(to_string(method)) + std::to_string(n);
    }
};

struct CaseSpec {
    std::string label;
    PermittivityProfile profile;
};

struct ExperimentConfig {
    std::vector<CaseSpec> cases;
    std::vector<SolverSpec> solvers;
    std::optional<std::vector<ComplexPoint>> region;  ///< overrides the predicted region
    Real radius = 1.0 / 30.0;                          ///< in wavelengths
    int n_cells = 16;
    Real k0 = 2.0 * std::numbers::pi;                  ///< wavelength 1
    Real tol = 1e-5;
    long max_matvecs = 10'000;
    unsigned seed = 0;
};

struct BenchRow {
    std::string case_label;
    std::string solver;  ///< GSI, GCI or GMRES
    int n = 0;
    long matvecs = 0;
    bool converged = false;
    Real delta = 0.0;
    Real wall_time = 0.0;
    std::optional<Real> rho_bound;
    CostModel cost;
    std::string error;
};

/// "2", "12+4i", "3-0.5i".
inline std::string format_complex(Complex z) {
    auto num = [](Real x) {
        std::ostringstream os;
        os << std::setprecision(17) << x;
        return os.str();
    };
    if (z.imag() == 0.0) return num(z.real());
    std::string im = num(std::abs(z.imag()));
    if (im == "1") im.clear();
    return num(z.real()) + (z.imag() < 0 ? "-" : "+") + im + "i";
}

/// The seven rows of the reference comparison at R = lambda / 30.
inline std::vector<CaseSpec> reference_cases(Real radius) {
    std::vector<CaseSpec> out;
    for (Complex eps : {Complex{2, 0}, Complex{8, 0}, Complex{15, 0}, Complex{20, 0}, Complex{12, 4}, Complex{15, 10}}) {
        std::string label = "eps=" + format_complex(eps);
        out.push_back({label, PermittivityProfile::homogeneous_ball(eps, radius)});
    }
    out.push_back({"layered",
                   PermittivityProfile::layered_ball({2, 2}, {3, 1}, radius / 2, 2 * radius / 3, radius)});
    return out;
}

inline std::vector<SolverSpec> reference_solvers() {
    return {{Method::Gsi, 1}, {Method::Gci, 5}, {Method::Gci, 10}, {Method::Gmres, 2}, {Method::Gmres, 5}, {Method::Gmres, 10}};
}

/// Schedule of n parameters for a convex region given by its hull.
///
/// point    -> the point itself
/// segment  -> Chebyshev nodes on a positive real segment, otherwise the
///             rotated-segment nodes after scaling one endpoint to 1
/// triangle -> nodes on the two sides from the vertex nearest 1 (scaled to 1)
/// polygon  -> the optimal circle, repeated n times
inline IterationSchedule schedule_for_region(const SpectrumPolygon& hull, int n) {
    if (n < 1) throw Error(ErrorCode::InvalidConfig, "schedule needs n >= 1");
    const auto& v = hull.vertices;
    if (v.empty()) throw Error(ErrorCode::InvalidConfig, "empty region");
    if (v.size() == 1) return IterationSchedule::from_mus(std::vector<Complex>(n, v[0]), Provenance::Gsi);

    auto rescaled = [](IterationSchedule s, Complex scale) {
        for (auto& mu : s.mus) mu *= scale;
        for (auto& t : s.taus) t /= scale;
        return s;
    };

    if (v.size() == 2) {
        Complex a = v[0], b = v[1];
        if (a.imag() == 0.0 && b.imag() == 0.0 && std::min(a.real(), b.real()) > 0.0)
            return chebyshev_real_segment(std::min(a.real(), b.real()), std::max(a.real(), b.real()), n);
        if (std::abs(b - 1.0) < std::abs(a - 1.0)) std::swap(a, b);
        return rescaled(rotated_segment_schedule(b / a, n), a);
    }

    if (v.size() == 3) {
        std::size_t k = 0;
        for (std::size_t i = 1; i < 3; ++i)
            if (std::abs(v[i] - 1.0) < std::abs(v[k] - 1.0)) k = i;
        const Complex base = v[k];
        return rescaled(triangle_sides_schedule(v[(k + 1) % 3] / base, v[(k + 2) % 3] / base, n), base);
    }

    return circle_schedule(optimal_circle(hull), n);
}

inline SpectrumPolygon case_region(const ExperimentConfig& cfg, const CaseSpec& c) {
    if (cfg.region) return convex_hull(*cfg.region);
    return low_frequency_region(c.profile);
}

/// Plane wave along +z polarized along x.
inline Vector default_incident_field(const VoxelGrid& grid, Real k0) {
    return incident_plane_wave(grid, k0, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0});
}

/// Runs every solver of `cfg` on one case. Per-solver failures are recorded
/// in the row and do not stop the run.
inline std::vector<BenchRow> run_case(const ExperimentConfig& cfg, const CaseSpec& c) {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    const VsieOperator op = build_operator(c.profile, cfg.n_cells, cfg.k0);
    const Vector f = default_incident_field(op.grid(), cfg.k0);
    const Real t_setup = std::chrono::duration<Real>(Clock::now() - t0).count();
    const SpectrumPolygon region = case_region(cfg, c);

    SolveConfig sc;
    sc.tol = cfg.tol;
    sc.max_matvecs = cfg.max_matvecs;

    std::vector<BenchRow> rows;
    for (const auto& s : cfg.solvers) {
        BenchRow row;
        row.case_label = c.label;
        row.solver = to_string(s.method);
        row.n = s.method == Method::Gsi ? 1 : s.n;
        try {
            SolveReport rep;
            switch (s.method) {
                case Method::Gsi: {
                    const EnclosingCircle circle = optimal_circle(region);
                    row.rho_bound = circle.rho0;
                    rep = gsi_solve(op, f, circle.center, sc);
                    break;
                }
                case Method::Gci: {
                    const IterationSchedule sched = schedule_for_region(region, s.n);
                    row.rho_bound = sched.rho_bound;
                    rep = gci_solve(op, f, sched, sc);
                    break;
                }
                case Method::Gmres: rep = gmres_solve(op, f, s.n, sc); break;
            }
            row.matvecs = rep.matvecs;
            row.converged = rep.converged;
            row.delta = rep.final_delta();
            row.wall_time = rep.wall_time;
            row.cost = rep.cost;
            row.cost.t_setup = t_setup;
            if (!rep.converged) row.error = rep.reason;
        } catch (const Error& e) {
            row.error = std::string(gci::to_string(e.code())) + ": " + e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<BenchRow> run(const ExperimentConfig& cfg) {
    std::vector<BenchRow> rows;
    for (const auto& c : cfg.cases) {
        auto r = run_case(cfg, c);
        rows.insert(rows.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    }
    return rows;
}

}  // namespace gci::bench
