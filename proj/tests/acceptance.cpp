// Acceptance checks. One PASS/FAIL line per criterion; the exit status is
// nonzero when any criterion fails.

#include <gci/bench.hpp>
#include <gci/schedules.hpp>
#include <gci/solvers.hpp>
#include <gci/spectral_analysis.hpp>
#include <gci/spectrum_geometry.hpp>
#include <gci/vsie_operator.hpp>

#include <chrono>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"

using namespace gci;

namespace {

using Clock = std::chrono::steady_clock;
constexpr Real kPi = std::numbers::pi;
constexpr Real kRadius = 1.0 / 30.0;
constexpr Real kK0 = 2 * kPi;

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("%s  criterion %2d  %-44s %s\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += !pass;
}

Real seconds(Clock::time_point t0) { return std::chrono::duration<Real>(Clock::now() - t0).count(); }

std::string str(Real x, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << x;
    return os.str();
}

void optimizer_vs_brute_force() {
    std::mt19937_64 rng(1);
    const auto t0 = Clock::now();
    Real worst = 0;
    int bad = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto pts = oracle::random_convex_polygon(rng);
        const Real a = optimal_circle(convex_hull(pts)).rho0;
        const Real b = brute_force_optimal(pts).rho0;
        worst = std::max(worst, std::abs(a - b));
        bad += std::abs(a - b) > 1e-6;
    }
    const Real secs = seconds(t0);
    report(1, bad == 0 && secs < 60, "optimal circle vs brute force",
           "max |d rho0| = " + str(worst, 3) + ", mismatches " + std::to_string(bad) + ", " + str(secs, 3) + " s");
}

void classical_segment() {
    Real err_mu = 0, err_rho = 0;
    for (auto [m, M] : {std::pair{1.0, 3.0}, {1.0, 20.0}, {0.01, 1.0}, {2.5, 2.75}, {7.0, 40.0}}) {
        const auto c = optimal_circle(convex_hull({Complex{m, 0}, Complex{M, 0}}));
        err_mu = std::max(err_mu, std::abs(c.center - Complex((M + m) / 2, 0)));
        err_rho = std::max(err_rho, std::abs(c.rho0 - (M - m) / (M + m)));
    }
    report(2, err_mu <= 1e-12 && err_rho <= 1e-12, "classical segment recovery",
           "max err mu0 = " + str(err_mu, 3) + ", max err rho0 = " + str(err_rho, 3));
}

void chebyshev_layer_bound() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<Real> u(1, 3);
    Vector d(100);
    for (auto& x : d) x = u(rng);
    const auto s = chebyshev_real_segment(1, 3, 5);
    const Real bound = minimax_value(s, sample_segment(1, 3, kBoundarySamples));
    const auto ratios = oracle::layer_ratios(DiagonalOperator(d), oracle::random_vector(100, rng), s, 10);
    const Real worst = *std::max_element(ratios.begin(), ratios.end());
    report(3, worst <= bound + 1e-10, "Chebyshev layer bound, n=5 on [1,3]",
           "worst layer ratio " + str(worst, 6) + " vs minimax " + str(bound, 6));
}

void circle_degeneracy() {
    const auto boundary = sample_circle(2, 1, 2048);
    std::mt19937_64 rng(4);
    std::normal_distribution<Real> nd;
    Real worst_gap = 1e300;
    Real sched_err = 0;
    for (int n = 1; n <= 6; ++n) {
        auto objective = [&](const std::vector<Complex>& taus) { return minimax_value(IterationSchedule::from_taus(taus), boundary); };
        Real best = 1e300;
        for (int start = 0; start < 8; ++start) {
            std::vector<Complex> taus(n);
            for (auto& t : taus) t = Complex{0.5, 0} + (start == 0 ? 0.0 : 0.25) * Complex{nd(rng), nd(rng)};
            Real val = objective(taus);
            for (Real step = 0.2; step > 1e-7; step *= 0.5) {
                bool improved = true;
                while (improved) {
                    improved = false;
                    for (int k = 0; k < n; ++k)
                        for (Complex dir : {Complex{1, 0}, Complex{-1, 0}, Complex{0, 1}, Complex{0, -1}}) {
                            auto trial = taus;
                            trial[k] += step * dir;
                            if (trial[k] == Complex{}) continue;
                            if (const Real v = objective(trial); v < val) {
                                val = v;
                                taus = trial;
                                improved = true;
                            }
                        }
                }
            }
            best = std::min(best, val);
        }
        worst_gap = std::min(worst_gap, best - std::pow(0.5, n));
        const auto s = circle_schedule(EnclosingCircle::make(2, 1), n);
        sched_err = std::max(sched_err, std::abs(minimax_value(s, sample_circle(2, 1, kBoundarySamples)) - std::pow(0.5, n)));
    }
    report(4, worst_gap >= -1e-4 && sched_err <= 1e-10, "circle degeneracy, n=1..6",
           "min (found - 2^-n) = " + str(worst_gap, 3) + ", schedule err = " + str(sched_err, 3));
}

void fft_fidelity_and_scaling() {
    std::mt19937_64 rng(5);
    Real worst = 0;
    for (int n : {2, 4, 6, 8}) {
        const auto p = PermittivityProfile::homogeneous_ball({12, 4}, kRadius);
        const auto op = build_operator(p, n, kK0);
        const Matrix A = oracle::dense_vsie(op.grid(), kK0);
        for (int t = 0; t < 10; ++t) {
            const Vector x = oracle::random_vector(op.dim(), rng);
            Vector y;
            op.apply(x, y);
            const Vector ref = A * x;
            worst = std::max(worst, (y - ref).norm() / ref.norm());
        }
    }
    // Least-squares slope of log t against log(N log N).
    std::vector<Real> lx, ly;
    for (int n : {8, 16, 32}) {
        const auto op = build_operator(PermittivityProfile::homogeneous_cube(8, kRadius), n, kK0);
        const Vector x = oracle::random_vector(op.dim(), rng);
        Vector y;
        Real best = 1e300;
        for (int rep = 0; rep < (n < 32 ? 20 : 5); ++rep) {
            const auto t0 = Clock::now();
            op.apply(x, y);
            best = std::min(best, seconds(t0));
        }
        const Real N = static_cast<Real>(op.dim());
        lx.push_back(std::log(N * std::log(N)));
        ly.push_back(std::log(best));
    }
    const Real mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3;
    Real sxy = 0, sxx = 0;
    for (int i = 0; i < 3; ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    const Real slope = sxy / sxx;
    report(5, worst <= 1e-10 && slope <= 1.3, "FFT matvec fidelity and scaling",
           "max rel err " + str(worst, 3) + ", exponent " + str(slope, 3) + " on N log N, n=32 matvec " + str(std::exp(ly[2]), 3) + " s");
}

void spectrum_containment() {
    std::string detail;
    bool pass = true;
    for (Real eps : {2.0, 8.0, 15.0, 20.0}) {
        const auto p = PermittivityProfile::homogeneous_ball(eps, kRadius);
        const auto eigs = dense_eigenvalues(build_operator(p, 6, kK0).dense());
        const auto rep = containment_check(eigs, SpectrumRegion::from_points({Complex{1, 0}, Complex{eps, 0}}), 0.15 * (eps - 1));
        pass = pass && rep.containment_fraction >= 0.99;
        detail += "eps=" + str(eps) + ": " + str(rep.containment_fraction) + "  ";
    }
    const auto lay = PermittivityProfile::layered_ball({3, 1}, {2, 2}, kRadius / 2, 2 * kRadius / 3, kRadius);
    const auto tri = SpectrumRegion::from_points({{1, 0}, {3, 1}, {2, 2}});
    const auto eigs = dense_eigenvalues(build_operator(lay, 6, kK0).dense());
    const auto rep = containment_check(eigs, tri, 0.15 * tri.diameter());
    pass = pass && rep.containment_fraction >= 0.99;
    detail += "layered: " + str(rep.containment_fraction);
    report(6, pass, "spectrum containment, n=6", detail);
}

void shape_independence() {
    // Ball on a 6^3 grid has 136 body cells; the cube of equal volume filling
    // a 5^3 grid has 125.
    const Real eps = 8;
    const auto ball = build_operator(PermittivityProfile::homogeneous_ball(eps, kRadius), 6, kK0);
    const Real side = kRadius * std::cbrt(4 * kPi / 3);
    const auto cube = build_operator(PermittivityProfile::homogeneous_cube(eps, side), 5, kK0);
    const auto eb = body_eigenvalues(ball);
    const auto ec = body_eigenvalues(cube);
    const Real h = hausdorff_distance(eb, ec);
    report(7, h <= 0.2 * (eps - 1), "shape independence, cube vs ball eps=8",
           "Hausdorff " + str(h) + " (limit " + str(0.2 * (eps - 1)) + "), unknowns " + std::to_string(eb.size()) + " vs " +
               std::to_string(ec.size()));
}

void static_convergence() {
    const auto p = PermittivityProfile::homogeneous_ball(2, kRadius);
    const std::vector<Real> ks{2 * kPi / 10 / kRadius, 2 * kPi / 30 / kRadius, 2 * kPi / 100 / kRadius};
    const auto drift = k0_sweep_spectrum_drift(p, 6, ks);
    const bool pass = drift[0].second > drift[1].second && drift[1].second > drift[2].second;
    report(8, pass, "static limit, drift decreasing in k0",
           "drift " + str(drift[0].second) + " > " + str(drift[1].second) + " > " + str(drift[2].second));
}

void reference_table() {
    bench::ExperimentConfig cfg;
    cfg.radius = kRadius;
    cfg.n_cells = 16;
    cfg.k0 = kK0;
    cfg.solvers = {{bench::Method::Gsi, 1}, {bench::Method::Gci, 10}, {bench::Method::Gmres, 10}};
    auto row = [&](Complex eps) {
        return bench::run_case(cfg, {"eps", PermittivityProfile::homogeneous_ball(eps, kRadius)});
    };
    auto L = [](const bench::BenchRow& r) { return r.converged ? r.matvecs : std::numeric_limits<long>::max(); };
    const auto r2 = row(2), r15 = row(15), r20 = row(20), r12 = row({12, 4});
    const bool a = r2[0].converged && r2[0].matvecs <= 25;
    const bool b = r15[2].converged && r15[1].converged && r15[2].matvecs >= 3 * r15[1].matvecs;
    const bool c = r20[1].converged && L(r20[1]) < L(r20[0]);
    const bool d = std::all_of(r12.begin(), r12.end(), [](const auto& r) { return r.converged && r.matvecs <= 200; });
    auto mark = [](bool ok) { return ok ? "ok" : "FAILS"; };
    std::string detail = "(a) eps=2 GSI L=" + std::to_string(r2[0].matvecs) + " " + mark(a) + "; (b) eps=15 GMRES10 L=" +
                         std::to_string(r15[2].matvecs) + " vs 3*GCI10 L=3*" + std::to_string(r15[1].matvecs) + " " + mark(b) +
                         "; (c) eps=20 GCI10 L=" + std::to_string(r20[1].matvecs) + " < GSI L=" + std::to_string(r20[0].matvecs) + " " +
                         mark(c) + "; (d) eps=12+4i L=" + std::to_string(r12[0].matvecs) + "/" + std::to_string(r12[1].matvecs) + "/" +
                         std::to_string(r12[2].matvecs) + " " + mark(d);
    report(9, a && b && c && d, "reference table ordering, n_cells=16", detail);
}

void solver_cross_validation() {
    std::mt19937_64 rng(10);
    std::normal_distribution<Real> nd;
    Real worst_err = 0, worst_delta = 0;
    int unconverged = 0;
    for (int t = 0; t < 50; ++t) {
        Matrix a(50, 50);
        for (auto& x : a.reshaped()) x = {nd(rng), nd(rng)};
        a *= 0.3 / std::sqrt(50.0);
        a.diagonal().array() += std::polar(3.0, 2 * kPi * t / 50.0);
        const Vector f = oracle::random_vector(50, rng);
        const Vector x = a.partialPivLu().solve(f);
        const Vector ev = a.eigenvalues();
        const std::vector<Complex> eig(ev.data(), ev.data() + ev.size());
        const auto hull = convex_hull(eig);
        SolveConfig cfg;
        cfg.tol = 1e-10;
        const DenseOperator op(a);
        for (const auto& rep : {gsi_solve(op, f, optimal_circle(hull).center, cfg),
                                gci_solve(op, f, bench::schedule_for_region(hull, 5), cfg), gmres_solve(op, f, 10, cfg)}) {
            unconverged += !rep.converged;
            worst_delta = std::max(worst_delta, rep.final_delta());
            worst_err = std::max(worst_err, (rep.solution - x).norm() / x.norm());
        }
    }
    report(10, unconverged == 0 && worst_delta <= 1e-10 && worst_err <= 1e-8, "solver cross-validation vs LU, 50 systems",
           "max delta " + str(worst_delta, 3) + ", max rel err " + str(worst_err, 3) + ", unconverged " + std::to_string(unconverged));
}

}  // namespace

int main() {
    optimizer_vs_brute_force();
    classical_segment();
    chebyshev_layer_bound();
    circle_degeneracy();
    fft_fidelity_and_scaling();
    spectrum_containment();
    shape_independence();
    static_convergence();
    reference_table();
    solver_cross_validation();
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
