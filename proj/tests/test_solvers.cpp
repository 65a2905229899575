#include <gci/solvers.hpp>
#include <gci/spectrum_geometry.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"

using namespace gci;

namespace {

Matrix random_diag_dominant(int n, std::mt19937_64& rng) {
    std::normal_distribution<Real> nd;
    Matrix a(n, n);
    for (auto& x : a.reshaped()) x = {nd(rng), nd(rng)};
    a /= std::sqrt(static_cast<Real>(n));
    a *= 0.3;
    a.diagonal().array() += Complex{3.0, 1.0};
    return a;
}

}  // namespace

TEST(Gsi, IdentityOneIteration) {
    std::mt19937_64 rng(1);
    const Vector f = oracle::random_vector(4, rng);
    const auto rep = gsi_solve(DenseOperator(Matrix::Identity(4, 4)), f, 1.0);
    EXPECT_TRUE(rep.converged);
    EXPECT_EQ(rep.matvecs, 1);
    EXPECT_LT((rep.solution - f).norm(), 1e-15);
}

TEST(Gsi, TwoByTwoHalvesResidual) {
    Vector d(2);
    d << 1.0, 3.0;
    Vector f = Vector::Ones(2);
    const auto rep = gsi_solve(DiagonalOperator(d), f, 2.0);
    ASSERT_TRUE(rep.converged);
    for (std::size_t k = 1; k < rep.residual_history.size(); ++k)
        EXPECT_NEAR(rep.residual_history[k] / rep.residual_history[k - 1], 0.5, 1e-12);
    // The zero start costs no product, so the count is one below the closed
    // form that counts the initial residual as a product.
    const long expected = static_cast<long>(std::ceil(std::log(1e-5) / std::log(0.5)));
    EXPECT_EQ(rep.matvecs, expected);
    EXPECT_EQ(rep.residual_history.size(), static_cast<std::size_t>(rep.matvecs) + 1);
}

TEST(Gsi, CircleSpectrumAsymptoticRate) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<Real> u(0, 1);
    const Complex c{2, 1};
    Vector d(200);
    for (auto& x : d) x = c + std::polar(0.5 * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng));
    SolveConfig cfg;
    cfg.tol = 1e-12;
    const auto rep = gsi_solve(DiagonalOperator(d), oracle::random_vector(200, rng), c, cfg);
    ASSERT_TRUE(rep.converged);
    const auto& h = rep.residual_history;
    const std::size_t k = h.size() - 1;
    const Real rate = std::pow(h[k] / h[k / 2], 1.0 / (k - k / 2));
    EXPECT_LE(rate, 0.5 / std::abs(c) + 0.01);
}

TEST(Gsi, ZeroMuRejected) { EXPECT_THROW(gsi_solve(DenseOperator(Matrix::Identity(2, 2)), Vector::Ones(2), 0.0), Error); }

TEST(Gci, GsiScheduleMatchesGsiExactly) {
    std::mt19937_64 rng(4);
    const Matrix a = random_diag_dominant(20, rng);
    const Vector f = oracle::random_vector(20, rng);
    const auto circle = EnclosingCircle::make({3, 1}, 1.2);
    const auto r1 = gsi_solve(DenseOperator(a), f, circle.center);
    const auto r2 = gci_solve(DenseOperator(a), f, gsi_schedule(circle));
    EXPECT_EQ(r1.residual_history, r2.residual_history);
    EXPECT_EQ(r1.solution, r2.solution);
}

TEST(Gci, ChebyshevLayerBound) {
    Vector d(20);
    for (int i = 0; i < 20; ++i) d[i] = 1.0 + 2.0 * i / 19.0;
    const auto s = chebyshev_real_segment(1, 3, 5);
    std::vector<Complex> spec(d.data(), d.data() + d.size());
    const Real bound = minimax_value(s, spec);
    std::mt19937_64 rng(2);
    for (Real ratio : oracle::layer_ratios(DiagonalOperator(d), oracle::random_vector(20, rng), s, 10))
        EXPECT_LE(ratio, bound + 1e-10);
}

TEST(Gci, CircleLayerBound) {
    const auto pts = sample_circle(2, 1, 64);
    Vector d = Eigen::Map<const Vector>(pts.data(), pts.size());
    const auto s = circle_schedule(EnclosingCircle::make(2, 1), 4);
    std::mt19937_64 rng(8);
    for (Real ratio : oracle::layer_ratios(DiagonalOperator(d), oracle::random_vector(64, rng), s, 10))
        EXPECT_LE(ratio, std::pow(0.5, 4) + 1e-10);
}

// After one layer the residual equals prod_m (I - tau_m A) applied to r0.
TEST(Gci, LayerIsPolynomialInA) {
    std::mt19937_64 rng(6);
    const Matrix a = random_diag_dominant(30, rng);
    const Vector f = oracle::random_vector(30, rng);
    const auto s = IterationSchedule::from_mus({Complex{3, 1}, Complex{2.5, 1.3}, Complex{3.4, 0.8}}, Provenance::Manual);
    SolveConfig cfg;
    cfg.tol = 1e-300;
    cfg.max_matvecs = 3;
    const auto rep = gci_solve(DenseOperator(a), f, s, cfg);
    Vector r = -f;
    for (auto t : s.taus) r = r - t * (a * r);
    EXPECT_LT((a * rep.solution - f - r).norm(), 1e-13 * f.norm());
    EXPECT_NEAR(rep.residual_history.back(), r.norm() / f.norm(), 1e-13);
}

TEST(Gmres, IdentityOneMatvec) {
    const auto rep = gmres_solve(DenseOperator(Matrix::Identity(5, 5)), Vector::Ones(5), 3);
    EXPECT_TRUE(rep.converged);
    EXPECT_EQ(rep.matvecs, 1);
}

TEST(Gmres, FullKrylovSpace) {
    Vector d(10);
    for (int i = 0; i < 10; ++i) d[i] = i + 1.0;
    std::mt19937_64 rng(10);
    const Vector f = oracle::random_vector(10, rng);
    SolveConfig cfg;
    cfg.tol = 1e-12;
    const auto rep = gmres_solve(DiagonalOperator(d), f, 10, cfg);
    EXPECT_TRUE(rep.converged);
    EXPECT_LE(rep.matvecs, 10);
    EXPECT_LT((d.asDiagonal() * rep.solution - f).norm() / f.norm(), 1e-11);
}

TEST(Gmres, RestartRecomputesTrueResidual) {
    std::mt19937_64 rng(12);
    const Matrix a = random_diag_dominant(40, rng);
    const Vector f = oracle::random_vector(40, rng);
    SolveConfig cfg;
    cfg.tol = 1e-10;
    const auto rep = gmres_solve(DenseOperator(a), f, 3, cfg);
    ASSERT_TRUE(rep.converged);
    EXPECT_LE((a * rep.solution - f).norm() / f.norm(), 1e-10 * 1.01);
    EXPECT_EQ(rep.residual_history.size(), static_cast<std::size_t>(rep.matvecs) + 1);
    EXPECT_EQ(rep.cost.workspace_vectors, 3 + 3);
}

TEST(Solvers, AgreeWithDenseLu) {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 5; ++t) {
        const Matrix a = random_diag_dominant(50, rng);
        const Vector f = oracle::random_vector(50, rng);
        const Vector x = a.partialPivLu().solve(f);
        SolveConfig cfg;
        cfg.tol = 1e-10;
        const Vector ev = a.eigenvalues();
        std::vector<Complex> eig(ev.data(), ev.data() + ev.size());
        const auto circle = optimal_circle(convex_hull(eig));
        const auto g = gsi_solve(DenseOperator(a), f, circle.center, cfg);
        const auto m = gmres_solve(DenseOperator(a), f, 10, cfg);
        for (const auto* rep : {&g, &m}) {
            ASSERT_TRUE(rep->converged);
            EXPECT_LT((rep->solution - x).norm() / x.norm(), 1e-8);
        }
    }
}

TEST(Solvers, ErrorBoundedByResidual) {
    // ||u - x|| <= ||A^{-1}|| ||A u - f||.
    std::mt19937_64 rng(14);
    const Matrix a = random_diag_dominant(30, rng);
    const Vector f = oracle::random_vector(30, rng);
    const Vector x = a.partialPivLu().solve(f);
    const Real inv_norm = 1.0 / Eigen::JacobiSVD<Matrix>(a).singularValues().minCoeff();
    const auto rep = gsi_solve(DenseOperator(a), f, Complex{3, 1});
    EXPECT_LE((rep.solution - x).norm(), inv_norm * rep.final_delta() * f.norm() * (1 + 1e-10));
}

TEST(Solvers, ZeroRightHandSide) {
    const auto rep = gmres_solve(DenseOperator(Matrix::Identity(3, 3)), Vector::Zero(3), 2);
    EXPECT_TRUE(rep.converged);
    EXPECT_EQ(rep.matvecs, 0);
}

TEST(Solvers, BudgetAndDivergence) {
    Vector d(2);
    d << 1.0, 3.0;
    SolveConfig cfg;
    cfg.max_matvecs = 5;
    const auto rep = gsi_solve(DiagonalOperator(d), Vector::Ones(2), 2.0, cfg);
    EXPECT_FALSE(rep.converged);
    EXPECT_EQ(rep.matvecs, 5);
    const auto div = gsi_solve(DiagonalOperator(d), Vector::Ones(2), 0.5);
    EXPECT_FALSE(div.converged);
    EXPECT_EQ(div.reason, "diverged");
}

TEST(Solvers, DimensionMismatch) {
    EXPECT_THROW(gsi_solve(DenseOperator(Matrix::Identity(3, 3)), Vector::Ones(2), 1.0), Error);
}

TEST(Solvers, CostModelWorkspace) {
    Vector d = Vector::Constant(8, 2.0);
    const auto g = gsi_solve(DiagonalOperator(d), Vector::Ones(8), 2.0);
    const auto m = gmres_solve(DiagonalOperator(d), Vector::Ones(8), 5);
    EXPECT_EQ(g.cost.workspace_scalars, 3 * 8);
    EXPECT_EQ(m.cost.workspace_scalars, (5 + 3) * 8);
    EXPECT_GE(g.cost.total_estimate(g.matvecs), 0.0);
}
