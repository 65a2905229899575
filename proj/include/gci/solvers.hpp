/**
 * @file solvers.hpp
 * @brief Generalized simple iteration, layered generalized Chebyshev
 *        iteration and restarted GMRES against any LinearOperator.
 *
 * Cost is counted in matrix-vector products (L). The relative residual
 * delta = ||A u - f|| / ||f|| is checked after every product. A zero initial
 * guess has the residual -f for free, so no product is spent on it.
 */
#pragma once

#include <gci/core.hpp>
#include <gci/linear_operator.hpp>
#include <gci/schedules.hpp>

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace gci {

struct SolveConfig {
    Real tol = 1e-5;
    long max_matvecs = 10'000;
    std::optional<Vector> initial_guess;
    Real divergence_threshold = 1e8;
};

/// Estimates for T ~ L (T_A + T_0) + T_M and the iteration workspace.
struct CostModel {
    Real t_matvec = 0.0;      ///< mean seconds per matvec (T_A)
    Real t_other = 0.0;       ///< mean seconds of non-matvec work per iteration (T_0)
    Real t_setup = 0.0;       ///< operator setup seconds (T_M), filled in by the caller
    long workspace_vectors = 0;  ///< length-dim complex vectors held by the iteration
    long workspace_scalars = 0;  ///< workspace_vectors * dim (M_ITER)

    Real total_estimate(long matvecs) const { return matvecs * (t_matvec + t_other) + t_setup; }
};

struct SolveReport {
    Vector solution;
    long matvecs = 0;
    std::vector<Real> residual_history;  ///< delta before any work, then one entry per matvec
    bool converged = false;
    std::string reason;
    Real wall_time = 0.0;
    CostModel cost;

    Real final_delta() const { return residual_history.back(); }
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline Real seconds_since(Clock::time_point t0) {
    return std::chrono::duration<Real>(Clock::now() - t0).count();
}

/// Times matvecs separately from the rest of the iteration.
template <LinearOperator Op>
class CountingApply {
public:
    explicit CountingApply(const Op& op) : op_(op) {}

    void operator()(const Vector& x, Vector& y) {
        const auto t0 = Clock::now();
        op_.apply(x, y);
        seconds_ += seconds_since(t0);
        ++count_;
    }

    long count() const { return count_; }
    Real seconds() const { return seconds_; }

private:
    const Op& op_;
    long count_ = 0;
    Real seconds_ = 0.0;
};

inline void validate(const SolveConfig& cfg) {
    if (!(cfg.tol > 0.0)) throw Error(ErrorCode::InvalidConfig, "tol must be positive");
    if (cfg.max_matvecs < 1) throw Error(ErrorCode::InvalidConfig, "max_matvecs must be at least 1");
}

inline void finish_cost(SolveReport& rep, Real matvec_seconds, Index dim, long vectors) {
    rep.cost.t_matvec = rep.matvecs > 0 ? matvec_seconds / rep.matvecs : 0.0;
    rep.cost.t_other = rep.matvecs > 0 ? std::max(0.0, rep.wall_time - matvec_seconds) / rep.matvecs : 0.0;
    rep.cost.workspace_vectors = vectors;
    rep.cost.workspace_scalars = vectors * static_cast<long>(dim);
}

}  // namespace detail

/// Layered stationary iteration u <- u - tau_{m} (A u - f), cycling through the
/// schedule's parameters. A one-parameter schedule is the simple iteration.
template <LinearOperator Op>
SolveReport gci_solve(const Op& op, const Vector& f, const IterationSchedule& schedule, const SolveConfig& cfg = {}) {
    detail::validate(cfg);
    if (schedule.n() < 1) throw Error(ErrorCode::InvalidSchedule, "empty schedule");
    const Index dim = op.dim();
    check_dim(dim, f.size(), "right-hand side");

    const auto t0 = detail::Clock::now();
    detail::CountingApply<Op> apply(op);
    SolveReport rep;

    const Real fnorm = f.norm();
    Vector u = cfg.initial_guess ? *cfg.initial_guess : Vector::Zero(dim);
    check_dim(dim, u.size(), "initial guess");
    if (fnorm == 0.0) {
        rep.solution = Vector::Zero(dim);
        rep.residual_history = {0.0};
        rep.converged = true;
        rep.reason = "zero right-hand side";
        return rep;
    }

    Vector r(dim);
    if (cfg.initial_guess) {
        apply(u, r);
        r -= f;
    } else {
        r = -f;
    }
    rep.residual_history.push_back(r.norm() / fnorm);

    std::size_t m = 0;
    while (true) {
        const Real delta = rep.residual_history.back();
        if (delta <= cfg.tol) {
            rep.converged = true;
            rep.reason = "tolerance reached";
            break;
        }
        if (!std::isfinite(delta) || delta > cfg.divergence_threshold) {
            rep.reason = "diverged";
            break;
        }
        if (apply.count() >= cfg.max_matvecs) {
            rep.reason = "matvec budget exhausted";
            break;
        }
        u -= schedule.taus[m] * r;
        m = (m + 1) % schedule.n();
        apply(u, r);
        r -= f;
        rep.residual_history.push_back(r.norm() / fnorm);
    }

    rep.solution = std::move(u);
    rep.matvecs = apply.count();
    rep.wall_time = detail::seconds_since(t0);
    detail::finish_cost(rep, apply.seconds(), dim, 3);
    return rep;
}

/// Simple iteration u <- u - (A u - f) / mu.
template <LinearOperator Op>
SolveReport gsi_solve(const Op& op, const Vector& f, ComplexPoint mu, const SolveConfig& cfg = {}) {
    if (mu == ComplexPoint{}) throw Error(ErrorCode::ZeroMu, "iteration parameter mu must be nonzero");
    return gci_solve(op, f, IterationSchedule::from_mus({mu}, Provenance::Gsi), cfg);
}

/// Restarted GMRES(restart): modified Gram-Schmidt Arnoldi with one
/// re-orthogonalization pass on loss of orthogonality, Givens least squares.
/// The in-cycle delta is the least-squares estimate; each restart recomputes
/// the true residual (one extra product).
template <LinearOperator Op>
SolveReport gmres_solve(const Op& op, const Vector& f, int restart, const SolveConfig& cfg = {}) {
    detail::validate(cfg);
    if (restart < 1) throw Error(ErrorCode::InvalidConfig, "GMRES restart must be at least 1");
    const Index dim = op.dim();
    check_dim(dim, f.size(), "right-hand side");

    const auto t0 = detail::Clock::now();
    detail::CountingApply<Op> apply(op);
    SolveReport rep;

    const Real fnorm = f.norm();
    Vector x = cfg.initial_guess ? *cfg.initial_guess : Vector::Zero(dim);
    check_dim(dim, x.size(), "initial guess");
    if (fnorm == 0.0) {
        rep.solution = Vector::Zero(dim);
        rep.residual_history = {0.0};
        rep.converged = true;
        rep.reason = "zero right-hand side";
        return rep;
    }

    const int m = restart;
    Matrix basis(dim, m + 1);
    Matrix hess = Matrix::Zero(m + 1, m);
    std::vector<Complex> cs(m), sn(m), g(m + 1);
    Vector w(dim), r(dim);

    // r = f - A x
    if (cfg.initial_guess) {
        apply(x, r);
        r = f - r;
    } else {
        r = f;
    }
    Real beta = r.norm();
    rep.residual_history.push_back(beta / fnorm);

    auto make_rotation = [](Complex a, Complex b, Complex& c, Complex& s) {
        const Real na = std::abs(a), nb = std::abs(b);
        if (nb == 0.0) {
            c = 1.0;
            s = 0.0;
        } else if (na == 0.0) {
            c = 0.0;
            s = std::conj(b) / nb;
        } else {
            const Real t = std::hypot(na, nb);
            c = na / t;
            s = (a / na) * std::conj(b) / t;
        }
    };

    while (true) {
        const Real delta = rep.residual_history.back();
        if (delta <= cfg.tol) {
            rep.converged = true;
            rep.reason = "tolerance reached";
            break;
        }
        if (!std::isfinite(delta) || delta > cfg.divergence_threshold) {
            rep.reason = "diverged";
            break;
        }
        if (apply.count() >= cfg.max_matvecs) {
            rep.reason = "matvec budget exhausted";
            break;
        }

        basis.col(0) = r / beta;
        hess.setZero();
        std::fill(g.begin(), g.end(), Complex{});
        g[0] = beta;
        int k = 0;
        bool breakdown = false;
        for (; k < m && apply.count() < cfg.max_matvecs; ++k) {
            apply(basis.col(k), w);
            const Real wnorm0 = w.norm();
            for (int i = 0; i <= k; ++i) {
                const Complex h = basis.col(i).dot(w);
                hess(i, k) = h;
                w -= h * basis.col(i);
            }
            Real wnorm = w.norm();
            Real loss = 0.0;
            if (wnorm > 0.0)
                for (int i = 0; i <= k; ++i) loss = std::max(loss, std::abs(basis.col(i).dot(w)) / wnorm);
            if (loss > 1e-8) {
                for (int i = 0; i <= k; ++i) {
                    const Complex h = basis.col(i).dot(w);
                    hess(i, k) += h;
                    w -= h * basis.col(i);
                }
                wnorm = w.norm();
            }
            hess(k + 1, k) = wnorm;
            breakdown = wnorm <= 1e-14 * std::max(wnorm0, 1e-300);
            if (!breakdown) basis.col(k + 1) = w / wnorm;

            for (int i = 0; i < k; ++i) {
                const Complex a = hess(i, k), b = hess(i + 1, k);
                hess(i, k) = std::conj(cs[i]) * a + sn[i] * b;
                hess(i + 1, k) = -std::conj(sn[i]) * a + cs[i] * b;
            }
            make_rotation(hess(k, k), hess(k + 1, k), cs[k], sn[k]);
            const Complex a = hess(k, k), b = hess(k + 1, k);
            hess(k, k) = std::conj(cs[k]) * a + sn[k] * b;
            hess(k + 1, k) = 0.0;
            g[k + 1] = -std::conj(sn[k]) * g[k];
            g[k] = std::conj(cs[k]) * g[k];

            const Real estimate = std::abs(g[k + 1]) / fnorm;
            rep.residual_history.push_back(estimate);
            if (breakdown || estimate <= cfg.tol) {
                ++k;
                break;
            }
        }

        // Back substitution on the rotated (upper-triangular) Hessenberg.
        std::vector<Complex> y(k);
        for (int i = k - 1; i >= 0; --i) {
            Complex s = g[i];
            for (int j = i + 1; j < k; ++j) s -= hess(i, j) * y[j];
            y[i] = s / hess(i, i);
        }
        for (int i = 0; i < k; ++i) x += y[i] * basis.col(i);

        // The least-squares estimate is trusted at convergence; otherwise the
        // true residual seeds the next cycle.
        const Real last = rep.residual_history.back();
        if (breakdown || last <= cfg.tol || apply.count() >= cfg.max_matvecs) {
            if (last <= cfg.tol) {
                rep.converged = true;
                rep.reason = breakdown ? "Krylov space exhausted" : "tolerance reached";
            } else {
                rep.reason = breakdown ? "breakdown" : "matvec budget exhausted";
            }
            break;
        }
        apply(x, w);
        r = f - w;
        beta = r.norm();
        rep.residual_history.push_back(beta / fnorm);
    }

    rep.solution = std::move(x);
    rep.matvecs = apply.count();
    rep.wall_time = detail::seconds_since(t0);
    detail::finish_cost(rep, apply.seconds(), dim, m + 3);
    return rep;
}

}  // namespace gci
