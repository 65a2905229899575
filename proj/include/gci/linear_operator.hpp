/**
 * @file linear_operator.hpp
 * @brief The matvec contract the solvers are written against, plus dense and
 *        diagonal operators used by tests and small problems.
 */
#pragma once

#include <gci/core.hpp>

#include <Eigen/Dense>

#include <concepts>
#include <string>

namespace gci {

using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Anything with a dimension and a const, deterministic y = A x.
/// apply() must be callable concurrently from several threads.
template <class Op>
concept LinearOperator = requires(const Op& op, const Vector& x, Vector& y) {
    { op.dim() } -> std::convertible_to<Index>;
    op.apply(x, y);
};

inline void check_dim(Index expected, Index got, const char* what) {
    if (expected != got)
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": expected length " + std::to_string(expected) + ", got " + std::to_string(got));
}

class DenseOperator {
public:
    explicit DenseOperator(Matrix a) : a_(std::move(a)) {
        if (a_.rows() != a_.cols()) throw Error(ErrorCode::NonSquare, "dense operator must be square");
    }

    Index dim() const { return a_.rows(); }
    void apply(const Vector& x, Vector& y) const {
        check_dim(dim(), x.size(), "DenseOperator::apply");
        y.noalias() = a_ * x;
    }
    const Matrix& matrix() const { return a_; }

private:
    Matrix a_;
};

class DiagonalOperator {
public:
    explicit DiagonalOperator(Vector d) : d_(std::move(d)) {}

    Index dim() const { return d_.size(); }
    void apply(const Vector& x, Vector& y) const {
        check_dim(dim(), x.size(), "DiagonalOperator::apply");
        y = d_.cwiseProduct(x);
    }
    const Vector& diagonal() const { return d_; }

private:
    Vector d_;
};

}  // namespace gci
