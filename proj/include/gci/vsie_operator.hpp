/**
 * @file vsie_operator.hpp
 * @brief Discretized volume singular integral equation for the electric field
 *        inside an isotropic dielectric body.
 *
 * Collocation at the centers of a uniform voxel grid with piecewise-constant
 * field. With chi = eps - 1 the discrete equation is
 *
 *     E_i + sum_j Gamma(i - j) chi_j E_j = E0_i,
 *
 *     Gamma(0) = N(0) = I/3                        (depolarization self term)
 *     Gamma(d) = N(d) - h^3 [K(d h; k0) - K(d h; 0)]    d != 0
 *
 * where K = k0^2 G I + grad grad G, G = exp(i k0 R) / (4 pi R), and N is the
 * cell-averaged static tensor from demag_tensor.hpp. Far from the diagonal
 * Gamma(d) -> -h^3 K(d h; k0), the plain principal-value collocation. The
 * averaged static part keeps the k0 = 0 spectrum inside the convex hull of
 * {1} and the permittivity values.
 *
 * Gamma depends on i - j only, so the interaction is a block-Toeplitz
 * convolution applied through a zero-padded (2n)^3 circulant embedding.
 *
 * Vectors are cell-major: component p of cell c is entry 3 c + p, and cells
 * are ordered with x fastest: c = ix + n (iy + n iz).
 */
#pragma once

#include <gci/core.hpp>
#include <gci/demag_tensor.hpp>
#include <gci/fft3d.hpp>
#include <gci/linear_operator.hpp>
#include <gci/permittivity.hpp>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <vector>

namespace gci {

using Tensor3 = Eigen::Matrix3cd;

/// Helmholtz Green's function exp(i k0 R) / (4 pi R).
inline Complex green(Real distance, Real k0) {
    if (!(distance > 0.0)) throw Error(ErrorCode::ZeroDistance, "Green's function needs R > 0");
    return std::exp(Complex{0.0, k0 * distance}) / (4.0 * std::numbers::pi * distance);
}

/// k0^2 G(R) delta_pq + d_p d_q G(R) at offset r != 0.
inline Tensor3 dyadic_kernel(const Point3& r, Real k0) {
    const Real R = norm3(r);
    if (!(R > 0.0)) throw Error(ErrorCode::ZeroOffset, "dyadic kernel is singular at r = 0");
    const Complex g = green(R, k0);
    const Complex ik = Complex{0.0, k0};
    const Complex diag = g * (k0 * k0 + ik / R - 1.0 / (R * R));
    const Complex outer = g * (-k0 * k0 - 3.0 * ik / R + 3.0 / (R * R));
    Tensor3 K;
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) K(p, q) = outer * (r[p] / R) * (r[q] / R) + (p == q ? diag : Complex{});
    return K;
}

/// Uniform n^3 grid of cubic cells covering the cube [-side/2, side/2]^3.
struct VoxelGrid {
    int n = 0;
    Real h = 0.0;
    Real side = 0.0;
    std::vector<Complex> chi;  ///< eps(center) - 1 per cell, exactly 0 outside the body

    std::size_t cells() const { return static_cast<std::size_t>(n) * n * n; }
    Index unknowns() const { return static_cast<Index>(3 * cells()); }

    std::size_t index(int ix, int iy, int iz) const {
        return static_cast<std::size_t>(ix) + static_cast<std::size_t>(n) * (iy + static_cast<std::size_t>(n) * iz);
    }

    Point3 center(int ix, int iy, int iz) const {
        const Real o = -0.5 * side + 0.5 * h;
        return {o + ix * h, o + iy * h, o + iz * h};
    }

    Point3 center(std::size_t c) const {
        const int ix = static_cast<int>(c % n);
        const int iy = static_cast<int>((c / n) % n);
        const int iz = static_cast<int>(c / (static_cast<std::size_t>(n) * n));
        return center(ix, iy, iz);
    }

    std::size_t body_cells() const {
        std::size_t k = 0;
        for (auto c : chi) k += (c != Complex{});
        return k;
    }

    static VoxelGrid build(const PermittivityProfile& profile, int n_cells, Real box_side) {
        profile.validate();
        if (n_cells < 2) throw Error(ErrorCode::InvalidConfig, "need at least 2 cells per axis");
        if (!(box_side > 0.0)) throw Error(ErrorCode::InvalidConfig, "grid box side must be positive");
        if (box_side < profile.diameter() * (1.0 - 1e-12))
            throw Error(ErrorCode::BodyOutsideGrid, "the body does not fit in the grid box");
        VoxelGrid g;
        g.n = n_cells;
        g.side = box_side;
        g.h = box_side / n_cells;
        g.chi.resize(g.cells());
        for (std::size_t c = 0; c < g.cells(); ++c) {
            const Point3 x = g.center(c);
            g.chi[c] = profile.contains(x) ? profile.at(x) - Complex{1.0, 0.0} : Complex{};
        }
        return g;
    }
};

/// E0 = p exp(i k0 d.x) at every cell center.
inline Vector incident_plane_wave(const VoxelGrid& grid, Real k0, const Point3& direction, const Point3& polarization) {
    const Real dp = direction[0] * polarization[0] + direction[1] * polarization[1] + direction[2] * polarization[2];
    if (std::abs(dp) > 1e-12) throw Error(ErrorCode::NonTransverse, "polarization must be orthogonal to the propagation direction");
    Vector e0(grid.unknowns());
    for (std::size_t c = 0; c < grid.cells(); ++c) {
        const Point3 x = grid.center(c);
        const Complex phase = std::exp(Complex{0.0, k0 * (direction[0] * x[0] + direction[1] * x[1] + direction[2] * x[2])});
        for (int p = 0; p < 3; ++p) e0[3 * c + p] = polarization[p] * phase;
    }
    return e0;
}

namespace detail {

/// Static tensors N(d) for d in [0, n)^3, shared between operators with the
/// same grid extent.
inline std::shared_ptr<const std::vector<std::array<Real, 6>>> newell_octant(int n) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const std::vector<std::array<Real, 6>>>> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
    auto table = std::make_shared<std::vector<std::array<Real, 6>>>(static_cast<std::size_t>(n) * n * n);
    for (int dz = 0; dz < n; ++dz)
        for (int dy = 0; dy < n; ++dy)
            for (int dx = 0; dx < n; ++dx)
                (*table)[dx + static_cast<std::size_t>(n) * (dy + static_cast<std::size_t>(n) * dz)] =
                    demag::newell_tensor(dx, dy, dz);
    cache.emplace(n, table);
    return table;
}

}  // namespace detail

class VsieOperator {
public:
    /// Symmetric 3x3 tensor stored as {xx, xy, xz, yy, yz, zz}.
    using SymTensor = std::array<Complex, 6>;

    VsieOperator(VoxelGrid grid, Real k0) : grid_(std::move(grid)), k0_(k0) {
        if (grid_.n < 2) throw Error(ErrorCode::InvalidConfig, "need at least 2 cells per axis");
        if (!std::isfinite(k0_) || k0_ < 0.0) throw Error(ErrorCode::InvalidConfig, "k0 must be finite and non-negative");
        build_interaction_table();
        fft_ = std::make_shared<const Fft3d>(2 * grid_.n);
        build_kernel_spectrum();
    }

    Index dim() const { return grid_.unknowns(); }
    const VoxelGrid& grid() const { return grid_; }
    Real k0() const { return k0_; }

    /// Gamma for the cell offset (dx, dy, dz), |d| < n per axis.
    SymTensor interaction(int dx, int dy, int dz) const {
        const int n = grid_.n;
        SymTensor t = octant_[std::abs(dx) + static_cast<std::size_t>(n) * (std::abs(dy) + static_cast<std::size_t>(n) * std::abs(dz))];
        const Real sx = dx < 0 ? -1.0 : 1.0, sy = dy < 0 ? -1.0 : 1.0, sz = dz < 0 ? -1.0 : 1.0;
        t[1] *= sx * sy;
        t[2] *= sx * sz;
        t[4] *= sy * sz;
        return t;
    }

    /// FFT-accelerated y = A x. Safe to call concurrently.
    void apply(const Vector& x, Vector& y) const {
        check_dim(dim(), x.size(), "VsieOperator::apply");
        const int n = grid_.n;
        const int m = 2 * n;
        const std::size_t msize = fft_->size();

        std::array<FftBuffer, 3> pol{FftBuffer(msize), FftBuffer(msize), FftBuffer(msize)};
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    const std::size_t c = grid_.index(ix, iy, iz);
                    const Complex chi = grid_.chi[c];
                    if (chi == Complex{}) continue;
                    const std::size_t pc = padded_index(ix, iy, iz, m);
                    for (int q = 0; q < 3; ++q) pol[q][pc] = chi * x[3 * c + q];
                }
        for (auto& b : pol) fft_->forward(b);

        // The products overwrite the polarization spectra in place.
        for (std::size_t k = 0; k < msize; ++k) {
            const Complex p0 = pol[0][k], p1 = pol[1][k], p2 = pol[2][k];
            pol[0][k] = kernel_hat_[kXX][k] * p0 + kernel_hat_[kXY][k] * p1 + kernel_hat_[kXZ][k] * p2;
            pol[1][k] = kernel_hat_[kXY][k] * p0 + kernel_hat_[kYY][k] * p1 + kernel_hat_[kYZ][k] * p2;
            pol[2][k] = kernel_hat_[kXZ][k] * p0 + kernel_hat_[kYZ][k] * p1 + kernel_hat_[kZZ][k] * p2;
        }
        for (auto& b : pol) fft_->backward(b);

        const Real scale = 1.0 / static_cast<Real>(msize);
        y.resize(dim());
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    const std::size_t c = grid_.index(ix, iy, iz);
                    const std::size_t pc = padded_index(ix, iy, iz, m);
                    for (int p = 0; p < 3; ++p) y[3 * c + p] = x[3 * c + p] + scale * pol[p][pc];
                }
    }

    /// The same operator as an explicit matrix, O(N^2) memory.
    Matrix dense() const {
        const int n = grid_.n;
        Matrix a = Matrix::Identity(dim(), dim());
        for (int jz = 0; jz < n; ++jz)
            for (int jy = 0; jy < n; ++jy)
                for (int jx = 0; jx < n; ++jx) {
                    const std::size_t j = grid_.index(jx, jy, jz);
                    const Complex chi = grid_.chi[j];
                    if (chi == Complex{}) continue;
                    for (int iz = 0; iz < n; ++iz)
                        for (int iy = 0; iy < n; ++iy)
                            for (int ix = 0; ix < n; ++ix) {
                                const std::size_t i = grid_.index(ix, iy, iz);
                                const SymTensor t = interaction(ix - jx, iy - jy, iz - jz);
                                for (int p = 0; p < 3; ++p)
                                    for (int q = 0; q < 3; ++q) a(3 * i + p, 3 * j + q) += chi * t[component(p, q)];
                            }
                }
        return a;
    }

private:
    enum { kXX, kXY, kXZ, kYY, kYZ, kZZ };

    static constexpr int component(int p, int q) {
        constexpr int map[3][3] = {{kXX, kXY, kXZ}, {kXY, kYY, kYZ}, {kXZ, kYZ, kZZ}};
        return map[p][q];
    }

    static std::size_t padded_index(int ix, int iy, int iz, int m) {
        return static_cast<std::size_t>(ix) + static_cast<std::size_t>(m) * (iy + static_cast<std::size_t>(m) * iz);
    }

    void build_interaction_table() {
        const int n = grid_.n;
        const Real h = grid_.h;
        const Real h3 = h * h * h;
        const auto newell = detail::newell_octant(n);
        octant_.assign(newell->size(), SymTensor{});
        for (int dz = 0; dz < n; ++dz)
            for (int dy = 0; dy < n; ++dy)
                for (int dx = 0; dx < n; ++dx) {
                    const std::size_t idx = dx + static_cast<std::size_t>(n) * (dy + static_cast<std::size_t>(n) * dz);
                    SymTensor& t = octant_[idx];
                    for (int c = 0; c < 6; ++c) t[c] = (*newell)[idx][c];
                    if ((dx == 0 && dy == 0 && dz == 0) || k0_ == 0.0) continue;
                    const Point3 r{dx * h, dy * h, dz * h};
                    const Tensor3 dyn = dyadic_kernel(r, k0_) - dyadic_kernel(r, 0.0);
                    for (int p = 0; p < 3; ++p)
                        for (int q = p; q < 3; ++q) t[component(p, q)] -= h3 * dyn(p, q);
                }
    }

    void build_kernel_spectrum() {
        const int n = grid_.n;
        const int m = 2 * n;
        const std::size_t msize = fft_->size();
        kernel_hat_.clear();
        for (int c = 0; c < 6; ++c) kernel_hat_.emplace_back(msize);

        // Offsets -(n-1)..(n-1) wrap to m + d; offset n stays zero.
        for (int dz = -(n - 1); dz <= n - 1; ++dz)
            for (int dy = -(n - 1); dy <= n - 1; ++dy)
                for (int dx = -(n - 1); dx <= n - 1; ++dx) {
                    const SymTensor t = interaction(dx, dy, dz);
                    const std::size_t idx = padded_index((dx + m) % m, (dy + m) % m, (dz + m) % m, m);
                    for (int c = 0; c < 6; ++c) kernel_hat_[c][idx] = t[c];
                }
        for (auto& b : kernel_hat_) fft_->forward(b);
    }

    VoxelGrid grid_;
    Real k0_;
    std::vector<SymTensor> octant_;
    std::shared_ptr<const Fft3d> fft_;
    std::vector<FftBuffer> kernel_hat_;
};

/// Grid box equal to the body's bounding cube, centered on the body.
inline VsieOperator build_operator(const PermittivityProfile& profile, int n_cells, Real k0) {
    return VsieOperator(VoxelGrid::build(profile, n_cells, profile.diameter()), k0);
}

inline constexpr Index kMaxDenseExport = 4000;

/// Row-major CSV: one matrix row per line, "re,im" pairs separated by commas.
inline void write_dense_csv(const Matrix& a, std::ostream& os) {
    if (a.rows() > kMaxDenseExport || a.cols() > kMaxDenseExport)
        throw Error(ErrorCode::InvalidConfig, "dense export is limited to 4000 unknowns");
    os << std::setprecision(17);
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            if (j) os << ',';
            os << a(i, j).real() << ',' << a(i, j).imag();
        }
        os << '\n';
    }
}

}  // namespace gci
