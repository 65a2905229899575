/**
 * @file spectral_analysis.hpp
 * @brief Eigenvalues of assembled operators and the regions that are predicted
 *        to contain them.
 *
 * For an isotropic body the continuous spectrum is the set of permittivity
 * values eps(x) together with the surface value 1, independent of the body's
 * shape. In the static limit k0 = 0 the whole spectrum lies in the convex
 * hull of that set. For an anisotropic body it lies in the rectangle spanned
 * by the extreme eigenvalues of the Hermitian and anti-Hermitian parts of the
 * permittivity tensor.
 */
#pragma once

#include <gci/core.hpp>
#include <gci/linear_operator.hpp>
#include <gci/permittivity.hpp>
#include <gci/spectrum_geometry.hpp>
#include <gci/vsie_operator.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <iomanip>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gci {

/// A convex region of the complex plane with a descriptive kind
/// ("point", "segment", "triangle", "rectangle", "polygon").
struct SpectrumRegion {
    std::string kind;
    SpectrumPolygon polygon;

    Real diameter() const { return polygon.diameter(); }
    Real distance(ComplexPoint z) const { return polygon.distance(z); }

    static SpectrumRegion from_points(std::span<const ComplexPoint> points) {
        SpectrumRegion r;
        r.polygon = hull_of(points);
        switch (r.polygon.size()) {
            case 1: r.kind = "point"; break;
            case 2: r.kind = "segment"; break;
            case 3: r.kind = "triangle"; break;
            default: r.kind = "polygon"; break;
        }
        return r;
    }
    static SpectrumRegion from_points(std::initializer_list<ComplexPoint> points) {
        return from_points(std::span<const ComplexPoint>(points.begin(), points.size()));
    }
};

struct SpectrumReport {
    std::vector<ComplexPoint> eigenvalues;
    SpectrumRegion region;
    Real band = 0.0;
    Real containment_fraction = 0.0;
    std::vector<ComplexPoint> outliers;
};

/// All eigenvalues of a dense complex matrix (Hessenberg reduction + shifted QR).
inline std::vector<ComplexPoint> dense_eigenvalues(const Matrix& a) {
    if (a.rows() != a.cols()) throw Error(ErrorCode::NonSquare, "eigenvalues need a square matrix");
    if (a.rows() == 0) return {};
    Eigen::ComplexEigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "QR iteration did not converge");
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

/// Eigenvalues of the block acting on cells inside the body. Columns of empty
/// cells are those of the identity, so the full spectrum is this set plus 1.
inline std::vector<ComplexPoint> body_eigenvalues(const VsieOperator& op) {
    const auto& g = op.grid();
    std::vector<Index> idx;
    for (std::size_t c = 0; c < g.cells(); ++c)
        if (g.chi[c] != Complex{})
            for (Index p = 0; p < 3; ++p) idx.push_back(static_cast<Index>(3 * c) + p);
    if (idx.empty()) return {};
    return dense_eigenvalues(op.dense()(idx, idx));
}

namespace detail {

/// Corners of the piecewise-linear radial profile: the locus is the polyline
/// through these values.
inline std::vector<ComplexPoint> locus_corners(const PermittivityProfile& profile) {
    switch (profile.kind) {
        case PermittivityProfile::Kind::LayeredBall: return {profile.eps2, profile.eps1, Complex{1.0, 0.0}};
        default: return {profile.eps, Complex{1.0, 0.0}};
    }
}

}  // namespace detail

/// Sampled permittivity values over the body plus the surface value 1.
inline std::vector<ComplexPoint> continuous_spectrum_locus(const PermittivityProfile& profile, int samples = 200) {
    profile.validate();
    std::vector<ComplexPoint> out;
    auto push_unique = [&](Complex z) {
        if (std::find(out.begin(), out.end(), z) == out.end()) out.push_back(z);
    };
    for (auto z : detail::locus_corners(profile)) push_unique(z);
    if (profile.kind == PermittivityProfile::Kind::LayeredBall) {
        const int k = std::max(samples, 2);
        for (int i = 0; i < k; ++i) push_unique(profile.radial(profile.radius * i / (k - 1)));
    }
    return out;
}

/// Predicted location of the whole static spectrum: the convex hull of the
/// continuous-spectrum locus.
inline SpectrumPolygon low_frequency_region(const PermittivityProfile& profile) {
    profile.validate();
    return convex_hull(detail::locus_corners(profile));
}

/// Rectangle with lower-left (a1_min, a2_min) and upper-right (a1_max, a2_max).
inline SpectrumRegion anisotropic_rectangle(std::pair<Real, Real> hermitian_range, std::pair<Real, Real> skew_range) {
    if (hermitian_range.first > hermitian_range.second || skew_range.first > skew_range.second)
        throw Error(ErrorCode::InvalidRange, "range minimum exceeds maximum");
    const auto [x0, x1] = hermitian_range;
    const auto [y0, y1] = skew_range;
    SpectrumRegion r = SpectrumRegion::from_points({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
    r.kind = "rectangle";
    return r;
}

/// Global [min, max] eigenvalues of delta1 = (eps + eps*)/2 and
/// delta2 = (eps - eps*)/(2i) over a set of tensor samples.
inline std::pair<std::pair<Real, Real>, std::pair<Real, Real>> hermitian_parts_eigranges(std::span<const Tensor3> samples) {
    if (samples.empty()) throw Error(ErrorCode::InvalidConfig, "no tensor samples");
    constexpr Real inf = std::numeric_limits<Real>::infinity();
    std::pair<Real, Real> r1{inf, -inf}, r2{inf, -inf};
    const Complex two_i{0.0, 2.0};
    Eigen::SelfAdjointEigenSolver<Tensor3> es;
    for (const auto& eps : samples) {
        const Tensor3 d1 = (eps + eps.adjoint()) / 2.0;
        const Tensor3 d2 = (eps - eps.adjoint()) / two_i;
        es.compute(d1, Eigen::EigenvaluesOnly);
        r1.first = std::min(r1.first, es.eigenvalues().minCoeff());
        r1.second = std::max(r1.second, es.eigenvalues().maxCoeff());
        es.compute(d2, Eigen::EigenvaluesOnly);
        r2.first = std::min(r2.first, es.eigenvalues().minCoeff());
        r2.second = std::max(r2.second, es.eigenvalues().maxCoeff());
    }
    return {r1, r2};
}

/// Classifies eigenvalues as inside the region dilated by `band` or outliers.
inline SpectrumReport containment_check(std::span<const ComplexPoint> eigenvalues, const SpectrumRegion& region, Real band) {
    if (band < 0.0) throw Error(ErrorCode::InvalidConfig, "band must be non-negative");
    SpectrumReport rep;
    rep.eigenvalues.assign(eigenvalues.begin(), eigenvalues.end());
    rep.region = region;
    rep.band = band;
    std::size_t inside = 0;
    for (auto z : eigenvalues) {
        if (region.distance(z) <= band + 1e-12 * std::max<Real>(1.0, region.polygon.scale()))
            ++inside;
        else
            rep.outliers.push_back(z);
    }
    rep.containment_fraction = eigenvalues.empty() ? 1.0 : static_cast<Real>(inside) / eigenvalues.size();
    return rep;
}

/// Symmetric Hausdorff distance between two finite point sets.
inline Real hausdorff_distance(std::span<const ComplexPoint> a, std::span<const ComplexPoint> b) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidConfig, "Hausdorff distance of an empty set");
    auto directed = [](std::span<const ComplexPoint> from, std::span<const ComplexPoint> to) {
        Real worst = 0.0;
        for (auto z : from) {
            Real best = std::numeric_limits<Real>::infinity();
            for (auto w : to) best = std::min(best, std::abs(z - w));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

/// Hausdorff distance between the eigenvalues of A(k0) and A(0) on a fixed grid.
inline std::vector<std::pair<Real, Real>> k0_sweep_spectrum_drift(const PermittivityProfile& profile, int n_cells,
                                                                  std::span<const Real> k0_list) {
    for (std::size_t i = 0; i < k0_list.size(); ++i) {
        if (!(k0_list[i] >= 0.0)) throw Error(ErrorCode::InvalidConfig, "k0 values must be non-negative");
        if (i > 0 && k0_list[i] > k0_list[i - 1]) throw Error(ErrorCode::InvalidConfig, "k0 list must be sorted descending");
    }
    const auto grid = VoxelGrid::build(profile, n_cells, profile.diameter());
    const auto static_eigs = dense_eigenvalues(VsieOperator(grid, 0.0).dense());
    std::vector<std::pair<Real, Real>> out;
    out.reserve(k0_list.size());
    for (Real k0 : k0_list) {
        const Real drift = k0 == 0.0 ? 0.0 : hausdorff_distance(dense_eigenvalues(VsieOperator(grid, k0).dense()), static_eigs);
        out.emplace_back(k0, drift);
    }
    return out;
}

/// CSV with header `re,im`, one eigenvalue per line, 17 significant digits.
inline void write_eigenvalue_csv(std::span<const ComplexPoint> eigenvalues, std::ostream& os) {
    os << "re,im\n" << std::setprecision(17);
    for (auto z : eigenvalues) os << z.real() << ',' << z.imag() << '\n';
}

}  // namespace gci
