/**
 * @file schedules.hpp
 * @brief Parameter sets for one layer of the generalized Chebyshev iteration.
 *
 * A layer applies u <- u - tau_m (A u - f) for m = 1..n, so its residual is
 * multiplied by P(A) with P(z) = prod_m (1 - tau_m z). Schedules are built for
 * the spectrum shapes with known or heuristic answers: a real segment
 * (Chebyshev roots), a complex segment anchored at 1 (rotated Chebyshev
 * roots), a circle (all parameters equal the circle center), and a triangle
 * with a vertex at 1 (rotated roots on the two sides through 1).
 */
#pragma once

#include <gci/core.hpp>
#include <gci/spectrum_geometry.hpp>

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gci {

enum class Provenance { Gsi, RealSegment, RotatedSegment, Circle, TriangleSides, Manual };

inline const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::Gsi: return "gsi";
        case Provenance::RealSegment: return "real_segment";
        case Provenance::RotatedSegment: return "rotated_segment";
        case Provenance::Circle: return "circle";
        case Provenance::TriangleSides: return "triangle_sides";
        case Provenance::Manual: return "manual";
    }
    return "unknown";
}

/// Samples used when a layer contraction has no closed form.
inline constexpr int kBoundarySamples = 10'000;

struct IterationSchedule {
    std::vector<Complex> taus;
    std::vector<Complex> mus;
    Provenance provenance = Provenance::Manual;
    std::optional<Real> rho_bound;

    std::size_t n() const { return taus.size(); }

    /// Builds a schedule from the reciprocals mu_m = 1 / tau_m.
    static IterationSchedule from_mus(std::vector<Complex> mus, Provenance provenance) {
        if (mus.empty()) throw Error(ErrorCode::InvalidSchedule, "a layer needs at least one parameter");
        IterationSchedule s;
        s.taus.reserve(mus.size());
        for (auto mu : mus) {
            if (mu == Complex{} || !is_finite(mu)) throw Error(ErrorCode::InvalidSchedule, "iteration parameter mu is zero or not finite");
            s.taus.push_back(Complex{1.0, 0.0} / mu);
        }
        s.mus = std::move(mus);
        s.provenance = provenance;
        return s;
    }

    static IterationSchedule from_taus(std::vector<Complex> taus, Provenance provenance = Provenance::Manual) {
        std::vector<Complex> mus;
        mus.reserve(taus.size());
        for (auto t : taus) {
            if (t == Complex{} || !is_finite(t)) throw Error(ErrorCode::InvalidSchedule, "iteration parameter tau is zero or not finite");
            mus.push_back(Complex{1.0, 0.0} / t);
        }
        IterationSchedule s;
        s.taus = std::move(taus);
        s.mus = std::move(mus);
        s.provenance = provenance;
        if (s.taus.empty()) throw Error(ErrorCode::InvalidSchedule, "a layer needs at least one parameter");
        return s;
    }
};

/// |prod_m (1 - tau_m z)|, the layer residual multiplier at a spectrum point.
inline Real layer_factor(const IterationSchedule& s, Complex z) {
    Complex p{1.0, 0.0};
    for (auto t : s.taus) p *= Complex{1.0, 0.0} - t * z;
    return std::abs(p);
}

/// Max of the layer factor over sample points of a spectrum region.
inline Real minimax_value(const IterationSchedule& s, std::span<const ComplexPoint> region_samples) {
    if (region_samples.empty()) throw Error(ErrorCode::InvalidConfig, "minimax_value needs at least one sample");
    Real m = 0.0;
    for (auto z : region_samples) m = std::max(m, layer_factor(s, z));
    return m;
}

/// `count` equally spaced points on [a, b], endpoints included.
inline std::vector<ComplexPoint> sample_segment(ComplexPoint a, ComplexPoint b, int count) {
    std::vector<ComplexPoint> out;
    if (count <= 1) return {a};
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(a + (b - a) * (static_cast<Real>(i) / (count - 1)));
    return out;
}

inline std::vector<ComplexPoint> sample_circle(ComplexPoint center, Real radius, int count) {
    std::vector<ComplexPoint> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i)
        out.push_back(center + std::polar(radius, 2.0 * std::numbers::pi * i / count));
    return out;
}

/// Points along the boundary of a polygon, spread proportionally to edge length.
inline std::vector<ComplexPoint> sample_boundary(const SpectrumPolygon& poly, int count) {
    const auto& v = poly.vertices;
    if (v.size() <= 1) return v;
    if (v.size() == 2) return sample_segment(v[0], v[1], count);
    Real perimeter = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) perimeter += std::abs(v[(i + 1) % v.size()] - v[i]);
    std::vector<ComplexPoint> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const ComplexPoint a = v[i], b = v[(i + 1) % v.size()];
        const int k = std::max(2, static_cast<int>(std::ceil(count * std::abs(b - a) / perimeter)));
        auto seg = sample_segment(a, b, k);
        out.insert(out.end(), seg.begin(), seg.end());
    }
    return out;
}

/// One-parameter schedule: tau = 1 / mu0.
inline IterationSchedule gsi_schedule(const EnclosingCircle& circle) {
    auto s = IterationSchedule::from_mus({circle.center}, Provenance::Gsi);
    s.rho_bound = circle.rho0;
    return s;
}

namespace detail {

inline std::vector<Complex> chebyshev_mus(Real a, Real b, int n) {
    std::vector<Complex> mus;
    mus.reserve(n);
    for (int m = 1; m <= n; ++m)
        mus.emplace_back(0.5 * (b + a) + 0.5 * (b - a) * std::cos((2.0 * m - 1.0) * std::numbers::pi / (2.0 * n)), 0.0);
    return mus;
}

}  // namespace detail

/// Chebyshev roots on the real segment [a, b], 0 < a < b:
/// mu_m = (b + a)/2 + (b - a)/2 cos((2m - 1) pi / 2n).
inline IterationSchedule chebyshev_real_segment(Real a, Real b, int n) {
    if (!(a > 0.0) || !(b > a)) throw Error(ErrorCode::InvalidSegment, "require 0 < a < b");
    if (n < 1) throw Error(ErrorCode::InvalidSchedule, "layer length must be positive");
    auto s = IterationSchedule::from_mus(detail::chebyshev_mus(a, b, n), Provenance::RealSegment);
    const auto samples = sample_segment(Complex{a, 0.0}, Complex{b, 0.0}, kBoundarySamples);
    s.rho_bound = minimax_value(s, samples);
    return s;
}

/// Chebyshev roots for a real segment of the same length as [1, endpoint],
/// turned around the point 1 onto the complex segment.
inline IterationSchedule rotated_segment_schedule(ComplexPoint endpoint, int n) {
    if (!is_finite(endpoint)) throw Error(ErrorCode::NonFinite, "segment endpoint is not finite");
    const Complex one{1.0, 0.0};
    const Real length = std::abs(endpoint - one);
    if (length <= 1e-14 * std::max(1.0, std::abs(endpoint)))
        throw Error(ErrorCode::DegenerateSegment, "segment endpoint coincides with 1");
    if (n < 1) throw Error(ErrorCode::InvalidSchedule, "layer length must be positive");
    if (distance_to_segment(Complex{}, one, endpoint) <= 1e-12 * std::max(1.0, std::abs(endpoint)))
        throw Error(ErrorCode::OriginOnSegment, "segment [1, endpoint] passes through the origin");

    const Complex rotation = (endpoint - one) / length;
    std::vector<Complex> mus;
    mus.reserve(n);
    for (auto real_mu : detail::chebyshev_mus(1.0, 1.0 + length, n)) mus.push_back(one + (real_mu - one) * rotation);
    auto s = IterationSchedule::from_mus(std::move(mus), Provenance::RotatedSegment);
    s.rho_bound = minimax_value(s, sample_segment(one, endpoint, kBoundarySamples));
    return s;
}

/// Every parameter equals the circle center; the layer contracts by rho0^n.
inline IterationSchedule circle_schedule(const EnclosingCircle& circle, int n) {
    if (n < 1) throw Error(ErrorCode::InvalidSchedule, "layer length must be positive");
    auto s = IterationSchedule::from_mus(std::vector<Complex>(n, circle.center), Provenance::Circle);
    s.rho_bound = std::pow(circle.rho0, n);
    return s;
}

/// Rotated-segment parameters on the two sides of the triangle (1, v1, v2)
/// that meet at 1: ceil(n/2) towards v1, floor(n/2) towards v2, alternating.
inline IterationSchedule triangle_sides_schedule(ComplexPoint v1, ComplexPoint v2, int n) {
    if (n < 2) throw Error(ErrorCode::InvalidTriangle, "need at least one parameter per side (n >= 2)");
    const Complex one{1.0, 0.0};
    if (!is_finite(v1) || !is_finite(v2)) throw Error(ErrorCode::InvalidTriangle, "vertex is not finite");
    if (std::abs(v1 - one) == 0.0 || std::abs(v2 - one) == 0.0)
        throw Error(ErrorCode::InvalidTriangle, "vertices must differ from 1");
    SpectrumPolygon hull;
    try {
        hull = convex_hull({one, v1, v2});
    } catch (const Error&) {
        throw Error(ErrorCode::InvalidTriangle, "triangle hull contains the origin");
    }

    const int n1 = (n + 1) / 2;
    const int n2 = n / 2;
    const auto side1 = rotated_segment_schedule(v1, n1);
    const auto side2 = rotated_segment_schedule(v2, n2);
    std::vector<Complex> mus;
    mus.reserve(n);
    for (int m = 0; m < n1; ++m) {
        mus.push_back(side1.mus[m]);
        if (m < n2) mus.push_back(side2.mus[m]);
    }
    auto s = IterationSchedule::from_mus(std::move(mus), Provenance::TriangleSides);
    s.rho_bound = minimax_value(s, sample_boundary(hull, kBoundarySamples));
    return s;
}

}  // namespace gci
