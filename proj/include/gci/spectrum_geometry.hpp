/**
 * @file spectrum_geometry.hpp
 * @brief Optimal one-parameter (simple iteration) circle for a convex spectrum
 *        polygon.
 *
 * For a parameter mu the simple iteration u <- u - (Au - f)/mu contracts with
 * ratio max|mu - lambda| / |mu| over the spectrum. The optimum is the circle
 * containing the spectrum that is seen from the origin under the smallest
 * angle alpha0; its center is mu0 and the contraction is sin(alpha0 / 2).
 *
 * optimal_circle() is the finite pair/triple enumeration. brute_force_optimal()
 * is an independent grid-search oracle used to validate it.
 */
#pragma once

#include <gci/core.hpp>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace gci {

/// Convex polygon on the complex plane, vertices counterclockwise.
/// One vertex (a point) and two vertices (a segment) are allowed.
struct SpectrumPolygon {
    std::vector<ComplexPoint> vertices;

    std::size_t size() const { return vertices.size(); }

    /// Largest pairwise vertex distance.
    Real diameter() const {
        Real d = 0.0;
        for (std::size_t i = 0; i < vertices.size(); ++i)
            for (std::size_t j = i + 1; j < vertices.size(); ++j)
                d = std::max(d, std::abs(vertices[i] - vertices[j]));
        return d;
    }

    /// Length scale for relative tolerances; never zero for a nonempty polygon
    /// that excludes the origin.
    Real scale() const {
        Real s = diameter();
        for (auto v : vertices) s = std::max(s, std::abs(v));
        return s;
    }

    /// Euclidean distance from z to the polygon (0 inside or on the boundary).
    Real distance(ComplexPoint z) const {
        const std::size_t n = vertices.size();
        if (n == 0) return std::numeric_limits<Real>::infinity();
        if (n == 1) return std::abs(z - vertices[0]);
        if (n == 2) return distance_to_segment(z, vertices[0], vertices[1]);
        bool inside = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (cross(vertices[i], vertices[(i + 1) % n], z) < 0.0) {
                inside = false;
                break;
            }
        }
        if (inside) return 0.0;
        Real d = std::numeric_limits<Real>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            d = std::min(d, distance_to_segment(z, vertices[i], vertices[(i + 1) % n]));
        return d;
    }
};

/// The optimal simple-iteration circle: center mu0, radius R, viewing angle
/// alpha0 from the origin and contraction rho0 = sin(alpha0 / 2) = R / |mu0|.
struct EnclosingCircle {
    ComplexPoint center{};
    Real radius = 0.0;
    Real alpha0 = 0.0;
    Real rho0 = 0.0;

    static EnclosingCircle make(ComplexPoint center, Real radius) {
        EnclosingCircle c;
        c.center = center;
        c.radius = radius;
        c.rho0 = radius / std::abs(center);
        c.alpha0 = 2.0 * std::asin(std::min(c.rho0, 1.0));
        return c;
    }

    bool contains(ComplexPoint z, Real abs_tol = 0.0) const {
        return std::abs(z - center) <= radius * (1.0 + 1e-12) + abs_tol;
    }
};

namespace detail {

inline constexpr Real kRelTol = 1e-12;

inline void require_finite(std::span<const ComplexPoint> points) {
    for (auto p : points)
        if (!is_finite(p)) throw Error(ErrorCode::NonFinite, "spectrum point is not finite");
}

/// Whether the origin lies inside or on a hull given by its vertices (ccw).
inline bool hull_contains_origin(const SpectrumPolygon& poly) {
    const Real tol = kRelTol * poly.scale();
    return poly.distance(ComplexPoint{0.0, 0.0}) <= tol;
}

/// Circle through three points, or nullopt if they are collinear.
inline std::optional<EnclosingCircle> circumcircle(ComplexPoint a, ComplexPoint b, ComplexPoint c) {
    const ComplexPoint ab = b - a;
    const ComplexPoint ac = c - a;
    const Real d = 2.0 * (ab.real() * ac.imag() - ab.imag() * ac.real());
    const Real scale = std::max({std::abs(ab), std::abs(ac), std::abs(c - b)});
    if (std::abs(d) <= 1e-14 * scale * scale) return std::nullopt;
    const Real ab2 = std::norm(ab);
    const Real ac2 = std::norm(ac);
    const ComplexPoint offset{(ac.imag() * ab2 - ab.imag() * ac2) / d, (ab.real() * ac2 - ac.real() * ab2) / d};
    const ComplexPoint center = a + offset;
    return EnclosingCircle::make(center, std::abs(offset));
}

}  // namespace detail

/// Convex hull (Andrew's monotone chain), counterclockwise, collinear points
/// removed. No condition on the origin.
inline SpectrumPolygon hull_of(std::span<const ComplexPoint> points) {
    if (points.empty()) throw Error(ErrorCode::InvalidConfig, "convex hull of an empty point set");
    detail::require_finite(points);

    std::vector<ComplexPoint> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](ComplexPoint a, ComplexPoint b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    SpectrumPolygon poly;
    if (pts.size() == 1) {
        poly.vertices = pts;
        return poly;
    }
    std::vector<ComplexPoint> hull(2 * pts.size());
    std::size_t k = 0;
    for (auto p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    poly.vertices = std::move(hull);
    return poly;
}

/// Convex hull of a spectrum; throws OriginInsideHull when the origin is
/// inside or on it, since no simple-iteration parameter converges then.
inline SpectrumPolygon convex_hull(std::span<const ComplexPoint> points) {
    SpectrumPolygon poly = hull_of(points);
    if (detail::hull_contains_origin(poly))
        throw Error(ErrorCode::OriginInsideHull, "the origin lies inside or on the convex hull of the spectrum");
    return poly;
}

inline SpectrumPolygon convex_hull(std::initializer_list<ComplexPoint> points) {
    return convex_hull(std::span<const ComplexPoint>(points.begin(), points.size()));
}

/// Optimal circle for a spectrum on the segment [p, q].
///
/// The center lies on the perpendicular bisector of [p, q] where it meets the
/// circle through p, q and the origin; the intersection whose circle leaves the
/// origin outside is taken. A segment on a ray through the origin gives the
/// midpoint.
inline EnclosingCircle segment_optimal_circle(ComplexPoint p, ComplexPoint q) {
    if (!is_finite(p) || !is_finite(q)) throw Error(ErrorCode::NonFinite, "segment endpoint is not finite");
    const Real len = std::abs(q - p);
    const Real scale = std::max({len, std::abs(p), std::abs(q)});
    if (len <= detail::kRelTol * scale) throw Error(ErrorCode::DegenerateSegment, "segment endpoints coincide");
    if (distance_to_segment(ComplexPoint{}, p, q) <= detail::kRelTol * scale)
        throw Error(ErrorCode::OriginOnSegment, "the origin lies on the segment");

    const auto through_origin = detail::circumcircle(ComplexPoint{}, p, q);
    if (!through_origin) return EnclosingCircle::make(0.5 * (p + q), 0.5 * len);

    // Unit direction of the bisector.
    const ComplexPoint dir = ComplexPoint{0.0, 1.0} * (q - p) / len;
    const ComplexPoint c = through_origin->center;
    const Real rc = std::abs(c);
    for (ComplexPoint mu : {c + rc * dir, c - rc * dir}) {
        const Real radius = std::abs(mu - p);
        if (std::abs(mu) > radius) return EnclosingCircle::make(mu, radius);
    }
    throw Error(ErrorCode::NoValidCircle, "no bisector intersection excludes the origin");
}

/// Optimal circle for a convex polygon: first every vertex pair (the circle of
/// the first pair that already covers the polygon wins), otherwise every vertex
/// triple's circumcircle that covers the polygon and excludes the origin, with
/// the smallest contraction.
inline EnclosingCircle optimal_circle(const SpectrumPolygon& poly) {
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    if (n == 0) throw Error(ErrorCode::InvalidConfig, "empty spectrum polygon");
    detail::require_finite(v);
    if (detail::hull_contains_origin(poly))
        throw Error(ErrorCode::OriginInsideHull, "the origin lies inside or on the spectrum polygon");

    const Real tol = detail::kRelTol * poly.scale();
    if (n == 1) return EnclosingCircle::make(v[0], 0.0);
    if (n == 2) return segment_optimal_circle(v[0], v[1]);

    auto covers_all = [&](const EnclosingCircle& c) {
        return std::all_of(v.begin(), v.end(), [&](ComplexPoint z) { return c.contains(z, tol); });
    };

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const EnclosingCircle c = segment_optimal_circle(v[i], v[j]);
            if (covers_all(c)) return c;
        }

    std::optional<EnclosingCircle> best;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                const auto c = detail::circumcircle(v[i], v[j], v[k]);
                if (!c || std::abs(c->center) <= c->radius + tol || !covers_all(*c)) continue;
                if (!best || c->rho0 < best->rho0 - 1e-15) {
                    best = c;
                } else if (std::abs(c->rho0 - best->rho0) <= 1e-15) {
                    assert(std::abs(c->center - best->center) <= 1e-9 * poly.scale());
                }
            }
    if (!best) throw Error(ErrorCode::NoValidCircle, "no vertex triple yields a covering circle");
    return *best;
}

/// Contraction max_i |mu - lambda_i| / |mu| of the simple iteration with
/// parameter mu over a point spectrum.
inline Real simple_iteration_ratio(ComplexPoint mu, std::span<const ComplexPoint> points) {
    Real r = 0.0;
    for (auto p : points) r = std::max(r, std::abs(mu - p));
    return r / std::abs(mu);
}

/// Grid-search oracle for the minimizer of max_i |mu - lambda_i| / |mu|: a
/// coarse grid over the hull bounding box inflated three times, then repeated
/// rotated local grids around the incumbent, halving the spacing after 32
/// rotations in a row find no improvement.
inline EnclosingCircle brute_force_optimal(std::span<const ComplexPoint> points, int grid_resolution = 200) {
    const SpectrumPolygon hull = convex_hull(points);
    const auto& v = hull.vertices;

    Real xmin = v[0].real(), xmax = xmin, ymin = v[0].imag(), ymax = ymin;
    for (auto z : v) {
        xmin = std::min(xmin, z.real());
        xmax = std::max(xmax, z.real());
        ymin = std::min(ymin, z.imag());
        ymax = std::max(ymax, z.imag());
    }
    const ComplexPoint mid{0.5 * (xmin + xmax), 0.5 * (ymin + ymax)};
    const Real extent = std::max(xmax - xmin, ymax - ymin);
    if (extent <= detail::kRelTol * hull.scale()) return EnclosingCircle::make(v[0], 0.0);

    auto objective = [&](ComplexPoint mu) {
        if (std::abs(mu) == 0.0) return std::numeric_limits<Real>::infinity();
        return simple_iteration_ratio(mu, v);
    };

    const int g = std::max(grid_resolution, 8);
    const Real half = 1.5 * extent;
    Real step = 2.0 * half / g;
    ComplexPoint best = mid;
    Real best_f = objective(best);
    for (int i = 0; i <= g; ++i)
        for (int j = 0; j <= g; ++j) {
            const ComplexPoint mu = mid + ComplexPoint{-half + i * step, -half + j * step};
            const Real f = objective(mu);
            if (f < best_f) {
                best_f = f;
                best = mu;
            }
        }

    // The objective is a max of smooth ratios, so descent may run along a
    // ridge that no fixed lattice direction follows. Rotating the stencil each
    // round supplies new directions.
    constexpr int kStencil = 6;
    const Real golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    const Real stop = 1e-13 * hull.scale();
    int misses = 0;
    for (int round = 0; (round < 10 || step > stop) && round < 20000; ++round) {
        const ComplexPoint center = best;
        const ComplexPoint rot = std::polar(step, golden * round);
        for (int i = -kStencil; i <= kStencil; ++i)
            for (int j = -kStencil; j <= kStencil; ++j) {
                const ComplexPoint mu = center + rot * ComplexPoint{Real(i), Real(j)};
                const Real f = objective(mu);
                if (f < best_f) {
                    best_f = f;
                    best = mu;
                }
            }
        misses = best == center ? misses + 1 : 0;
        if (misses == 32) {
            step *= 0.5;
            misses = 0;
        }
    }

    Real radius = 0.0;
    for (auto z : v) radius = std::max(radius, std::abs(best - z));
    return EnclosingCircle::make(best, radius);
}

inline EnclosingCircle brute_force_optimal(std::initializer_list<ComplexPoint> points, int grid_resolution = 200) {
    return brute_force_optimal(std::span<const ComplexPoint>(points.begin(), points.size()), grid_resolution);
}

}  // namespace gci
