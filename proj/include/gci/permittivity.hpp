/**
 * @file permittivity.hpp
 * @brief Isotropic relative-permittivity profiles of the scatterers.
 */
#pragma once

#include <gci/core.hpp>

#include <array>
#include <cmath>
#include <string>
#include <utility>

namespace gci {

using Point3 = std::array<Real, 3>;

inline Real norm3(const Point3& x) { return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); }

/// Permittivity of a body centered at the origin. Lengths are in vacuum
/// wavelengths.
///
/// LayeredBall: eps2 for r <= d2, linear from eps2 to eps1 on [d2, d1], linear
/// from eps1 to 1 on [d1, R]. It is continuous and equals 1 on the surface.
struct PermittivityProfile {
    enum class Kind { HomogeneousBall, LayeredBall, HomogeneousCube };

    Kind kind = Kind::HomogeneousBall;
    Complex eps{1.0, 0.0};   ///< homogeneous value
    Complex eps1{1.0, 0.0};  ///< layered: value at r = d1
    Complex eps2{1.0, 0.0};  ///< layered: core value, r <= d2
    Real d1 = 0.0;
    Real d2 = 0.0;
    Real radius = 0.0;  ///< ball radius
    Real side = 0.0;    ///< cube edge

    static PermittivityProfile homogeneous_ball(Complex eps, Real radius) {
        PermittivityProfile p;
        p.kind = Kind::HomogeneousBall;
        p.eps = eps;
        p.radius = radius;
        p.validate();
        return p;
    }

    static PermittivityProfile layered_ball(Complex eps2, Complex eps1, Real d2, Real d1, Real radius) {
        PermittivityProfile p;
        p.kind = Kind::LayeredBall;
        p.eps2 = eps2;
        p.eps1 = eps1;
        p.d2 = d2;
        p.d1 = d1;
        p.radius = radius;
        p.validate();
        return p;
    }

    static PermittivityProfile homogeneous_cube(Complex eps, Real side) {
        PermittivityProfile p;
        p.kind = Kind::HomogeneousCube;
        p.eps = eps;
        p.side = side;
        p.validate();
        return p;
    }

    void validate() const {
        auto check_value = [](Complex e, const char* name) {
            if (!is_finite(e)) throw Error(ErrorCode::InvalidProfile, std::string(name) + " is not finite");
            if (e == Complex{}) throw Error(ErrorCode::InvalidProfile, std::string(name) + " must be nonzero");
            if (e.imag() < 0.0) throw Error(ErrorCode::InvalidProfile, std::string(name) + " must have Im >= 0 (passive medium)");
        };
        switch (kind) {
            case Kind::HomogeneousBall:
                check_value(eps, "eps");
                if (!(radius > 0.0)) throw Error(ErrorCode::InvalidProfile, "ball radius must be positive");
                break;
            case Kind::HomogeneousCube:
                check_value(eps, "eps");
                if (!(side > 0.0)) throw Error(ErrorCode::InvalidProfile, "cube side must be positive");
                break;
            case Kind::LayeredBall:
                check_value(eps1, "eps1");
                check_value(eps2, "eps2");
                if (!(radius > d1 && d1 > d2 && d2 > 0.0))
                    throw Error(ErrorCode::InvalidProfile, "layered ball needs R > d1 > d2 > 0");
                // With Im >= 0 at both ends, a linear piece can only cross zero
                // along the real axis.
                for (auto [lo, hi] : {std::pair{eps2, eps1}, std::pair{eps1, Complex{1.0, 0.0}}}) {
                    if (lo.imag() == 0.0 && hi.imag() == 0.0 && lo.real() * hi.real() <= 0.0)
                        throw Error(ErrorCode::InvalidProfile, "permittivity passes through zero");
                }
                break;
        }
    }

    /// Edge of the body's bounding cube.
    Real diameter() const { return kind == Kind::HomogeneousCube ? side : 2.0 * radius; }

    bool contains(const Point3& x) const {
        if (kind == Kind::HomogeneousCube) {
            const Real h = 0.5 * side;
            return std::abs(x[0]) <= h && std::abs(x[1]) <= h && std::abs(x[2]) <= h;
        }
        return norm3(x) <= radius;
    }

    /// Permittivity as a function of the distance from the center (balls).
    Complex radial(Real r) const {
        switch (kind) {
            case Kind::HomogeneousBall: return r <= radius ? eps : Complex{1.0, 0.0};
            case Kind::HomogeneousCube: return eps;
            case Kind::LayeredBall:
                if (r <= d2) return eps2;
                if (r <= d1) return eps2 + (eps1 - eps2) * ((r - d2) / (d1 - d2));
                if (r <= radius) return eps1 + (Complex{1.0, 0.0} - eps1) * ((r - d1) / (radius - d1));
                return {1.0, 0.0};
        }
        return {1.0, 0.0};
    }

    Complex at(const Point3& x) const {
        if (!contains(x)) return {1.0, 0.0};
        return kind == Kind::HomogeneousCube ? eps : radial(norm3(x));
    }
};

}  // namespace gci
