/**
 * @file demag_tensor.hpp
 * @brief Cell-averaged static dipole interaction between two cubic cells.
 *
 * N(d) = -(1/h^3) int_{cell 0} int_{cell d} grad grad 1/(4 pi |x - y|) dy dx,
 * taken in the distributional sense, is the classic demagnetizing tensor of a
 * uniformly polarized cube (A. J. Newell, W. Williams, D. J. Dunlop, 1993).
 * N(0) = I/3 and N(d) -> -h^3 grad grad 1/(4 pi r) far away. As a matrix over
 * any set of cells N is symmetric with spectrum in [0, 1].
 *
 * The closed forms involve heavy cancellation at large offsets, so they are
 * evaluated in long double.
 */
#pragma once

#include <gci/core.hpp>

#include <array>
#include <cmath>
#include <numbers>

namespace gci::demag {

using Wide = long double;

namespace detail {

inline Wide asinh_ratio(Wide num, Wide den2) { return den2 > 0 ? std::asinh(num / std::sqrt(den2)) : Wide{0}; }

inline Wide atan_ratio(Wide num, Wide den) { return den != 0 ? std::atan(num / den) : Wide{0}; }

/// Newell's f, whose mixed sixth difference gives Nxx.
inline Wide newell_f(Wide x, Wide y, Wide z) {
    x = std::abs(x);
    y = std::abs(y);
    z = std::abs(z);
    const Wide x2 = x * x, y2 = y * y, z2 = z * z;
    const Wide R = std::sqrt(x2 + y2 + z2);
    if (R == 0) return 0;
    Wide s = (2 * x2 - y2 - z2) * R;
    if (y > 0) s += 3 * y * (z2 - x2) * asinh_ratio(y, x2 + z2);
    if (z > 0) s += 3 * z * (y2 - x2) * asinh_ratio(z, x2 + y2);
    if (x > 0 && y > 0 && z > 0) s -= 6 * x * y * z * atan_ratio(y * z, x * R);
    return s / 6;
}

/// Newell's g, whose mixed sixth difference gives Nxy.
inline Wide newell_g(Wide x, Wide y, Wide z) {
    Wide sign = 1;
    if (x < 0) {
        sign = -sign;
        x = -x;
    }
    if (y < 0) {
        sign = -sign;
        y = -y;
    }
    z = std::abs(z);
    const Wide x2 = x * x, y2 = y * y, z2 = z * z;
    const Wide R = std::sqrt(x2 + y2 + z2);
    if (R == 0) return 0;
    Wide s = -2 * x * y * R;
    if (z > 0) {
        s += 6 * x * y * z * asinh_ratio(z, x2 + y2);
        s -= z * z2 * atan_ratio(x * y, z * R);
        s -= 3 * z * y2 * atan_ratio(x * z, y * R);
        s -= 3 * z * x2 * atan_ratio(y * z, x * R);
    }
    if (y > 0) s += y * (3 * z2 - y2) * asinh_ratio(x, y2 + z2);
    if (x > 0) s += x * (3 * z2 - x2) * asinh_ratio(y, x2 + z2);
    return sign * s / 6;
}

template <class F>
Wide second_difference_3d(F&& fn, Wide x, Wide y, Wide z) {
    static constexpr std::array<Wide, 3> w{-1, 2, -1};
    Wide s = 0;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
            for (int k = -1; k <= 1; ++k) s += w[i + 1] * w[j + 1] * w[k + 1] * fn(x + i, y + j, z + k);
    return s;
}

}  // namespace detail

/// Components {xx, xy, xz, yy, yz, zz} of N for the integer cell offset
/// (dx, dy, dz). The tensor is dimensionless and independent of the cell size.
inline std::array<Real, 6> newell_tensor(int dx, int dy, int dz) {
    const Wide x = dx, y = dy, z = dz;
    const Wide scale = 1 / (4 * std::numbers::pi_v<Wide>);
    auto f = [](Wide a, Wide b, Wide c) { return detail::newell_f(a, b, c); };
    auto g = [](Wide a, Wide b, Wide c) { return detail::newell_g(a, b, c); };
    auto diff = [](auto fn, Wide a, Wide b, Wide c) { return detail::second_difference_3d(fn, a, b, c); };
    return {
        static_cast<Real>(scale * diff(f, x, y, z)),
        static_cast<Real>(scale * diff(g, x, y, z)),
        static_cast<Real>(scale * diff(g, x, z, y)),
        static_cast<Real>(scale * diff(f, y, x, z)),
        static_cast<Real>(scale * diff(g, y, z, x)),
        static_cast<Real>(scale * diff(f, z, y, x)),
    };
}

}  // namespace gci::demag
