/**
 * @file core.hpp
 * @brief Scalar aliases, error type and small complex-plane helpers shared by
 *        every part of the library.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace gci {

using Real = double;
using Complex = std::complex<double>;

/// A point of the complex plane. Kept as std::complex so arithmetic is free.
using ComplexPoint = Complex;

enum class ErrorCode {
    OriginInsideHull,
    DegenerateSegment,
    OriginOnSegment,
    NoValidCircle,
    InvalidSegment,
    InvalidTriangle,
    InvalidSchedule,
    ZeroMu,
    DimensionMismatch,
    InvalidConfig,
    ZeroDistance,
    ZeroOffset,
    BodyOutsideGrid,
    InvalidProfile,
    NonTransverse,
    NonSquare,
    ConvergenceFailure,
    InvalidRange,
    NonFinite,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::OriginInsideHull: return "OriginInsideHull";
        case ErrorCode::DegenerateSegment: return "DegenerateSegment";
        case ErrorCode::OriginOnSegment: return "OriginOnSegment";
        case ErrorCode::NoValidCircle: return "NoValidCircle";
        case ErrorCode::InvalidSegment: return "InvalidSegment";
        case ErrorCode::InvalidTriangle: return "InvalidTriangle";
        case ErrorCode::InvalidSchedule: return "InvalidSchedule";
        case ErrorCode::ZeroMu: return "ZeroMu";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::ZeroDistance: return "ZeroDistance";
        case ErrorCode::ZeroOffset: return "ZeroOffset";
        case ErrorCode::BodyOutsideGrid: return "BodyOutsideGrid";
        case ErrorCode::InvalidProfile: return "InvalidProfile";
        case ErrorCode::NonTransverse: return "NonTransverse";
        case ErrorCode::NonSquare: return "NonSquare";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::InvalidRange: return "InvalidRange";
        case ErrorCode::NonFinite: return "NonFinite";
    }
    return "Unknown";
}

/// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline bool is_finite(ComplexPoint z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// z-component of the cross product (b - a) x (c - a).
inline Real cross(ComplexPoint a, ComplexPoint b, ComplexPoint c) {
    const ComplexPoint u = b - a;
    const ComplexPoint v = c - a;
    return u.real() * v.imag() - u.imag() * v.real();
}

inline Real dot(ComplexPoint u, ComplexPoint v) { return u.real() * v.real() + u.imag() * v.imag(); }

/// Euclidean distance from z to the closed segment [a, b].
inline Real distance_to_segment(ComplexPoint z, ComplexPoint a, ComplexPoint b) {
    const ComplexPoint ab = b - a;
    const Real len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(z - a);
    Real t = dot(z - a, ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (a + t * ab));
}

}  // namespace gci
