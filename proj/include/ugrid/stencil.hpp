/// @file stencil.hpp
/// @brief Fixed 3x3 stencil kernels and zero-padded sliding-window application.
///
/// conv3x3 is a sliding-window multiply-accumulate with the kernel laid out
/// exactly as the finite-difference stencils are written: out(i,j) =
/// sum_{a,b} k(a,b) * x(i+a-1, j+b-1), reads outside the grid are zero.
/// Jx and Jy deliberately encode *negated* central differences; every formula
/// that uses them absorbs the sign, so they must not be "corrected" here.

#pragma once

#include "ugrid/core.hpp"

namespace ugrid {
namespace kernels {

// Jacobi neighbor average for the 5-point Laplacian.
inline constexpr Kernel3x3 J{{0.0, 0.25, 0.0, 0.25, 0.0, 0.25, 0.0, 0.25, 0.0}};
// Neighbor sum, i.e. 4*J.
inline constexpr Kernel3x3 J4{{0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0}};
// 5-point Laplacian.
inline constexpr Kernel3x3 L{{0.0, 1.0, 0.0, 1.0, -4.0, 1.0, 0.0, 1.0, 0.0}};
// Negated central differences along columns (x) and rows (y).
inline constexpr Kernel3x3 Jx{{0.0, 0.0, 0.0, 0.5, 0.0, -0.5, 0.0, 0.0, 0.0}};
inline constexpr Kernel3x3 Jy{{0.0, -0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0}};

}  // namespace kernels

inline GridField conv3x3(const GridField& x, const Kernel3x3& k) {
    const int n = x.n();
    GridField out(n);
    for (int i = 0; i < n; ++i) {
        const double* up = i > 0 ? x.row(i - 1) : nullptr;
        const double* mid = x.row(i);
        const double* dn = i < n - 1 ? x.row(i + 1) : nullptr;
        double* o = out.row(i);
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            const bool jl = j > 0, jr = j < n - 1;
            if (up) {
                if (jl) s += k.w[0] * up[j - 1];
                s += k.w[1] * up[j];
                if (jr) s += k.w[2] * up[j + 1];
            }
            if (jl) s += k.w[3] * mid[j - 1];
            s += k.w[4] * mid[j];
            if (jr) s += k.w[5] * mid[j + 1];
            if (dn) {
                if (jl) s += k.w[6] * dn[j - 1];
                s += k.w[7] * dn[j];
                if (jr) s += k.w[8] * dn[j + 1];
            }
            o[j] = s;
        }
    }
    return out;
}

inline Kernel3x3 flipped(const Kernel3x3& k) {
    Kernel3x3 f{};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) f.w[a * 3 + b] = k.w[(2 - a) * 3 + (2 - b)];
    return f;
}

/// Adjoint of conv3x3 under the Euclidean inner product (zero padding makes
/// the transpose another zero-padded sliding window with the flipped kernel).
inline GridField conv3x3_adjoint(const GridField& g, const Kernel3x3& k) {
    return conv3x3(g, flipped(k));
}

}  // namespace ugrid
