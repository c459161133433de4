/// @file transfer.hpp
/// @brief Grid transfer operators: 9-point full-weighting restriction,
///        bilinear prolongation, and conservative mask coarsening.

#pragma once

#include "ugrid/core.hpp"

namespace ugrid {

inline int coarse_size(int n) { return (n + 1) / 2; }
inline int fine_size(int nc) { return 2 * nc - 1; }

/// Fine (2^k+1) -> coarse (2^(k-1)+1). Interior coarse points take the
/// 9-point full-weighting average around their fine image; frame points copy
/// the fine frame value.
inline GridField restrict_full_weighting(const GridField& fine) {
    const int n = fine.n();
    if (n < 9) throw std::invalid_argument("restrict_full_weighting: grid too small to coarsen");
    const int nc = coarse_size(n);
    GridField c(nc);
    for (int I = 0; I < nc; ++I) {
        for (int J = 0; J < nc; ++J) {
            const int i = 2 * I, j = 2 * J;
            if (I == 0 || J == 0 || I == nc - 1 || J == nc - 1) {
                c(I, J) = fine(i, j);
                continue;
            }
            const double* up = fine.row(i - 1);
            const double* mid = fine.row(i);
            const double* dn = fine.row(i + 1);
            c(I, J) = 0.0625 * (up[j - 1] + up[j + 1] + dn[j - 1] + dn[j + 1]) +
                      0.125 * (up[j] + dn[j] + mid[j - 1] + mid[j + 1]) + 0.25 * mid[j];
        }
    }
    return c;
}

/// Coarse (m) -> fine (2m-1) by bilinear interpolation; exact at coincident
/// points.
inline GridField prolong_bilinear(const GridField& c) {
    const int nc = c.n();
    const int n = fine_size(nc);
    GridField f(n);
    for (int I = 0; I < nc; ++I) {
        for (int J = 0; J < nc; ++J) {
            f(2 * I, 2 * J) = c(I, J);
            if (J + 1 < nc) f(2 * I, 2 * J + 1) = 0.5 * (c(I, J) + c(I, J + 1));
            if (I + 1 < nc) f(2 * I + 1, 2 * J) = 0.5 * (c(I, J) + c(I + 1, J));
            if (I + 1 < nc && J + 1 < nc)
                f(2 * I + 1, 2 * J + 1) = 0.25 * (c(I, J) + c(I, J + 1) + c(I + 1, J) + c(I + 1, J + 1));
        }
    }
    return f;
}

/// A coarse point is interior only if the whole 3x3 fine footprint under the
/// full-weighting stencil is interior. Keeps coarse corrections from leaking
/// across one-cell-thick boundary walls.
inline InteriorMask coarsen_mask(const InteriorMask& fine) {
    const int n = fine.n();
    if (n < 9) throw std::invalid_argument("coarsen_mask: grid too small to coarsen");
    const int nc = coarse_size(n);
    InteriorMask c(nc);
    for (int I = 1; I < nc - 1; ++I) {
        for (int J = 1; J < nc - 1; ++J) {
            const int i = 2 * I, j = 2 * J;
            bool all = true;
            for (int di = -1; di <= 1 && all; ++di)
                for (int dj = -1; dj <= 1; ++dj)
                    if (!fine.interior(i + di, j + dj)) {
                        all = false;
                        break;
                    }
            if (all) c.set_interior(I, J);
        }
    }
    return c;
}

}  // namespace ugrid
