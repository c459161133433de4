/// @file oracles.hpp
/// @brief Independent reference implementations used only by tests: naive
///        scalar loops, brute-force footprint checks, a dense symmetric
///        eigensolver, and point-in-polygon. None of these share code with
///        the library paths they certify.

#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "ugrid/core.hpp"
#include "ugrid/rng.hpp"

namespace oracle {

using ugrid::GridField;
using ugrid::InteriorMask;
using ugrid::Rng;

inline GridField select_loop(const GridField& x, const GridField& b, const InteriorMask& m) {
    GridField out(x.n());
    for (int i = 0; i < x.n(); ++i)
        for (int j = 0; j < x.n(); ++j) out(i, j) = m.interior(i, j) ? x(i, j) : b(i, j);
    return out;
}

inline double norm_loop(const GridField& x) {
    double s = 0.0;
    for (int i = 0; i < x.n(); ++i)
        for (int j = 0; j < x.n(); ++j) s += x(i, j) * x(i, j);
    return std::sqrt(s);
}

/// Sliding-window multiply-accumulate with zero padding, taps row-major.
inline GridField conv_loop(const GridField& x, const std::array<double, 9>& k) {
    const int n = x.n();
    GridField out(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    const int ii = i + a - 1, jj = j + b - 1;
                    if (ii < 0 || jj < 0 || ii >= n || jj >= n) continue;
                    s += k[a * 3 + b] * x(ii, jj);
                }
            }
            out(i, j) = s;
        }
    }
    return out;
}

inline GridField restrict_loop(const GridField& fine) {
    const int n = fine.n();
    const int nc = (n + 1) / 2;
    static const double w[3][3] = {{0.0625, 0.125, 0.0625}, {0.125, 0.25, 0.125}, {0.0625, 0.125, 0.0625}};
    GridField c(nc);
    for (int I = 0; I < nc; ++I) {
        for (int J = 0; J < nc; ++J) {
            if (I == 0 || J == 0 || I == nc - 1 || J == nc - 1) {
                c(I, J) = fine(2 * I, 2 * J);
                continue;
            }
            double s = 0.0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) s += w[a][b] * fine(2 * I + a - 1, 2 * J + b - 1);
            c(I, J) = s;
        }
    }
    return c;
}

inline GridField prolong_loop(const GridField& c) {
    const int nc = c.n();
    const int n = 2 * nc - 1;
    GridField f(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int I = i / 2, J = j / 2;
            if (i % 2 == 0 && j % 2 == 0) {
                f(i, j) = c(I, J);
            } else if (i % 2 == 0) {
                f(i, j) = 0.5 * (c(I, J) + c(I, J + 1));
            } else if (j % 2 == 0) {
                f(i, j) = 0.5 * (c(I, J) + c(I + 1, J));
            } else {
                f(i, j) = 0.25 * (c(I, J) + c(I, J + 1) + c(I + 1, J) + c(I + 1, J + 1));
            }
        }
    }
    return f;
}

inline bool coarse_point_interior_loop(const InteriorMask& fine, int I, int J) {
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b) {
            const int i = 2 * I + a, j = 2 * J + b;
            if (i < 0 || j < 0 || i >= fine.n() || j >= fine.n()) return false;
            if (!fine.interior(i, j)) return false;
        }
    return true;
}

inline GridField random_field(int n, Rng& rng, double lo = -1.0, double hi = 1.0) {
    GridField f(n);
    for (double& v : f.data()) v = rng.uniform(lo, hi);
    return f;
}

inline InteriorMask random_mask(int n, Rng& rng, double p_interior = 0.6) {
    InteriorMask m(n);
    for (int i = 1; i < n - 1; ++i)
        for (int j = 1; j < n - 1; ++j)
            if (rng.uniform() < p_interior) m.set_interior(i, j);
    return m;
}

/// Cyclic Jacobi eigenvalue iteration for symmetric matrices (row-major).
/// Returns all eigenvalues; good to ~1e-12 for the sizes tests use.
inline std::vector<double> sym_eigenvalues(std::vector<double> a, int n) {
    auto at = [&a, n](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-24) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = 0.5 * (at(q, q) - at(p, p)) / apq;
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cc = 1.0 / std::sqrt(t * t + 1.0);
                const double ss = t * cc;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = cc * akp - ss * akq;
                    at(k, q) = ss * akp + cc * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = cc * apk - ss * aqk;
                    at(q, k) = ss * apk + cc * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = at(i, i);
    return ev;
}

/// Ray-casting point-in-polygon; vertices in order, implicit closing edge.
inline bool point_in_polygon(double x, double y, const std::vector<std::pair<double, double>>& poly) {
    bool inside = false;
    const std::size_t m = poly.size();
    for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
        const auto [xi, yi] = poly[i];
        const auto [xj, yj] = poly[j];
        if ((yi > y) != (yj > y)) {
            const double xint = xj + (y - yj) / (yi - yj) * (xi - xj);
            if (x < xint) inside = !inside;
        }
    }
    return inside;
}

}  // namespace oracle
