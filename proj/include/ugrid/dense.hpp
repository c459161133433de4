/// @file dense.hpp
/// @brief Explicit assembly of the masked system and a dense LU direct solve.
///
/// Intended for tiny grids (n <= 33) where the n^2 x n^2 system is cheap to
/// factor; every iterative path in the project is checked against it.

#pragma once

#include <cmath>
#include <vector>

#include "ugrid/problem.hpp"

namespace ugrid {

/// Row-major dense matrix with its right-hand side: interior rows carry the
/// family stencil, boundary rows are identity rows pinning u to b.
struct AssembledSystem {
    int n = 0;       // grid side length
    int dim = 0;     // n*n
    std::vector<double> a;  // dim x dim, row-major
    std::vector<double> rhs;

    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * dim + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * dim + c]; }
};

inline AssembledSystem assemble_masked_system(const PdeProblem& p) {
    const int n = p.n();
    AssembledSystem s;
    s.n = n;
    s.dim = n * n;
    s.a.assign(static_cast<std::size_t>(s.dim) * s.dim, 0.0);
    s.rhs.assign(s.dim, 0.0);
    auto idx = [n](int i, int j) { return i * n + j; };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int r = idx(i, j);
            if (!p.mask.interior(i, j)) {
                s.at(r, r) = 1.0;
                s.rhs[r] = p.b(i, j);
                continue;
            }
            s.rhs[r] = p.f(i, j);
            switch (p.kind) {
                case PdeFamily::Poisson:
                    s.at(r, r) = -4.0;
                    s.at(r, idx(i - 1, j)) = 1.0;
                    s.at(r, idx(i + 1, j)) = 1.0;
                    s.at(r, idx(i, j - 1)) = 1.0;
                    s.at(r, idx(i, j + 1)) = 1.0;
                    break;
                case PdeFamily::Helmholtz:
                    s.at(r, r) = -4.0 + p.k2(i, j);
                    s.at(r, idx(i - 1, j)) = 1.0;
                    s.at(r, idx(i + 1, j)) = 1.0;
                    s.at(r, idx(i, j - 1)) = 1.0;
                    s.at(r, idx(i, j + 1)) = 1.0;
                    break;
                case PdeFamily::ConvDiffReact: {
                    // A u = -vx (u*Jx) - vy (u*Jy) - alpha u*L + beta u
                    const double vx = p.vx(i, j), vy = p.vy(i, j);
                    s.at(r, r) = 4.0 * p.alpha + p.beta;
                    s.at(r, idx(i, j - 1)) = -0.5 * vx - p.alpha;
                    s.at(r, idx(i, j + 1)) = 0.5 * vx - p.alpha;
                    s.at(r, idx(i - 1, j)) = 0.5 * vy - p.alpha;
                    s.at(r, idx(i + 1, j)) = -0.5 * vy - p.alpha;
                    break;
                }
            }
        }
    }
    return s;
}

/// In-place LU factorization with partial pivoting; throws on a (numerically)
/// singular matrix instead of regularizing it.
inline void lu_factor(std::vector<double>& a, std::vector<int>& piv, int dim) {
    piv.resize(dim);
    for (int k = 0; k < dim; ++k) {
        int pr = k;
        double pmax = std::abs(a[static_cast<std::size_t>(k) * dim + k]);
        for (int r = k + 1; r < dim; ++r) {
            const double v = std::abs(a[static_cast<std::size_t>(r) * dim + k]);
            if (v > pmax) {
                pmax = v;
                pr = r;
            }
        }
        if (pmax < 1e-13) throw std::runtime_error("lu_factor: singular matrix (pivot " + std::to_string(k) + ")");
        piv[k] = pr;
        if (pr != k) {
            for (int c = 0; c < dim; ++c)
                std::swap(a[static_cast<std::size_t>(k) * dim + c], a[static_cast<std::size_t>(pr) * dim + c]);
        }
        const double inv = 1.0 / a[static_cast<std::size_t>(k) * dim + k];
        for (int r = k + 1; r < dim; ++r) {
            double* rowr = &a[static_cast<std::size_t>(r) * dim];
            const double m = rowr[k] * inv;
            rowr[k] = m;
            if (m == 0.0) continue;
            const double* rowk = &a[static_cast<std::size_t>(k) * dim];
            for (int c = k + 1; c < dim; ++c) rowr[c] -= m * rowk[c];
        }
    }
}

inline void lu_solve(const std::vector<double>& a, const std::vector<int>& piv, int dim,
                     std::vector<double>& x) {
    for (int k = 0; k < dim; ++k) {
        if (piv[k] != k) std::swap(x[k], x[piv[k]]);
    }
    for (int k = 0; k < dim; ++k) {
        const double* rowk = &a[static_cast<std::size_t>(k) * dim];
        double s = x[k];
        for (int c = 0; c < k; ++c) s -= rowk[c] * x[c];
        x[k] = s;
    }
    for (int k = dim - 1; k >= 0; --k) {
        const double* rowk = &a[static_cast<std::size_t>(k) * dim];
        double s = x[k];
        for (int c = k + 1; c < dim; ++c) s -= rowk[c] * x[c];
        x[k] = s / rowk[k];
    }
}

/// Direct solution of the masked system; the project-wide ground-truth oracle.
inline GridField dense_solve(const PdeProblem& p) {
    const int n = p.n();
    if (n > 33) throw std::invalid_argument("dense_solve: supported only for n <= 33");
    AssembledSystem s = assemble_masked_system(p);
    std::vector<int> piv;
    lu_factor(s.a, piv, s.dim);
    std::vector<double> x = s.rhs;
    lu_solve(s.a, piv, s.dim, x);
    GridField u(n, std::move(x));
    // Pivoting can route boundary unknowns through eliminations; restore the
    // identity rows bit-exactly.
    return masked_compose(u, p.b, p.mask);
}

}  // namespace ugrid
