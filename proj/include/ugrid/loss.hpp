/// @file loss.hpp
/// @brief Training objectives: the self-supervised residual loss and the
///        reference-based mean-relative-error loss used for ablation.

#pragma once

#include "ugrid/problem.hpp"

namespace ugrid {

/// ||(1-M)(f - A x)||_2. Needs no ground-truth solution.
inline double residual_loss(const PdeProblem& p, const GridField& x) {
    return l2_norm(residual(p, x));
}

/// d residual_loss / dx. Zero at a zero residual (the loss is a norm).
inline GridField residual_loss_grad(const PdeProblem& p, const GridField& x) {
    GridField r = residual(p, x);
    const double nrm = l2_norm(r);
    if (nrm == 0.0) return GridField(p.n());
    for (double& v : r.data()) v /= nrm;
    return residual_adjoint(p, r);
}

inline constexpr double kLegacyFloor = 1e-12;

/// mean(|x - y| / |y|) over entries with |y| >= 1e-12; smaller reference
/// entries are excluded from the mean and counted in *excluded.
inline double legacy_loss(const GridField& x, const GridField& y, int* excluded = nullptr) {
    require_same_n(x.n(), y.n(), "legacy_loss");
    double sum = 0.0;
    long m = 0;
    int skipped = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double yk = y.data()[k];
        if (std::abs(yk) < kLegacyFloor) {
            ++skipped;
            continue;
        }
        sum += std::abs(x.data()[k] - yk) / std::abs(yk);
        ++m;
    }
    if (excluded) *excluded = skipped;
    if (m == 0) return 0.0;
    return sum / static_cast<double>(m);
}

inline GridField legacy_loss_grad(const GridField& x, const GridField& y) {
    require_same_n(x.n(), y.n(), "legacy_loss_grad");
    long m = 0;
    for (std::size_t k = 0; k < x.size(); ++k)
        if (std::abs(y.data()[k]) >= kLegacyFloor) ++m;
    GridField g(x.n());
    if (m == 0) return g;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double yk = y.data()[k];
        if (std::abs(yk) < kLegacyFloor) continue;
        const double d = x.data()[k] - yk;
        const double s = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
        g.data()[k] = s / (std::abs(yk) * static_cast<double>(m));
    }
    return g;
}

}  // namespace ugrid
