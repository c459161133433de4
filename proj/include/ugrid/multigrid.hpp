/// @file multigrid.hpp
/// @brief Classical geometric multigrid V-cycle on the masked systems.
///
/// Coarse levels rediscretize: coefficient fields are restricted by full
/// weighting and masks coarsen conservatively, so coarse operators are not
/// Galerkin products of fine ones; the hierarchy is judged by convergence,
/// not per-level algebra. All stencils are unit-spacing, so doubling the mesh
/// width scales the discrete Laplacian by 4; rediscretized levels absorb that
/// into their data (restricted residuals and k^2 pick up a factor 4, velocity
/// fields 2, the reaction coefficient 4). Coarse levels solve the error
/// equation with zero Dirichlet values. The coarsest level runs a fixed
/// number of Jacobi sweeps, keeping the baseline fully matrix-free.

#pragma once

#include "ugrid/problem.hpp"
#include "ugrid/transfer.hpp"

namespace ugrid {

struct MgLevel {
    int n = 0;
    InteriorMask mask;
    GridField k2, vx, vy;  // only the fields the family uses are populated
    double beta = 0.0;     // reaction coefficient in this level's lattice units
};

struct MgHierarchy {
    PdeFamily kind = PdeFamily::Poisson;
    double alpha = 1.0;
    std::vector<MgLevel> levels;

    int depth() const { return static_cast<int>(levels.size()); }
};

inline constexpr int kCoarsestSweeps = 50;

/// Damping factor for the baseline's internal sweeps. The plain masked Jacobi
/// sweep leaves the checkerboard mode undamped (its eigenvalue is -1), which
/// stalls coarse-grid correction; the classical weighted sweep restores the
/// usual smoothing factor. The neural iterator keeps the undamped sweep.
inline constexpr double kMgDamping = 0.8;

inline MgHierarchy build_hierarchy(const PdeProblem& p, int max_depth = 0) {
    MgHierarchy h;
    h.kind = p.kind;
    h.alpha = p.alpha;
    MgLevel top;
    top.n = p.n();
    top.mask = p.mask;
    top.beta = p.beta;
    if (p.kind == PdeFamily::Helmholtz) top.k2 = p.k2;
    if (p.kind == PdeFamily::ConvDiffReact) {
        top.vx = p.vx;
        top.vy = p.vy;
    }
    h.levels.push_back(std::move(top));
    while (coarse_size(h.levels.back().n) >= 5 && (max_depth == 0 || h.depth() < max_depth)) {
        const MgLevel& f = h.levels.back();
        MgLevel c;
        c.n = coarse_size(f.n);
        c.mask = coarsen_mask(f.mask);
        // A level with no unknowns can't correct anything; make its parent the
        // coarsest level instead (thin regions coarsen away quickly).
        if (c.mask.interior_count() == 0) break;
        c.beta = 4.0 * f.beta;
        if (h.kind == PdeFamily::Helmholtz) c.k2 = 4.0 * restrict_full_weighting(f.k2);
        if (h.kind == PdeFamily::ConvDiffReact) {
            c.vx = 2.0 * restrict_full_weighting(f.vx);
            c.vy = 2.0 * restrict_full_weighting(f.vy);
        }
        h.levels.push_back(std::move(c));
    }
    return h;
}

namespace detail {

inline GridField damped_smooth(const PdeProblem& p, const GridField& u) {
    GridField s = smooth(p, u);
    const int n = u.n();
    for (int i = 0; i < n; ++i) {
        double* sr = s.row(i);
        const double* ur = u.row(i);
        const std::uint8_t* mr = p.mask.row(i);
        for (int j = 0; j < n; ++j) {
            if (mr[j]) sr[j] = (1.0 - kMgDamping) * ur[j] + kMgDamping * sr[j];
            // boundary entries keep the bit-exact b stamped by smooth()
        }
    }
    return s;
}

inline PdeProblem level_problem(const MgHierarchy& h, int l, GridField f, GridField b) {
    const MgLevel& lv = h.levels[l];
    switch (h.kind) {
        case PdeFamily::Poisson:
            return PdeProblem::poisson(std::move(f), std::move(b), lv.mask);
        case PdeFamily::Helmholtz:
            return PdeProblem::helmholtz(std::move(f), std::move(b), lv.mask, lv.k2);
        case PdeFamily::ConvDiffReact:
            return PdeProblem::convection_diffusion(std::move(f), std::move(b), lv.mask, lv.vx, lv.vy,
                                                    h.alpha, lv.beta);
    }
    throw std::logic_error("level_problem: bad family");
}

inline GridField vcycle_level(const MgHierarchy& h, int l, GridField u, const GridField& f_l,
                              const GridField& b_l, int nu1, int nu2) {
    PdeProblem p = level_problem(h, l, f_l, b_l);
    if (l + 1 == h.depth()) {
        for (int s = 0; s < kCoarsestSweeps; ++s) u = damped_smooth(p, u);
        return u;
    }
    for (int s = 0; s < nu1; ++s) u = damped_smooth(p, u);
    GridField r = residual(p, u);
    GridField rc = gated(4.0 * restrict_full_weighting(r), h.levels[l + 1].mask);
    const int nc = h.levels[l + 1].n;
    GridField ec = vcycle_level(h, l + 1, GridField(nc), rc, GridField(nc), nu1, nu2);
    GridField ef = gated(prolong_bilinear(ec), h.levels[l].mask);
    axpy(u, 1.0, ef);
    for (int s = 0; s < nu2; ++s) u = damped_smooth(p, u);
    return u;
}

}  // namespace detail

/// One V-cycle for the fine problem; boundary rows of the result equal b
/// exactly at every level.
inline GridField vcycle(const PdeProblem& p, GridField u, const MgHierarchy& h, int nu1, int nu2) {
    require_same_n(u.n(), p.n(), "vcycle");
    if (h.levels.empty() || h.levels.front().n != p.n()) {
        throw std::invalid_argument("vcycle: hierarchy does not match the problem");
    }
    return detail::vcycle_level(h, 0, std::move(u), p.f, p.b, nu1, nu2);
}

}  // namespace ugrid
