/// @file problem.hpp
/// @brief Discretized PDE instances and their masked convolutional operators.
///
/// Three families share one contract: a smoother (one damping-free masked
/// Jacobi sweep whose output carries the boundary values bit-exactly), a
/// residual operator that vanishes on boundary points, and the forward
/// operator restricted to the interior. The smoother update is
///     u' = (1-M)((I - P^-1 A) u + P^-1 f) + M b
/// with P the per-family scalar diagonal (-4, k^2-4, 4a+b), which expands to
/// the kernel forms below. residual(u) == gate(f) - apply_operator(u) holds
/// exactly because both evaluate the same per-point operator value.

#pragma once

#include <cmath>

#include "ugrid/core.hpp"
#include "ugrid/stencil.hpp"

namespace ugrid {

enum class PdeFamily { Poisson, Helmholtz, ConvDiffReact };

inline const char* family_name(PdeFamily f) {
    switch (f) {
        case PdeFamily::Poisson: return "poisson";
        case PdeFamily::Helmholtz: return "helmholtz";
        case PdeFamily::ConvDiffReact: return "convdiff";
    }
    return "?";
}

struct PdeProblem {
    PdeFamily kind = PdeFamily::Poisson;
    GridField f;
    GridField b;
    InteriorMask mask;
    GridField k2;      // Helmholtz only
    GridField vx, vy;  // ConvDiffReact only
    double alpha = 1.0, beta = 0.0;

    int n() const { return mask.n(); }

    static PdeProblem poisson(GridField f, GridField b, InteriorMask mask) {
        PdeProblem p;
        p.kind = PdeFamily::Poisson;
        p.f = std::move(f);
        p.b = std::move(b);
        p.mask = std::move(mask);
        p.validate();
        return p;
    }

    static PdeProblem helmholtz(GridField f, GridField b, InteriorMask mask, GridField k2) {
        PdeProblem p;
        p.kind = PdeFamily::Helmholtz;
        p.f = std::move(f);
        p.b = std::move(b);
        p.mask = std::move(mask);
        p.k2 = std::move(k2);
        p.validate();
        return p;
    }

    static PdeProblem convection_diffusion(GridField f, GridField b, InteriorMask mask, GridField vx,
                                           GridField vy, double alpha, double beta) {
        PdeProblem p;
        p.kind = PdeFamily::ConvDiffReact;
        p.f = std::move(f);
        p.b = std::move(b);
        p.mask = std::move(mask);
        p.vx = std::move(vx);
        p.vy = std::move(vy);
        p.alpha = alpha;
        p.beta = beta;
        p.validate();
        return p;
    }

    void validate() const {
        const int nn = mask.n();
        require_same_n(f.n(), nn, "PdeProblem.f");
        require_same_n(b.n(), nn, "PdeProblem.b");
        if (kind == PdeFamily::Helmholtz) {
            require_same_n(k2.n(), nn, "PdeProblem.k2");
            for (int i = 1; i < nn - 1; ++i)
                for (int j = 1; j < nn - 1; ++j)
                    if (mask.interior(i, j) && k2(i, j) == 4.0)
                        throw std::invalid_argument("PdeProblem: k^2 == 4 at an interior point");
        }
        if (kind == PdeFamily::ConvDiffReact) {
            require_same_n(vx.n(), nn, "PdeProblem.vx");
            require_same_n(vy.n(), nn, "PdeProblem.vy");
            if (4.0 * alpha + beta == 0.0) throw std::invalid_argument("PdeProblem: 4*alpha + beta == 0");
        }
    }
};

/// One masked Jacobi sweep. Boundary entries of the result are b, copied
/// bitwise.
inline GridField smooth(const PdeProblem& p, const GridField& u) {
    require_same_n(u.n(), p.n(), "smooth");
    const int n = u.n();
    GridField out(n);
    switch (p.kind) {
        case PdeFamily::Poisson: {
            GridField a = conv3x3(u, kernels::J);
            for (int i = 0; i < n; ++i) {
                const std::uint8_t* mr = p.mask.row(i);
                double* o = out.row(i);
                const double* ar = a.row(i);
                const double* fr = p.f.row(i);
                const double* br = p.b.row(i);
                for (int j = 0; j < n; ++j) o[j] = mr[j] ? ar[j] - 0.25 * fr[j] : br[j];
            }
            break;
        }
        case PdeFamily::Helmholtz: {
            GridField a4 = conv3x3(u, kernels::J4);
            for (int i = 0; i < n; ++i) {
                const std::uint8_t* mr = p.mask.row(i);
                double* o = out.row(i);
                const double* ar = a4.row(i);
                const double* fr = p.f.row(i);
                const double* br = p.b.row(i);
                const double* kr = p.k2.row(i);
                for (int j = 0; j < n; ++j) {
                    if (mr[j]) {
                        const double den = 4.0 - kr[j];
                        if (den == 0.0) throw std::invalid_argument("smooth: k^2 == 4 at an interior point");
                        o[j] = (ar[j] - fr[j]) / den;
                    } else {
                        o[j] = br[j];
                    }
                }
            }
            break;
        }
        case PdeFamily::ConvDiffReact: {
            const double den = 4.0 * p.alpha + p.beta;
            if (den == 0.0) throw std::invalid_argument("smooth: 4*alpha + beta == 0");
            const double s = 1.0 / den;
            GridField a4 = conv3x3(u, kernels::J4);
            GridField gx = conv3x3(u, kernels::Jx);
            GridField gy = conv3x3(u, kernels::Jy);
            for (int i = 0; i < n; ++i) {
                const std::uint8_t* mr = p.mask.row(i);
                double* o = out.row(i);
                const double* ar = a4.row(i);
                const double* gxr = gx.row(i);
                const double* gyr = gy.row(i);
                const double* fr = p.f.row(i);
                const double* br = p.b.row(i);
                const double* vxr = p.vx.row(i);
                const double* vyr = p.vy.row(i);
                for (int j = 0; j < n; ++j) {
                    if (mr[j]) {
                        double t = p.alpha * ar[j];
                        t += vxr[j] * gxr[j];
                        t += vyr[j] * gyr[j];
                        t += fr[j];
                        o[j] = t * s;
                    } else {
                        o[j] = br[j];
                    }
                }
            }
            break;
        }
    }
    return out;
}

/// Interior value of the discrete operator A applied to u; callers mask it.
/// Poisson: u*L.  Helmholtz: u*L + k^2 u.  Convection-diffusion-reaction:
/// -vx (u*Jx) - vy (u*Jy) - alpha u*L + beta u (Jx/Jy carry negated central
/// differences, so the advection term enters with a minus sign here).
namespace detail {

inline GridField operator_value(const PdeProblem& p, const GridField& u) {
    const int n = u.n();
    GridField a(n);
    switch (p.kind) {
        case PdeFamily::Poisson: {
            a = conv3x3(u, kernels::L);
            break;
        }
        case PdeFamily::Helmholtz: {
            GridField lu = conv3x3(u, kernels::L);
            for (int i = 0; i < n; ++i) {
                double* ar = a.row(i);
                const double* lr = lu.row(i);
                const double* kr = p.k2.row(i);
                const double* ur = u.row(i);
                for (int j = 0; j < n; ++j) ar[j] = lr[j] + kr[j] * ur[j];
            }
            break;
        }
        case PdeFamily::ConvDiffReact: {
            GridField lu = conv3x3(u, kernels::L);
            GridField gx = conv3x3(u, kernels::Jx);
            GridField gy = conv3x3(u, kernels::Jy);
            for (int i = 0; i < n; ++i) {
                double* ar = a.row(i);
                const double* lr = lu.row(i);
                const double* gxr = gx.row(i);
                const double* gyr = gy.row(i);
                const double* ur = u.row(i);
                const double* vxr = p.vx.row(i);
                const double* vyr = p.vy.row(i);
                for (int j = 0; j < n; ++j) {
                    double t = -(vxr[j] * gxr[j]);
                    t -= vyr[j] * gyr[j];
                    t -= p.alpha * lr[j];
                    t += p.beta * ur[j];
                    ar[j] = t;
                }
            }
            break;
        }
    }
    return a;
}

}  // namespace detail

/// (1-M) A u.
inline GridField apply_operator(const PdeProblem& p, const GridField& u) {
    require_same_n(u.n(), p.n(), "apply_operator");
    GridField a = detail::operator_value(p, u);
    gate(a, p.mask);
    return a;
}

/// (1-M)(f - A u); identically zero on boundary points.
inline GridField residual(const PdeProblem& p, const GridField& u) {
    require_same_n(u.n(), p.n(), "residual");
    const int n = u.n();
    GridField a = detail::operator_value(p, u);
    GridField r(n);
    for (int i = 0; i < n; ++i) {
        const std::uint8_t* mr = p.mask.row(i);
        double* rr = r.row(i);
        const double* ar = a.row(i);
        const double* fr = p.f.row(i);
        for (int j = 0; j < n; ++j) rr[j] = mr[j] ? fr[j] - ar[j] : 0.0;
    }
    return r;
}

/// Effective right-hand side of the eliminated system: interior f with the
/// boundary contribution of b folded through A. Equals the residual of the
/// zero-interior initial guess, so relative residuals start at exactly 1.
inline GridField effective_rhs(const PdeProblem& p) {
    GridField zero(p.n());
    return residual(p, masked_compose(zero, p.b, p.mask));
}

// ---- adjoints of the linear parts (for reverse-mode training) -------------

/// Adjoint of du -> smooth(u + du) - smooth(u).
inline GridField smooth_adjoint(const PdeProblem& p, const GridField& g) {
    require_same_n(g.n(), p.n(), "smooth_adjoint");
    const int n = g.n();
    GridField gg = gated(g, p.mask);
    switch (p.kind) {
        case PdeFamily::Poisson:
            return conv3x3_adjoint(gg, kernels::J);
        case PdeFamily::Helmholtz: {
            for (int i = 0; i < n; ++i) {
                double* gr = gg.row(i);
                const double* kr = p.k2.row(i);
                const std::uint8_t* mr = p.mask.row(i);
                for (int j = 0; j < n; ++j)
                    if (mr[j]) gr[j] /= 4.0 - kr[j];
            }
            return conv3x3_adjoint(gg, kernels::J4);
        }
        case PdeFamily::ConvDiffReact: {
            const double s = 1.0 / (4.0 * p.alpha + p.beta);
            GridField t1 = gg, t2 = gg;
            for (int i = 0; i < n; ++i) {
                double* a = gg.row(i);
                double* x = t1.row(i);
                double* y = t2.row(i);
                const double* vxr = p.vx.row(i);
                const double* vyr = p.vy.row(i);
                for (int j = 0; j < n; ++j) {
                    const double base = a[j] * s;
                    a[j] = base * p.alpha;
                    x[j] = base * vxr[j];
                    y[j] = base * vyr[j];
                }
            }
            GridField out = conv3x3_adjoint(gg, kernels::J4);
            axpy(out, 1.0, conv3x3_adjoint(t1, kernels::Jx));
            axpy(out, 1.0, conv3x3_adjoint(t2, kernels::Jy));
            return out;
        }
    }
    throw std::logic_error("smooth_adjoint: bad family");
}

/// Adjoint of du -> residual(p, u + du) - residual(p, u)  (i.e. of -(1-M) A).
inline GridField residual_adjoint(const PdeProblem& p, const GridField& g) {
    require_same_n(g.n(), p.n(), "residual_adjoint");
    const int n = g.n();
    GridField gg = gated(g, p.mask);
    switch (p.kind) {
        case PdeFamily::Poisson: {
            GridField out = conv3x3_adjoint(gg, kernels::L);
            for (double& v : out.data()) v = -v;
            return out;
        }
        case PdeFamily::Helmholtz: {
            GridField out = conv3x3_adjoint(gg, kernels::L);
            for (int i = 0; i < n; ++i) {
                double* o = out.row(i);
                const double* gr = gg.row(i);
                const double* kr = p.k2.row(i);
                for (int j = 0; j < n; ++j) o[j] = -(o[j] + kr[j] * gr[j]);
            }
            return out;
        }
        case PdeFamily::ConvDiffReact: {
            GridField t1(n), t2(n);
            GridField scaled = gg;
            for (int i = 0; i < n; ++i) {
                double* a = scaled.row(i);
                double* x = t1.row(i);
                double* y = t2.row(i);
                const double* vxr = p.vx.row(i);
                const double* vyr = p.vy.row(i);
                for (int j = 0; j < n; ++j) {
                    x[j] = a[j] * vxr[j];
                    y[j] = a[j] * vyr[j];
                    a[j] *= p.alpha;
                }
            }
            GridField out = conv3x3_adjoint(scaled, kernels::L);
            axpy(out, 1.0, conv3x3_adjoint(t1, kernels::Jx));
            axpy(out, 1.0, conv3x3_adjoint(t2, kernels::Jy));
            for (int i = 0; i < n; ++i) {
                double* o = out.row(i);
                const double* gr = gg.row(i);
                for (int j = 0; j < n; ++j) o[j] -= p.beta * gr[j];
            }
            return out;
        }
    }
    throw std::logic_error("residual_adjoint: bad family");
}

}  // namespace ugrid
