/// @file tensor.hpp
/// @brief Multi-channel grid stacks and the linear layer set used by the
///        learnable correction network: 3x3 multi-channel convolution,
///        mask gating, full-weighting downsampling, bilinear upsampling.
///
/// Every operation here is linear in its input and ships with its exact
/// adjoint; reverse-mode gradients are assembled from these pairs.

#pragma once

#include <cstring>

#include "ugrid/core.hpp"
#include "ugrid/transfer.hpp"

namespace ugrid {

/// c channels of n x n fields, channel-major contiguous storage.
struct FieldStack {
    int c = 0, n = 0;
    std::vector<double> d;

    FieldStack() = default;
    FieldStack(int c_, int n_) : c(c_), n(n_), d(static_cast<std::size_t>(c_) * n_ * n_, 0.0) {}

    double* ch(int k) { return d.data() + static_cast<std::size_t>(k) * n * n; }
    const double* ch(int k) const { return d.data() + static_cast<std::size_t>(k) * n * n; }

    static FieldStack from_field(const GridField& f) {
        FieldStack s(1, f.n());
        std::memcpy(s.d.data(), f.data().data(), sizeof(double) * f.size());
        return s;
    }

    GridField to_field() const {
        GridField f(n);
        std::memcpy(f.data().data(), d.data(), sizeof(double) * f.size());
        return f;
    }
};

inline void stack_axpy(FieldStack& y, double a, const FieldStack& x) {
    for (std::size_t k = 0; k < y.d.size(); ++k) y.d[k] += a * x.d[k];
}

inline void gate_stack(FieldStack& x, const InteriorMask& mask) {
    for (int k = 0; k < x.c; ++k) {
        double* p = x.ch(k);
        for (int i = 0; i < x.n; ++i) {
            const std::uint8_t* mr = mask.row(i);
            double* row = p + static_cast<std::size_t>(i) * x.n;
            for (int j = 0; j < x.n; ++j)
                if (!mr[j]) row[j] = 0.0;
        }
    }
}

namespace detail {

/// out += zero-padded 3x3 sliding window of src with taps k9 (row-major).
inline void accumulate_conv_plane(double* out, const double* src, int n, const double* k9) {
    const double k0 = k9[0], k1 = k9[1], k2 = k9[2];
    const double k3 = k9[3], k4 = k9[4], k5 = k9[5];
    const double k6 = k9[6], k7 = k9[7], k8 = k9[8];
    for (int i = 0; i < n; ++i) {
        const double* up = i > 0 ? src + static_cast<std::size_t>(i - 1) * n : nullptr;
        const double* mid = src + static_cast<std::size_t>(i) * n;
        const double* dn = i < n - 1 ? src + static_cast<std::size_t>(i + 1) * n : nullptr;
        double* o = out + static_cast<std::size_t>(i) * n;
        // left edge
        {
            double s = k4 * mid[0] + k5 * mid[1];
            if (up) s += k1 * up[0] + k2 * up[1];
            if (dn) s += k7 * dn[0] + k8 * dn[1];
            o[0] += s;
        }
        if (up && dn) {
            for (int j = 1; j < n - 1; ++j) {
                o[j] += k0 * up[j - 1] + k1 * up[j] + k2 * up[j + 1] + k3 * mid[j - 1] + k4 * mid[j] +
                        k5 * mid[j + 1] + k6 * dn[j - 1] + k7 * dn[j] + k8 * dn[j + 1];
            }
        } else {
            for (int j = 1; j < n - 1; ++j) {
                double s = k3 * mid[j - 1] + k4 * mid[j] + k5 * mid[j + 1];
                if (up) s += k0 * up[j - 1] + k1 * up[j] + k2 * up[j + 1];
                if (dn) s += k6 * dn[j - 1] + k7 * dn[j] + k8 * dn[j + 1];
                o[j] += s;
            }
        }
        // right edge
        {
            const int j = n - 1;
            double s = k3 * mid[j - 1] + k4 * mid[j];
            if (up) s += k0 * up[j - 1] + k1 * up[j];
            if (dn) s += k6 * dn[j - 1] + k7 * dn[j];
            o[j] += s;
        }
    }
}

inline void flip9(const double* k9, double* f9) {
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) f9[a * 3 + b] = k9[(2 - a) * 3 + (2 - b)];
}

}  // namespace detail

/// y[oc] = sum_ic x[ic] * K[oc][ic]; weights laid out as
/// w[((oc*c_in)+ic)*9 + tap], taps row-major.
inline FieldStack conv_mc(const double* w, int c_out, int c_in, const FieldStack& x) {
    FieldStack y(c_out, x.n);
    for (int oc = 0; oc < c_out; ++oc) {
        double* out = y.ch(oc);
        for (int ic = 0; ic < c_in; ++ic) {
            detail::accumulate_conv_plane(out, x.ch(ic), x.n, w + (static_cast<std::size_t>(oc) * c_in + ic) * 9);
        }
    }
    return y;
}

/// Adjoint wrt the input: xhat[ic] = sum_oc g[oc] * flip(K[oc][ic]).
inline FieldStack conv_mc_adjoint_input(const double* w, int c_out, int c_in, const FieldStack& g) {
    FieldStack xh(c_in, g.n);
    double f9[9];
    for (int ic = 0; ic < c_in; ++ic) {
        double* out = xh.ch(ic);
        for (int oc = 0; oc < c_out; ++oc) {
            detail::flip9(w + (static_cast<std::size_t>(oc) * c_in + ic) * 9, f9);
            detail::accumulate_conv_plane(out, g.ch(oc), g.n, f9);
        }
    }
    return xh;
}

/// Accumulates dL/dK given the layer input x and the upstream gradient g.
inline void conv_mc_weight_grad(const FieldStack& x, const FieldStack& g, double* wgrad, int c_out,
                                int c_in) {
    const int n = x.n;
    for (int oc = 0; oc < c_out; ++oc) {
        const double* gp = g.ch(oc);
        for (int ic = 0; ic < c_in; ++ic) {
            const double* xp = x.ch(ic);
            double* wg = wgrad + (static_cast<std::size_t>(oc) * c_in + ic) * 9;
            for (int a = 0; a < 3; ++a) {
                const int di = a - 1;
                const int i0 = std::max(0, -di), i1 = std::min(n, n - di);
                for (int b = 0; b < 3; ++b) {
                    const int dj = b - 1;
                    const int j0 = std::max(0, -dj), j1 = std::min(n, n - dj);
                    double s = 0.0;
                    for (int i = i0; i < i1; ++i) {
                        const double* gr = gp + static_cast<std::size_t>(i) * n;
                        const double* xr = xp + static_cast<std::size_t>(i + di) * n + dj;
                        for (int j = j0; j < j1; ++j) s += gr[j] * xr[j];
                    }
                    wg[a * 3 + b] += s;
                }
            }
        }
    }
}

/// Channelwise full-weighting downsample with zero padding everywhere
/// (the frame is gated away afterwards, so no copy rule is needed).
inline FieldStack restrict_stack(const FieldStack& x) {
    const int n = x.n;
    const int nc = coarse_size(n);
    FieldStack y(x.c, nc);
    for (int k = 0; k < x.c; ++k) {
        const double* src = x.ch(k);
        double* out = y.ch(k);
        for (int I = 0; I < nc; ++I) {
            for (int J = 0; J < nc; ++J) {
                const int ci = 2 * I, cj = 2 * J;
                double s = 0.0;
                for (int di = -1; di <= 1; ++di) {
                    const int i = ci + di;
                    if (i < 0 || i >= n) continue;
                    const double* row = src + static_cast<std::size_t>(i) * n;
                    const double wrow = di == 0 ? 0.25 : 0.125;
                    for (int dj = -1; dj <= 1; ++dj) {
                        const int j = cj + dj;
                        if (j < 0 || j >= n) continue;
                        s += (dj == 0 ? wrow : 0.5 * wrow) * row[j];
                    }
                }
                out[static_cast<std::size_t>(I) * nc + J] = s;
            }
        }
    }
    return y;
}

inline FieldStack restrict_stack_adjoint(const FieldStack& g, int n_fine) {
    const int nc = g.n;
    FieldStack xh(g.c, n_fine);
    for (int k = 0; k < g.c; ++k) {
        const double* gp = g.ch(k);
        double* out = xh.ch(k);
        for (int I = 0; I < nc; ++I) {
            for (int J = 0; J < nc; ++J) {
                const double gv = gp[static_cast<std::size_t>(I) * nc + J];
                if (gv == 0.0) continue;
                const int ci = 2 * I, cj = 2 * J;
                for (int di = -1; di <= 1; ++di) {
                    const int i = ci + di;
                    if (i < 0 || i >= n_fine) continue;
                    const double wrow = di == 0 ? 0.25 : 0.125;
                    double* row = out + static_cast<std::size_t>(i) * n_fine;
                    for (int dj = -1; dj <= 1; ++dj) {
                        const int j = cj + dj;
                        if (j < 0 || j >= n_fine) continue;
                        row[j] += (dj == 0 ? wrow : 0.5 * wrow) * gv;
                    }
                }
            }
        }
    }
    return xh;
}

/// Channelwise bilinear upsample, coarse m -> fine 2m-1.
inline FieldStack prolong_stack(const FieldStack& x) {
    const int nc = x.n;
    const int n = fine_size(nc);
    FieldStack y(x.c, n);
    for (int k = 0; k < x.c; ++k) {
        const double* c = x.ch(k);
        double* f = y.ch(k);
        auto cv = [&](int I, int J) { return c[static_cast<std::size_t>(I) * nc + J]; };
        for (int I = 0; I < nc; ++I) {
            for (int J = 0; J < nc; ++J) {
                f[static_cast<std::size_t>(2 * I) * n + 2 * J] = cv(I, J);
                if (J + 1 < nc) f[static_cast<std::size_t>(2 * I) * n + 2 * J + 1] = 0.5 * (cv(I, J) + cv(I, J + 1));
                if (I + 1 < nc) f[static_cast<std::size_t>(2 * I + 1) * n + 2 * J] = 0.5 * (cv(I, J) + cv(I + 1, J));
                if (I + 1 < nc && J + 1 < nc)
                    f[static_cast<std::size_t>(2 * I + 1) * n + 2 * J + 1] =
                        0.25 * (cv(I, J) + cv(I, J + 1) + cv(I + 1, J) + cv(I + 1, J + 1));
            }
        }
    }
    return y;
}

inline FieldStack prolong_stack_adjoint(const FieldStack& g) {
    const int n = g.n;
    const int nc = coarse_size(n);
    FieldStack xh(g.c, nc);
    for (int k = 0; k < g.c; ++k) {
        const double* f = g.ch(k);
        double* c = xh.ch(k);
        auto cadd = [&](int I, int J, double v) { c[static_cast<std::size_t>(I) * nc + J] += v; };
        for (int I = 0; I < nc; ++I) {
            for (int J = 0; J < nc; ++J) {
                cadd(I, J, f[static_cast<std::size_t>(2 * I) * n + 2 * J]);
                if (J + 1 < nc) {
                    const double t = 0.5 * f[static_cast<std::size_t>(2 * I) * n + 2 * J + 1];
                    cadd(I, J, t);
                    cadd(I, J + 1, t);
                }
                if (I + 1 < nc) {
                    const double t = 0.5 * f[static_cast<std::size_t>(2 * I + 1) * n + 2 * J];
                    cadd(I, J, t);
                    cadd(I + 1, J, t);
                }
                if (I + 1 < nc && J + 1 < nc) {
                    const double t = 0.25 * f[static_cast<std::size_t>(2 * I + 1) * n + 2 * J + 1];
                    cadd(I, J, t);
                    cadd(I, J + 1, t);
                    cadd(I + 1, J, t);
                    cadd(I + 1, J + 1, t);
                }
            }
        }
    }
    return xh;
}

}  // namespace ugrid
