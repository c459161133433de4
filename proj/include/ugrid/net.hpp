/// @file net.hpp
/// @brief The recursive, bias-free, mask-gated correction network.
///
/// One level of the recursion, on c-channel features x (already gated):
///
///     h   = pre-conv stack (gate after every conv)
///     d   = gate(downsample(h))            -> recurse on the 2x-coarser grid
///     h   = gate(upsample(recursion(d)))
///     h   = post-conv stack (gate after every conv)
///     out = h + x                           (feature skip; levels > 0)
///
/// At level 0 the 1-channel residual r is gated, lifted to c channels, and
/// run through the level-0 body; the gated residual itself is then broadcast
/// into every feature channel (the top skip) before the learnable projection
/// back to 1 channel. The output correction is linear in r, vanishes wherever
/// the mask is boundary, and is identically zero when all weights are zero.
/// The recursion stops early once a level would drop below a 5-point grid.
///
/// There are no bias terms, activations, or normalization layers anywhere:
/// for fixed weights and mask the whole network is one linear operator.

#pragma once

#include <memory>

#include "ugrid/rng.hpp"
#include "ugrid/tensor.hpp"

namespace ugrid {

struct UGridParams {
    int depth = 6;
    int channels = 8;
    int pre_convs = 2;
    int post_convs = 2;
    std::uint64_t seed = 0;
    std::vector<double> w;

    std::size_t conv_size() const { return static_cast<std::size_t>(channels) * channels * 9; }
    std::size_t lift_offset() const { return 0; }
    std::size_t level_offset(int l) const {
        return static_cast<std::size_t>(9) * channels +
               static_cast<std::size_t>(l) * (pre_convs + post_convs) * conv_size();
    }
    std::size_t pre_offset(int l, int k) const { return level_offset(l) + static_cast<std::size_t>(k) * conv_size(); }
    std::size_t post_offset(int l, int k) const {
        return level_offset(l) + static_cast<std::size_t>(pre_convs + k) * conv_size();
    }
    std::size_t project_offset() const { return level_offset(depth); }
    std::size_t parameter_count() const { return project_offset() + static_cast<std::size_t>(9) * channels; }
};

/// PyTorch-style default initialization: uniform in +-1/sqrt(fan_in) with
/// fan_in = 9 * c_in. Deterministic in the seed.
inline UGridParams init_params(int depth, int channels, std::uint64_t seed, int pre_convs = 2,
                               int post_convs = 2) {
    if (depth < 1 || channels < 1 || pre_convs < 0 || post_convs < 0) {
        throw std::invalid_argument("init_params: bad architecture parameters");
    }
    UGridParams p;
    p.depth = depth;
    p.channels = channels;
    p.pre_convs = pre_convs;
    p.post_convs = post_convs;
    p.seed = seed;
    p.w.assign(p.parameter_count(), 0.0);
    Rng rng(seed);
    const double lift_bound = 1.0 / 3.0;  // fan_in = 9
    for (std::size_t k = 0; k < static_cast<std::size_t>(9) * channels; ++k) {
        p.w[p.lift_offset() + k] = rng.uniform(-lift_bound, lift_bound);
    }
    const double conv_bound = 1.0 / std::sqrt(9.0 * channels);
    for (std::size_t k = p.level_offset(0); k < p.project_offset(); ++k) p.w[k] = rng.uniform(-conv_bound, conv_bound);
    for (std::size_t k = 0; k < static_cast<std::size_t>(9) * channels; ++k) {
        p.w[p.project_offset() + k] = rng.uniform(-conv_bound, conv_bound);
    }
    return p;
}

/// Interior masks per recursion level; level L+1 is the conservative
/// coarsening of level L.
struct LevelMasks {
    std::vector<InteriorMask> m;
    int levels() const { return static_cast<int>(m.size()); }
    int n() const { return m.front().n(); }
};

inline LevelMasks make_level_masks(const InteriorMask& mask, int depth) {
    LevelMasks lm;
    lm.m.push_back(mask);
    while (lm.levels() < depth && coarse_size(lm.m.back().n()) >= 5) {
        lm.m.push_back(coarsen_mask(lm.m.back()));
    }
    return lm;
}

struct LevelTape {
    std::vector<FieldStack> pre_in;
    std::vector<FieldStack> post_in;
    std::unique_ptr<LevelTape> child;
};

struct Tape {
    GridField r0;           // gated input residual
    FieldStack project_in;  // input to the projection conv
    LevelTape root;
    int n = 0;
};

namespace detail {

inline FieldStack gated_conv(const double* w, int c_out, int c_in, const FieldStack& x,
                             const InteriorMask& mask) {
    FieldStack y = conv_mc(w, c_out, c_in, x);
    gate_stack(y, mask);
    return y;
}

inline FieldStack net_level_forward(int l, FieldStack x, const LevelMasks& lm, const UGridParams& P,
                                    LevelTape* t) {
    const int c = P.channels;
    FieldStack skip;
    if (l > 0) skip = x;
    FieldStack h = std::move(x);
    for (int k = 0; k < P.pre_convs; ++k) {
        FieldStack in = std::move(h);
        const FieldStack* src = &in;
        if (t) {
            t->pre_in.push_back(std::move(in));
            src = &t->pre_in.back();
        }
        h = gated_conv(&P.w[P.pre_offset(l, k)], c, c, *src, lm.m[l]);
    }
    if (l + 1 < lm.levels()) {
        FieldStack d = restrict_stack(h);
        gate_stack(d, lm.m[l + 1]);
        LevelTape* ct = nullptr;
        if (t) {
            t->child = std::make_unique<LevelTape>();
            ct = t->child.get();
        }
        FieldStack g = net_level_forward(l + 1, std::move(d), lm, P, ct);
        h = prolong_stack(g);
        gate_stack(h, lm.m[l]);
    }
    for (int k = 0; k < P.post_convs; ++k) {
        FieldStack in = std::move(h);
        const FieldStack* src = &in;
        if (t) {
            t->post_in.push_back(std::move(in));
            src = &t->post_in.back();
        }
        h = gated_conv(&P.w[P.post_offset(l, k)], c, c, *src, lm.m[l]);
    }
    if (l > 0) stack_axpy(h, 1.0, skip);
    return h;
}

inline FieldStack net_level_backward(int l, const FieldStack& gout, const LevelMasks& lm,
                                     const UGridParams& P, const LevelTape& t, std::vector<double>& wg) {
    const int c = P.channels;
    FieldStack g = gout;
    for (int k = P.post_convs - 1; k >= 0; --k) {
        gate_stack(g, lm.m[l]);
        conv_mc_weight_grad(t.post_in[k], g, &wg[P.post_offset(l, k)], c, c);
        g = conv_mc_adjoint_input(&P.w[P.post_offset(l, k)], c, c, g);
    }
    if (l + 1 < lm.levels()) {
        gate_stack(g, lm.m[l]);
        FieldStack gc = prolong_stack_adjoint(g);
        FieldStack gd = net_level_backward(l + 1, gc, lm, P, *t.child, wg);
        gate_stack(gd, lm.m[l + 1]);
        g = restrict_stack_adjoint(gd, lm.m[l].n());
    }
    for (int k = P.pre_convs - 1; k >= 0; --k) {
        gate_stack(g, lm.m[l]);
        conv_mc_weight_grad(t.pre_in[k], g, &wg[P.pre_offset(l, k)], c, c);
        g = conv_mc_adjoint_input(&P.w[P.pre_offset(l, k)], c, c, g);
    }
    if (l > 0) stack_axpy(g, 1.0, gout);
    return g;
}

}  // namespace detail

/// Correction delta = Net(r); linear in r, identically zero outside the
/// interior. Pass a Tape to record the intermediates backward() needs.
inline GridField net_forward(const GridField& r, const LevelMasks& lm, const UGridParams& P,
                             Tape* tape = nullptr) {
    require_same_n(r.n(), lm.n(), "net_forward");
    if (r.n() < 5) throw std::invalid_argument("net_forward: grid too small");
    const int c = P.channels;
    GridField r0 = gated(r, lm.m[0]);
    FieldStack x = FieldStack::from_field(r0);
    FieldStack lifted = detail::gated_conv(&P.w[P.lift_offset()], c, 1, x, lm.m[0]);
    LevelTape* rt = tape ? &tape->root : nullptr;
    if (tape) {
        tape->r0 = r0;
        tape->n = r.n();
    }
    FieldStack y = detail::net_level_forward(0, std::move(lifted), lm, P, rt);
    // top skip: broadcast the gated residual into every feature channel
    for (int k = 0; k < c; ++k) {
        double* yc = y.ch(k);
        const double* rd = r0.data().data();
        for (std::size_t q = 0; q < r0.size(); ++q) yc[q] += rd[q];
    }
    if (tape) tape->project_in = y;
    FieldStack z = detail::gated_conv(&P.w[P.project_offset()], 1, c, y, lm.m[0]);
    return z.to_field();
}

/// Parameter gradients for a scalar loss with upstream dL/ddelta; also
/// returns dL/dr for chaining through outer iterations.
inline GridField net_backward(const Tape& tape, const LevelMasks& lm, const UGridParams& P,
                              const GridField& gdelta, std::vector<double>& wgrad) {
    if (wgrad.size() != P.parameter_count()) {
        throw std::invalid_argument("net_backward: gradient buffer size mismatch");
    }
    require_same_n(gdelta.n(), tape.n, "net_backward");
    const int c = P.channels;
    FieldStack gz = FieldStack::from_field(gdelta);
    gate_stack(gz, lm.m[0]);
    conv_mc_weight_grad(tape.project_in, gz, &wgrad[P.project_offset()], 1, c);
    FieldStack gy = conv_mc_adjoint_input(&P.w[P.project_offset()], 1, c, gz);
    // adjoint of the broadcast skip: channel sum feeds the residual path
    GridField gr_skip(tape.n);
    for (int k = 0; k < c; ++k) {
        const double* gc = gy.ch(k);
        double* rd = gr_skip.data().data();
        for (std::size_t q = 0; q < gr_skip.size(); ++q) rd[q] += gc[q];
    }
    FieldStack gx = detail::net_level_backward(0, gy, lm, P, tape.root, wgrad);
    gate_stack(gx, lm.m[0]);
    FieldStack r0s = FieldStack::from_field(tape.r0);
    conv_mc_weight_grad(r0s, gx, &wgrad[P.lift_offset()], c, 1);
    FieldStack gr0 = conv_mc_adjoint_input(&P.w[P.lift_offset()], c, 1, gx);
    GridField gr = gr0.to_field();
    axpy(gr, 1.0, gr_skip);
    gate(gr, lm.m[0]);
    return gr;
}

// ---- checkpoint files ------------------------------------------------------
// "UGCP" magic, uint32 LE version, uint32 LE JSON header length, JSON header,
// then every tensor as raw little-endian doubles in header order.

inline constexpr std::uint32_t kCheckpointVersion = 1;

}  // namespace ugrid

#include "ugrid/net_io.hpp"
