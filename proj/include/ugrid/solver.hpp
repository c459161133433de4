/// @file solver.hpp
/// @brief Outer iterations and stopping logic: the learned solver, plain
///        masked Jacobi, and the classical multigrid baseline, all under one
///        driver with a shared termination contract.
///
/// Stopping: relative residual <= tol (absolute residual <= tol*n when the
/// effective right-hand side vanishes), divergence at 1e6x the starting
/// residual, or the iteration cap.

#pragma once

#include <chrono>
#include <fstream>
#include <functional>
#include <optional>

#include "ugrid/multigrid.hpp"
#include "ugrid/net.hpp"
#include "ugrid/problem.hpp"

namespace ugrid {

struct SolveConfig {
    int nu1 = 2;             ///< pre-smooth sweeps per iteration
    int nu2 = 2;             ///< post-smooth sweeps per iteration
    double tol = 1e-4;       ///< relative-residual target
    int max_iters = 64;
    bool trace = true;

    void validate() const {
        if (nu1 < 0 || nu2 < 0) throw std::invalid_argument("SolveConfig: nu1, nu2 must be >= 0");
        if (!(tol > 0.0)) throw std::invalid_argument("SolveConfig: tol must be > 0");
        if (max_iters < 1) throw std::invalid_argument("SolveConfig: max_iters must be >= 1");
    }
};

enum class TermStatus { Converged, MaxIters, Diverged };

inline const char* term_name(TermStatus t) {
    switch (t) {
        case TermStatus::Converged: return "Converged";
        case TermStatus::MaxIters: return "MaxIters";
        case TermStatus::Diverged: return "Diverged";
    }
    return "?";
}

struct SolveReport {
    int iterations = 0;
    std::vector<double> trace;     ///< per-iteration relative residual
    std::vector<double> trace_ms;  ///< cumulative wall time at each iteration
    double final_error = 0.0;
    TermStatus terminated = TermStatus::MaxIters;
    double wall_time_ms = 0.0;
    bool absolute_mode = false;  ///< degenerate RHS; trace holds absolute residuals
};

namespace detail {

template <class Step>
std::pair<GridField, SolveReport> run_iteration(const PdeProblem& p, const SolveConfig& cfg, GridField u,
                                                Step&& step) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed_ms = [&t0]() {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    };
    SolveReport rep;
    const GridField feff = effective_rhs(p);
    const double denom = l2_norm(feff);
    rep.absolute_mode = denom == 0.0;
    const double scale = rep.absolute_mode ? 1.0 : denom;
    const double target = rep.absolute_mode ? cfg.tol * p.n() : cfg.tol;
    const double initial = l2_norm(residual(p, u)) / scale;
    const double diverge_at = 1e6 * std::max(initial, target);

    rep.terminated = TermStatus::MaxIters;
    for (int k = 1; k <= cfg.max_iters; ++k) {
        u = step(std::move(u));
        const double err = l2_norm(residual(p, u)) / scale;
        if (!std::isfinite(err)) {
            // keep the trace finite; the status carries the bad news
            rep.terminated = TermStatus::Diverged;
            break;
        }
        rep.iterations = k;
        rep.final_error = err;
        if (cfg.trace) {
            rep.trace.push_back(err);
            rep.trace_ms.push_back(elapsed_ms());
        }
        if (err > diverge_at) {
            rep.terminated = TermStatus::Diverged;
            break;
        }
        if (err <= target) {
            rep.terminated = TermStatus::Converged;
            break;
        }
    }
    rep.wall_time_ms = elapsed_ms();
    return {std::move(u), std::move(rep)};
}

}  // namespace detail

/// Default initial guess: b on boundary points, zero interior.
inline GridField initial_guess(const PdeProblem& p) {
    GridField zero(p.n());
    return masked_compose(zero, p.b, p.mask);
}

/// One outer iteration of the learned solver:
/// pre-smooth nu1 times, take the residual, add the network correction
/// through the interior mask, post-smooth nu2 times.
inline GridField ugrid_iterate(GridField u, const PdeProblem& p, const UGridParams& params,
                               const LevelMasks& lm, const SolveConfig& cfg) {
    for (int s = 0; s < cfg.nu1; ++s) u = smooth(p, u);
    GridField r = residual(p, u);
    GridField delta = net_forward(r, lm, params);
    axpy(u, 1.0, delta);
    u = masked_compose(u, p.b, p.mask);  // keep boundary rows bit-identical to b
    for (int s = 0; s < cfg.nu2; ++s) u = smooth(p, u);
    return u;
}

inline GridField ugrid_iterate(GridField u, const PdeProblem& p, const UGridParams& params,
                               const SolveConfig& cfg) {
    const LevelMasks lm = make_level_masks(p.mask, params.depth);
    return ugrid_iterate(std::move(u), p, params, lm, cfg);
}

/// Learned-solver outer loop.
inline std::pair<GridField, SolveReport> solve(const PdeProblem& p, const UGridParams& params,
                                               const SolveConfig& cfg,
                                               std::optional<GridField> u0 = std::nullopt) {
    const LevelMasks lm = make_level_masks(p.mask, params.depth);
    GridField u = u0 ? std::move(*u0) : initial_guess(p);
    return detail::run_iteration(p, cfg, std::move(u), [&](GridField v) {
        return ugrid_iterate(std::move(v), p, params, lm, cfg);
    });
}

/// Plain masked Jacobi; one sweep per reported iteration.
inline std::pair<GridField, SolveReport> jacobi_solve(const PdeProblem& p, const SolveConfig& cfg,
                                                      std::optional<GridField> u0 = std::nullopt) {
    GridField u = u0 ? std::move(*u0) : initial_guess(p);
    return detail::run_iteration(p, cfg, std::move(u), [&](GridField v) { return smooth(p, v); });
}

/// Classical multigrid; one V-cycle per reported iteration.
inline std::pair<GridField, SolveReport> mg_solve(const PdeProblem& p, const SolveConfig& cfg,
                                                  std::optional<GridField> u0 = std::nullopt) {
    const MgHierarchy h = build_hierarchy(p);
    GridField u = u0 ? std::move(*u0) : initial_guess(p);
    return detail::run_iteration(p, cfg, std::move(u),
                                 [&](GridField v) { return vcycle(p, std::move(v), h, cfg.nu1, cfg.nu2); });
}

/// Convergence-map CSV: iteration, relative_residual, cumulative_ms.
inline void write_trace_csv(const std::string& path, const SolveReport& rep) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "iteration,relative_residual,cumulative_ms\n";
    os.precision(17);
    for (std::size_t k = 0; k < rep.trace.size(); ++k) {
        os << (k + 1) << "," << rep.trace[k] << "," << (k < rep.trace_ms.size() ? rep.trace_ms[k] : 0.0)
           << "\n";
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace ugrid
