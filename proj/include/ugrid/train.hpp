/// @file train.hpp
/// @brief Self-supervised training: unroll the outer iteration T times from
///        the zero-interior start, take the residual loss on the final
///        iterate, and backpropagate through every smooth / residual /
///        network step. The reference-based loss is available for ablation.
///
/// Determinism: data generation, shuffling, and initialization derive from
/// the config seed; per-sample gradients are computed in parallel but reduced
/// in sample order, so identical seeds give byte-identical checkpoints.

#pragma once

#include <algorithm>
#include <filesystem>
#include <iostream>

#include "ugrid/adam.hpp"
#include "ugrid/dataset.hpp"
#include "ugrid/loss.hpp"
#include "ugrid/solver.hpp"
#include "ugrid/threading.hpp"

namespace ugrid {

enum class LossKind { Residual, Legacy };

struct TrainConfig {
    PdeFamily family = PdeFamily::Poisson;
    int grid_n = 257;
    int dataset_size = 2000;  // desk-scale default; full-scale runs are one config away
    int epochs = 300;
    int batch_size = 16;
    double lr0 = 1e-3;
    double lr_decay = 0.1;
    int lr_step_epochs = 50;
    int unroll = 3;  // T
    LossKind loss = LossKind::Residual;
    int depth = 6;
    int channels = 8;
    int nu1 = 2, nu2 = 2;
    double val_fraction = 0.1;
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = all hardware threads
    std::string out_dir = "train_out";
    std::string data_dir;      // when set, load samples instead of generating
    bool quiet = true;
    bool save_epoch_checkpoints = true;

    void validate() const {
        if (epochs < 1 || batch_size < 1 || dataset_size < 2 || unroll < 1)
            throw std::invalid_argument("TrainConfig: counts must be positive");
        if (!(lr0 > 0.0)) throw std::invalid_argument("TrainConfig: lr0 must be > 0");
        if (!(val_fraction >= 0.0 && val_fraction < 1.0))
            throw std::invalid_argument("TrainConfig: val_fraction must be in [0, 1)");
    }

    double lr_at_epoch(int epoch) const {
        return lr0 * std::pow(lr_decay, static_cast<double>(epoch / lr_step_epochs));
    }
};

struct EpochMetrics {
    int epoch = 0;
    double train_loss = 0.0;
    double val_rel_residual = 0.0;
    double lr = 0.0;
};

struct TrainResult {
    UGridParams params;
    std::vector<EpochMetrics> log;
    std::string checkpoint_path;
    std::string metrics_path;
};

namespace detail {

/// Everything per-sample the inner loop needs, built once.
struct TrainItem {
    PdeProblem problem;
    LevelMasks lm;
    GridField u0;
    GridField reference;  // legacy loss only
};

/// Unrolled forward/backward for one sample. Returns the loss; accumulates
/// parameter gradients into grad (sized parameter_count, zeroed by caller).
inline double sample_loss_and_grad(const TrainItem& item, const UGridParams& P, const TrainConfig& cfg,
                                   std::vector<double>& grad) {
    const PdeProblem& p = item.problem;
    const int T = cfg.unroll;
    std::vector<Tape> tapes(T);
    GridField u = item.u0;
    for (int t = 0; t < T; ++t) {
        for (int s = 0; s < cfg.nu1; ++s) u = smooth(p, u);
        GridField r = residual(p, u);
        GridField delta = net_forward(r, item.lm, P, &tapes[t]);
        axpy(u, 1.0, delta);
        u = masked_compose(u, p.b, p.mask);
        for (int s = 0; s < cfg.nu2; ++s) u = smooth(p, u);
    }

    double loss;
    GridField g(p.n());
    if (cfg.loss == LossKind::Residual) {
        loss = residual_loss(p, u);
        g = residual_loss_grad(p, u);
    } else {
        loss = legacy_loss(u, item.reference);
        g = legacy_loss_grad(u, item.reference);
    }

    for (int t = T - 1; t >= 0; --t) {
        for (int s = 0; s < cfg.nu2; ++s) g = smooth_adjoint(p, g);
        gate(g, p.mask);  // the masked compose after the correction
        GridField gr = net_backward(tapes[t], item.lm, P, g, grad);
        axpy(g, 1.0, residual_adjoint(p, gr));
        for (int s = 0; s < cfg.nu1; ++s) g = smooth_adjoint(p, g);
    }
    return loss;
}

inline std::vector<Sample> make_samples(const TrainConfig& cfg) {
    std::vector<Sample> samples;
    samples.reserve(cfg.dataset_size);
    if (!cfg.data_dir.empty()) {
        nlohmann::json manifest = read_manifest(cfg.data_dir);
        const int count = manifest.at("count").get<int>();
        for (int i = 0; i < count && i < cfg.dataset_size; ++i)
            samples.push_back(load_sample(cfg.data_dir, manifest, i));
    } else {
        Rng master(cfg.seed);
        for (int i = 0; i < cfg.dataset_size; ++i) {
            Rng srng = master.fork();
            samples.push_back(gen_donut_sample(cfg.grid_n, cfg.family, srng));
        }
    }
    return samples;
}

}  // namespace detail

inline TrainResult train(const TrainConfig& cfg) {
    cfg.validate();
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const int threads = resolve_threads(cfg.threads);

    std::vector<Sample> samples = detail::make_samples(cfg);
    const int total = static_cast<int>(samples.size());
    const int val_count = std::max(cfg.val_fraction > 0.0 ? 1 : 0,
                                   static_cast<int>(std::floor(total * cfg.val_fraction)));
    const int train_count = total - val_count;
    if (train_count < 1) throw std::invalid_argument("train: no training samples left after the split");

    std::vector<detail::TrainItem> items(total);
    parallel_for(static_cast<std::size_t>(total), threads, [&](std::size_t i) {
        detail::TrainItem it{samples[i].problem(), {}, {}, {}};
        it.lm = make_level_masks(it.problem.mask, cfg.depth);
        it.u0 = initial_guess(it.problem);
        if (cfg.loss == LossKind::Legacy) {
            // reference solutions from the classical baseline, run hard
            SolveConfig ref;
            ref.tol = 1e-10;
            ref.max_iters = 300;
            it.reference = mg_solve(it.problem, ref).first;
        }
        items[i] = std::move(it);
    });

    UGridParams params = init_params(cfg.depth, cfg.channels, cfg.seed);
    AdamState adam(params.parameter_count());

    const std::string metrics_path = (fs::path(cfg.out_dir) / "metrics.csv").string();
    std::ofstream metrics(metrics_path);
    if (!metrics) throw std::runtime_error("cannot write metrics: " + metrics_path);
    metrics << "epoch,train_loss,val_rel_residual,lr\n";
    metrics.precision(12);

    std::vector<int> order(train_count);
    for (int i = 0; i < train_count; ++i) order[i] = i;
    Rng shuffle_rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);

    TrainResult result;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double lr = cfg.lr_at_epoch(epoch);
        // Fisher-Yates with a per-epoch deterministic stream
        for (int i = train_count - 1; i > 0; --i) {
            const int j = shuffle_rng.uniform_int(0, i);
            std::swap(order[i], order[j]);
        }

        double epoch_loss = 0.0;
        long batches = 0;
        std::vector<std::vector<double>> grads;
        std::vector<double> losses;
        for (int start = 0; start < train_count; start += cfg.batch_size) {
            const int bsz = std::min(cfg.batch_size, train_count - start);
            grads.assign(bsz, std::vector<double>(params.parameter_count(), 0.0));
            losses.assign(bsz, 0.0);
            parallel_for(static_cast<std::size_t>(bsz), threads, [&](std::size_t k) {
                losses[k] =
                    detail::sample_loss_and_grad(items[order[start + k]], params, cfg, grads[k]);
            });
            // fixed-order reduction keeps runs bit-reproducible
            std::vector<double> gsum(params.parameter_count(), 0.0);
            double lsum = 0.0;
            for (int k = 0; k < bsz; ++k) {
                lsum += losses[k];
                for (std::size_t w = 0; w < gsum.size(); ++w) gsum[w] += grads[k][w];
            }
            const double inv = 1.0 / bsz;
            for (double& v : gsum) v *= inv;
            const double batch_loss = lsum * inv;
            if (!std::isfinite(batch_loss)) {
                throw std::runtime_error("train: non-finite loss (seed " + std::to_string(cfg.seed) +
                                         ", epoch " + std::to_string(epoch) + ", batch " +
                                         std::to_string(batches) + ")");
            }
            adam_step(params.w, gsum, adam, lr);
            epoch_loss += batch_loss;
            ++batches;
        }
        epoch_loss /= std::max(1L, batches);

        // validation: mean final relative residual of a full capped solve
        double val_mean = 0.0;
        if (val_count > 0) {
            std::vector<double> errs(val_count, 0.0);
            parallel_for(static_cast<std::size_t>(val_count), threads, [&](std::size_t k) {
                SolveConfig sc;
                sc.nu1 = cfg.nu1;
                sc.nu2 = cfg.nu2;
                sc.tol = 1e-4;
                sc.max_iters = 64;
                sc.trace = false;
                errs[k] = solve(items[train_count + k].problem, params, sc).second.final_error;
            });
            for (double e : errs) val_mean += e;
            val_mean /= val_count;
        }

        metrics << epoch << "," << epoch_loss << "," << val_mean << "," << lr << "\n";
        metrics.flush();
        if (cfg.save_epoch_checkpoints) {
            char name[32];
            std::snprintf(name, sizeof name, "checkpoint_%04d.ugcp", epoch);
            save_checkpoint((fs::path(cfg.out_dir) / name).string(), params);
        }
        if (!cfg.quiet) {
            std::cout << "epoch " << epoch << " loss " << epoch_loss << " val " << val_mean << " lr " << lr
                      << "\n";
        }
        result.log.push_back({epoch, epoch_loss, val_mean, lr});
    }

    result.checkpoint_path = (fs::path(cfg.out_dir) / "checkpoint.ugcp").string();
    save_checkpoint(result.checkpoint_path, params);
    result.metrics_path = metrics_path;
    result.params = std::move(params);
    return result;
}

}  // namespace ugrid
