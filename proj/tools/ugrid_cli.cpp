/// Command-line entry point: data generation, training, solving, benchmarking,
/// and spectral verification. Exit codes: 0 success/converged, 2 iteration cap,
/// 3 divergence, 64 usage errors (bad flags, missing files), 1 internal errors.

#include <CLI11.hpp>

#include <iostream>

#include "ugrid/bench.hpp"
#include "ugrid/dataset.hpp"
#include "ugrid/solver.hpp"
#include "ugrid/spectral.hpp"
#include "ugrid/testcases.hpp"
#include "ugrid/train.hpp"

namespace {

using namespace ugrid;

constexpr int kUsageError = 64;

struct TrainFlags {
    std::string config_path;
    std::string family = "poisson";
    int n = 257;
    int dataset_size = 2000;
    int epochs = 300;
    int batch_size = 16;
    double lr0 = 1e-3;
    double lr_decay = 0.1;
    int lr_step = 50;
    int unroll = 3;
    std::string loss = "residual";
    int depth = 6;
    int channels = 8;
    int nu1 = 2, nu2 = 2;
    double val_fraction = 0.1;
    std::string data_dir;
    bool verbose = false;
};

/// Flat key=value config; unknown keys are rejected so typos surface early.
void apply_config_file(const std::string& path, TrainFlags& f) {
    std::ifstream is(path);
    if (!is) throw CLI::ValidationError("--config", "cannot open " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
        std::size_t start = 0;
        while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
        if (start >= line.size()) continue;
        const auto eq = line.find('=', start);
        if (eq == std::string::npos)
            throw CLI::ValidationError("--config", "line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = line.substr(start, eq - start);
        const std::string val = line.substr(eq + 1);
        if (key == "family") f.family = val;
        else if (key == "n") f.n = std::stoi(val);
        else if (key == "dataset_size") f.dataset_size = std::stoi(val);
        else if (key == "epochs") f.epochs = std::stoi(val);
        else if (key == "batch_size") f.batch_size = std::stoi(val);
        else if (key == "lr0") f.lr0 = std::stod(val);
        else if (key == "lr_decay") f.lr_decay = std::stod(val);
        else if (key == "lr_step") f.lr_step = std::stoi(val);
        else if (key == "unroll") f.unroll = std::stoi(val);
        else if (key == "loss") f.loss = val;
        else if (key == "depth") f.depth = std::stoi(val);
        else if (key == "channels") f.channels = std::stoi(val);
        else if (key == "nu1") f.nu1 = std::stoi(val);
        else if (key == "nu2") f.nu2 = std::stoi(val);
        else if (key == "val_fraction") f.val_fraction = std::stod(val);
        else if (key == "data_dir") f.data_dir = val;
        else throw CLI::ValidationError("--config", "line " + std::to_string(lineno) + ": unknown key " + key);
    }
}

PdeProblem build_problem(const std::string& testcase, const std::string& problem_dir,
                         const std::string& family, int n, std::uint64_t seed) {
    if (!problem_dir.empty()) return read_problem_dir(problem_dir);
    const PdeFamily fam = family_from_name(family);
    if (testcase.size() > 4 && testcase.substr(testcase.size() - 4) == ".pgm")
        return testcase_from_pgm(testcase, fam, seed);
    return gen_testcase(testcase, fam, n, seed);
}

int exit_code_for(TermStatus t) {
    switch (t) {
        case TermStatus::Converged: return 0;
        case TermStatus::MaxIters: return 2;
        case TermStatus::Diverged: return 3;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"masked multigrid-style neural solver for 2D linear PDEs"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    int threads = 0;
    std::string out_dir = "out";
    app.add_option("--seed", seed, "global random seed")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (0 = all hardware threads)")->capture_default_str();
    app.add_option("--out-dir", out_dir, "output directory")->capture_default_str();

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "generate a training dataset");
    std::string gen_family = "poisson";
    int gen_n = 257, gen_count = 2000;
    gen->add_option("--family", gen_family, "poisson | helmholtz | convdiff")->capture_default_str();
    gen->add_option("--n", gen_n, "grid side length (2^k + 1)")->capture_default_str();
    gen->add_option("--count", gen_count, "number of samples")->capture_default_str();

    // train
    auto* tr = app.add_subcommand("train", "train the correction network");
    TrainFlags tf;
    tr->add_option("--config", tf.config_path, "key=value config file (flags override it)");
    auto* o_family = tr->add_option("--family", tf.family, "poisson | helmholtz | convdiff")->capture_default_str();
    auto* o_n = tr->add_option("--n", tf.n, "training grid side length")->capture_default_str();
    auto* o_ds = tr->add_option("--dataset-size", tf.dataset_size, "samples to generate")->capture_default_str();
    auto* o_ep = tr->add_option("--epochs", tf.epochs, "training epochs")->capture_default_str();
    auto* o_bs = tr->add_option("--batch-size", tf.batch_size, "samples per update")->capture_default_str();
    auto* o_lr = tr->add_option("--lr0", tf.lr0, "initial learning rate")->capture_default_str();
    auto* o_ld = tr->add_option("--lr-decay", tf.lr_decay, "multiplicative decay factor")->capture_default_str();
    auto* o_ls = tr->add_option("--lr-step", tf.lr_step, "epochs between decays")->capture_default_str();
    auto* o_un = tr->add_option("--unroll", tf.unroll, "outer iterations unrolled through the loss")
                     ->capture_default_str();
    auto* o_lo = tr->add_option("--loss", tf.loss, "residual | legacy")->capture_default_str();
    auto* o_de = tr->add_option("--depth", tf.depth, "recursion depth")->capture_default_str();
    auto* o_ch = tr->add_option("--channels", tf.channels, "feature channels")->capture_default_str();
    auto* o_n1 = tr->add_option("--nu1", tf.nu1, "pre-smooth sweeps")->capture_default_str();
    auto* o_n2 = tr->add_option("--nu2", tf.nu2, "post-smooth sweeps")->capture_default_str();
    auto* o_vf = tr->add_option("--val-fraction", tf.val_fraction, "held-out fraction")->capture_default_str();
    auto* o_dd = tr->add_option("--data", tf.data_dir, "load dataset from this directory instead of generating");
    tr->add_flag("--verbose", tf.verbose, "per-epoch progress on stdout");

    // solve
    auto* so = app.add_subcommand("solve", "solve one problem with a trained checkpoint");
    std::string so_checkpoint, so_testcase = "square", so_problem_dir, so_trace, so_warm, so_family = "poisson";
    int so_n = 257, so_max_iters = 64;
    double so_tol = 1e-4;
    int so_nu1 = 2, so_nu2 = 2;
    so->add_option("--checkpoint", so_checkpoint, "trained parameters (.ugcp)")->required();
    so->add_option("--testcase", so_testcase, "generator name or a .pgm mask path")->capture_default_str();
    so->add_option("--problem-dir", so_problem_dir, "directory with problem.json and UGF1 fields");
    so->add_option("--family", so_family, "poisson | helmholtz | convdiff")->capture_default_str();
    so->add_option("--n", so_n, "grid side length for generated testcases")->capture_default_str();
    so->add_option("--tol", so_tol, "relative-residual target")->capture_default_str();
    so->add_option("--max-iters", so_max_iters, "outer iteration cap")->capture_default_str();
    so->add_option("--nu1", so_nu1, "pre-smooth sweeps")->capture_default_str();
    so->add_option("--nu2", so_nu2, "post-smooth sweeps")->capture_default_str();
    so->add_option("--trace-out", so_trace, "write the convergence map CSV here");
    so->add_option("--warm-start", so_warm, "initial iterate as a UGF1 field");
    std::string so_solution_out;
    so->add_option("--solution-out", so_solution_out, "write the final iterate as UGF1 here");

    // bench
    auto* be = app.add_subcommand("bench", "compare solvers across testcases");
    std::string be_checkpoint, be_family = "poisson";
    std::vector<std::string> be_solvers = {"jacobi", "mg", "ugrid"};
    std::vector<std::string> be_cases = {"square", "l_shape", "star", "donut", "noisy", "sharp_feature"};
    int be_repeats = 10, be_n = 257, be_max_iters = 64;
    double be_tol = 1e-4;
    be->add_option("--checkpoint", be_checkpoint, "trained parameters (required for the ugrid solver)");
    be->add_option("--solvers", be_solvers, "subset of jacobi, mg, ugrid")->capture_default_str();
    be->add_option("--testcases", be_cases, "generator names")->capture_default_str();
    be->add_option("--repeats", be_repeats, "timing repetitions per row")->capture_default_str();
    be->add_option("--family", be_family, "poisson | helmholtz | convdiff")->capture_default_str();
    be->add_option("--n", be_n, "grid side length")->capture_default_str();
    be->add_option("--tol", be_tol, "relative-residual target")->capture_default_str();
    be->add_option("--max-iters", be_max_iters, "outer iteration cap")->capture_default_str();

    // spectral
    auto* sp = app.add_subcommand("spectral", "estimate the update operator's spectral radius");
    std::string sp_family = "poisson", sp_testcase = "square";
    int sp_n = 33;
    sp->add_option("--family", sp_family, "poisson | helmholtz | convdiff")->capture_default_str();
    sp->add_option("--testcase", sp_testcase, "generator name or a .pgm mask path")->capture_default_str();
    sp->add_option("--n", sp_n, "grid side length (<= 129)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (gen->parsed()) {
            write_dataset(out_dir, family_from_name(gen_family), gen_n, gen_count, seed);
            std::cout << "wrote " << gen_count << " samples to " << out_dir << "\n";
            return 0;
        }

        if (tr->parsed()) {
            TrainFlags merged;  // defaults -> config file -> explicit flags
            if (!tf.config_path.empty()) apply_config_file(tf.config_path, merged);
            auto take = [](const CLI::Option* o, auto& dst, const auto& src) {
                if (o->count() > 0) dst = src;
            };
            take(o_family, merged.family, tf.family);
            take(o_n, merged.n, tf.n);
            take(o_ds, merged.dataset_size, tf.dataset_size);
            take(o_ep, merged.epochs, tf.epochs);
            take(o_bs, merged.batch_size, tf.batch_size);
            take(o_lr, merged.lr0, tf.lr0);
            take(o_ld, merged.lr_decay, tf.lr_decay);
            take(o_ls, merged.lr_step, tf.lr_step);
            take(o_un, merged.unroll, tf.unroll);
            take(o_lo, merged.loss, tf.loss);
            take(o_de, merged.depth, tf.depth);
            take(o_ch, merged.channels, tf.channels);
            take(o_n1, merged.nu1, tf.nu1);
            take(o_n2, merged.nu2, tf.nu2);
            take(o_vf, merged.val_fraction, tf.val_fraction);
            take(o_dd, merged.data_dir, tf.data_dir);

            TrainConfig cfg;
            cfg.family = family_from_name(merged.family);
            cfg.grid_n = merged.n;
            cfg.dataset_size = merged.dataset_size;
            cfg.epochs = merged.epochs;
            cfg.batch_size = merged.batch_size;
            cfg.lr0 = merged.lr0;
            cfg.lr_decay = merged.lr_decay;
            cfg.lr_step_epochs = merged.lr_step;
            cfg.unroll = merged.unroll;
            if (merged.loss == "residual") cfg.loss = LossKind::Residual;
            else if (merged.loss == "legacy") cfg.loss = LossKind::Legacy;
            else throw CLI::ValidationError("--loss", "expected residual or legacy");
            cfg.depth = merged.depth;
            cfg.channels = merged.channels;
            cfg.nu1 = merged.nu1;
            cfg.nu2 = merged.nu2;
            cfg.val_fraction = merged.val_fraction;
            cfg.data_dir = merged.data_dir;
            cfg.seed = seed;
            cfg.threads = threads;
            cfg.out_dir = out_dir;
            cfg.quiet = !tf.verbose;
            TrainResult r = train(cfg);
            std::cout << "checkpoint: " << r.checkpoint_path << "\n"
                      << "metrics:    " << r.metrics_path << "\n"
                      << "final val relative residual: " << r.log.back().val_rel_residual << "\n";
            return 0;
        }

        if (so->parsed()) {
            UGridParams params;
            try {
                params = load_checkpoint(so_checkpoint);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kUsageError;
            }
            PdeProblem problem = build_problem(so_testcase, so_problem_dir, so_family, so_n, seed);
            SolveConfig cfg;
            cfg.tol = so_tol;
            cfg.max_iters = so_max_iters;
            cfg.nu1 = so_nu1;
            cfg.nu2 = so_nu2;
            std::optional<GridField> u0;
            if (!so_warm.empty()) u0 = read_field(so_warm);
            auto [u, rep] = solve(problem, params, cfg, std::move(u0));
            std::cout << "status " << term_name(rep.terminated) << ", iterations " << rep.iterations
                      << ", relative residual " << rep.final_error << ", wall " << rep.wall_time_ms
                      << " ms\n";
            if (!so_trace.empty()) write_trace_csv(so_trace, rep);
            if (!so_solution_out.empty()) write_field(so_solution_out, u);
            return exit_code_for(rep.terminated);
        }

        if (be->parsed()) {
            UGridParams params;
            const bool wants_ugrid =
                std::find(be_solvers.begin(), be_solvers.end(), "ugrid") != be_solvers.end();
            if (wants_ugrid) {
                if (be_checkpoint.empty()) {
                    std::cerr << "error: --checkpoint is required when benchmarking the ugrid solver\n";
                    return kUsageError;
                }
                try {
                    params = load_checkpoint(be_checkpoint);
                } catch (const std::exception& e) {
                    std::cerr << "error: " << e.what() << "\n";
                    return kUsageError;
                }
            }
            BenchOptions opt;
            opt.repeats = be_repeats;
            opt.n = be_n;
            opt.family = family_from_name(be_family);
            opt.solve.tol = be_tol;
            opt.solve.max_iters = be_max_iters;
            opt.seed = seed;
            opt.out_dir = out_dir;
            std::vector<BenchRow> rows = bench(be_cases, be_solvers, wants_ugrid ? &params : nullptr, opt);
            const std::string csv = (std::filesystem::path(out_dir) / "bench.csv").string();
            write_bench_csv(csv, rows);
            for (const BenchRow& r : rows) {
                std::cout << r.testcase << " " << r.solver << ": " << r.time_ms << " ms, error "
                          << r.final_error << ", iters " << r.iterations << ", " << term_name(r.terminated)
                          << "\n";
            }
            std::cout << "table: " << csv << "\n";
            return 0;
        }

        if (sp->parsed()) {
            PdeProblem problem = build_problem(sp_testcase, "", sp_family, sp_n, seed);
            SpectralReport rep = spectral_radius(problem);
            std::cout << "rho " << rep.rho_estimate << " (" << (rep.converged ? "converged" : "not converged")
                      << " in " << rep.iterations << " applications, family " << family_name(rep.family)
                      << ", n " << rep.n << ")\n";
            if (rep.rho_estimate >= 1.0)
                std::cout << "note: the smoother premise fails on this instance (rho >= 1)\n";
            return rep.converged ? 0 : 1;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
