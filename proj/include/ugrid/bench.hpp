/// @file bench.hpp
/// @brief Comparison harness: runs each solver on each testcase R times,
///        reports the median wall time, and writes per-run convergence maps.

#pragma once

#include <filesystem>

#include "ugrid/solver.hpp"
#include "ugrid/testcases.hpp"

namespace ugrid {

struct BenchRow {
    std::string testcase;
    std::string solver;
    double time_ms = 0.0;  // median over repeats
    double final_error = 0.0;
    int iterations = 0;
    TermStatus terminated = TermStatus::MaxIters;
};

struct BenchOptions {
    int repeats = 10;  // desk-scale default
    int n = 257;
    PdeFamily family = PdeFamily::Poisson;
    SolveConfig solve;
    std::uint64_t seed = 0;
    std::string out_dir;  // when set, trace CSVs are written here
};

/// Solvers are named "jacobi", "mg", and "ugrid" (the last needs params).
inline std::vector<BenchRow> bench(const std::vector<std::string>& testcases,
                                   const std::vector<std::string>& solvers, const UGridParams* params,
                                   const BenchOptions& opt) {
    namespace fs = std::filesystem;
    if (!opt.out_dir.empty()) fs::create_directories(opt.out_dir);
    std::vector<BenchRow> rows;
    for (const std::string& tc : testcases) {
        const PdeProblem problem = gen_testcase(tc, opt.family, opt.n, opt.seed);
        if (!opt.out_dir.empty()) {
            write_mask_pgm((fs::path(opt.out_dir) / ("mask_" + tc + ".pgm")).string(), problem.mask);
        }
        for (const std::string& sv : solvers) {
            std::vector<double> times;
            SolveReport last;
            for (int rep = 0; rep < std::max(1, opt.repeats); ++rep) {
                std::pair<GridField, SolveReport> out = [&] {
                    if (sv == "jacobi") return jacobi_solve(problem, opt.solve);
                    if (sv == "mg") return mg_solve(problem, opt.solve);
                    if (sv == "ugrid") {
                        if (!params) throw std::invalid_argument("bench: the ugrid solver needs a checkpoint");
                        return solve(problem, *params, opt.solve);
                    }
                    throw std::invalid_argument("bench: unknown solver " + sv);
                }();
                times.push_back(out.second.wall_time_ms);
                last = std::move(out.second);
            }
            std::sort(times.begin(), times.end());
            BenchRow row;
            row.testcase = tc;
            row.solver = sv;
            row.time_ms = times[times.size() / 2];
            row.final_error = last.final_error;
            row.iterations = last.iterations;
            row.terminated = last.terminated;
            rows.push_back(row);
            if (!opt.out_dir.empty()) {
                write_trace_csv((fs::path(opt.out_dir) / ("trace_" + tc + "_" + sv + ".csv")).string(), last);
            }
        }
    }
    return rows;
}

inline void write_bench_csv(const std::string& path, const std::vector<BenchRow>& rows) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "testcase,solver,time_ms,final_error,iterations,terminated\n";
    os.precision(12);
    for (const BenchRow& r : rows) {
        os << r.testcase << "," << r.solver << "," << r.time_ms << "," << r.final_error << ","
           << r.iterations << "," << term_name(r.terminated) << "\n";
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace ugrid
