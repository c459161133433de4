#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <queue>

#include "support/oracles.hpp"
#include "ugrid/bench.hpp"
#include "ugrid/dataset.hpp"
#include "ugrid/testcases.hpp"

using namespace ugrid;

namespace {

/// Counts 4-connected components of the boundary (mask == 0) point set.
int boundary_components(const InteriorMask& m) {
    const int n = m.n();
    std::vector<int> label(static_cast<std::size_t>(n) * n, -1);
    int comps = 0;
    for (int si = 0; si < n; ++si) {
        for (int sj = 0; sj < n; ++sj) {
            if (m.interior(si, sj) || label[static_cast<std::size_t>(si) * n + sj] >= 0) continue;
            std::queue<std::pair<int, int>> q;
            q.emplace(si, sj);
            label[static_cast<std::size_t>(si) * n + sj] = comps;
            while (!q.empty()) {
                auto [i, j] = q.front();
                q.pop();
                const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
                for (int k = 0; k < 4; ++k) {
                    const int ii = i + di[k], jj = j + dj[k];
                    if (ii < 0 || jj < 0 || ii >= n || jj >= n) continue;
                    if (m.interior(ii, jj)) continue;
                    auto& lab = label[static_cast<std::size_t>(ii) * n + jj];
                    if (lab < 0) {
                        lab = comps;
                        q.emplace(ii, jj);
                    }
                }
            }
            ++comps;
        }
    }
    return comps;
}

}  // namespace

TEST_CASE("square testcases") {
    PdeProblem sq = gen_testcase("square", PdeFamily::Poisson, 65);
    CHECK(sq.mask.interior_count() == 63 * 63);
    CHECK(l2_norm(sq.f) == 0.0);
    PdeProblem psq = gen_testcase("poisson_square", PdeFamily::Poisson, 65);
    CHECK(psq.f(32, 32) != 0.0);
    CHECK(psq.mask.interior_count() == 63 * 63);
}

TEST_CASE("donut has exactly two boundary components") {
    PdeProblem p = gen_testcase("donut", PdeFamily::Poisson, 65);
    CHECK(boundary_components(p.mask) == 2);
    CHECK(p.mask.interior_count() > 0);
}

TEST_CASE("l_shape mask matches the point-in-polygon oracle everywhere") {
    const int n = 65;
    PdeProblem p = gen_testcase("l_shape", PdeFamily::Poisson, n);
    const double lo = 1.5, hi = n - 2.5;
    const double mid_i = 0.52 * (n - 1), mid_j = 0.48 * (n - 1);
    const std::vector<std::pair<double, double>> poly = {{lo, lo},      {lo, mid_j},  {mid_i, mid_j},
                                                         {mid_i, hi},   {hi, hi},     {hi, lo}};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const bool inside = oracle::point_in_polygon(i, j, poly);
            const bool interior = p.mask.interior(i, j);
            const bool frame = i == 0 || j == 0 || i == n - 1 || j == n - 1;
            CHECK(interior == (inside && !frame));
        }
}

TEST_CASE("star mask matches an independent ray-cast and is nonempty") {
    const int n = 65;
    PdeProblem p = gen_testcase("star", PdeFamily::Poisson, n);
    CHECK(p.mask.interior_count() > 100);
    const auto poly = detail::star_polygon(n);
    std::vector<std::pair<double, double>> opoly(poly.begin(), poly.end());
    int mismatches = 0;
    for (int i = 1; i < n - 1; ++i)
        for (int j = 1; j < n - 1; ++j)
            if (p.mask.interior(i, j) != oracle::point_in_polygon(i, j, opoly)) ++mismatches;
    CHECK(mismatches == 0);
}

TEST_CASE("noisy testcase is deterministic per seed and noisy in b") {
    PdeProblem a = gen_testcase("noisy", PdeFamily::Poisson, 33, 5);
    PdeProblem b = gen_testcase("noisy", PdeFamily::Poisson, 33, 5);
    CHECK(a.b.data() == b.b.data());
    CHECK(a.mask.data() == b.mask.data());
    PdeProblem c = gen_testcase("noisy", PdeFamily::Poisson, 33, 6);
    CHECK(a.b.data() != c.b.data());
    CHECK(l2_norm(a.f) > 0.0);  // noisy right-hand side
}

TEST_CASE("sharp_feature boundary mixes jumps and smooth bumps") {
    const int n = 65;
    PdeProblem p = gen_testcase("sharp_feature", PdeFamily::Poisson, n);
    CHECK(p.mask.interior_count() == (n - 2) * (n - 2));
    CHECK(l2_norm(p.f) == 0.0);
    // largest step between adjacent frame points is a genuine jump
    double max_step = 0.0;
    for (int j = 1; j < n; ++j) max_step = std::max(max_step, std::abs(p.b(0, j) - p.b(0, j - 1)));
    CHECK(max_step > 0.5);
}

TEST_CASE("family coefficients ride along for every geometry") {
    PdeProblem h = gen_testcase("donut", PdeFamily::Helmholtz, 33, 3);
    CHECK(h.k2.n() == 33);
    PdeProblem c = gen_testcase("star", PdeFamily::ConvDiffReact, 33, 3);
    CHECK(c.vx.n() == 33);
    CHECK(4 * c.alpha + c.beta > 0.0);
}

TEST_CASE("masks load back from pgm") {
    namespace fs = std::filesystem;
    PdeProblem p = gen_testcase("donut", PdeFamily::Poisson, 33);
    const std::string path = (fs::temp_directory_path() / "tc.pgm").string();
    write_mask_pgm(path, p.mask);
    PdeProblem q = testcase_from_pgm(path, PdeFamily::Poisson);
    CHECK(q.mask.data() == p.mask.data());
    fs::remove(path);
}

TEST_CASE("unknown testcase is rejected") {
    CHECK_THROWS_AS(gen_testcase("banana", PdeFamily::Poisson, 33), std::invalid_argument);
}

TEST_CASE("bench harness") {
    BenchOptions opt;
    opt.repeats = 2;
    opt.n = 33;
    opt.solve.max_iters = 8;
    opt.solve.tol = 1e-4;
    opt.out_dir = (std::filesystem::temp_directory_path() / "bench_out").string();
    const std::vector<std::string> cases = {"square", "donut"};
    const std::vector<std::string> solvers = {"jacobi", "mg"};
    std::vector<BenchRow> rows = bench(cases, solvers, nullptr, opt);
    REQUIRE(rows.size() == cases.size() * solvers.size());
    for (const BenchRow& r : rows) {
        CHECK(std::isfinite(r.time_ms));
        CHECK(r.iterations >= 1);
    }
    const std::string csv = (std::filesystem::path(opt.out_dir) / "bench.csv").string();
    write_bench_csv(csv, rows);
    std::ifstream is(csv);
    std::string header;
    std::getline(is, header);
    CHECK(header == "testcase,solver,time_ms,final_error,iterations,terminated");
    CHECK(std::filesystem::exists(std::filesystem::path(opt.out_dir) / "trace_square_mg.csv"));
    std::filesystem::remove_all(opt.out_dir);
    CHECK_THROWS_AS(bench(cases, {"ugrid"}, nullptr, opt), std::invalid_argument);
}

TEST_CASE("datasets round trip deterministically") {
    namespace fs = std::filesystem;
    const std::string dir = (fs::temp_directory_path() / "ds_a").string();
    const std::string dir2 = (fs::temp_directory_path() / "ds_b").string();
    write_dataset(dir, PdeFamily::Helmholtz, 17, 5, 99);
    write_dataset(dir2, PdeFamily::Helmholtz, 17, 5, 99);

    nlohmann::json m = read_manifest(dir);
    CHECK(m.at("count").get<int>() == 5);
    CHECK(m.at("samples").size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(fs::exists(fs::path(dir) / m["samples"][i]["k2"].get<std::string>()));
        Sample s = load_sample(dir, m, i);
        CHECK_NOTHROW(s.problem());
        CHECK(l2_norm(s.f) == 0.0);
    }
    // byte-identical across runs with the same seed
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::ifstream fa(entry.path(), std::ios::binary);
        std::ifstream fb(fs::path(dir2) / entry.path().filename(), std::ios::binary);
        std::string ba((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
        std::string bb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
        CHECK(ba == bb);
    }
    fs::remove_all(dir);
    fs::remove_all(dir2);
}

TEST_CASE("problem directories round trip") {
    namespace fs = std::filesystem;
    const std::string dir = (fs::temp_directory_path() / "prob_dir").string();
    PdeProblem p = gen_testcase("donut", PdeFamily::ConvDiffReact, 17, 1);
    write_problem_dir(dir, p);
    PdeProblem q = read_problem_dir(dir);
    CHECK(q.kind == p.kind);
    CHECK(q.b.data() == p.b.data());
    CHECK(q.vx.data() == p.vx.data());
    CHECK(q.alpha == p.alpha);
    fs::remove_all(dir);
}
