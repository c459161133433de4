/// @file dataset.hpp
/// @brief Synthetic training samples (annulus geometries, piecewise-constant
///        boundary values, zero right-hand sides) and dataset persistence.

#pragma once

#include <filesystem>

#include <json.hpp>

#include "ugrid/io.hpp"
#include "ugrid/problem.hpp"
#include "ugrid/rng.hpp"

namespace ugrid {

struct Sample {
    PdeFamily family = PdeFamily::Poisson;
    InteriorMask mask;
    GridField b, f;
    GridField k2, vx, vy;
    double alpha = 1.0, beta = 0.0;

    PdeProblem problem() const {
        switch (family) {
            case PdeFamily::Poisson: return PdeProblem::poisson(f, b, mask);
            case PdeFamily::Helmholtz: return PdeProblem::helmholtz(f, b, mask, k2);
            case PdeFamily::ConvDiffReact:
                return PdeProblem::convection_diffusion(f, b, mask, vx, vy, alpha, beta);
        }
        throw std::logic_error("Sample: bad family");
    }
};

namespace detail {

struct Shape {
    bool circle = true;
    double ci = 0, cj = 0;  // center in grid coordinates
    double ri = 0, rj = 0;  // radius / half extents

    bool inside(int i, int j) const {
        if (circle) {
            const double di = (i - ci) / ri, dj = (j - cj) / ri;
            return di * di + dj * dj < 1.0;
        }
        return std::abs(i - ci) < ri && std::abs(j - cj) < rj;
    }
};

}  // namespace detail

/// Annulus-family sample: a random circle or rectangle inset from the frame
/// with a smaller hole punched inside; piecewise-constant boundary values per
/// boundary component; f == 0. Family coefficients are drawn fresh per point
/// (k^2 ~ U[0,2]) or per sample (v ~ U[-1,1] per point, alpha ~ U[0.5,2],
/// beta ~ U[0,1], which keeps 4*alpha + beta away from zero by construction).
inline Sample gen_donut_sample(int n, PdeFamily family, Rng& rng) {
    require_valid_grid_size(n, "gen_donut_sample");
    const double span = n - 1.0;
    Sample s;
    s.family = family;

    for (int attempt = 0; attempt < 100; ++attempt) {
        detail::Shape outer;
        outer.circle = rng.coin();
        outer.ci = span * rng.uniform(0.46, 0.54);
        outer.cj = span * rng.uniform(0.46, 0.54);
        outer.ri = span * rng.uniform(0.30, 0.45);
        outer.rj = outer.circle ? outer.ri : span * rng.uniform(0.30, 0.45);

        // The hole wanders anywhere inside the outer shape. Eccentric holes
        // leave thick bulk regions that survive several mask coarsenings, so
        // the deeper recursion levels see gradient signal too.
        detail::Shape hole;
        hole.circle = rng.coin();
        hole.ri = span * rng.uniform(0.06, 0.16);
        hole.rj = hole.circle ? hole.ri : span * rng.uniform(0.06, 0.16);
        const double slack = std::min(outer.ri, outer.rj) - std::max(hole.ri, hole.rj) - 0.02 * span;
        const double off_r = rng.uniform(0.0, std::max(0.0, slack));
        const double theta = rng.uniform(0.0, 6.28318530717958647692);
        hole.ci = outer.ci + off_r * std::cos(theta);
        hole.cj = outer.cj + off_r * std::sin(theta);

        InteriorMask mask(n);
        for (int i = 1; i < n - 1; ++i)
            for (int j = 1; j < n - 1; ++j)
                if (outer.inside(i, j) && !hole.inside(i, j)) mask.set_interior(i, j);
        if (mask.interior_count() == 0) continue;

        const double b_outer = rng.uniform(-1.0, 1.0);
        const double b_hole = rng.uniform(-1.0, 1.0);
        GridField b(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) b(i, j) = hole.inside(i, j) ? b_hole : b_outer;

        s.mask = std::move(mask);
        s.b = std::move(b);
        s.f = GridField(n);
        break;
    }
    if (s.mask.n() != n) throw std::runtime_error("gen_donut_sample: failed to build a nonempty interior");

    switch (family) {
        case PdeFamily::Poisson: break;
        case PdeFamily::Helmholtz: {
            s.k2 = GridField(n);
            for (double& v : s.k2.data()) v = rng.uniform(0.0, 2.0);
            break;
        }
        case PdeFamily::ConvDiffReact: {
            s.vx = GridField(n);
            s.vy = GridField(n);
            for (double& v : s.vx.data()) v = rng.uniform(-1.0, 1.0);
            for (double& v : s.vy.data()) v = rng.uniform(-1.0, 1.0);
            s.alpha = rng.uniform(0.5, 2.0);
            s.beta = rng.uniform(0.0, 1.0);
            break;
        }
    }
    return s;
}

// ---- dataset directories ---------------------------------------------------

inline PdeFamily family_from_name(const std::string& name) {
    if (name == "poisson") return PdeFamily::Poisson;
    if (name == "helmholtz") return PdeFamily::Helmholtz;
    if (name == "convdiff") return PdeFamily::ConvDiffReact;
    throw std::invalid_argument("unknown PDE family: " + name);
}

namespace detail {

inline std::string sample_file(const std::string& stem, int id) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%05d.ugf", stem.c_str(), id);
    return buf;
}

inline nlohmann::json sample_entry(const Sample& s, int id) {
    nlohmann::json e;
    e["id"] = id;
    e["mask"] = sample_file("mask", id);
    e["b"] = sample_file("b", id);
    e["f"] = sample_file("f", id);
    if (s.family == PdeFamily::Helmholtz) e["k2"] = sample_file("k2", id);
    if (s.family == PdeFamily::ConvDiffReact) {
        e["vx"] = sample_file("vx", id);
        e["vy"] = sample_file("vy", id);
        e["alpha"] = s.alpha;
        e["beta"] = s.beta;
    }
    return e;
}

}  // namespace detail

/// Writes count samples plus manifest.json; fully determined by (family, n,
/// count, seed).
inline void write_dataset(const std::string& dir, PdeFamily family, int n, int count, std::uint64_t seed) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    Rng master(seed);
    nlohmann::json manifest;
    manifest["family"] = family_name(family);
    manifest["n"] = n;
    manifest["count"] = count;
    manifest["seed"] = seed;
    manifest["samples"] = nlohmann::json::array();
    for (int id = 0; id < count; ++id) {
        Rng srng = master.fork();
        Sample s = gen_donut_sample(n, family, srng);
        const fs::path base(dir);
        write_mask((base / detail::sample_file("mask", id)).string(), s.mask);
        write_field((base / detail::sample_file("b", id)).string(), s.b);
        write_field((base / detail::sample_file("f", id)).string(), s.f);
        if (family == PdeFamily::Helmholtz) write_field((base / detail::sample_file("k2", id)).string(), s.k2);
        if (family == PdeFamily::ConvDiffReact) {
            write_field((base / detail::sample_file("vx", id)).string(), s.vx);
            write_field((base / detail::sample_file("vy", id)).string(), s.vy);
        }
        manifest["samples"].push_back(detail::sample_entry(s, id));
    }
    std::ofstream os(fs::path(dir) / "manifest.json");
    if (!os) throw std::runtime_error("cannot write manifest in " + dir);
    os << manifest.dump(2) << "\n";
}

inline nlohmann::json read_manifest(const std::string& dir) {
    std::ifstream is(std::filesystem::path(dir) / "manifest.json");
    if (!is) throw std::runtime_error("no manifest.json in " + dir);
    nlohmann::json m;
    is >> m;
    return m;
}

inline Sample load_sample(const std::string& dir, const nlohmann::json& manifest, int index) {
    namespace fs = std::filesystem;
    const nlohmann::json& e = manifest.at("samples").at(index);
    const fs::path base(dir);
    Sample s;
    s.family = family_from_name(manifest.at("family").get<std::string>());
    s.mask = read_mask((base / e.at("mask").get<std::string>()).string());
    s.b = read_field((base / e.at("b").get<std::string>()).string());
    s.f = read_field((base / e.at("f").get<std::string>()).string());
    if (s.family == PdeFamily::Helmholtz) s.k2 = read_field((base / e.at("k2").get<std::string>()).string());
    if (s.family == PdeFamily::ConvDiffReact) {
        s.vx = read_field((base / e.at("vx").get<std::string>()).string());
        s.vy = read_field((base / e.at("vy").get<std::string>()).string());
        s.alpha = e.at("alpha").get<double>();
        s.beta = e.at("beta").get<double>();
    }
    return s;
}

// ---- single-problem directories (problem.json + UGF1 fields) ---------------

inline void write_problem_dir(const std::string& dir, const PdeProblem& p) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const fs::path base(dir);
    nlohmann::json j;
    j["family"] = family_name(p.kind);
    j["n"] = p.n();
    j["mask"] = "mask.ugf";
    j["b"] = "b.ugf";
    j["f"] = "f.ugf";
    write_mask((base / "mask.ugf").string(), p.mask);
    write_field((base / "b.ugf").string(), p.b);
    write_field((base / "f.ugf").string(), p.f);
    if (p.kind == PdeFamily::Helmholtz) {
        j["k2"] = "k2.ugf";
        write_field((base / "k2.ugf").string(), p.k2);
    }
    if (p.kind == PdeFamily::ConvDiffReact) {
        j["vx"] = "vx.ugf";
        j["vy"] = "vy.ugf";
        j["alpha"] = p.alpha;
        j["beta"] = p.beta;
        write_field((base / "vx.ugf").string(), p.vx);
        write_field((base / "vy.ugf").string(), p.vy);
    }
    std::ofstream os(base / "problem.json");
    if (!os) throw std::runtime_error("cannot write problem.json in " + dir);
    os << j.dump(2) << "\n";
}

inline PdeProblem read_problem_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    const fs::path base(dir);
    std::ifstream is(base / "problem.json");
    if (!is) throw std::runtime_error("no problem.json in " + dir);
    nlohmann::json j;
    is >> j;
    const PdeFamily fam = family_from_name(j.at("family").get<std::string>());
    InteriorMask mask = read_mask((base / j.at("mask").get<std::string>()).string());
    GridField b = read_field((base / j.at("b").get<std::string>()).string());
    GridField f = read_field((base / j.at("f").get<std::string>()).string());
    switch (fam) {
        case PdeFamily::Poisson: return PdeProblem::poisson(std::move(f), std::move(b), std::move(mask));
        case PdeFamily::Helmholtz: {
            GridField k2 = read_field((base / j.at("k2").get<std::string>()).string());
            return PdeProblem::helmholtz(std::move(f), std::move(b), std::move(mask), std::move(k2));
        }
        case PdeFamily::ConvDiffReact: {
            GridField vx = read_field((base / j.at("vx").get<std::string>()).string());
            GridField vy = read_field((base / j.at("vy").get<std::string>()).string());
            return PdeProblem::convection_diffusion(std::move(f), std::move(b), std::move(mask), std::move(vx),
                                                    std::move(vy), j.at("alpha").get<double>(),
                                                    j.at("beta").get<double>());
        }
    }
    throw std::logic_error("read_problem_dir: bad family");
}

}  // namespace ugrid
